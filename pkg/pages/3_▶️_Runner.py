import streamlit as st
import ui.render_footer as footer
import ui.render_header as header
from analyzer.consistency import analyze
from builder.report import render_run
from model.errors import PruneError
from runtime.config import DEFAULT_C_FACTOR, DEFAULT_SOURCE_FIRINGS, RuntimeConfig
from runtime.executor import instantiate, run
from runtime.interpreter import interpret
from ui.graph_input import graph_input

st.set_page_config(page_title="Runner", page_icon="▶️", layout="centered", initial_sidebar_state="collapsed")

st.sidebar.title("Runner")
st.sidebar.markdown("Runs a consistent graph on one thread per actor and checks it against the reference interpreter.")

header.render_header()
st.title("▶️ Runner")

graph = graph_input("runner")
if graph is not None:
    report = analyze(graph)
    if not report.consistent:
        st.error("🚨 Only consistent graphs can run. Open the Analyzer to see why this one is not.")
        st.stop()

    col1, col2 = st.columns(2)
    with col1:
        iterations = st.number_input("Source firings", min_value=0, value=DEFAULT_SOURCE_FIRINGS)
        c_factor = st.number_input("Buffering factor C", min_value=2, value=DEFAULT_C_FACTOR)
    with col2:
        seed = st.number_input("Seed (0 keeps the graph's own seeds)", min_value=0, value=0)
        jitter_ms = st.number_input("Jitter (ms)", min_value=0.0, value=0.0, step=0.5)
    check_oracle = st.checkbox("Compare with the reference interpreter", value=True)

    if st.button("Run", type="primary"):
        config = RuntimeConfig(source_firings=int(iterations), c_factor=int(c_factor),
                               seed=int(seed) or None, jitter_ms=float(jitter_ms))
        try:
            with st.spinner("Running..."):
                result = run(instantiate(graph, config=config, report=report))
                match = None
                if check_oracle:
                    reference = interpret(graph, config=config, report=report)
                    match = reference.sink_digests == result.sink_digests
        except PruneError as exc:
            st.error(f"🚨 {type(exc).__name__}: {exc}")
            st.stop()

        if match is True:
            st.success("✅ Sink digests match the reference interpreter")
        elif match is False:
            st.error("🚨 Sink digests differ from the reference interpreter")

        st.metric("Wall time", f"{result.wall_time * 1000:.1f} ms")
        st.bar_chart({fifo_id: [peak] for fifo_id, peak in sorted(result.max_occupancy.items())})
        st.table([{"fifo": fifo_id, "peak": peak, "β": result.bounds[fifo_id],
                   "slots": result.slots[fifo_id]}
                  for fifo_id, peak in sorted(result.max_occupancy.items())])
        for sink, data in result.outputs.items():
            with st.expander(f"📥 {sink}: {len(data)} bytes"):
                st.code(data[:256].hex(" "))

        st.download_button("Download run report", render_run(result, match),
                           file_name=f"{graph.name}.run.txt")

footer.render_footer("▶️ Runner")
