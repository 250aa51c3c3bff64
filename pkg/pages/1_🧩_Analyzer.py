import streamlit as st
import ui.render_footer as footer
import ui.render_header as header
from analyzer.consistency import analyze
from builder.report import render_analysis
from ui.graph_input import graph_input

st.set_page_config(page_title="Analyzer", page_icon="🧩", layout="centered", initial_sidebar_state="collapsed")

st.sidebar.title("Analyzer")
st.sidebar.markdown("Design rules, dynamic components, schedules and buffer bounds of a graph.")

header.render_header()
st.title("🧩 Analyzer")

graph = graph_input("analyzer")
if graph is not None:
    report = analyze(graph)
    if report.consistent:
        st.success(f"✅ {graph.name} is consistent")
    else:
        st.error(f"🚨 {graph.name} is not consistent")
        for diagnostic in report.diagnostics:
            st.markdown(f"- **{diagnostic.kind}** {diagnostic.message}")

    col1, col2, col3 = st.columns(3)
    col1.metric("Actors", len(graph.actors))
    col2.metric("FIFOs", len(graph.fifos))
    col3.metric("DPGs", len(report.dpgs))

    for dpg in report.dpgs:
        with st.expander(f"🔀 {dpg.name}: {dpg.x} → {dpg.y}, controlled by {dpg.q}"):
            st.table([{"DC": dc.label, "actors": dc.membership(),
                       "inputs": ", ".join(dc.in_drps), "outputs": ", ".join(dc.out_drps)}
                      for dc in dpg.dcs])

    if report.bounds:
        st.subheader("Buffer bounds")
        st.table([{"fifo": fifo_id, "β": beta}
                  for fifo_id, beta in sorted(report.bounds.beta.items())])

    st.download_button("Download report", render_analysis(report),
                       file_name=f"{graph.name}.analysis.txt")

footer.render_footer("🧩 Analyzer")
