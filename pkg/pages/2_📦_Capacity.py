import streamlit as st
import ui.render_footer as footer
import ui.render_header as header
from builder.report import capacity_rows, render_capacity
from fifo.capacity import trace_layout
from model.errors import InvalidParams
from runtime.config import DEFAULT_C_FACTOR
from ui.graph_input import graph_input

st.set_page_config(page_title="Capacity", page_icon="📦", layout="centered", initial_sidebar_state="collapsed")

st.sidebar.title("Capacity")
st.sidebar.markdown("FIFO capacities for a buffering factor, with the slot layout of each FIFO.")

header.render_header()
st.title("📦 Capacity")

graph = graph_input("capacity")
if graph is not None:
    c_factor = st.slider("Buffering factor C", min_value=2, max_value=8, value=DEFAULT_C_FACTOR)
    try:
        rows = capacity_rows(graph, c_factor)
    except InvalidParams as exc:
        st.error(f"🚨 {exc}")
        st.stop()

    st.table([{"fifo": row["fifo"], "r": row["plan"].r, "Q": row["plan"].Q, "B": row["token_bytes"],
               "slots": row["plan"].slots, "bytes": row["plan"].bytes,
               "layout": "copy" if row["plan"].needs_wrap_copy else "ring",
               "copy": row["plan"].describe_copy()} for row in rows])
    st.metric("Total buffer", f"{sum(row['plan'].bytes for row in rows)} bytes")

    with st.expander("🔍 Slot accesses over one cycle"):
        fifo_id = st.selectbox("FIFO", [row["fifo"] for row in rows])
        plan = next(row["plan"] for row in rows if row["fifo"] == fifo_id)
        st.table([{"access": op, "slots": ", ".join(map(str, slots))}
                  for op, slots in trace_layout(plan, 1)])

    st.download_button("Download table", render_capacity(graph, c_factor),
                       file_name=f"{graph.name}.capacity.txt")

footer.render_footer("📦 Capacity")
