import json
from pathlib import Path

import streamlit as st

from model.errors import PruneError
from model.graph import build_graph
from preprocessor.parser import parse_graph_text

GRAPH_DIR = Path(__file__).resolve().parent.parent / "data" / "graphs"


@st.cache_data
def bundled_graphs():
    """name -> (description, file text) for the graphs shipped in data/graphs."""
    graphs = {}
    for path in sorted(GRAPH_DIR.glob("*.json")):
        text = path.read_text(encoding="utf-8")
        graphs[path.stem] = (json.loads(text).get("description", ""), text)
    return graphs


def graph_input(key):
    """Pick a bundled graph or upload one; returns the built Graph or None."""
    source = st.radio("Graph source", ["Bundled example", "Upload"], horizontal=True,
                      key=f"{key}_source")
    if source == "Upload":
        uploaded = st.file_uploader("Graph file (.json)", type=["json"], key=f"{key}_upload")
        if uploaded is None:
            st.info("📂 Upload a graph description to continue.")
            return None
        text, name = uploaded.getvalue().decode("utf-8"), uploaded.name
    else:
        graphs = bundled_graphs()
        name = st.selectbox("Example", list(graphs), key=f"{key}_example")
        description, text = graphs[name]
        if description:
            st.caption(description)
        name = f"{name}.json"

    try:
        return build_graph(parse_graph_text(text, source=name, base=GRAPH_DIR).document)
    except PruneError as exc:
        st.error(f"🚨 {type(exc).__name__}: {exc}")
        return None
