import streamlit as st

def render_header():
    st.write("")
    st.caption("<p style='text-align: center;'>Check, analyze, size and run PRUNE dataflow graphs in one place</p>", unsafe_allow_html=True)
    st.divider()
