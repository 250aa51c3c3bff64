import streamlit as st
import ui.render_footer as footer
import ui.render_header as header

# Page configuration
st.set_page_config(page_title="Home", page_icon="🏠", layout="centered", initial_sidebar_state="collapsed")

# Sidebar configuration
st.sidebar.title("Home")
st.sidebar.markdown("Welcome to the prunekit workbench! Use the sidebar to navigate through the tools available.")

# Header
header.render_header()

# Intro Section
st.title("🔀 prunekit workbench")
st.divider()
st.header("❔ What You Can Do")
st.markdown("<br>", unsafe_allow_html=True)

col1, col2 = st.columns([0.4, 0.6], vertical_alignment="center", gap="small")
col3, col4 = st.columns([0.4, 0.6], vertical_alignment="center", gap="small")
col5, col6 = st.columns([0.4, 0.6], vertical_alignment="center", gap="small")

with col1:
    st.page_link("pages/1_🧩_Analyzer.py", label = "Analyzer", icon = "🧩", use_container_width=True)
with col2:
    st.markdown("Checks the design rules and decides whether a graph is consistent.")

with col3:
    st.page_link("pages/2_📦_Capacity.py", label = "Capacity", icon = "📦", use_container_width=True)
with col4:
    st.markdown("Sizes every FIFO and shows its slot layout and wrap copy.")

with col5:
    st.page_link("pages/3_▶️_Runner.py", label = "Runner", icon = "▶️", use_container_width=True)
with col6:
    st.markdown("Runs a graph on the threaded runtime and compares it with the interpreter.")

# Sidebar hint
st.markdown("---")
st.info("📂 The same tools are on the command line: `python prune.py --help`.")

# Footer
footer.render_footer("🏠 Home")
