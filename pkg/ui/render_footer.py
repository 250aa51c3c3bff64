import streamlit as st

def render_footer(current_page_label: str):
    st.markdown("<br><br><br>", unsafe_allow_html=True)

    page_links = {
        "🏠 Home": "Home.py",
        "🧩 Analyzer": "pages/1_🧩_Analyzer.py",
        "📦 Capacity": "pages/2_📦_Capacity.py",
        "▶️ Runner": "pages/3_▶️_Runner.py",
    }

    page_links.pop(current_page_label, None)  # Remove the current page from the links

    st.divider()

    st.caption(
    "<p style='text-align:center'>🔀 <strong>prunekit</strong> is a toolkit for PRUNE graphs: design rules, consistency, FIFO capacities and a threaded runtime.</p>"
    "<p style='text-align:center'>Built with Streamlit, NetworkX, NumPy and Jinja2.</p>",
    unsafe_allow_html=True)

    st.divider()

    st.markdown("#### 🔗 Other Tools")
    for label, path in page_links.items():
        st.page_link(path, label=label, use_container_width=True)

    st.divider()
