# Configuration file for the Sphinx documentation builder.

extensions = [
    "sphinx.ext.viewcode",
]

templates_path = ["_templates"]
source_suffix = ".rst"
master_doc = "index"

project = "vortex_sheet"
copyright = "2024-2025, vortex_sheet developers"
author = "vortex_sheet developers"

version = "latest"
release = "latest"
language = "en"
exclude_patterns = []
pygments_style = "sphinx"
todo_include_todos = False

html_theme = "sphinx_rtd_theme"
htmlhelp_basename = "VortexSheetdoc"

latex_elements = {}
latex_documents = [
    (
        master_doc,
        "VortexSheet.tex",
        "vortex_sheet Documentation",
        author,
        "manual",
    ),
]

man_pages = [(master_doc, "vortex-sheet", "vortex_sheet Documentation", [author], 1)]

texinfo_documents = [
    (
        master_doc,
        "VortexSheet",
        "vortex_sheet Documentation",
        author,
        "VortexSheet",
        "Normal-mode stability of relativistic vortex sheets",
        "Miscellaneous",
    ),
]
