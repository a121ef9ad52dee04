# liseq documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.
#
# All configuration values have a default; values that are commented out
# serve to show the default.

# Notes on liseq-specific style:
# 1. For rst headings, we use the following convention, based on
#    https://www.sphinx-doc.org/en/master/usage/restructuredtext/basics.html#sections:
#        # with overline, for parts
#        * with overline, for chapters
#        = for sections
#        - for subsections
#        ^ for subsubsections
#        " for paragraphs

import os
import sys

# If extensions (or modules to document with autodoc) are in another directory,
# add these directories to sys.path here.
sys.path.insert(0, os.path.abspath('../src'))

# -- General configuration ------------------------------------------------

# If your documentation needs a minimal Sphinx version, state it here.
needs_sphinx = '4.2.0'

# Add any Sphinx extension module names here, as strings.
extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.coverage',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinxarg.ext',  # argparse extension
]

# Add any paths that contain templates here, relative to this directory.
templates_path = ['_templates']

# Accept custom section names to be parsed for numpy-style docstrings
# of parameters.
napoleon_use_param = False

# The suffix(es) of source filenames.
source_suffix = '.rst'

# The master toctree document.
master_doc = 'index'

# General information about the project.
project = 'liseq'
author = 'The liseq developers'
copyright = f'2024, {author}'

# The version info for the project you're documenting, acts as replacement for
# |version| and |release|, also used in various other places throughout the
# built documents.
try:
    from liseq import __version__
except ImportError:
    __version__ = 'unknown'

version = __version__
release = __version__

language = 'en'

# List of patterns, relative to source directory, that match files and
# directories to ignore when looking for source files.
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']

# The name of the Pygments (syntax highlighting) style to use.
pygments_style = 'sphinx'

todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'

# Output file base name for HTML help builder.
htmlhelp_basename = 'liseq_doc'

# -- Options for LaTeX output ---------------------------------------------

latex_documents = [
    (master_doc, 'liseq.tex', 'liseq Documentation', author, 'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [(master_doc, 'liseq', 'liseq Documentation', [author], 1)]

# -- Options for Texinfo output -------------------------------------------

texinfo_documents = [
    (
        master_doc,
        'liseq',
        'liseq Documentation',
        author,
        'liseq',
        'Lazy and eager sequentialization of parameterized concurrent programs.',
        'Miscellaneous',
    ),
]

# Example configuration for intersphinx: refer to the Python standard library.
intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'lark': ('https://lark-parser.readthedocs.io/en/stable/', None),
}
