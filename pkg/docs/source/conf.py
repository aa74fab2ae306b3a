# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# http://www.sphinx-doc.org/en/master/config

# -- Path setup --------------------------------------------------------------

import os
import sys

sys.path.insert(0, os.path.abspath('../..'))


# -- Project information -----------------------------------------------------
# General information about the project.

project = "pynd"
copyright = "2026, pynd developers"
author = "pynd developers"

# The full version, including alpha/beta/rc tags.
from pynd import __version__
release = __version__


# -- General configuration ---------------------------------------------------

# The master toctree document.
master_doc = 'index'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.viewcode',
    'sphinx_gallery.gen_gallery',
    'numpydoc',
]

# see https://github.com/numpy/numpydoc/issues/69
numpydoc_show_class_members = False

# If true, '()' will be appended to :func: etc. cross-reference text.
add_function_parentheses = False

exclude_patterns = ['_build']

autodoc_default_options = {'members': True, 'inherited-members': True}

# generate autosummary even if no references
autosummary_generate = True


# -- Options for HTML output -------------------------------------------------

pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'

# Output file base name for HTML help builder.
htmlhelp_basename = 'pynd-docs'


# ------ sphinx gallery ----------------------------------------------------

sphinx_gallery_conf = {
     # path to your example scripts
     'examples_dirs': 'examples',
     # path where to save gallery generated examples
     'gallery_dirs': 'auto_examples',
}
