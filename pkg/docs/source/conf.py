# Sphinx configuration for the qfibound documentation.

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))

from qfibound import __version__

project = 'qfibound'
copyright = '2024, the qfibound developers'
author = 'the qfibound developers'
version = '.'.join(__version__.split('.')[:2])
release = __version__

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.githubpages'
]
autodoc_mock_imports = ['h5py', 'matplotlib']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = []
pygments_style = 'sphinx'

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']
htmlhelp_basename = 'qfibounddoc'

latex_documents = [
    (master_doc, 'qfibound.tex', 'qfibound Documentation', author, 'manual'),
]
man_pages = [
    (master_doc, 'qfibound', 'qfibound Documentation', [author], 1)
]
