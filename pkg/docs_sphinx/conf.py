# -*- coding: utf-8 -*-
#
# rerankd documentation build configuration file
#
# This file is execfile()d with the current directory set to its
# containing dir.

import sys
import os

sys.path.insert(0, os.path.abspath('.'))
sys.path.insert(0, os.path.abspath('..'))

rerankd_dir = os.path.abspath(os.path.join(os.path.dirname(__file__),
                                           '..', 'rerankd'))
# -- General configuration ------------------------------------------------

needs_sphinx = '1.7'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.napoleon',
    'sphinx.ext.doctest',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

# General information about the project.
project = u'rerankd'
copyright = u'2024, rerankd authors'
author = u'rerankd authors'

# The version info for the project you're documenting, acts as replacement for
# |version| and |release|, also used in various other places throughout the
# built documents.
import rerankd
version = rerankd.__version__
if version is None:
    try:
        from setuptools_scm import get_version
        version = get_version(relative_to=rerankd_dir)
    except (ImportError, LookupError):
        version = 'unknown'
release = version

language = None
exclude_patterns = ['_build']

# The reST default role (used for this markup: `text`) to use for all
# documents.
default_role = 'obj'

pygments_style = 'sphinx'

# A list of ignored prefixes for module index sorting.
modindex_common_prefix = ['rerankd.']

# -- Options for HTML output ----------------------------------------------

html_theme = 'alabaster'
html_static_path = []
htmlhelp_basename = 'rerankddoc'

# -- Options for LaTeX / manual page output -------------------------------

latex_documents = [
  (master_doc, 'rerankd.tex', u'rerankd Documentation',
   author, 'manual'),
]

man_pages = [
    (master_doc, 'rerankd', u'rerankd Documentation',
     [author], 1)
]

intersphinx_mapping = {'python': ('https://docs.python.org/3/', None),
                       'matplotlib': ('https://matplotlib.org/stable/', None),
                       'numpy': ('https://numpy.org/doc/stable/', None)}


# Create api docs
def run_apidoc(_):
    try:
        import sphinx.ext.apidoc as apidoc
    except ImportError:
        import sphinx.apidoc as apidoc
    apidoc.main(argv=['-f', '-e', '-M', '-o', './reference',
                      rerankd_dir, os.path.join(rerankd_dir, 'tests')])


def setup(app):
    app.connect('builder-inited', run_apidoc)
