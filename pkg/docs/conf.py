# -*- coding: utf-8 -*-
#
# rankerg documentation build configuration file.

import os

on_rtd = os.environ.get('READTHEDOCS', None) == 'True'

if not on_rtd:  # only import and set the theme if we're building docs locally
    import sphinx_rtd_theme
    html_theme = 'sphinx_rtd_theme'
    html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
else:
    html_theme = 'default'

import rankerg

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
    'sphinx.ext.napoleon',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'rankerg'
copyright = u'2024, The rankerg developers'
version = rankerg.__version__
release = version

exclude_patterns = ['_build']
pygments_style = 'sphinx'
html_static_path = ['_static']
htmlhelp_basename = 'rankergdoc'

latex_documents = [
  ('index', 'rankerg.tex', u'rankerg Documentation',
   u'The rankerg developers', 'manual'),
]

man_pages = [
    ('index', 'rankerg', u'rankerg Documentation',
     [u'The rankerg developers'], 1)
]

intersphinx_mapping = {
    'python': ('https://docs.python.org/3', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
}
