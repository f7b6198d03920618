# -*- coding: utf-8 -*-
#
# radialwave documentation build configuration file.

import sys
import os

sys.path.insert(0, os.path.abspath('..'))

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.autosummary',
    'sphinx.ext.mathjax'
]

autoclass_content = 'both'

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'radialwave'
copyright = u'2026, radialwave contributors'

version = '1.0'
release = '1.0.0'

exclude_patterns = ['_build']
pygments_style = 'sphinx'

html_theme = 'nature'
htmlhelp_basename = 'radialwavedoc'

latex_documents = [
  ('index', 'radialwave.tex', u'radialwave Documentation',
   u'radialwave contributors', 'manual'),
]

man_pages = [
    ('index', 'radialwave', u'radialwave Documentation',
     [u'radialwave contributors'], 1)
]
