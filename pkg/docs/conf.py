# -*- coding: utf-8 -*-
#
# pricecap documentation build configuration file
#
import sys, os

# autodoc imports the package from the source tree
sys.path.insert(0, os.path.abspath('..'))

from pricecap import __version__

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.mathjax', 'sphinx.ext.viewcode']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'pricecap'
copyright = u'2014, Roman Haritonov'

version = __version__
release = __version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'
autodoc_member_order = 'bysource'

html_theme = 'default'
htmlhelp_basename = 'pricecapdoc'

latex_documents = [
    ('index', 'pricecap.tex', u'pricecap Documentation', u'Roman Haritonov', 'manual'),
]

man_pages = [
    ('index', 'pricecap', u'pricecap Documentation', [u'Roman Haritonov'], 1),
]
