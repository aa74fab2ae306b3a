"""
``pynd`` computes (r, s) nucleus decompositions of undirected graphs.
"""
# PEP0440 compatible formatted version, see:
# https://www.python.org/dev/peps/pep-0440/
#
# Generic release markers:
# X.Y
# X.Y.Z # For bugfix releases
#
# Dev branch marker is: 'X.Y.dev' or 'X.Y.devN' where N is an integer.
#

__version__ = '0.1.0'
