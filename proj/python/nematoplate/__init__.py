"""Effective 2D models of nematic liquid-crystal-elastomer bilayer plates."""

try:
    from ._nematoplate import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # in-tree build: module on PYTHONPATH next to the build dir
    from _nematoplate import *  # noqa: F401,F403
