"""Exact-arithmetic multiple-point extraction and verification.

Curves on square-tiled surfaces and triangulated surfaces in the flat
3-torus are represented with rational coordinates.  The package locates
their double points, double curves and triple points, and checks the mod-2
identity relating image-side multiple-point classes to source-side data
(Herbert's identity), together with the algebraic laws of the resulting
operations on bordism classes.
"""

from .rational import Rat, rat, parse_rational, format_rational

__all__ = ["Rat", "rat", "parse_rational", "format_rational"]

__version__ = "0.1.0"
