"""Numerical laboratory for the interface construction: leaf geometry, the
Gamma-set multigraph, Ihara zeta functions, surgery invariance, holonomy and
twisted cohomology of stratified complexes."""

from __future__ import annotations

__version__ = "0.1.0"

from . import errors  # noqa: E402,F401
