"""Extrinsic geometry of graph hypersurfaces in product metrics g + dt^2 and
conformally product metrics phi^-2 (g + dt^2).

The package computes shape operators, mean curvature, level-set slice data
and the associated trace/minor identities, checks a family of curvature
inequalities with equality diagnostics, runs a sliding cone-barrier
construction, and evaluates two explicit surfaces of revolution used as
boundary cases. Everything is deterministic for a fixed seed.
"""

__version__ = "0.1.0"

from . import (  # noqa: F401
    barrier,
    conformal,
    errors,
    fields,
    fieldspec,
    graphgeom,
    inequality,
    metrics,
    reporting,
    revolution,
    syminv,
    util,
)
