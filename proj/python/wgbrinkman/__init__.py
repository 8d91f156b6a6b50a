"""Weak Galerkin solver for the 2D Brinkman equations on polygonal meshes.

Thin Python layer over the C++ core: mesh construction for the two built-in
refinement families, manufactured-solution solves and convergence studies,
benchmark data evaluation, and the library self-check.
"""

from wgbrinkman._core import (
    Mesh,
    MeshMetrics,
    benchmark_pressure,
    benchmark_source,
    benchmark_velocity,
    build_mesh,
    convergence,
    convergence_csv,
    selfcheck,
    solve_brinkman,
    __version__,
)

__all__ = [
    "Mesh",
    "MeshMetrics",
    "benchmark_pressure",
    "benchmark_source",
    "benchmark_velocity",
    "build_mesh",
    "convergence",
    "convergence_csv",
    "selfcheck",
    "solve_brinkman",
    "__version__",
]
