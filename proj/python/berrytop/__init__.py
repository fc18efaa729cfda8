"""Berry curvature, monopole gauge fields and semiclassical dynamics for SU(2) spinor systems."""

from ._core import (
    BerryError,
    ParseError,
    berry_phase,
    builtin_systems,
    curvature,
    ensemble_separation,
    field,
    flux_disk,
    flux_sphere_monopole,
    gauge,
    hopf_pullback,
    map_grid,
    parse_expression,
    run_cli,
    verify,
    winding_number,
)

__all__ = [
    "BerryError",
    "ParseError",
    "berry_phase",
    "builtin_systems",
    "curvature",
    "ensemble_separation",
    "field",
    "flux_disk",
    "flux_sphere_monopole",
    "gauge",
    "hopf_pullback",
    "map_grid",
    "parse_expression",
    "run_cli",
    "verify",
    "winding_number",
]
