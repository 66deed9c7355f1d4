"""Discrete conformal structures on ideally triangulated surfaces with boundary."""

from ._core import (
    DomainError,
    Error,
    EtaOutOfRange,
    JacobianNotPD,
    LengthMismatch,
    NotAdmissible,
    NotSPD,
    ParseError,
    Surface,
    ValidationError,
    admissibility,
    calabi_energy,
    curvature,
    default_base,
    edge_length_alpha,
    edge_length_u,
    energy,
    face_jacobian,
    global_jacobian,
    hexagon_angles,
    load_surface,
    parse_surface,
    relative_volume,
    run_flow,
    solve_prescribed,
    spd_power,
    volume_hessian,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
