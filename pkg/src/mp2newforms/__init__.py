"""Exact conductors, fixed-vector dimensions and newforms for genuine representations of Mp2(Q_p)."""

from .newforms import (
    UNKNOWN,
    EvenWeil,
    LevelQuery,
    OddWeil,
    PrincipalSeries,
    Steinberg,
    Supercuspidal,
    conductor,
    conductor_min,
    describe,
    dim_fixed,
    newform_profile,
    parse_descriptor,
    whittaker_nonvanishing,
)
from .theta import theta_conductor_check, theta_lift

__all__ = [
    "UNKNOWN",
    "EvenWeil",
    "LevelQuery",
    "OddWeil",
    "PrincipalSeries",
    "Steinberg",
    "Supercuspidal",
    "conductor",
    "conductor_min",
    "describe",
    "dim_fixed",
    "newform_profile",
    "parse_descriptor",
    "theta_conductor_check",
    "theta_lift",
    "whittaker_nonvanishing",
]
