"""Entanglement extraction from trapped bosons: Python front end to the C++ core."""

from ._core import (
    ConfigError,
    NumericalError,
    accept,
    block_moments,
    fidelity_closed_form,
    negativity,
    negativity_closed_form,
    orbital,
    overlap_table,
    sample,
    sweep_csv,
)

__all__ = [
    "ConfigError",
    "NumericalError",
    "accept",
    "block_moments",
    "fidelity_closed_form",
    "negativity",
    "negativity_closed_form",
    "orbital",
    "overlap_table",
    "sample",
    "sweep_csv",
]
