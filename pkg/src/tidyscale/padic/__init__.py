"""Vector groups Q_p^n with a rational linear endomorphism."""

from .backend import (
    PadicInstance,
    SlopeSplit,
    adapted_tidy_lattice,
    chart_check,
    core_part_padic,
    decompose_padic,
    scale_padic,
    slope_split,
    stage_stabilized_scale,
)
from .lattice import Lattice, image, intersect, lattice_index, lattice_sum, preimage_meet
from .poly import NewtonPolygon, charpoly, newton_polygon

__all__ = [
    "Lattice",
    "NewtonPolygon",
    "PadicInstance",
    "SlopeSplit",
    "adapted_tidy_lattice",
    "chart_check",
    "charpoly",
    "core_part_padic",
    "decompose_padic",
    "image",
    "intersect",
    "lattice_index",
    "lattice_sum",
    "newton_polygon",
    "preimage_meet",
    "scale_padic",
    "slope_split",
    "stage_stabilized_scale",
]
