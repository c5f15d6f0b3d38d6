"""Fractal bipartitions of the square lattice and their toric-code entanglement."""

from .families import FAMILIES, get_family, predicted_counts
from .oracle import (Bipartition, TorusCode, bipartition_from_region, gstate_entropy_formula,
                     log2_GAB, statevector_entropy, tension_weights)
from .region import Cell, Edge, FeatureCounts, Region, count_features
from .scaling import box_counting_dimension, check_gamma_bound, emit_table1, gamma_sequence

__version__ = "0.1.0"

__all__ = [
    "FAMILIES", "get_family", "predicted_counts",
    "Bipartition", "TorusCode", "bipartition_from_region", "gstate_entropy_formula",
    "log2_GAB", "statevector_entropy", "tension_weights",
    "Cell", "Edge", "FeatureCounts", "Region", "count_features",
    "box_counting_dimension", "check_gamma_bound", "emit_table1", "gamma_sequence",
]
