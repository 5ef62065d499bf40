"""Capacitance extraction for voxelized conductor/dielectric structures."""

import json

from ._voxsie import (
    InputError,
    coated_sphere_capacitance,
    preset_names,
)
from . import _voxsie

__all__ = [
    "InputError",
    "coated_sphere_capacitance",
    "dense_capacitance",
    "extract",
    "preset",
    "preset_names",
]


def preset(name, voxel_size=0.0):
    """Structure document (dict) for a named preset."""
    return json.loads(_voxsie.preset(name, voxel_size))


def _as_json(structure):
    return structure if isinstance(structure, str) else json.dumps(structure)


def extract(structure, **options):
    """Extract the capacitance matrix.

    `structure` is a structure document (dict or JSON string). Options:
    rre, restart, max_iterations, preconditioner, tucker_tol, cache_dir.
    """
    return _voxsie.extract(_as_json(structure), **options)


def dense_capacitance(structure):
    """Capacitance from a direct LU solve (small structures only)."""
    return _voxsie.dense_capacitance(_as_json(structure))
