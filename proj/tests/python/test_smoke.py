import numpy as np
import pytest

import voxsie


def two_cubes():
    return {
        "format": "voxsie-structure",
        "version": 1,
        "voxel_size": 1.0,
        "origin": [0, 0, 0],
        "background_eps_r": 1,
        "conductors": [
            {"id": 1, "primitive": {"shape": "box", "lo": [0, 0, 0], "hi": [2, 2, 2]}},
            {"id": 2, "primitive": {"shape": "box", "lo": [3, 0, 0], "hi": [5, 2, 2]}},
        ],
        "dielectrics": [
            {"eps_r": 3, "primitive": {"shape": "box", "lo": [0, 0, 2], "hi": [5, 2, 3]}},
        ],
    }


def test_presets_listed():
    names = voxsie.preset_names()
    assert "coated-sphere" in names
    doc = voxsie.preset("coated-sphere", 0.1)
    assert doc["format"] == "voxsie-structure"
    assert doc["conductors"]


def test_extract_matches_dense():
    r = voxsie.extract(two_cubes(), rre=1e-12, tucker_tol=0.0)
    c = np.asarray(r["capacitance"])
    assert r["conductor_ids"] == [1, 2]
    assert c.shape == (2, 2)
    assert c[0, 0] > 0 and c[0, 1] < 0
    assert np.allclose(c, c.T, rtol=1e-6)
    d = voxsie.dense_capacitance(two_cubes())
    assert np.max(np.abs(c - d)) <= 1e-6 * np.max(np.abs(d))
    assert r["forward_ffts"] == 3 * r["mvms"]


def test_coated_sphere_close_to_formula():
    r = voxsie.extract(voxsie.preset("coated-sphere", 0.05))
    exact = voxsie.coated_sphere_capacitance(0.25, 0.5, 2.0)
    assert abs(r["capacitance"][0, 0] - exact) / exact < 0.05
    assert all(r["converged"])


def test_bad_input_raises():
    with pytest.raises(ValueError):
        voxsie.extract("{not json")
    doc = two_cubes()
    doc["voxel_size"] = -1
    with pytest.raises(ValueError):
        voxsie.extract(doc)
