import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nitsche_bands import (Circle, Flower, GenericLevelSet, KPath, KPoint, LatticeSpec,
                           levelset_eval, reciprocal_basis, sample_path)
from nitsche_bands.exceptions import ConfigurationError, DegenerateLatticeError
from nitsche_bands.geometry import path_from_labels


def test_reciprocal_square():
    k1, k2 = reciprocal_basis((1, 0), (0, 1))
    np.testing.assert_allclose(k1, [2 * math.pi, 0], atol=1e-15)
    np.testing.assert_allclose(k2, [0, 2 * math.pi], atol=1e-15)


def test_reciprocal_scaled():
    k1, k2 = reciprocal_basis((2, 0), (0, 2))
    np.testing.assert_allclose(k1, [math.pi, 0], atol=1e-15)
    np.testing.assert_allclose(k2, [0, math.pi], atol=1e-15)


def test_reciprocal_hexagonal():
    # hand solution of k_i . a_j = 2 pi delta_ij
    k1, k2 = reciprocal_basis((1, 0), (0.5, math.sqrt(3) / 2))
    np.testing.assert_allclose(k1, [2 * math.pi, -2 * math.pi / math.sqrt(3)], rtol=1e-14)
    np.testing.assert_allclose(k2, [0, 4 * math.pi / math.sqrt(3)], rtol=1e-14, atol=1e-14)


def test_degenerate_lattice():
    with pytest.raises(DegenerateLatticeError):
        reciprocal_basis((1, 2), (2, 4))
    with pytest.raises(ConfigurationError):
        LatticeSpec(np.array([1.0, 0.0]), np.array([1.0, 1e-16]))


def test_duality_random_lattices():
    rng = np.random.default_rng(7)
    done = 0
    while done < 1000:
        a1, a2 = rng.normal(size=2) * rng.uniform(0.1, 10), rng.normal(size=2) * rng.uniform(0.1, 10)
        if abs(a1[0] * a2[1] - a1[1] * a2[0]) < 1e-3 * np.linalg.norm(a1) * np.linalg.norm(a2):
            continue
        k1, k2 = reciprocal_basis(a1, a2)
        dots = np.array([[k1 @ a1, k1 @ a2], [k2 @ a1, k2 @ a2]])
        np.testing.assert_allclose(dots, 2 * math.pi * np.eye(2), atol=1e-10 * 2 * math.pi)
        done += 1


def test_lattice_properties():
    lat = LatticeSpec.square(2.0)
    assert lat.is_square and lat.a == 2.0 and lat.cell_area == 4.0
    assert not LatticeSpec(np.array([1.0, 0]), np.array([0.5, 0.8])).is_square
    G = lat.reciprocal_vectors(1)
    assert G.shape == (9, 2)
    with pytest.raises(ValueError):
        lat.a1[0] = 3.0


def test_sample_path_midpoint():
    path = KPath((KPoint(0, 0, "O"), KPoint(math.pi, 0, "X")), samples_per_segment=2)
    s = sample_path(path)
    assert [a for a, _ in s] == pytest.approx([0, math.pi / 2, math.pi])
    np.testing.assert_allclose([kp.k for _, kp in s], [[0, 0], [math.pi / 2, 0], [math.pi, 0]])


def test_sample_path_endpoints_only():
    path = KPath((KPoint(0, 0), KPoint(1, 1)), samples_per_segment=1)
    s = sample_path(path)
    assert len(s) == 2
    np.testing.assert_allclose(s[1][1].k, [1, 1])


def test_square_path_corners():
    s = sample_path(KPath.square_irreducible(1.0, samples_per_segment=1))
    arcs = [a for a, _ in s]
    assert arcs == pytest.approx([0, math.pi, 2 * math.pi, 2 * math.pi + math.pi * math.sqrt(2)])
    assert [kp.label for _, kp in s] == ["O", "X", "M", "O"]


@given(st.integers(1, 12))
@settings(max_examples=12, deadline=None)
def test_sample_path_monotone_and_exact_vertices(n):
    path = KPath.square_irreducible(1.0, n)
    s = sample_path(path)
    arcs = np.array([a for a, _ in s])
    assert len(s) == path.n_samples
    assert np.all(np.diff(arcs) > 0)
    verts = [s[i * n][1] for i in range(4)]
    for got, want in zip(verts, path.vertices):
        assert got == want


def test_kpath_validation():
    with pytest.raises(ConfigurationError):
        KPath((KPoint(0, 0),))
    with pytest.raises(ConfigurationError):
        KPath((KPoint(0, 0), KPoint(1, 0)), samples_per_segment=0)
    with pytest.raises(ConfigurationError):
        KPoint(float("nan"), 0)


def test_path_from_labels():
    p = path_from_labels(["G", "X", "M"], a=2.0, samples_per_segment=3)
    np.testing.assert_allclose(p.vertices[2].k, [math.pi / 2, math.pi / 2])
    with pytest.raises(ConfigurationError):
        path_from_labels(["O", "K"])


def test_circle_values():
    c = Circle((0.5, 0.5), 0.25)
    assert levelset_eval(c, (0.5, 0.5)) == pytest.approx(-0.25)
    assert levelset_eval(c, (0.75, 0.5)) == pytest.approx(0.0, abs=1e-15)


def test_flower_value():
    f = Flower((0.5, 0.5))
    assert levelset_eval(f, (0.5 + 9 / 14, 0.5)) == pytest.approx(1 / 7, abs=1e-15)


def test_circle_sign_convention_radial():
    c = Circle((0.5, 0.5), 0.25)
    theta = np.linspace(0, 2 * np.pi, 37)
    for r, sign in ((np.linspace(0, 0.2499, 20), -1), (np.linspace(0.2501, 0.49, 20), 1)):
        pts = 0.5 + r[:, None, None] * np.stack([np.cos(theta), np.sin(theta)], axis=-1)[None]
        assert np.all(np.sign(c(pts)) == sign)


def test_published_flower_leaves_cell():
    with pytest.raises(ConfigurationError):
        Flower().check_inside_cell(LatticeSpec.square())
    Flower.scaled(0.5).check_inside_cell(LatticeSpec.square())


def test_generic_levelset():
    g = GenericLevelSet(lambda x: x[..., 0] - 0.3)
    assert levelset_eval(g, (0.5, 0.1)) == pytest.approx(0.2)
    with pytest.raises(ConfigurationError):
        g.check_inside_cell(LatticeSpec.square())
