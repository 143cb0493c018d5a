import numpy as np
import pytest

from nitsche_bands import Circle, LatticeSpec, Tag, build_dofmap, build_uniform, classify, shape_eval
from nitsche_bands.mesh import ElementClass
from nitsche_bands.space import barycentric


@pytest.fixture(scope="module")
def square():
    return LatticeSpec.square()


def test_homogeneous_dof_count(square):
    m = build_uniform(square, 2)
    d = build_dofmap(m, classify(m, None))
    assert d.n_dofs == 8


def test_all_cut_doubles_everything(square):
    N = 5
    m = build_uniform(square, N)
    cl = ElementClass(tags=np.full(m.n_triangles, Tag.CUT, dtype=np.int8), node_phi=np.ones(m.n_nodes))
    assert build_dofmap(m, cl).n_dofs == 4 * N * N


def test_set_union_oracle_circle_n16(square):
    m = build_uniform(square, 16)
    cl = classify(m, Circle())
    d = build_dofmap(m, cl)
    nodes = {1: set(), -1: set()}
    for e, t in enumerate(cl.tags):
        for v in m.triangles[e]:
            canon = (int(v % 17) % 16, int(v // 17) % 16)
            if t in (Tag.PLUS, Tag.CUT):
                nodes[1].add(canon)
            if t in (Tag.MINUS, Tag.CUT):
                nodes[-1].add(canon)
    assert d.n_dofs == 2 * len(nodes[1]) + 2 * len(nodes[-1])
    assert d.n_side(1) == 2 * len(nodes[1])


def test_numbering_is_side_major(square):
    m = build_uniform(square, 8)
    d = build_dofmap(m, classify(m, Circle()))
    n_plus = d.n_side(1)
    assert np.all(d.side_support[:n_plus] == 1) and np.all(d.side_support[n_plus:] == -1)
    assert np.all(np.diff(d.dof_node[:n_plus:2]) > 0)
    inactive = d.element_dofs[-1][classify(m, Circle()).tags == Tag.PLUS]
    assert np.all(inactive == -1)


def test_periodic_dofs_shared(square):
    N = 4
    m = build_uniform(square, N)
    d = build_dofmap(m, classify(m, None))
    used = d.element_dofs[1]
    # every element references exactly 6 valid dofs below n_dofs
    assert used.shape == (2 * N * N, 6) and used.min() >= 0 and used.max() < d.n_dofs
    # node (N, j) and (0, j) map to the same dof
    right, left = N + (N + 1) * 1, (N + 1) * 1
    ids = {}
    for e, tri in enumerate(m.triangles):
        for loc, v in enumerate(tri):
            ids.setdefault(int(v), set()).add(int(used[e, 2 * loc]))
    assert ids[right] == ids[left]


def test_shape_at_vertices():
    tri = np.array([[0.2, 0.1], [1.0, 0.3], [0.4, 0.9]])
    for i in range(3):
        s = shape_eval(tri, tri[i])
        np.testing.assert_allclose(s.values, np.eye(3)[i], atol=1e-14)


def test_shape_at_centroid():
    tri = np.array([[0.2, 0.1], [1.0, 0.3], [0.4, 0.9]])
    np.testing.assert_allclose(shape_eval(tri, tri.mean(axis=0)).values, 1 / 3)


def test_unit_triangle_gradient():
    s = shape_eval([[0, 0], [1, 0], [0, 1]], [0.3, 0.3])
    np.testing.assert_allclose(s.grads[0], [-1, -1])


def test_degenerate_shape():
    with pytest.raises(ValueError):
        shape_eval([[0, 0], [1, 1], [2, 2]], [0.5, 0.5])


def test_partition_of_unity_all_elements(square, rng):
    m = build_uniform(square, 8)
    coords = m.element_coords()
    x = coords.mean(axis=1)[:, None, :] + 0.01 * rng.normal(size=(len(coords), 4, 2))
    lam, grads = barycentric(coords, x)
    np.testing.assert_allclose(lam.sum(axis=2), 1.0, atol=1e-13)
    np.testing.assert_allclose(grads.sum(axis=1), 0.0, atol=1e-11)


def test_interpolation_reproduces_linear_field(square):
    # a field linear inside each element is recovered from nodal values
    m = build_uniform(square, 4)
    f = lambda p: np.stack([1 + 2 * p[..., 0] - p[..., 1], 3 * p[..., 1]], axis=-1)
    coords = m.element_coords()
    rng = np.random.default_rng(0)
    bary = rng.dirichlet(np.ones(3), size=(len(coords), 5))
    x = np.einsum("mqi,mij->mqj", bary, coords)
    lam, _ = barycentric(coords, x)
    interp = np.einsum("mqi,mij->mqj", lam, f(coords))
    np.testing.assert_allclose(interp, f(x), atol=1e-12)
