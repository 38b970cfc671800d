import numpy as np
import pytest

from cachecalc import linalg
from cachecalc.gf import DEFAULT_PRIME
from cachecalc.linalg import Subspace

P = DEFAULT_PRIME


@pytest.fixture
def rng():
    return np.random.default_rng(2024)


def test_rank_small_cases():
    assert linalg.rank([[1, 2], [2, 4]], 7) == 1
    assert linalg.rank(linalg.identity(5), P) == 5
    assert linalg.rank(np.zeros((3, 4), dtype=np.int64), P) == 0


def test_matmul_mod_matches_python_ints(rng):
    a = linalg.random_matrix(rng, 5, 7, P)
    b = linalg.random_matrix(rng, 7, 3, P)
    want = [[sum(int(a[i, k]) * int(b[k, j]) for k in range(7)) % P for j in range(3)] for i in range(5)]
    assert linalg.matmul_mod(a, b, P).tolist() == want


def test_rref_is_canonical(rng):
    base = linalg.random_matrix(rng, 4, 9, P)
    mix = linalg.random_matrix(rng, 4, 4, P)
    assert linalg.rank(mix, P) == 4
    other = linalg.matmul_mod(mix, base, P)
    assert Subspace.from_rows(base, p=P) == Subspace.from_rows(other, p=P)
    assert hash(Subspace.from_rows(base, p=P)) == hash(Subspace.from_rows(other, p=P))


def test_rref_pivots_are_unit_columns(rng):
    R, piv = linalg.rref(linalg.random_matrix(rng, 3, 6, P), P)
    for i, c in enumerate(piv):
        col = np.zeros(len(piv), dtype=np.int64)
        col[i] = 1
        assert (R[:, c] == col).all()


def test_in_rowspan():
    gens = np.array([[1, 0, 0], [0, 1, 0]])
    assert linalg.in_rowspan([[3, 5, 0]], gens, P)
    assert not linalg.in_rowspan([[0, 0, 1]], gens, P)
    assert linalg.in_rowspan(np.zeros((0, 3), dtype=np.int64), gens, P)


def test_fresh_row_outside_deficient_span(rng):
    gens = linalg.random_matrix(rng, 3, 8, P)
    assert not linalg.in_rowspan(linalg.random_matrix(rng, 1, 8, P), gens, P)


def test_intersect_with_zero_and_full(rng):
    U = Subspace.from_rows(linalg.random_matrix(rng, 3, 6, P), p=P)
    assert linalg.intersect(U, Subspace.zero(6, P)).dim == 0
    assert linalg.intersect(U, Subspace.full(6, P)) == U


def test_intersect_of_coordinate_planes():
    U = Subspace.from_rows([[1, 0, 0], [0, 1, 0]], p=P)
    V = Subspace.from_rows([[0, 1, 0], [0, 0, 1]], p=P)
    assert linalg.intersect(U, V) == Subspace.from_rows([[0, 1, 0]], p=P)


def test_generic_intersection_dimension():
    # two random 36-dim subspaces of F_p^60 meet in 2*36 - 60 = 12 dims
    dims = set()
    for seed in range(100):
        rng = np.random.default_rng(seed)
        U = Subspace.from_columns(linalg.random_matrix(rng, 60, 36, P), P)
        V = Subspace.from_columns(linalg.random_matrix(rng, 60, 36, P), P)
        dims.add(linalg.intersect(U, V).dim)
    assert dims == {12}


def test_intersection_lies_in_both(rng):
    U = Subspace.from_columns(linalg.random_matrix(rng, 20, 13, P), P)
    V = Subspace.from_columns(linalg.random_matrix(rng, 20, 11, P), P)
    W = linalg.intersect(U, V)
    assert W.dim == 4
    assert U.contains(W.basis) and V.contains(W.basis)


def test_dimension_mismatch():
    with pytest.raises(linalg.DimensionMismatch):
        linalg.sum_space(Subspace.zero(3, P), Subspace.zero(4, P))


def test_corollary_rank_concentration():
    B, full, trials = 20, 0, 1000
    rng = np.random.default_rng(11)
    for t in range(trials):
        n, m = (int(x) for x in rng.integers(1, 4, size=2))
        E = linalg.random_matrix(rng, n * B, m * B, P)
        full += linalg.rank(E, P) == min(n, m) * B
    assert full / trials >= 0.99


class TestComplementBasis:
    def test_completes_a_basis(self):
        whole = Subspace.full(3, P)
        part = Subspace.from_rows([[1, 0, 0]], p=P)
        rows = linalg.complement_basis(whole, part, 2)
        assert rows.shape == (2, 3)
        assert linalg.rank(np.vstack([part.basis, rows]), P) == 3

    def test_want_zero(self):
        rows = linalg.complement_basis(Subspace.full(3, P), Subspace.zero(3, P), 0)
        assert rows.shape == (0, 3)

    def test_whole_equals_part(self):
        whole = Subspace.full(3, P)
        with pytest.raises(linalg.InsufficientDimension):
            linalg.complement_basis(whole, whole, 1)

    def test_random_rows_stay_inside(self, rng):
        whole = Subspace.from_columns(linalg.random_matrix(rng, 12, 7, P), P)
        part = Subspace.from_rows(whole.basis[:2], p=P)
        rows = linalg.complement_basis(whole, part, 5, rng)
        assert whole.contains(rows)
        assert linalg.rank(np.vstack([part.basis, rows]), P) == 7
