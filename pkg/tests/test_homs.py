import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from modfix.catalog import builtin_algebra
from modfix.exceptions import DomainError, UnsupportedSymmetryError
from modfix.homs import (
    HomCandidate,
    candidates,
    conjugate_candidate,
    enumerate_su2_to_un,
    homomorphism_residual,
    partitions,
)
from modfix.linalg import complexify, matrix_exp, realify


def brute_partitions(n):
    """Multisets of positive parts summing to n, by exhaustive product search."""
    found = set()
    for k in range(1, n + 1):
        for combo in itertools.product(range(1, n + 1), repeat=k):
            if sum(combo) == n:
                found.add(tuple(sorted(combo, reverse=True)))
    return found


@pytest.mark.parametrize("n", range(1, 7))
def test_partitions_match_brute_force(n):
    assert set(partitions(n)) == brute_partitions(n)
    assert len(list(partitions(n))) == len(brute_partitions(n))


def test_su2_to_u1_is_zero_map():
    (c,) = enumerate_su2_to_un(1)
    assert np.all(c.matrix == 0)


def test_su2_to_u3_partition_labels():
    labels = [c.label for c in enumerate_su2_to_un(3)]
    assert sorted(labels) == sorted(f"partition:{p}" for p in brute_partitions(3))
    assert len(labels) == 3


def test_su2_to_u5_count():
    assert len(enumerate_su2_to_un(5)) == len(brute_partitions(5)) == 7


@pytest.mark.parametrize("n", range(1, 7))
def test_every_candidate_is_homomorphism(n):
    for c in enumerate_su2_to_un(n):
        assert c.residual <= 1e-9
        assert not c.checked_trivially


def test_irrep_dims_are_irreducible():
    # the commutant of an irreducible image set is one-dimensional (Schur)
    (c,) = [c for c in enumerate_su2_to_un(3) if c.label == "partition:(3,)"]
    imgs = [complexify(c.image(i)) for i in range(3)]
    n = imgs[0].shape[0]
    rows = [np.kron(m, np.eye(n)) - np.kron(np.eye(n), m.T) for m in imgs]
    assert n * n - np.linalg.matrix_rank(np.vstack(rows), tol=1e-9) == 1


def test_onedim_is_checked_trivially():
    c = HomCandidate(builtin_algebra("circle"), builtin_algebra("u(2)"), np.arange(4.0))
    assert c.checked_trivially
    assert c.residual == 0.0
    assert c.matrix.shape == (4, 1)


def test_non_homomorphism_rejected():
    su2 = builtin_algebra("su(2)")
    with pytest.raises(DomainError):
        HomCandidate(su2, su2, 2 * np.eye(3))
    assert homomorphism_residual(su2, su2, 2 * np.eye(3)) > 0.5


def test_user_strategy_passthrough():
    circle, u2 = builtin_algebra("circle"), builtin_algebra("u(2)")
    rho0 = [0.0, 0.0, 1.0, -1.0]
    out = list(candidates(circle, u2, {"kind": "user", "elements": [rho0]}))
    assert len(out) == 1
    np.testing.assert_array_equal(out[0].matrix[:, 0], rho0)


def test_u2_integer_weight_grid():
    out = list(candidates(builtin_algebra("circle"), builtin_algebra("u(2)"),
                          {"kind": "integer_weights", "range": [-2, 2]}))
    assert len(out) == 25
    u2 = builtin_algebra("u(2)")
    pairs = {tuple(c.matrix[list(u2.cartan), 0]) for c in out}
    assert pairs == set(itertools.product(range(-2, 3), repeat=2))


def test_su2_cartan_grid_on_e3():
    out = list(candidates(builtin_algebra("circle"), builtin_algebra("su(2)"),
                          {"kind": "cartan_grid", "range": [-1, 1], "step": 0.5, "cartan": [2]}))
    assert len(out) == 5
    np.testing.assert_allclose([c.matrix[2, 0] for c in out], [-1, -0.5, 0, 0.5, 1])


def test_torus_candidates_commute():
    out = list(candidates(builtin_algebra("torus(2)"), builtin_algebra("u(2)"),
                          {"kind": "integer_weights", "range": [0, 1]}))
    assert len(out) == 16
    assert all(c.residual <= 1e-9 for c in out)


def test_unsupported_sources():
    for key in ("so(3)", "su(3)", "u(2)"):
        with pytest.raises(UnsupportedSymmetryError, match="unsupported symmetry source"):
            candidates(builtin_algebra(key), builtin_algebra("u(3)"), {"kind": "user"})


def test_conjugate_identity_is_same():
    for c in enumerate_su2_to_un(3):
        out = conjugate_candidate(c, np.eye(6))
        np.testing.assert_allclose(out.matrix, c.matrix, atol=1e-15)


def test_permutation_conjugation_permutes_blocks():
    (c,) = [c for c in enumerate_su2_to_un(3) if c.label == "partition:(2, 1)"]
    perm = np.zeros((3, 3))
    perm[[2, 0, 1], [0, 1, 2]] = 1.0
    g = realify(perm.astype(complex))
    out = conjugate_candidate(c, g)
    assert out.residual <= 1e-9
    for i in range(3):
        np.testing.assert_allclose(out.image(i), g @ c.image(i) @ g.T, atol=1e-14)
    # the trivial summand moved from slot 2 to slot 1
    for i in range(3):
        z = complexify(out.image(i))
        assert np.all(z[1, :] == 0) and np.all(z[:, 1] == 0)


@given(seed=st.integers(0, 2**32 - 1))
@settings(max_examples=25, deadline=None)
def test_conjugate_roundtrip(seed):
    rng = np.random.default_rng(seed)
    u3 = builtin_algebra("u(3)")
    g = matrix_exp(u3.matrix(rng.normal(size=9)))
    for c in enumerate_su2_to_un(3):
        out = conjugate_candidate(c, g)
        assert out.residual <= max(1e-9, 10 * c.residual)
        back = conjugate_candidate(out, np.linalg.inv(g))
        assert np.abs(back.matrix - c.matrix).max() <= 1e-10
