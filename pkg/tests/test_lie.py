import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from modfix.catalog import builtin_algebra, catalog_keys, spin_irrep
from modfix.exceptions import DomainError, NotInNormalizerError
from modfix.lie import LieAlgebra, adjoint, bracket, commutator
from modfix.linalg import J2, complexify, matrix_exp, nullspace, rank_decision, realify

PAULI = np.array([
    [[0, 1], [1, 0]],
    [[0, -1j], [1j, 0]],
    [[1, 0], [0, -1]],
])

finite = st.floats(-1.0, 1.0, allow_nan=False)


def test_su2_bracket_e1_e2_is_e3():
    # hand oracle: (-i/2)^2 [s1, s2] = (-1/4)(2i s3) = -(i/2) s3
    su2 = builtin_algebra("su(2)")
    e = [su2.basis_element(k) for k in range(3)]
    assert bracket(e[0], e[1]).allclose(e[2], atol=1e-14)
    expected = realify(-0.5j * PAULI[2])
    np.testing.assert_allclose(commutator(e[0].matrix, e[1].matrix), expected, atol=1e-14)


def test_su2_basis_is_minus_half_i_pauli():
    su2 = builtin_algebra("su(2)")
    for k in range(3):
        np.testing.assert_allclose(complexify(su2.basis[k]), -0.5j * PAULI[k], atol=1e-15)


@pytest.mark.parametrize("key", ["su(2)", "u(3)", "so(4)"])
@given(coords=arrays(float, 16, elements=finite))
@settings(max_examples=20, deadline=None)
def test_bracket_self_is_zero(key, coords):
    alg = builtin_algebra(key)
    a = alg.element(coords[:alg.dim])
    assert np.abs(bracket(a, a).coords).max() <= 1e-15


@pytest.mark.parametrize("key", ["u(1)", "torus(3)", "circle", "r"])
def test_abelian_brackets_vanish(key, rng):
    alg = builtin_algebra(key)
    a, b = alg.element(rng.normal(size=alg.dim)), alg.element(rng.normal(size=alg.dim))
    assert np.all(bracket(a, b).coords == 0)
    assert alg.is_abelian()


@pytest.mark.parametrize("key,dim", [("su(2)", 3), ("u(3)", 9), ("so(3)", 3), ("su(3)", 8),
                                     ("torus(2)", 2), ("circle", 1), ("r", 1)])
def test_catalog_dimensions(key, dim):
    assert builtin_algebra(key).dim == dim


@pytest.mark.parametrize("key", catalog_keys())
def test_catalog_invariants(key):
    alg = builtin_algebra(key)
    c = alg.structure
    assert np.array_equal(c, -c.transpose(1, 0, 2))
    res = alg.residuals
    assert res["jacobi"] <= 1e-10
    assert res["bracket_consistency"] <= 1e-10
    gram = np.einsum("iab,jab->ij", alg.basis, alg.basis)
    assert np.linalg.matrix_rank(gram) == alg.dim
    # Jacobi at matrix level, recomputed independently of the stored constants
    e = alg.basis
    for i in range(min(alg.dim, 4)):
        for j in range(min(alg.dim, 4)):
            for k in range(min(alg.dim, 4)):
                cyc = (commutator(e[i], commutator(e[j], e[k]))
                       + commutator(e[j], commutator(e[k], e[i]))
                       + commutator(e[k], commutator(e[i], e[j])))
                assert np.abs(cyc).max() <= 1e-10


@given(coords=arrays(float, 9, elements=st.floats(-10, 10)))
@settings(max_examples=50, deadline=None)
def test_coords_roundtrip(coords):
    u3 = builtin_algebra("u(3)")
    m = u3.matrix(coords)
    np.testing.assert_allclose(m, np.tensordot(coords, u3.basis, axes=1), atol=0)
    back, resid = u3.coords_of(m)
    assert np.abs(back - coords).max() <= 1e-12
    assert resid <= 1e-12


def test_from_matrix_rejects_outside():
    su2 = builtin_algebra("su(2)")
    with pytest.raises(DomainError):
        su2.from_matrix(np.eye(4))


def test_custom_algebra_validation():
    so3 = builtin_algebra("so(3)")
    alg = LieAlgebra.from_basis("mine", so3.basis)
    assert alg.same_as(so3) or alg.dim == 3
    with pytest.raises(DomainError):
        LieAlgebra.from_basis("dup", np.array([so3.basis[0], so3.basis[0]]))
    # span of e1, e2 in so(3) is not closed under the bracket
    with pytest.raises(DomainError):
        LieAlgebra.from_basis("open", so3.basis[:2])


def test_matrix_exp_closed_forms():
    np.testing.assert_array_equal(matrix_exp(np.zeros((3, 3))), np.eye(3))
    np.testing.assert_allclose(matrix_exp(np.diag([0.3, -2.0])), np.diag(np.exp([0.3, -2.0])),
                               rtol=1e-14)
    for t in (0.1, 1.0, np.pi, 7.5):
        rot = np.array([[np.cos(t), -np.sin(t)], [np.sin(t), np.cos(t)]])
        np.testing.assert_allclose(matrix_exp(t * J2), rot, atol=1e-13)


@given(a=arrays(float, (4, 4), elements=st.floats(-1.25, 1.25)))
@settings(max_examples=60, deadline=None)
def test_matrix_exp_matches_scipy(a):
    np.testing.assert_allclose(matrix_exp(a), scipy.linalg.expm(a), atol=1e-10, rtol=1e-10)


@given(a=arrays(float, (3, 3), elements=st.floats(-1.6, 1.6)))
@settings(max_examples=60, deadline=None)
def test_matrix_exp_inverse(a):
    # entries in [-1.6, 1.6] keep the Frobenius norm at most 4.8
    assert np.abs(matrix_exp(a) @ matrix_exp(-a) - np.eye(3)).max() <= 1e-9


@given(a=arrays(float, (3, 3), elements=st.floats(-1, 1)),
       s=st.floats(-2, 2), t=st.floats(-2, 2))
@settings(max_examples=60, deadline=None)
def test_matrix_exp_one_parameter(a, s, t):
    lhs = matrix_exp((s + t) * a)
    rhs = matrix_exp(s * a) @ matrix_exp(t * a)
    assert np.abs(lhs - rhs).max() <= 1e-9 * max(1.0, np.abs(lhs).max())


def test_adjoint_examples(rng):
    su2 = builtin_algebra("su(2)")
    a = su2.element(rng.normal(size=3))
    assert adjoint(np.eye(4), a).allclose(a, atol=1e-14)
    e3 = su2.basis_element(2)
    g = matrix_exp(0.7 * e3.matrix)
    assert adjoint(g, e3).allclose(e3, atol=1e-14)


@pytest.mark.parametrize("key", ["su(2)", "u(2)", "so(3)"])
def test_adjoint_is_automorphism(key, rng):
    alg = builtin_algebra(key)
    for _ in range(5):
        a = alg.element(rng.normal(size=alg.dim))
        b = alg.element(rng.normal(size=alg.dim))
        g = matrix_exp(alg.matrix(rng.normal(size=alg.dim)))
        lhs = adjoint(g, bracket(a, b))
        rhs = bracket(adjoint(g, a), adjoint(g, b))
        assert lhs.allclose(rhs, atol=1e-10)


def test_adjoint_outside_normalizer():
    su2 = builtin_algebra("su(2)")
    g = np.diag([2.0, 2.0, 1.0, 1.0])
    with pytest.raises(NotInNormalizerError):
        adjoint(g, su2.basis_element(0))


def test_spin_irrep_trivial():
    imgs = spin_irrep(0)
    assert imgs.shape == (3, 1, 1)
    assert np.all(imgs == 0)


def test_spin_irrep_defining():
    su2 = builtin_algebra("su(2)")
    imgs = spin_irrep(1)
    for k in range(3):
        np.testing.assert_allclose(realify(imgs[k]), su2.basis[k], atol=1e-15)


def test_spin_one_cartan_eigenvalues():
    # oracle: spin-1 ladder J+ with entries sqrt(2), J3 = diag(1, 0, -1)
    jp = np.diag([np.sqrt(2), np.sqrt(2)], 1)
    j3 = np.diag([1.0, 0.0, -1.0])
    j1 = (jp + jp.T) / 2
    ev = np.sort_complex(np.linalg.eigvals(spin_irrep(2)[2]))
    np.testing.assert_allclose(ev, [-1j, 0, 1j], atol=1e-12)
    ref = np.sort_complex(np.linalg.eigvals(-1j * j3))
    np.testing.assert_allclose(ev, ref, atol=1e-12)
    # same spectrum for every basis image since they are conjugate
    np.testing.assert_allclose(np.sort_complex(np.linalg.eigvals(spin_irrep(2)[0])),
                               np.sort_complex(np.linalg.eigvals(-1j * j1)), atol=1e-12)


@pytest.mark.parametrize("two_j", range(0, 8))
def test_spin_irrep_representation_property(two_j):
    imgs = spin_irrep(two_j)
    c = builtin_algebra("su(2)").structure
    for i in range(3):
        np.testing.assert_allclose(imgs[i], -imgs[i].conj().T, atol=1e-14)
        for j in range(3):
            lhs = imgs[i] @ imgs[j] - imgs[j] @ imgs[i]
            rhs = np.tensordot(c[i, j], imgs, axes=1)
            assert np.abs(lhs - rhs).max() <= 1e-10


def test_spin_irrep_rejects_negative():
    with pytest.raises(DomainError):
        spin_irrep(-1)


def test_rank_decision_gap():
    sv = np.array([3.0, 1.0, 1e-12, 1e-14])
    d = rank_decision(sv, 4, 1e-8)
    assert d.rank == 2
    assert d.rank_gap == pytest.approx(1.0 / 1e-12)
    basis, dec = nullspace(np.diag(sv), 1e-8)
    assert basis.shape == (4, 2)
    assert dec.rank == 2


def test_rank_decision_warns_on_small_gap():
    # geometric decay: every gap is a factor of about 3
    sv = np.logspace(0, -12, 25)
    d = rank_decision(sv, 25, 1e-8)
    assert d.ill_conditioned(0.1)
