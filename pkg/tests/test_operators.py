import numpy as np
import pytest

from lacunary import linalg
from lacunary.dissociation import SetMask
from lacunary.fourier import FuncC, constant, delta, dft, inner
from lacunary.group import GroupSpec, parse_group
from lacunary.operators import (
    S,
    T,
    adjoint_chain,
    apply,
    apply_S,
    apply_T,
    chain_matrix,
    dual_restricted_basis,
    full_matrix,
    is_positive_definite,
    is_singular,
    multiplier,
    restricted,
    support_basis,
)

from helpers import rand_complex


def brute_T(phi, psi, f):
    # psi(x) * sum_{xi, y} phi(-xi) f(y) e(xi (y - x)), looped
    g = phi.group
    out = np.zeros(g.N, dtype=complex)
    for x in range(g.N):
        for xi in range(g.N):
            for y in range(g.N):
                out[x] += phi.values[g.neg(xi)] * f.values[y] * g.pairing(xi, g.sub(y, x))
        out[x] *= psi.values[x]
    return out


def rand_f(g, rng):
    return FuncC(g, rand_complex(rng, g.N))


@pytest.mark.parametrize("spec", ["5", "2,3", "2^3"])
def test_apply_T_matches_brute_force(spec, rng):
    g = parse_group(spec)
    phi, psi, f = rand_f(g, rng), rand_f(g, rng), rand_f(g, rng)
    got = apply_T(T(phi, psi), f).values
    ref = brute_T(phi, psi, f)
    assert np.abs(got - ref).max() < 1e-9 * np.abs(ref).max()


def test_constant_multiplier_gives_scaled_pointwise(rng):
    g = GroupSpec.cyclic(5)
    psi, f = rand_f(g, rng), rand_f(g, rng)
    got = apply_T(T(constant(g), psi), f)
    assert got.allclose(FuncC(g, g.N * psi.values * f.values), 1e-12)


def test_delta_multiplier_gives_character():
    g = GroupSpec.cyclic(5)
    a = 2
    out = apply_T(T(delta(g, a), constant(g)), delta(g, 0)).values
    xs = np.arange(5)
    np.testing.assert_allclose(out, np.exp(2j * np.pi * a * xs / 5), atol=1e-12)


def test_zero_input(rng):
    g = GroupSpec.cyclic(4)
    z = FuncC(g, np.zeros(4))
    assert not np.any(apply_T(T(rand_f(g, rng), rand_f(g, rng)), z).values)
    assert not np.any(apply_S(S(rand_f(g, rng), rand_f(g, rng)), z).values)


def test_kind_checks(rng):
    g = GroupSpec.cyclic(3)
    with pytest.raises(ValueError):
        apply_T(S(rand_f(g, rng), rand_f(g, rng)), rand_f(g, rng))
    with pytest.raises(ValueError):
        T(rand_f(g, rng), rand_f(GroupSpec.cyclic(4), rng))


@pytest.mark.parametrize("kind", ["T", "S"])
def test_factorizations_and_adjoints(kind, rng):
    g = parse_group("2,3")
    phi, psi = rand_f(g, rng), rand_f(g, rng)
    op = T(phi, psi) if kind == "T" else S(phi, psi)
    M = full_matrix(op)
    for form in (1, 2, 3):
        assert np.abs(chain_matrix(op, form) - M).max() < 1e-9 * np.abs(M).max()
    for form in (1, 2):
        assert np.abs(adjoint_chain(op, form) - M.conj().T).max() < 1e-9 * np.abs(M).max()
    e = np.eye(g.N)
    np.testing.assert_allclose(M[:, 2], apply(op, FuncC(g, e[2])).values)


def test_S_adjoint_conjugates_only_the_multiplier(rng):
    g = GroupSpec.cyclic(5)
    phi, psi = rand_f(g, rng), rand_f(g, rng)
    M = full_matrix(S(phi, psi))
    want = full_matrix(S(FuncC(g, np.conj(phi.values)), psi))
    assert np.abs(M.conj().T - want).max() < 1e-10 * np.abs(M).max()


def test_S_hermitian_for_real_multiplier(rng):
    g = GroupSpec.cyclic(7)
    phi = FuncC(g, rng.standard_normal(7))
    psi = rand_f(g, rng)
    op = S(phi, psi)
    f, h = rand_f(g, rng), rand_f(g, rng)
    assert abs(inner(apply_S(op, f), h) - inner(f, apply_S(op, h))) < 1e-9 * abs(inner(apply_S(op, f), h))


def test_S_equals_T_on_functions_supported_on_set(rng):
    g = GroupSpec.cyclic(7)
    Sset = SetMask.from_elements(g, [1, 2, 5])
    phi = rand_f(g, rng)
    f = FuncC(g, np.where(Sset.members, rand_complex(rng, 7), 0))
    assert apply_S(S(phi, Sset.indicator()), f).allclose(apply_T(T(phi, Sset.indicator()), f), 1e-10)


def test_product_with_adjoint(rng):
    g = parse_group("2^3")
    phi, psi = rand_f(g, rng), rand_f(g, rng)
    M = full_matrix(T(phi, psi))
    want = g.N * full_matrix(S(FuncC(g, np.abs(phi.values) ** 2), psi))
    assert np.abs(M @ M.conj().T - want).max() < 1e-9 * np.abs(want).max()


def test_restricted_example():
    g = GroupSpec.cyclic(5)
    R = restricted(delta(g, 2), SetMask.from_elements(g, [0, 1]))
    w = np.exp(4j * np.pi / 5)
    np.testing.assert_allclose(R.matrix, [[1, w], [np.conj(w), 1]], atol=1e-12)
    np.testing.assert_allclose(R.spectrum().eigenvalues, [2, 0], atol=1e-12)


def test_restricted_delta_is_all_ones():
    g = GroupSpec.cyclic(6)
    R = restricted(delta(g, 0), SetMask.from_elements(g, [0, 2, 3]))
    np.testing.assert_allclose(R.matrix, np.ones((3, 3)), atol=1e-12)


def test_restricted_is_compression(rng):
    g = parse_group("2,5")
    Sset = SetMask.from_elements(g, [0, 3, 4, 9])
    phi = rand_f(g, rng)
    R = restricted(phi, Sset)
    e = Sset.elements()
    full = full_matrix(T(phi, Sset.indicator()))
    assert np.abs(R.action - full[np.ix_(e, e)]).max() < 1e-10 * np.abs(full).max()
    assert np.trace(R.matrix) == pytest.approx(4 * dft(phi).values[0])
    u = rand_complex(rng, 4)
    assert R.lift(R.apply(u)).allclose(apply_T(T(phi, Sset.indicator()), R.lift(u)), 1e-10)
    with pytest.raises(ValueError):
        restricted(phi, SetMask.empty(g))


def test_definiteness_helpers():
    assert is_positive_definite(np.eye(3))
    assert not is_positive_definite(np.ones((2, 2)))
    assert is_singular(np.ones((3, 3)))
    assert not is_singular(np.eye(2))


def test_multiplier(rng):
    g = GroupSpec.cyclic(5)
    f = rand_f(g, rng)
    assert multiplier(constant(g), f).allclose(dft(f))
    phi = rand_f(g, rng)
    assert multiplier(phi, delta(g, 0)).allclose(phi)


def test_eigenfunction_transport(rng):
    g = GroupSpec.cyclic(5)
    Sset = SetMask.from_elements(g, [1, 3])
    phi = FuncC(g, rng.uniform(0.5, 1.5, 5))
    R = restricted(phi, Sset)
    spec = linalg.eigh(R.action)
    psi_c = FuncC(g, Sset.indicator().values[g.neg_table])
    for mu, v in zip(spec.eigenvalues, spec.eigenvectors.T):
        f = R.lift(v)
        F = multiplier(phi, f)
        TF = apply_T(T(psi_c, phi), F)
        assert TF.allclose(FuncC(g, mu * F.values), 1e-9)


def test_dual_restricted_basis():
    g = GroupSpec.cyclic(5)
    assert dual_restricted_basis(delta(g, 1), SetMask.from_elements(g, [0, 1, 2])).dim == 1
    assert dual_restricted_basis(constant(g), SetMask.from_elements(g, [0, 2, 4])).dim == 3
    g7 = GroupSpec.cyclic(7)
    psi = FuncC(g7, [1.3, 0, -0.2, 0.7, 0, 2.1, 0])
    assert dual_restricted_basis(psi, SetMask.from_elements(g7, range(6))).dim == 4
    sb = support_basis(SetMask.from_elements(g7, [2, 4]))
    assert sb.dim == 2 and sb.as_matrix().shape == (7, 2)


def test_matrix_cap():
    g = GroupSpec.cyclic(300)
    with pytest.raises(ValueError):
        full_matrix(T(constant(g), constant(g)))
