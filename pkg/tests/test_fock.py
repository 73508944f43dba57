import math
from fractions import Fraction

import numpy as np
import pytest

from jack_measures.exceptions import DomainError, TruncationError
from jack_measures.fock import (
    FockVector,
    apply_annihilate,
    apply_create,
    apply_cubic_hamiltonian,
    apply_T,
    coherent_overlap,
    coherent_state,
    inner_product,
    joint_moments_operator,
    norm_squared,
    operator_matrix,
    truncated_kernel,
)
from jack_measures.partitions import EMPTY, Partition, partitions_of_size, partitions_up_to
from jack_measures.profiles import transition_moments_of
from jack_measures.ribbon.sums import moments_poly


def entries(x):
    return dict(x.items())


def monomial(parts, field):
    return FockVector.monomial(Partition(parts), field)


def test_create_and_annihilate(exact):
    x = apply_create(2, FockVector.vacuum(exact))
    assert entries(x) == {Partition((2,)): exact.one}
    y = apply_annihilate(2, apply_create(2, x), Fraction(1, 2))
    # ℏk·N_k = (1/2)·2·2
    assert entries(y) == {Partition((2,)): exact(2)}
    assert not apply_annihilate(3, x, 1)


def test_annihilate_with_shift(exact):
    x = monomial((1,), exact)
    shifted = apply_annihilate(1, x, 1, shift={1: exact(3)})
    assert entries(shifted) == {EMPTY: exact.one, Partition((1,)): exact(3)}


@pytest.mark.parametrize("k", [0, -2])
def test_rho_indices_must_be_positive(exact, k):
    with pytest.raises(DomainError):
        apply_create(k, FockVector.vacuum(exact))
    with pytest.raises(DomainError):
        apply_annihilate(k, FockVector.vacuum(exact), 1)


def test_norms_and_antilinearity(exact):
    assert norm_squared(Partition((2, 2)), Fraction(1, 2), exact) == exact(2)
    assert norm_squared(Partition((3, 1)), 2, exact) == exact(12)
    a = FockVector(exact, {Partition((1,)): [0, 1]})
    b = monomial((1,), exact)
    assert inner_product(a, b, 1) == exact([0, -1])
    assert inner_product(b, a, 1) == exact([0, 1])


@pytest.mark.parametrize("k", [1, 2, 3])
def test_annihilation_is_adjoint_of_creation(exact, k):
    a = FockVector(exact, {Partition((1,)): [1, 2], Partition((2, 1)): "1/3"})
    b = FockVector(exact, {Partition((1, 1)): 1, Partition((2,)): [0, 1], Partition((3, 1, 1)): 2})
    hbar = Fraction(3, 2)
    left = inner_product(apply_create(k, a), b, hbar)
    right = inner_product(a, apply_annihilate(k, b, hbar), hbar)
    assert left == right


def test_vector_helpers(plancherel, exact):
    x = FockVector(exact, {EMPTY: 1, Partition((1,)): 2, Partition((2, 1)): 3})
    assert x.max_degree() == 3
    assert entries(x.degree_part(1)) == {Partition((1,)): exact(2)}
    assert entries(x.truncate(1)) == {EMPTY: exact(1), Partition((1,)): exact(2)}
    assert not (x - x)
    # ρ_2 vanishes under Plancherel
    assert x.evaluate(plancherel) == exact(3)


@pytest.mark.parametrize("ell", [2, 3, 4, 5, 6])
@pytest.mark.parametrize("override", [{}, {"ebar": Fraction(1), "hbar": Fraction(2)}])
def test_single_box_is_an_eigenvector(params, exact, ell, override):
    p = params(override)
    x = monomial((1,), exact)
    expected = transition_moments_of(Partition((1,)), p, ell)[ell]
    image = apply_T(ell, x, p)
    assert set(entries(image)) <= {Partition((1,))}
    assert image[Partition((1,))] == exact(expected)


def test_T_kills_vacuum(params, exact):
    p = params({"ebar": Fraction(1), "hbar": Fraction(2)})
    for ell in range(1, 6):
        assert not apply_T(ell, FockVector.vacuum(exact), p)


def test_T0_is_identity(params, exact):
    x = FockVector(exact, {Partition((2,)): 1})
    image = apply_T(0, x, params())
    assert entries(image) == entries(x)
    assert image is not x


def test_T_validation(params, exact, numeric):
    with pytest.raises(DomainError):
        apply_T(-1, FockVector.vacuum(exact), params())
    with pytest.raises(TruncationError):
        apply_T(2, monomial((2,), exact), params(), Jmax=1)
    # numeric mode only warns
    apply_T(2, monomial((2,), numeric), params(), Jmax=1)


def test_cubic_matrix_on_degree_two(params, exact):
    p = params({"ebar": Fraction(1), "hbar": Fraction(2)})
    hbar, ebar = p.hbar, p.ebar
    assert entries(apply_T(3, monomial((1, 1), exact), p)) == {
        Partition((1, 1)): exact(2 * hbar * ebar),
        Partition((2,)): exact(2 * hbar**2),
    }
    assert entries(apply_T(3, monomial((2,), exact), p)) == {
        Partition((1, 1)): exact(2 * hbar),
        Partition((2,)): exact(4 * hbar * ebar),
    }


@pytest.mark.parametrize("mu", partitions_up_to(4))
def test_T3_is_the_cubic_hamiltonian(params, exact, mu):
    p = params({"ebar": Fraction(3, 2), "hbar": Fraction(1)})
    x = FockVector.monomial(mu, exact)
    assert entries(apply_T(3, x, p)) == entries(apply_cubic_hamiltonian(x, p))


@pytest.mark.parametrize("mu", partitions_up_to(3))
def test_operators_commute(params, exact, mu):
    p = params({"ebar": Fraction(1), "hbar": Fraction(2)})
    x = FockVector.monomial(mu, exact)
    assert entries(apply_T(2, apply_T(3, x, p), p)) == entries(apply_T(3, apply_T(2, x, p), p))
    assert entries(apply_T(3, apply_T(4, x, p), p)) == entries(apply_T(4, apply_T(3, x, p), p))


@pytest.mark.parametrize("d", [2, 3])
@pytest.mark.parametrize("ell", [2, 3, 4])
def test_block_spectrum_matches_profiles(params, numeric, d, ell):
    p = params({"ebar": Fraction(-1), "hbar": Fraction(1, 2)})
    basis, matrix = operator_matrix(lambda x: apply_T(ell, x, p), d, p.hbar, numeric)
    assert basis == partitions_of_size(d)
    assert np.allclose(matrix, matrix.conj().T)
    expected = sum(float(transition_moments_of(lam, p, ell)[ell]) for lam in basis)
    assert np.trace(matrix).real == pytest.approx(expected)


def test_operator_matrix_rejects_degree_change(params, numeric):
    with pytest.raises(DomainError) as excinfo:
        operator_matrix(lambda x: apply_create(1, x), 2, 1, numeric)
    assert "does not preserve degree" in str(excinfo.value)


def test_coherent_state(plancherel, specialization, exact):
    upsilon = coherent_state(plancherel, Fraction(1, 2), 3, exact)
    assert entries(upsilon) == {
        EMPTY: exact(1),
        Partition((1,)): exact(2),
        Partition((1, 1)): exact(2),
        Partition((1, 1, 1)): exact(Fraction(4, 3)),
    }
    v = specialization({1: [0, 1], 2: 2})
    kernel = truncated_kernel(v, 1, 2, exact)
    # conj(i)²/2 and 2/2
    assert entries(kernel) == {Partition((1, 1)): exact("-1/2"), Partition((2,)): exact(1)}
    with pytest.raises(DomainError):
        coherent_state(plancherel, 1, -1, exact)


def test_coherent_overlap(plancherel, specialization):
    assert coherent_overlap(plancherel, plancherel, 1) == pytest.approx(math.e)
    v = specialization({2: 2})
    assert coherent_overlap(v, v, Fraction(1, 2)) == pytest.approx(math.exp(2 * (1 + 4 / 2)))


@pytest.mark.parametrize("lengths", [(2,), (3,), (4,), (2, 2), (2, 3), (3, 3)])
@pytest.mark.parametrize("override", [{}, {"ebar": Fraction(1), "hbar": Fraction(2)}])
def test_displaced_method_matches_ribbon_paths(params, specialization, exact, lengths, override):
    p = params(override)
    v_out = specialization({2: "1/2"})
    v_in = specialization({1: [1, 1], 2: None, 3: 1})
    moment = joint_moments_operator(lengths, v_out, v_in, p, field=exact)
    expected = moments_poly(lengths, v_out, v_in, exact).evaluate(p.hbar, p.ebar)
    assert moment.value == expected
    assert moment.method == "displaced"
    assert moment.cutoff is None
    assert moment.tail == 0.0


def test_displaced_variance(params, plancherel, exact):
    # E[T_2²] = Var(T_2) + E[T_2]² = ℏ + 1 for Plancherel
    moment = joint_moments_operator((2, 2), plancherel, plancherel, params(), field=exact)
    assert moment.value == exact(2)


@pytest.mark.parametrize("hbar", [Fraction(1), Fraction(2)])
def test_truncated_method(params, plancherel, hbar):
    p = params({"hbar": hbar})
    D = 6
    rate = 1 / float(hbar)
    weights = [rate**d / math.factorial(d) for d in range(D + 1)]
    expected = sum(w * float(hbar) * d for d, w in enumerate(weights)) / sum(weights)
    moment = joint_moments_operator((2,), plancherel, plancherel, p, D=D, method="truncated")
    assert moment.value == pytest.approx(expected, rel=1e-9)
    assert moment.cutoff == D
    assert moment.tail == pytest.approx(1 - sum(weights) / math.exp(rate), abs=1e-12)


def test_operator_moment_validation(params, plancherel):
    with pytest.raises(DomainError):
        joint_moments_operator((), plancherel, plancherel, params())
    with pytest.raises(DomainError):
        joint_moments_operator((2,), plancherel, plancherel, params(), method="sideways")
    with pytest.raises(DomainError) as excinfo:
        joint_moments_operator((2,), plancherel, plancherel, params(), method="truncated")
    assert "degree cutoff" in str(excinfo.value)
