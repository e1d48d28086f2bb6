import random
from fractions import Fraction
from math import comb

import pytest

from planchlab import series
from planchlab.algebra import (
    ExtendedElement,
    Observable,
    combinatorial_forward,
    combinatorial_invert,
    compose_maps,
    ext_multiply,
    ext_normalize,
    fcum_in_htilde,
    filtration_degree,
    free_cumulant_series,
    g_ext,
    kerov_degree,
    lagrange_invert,
    p_in_ptilde,
    psharp_in_p,
    psharp_rho_in_p,
    ptilde_in_p,
    q_ext,
    scaled_hermite_in_zeta,
    size_with_marked,
    structure_constants,
    top_weight_component,
    verify_leading_term_theorems,
    weight_degree,
    zeta_element,
)
from planchlab.observables import chebyshev_t, eval_psharp
from planchlab.partitions import YoungDiagram, partition_tuples, partitions_up_to


def P(basis, mono, c=1):
    return Observable.monomial(basis, mono, c)


# ---------------------------------------------------------------------------
# generator conversions

def test_ptilde_in_p_examples():
    assert ptilde_in_p(2) == P("p", (1,), 2)
    assert ptilde_in_p(3) == P("p", (2,), 3)
    assert ptilde_in_p(4) == P("p", (3,), 4) + P("p", (1,))


def test_p_in_ptilde_inverts():
    for k in range(1, 8):
        roundtrip = ptilde_in_p(k + 1).to_basis("ptilde")
        assert roundtrip == Observable.generator("ptilde", k + 1)
        back = p_in_ptilde(k).to_basis("p")
        assert back == Observable.generator("p", k)


def test_psharp_in_p_examples():
    assert psharp_in_p(1) == Observable.generator("p", 1)
    assert psharp_in_p(2) == Observable.generator("p", 2)
    # canonical top term is the power sum of the same index
    for k in range(1, 7):
        e = psharp_in_p(k)
        top = max(sum(m) for m in e.coeffs)
        assert top == k and e.coeffs[(k,)] == 1


def test_psharp_in_p_evaluates_like_characters():
    d = YoungDiagram((2, 1))
    assert psharp_in_p(3).evaluate(d) == -3
    for lam in partitions_up_to(6):
        for k in range(1, 5):
            assert psharp_in_p(k).evaluate(lam) == eval_psharp((k,), lam)


def test_psharp_rho_in_p_examples():
    assert psharp_rho_in_p((1,)) == Observable.generator("p", 1)
    assert psharp_rho_in_p((1, 1)) == P("p", (1, 1)) - P("p", (1,))
    e = psharp_rho_in_p((2,))
    assert e == Observable.generator("p", 2)
    for k in range(1, 7):
        assert psharp_rho_in_p((k,)) == psharp_in_p(k)


def test_psharp_rho_fit_reproduces_evaluations():
    rng = random.Random(501)
    pool = partitions_up_to(12)
    rhos = [(2, 1), (3, 2), (2, 2, 1), (4,), (3, 1, 1)]
    diagrams = [pool[rng.randrange(len(pool))] for _ in range(50)]
    for rho in rhos:
        e = psharp_rho_in_p(rho)
        for lam in diagrams:
            assert e.evaluate(lam) == eval_psharp(rho, lam), (rho, lam.rows)


def test_psharp_cap():
    with pytest.raises(ValueError):
        psharp_rho_in_p((9,), cap=8)


def test_free_cumulant_series_examples():
    f2, f3, f4 = free_cumulant_series(4)
    assert f2 == Observable.generator("htilde", 2)
    assert f3 == Observable.generator("htilde", 3)
    assert f4 == Observable.generator("htilde", 4) - P("htilde", (2, 2), 2)


def test_observable_arithmetic_and_text():
    e = 2 * Observable.generator("p", 3) + Observable.generator("p", 1)
    assert e.canonical_text() == "2*p3 + p1"
    assert (e - e).is_zero
    sq = Observable.generator("ptilde", 2) ** 2
    assert sq == P("ptilde", (2, 2))
    with pytest.raises(ValueError):
        Observable.generator("p", 1) + Observable.generator("ptilde", 2)
    with pytest.raises(ValueError):
        Observable("ptilde", {(1,): 1})  # index 1 not allowed in this system


def test_psharp_basis_multiplication():
    prod = P("psharp", (2,)) * P("psharp", (2,))
    assert prod == (
        P("psharp", (2, 2)) + P("psharp", (3,), 4) + P("psharp", (1, 1), 2)
    )


# ---------------------------------------------------------------------------
# evaluation homomorphism

@pytest.mark.parametrize("basis", ["p", "ptilde", "htilde", "psharp", "fcum"])
def test_conversion_preserves_evaluation(basis):
    rng = random.Random(hash(basis) % 1000)
    lo = 1 if basis in ("p", "psharp") else 2
    coeffs = {}
    for _ in range(3):
        mono = tuple(sorted((rng.randint(lo, 4) for _ in range(rng.randint(1, 2))), reverse=True))
        coeffs[mono] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    e = Observable(basis, coeffs)
    diagrams = partitions_up_to(7)
    values = [e.evaluate(lam) for lam in diagrams]
    for target in ("p", "ptilde", "htilde", "psharp", "fcum"):
        conv = e.to_basis(target)
        assert conv.basis == target
        for lam, v in zip(diagrams, values):
            assert conv.evaluate(lam) == v, (basis, target, lam.rows)


# ---------------------------------------------------------------------------
# structure constants

def test_structure_constants_examples():
    assert structure_constants((2,), (2,)) == {
        (2, 2): 1, (3,): 4, (1, 1): 2,
    }
    assert structure_constants((2,), (1,)) == {(2, 1): 1, (2,): 2}
    assert structure_constants((1,), (1,)) == {(1, 1): 1, (1,): 1}


def test_structure_constants_routes_agree_small():
    for a in range(1, 5):
        for b in range(1, 6 - a):
            for sigma in partition_tuples(a):
                for tau in partition_tuples(b):
                    assert structure_constants(sigma, tau) == structure_constants(
                        sigma, tau, method="expand"
                    ), (sigma, tau)


def test_structure_constants_union_coefficient_and_subadditivity():
    for sigma, tau in (((2,), (2,)), ((3,), (2, 1)), ((2, 2), (2,))):
        table = structure_constants(sigma, tau)
        union = tuple(sorted(sigma + tau, reverse=True))
        assert table[union] == 1
        for J in (frozenset(), frozenset({1}), frozenset({2}), None):
            bound = size_with_marked(sigma, J) + size_with_marked(tau, J)
            assert all(size_with_marked(rho, J) <= bound for rho in table)


def test_structure_constants_removal_rule():
    # multiplying by a single k-cycle: the term trading the cycle for unit
    # parts carries coefficient k * multiplicity
    table = structure_constants((2, 2), (2,))
    assert table[(2, 1, 1)] == 4  # k=2, two 2-parts
    table = structure_constants((3, 2), (3,))
    assert table[(2, 1, 1, 1)] == 3


def test_structure_constants_cap():
    with pytest.raises(ValueError):
        structure_constants((5,), (4,), cap=8)


# ---------------------------------------------------------------------------
# filtrations and top weight

def test_filtration_degree_examples():
    e = P("psharp", (2,))
    assert filtration_degree(e, None) == 3
    assert filtration_degree(e, frozenset({1})) == 2
    assert filtration_degree(ptilde_in_p(4).to_basis("psharp"), None) == 4
    assert kerov_degree(P("psharp", (1, 1))) == 4


def test_weight_degree():
    assert weight_degree(Observable.generator("ptilde", 5)) == 5
    assert weight_degree(Observable.generator("p", 3)) == 4
    assert weight_degree(psharp_in_p(4)) == 5


def test_top_weight_component_examples():
    pt = P("ptilde", (4, 2))
    assert top_weight_component(pt) == pt
    # the top component of a cycle element is the free cumulant of next index
    for k in range(1, 6):
        top = top_weight_component(psharp_in_p(k))
        fc = fcum_in_htilde(k + 1).to_basis("ptilde")
        assert top == fc, k
        assert top.coeffs[(k + 1,)] == Fraction(1, k + 1)


def test_top_weight_explicit_value():
    # degree-3 cycle element: top weight part is pt4/4 - 3/8 pt2^2
    top = top_weight_component(psharp_in_p(3))
    assert top == P("ptilde", (4,), Fraction(1, 4)) - P("ptilde", (2, 2), Fraction(3, 8))


# ---------------------------------------------------------------------------
# inversion formulas

def test_lagrange_trivial_and_quadratic():
    one = [Fraction(1), Fraction(0), Fraction(0), Fraction(0)]
    inv = lagrange_invert(one)
    assert list(inv.a) == one
    c = Fraction(3, 7)
    b = [Fraction(1), Fraction(0), c, Fraction(0)]
    inv = lagrange_invert(b)
    assert inv.a[2] == c


def test_lagrange_roundtrip_random():
    rng = random.Random(77)
    order = 8
    b = [Fraction(1), Fraction(0)] + [
        Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(order - 1)
    ]
    inv = lagrange_invert(b, order)
    composed = compose_maps(list(inv.a), b, order)
    ident = [Fraction(0), Fraction(1)] + [Fraction(0)] * (order - 1)
    assert composed == ident


def test_lagrange_forms_consistent():
    rng = random.Random(78)
    order = 10
    b = [Fraction(1), Fraction(0)] + [
        Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(order - 1)
    ]
    inv = lagrange_invert(b, order)
    a = list(inv.a)
    # the log form matches log(A) coefficient-wise: a~_k = k [t^k] log A(t)
    log_a = series.log(a, order)
    for k in range(2, order + 1):
        assert inv.a_log[k] == k * log_a[k]
    # and the defining property (ii): b_k = -(1/(k-1)) [t^k] A^-(k-1)
    for k in range(2, order + 1):
        assert b[k] == -Fraction(1, k - 1) * series.power(a, -(k - 1), k)[k]


def test_lagrange_validation():
    with pytest.raises(ValueError):
        lagrange_invert([Fraction(2), Fraction(0)])


def test_combinatorial_inversion_roundtrip():
    rng = random.Random(12)
    b = [Fraction(0), Fraction(0)] + [
        Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(8)
    ]
    assert combinatorial_invert(combinatorial_forward(b)) == b
    # degree-2 case has no correction terms
    a = [Fraction(0), Fraction(0), Fraction(1), Fraction(0)]
    assert combinatorial_invert(a)[2] == 1


def test_combinatorial_inversion_gives_chebyshev_pattern():
    # the inverse transform of the pure-binomial pattern reproduces the
    # first-kind Chebyshev coefficients: x^k = sum_j C(k,j) t_{k-2j}(x)
    # (with the constant convention t_0/2 = 1 at even k)
    for k in range(1, 9):
        recombined = [Fraction(0)] * (k + 1)
        for j in range(k // 2 + 1):
            idx = k - 2 * j
            if idx == 0:
                recombined[0] += comb(k, j)  # half of the constant polynomial 2
                continue
            for d, c in enumerate(chebyshev_t(idx).coeffs):
                recombined[d] += c * comb(k, j)
        expected = [Fraction(0)] * (k + 1)
        expected[k] = Fraction(1)
        assert recombined == expected, k


def test_combinatorial_validation():
    with pytest.raises(ValueError):
        combinatorial_invert([Fraction(1), Fraction(0), Fraction(0)])


# ---------------------------------------------------------------------------
# extended algebra

def test_ext_normalize_examples():
    e = ext_normalize(P("psharp", (2, 1)))
    assert e.terms == {((2,), 2): 1, ((2,), 0): -2}
    e = ext_normalize(P("psharp", (1,)))
    assert e.terms == {((), 2): 1}
    e = ext_normalize(P("psharp", (1, 1)))
    assert e.terms == {((), 4): 1, ((), 2): -1}


def test_ext_multiply_identity_and_examples():
    one = ExtendedElement.constant(1)
    z2 = zeta_element((2,))
    assert ext_multiply(one, z2) == z2
    sq = ext_multiply(z2, z2)
    # square of the normalized 2-cycle: the (2,2) term plus the constant 2,
    # plus strictly negative-degree corrections
    assert sq.terms[((2, 2), -4)] == 1
    assert sq.terms[((), 0)] == 2
    rest = {k: v for k, v in sq.terms.items() if k not in (((2, 2), -4), ((), 0))}
    assert all(sum(r) + m < 0 for (r, m) in rest)
    # distinct cycles: the union term plus negative degree
    z3 = zeta_element((3,))
    prod = ext_multiply(z2, z3)
    assert prod.terms[((3, 2), -5)] == 1
    rest = {k: v for k, v in prod.terms.items() if k != ((3, 2), -5)}
    assert all(sum(r) + m < 0 for (r, m) in rest)


def test_ext_degree_and_shift():
    e = zeta_element((3, 2))
    assert e.degree() == 0
    assert e.shifted(2).degree() == 2
    assert ExtendedElement().degree() is None


def test_q_and_g_elements_have_degree_zero():
    for k in range(2, 6):
        assert q_ext(k).degree() == 0, k
    for k in range(3, 6):
        assert g_ext(k).degree() == 0, k
    assert q_ext(1) == 0
    assert g_ext(2) == 0


def test_scaled_hermite_small():
    # degree-2 scaled Hermite at index k: zeta_k^2 - k
    for k in (2, 3):
        h2 = scaled_hermite_in_zeta(2, k)
        direct = ext_multiply(zeta_element((k,)), zeta_element((k,))) - Fraction(k)
        assert h2 == direct


def test_verify_leading_term_report():
    report = verify_leading_term_theorems(4)
    assert report.ok
    names = {c.name for c in report.checks}
    assert names == {
        "top-weight-of-cycle",
        "free-cumulant-is-top-weight",
        "profile-sum-through-cycles",
        "moment-through-cycles",
        "centered-profile-vs-cycles",
        "cycle-vs-centered-profile",
        "centered-moment-vs-cycles",
        "cycle-vs-centered-moment",
        "normalized-vs-hermite",
    }
    assert "remainder" in report.describe()
