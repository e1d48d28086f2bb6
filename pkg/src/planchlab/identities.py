"""The zero-tolerance identity suite.

Every check here is exact: rational arithmetic, no tolerances.  The registry
drives the ``identities`` CLI command (the repository's primary gate) and is
reused verbatim by the acceptance tests.  Caps are configuration values; the
defaults keep the full suite under a few minutes.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from . import algebra, observables, plancherel
from .algebra import Observable
from .characters import character, class_sign, dimension, plancherel_weight
from .partitions import (
    YoungDiagram,
    enumerate_partitions,
    falling_factorial,
    from_extrema,
    multiplicities,
    partition_tuples,
    partitions_up_to,
    sort_partition,
    z_factor,
    _profile_breakpoints,
)


@dataclass
class IdentityCaps:
    lambda_cap: int = 10          # diagrams enumerated for pointwise identities
    index_cap: int = 8            # generator indices in pointwise identities
    small_lambda_cap: int = 8     # heavier pointwise checks
    coordinate_cap: int = 12      # coordinate-system checks
    orthogonality_cap: int = 8    # full character-table checks
    expectation_rho_cap: int = 6  # |rho| in the expectation table
    expectation_n_cap: int = 12   # n in the expectation table
    structure_cap: int = 8        # |sigma| + |tau| for structure constants
    leading_kmax: int = 6         # leading-term theorem indices
    marginal_cap: int = 6         # growth-chain exact marginals


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str
    seconds: float


def _diagrams(max_size: int) -> list[YoungDiagram]:
    return partitions_up_to(max_size)


# ---------------------------------------------------------------------------
# coordinate systems

def check_frobenius_window(caps: IdentityCaps) -> str:
    """The shifted row set and the negated shifted column set tile the half-integers."""
    count = 0
    for lam in _diagrams(caps.coordinate_cap):
        n = lam.n
        window = 2 * (n + 2)
        rows, cols = lam.rows, lam.conjugate().rows
        def shifted(seq, i):
            return (seq[i] if i < len(seq) else 0) - (i + 1)  # doubled value is 2*this+1
        row_set = set()
        col_set = set()
        for i in range(window):
            row_set.add(2 * shifted(rows, i) + 1)
            col_set.add(-(2 * shifted(cols, i) + 1))
        lo = -2 * (n + 2) + 1
        hi = 2 * (n + 2) - 1
        window_vals = set(range(lo, hi + 1, 2))
        inter = row_set & col_set & window_vals
        union = (row_set | col_set) & window_vals
        assert not inter, (lam.rows, sorted(inter))
        assert union == window_vals, lam.rows
        count += 1
    return f"{count} diagrams, window partition exact"


def check_extrema_roundtrip(caps: IdentityCaps) -> str:
    count = 0
    for lam in _diagrams(caps.coordinate_cap):
        assert from_extrema(lam.extrema()) == lam, lam.rows
        count += 1
    return f"{count} round trips"


def check_conjugation_reverses_extrema(caps: IdentityCaps) -> str:
    for lam in _diagrams(caps.coordinate_cap):
        e, ec = lam.extrema(), lam.conjugate().extrema()
        assert ec.minima == tuple(-x for x in reversed(e.minima)), lam.rows
        assert ec.maxima == tuple(-y for y in reversed(e.maxima)), lam.rows
    return "negated reversed sequences match"


def check_profile_area(caps: IdentityCaps) -> str:
    """Trapezoid rule over the corner points gives exactly twice the box count."""
    for lam in _diagrams(caps.lambda_cap):
        pts = _profile_breakpoints(lam.rows)
        area = Fraction(0)
        for (x0, h0), (x1, h1) in zip(pts, pts[1:]):
            base0 = h0 - abs(x0)
            base1 = h1 - abs(x1)
            if x0 < 0 <= x1:  # |x| has a kink; split at zero
                hmid = Fraction(h0 * (x1 - 0) + h1 * (0 - x0), x1 - x0) if x1 != x0 else h0
                area += Fraction(base0 + hmid, 2) * (0 - x0)
                area += Fraction(hmid + base1, 2) * (x1 - 0)
            else:
                area += Fraction(base0 + base1, 2) * (x1 - x0)
        assert area == 2 * lam.n, (lam.rows, area)
    return "profile area equals twice the box count"


def check_profile_lipschitz(caps: IdentityCaps) -> str:
    rng = random.Random(2020)
    for lam in _diagrams(caps.small_lambda_cap):
        grid = sorted(Fraction(rng.randint(-40, 40), 4) for _ in range(12))
        vals = [lam.profile(x) for x in grid]
        for (x0, v0), (x1, v1) in zip(zip(grid, vals), zip(grid[1:], vals[1:])):
            assert abs(v1 - v0) <= abs(x1 - x0), lam.rows
    return "1-Lipschitz on random rational grids"


# ---------------------------------------------------------------------------
# characters

def check_burnside(caps: IdentityCaps) -> str:
    for n in range(1, caps.coordinate_cap + 1):
        total = sum(dimension(lam) ** 2 for lam in enumerate_partitions(n))
        assert total == factorial(n), n
    return f"sum of squared dimensions equals n! for n <= {caps.coordinate_cap}"


def check_column_orthogonality(caps: IdentityCaps) -> str:
    # the diagonal value is the centralizer order z_rho (classical column
    # orthogonality); equivalently n!/|class|
    n = caps.orthogonality_cap
    lams = enumerate_partitions(n)
    classes = [p.rows for p in lams]
    table = {lam.rows: {rho: character(lam, rho) for rho in classes} for lam in lams}
    for i, rho in enumerate(classes):
        for sigma in classes[i:]:
            s = sum(table[l][rho] * table[l][sigma] for l in table)
            expect = z_factor(rho) if rho == sigma else 0
            assert s == expect, (rho, sigma)
    return f"full column orthogonality at n = {n}"


def check_character_conjugation_sign(caps: IdentityCaps) -> str:
    n = caps.orthogonality_cap
    for lam in enumerate_partitions(n):
        conj = lam.conjugate()
        for rho in partition_tuples(n):
            assert character(conj, rho) == class_sign(rho) * character(lam, rho), (
                lam.rows, rho,
            )
    return f"transpose flips by the class sign at n = {n}"


# ---------------------------------------------------------------------------
# observables, pointwise

def check_profile_sum_linear_rule(caps: IdentityCaps) -> str:
    """Profile power sums are binomial combinations of Frobenius power sums."""
    for lam in _diagrams(caps.lambda_cap):
        for k in range(2, caps.index_cap + 1):
            lhs = Fraction(observables.eval_ptilde(k, lam))
            rhs = Fraction(0)
            for j in range(0, (k - 1) // 2 + 1):
                idx = k - 1 - 2 * j
                if idx < 1:
                    continue
                rhs += Fraction(comb(k, 2 * j + 1), 4**j) * observables.eval_p(idx, lam)
            assert lhs == rhs, (lam.rows, k)
    return "binomial rule exact on all diagrams in range"


def check_generating_function_identity(caps: IdentityCaps) -> str:
    """The shifted ratio of the coordinate generating function equals
    z * prod(z - maxima) / prod(z - minima), as exact rational functions."""
    half = Fraction(1, 2)
    for lam in _diagrams(caps.lambda_cap):
        fc = lam.frobenius()
        a = [Fraction(v, 2) for v in fc.a2]
        b = [Fraction(v, 2) for v in fc.b2]
        ext = lam.extrema()
        # cross-multiplied: N_L * D_R == N_R * D_L
        n_l = observables._poly_from_roots(
            [half - bi for bi in b] + [ai - half for ai in a]
        )
        d_l = observables._poly_from_roots(
            [ai + half for ai in a] + [-bi - half for bi in b]
        )
        n_r = observables._poly_from_roots([Fraction(0)] + [Fraction(y) for y in ext.maxima])
        d_r = observables._poly_from_roots([Fraction(x) for x in ext.minima])
        lhs = observables._poly_mul(n_l, d_r)
        rhs = observables._poly_mul(n_r, d_l)
        assert lhs == rhs, lam.rows
    return "rational-function identity exact on all diagrams in range"


def check_cycle_residue_routes(caps: IdentityCaps) -> str:
    """Residue, character, and generating-series routes agree."""
    for lam in _diagrams(caps.lambda_cap):
        series_vals = observables.psharp_cycle_values(lam, caps.index_cap)
        for k in range(1, caps.index_cap + 1):
            by_char = observables.eval_psharp((k,), lam)
            by_residue = observables.eval_psharp_residue(k, lam)
            assert by_char == by_residue == series_vals[k - 1], (lam.rows, k)
    return "three routes agree exactly"


def check_unit_part_product_rule(caps: IdentityCaps) -> str:
    """Appending a unit part: multiply by the box count and subtract |sigma| times."""
    sigmas = [r for d in range(0, caps.index_cap) for r in partition_tuples(d)]
    for lam in _diagrams(caps.lambda_cap):
        n = lam.n
        for sigma in sigmas:
            lhs = observables.eval_psharp(sort_partition(sigma + (1,)), lam)
            ps = observables.eval_psharp(sigma, lam)
            assert lhs == ps * n - sum(sigma) * ps, (lam.rows, sigma)
    return f"{len(sigmas)} partitions against all diagrams in range"


def check_conjugation_symmetries(caps: IdentityCaps) -> str:
    rhos = [r for d in range(1, caps.index_cap + 1) for r in partition_tuples(d)]
    for lam in _diagrams(caps.lambda_cap):
        conj = lam.conjugate()
        for k in range(1, caps.index_cap + 1):
            assert observables.eval_p(k, conj) == (-1) ** (k - 1) * observables.eval_p(k, lam)
            if k >= 2:
                assert observables.eval_ptilde(k, conj) == (-1) ** k * observables.eval_ptilde(k, lam)
        for rho in rhos:
            sign = (-1) ** (sum(rho) + len(rho))
            assert observables.eval_psharp(rho, conj) == sign * observables.eval_psharp(rho, lam), (
                lam.rows, rho,
            )
    return "all three symmetry rules exact"


def check_moment_power_sum_relation(caps: IdentityCaps) -> str:
    """Transition-measure moments vs profile power sums: the classical h-p link."""
    kmax = min(caps.index_cap, 6)
    for lam in _diagrams(caps.small_lambda_cap):
        newton = observables.htilde_values(lam, kmax)
        for k in range(2, kmax + 1):
            assert observables.moment_htilde(k, lam) == newton[k - 2], (lam.rows, k)
    return "moment route equals power-sum route"


def check_scaling_covariance(caps: IdentityCaps) -> str:
    """Extrema power sums scale by s^-k when the profile is shrunk by s."""
    for lam in _diagrams(caps.small_lambda_cap):
        ext = lam.extrema()
        for s in (Fraction(2), Fraction(3), Fraction(1, 2)):
            for k in range(2, caps.index_cap + 1):
                scaled = sum((Fraction(x) / s) ** k for x in ext.minima) - sum(
                    (Fraction(y) / s) ** k for y in ext.maxima
                )
                assert scaled == Fraction(observables.eval_ptilde(k, lam)) / s**k
    return "exact at s in {2, 3, 1/2}"


def check_transition_pushforward(caps: IdentityCaps) -> str:
    """Rescaling all atom positions leaves the masses unchanged."""
    for lam in _diagrams(caps.small_lambda_cap):
        tm = observables.transition_measure(lam)
        assert all(m > 0 for m in tm.masses)
        for s in (Fraction(2), Fraction(3, 2)):
            x = [Fraction(v) / s for v in tm.positions]
            y = [Fraction(v) / s for v in lam.extrema().maxima]
            for i, xi in enumerate(x):
                num = Fraction(1)
                for yj in y:
                    num *= xi - yj
                den = Fraction(1)
                for j, xj in enumerate(x):
                    if j != i:
                        den *= xi - xj
                assert num / den == tm.masses[i], (lam.rows, s)
    return "masses invariant under rescaling"


# ---------------------------------------------------------------------------
# expectations

def check_expectation_table(caps: IdentityCaps) -> str:
    """Expectations of the character basis: falling factorial or zero."""
    rhos = [
        r for d in range(1, caps.expectation_rho_cap + 1) for r in partition_tuples(d)
    ]
    checked = 0
    for n in range(1, caps.expectation_n_cap + 1):
        lams = enumerate_partitions(n)
        weights = [plancherel_weight(l) for l in lams]
        assert sum(weights) == 1, n
        for rho in rhos:
            total = sum(
                observables.eval_psharp(rho, l) * w for l, w in zip(lams, weights)
            )
            if all(p == 1 for p in rho):
                assert total == falling_factorial(n, len(rho)), (rho, n)
            else:
                assert total == 0, (rho, n)
            checked += 1
    return f"{checked} (class, size) pairs, zero tolerance"


def check_expectation_polynomial_properties(caps: IdentityCaps) -> str:
    """Degree bound and reproduction beyond the fitting range."""
    samples = [
        Observable.generator("ptilde", 4),
        Observable.generator("ptilde", 6),
        Observable.monomial("psharp", (2, 2)),
        Observable.generator("ptilde", 3) * Observable.generator("ptilde", 3),
        Observable.generator("p", 2) * Observable.generator("p", 1),
    ]
    for f in samples:
        poly = plancherel.expectation_polynomial(f, validate_cap=6)
        bound = algebra.kerov_degree(f)
        bound = 0 if bound is None else bound
        assert 2 * poly.degree <= bound, (f.canonical_text(), poly.degree, bound)
        for n in (9, 10, 11):
            assert poly(n) == plancherel.exact_expectation(f, n), f.canonical_text()
    return f"{len(samples)} observables: degree bound and reproduction hold"


def check_lln_leading_coefficients(caps: IdentityCaps) -> str:
    """Leading coefficient of the expectation of each profile power sum."""
    for k in range(2, caps.index_cap + 1):
        poly = plancherel.expectation_polynomial(
            Observable.generator("ptilde", k), validate_cap=6
        )
        if k % 2:
            assert poly.monomial_coefficients() == (Fraction(0),), k
        else:
            assert poly.degree == k // 2, k
            assert poly.leading_coefficient == observables.omega_moment(k), k
    return "limit-curve moments recovered exactly"


# ---------------------------------------------------------------------------
# structure constants and filtrations

def _sigma_tau_pairs(cap: int):
    for a in range(1, cap):
        for b in range(1, cap - a + 1):
            for sigma in partition_tuples(a):
                for tau in partition_tuples(b):
                    yield sigma, tau


def check_structure_constants(caps: IdentityCaps) -> str:
    """Counting route equals expansion route; unit top coefficient; the
    subadditivity of every marked filtration; the unit-part removal rule."""
    cap = caps.structure_cap
    j_sets = [frozenset(), frozenset({1}), frozenset({2}), None]
    pairs = 0
    for sigma, tau in _sigma_tau_pairs(cap):
        counted = algebra.structure_constants(sigma, tau, cap=cap, method="count")
        expanded = algebra.structure_constants(sigma, tau, cap=cap, method="expand")
        assert counted == expanded, (sigma, tau)
        union = sort_partition(sigma + tau)
        assert counted.get(union) == 1, (sigma, tau)
        for J in j_sets:
            bound = algebra.size_with_marked(sigma, J) + algebra.size_with_marked(tau, J)
            for rho, f in counted.items():
                assert algebra.size_with_marked(rho, J) <= bound, (sigma, tau, rho, J)
        # full-size terms other than the union are strictly below in the
        # all-marked filtration
        for rho, f in counted.items():
            if rho != union:
                assert algebra.size_with_marked(rho, None) < algebra.size_with_marked(
                    sigma, None
                ) + algebra.size_with_marked(tau, None), (sigma, tau, rho)
        # removal rule against a single cycle
        if len(tau) == 1 and tau[0] >= 2:
            k = tau[0]
            mult = multiplicities(sigma).get(k, 0)
            if mult:
                target = sort_partition(
                    tuple(p for i, p in enumerate(sigma) if i != sigma.index(k))
                    + (1,) * k
                )
                assert counted.get(target) == k * mult, (sigma, tau)
        pairs += 1
    return f"{pairs} pairs, both routes agree with all filtration properties"


def check_structure_symmetry(caps: IdentityCaps) -> str:
    cap = min(caps.structure_cap, 6)
    for sigma, tau in _sigma_tau_pairs(cap):
        a = algebra.structure_constants(sigma, tau, cap=cap)
        b = algebra.structure_constants(tau, sigma, cap=cap)
        assert a == b, (sigma, tau)
    return "symmetric in the two factors"


def check_filtration_weight_agreement(caps: IdentityCaps) -> str:
    """The all-marked filtration equals the weight filtration."""
    kmax = caps.leading_kmax
    elements = []
    for k in range(1, kmax + 1):
        elements.append(algebra.psharp_in_p(k))
    for k in range(2, kmax + 1):
        elements.append(algebra.ptilde_in_p(k))
    elements.append(algebra.psharp_in_p(2) * algebra.psharp_in_p(3))
    elements.append(algebra.ptilde_in_p(2) * algebra.ptilde_in_p(4))
    for e in elements:
        assert algebra.filtration_degree(e, None) == algebra.weight_degree(e)
    return f"{len(elements)} elements"


def check_leading_term_theorems(caps: IdentityCaps) -> str:
    report = algebra.verify_leading_term_theorems(caps.leading_kmax)
    bad = [c for c in report.checks if not c.ok]
    assert not bad, "\n".join(c.describe() for c in bad)
    return f"{len(report.checks)} symbolic checks"


def check_evaluation_homomorphism(caps: IdentityCaps) -> str:
    """Evaluation commutes with every basis conversion."""
    rng = random.Random(99)
    diagrams = _diagrams(caps.small_lambda_cap)
    bases = list(algebra.BASES)
    for trial in range(6):
        basis = bases[trial % len(bases)]
        lo = 2 if basis != "p" and basis != "psharp" else 1
        coeffs = {}
        for _ in range(3):
            mono = sort_partition(
                tuple(rng.randint(lo, 4) for _ in range(rng.randint(0, 2)))
            )
            coeffs[mono] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        e = Observable(basis, coeffs)
        values = [e.evaluate(lam) for lam in diagrams]
        for target in bases:
            conv = e.to_basis(target)
            for lam, v in zip(diagrams, values):
                assert conv.evaluate(lam) == v, (basis, target, lam.rows)
    return "conversions preserve evaluation on all test diagrams"


def check_growth_marginals(caps: IdentityCaps) -> str:
    for n in range(caps.marginal_cap + 1):
        marg = plancherel.growth_marginal(n)
        assert sum(marg.values()) == 1, n
        for lam in enumerate_partitions(n):
            assert marg[lam.rows] == plancherel_weight(lam), (n, lam.rows)
    return f"chain marginal equals the measure for n <= {caps.marginal_cap}"


def check_reference_moments(caps: IdentityCaps) -> str:
    assert [observables.omega_moment(k) for k in (2, 4, 5, 6)] == [2, 6, 0, 20]
    assert [observables.semicircle_moment(k) for k in (2, 3, 4, 6)] == [1, 0, 2, 5]
    assert observables.omega_value(2.0) == 2.0 and observables.omega_value(-2.0) == 2.0
    assert abs(observables.omega_value(0.0) - 4 / 3.141592653589793) < 1e-15
    return "moment tables and curve endpoints"


CHECKS = [
    ("frobenius-window", check_frobenius_window),
    ("extrema-roundtrip", check_extrema_roundtrip),
    ("conjugation-extrema", check_conjugation_reverses_extrema),
    ("profile-area", check_profile_area),
    ("profile-lipschitz", check_profile_lipschitz),
    ("burnside", check_burnside),
    ("column-orthogonality", check_column_orthogonality),
    ("character-conjugation-sign", check_character_conjugation_sign),
    ("profile-sum-linear-rule", check_profile_sum_linear_rule),
    ("generating-function-identity", check_generating_function_identity),
    ("cycle-residue-routes", check_cycle_residue_routes),
    ("unit-part-product-rule", check_unit_part_product_rule),
    ("conjugation-symmetries", check_conjugation_symmetries),
    ("moment-power-sum-relation", check_moment_power_sum_relation),
    ("scaling-covariance", check_scaling_covariance),
    ("transition-pushforward", check_transition_pushforward),
    ("reference-moments", check_reference_moments),
    ("expectation-table", check_expectation_table),
    ("expectation-polynomial", check_expectation_polynomial_properties),
    ("lln-leading-coefficients", check_lln_leading_coefficients),
    ("structure-constants", check_structure_constants),
    ("structure-symmetry", check_structure_symmetry),
    ("filtration-weight-agreement", check_filtration_weight_agreement),
    ("leading-term-theorems", check_leading_term_theorems),
    ("evaluation-homomorphism", check_evaluation_homomorphism),
    ("growth-marginals", check_growth_marginals),
]


def run_identity_suite(caps: IdentityCaps | None = None, names=None) -> list[CheckResult]:
    caps = caps or IdentityCaps()
    results = []
    for name, fn in CHECKS:
        if names is not None and name not in names:
            continue
        start = time.perf_counter()
        try:
            detail = fn(caps)
            ok = True
        except AssertionError as exc:  # exact check failed
            detail = f"FAILED: {exc}"
            ok = False
        results.append(CheckResult(name, ok, detail, time.perf_counter() - start))
    return results
