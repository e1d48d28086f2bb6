"""Pointwise evaluation of observable families on Young diagrams.

All diagram-level values are exact rationals; floating point only enters in
the fluctuation functionals at the final division by half-integer powers of
the box count, and in the reference-curve evaluators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from . import series
from .characters import character, dimension
from .partitions import (
    YoungDiagram,
    falling_factorial,
    frobenius_coords,
    profile_extrema,
    sort_partition,
)

# ---------------------------------------------------------------------------
# generator families evaluated on a diagram


@lru_cache(maxsize=65536)
def _p_values(rows: tuple[int, ...], kmax: int) -> tuple[Fraction, ...]:
    fc = frobenius_coords(YoungDiagram(rows))
    out = []
    for k in range(1, kmax + 1):
        total = sum(a**k - (-b) ** k for a, b in zip(fc.a2, fc.b2))
        out.append(Fraction(total, 2**k))
    return tuple(out)


def eval_p(k: int, diagram: YoungDiagram) -> Fraction:
    """Super power sum of the modified Frobenius coordinates."""
    if k < 1:
        raise ValueError("index must be >= 1")
    return _p_values(diagram.rows, k)[k - 1]


def eval_ptilde(k: int, diagram: YoungDiagram) -> int:
    """Signed power sum of the profile extrema; identically 0 for k = 1."""
    if k < 1:
        raise ValueError("index must be >= 1")
    ext = profile_extrema(diagram)
    return sum(x**k for x in ext.minima) - sum(y**k for y in ext.maxima)


def eval_psharp(rho, diagram: YoungDiagram) -> Fraction:
    """Normalized character value scaled by a falling factorial.

    For |diagram| >= |rho| this is n^(falling r) * chi_(rho + fixed points) / dim,
    and 0 on smaller diagrams.
    """
    rho = sort_partition(rho)
    r = sum(rho)
    n = diagram.n
    if n < r:
        return Fraction(0)
    padded = rho + (1,) * (n - r)
    chi = character(diagram, padded)
    return Fraction(falling_factorial(n, r) * chi, dimension(diagram))


# ---------------------------------------------------------------------------
# residue route for single-cycle normalized characters

def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] += ai * bj
    return out


def _poly_from_roots(roots) -> list[Fraction]:
    out = [Fraction(1)]
    for r in roots:
        out = _poly_mul(out, [-Fraction(r), Fraction(1)])
    return out


def _poly_mod(num: list[Fraction], den: list[Fraction]) -> list[Fraction]:
    num = list(num)
    d = len(den) - 1
    lead = den[-1]
    while len(num) - 1 >= d and any(num):
        shift = len(num) - 1 - d
        factor = num[-1] / lead
        if factor:
            for i in range(d + 1):
                num[shift + i] -= factor * den[i]
        num.pop()
    return num


def eval_psharp_residue(k: int, diagram: YoungDiagram) -> Fraction:
    """Single-cycle normalized character via the generating-function residue.

    Expands -(1/k) (z - 1/2)(z - 3/2)...(z - k + 1/2) Phi(z)/Phi(z - k) in
    descending powers of z, where Phi is the incontractible fraction built
    from the Frobenius coordinates, and reads off the coefficient of 1/z.
    """
    if k < 1:
        raise ValueError("index must be >= 1")
    fc = frobenius_coords(diagram)
    a = [Fraction(v, 2) for v in fc.a2]
    b = [Fraction(v, 2) for v in fc.b2]
    prefactor = _poly_from_roots(Fraction(2 * j - 1, 2) for j in range(1, k + 1))
    num = _poly_mul(prefactor, _poly_from_roots([-bi for bi in b]))
    num = _poly_mul(num, _poly_from_roots([ai + k for ai in a]))
    den = _poly_mul(_poly_from_roots(a), _poly_from_roots([k - bi for bi in b]))
    rem = _poly_mod(num, den)
    deg_den = len(den) - 1
    coeff = rem[deg_den - 1] if deg_den >= 1 and len(rem) >= deg_den else Fraction(0)
    return -coeff / (k * den[-1])


# ---------------------------------------------------------------------------
# transition measures

@dataclass(frozen=True)
class TransitionMeasure:
    """Finitely supported probability measure sitting on the profile minima."""

    atoms: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        masses = [m for _, m in self.atoms]
        if any(m <= 0 for m in masses):
            raise ValueError("all masses must be strictly positive")
        if sum(masses) != 1:
            raise ValueError("masses must sum to 1")
        if sum(x * m for x, m in self.atoms) != 0:
            raise ValueError("first moment must vanish")

    def moment(self, k: int) -> Fraction:
        return sum((Fraction(x) ** k) * m for x, m in self.atoms)

    @property
    def positions(self) -> tuple[int, ...]:
        return tuple(x for x, _ in self.atoms)

    @property
    def masses(self) -> tuple[Fraction, ...]:
        return tuple(m for _, m in self.atoms)


@lru_cache(maxsize=65536)
def _transition_atoms(rows: tuple[int, ...]) -> tuple[tuple[int, Fraction], ...]:
    ext = profile_extrema(YoungDiagram(rows))
    minima, maxima = ext.minima, ext.maxima
    atoms = []
    for i, x in enumerate(minima):
        num = 1
        for y in maxima:
            num *= x - y
        den = 1
        for j, x2 in enumerate(minima):
            if j != i:
                den *= x - x2
        atoms.append((x, Fraction(num, den)))
    return tuple(atoms)


def transition_measure(diagram: YoungDiagram) -> TransitionMeasure:
    """Partial-fraction weights of prod(z - maxima) / prod(z - minima)."""
    return TransitionMeasure(_transition_atoms(diagram.rows))


def moment_htilde(k: int, diagram: YoungDiagram) -> Fraction:
    """k-th moment of the transition measure; equals |diagram| at k = 2."""
    if k < 0:
        raise ValueError("index must be >= 0")
    return transition_measure(diagram).moment(k)


# ---------------------------------------------------------------------------
# moment / cumulant transforms evaluated numerically on one diagram

@lru_cache(maxsize=65536)
def _ptilde_values(rows: tuple[int, ...], kmax: int) -> tuple[int, ...]:
    d = YoungDiagram(rows)
    return tuple(eval_ptilde(k, d) for k in range(1, kmax + 1))


@lru_cache(maxsize=65536)
def _htilde_values(rows: tuple[int, ...], kmax: int) -> tuple[Fraction, ...]:
    """Moments of the transition measure out of the extrema power sums.

    The two sequences are linked exactly like Newton power sums and complete
    homogeneous sums, with the first power sum specialized to zero.
    """
    pt = _ptilde_values(rows, kmax)
    arg = [Fraction(0)] + [Fraction(0)] + [Fraction(pt[k - 1], k) for k in range(2, kmax + 1)]
    h = series.exp(arg, kmax)
    return tuple(h[2: kmax + 1])


def htilde_values(diagram: YoungDiagram, kmax: int) -> tuple[Fraction, ...]:
    """(h~_2, ..., h~_kmax) computed from the profile power sums."""
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    return _htilde_values(diagram.rows, kmax)


def free_cumulants(diagram: YoungDiagram, kmax: int) -> tuple[Fraction, ...]:
    """(f~_2, ..., f~_kmax): free cumulants of the transition measure.

    Uses f_k = -(1/(k-1)) [t^k] H(t)^-(k-1) on the moment generating series.
    """
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    h = _htilde_values(diagram.rows, kmax)
    hseries = [Fraction(1), Fraction(0)] + list(h)
    hinv = series.inverse(hseries, kmax)
    out = []
    powered = [Fraction(1)] + [Fraction(0)] * kmax
    for k in range(2, kmax + 1):
        powered = series.mul(powered, hinv, kmax)  # H^-(k-1)
        out.append(-Fraction(1, k - 1) * powered[k])
    return tuple(out)


@lru_cache(maxsize=65536)
def _psharp_cycle_values(rows: tuple[int, ...], kmax: int) -> tuple[Fraction, ...]:
    """Single-cycle normalized characters from the exponential product series.

    Identical to the character route (tested against it) but needs only the
    Frobenius power sums, so it stays fast on large diagrams.
    """
    out = []
    for k in range(1, kmax + 1):
        order = k + 1
        pvals = _p_values(rows, max(order, 1))
        expo = [Fraction(0)] * (order + 1)
        for j in range(1, order):
            pj = pvals[j - 1]
            if pj == 0:
                continue
            for i in range(1, order + 1 - j):
                expo[i + j] -= Fraction(pj, j) * comb(j - 1 + i, i) * k**i
        exp_part = series.exp(expo, order)
        prefactor = [Fraction(1)]
        for j in range(1, k + 1):
            prefactor = _poly_mul(prefactor, [Fraction(1), -Fraction(2 * j - 1, 2)])
        total = series.mul(list(prefactor), exp_part, order)
        out.append(-Fraction(1, k) * total[order])
    return tuple(out)


def psharp_cycle_values(diagram: YoungDiagram, kmax: int) -> tuple[Fraction, ...]:
    return _psharp_cycle_values(diagram.rows, kmax)


# ---------------------------------------------------------------------------
# reference curves and classical polynomial systems

def omega_moment(k: int) -> Fraction:
    """Signed extrema power sum of the limit curve: (2m)!/(m!m!) at k=2m."""
    if k < 1:
        raise ValueError("index must be >= 1")
    if k % 2:
        return Fraction(0)
    m = k // 2
    return Fraction(math.factorial(2 * m), math.factorial(m) ** 2)


def semicircle_moment(k: int) -> Fraction:
    """Moments of the semicircle law on [-2, 2]: Catalan numbers at even k."""
    if k < 0:
        raise ValueError("index must be >= 0")
    if k % 2:
        return Fraction(0)
    m = k // 2
    return Fraction(comb(2 * m, m), m + 1)


def omega_value(x: float) -> float:
    """The limit-shape curve: (2/pi)(x asin(x/2) + sqrt(4 - x^2)) inside [-2,2]."""
    if abs(x) >= 2.0:
        return abs(x)
    return (2.0 / math.pi) * (x * math.asin(x / 2.0) + math.sqrt(4.0 - x * x))


def semicircle_density(x: float) -> float:
    if abs(x) >= 2.0:
        return 0.0
    return math.sqrt(4.0 - x * x) / (2.0 * math.pi)


@dataclass(frozen=True)
class ReferenceCurve:
    kind: str
    value: callable
    moment: callable


def omega_curve() -> ReferenceCurve:
    return ReferenceCurve("omega", omega_value, omega_moment)


def semicircle_curve() -> ReferenceCurve:
    return ReferenceCurve("semicircle", semicircle_density, semicircle_moment)


@dataclass(frozen=True)
class Poly:
    """Dense univariate polynomial with exact coefficients, ascending degree."""

    coeffs: tuple[Fraction, ...]

    def __call__(self, x):
        out = 0
        for c in reversed(self.coeffs):
            out = out * x + c
        return out

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1]


def chebyshev_u(k: int) -> Poly:
    """Second-kind Chebyshev polynomial rescaled to [-2, 2]: U_k(x/2)."""
    if k < 0:
        raise ValueError("index must be >= 0")
    coeffs = [Fraction(0)] * (k + 1)
    for j in range(k // 2 + 1):
        coeffs[k - 2 * j] = Fraction((-1) ** j * comb(k - j, j))
    return Poly(tuple(coeffs))


def chebyshev_t(k: int) -> Poly:
    """First-kind Chebyshev polynomial rescaled to [-2, 2]: 2 T_k(x/2)."""
    if k < 1:
        raise ValueError("index must be >= 1")
    coeffs = [Fraction(0)] * (k + 1)
    for j in range(k // 2 + 1):
        coeffs[k - 2 * j] = Fraction((-1) ** j * k * comb(k - j, j), k - j)
    return Poly(tuple(coeffs))


def hermite_mod(m: int) -> Poly:
    """Monic Hermite polynomial orthogonal for the standard Gaussian."""
    if m < 0:
        raise ValueError("index must be >= 0")
    coeffs = [Fraction(0)] * (m + 1)
    for j in range(m // 2 + 1):
        coeffs[m - 2 * j] = (
            Fraction(math.factorial(m), math.factorial(j) * math.factorial(m - 2 * j))
            * Fraction(-1, 2) ** j
        )
    return Poly(tuple(coeffs))


# ---------------------------------------------------------------------------
# centered and scaled fluctuation functionals

@dataclass(frozen=True)
class FluctuationValues:
    """Float values of the fluctuation functionals of one diagram.

    Each dict maps the index k to the value; the exact-rational numerators are
    formed first and a single float division by n^(k/2)-type factors happens
    at the end, so no cancellation is lost.
    """

    n: int
    q: dict
    g: dict
    eta: dict
    u: dict
    t: dict


def _q_numerators(rows: tuple[int, ...], kmax: int) -> dict[int, Fraction]:
    """Exact numerators q_k * (k+1) * n^(k/2), i.e. centered extrema sums."""
    n = sum(rows)
    pt = _ptilde_values(rows, kmax + 1)
    out = {}
    for k in range(1, kmax + 1):
        num = Fraction(pt[k])  # index k -> power sum of order k+1
        if k % 2 == 1:
            m = (k + 1) // 2
            num -= omega_moment(2 * m) * n**m
        out[k] = num
    return out


def _g_numerators(rows: tuple[int, ...], kmax: int) -> dict[int, Fraction]:
    """Exact numerators g_k * n^((k-1)/2), i.e. centered transition moments."""
    n = sum(rows)
    h = _htilde_values(rows, max(kmax, 2))
    out = {0: Fraction(0), 1: Fraction(0), 2: Fraction(0)}
    for k in range(3, kmax + 1):
        num = h[k - 2]
        if k % 2 == 0:
            num -= semicircle_moment(k) * n ** (k // 2)
        out[k] = num
    return out


def fluctuation_functionals(diagram: YoungDiagram, kmax: int) -> FluctuationValues:
    """Centered/scaled fluctuation functionals of one diagram.

    q_k: scaled profile power sums, with the limit-curve value removed at odd k.
    g_k: scaled transition-measure moments, semicircle value removed at even k.
    eta_k: normalized single-cycle character values.
    u_k: second-kind Chebyshev pairing of the profile deviation (u_0 = 0).
    t_k: first-kind Chebyshev pairing of the measure deviation (t_1 = t_2 = 0).
    """
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    if diagram.n < 1:
        raise ValueError("diagram must be nonempty")
    rows = diagram.rows
    n = diagram.n
    qnum = _q_numerators(rows, kmax + 1)
    gnum = _g_numerators(rows, kmax)
    psharp = _psharp_cycle_values(rows, kmax)

    q = {k: float(qnum[k]) / ((k + 1) * n ** (k / 2)) for k in range(1, kmax + 1)}
    g = {k: float(gnum[k]) / n ** ((k - 1) / 2) for k in range(1, kmax + 1)}
    eta = {
        k: float(psharp[k - 1]) / (math.sqrt(k) * n ** (k / 2))
        for k in range(2, kmax + 1)
    }

    u = {0: 0.0}
    for k in range(1, kmax + 1):
        acc = Fraction(0)
        for j in range(k // 2 + 1):
            idx = k + 1 - 2 * j
            if idx < 2:
                continue  # q_1 = 0
            acc += Fraction((-1) ** j * comb(k - j, j), (idx + 1) * idx) * qnum[idx] * n**j
        u[k] = float(acc) / n ** ((k + 1) / 2)

    t = {}
    for k in range(1, kmax + 1):
        acc = Fraction(0)
        for j in range(k // 2 + 1):
            idx = k - 2 * j
            if idx < 3:
                continue  # g_0 = g_1 = g_2 = 0
            acc += Fraction((-1) ** j * k * comb(k - j, j), k - j) * gnum[idx] * n**j
        t[k] = float(acc) / n ** ((k - 1) / 2)

    return FluctuationValues(n=n, q=q, g=g, eta=eta, u=u, t=t)
