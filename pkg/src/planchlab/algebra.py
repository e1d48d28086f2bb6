"""Exact symbolic model of the algebra of polynomial functions on diagrams.

The algebra is polynomial in any one of several generator systems; elements
are kept as dictionaries from exponent multi-indices (partition-like tuples)
to rational coefficients, tagged with the generator system:

- ``p``      super power sums of the Frobenius coordinates (index >= 1);
- ``ptilde`` signed power sums of the profile extrema (index >= 2);
- ``htilde`` transition-measure moments (index >= 2);
- ``fcum``   free cumulants (index >= 2);
- ``psharp`` the inhomogeneous basis of falling-factorial-normalized
  character values, indexed by whole partitions (not monomials in the
  single-cycle elements).

Conversions route through the ``p`` system, all exact.  The extended algebra
adjoins half-integer powers of the box-count element; its basis elements are
pairs (partition without unit parts, integer half-power).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from . import observables, series
from .partitions import (
    YoungDiagram,
    multiplicities,
    partition_tuples,
    partitions_up_to,
    sort_partition,
    z_factor,
)

MULTIPLICATIVE_BASES = ("p", "ptilde", "htilde", "fcum")
BASES = MULTIPLICATIVE_BASES + ("psharp",)
_MIN_INDEX = {"p": 1, "ptilde": 2, "htilde": 2, "fcum": 2, "psharp": 1}

STRUCTURE_CAP = 8
FIT_CAP = 8


def _merge_monomials(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(sorted(a + b, reverse=True))


def _mono_key(mono: tuple[int, ...]):
    return (sum(mono), mono)


class Observable:
    """An exact element of the algebra in a named generator system."""

    __slots__ = ("basis", "coeffs")

    def __init__(self, basis: str, coeffs=None):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        clean: dict[tuple[int, ...], Fraction] = {}
        lo = _MIN_INDEX[basis]
        for mono, c in (coeffs or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            mono = tuple(mono)
            if any(i < lo for i in mono) or list(mono) != sorted(mono, reverse=True):
                raise ValueError(f"bad exponent multi-index {mono!r} for basis {basis!r}")
            clean[mono] = c
        self.basis = basis
        self.coeffs = clean

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, basis: str) -> "Observable":
        return cls(basis, {})

    @classmethod
    def one(cls, basis: str) -> "Observable":
        return cls(basis, {(): Fraction(1)})

    @classmethod
    def constant(cls, basis: str, c) -> "Observable":
        return cls(basis, {(): Fraction(c)})

    @classmethod
    def generator(cls, basis: str, k: int) -> "Observable":
        return cls(basis, {(k,): Fraction(1)})

    @classmethod
    def monomial(cls, basis: str, mono, c=1) -> "Observable":
        return cls(basis, {tuple(mono): Fraction(c)})

    # -- ring structure ------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def _scalar_added(self, c) -> "Observable":
        out = dict(self.coeffs)
        out[()] = out.get((), Fraction(0)) + Fraction(c)
        return Observable(self.basis, out)

    def __add__(self, other):
        if isinstance(other, Observable):
            if other.basis != self.basis:
                raise ValueError(f"basis mismatch: {self.basis} vs {other.basis}")
            out = dict(self.coeffs)
            for mono, c in other.coeffs.items():
                out[mono] = out.get(mono, Fraction(0)) + c
            return Observable(self.basis, out)
        if isinstance(other, (int, Fraction)):
            return self._scalar_added(other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Observable(self.basis, {m: -c for m, c in self.coeffs.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self._scalar_added(-Fraction(other))
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return Observable.zero(self.basis)
            return Observable(self.basis, {m: c * other for m, c in self.coeffs.items()})
        if not isinstance(other, Observable):
            return NotImplemented
        if other.basis != self.basis:
            raise ValueError(f"basis mismatch: {self.basis} vs {other.basis}")
        if self.basis in MULTIPLICATIVE_BASES:
            out: dict[tuple[int, ...], Fraction] = {}
            for m1, c1 in self.coeffs.items():
                for m2, c2 in other.coeffs.items():
                    key = _merge_monomials(m1, m2)
                    out[key] = out.get(key, Fraction(0)) + c1 * c2
            return Observable(self.basis, out)
        # psharp basis: expand products of basis elements
        out = {}
        for r1, c1 in self.coeffs.items():
            for r2, c2 in other.coeffs.items():
                c = c1 * c2
                for rho, f in _psharp_basis_product(r1, r2).items():
                    out[rho] = out.get(rho, Fraction(0)) + c * f
        return Observable("psharp", out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = Observable.one(self.basis)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Observable):
            return self.basis == other.basis and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return self.coeffs == {(): Fraction(other)}
        return NotImplemented

    __hash__ = None

    def __repr__(self):
        return f"Observable({self.basis!r}, {self.canonical_text()!r})"

    # -- semantics -----------------------------------------------------------
    def evaluate(self, diagram: YoungDiagram) -> Fraction:
        """Exact value on a diagram; independent of the basis."""
        total = Fraction(0)
        for mono, c in self.coeffs.items():
            term = c
            if self.basis == "psharp":
                term *= observables.eval_psharp(mono, diagram)
            elif self.basis == "fcum":
                if mono:
                    vals = observables.free_cumulants(diagram, max(mono))
                    for i in mono:
                        term *= vals[i - 2]
            else:
                for i in mono:
                    if self.basis == "p":
                        term *= observables.eval_p(i, diagram)
                    elif self.basis == "ptilde":
                        term *= observables.eval_ptilde(i, diagram)
                    else:
                        term *= observables.moment_htilde(i, diagram)
            total += term
        return total

    def to_basis(self, target: str) -> "Observable":
        if target not in BASES:
            raise ValueError(f"unknown basis {target!r}")
        if target == self.basis:
            return self
        in_p = _to_p(self)
        if target == "p":
            return in_p
        if target == "ptilde":
            return _p_to_ptilde(in_p)
        if target == "htilde":
            return _ptilde_to_htilde(_p_to_ptilde(in_p))
        if target == "psharp":
            return _p_to_psharp(in_p)
        return _htilde_to_fcum(_ptilde_to_htilde(_p_to_ptilde(in_p)))

    def canonical_text(self) -> str:
        """Canonical serialization: sorted terms, explicit rational coefficients."""
        if not self.coeffs:
            return "0"
        names = {"p": "p", "ptilde": "pt", "htilde": "ht", "fcum": "fc", "psharp": "ps"}
        g = names[self.basis]
        parts = []
        for mono in sorted(self.coeffs, key=_mono_key, reverse=True):
            c = self.coeffs[mono]
            if self.basis == "psharp":
                text = f"{g}({','.join(map(str, mono))})" if mono else "1"
            elif mono:
                factors = []
                for i in sorted(set(mono), reverse=True):
                    e = mono.count(i)
                    factors.append(f"{g}{i}" + (f"^{e}" if e > 1 else ""))
                text = "*".join(factors)
            else:
                text = "1"
            if c == 1 and text != "1":
                parts.append(text)
            elif c == -1 and text != "1":
                parts.append(f"-{text}")
            elif text == "1":
                parts.append(str(c))
            else:
                parts.append(f"{c}*{text}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")


# ---------------------------------------------------------------------------
# generator conversions into and out of the p system

@lru_cache(maxsize=None)
def ptilde_in_p(k: int) -> Observable:
    """Profile power sums through Frobenius power sums (an exact linear rule)."""
    if k < 2:
        raise ValueError("index must be >= 2")
    coeffs = {}
    for j in range(0, (k - 1) // 2 + 1):
        idx = k - 1 - 2 * j
        if idx < 1:
            continue  # the index-0 super power sum vanishes identically
        coeffs[(idx,)] = Fraction(comb(k, 2 * j + 1), 4**j)
    return Observable("p", coeffs)


@lru_cache(maxsize=None)
def p_in_ptilde(k: int) -> Observable:
    """Inverse of the linear rule; p_1 maps to half the degree-2 profile sum."""
    if k < 1:
        raise ValueError("index must be >= 1")
    out = Observable.generator("ptilde", k + 1)
    for j in range(1, (k + 1) // 2 + 1):
        idx = k - 2 * j
        if idx < 1:
            continue
        out = out - Fraction(comb(k + 1, 2 * j + 1), 4**j) * p_in_ptilde(idx)
    return Fraction(1, k + 1) * out


@lru_cache(maxsize=None)
def htilde_in_ptilde(k: int) -> Observable:
    """Moments from power sums: the classical h-from-p rule with index 1 dropped."""
    if k < 2:
        raise ValueError("index must be >= 2")
    zero = Observable.zero("ptilde")
    arg = [zero, zero] + [
        Fraction(1, j) * Observable.generator("ptilde", j) for j in range(2, k + 1)
    ]
    return series.exp(arg, k)[k]


@lru_cache(maxsize=None)
def ptilde_in_htilde(k: int) -> Observable:
    """Power sums from moments: the classical p-from-h rule with index 1 dropped."""
    if k < 2:
        raise ValueError("index must be >= 2")
    zero = Observable.zero("htilde")
    h = [Observable.one("htilde"), zero] + [
        Observable.generator("htilde", j) for j in range(2, k + 1)
    ]
    return k * series.log(h, k)[k]


@lru_cache(maxsize=None)
def fcum_in_htilde(k: int) -> Observable:
    """Free cumulants from moments via the inverse-power generating series."""
    if k < 2:
        raise ValueError("index must be >= 2")
    zero = Observable.zero("htilde")
    h = [Observable.one("htilde"), zero] + [
        Observable.generator("htilde", j) for j in range(2, k + 1)
    ]
    powered = series.power(h, -(k - 1), k)
    return -Fraction(1, k - 1) * powered[k]


def free_cumulant_series(kmax: int) -> list[Observable]:
    """Free cumulants of index 2..kmax as exact polynomials in the moments."""
    if kmax < 2:
        raise ValueError("kmax must be >= 2")
    return [fcum_in_htilde(k) for k in range(2, kmax + 1)]


@lru_cache(maxsize=None)
def psharp_in_p(k: int) -> Observable:
    """Single-cycle normalized characters via the exponential product series.

    The coefficient of t^(k+1) of
    -(1/k) prod_{j=1..k} (1 - (j - 1/2) t) * exp(sum_j p_j t^j / j (1 - (1-kt)^-j))
    as a polynomial in the p generators.
    """
    if k < 1:
        raise ValueError("index must be >= 1")
    order = k + 1
    zero = Observable.zero("p")
    expo = [zero for _ in range(order + 1)]
    for j in range(1, order):
        pj = Observable.generator("p", j)
        for i in range(1, order + 1 - j):
            expo[i + j] = expo[i + j] - Fraction(comb(j - 1 + i, i) * k**i, j) * pj
    exp_part = series.exp(expo, order)
    pref = [Fraction(1)]
    for j in range(1, k + 1):
        pref = [
            (pref[i] if i < len(pref) else Fraction(0))
            - (pref[i - 1] * Fraction(2 * j - 1, 2) if i >= 1 else Fraction(0))
            for i in range(len(pref) + 1)
        ]
    total = series.mul([c * Observable.one("p") for c in pref], exp_part, order)
    return -Fraction(1, k) * total[order]


# -- evaluation-fitting of the psharp basis into the p system ----------------

def _gauss_solve_batch(matrix, rhs_cols):
    """Exact solve of an overdetermined consistent system for many right sides.

    matrix: m x n rows of Fractions (m >= n, full column rank); rhs_cols: list
    of m-vectors.  Returns one n-vector per right side.  Raises on rank
    deficiency or inconsistency.
    """
    m, n = len(matrix), len(matrix[0])
    q = len(rhs_cols)
    aug = [list(matrix[i]) + [col[i] for col in rhs_cols] for i in range(m)]
    piv_rows = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, m) if aug[r][col] != 0), None)
        if pivot is None:
            raise ValueError("singular fit system: enlarge the evaluation set")
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = 1 / aug[row][col]
        aug[row] = [v * inv for v in aug[row]]
        for r in range(m):
            if r != row and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[row])]
        piv_rows.append(col)
        row += 1
    for r in range(row, m):
        if any(aug[r][n + j] != 0 for j in range(q)):
            raise ValueError("inconsistent fit system")
    return [[aug[i][n + j] for i in range(n)] for j in range(q)]


@lru_cache(maxsize=None)
def _fit_table(degree: int) -> dict:
    """p-expansions of all psharp basis elements of the given size, by fitting.

    Evaluates them on every diagram with at most degree + 2 boxes and solves
    the exact linear system against the p-monomials of degree <= degree.
    """
    monos = [m for d in range(degree + 1) for m in partition_tuples(d)]
    diagrams = partitions_up_to(degree + 2)
    matrix = []
    for lam in diagrams:
        pv = [observables.eval_p(i, lam) for i in range(1, degree + 1)]
        row = []
        for mono in monos:
            v = Fraction(1)
            for i in mono:
                v *= pv[i - 1]
            row.append(v)
        matrix.append(row)
    rhos = list(partition_tuples(degree))
    rhs = [[observables.eval_psharp(rho, lam) for lam in diagrams] for rho in rhos]
    sols = _gauss_solve_batch(matrix, rhs)
    out = {}
    for rho, sol in zip(rhos, sols):
        out[rho] = Observable("p", {m: c for m, c in zip(monos, sol) if c != 0})
    return out


def psharp_rho_in_p(rho, cap: int = FIT_CAP) -> Observable:
    """p-expansion of one psharp basis element, by evaluation-fitting."""
    rho = sort_partition(rho)
    if sum(rho) > cap:
        raise ValueError(f"psharp expansion cap exceeded: |rho| = {sum(rho)} > {cap}")
    if not rho:
        return Observable.one("p")
    return _fit_table(sum(rho))[rho]


# -- conversion drivers -------------------------------------------------------

@lru_cache(maxsize=None)
def _gen_in_p(basis: str, k: int) -> Observable:
    if basis == "p":
        return Observable.generator("p", k)
    if basis == "ptilde":
        return ptilde_in_p(k)
    if basis == "htilde":
        return _to_p(htilde_in_ptilde(k))
    if basis == "fcum":
        return _to_p(fcum_in_htilde(k))
    raise ValueError(basis)


@lru_cache(maxsize=None)
def _mono_in_p(basis: str, mono: tuple[int, ...]) -> Observable:
    if basis == "psharp":
        return psharp_rho_in_p(mono)
    out = Observable.one("p")
    for i in mono:
        out = out * _gen_in_p(basis, i)
    return out


def _to_p(e: Observable) -> Observable:
    if e.basis == "p":
        return e
    out = Observable.zero("p")
    for mono, c in e.coeffs.items():
        out = out + c * _mono_in_p(e.basis, mono)
    return out


@lru_cache(maxsize=None)
def _p_mono_in_ptilde(mono: tuple[int, ...]) -> Observable:
    out = Observable.one("ptilde")
    for i in mono:
        out = out * p_in_ptilde(i)
    return out


def _p_to_ptilde(e: Observable) -> Observable:
    out = Observable.zero("ptilde")
    for mono, c in e.coeffs.items():
        out = out + c * _p_mono_in_ptilde(mono)
    return out


@lru_cache(maxsize=None)
def _ptilde_mono_in_htilde(mono: tuple[int, ...]) -> Observable:
    out = Observable.one("htilde")
    for i in mono:
        out = out * ptilde_in_htilde(i)
    return out


def _ptilde_to_htilde(e: Observable) -> Observable:
    out = Observable.zero("htilde")
    for mono, c in e.coeffs.items():
        out = out + c * _ptilde_mono_in_htilde(mono)
    return out


@lru_cache(maxsize=None)
def _fcum_mono_in_htilde(mono: tuple[int, ...]) -> Observable:
    out = Observable.one("htilde")
    for i in mono:
        out = out * fcum_in_htilde(i)
    return out


def _triangular_extract(e: Observable, expander, target: str) -> Observable:
    """Rewrite e over a family whose expansions are unitriangular in (deg, lex)."""
    out: dict[tuple[int, ...], Fraction] = {}
    work = e
    while work.coeffs:
        mono = max(work.coeffs, key=_mono_key)
        c = work.coeffs[mono]
        out[mono] = out.get(mono, Fraction(0)) + c
        work = work - c * expander(mono)
    return Observable(target, out)


def _htilde_to_fcum(e: Observable) -> Observable:
    return _triangular_extract(e, _fcum_mono_in_htilde, "fcum")


def _p_to_psharp(e: Observable) -> Observable:
    return _triangular_extract(e, lambda mono: psharp_rho_in_p(mono), "psharp")


# ---------------------------------------------------------------------------
# degrees and filtrations

def canonical_degree(e: Observable) -> int | None:
    """Maximal total degree over the p expansion; None for the zero element."""
    in_p = _to_p(e)
    return max((sum(m) for m in in_p.coeffs), default=None)


def weight_degree(e: Observable) -> int | None:
    """Maximal weight over the profile power-sum expansion."""
    pt = _p_to_ptilde(_to_p(e))
    return max((sum(m) for m in pt.coeffs), default=None)


def size_with_marked(rho: tuple[int, ...], J) -> int:
    """|rho| plus the number of parts whose size lies in J (J=None: all parts)."""
    mult = multiplicities(rho)
    if J is None:
        extra = sum(mult.values())
    else:
        extra = sum(m for part, m in mult.items() if part in J)
    return sum(rho) + extra


def filtration_degree(e: Observable, J) -> int | None:
    """Filtration degree in the character basis for the marked part-sizes J."""
    ps = e if e.basis == "psharp" else e.to_basis("psharp")
    return max((size_with_marked(rho, J) for rho in ps.coeffs), default=None)


def kerov_degree(e: Observable) -> int | None:
    return filtration_degree(e, frozenset({1}))


def top_weight_component(e: Observable) -> Observable:
    """Homogeneous part of maximal weight, in the profile power-sum system."""
    pt = _p_to_ptilde(_to_p(e))
    if not pt.coeffs:
        return pt
    w = max(sum(m) for m in pt.coeffs)
    return Observable("ptilde", {m: c for m, c in pt.coeffs.items() if sum(m) == w})


# ---------------------------------------------------------------------------
# structure constants

def _canonical_perm(rho: tuple[int, ...]) -> tuple[int, ...]:
    perm = list(range(sum(rho)))
    start = 0
    for part in rho:
        for i in range(part):
            perm[start + i] = start + (i + 1) % part
        start += part
    return tuple(perm)


def _perms_of_type(points: tuple[int, ...], cyc: tuple[int, ...]):
    """All permutations of the given points with the given cycle type, as dicts."""
    if not points:
        if not cyc:
            yield {}
        return
    anchor = points[0]
    rest = points[1:]
    seen = set()
    for idx, length in enumerate(cyc):
        if length in seen:
            continue
        seen.add(length)
        remaining_cyc = cyc[:idx] + cyc[idx + 1:]
        for companions in itertools.permutations(rest, length - 1):
            cycle = (anchor,) + companions
            used = set(cycle)
            mapping = {cycle[i]: cycle[(i + 1) % length] for i in range(length)}
            others = tuple(x for x in rest if x not in used)
            for sub in _perms_of_type(others, remaining_cyc):
                full = dict(mapping)
                full.update(sub)
                yield full


def _cycle_type_of(mapping: dict) -> tuple[int, ...]:
    seen = set()
    lens = []
    for start in mapping:
        if start in seen:
            continue
        length = 0
        x = start
        while x not in seen:
            seen.add(x)
            x = mapping[x]
            length += 1
        lens.append(length)
    return tuple(sorted(lens, reverse=True))


def count_cover_products(rho, sigma, tau) -> int:
    """Number of covering factorizations of a fixed permutation of type rho.

    Counts quadruples (X1, s1, X2, s2): X1 and X2 cover the ground set, s1 and
    s2 permute them with cycle types sigma and tau, and the extension of s1
    composed after the extension of s2 equals the fixed permutation.
    """
    rho, sigma, tau = sort_partition(rho), sort_partition(sigma), sort_partition(tau)
    r, a, b = sum(rho), sum(sigma), sum(tau)
    if r > a + b or r < max(a, b):
        return 0
    ground = tuple(range(r))
    s = _canonical_perm(rho)
    total = 0
    for x1 in itertools.combinations(ground, a):
        outside = [x for x in ground if x not in set(x1)]
        for s1 in _perms_of_type(x1, sigma):
            # s2 is forced: s2 = s1^{-1} o s
            s1_inv = {v: k for k, v in s1.items()}
            s2 = [s1_inv.get(s[x], s[x]) for x in ground]
            support = [x for x in ground if s2[x] != x]
            required = set(outside) | set(support)
            if len(required) > b:
                continue
            nontrivial = _cycle_type_of({x: s2[x] for x in support})
            padded = tuple(sorted(nontrivial + (1,) * (b - len(support)), reverse=True))
            if padded != tau:
                continue
            total += comb(r - len(required), b - len(required))
    return total


@lru_cache(maxsize=None)
def _structure_constants_counted(sigma, tau, cap) -> tuple:
    if sum(sigma) + sum(tau) > cap:
        raise ValueError(
            f"structure constant cap exceeded: {sum(sigma)} + {sum(tau)} > {cap}"
        )
    out = []
    for r in range(max(sum(sigma), sum(tau)), sum(sigma) + sum(tau) + 1):
        for rho in partition_tuples(r):
            g = count_cover_products(rho, sigma, tau)
            if g:
                f = Fraction(z_factor(sigma) * z_factor(tau) * g, z_factor(rho))
                out.append((rho, f))
    return tuple(out)


@lru_cache(maxsize=None)
def _structure_constants_expanded(sigma, tau) -> tuple:
    prod = psharp_rho_in_p(sigma) * psharp_rho_in_p(tau)
    back = _p_to_psharp(prod)
    return tuple(sorted(back.coeffs.items()))


def structure_constants(sigma, tau, cap: int = STRUCTURE_CAP, method: str = "count"):
    """Expansion of a product of two psharp basis elements over the basis.

    ``method="count"`` uses the covering-factorization count (the oracle);
    ``method="expand"`` multiplies the fitted p-expansions.  The two agree,
    which the test suite verifies over the whole default cap.
    """
    sigma, tau = sort_partition(sigma), sort_partition(tau)
    if not sigma:
        return {tau: Fraction(1)}
    if not tau:
        return {sigma: Fraction(1)}
    if method == "count":
        return dict(_structure_constants_counted(sigma, tau, cap))
    if method == "expand":
        return dict(_structure_constants_expanded(sigma, tau))
    raise ValueError(f"unknown method {method!r}")


@lru_cache(maxsize=None)
def _psharp_basis_product(r1: tuple[int, ...], r2: tuple[int, ...]) -> dict:
    if not r1:
        return {r2: Fraction(1)}
    if not r2:
        return {r1: Fraction(1)}
    return dict(_structure_constants_expanded(r1, r2))


# ---------------------------------------------------------------------------
# the extended algebra: half-integer powers of the box count

class ExtendedElement:
    """Finite sum of terms (rho without unit parts) * (box-count element)^(m/2).

    Terms map pairs ``(rho, m)`` with ``m_1(rho) = 0`` and integer ``m`` to
    rational coefficients.  The degree of a term is ``|rho| + m``, matching
    the Kerov filtration on the subalgebra of ordinary observables.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean: dict[tuple[tuple[int, ...], int], Fraction] = {}
        for (rho, m), c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            rho = tuple(rho)
            if 1 in rho:
                raise ValueError("basis terms must not contain unit parts")
            clean[(rho, int(m))] = c
        self.terms = clean

    @classmethod
    def constant(cls, c) -> "ExtendedElement":
        return cls({((), 0): Fraction(c)})

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExtendedElement.constant(other)
        out = dict(self.terms)
        for key, c in other.terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return ExtendedElement(out)

    __radd__ = __add__

    def __neg__(self):
        return ExtendedElement({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExtendedElement.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return ExtendedElement()
            return ExtendedElement({k: c * other for k, c in self.terms.items()})
        return ext_multiply(self, other)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, ExtendedElement):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.terms
            return self.terms == {((), 0): Fraction(other)}
        return NotImplemented

    __hash__ = None

    def shifted(self, dm: int) -> "ExtendedElement":
        """Multiply by the box-count element to the power dm/2."""
        return ExtendedElement({(rho, m + dm): c for (rho, m), c in self.terms.items()})

    def degree(self) -> int | None:
        """Kerov-filtration degree; None for the zero element."""
        return max((sum(rho) + m for (rho, m), _ in self.terms.items()), default=None)

    def __repr__(self):
        if not self.terms:
            return "ExtendedElement(0)"
        bits = []
        for (rho, m), c in sorted(self.terms.items()):
            bits.append(f"{c}*ps{rho}*n^({m}/2)")
        return "ExtendedElement(" + " + ".join(bits) + ")"


@lru_cache(maxsize=None)
def _strip_unit_parts(rho: tuple[int, ...]) -> tuple:
    """Rewrite a psharp basis element so no unit parts remain.

    Uses the exact rule: appending a unit part multiplies by the box-count
    element and subtracts |rho| times the original element.
    """
    if 1 not in rho:
        return (((rho, 0), Fraction(1)),)
    sigma = tuple(p for i, p in enumerate(rho) if not (p == 1 and i == len(rho) - 1))
    if len(sigma) == len(rho):  # defensive; rho sorted desc so last part is the 1
        raise AssertionError("unit part not last in sorted partition")
    out: dict[tuple[tuple[int, ...], int], Fraction] = {}
    for (r0, m), c in _strip_unit_parts(sigma):
        out[(r0, m + 2)] = out.get((r0, m + 2), Fraction(0)) + c
        out[(r0, m)] = out.get((r0, m), Fraction(0)) - sum(sigma) * c
    return tuple(out.items())


def ext_normalize(e, half_shift: int = 0) -> ExtendedElement:
    """Carry a psharp-basis observable into the extended basis.

    Strips unit parts via the exact product rule and applies an optional
    half-power shift (dividing by the box-count element to the power
    -half_shift/2 when negative).
    """
    if isinstance(e, Observable):
        if e.basis != "psharp":
            e = e.to_basis("psharp")
        items = e.coeffs.items()
    else:
        items = dict(e).items()
    terms: dict[tuple[tuple[int, ...], int], Fraction] = {}
    for rho, c in items:
        for (r0, m), c2 in _strip_unit_parts(tuple(rho)):
            key = (r0, m + half_shift)
            terms[key] = terms.get(key, Fraction(0)) + c * c2
    return ExtendedElement(terms)


def ext_multiply(
    e1: ExtendedElement, e2: ExtendedElement, cap: int = STRUCTURE_CAP,
    method: str = "count",
) -> ExtendedElement:
    """Product in the extended basis via structure constants."""
    out: dict[tuple[tuple[int, ...], int], Fraction] = {}
    for (r1, m1), c1 in e1.terms.items():
        for (r2, m2), c2 in e2.terms.items():
            c = c1 * c2
            shift = m1 + m2
            for rho, f in structure_constants(r1, r2, cap=cap, method=method).items():
                for (r0, m), c3 in _strip_unit_parts(rho):
                    key = (r0, m + shift)
                    out[key] = out.get(key, Fraction(0)) + c * f * c3
    return ExtendedElement(out)


def zeta_element(rho) -> ExtendedElement:
    """p#_rho divided by the box-count element to the power |rho|/2.

    This is the square-root-free normalization: multiplying it by the product
    of k^(-m_k/2) over the parts gives the unit-variance normalized element.
    """
    rho = sort_partition(rho)
    if 1 in rho:
        raise ValueError("normalized elements are indexed by partitions without unit parts")
    return ExtendedElement({(rho, -sum(rho)): Fraction(1)})


def scaled_hermite_in_zeta(m: int, k: int, cap: int = STRUCTURE_CAP) -> ExtendedElement:
    """k^(m/2) times the monic Hermite polynomial evaluated at zeta_k/sqrt(k).

    All coefficients are rational: the j-th Hermite coefficient picks up k^j.
    """
    poly = observables.hermite_mod(m)
    out = ExtendedElement()
    zk = zeta_element((k,))
    power = ExtendedElement.constant(1)
    powers = [power]
    for _ in range(m):
        power = ext_multiply(power, zk, cap=cap)
        powers.append(power)
    for j in range(m // 2 + 1):
        c = poly.coeffs[m - 2 * j]
        if c:
            out = out + (c * Fraction(k) ** j) * powers[m - 2 * j]
    return out


# ---------------------------------------------------------------------------
# inversion formulas

@dataclass(frozen=True)
class LagrangeInversion:
    """Coefficient sequences inverting x -> x / B(x) as x -> x A(x)."""

    a: tuple          # 1, 0, a_2, a_3, ...
    a_log: tuple      # 0, 0, log-form coefficients


def lagrange_invert(b: list, order: int | None = None) -> LagrangeInversion:
    """Invert the transformation x -> x / B(x), B = 1 + sum_{j>=2} b_j x^j.

    Returns A with a_k = [u^k] B^(k+1)(u) / (k+1) (so that x -> x A(x) is the
    inverse map) together with the log-derivative form [u^k] B^k(u).
    """
    if b[0] != 1 or (len(b) > 1 and b[1] != 0):
        raise ValueError("series must start 1 + 0*u + ...")
    if order is None:
        order = len(b) - 1
    zero = b[0] * 0
    a = [zero + 1, zero]
    a_log = [zero, zero]
    for k in range(2, order + 1):
        a.append(Fraction(1, k + 1) * series.power(b, k + 1, k)[k])
        a_log.append(series.power(b, k, k)[k])
    return LagrangeInversion(tuple(a), tuple(a_log))


def compose_maps(a: list, b: list, order: int) -> list:
    """Coefficients of x A(x) evaluated at x / B(x), as a series in x.

    Returns the identity series [0, 1, 0, ...] exactly when the two maps are
    mutually inverse to the truncation order.
    """
    inner = series.mul(series.inverse(b, order), [b[0] * 0, b[0] * 0 + 1], order)
    outer = series.mul(a, [a[0] * 0, a[0] * 0 + 1], order)
    return series.compose(outer, inner, order)


def combinatorial_invert(a: list) -> list:
    """Inverse of the binomial transform a_k = sum_j C(k, j) b_{k-2j}.

    Input and output lists are indexed from 0 and must have a_0 = a_1 = 0.
    """
    if len(a) >= 1 and a[0] != 0 or len(a) >= 2 and a[1] != 0:
        raise ValueError("sequence must start with two zeros")
    out = []
    for k in range(len(a)):
        if k < 2:
            out.append(a[0] * 0)
            continue
        acc = a[0] * 0
        for j in range(k // 2 + 1):
            if k - 2 * j < 0:
                continue
            acc = acc + Fraction((-1) ** j * k * comb(k - j, j), k - j) * a[k - 2 * j]
        out.append(acc)
    return out


def combinatorial_forward(b: list) -> list:
    """The binomial transform a_k = sum_j C(k, j) b_{k-2j}."""
    out = []
    for k in range(len(b)):
        acc = b[0] * 0
        for j in range(k // 2 + 1):
            acc = acc + comb(k, j) * b[k - 2 * j]
        out.append(acc)
    return out


# ---------------------------------------------------------------------------
# centered/scaled elements in the extended algebra

@lru_cache(maxsize=None)
def q_ext(k: int) -> ExtendedElement:
    """Centered, scaled profile power sum of degree k+1 in the extended basis."""
    if k < 1:
        raise ValueError("index must be >= 1")
    numerator = _p_to_psharp(ptilde_in_p(k + 1))
    out = Fraction(1, k + 1) * ext_normalize(numerator, half_shift=-k)
    if k % 2 == 1:
        m = (k + 1) // 2
        centering = Fraction(observables.omega_moment(k + 1), k + 1)
        out = out - ExtendedElement({((), 2 * m - k): centering})
    return out


@lru_cache(maxsize=None)
def g_ext(k: int) -> ExtendedElement:
    """Centered, scaled transition-measure moment in the extended basis."""
    if k < 0:
        raise ValueError("index must be >= 0")
    if k <= 2:
        return ExtendedElement()
    numerator = _p_to_psharp(_to_p(htilde_in_ptilde(k)))
    out = ext_normalize(numerator, half_shift=-(k - 1))
    if k % 2 == 0:
        out = out - ExtendedElement(
            {((), k - (k - 1)): observables.semicircle_moment(k)}
        )
    return out


def psharp_scaled_ext(k: int) -> ExtendedElement:
    """The single-cycle element divided by the box-count element^(k/2)."""
    return zeta_element((k,))


# ---------------------------------------------------------------------------
# leading-term verification

@dataclass(frozen=True)
class LeadingTermCheck:
    name: str
    index: str
    filtration: str
    measured: int | None
    bound: int
    ok: bool

    def describe(self) -> str:
        status = "ok" if self.ok else "FAILED"
        measured = "-inf" if self.measured is None else str(self.measured)
        return (
            f"{self.name}[{self.index}]: remainder {self.filtration} degree "
            f"{measured} (bound {self.bound}): {status}"
        )


@dataclass
class LeadingTermReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def describe(self) -> str:
        return "\n".join(c.describe() for c in self.checks)


def _weight_parts_leading_sum(k: int, shift: int) -> Observable:
    """sum over partitions of k into parts >= 2 of
    k^(falling (#parts - shift)) / prod(multiplicities!) * prod psharp_{part-1},
    as a p-basis observable."""
    from math import factorial

    out = Observable.zero("p")
    for rho in partition_tuples(k):
        if 1 in rho:
            continue
        mult = multiplicities(rho)
        ell = len(rho)
        coeff = Fraction(1)
        for i in range(ell - shift):
            coeff *= k - i
        for m in mult.values():
            coeff /= factorial(m)
        term = Observable.one("p")
        for part in rho:
            term = term * psharp_rho_in_p((part - 1,))
        out = out + coeff * term
    return out


def _top_weight_formula(k: int) -> Observable:
    """Top weight component of the single-cycle element, generating-series form."""
    order = k + 1
    zero = Observable.zero("ptilde")
    arg = [zero for _ in range(order + 1)]
    for j in range(2, order + 1):
        arg[j] = -Fraction(k, j) * Observable.generator("ptilde", j)
    return -Fraction(1, k) * series.exp(arg, order)[order]


def _check(name, index, filtration, measured, bound) -> LeadingTermCheck:
    ok = measured is None or measured <= bound
    return LeadingTermCheck(name, str(index), filtration, measured, bound, ok)


def verify_leading_term_theorems(kmax: int = 6, cap: int = STRUCTURE_CAP) -> LeadingTermReport:
    """Check every leading-term statement symbolically up to the given index.

    Each check computes (element - stated leading terms) exactly and asserts
    the remainder's filtration degree: weight bounds for the change-of-basis
    expansions, strict negativity in the Kerov filtration for the centered
    scaled elements, and exact equality for the top-weight identities.
    """
    report = LeadingTermReport()

    for k in range(1, kmax + 1):
        # top weight component of the single-cycle element: has weight k+1,
        # unit leading coefficient over (k+1), and matches the series formula
        pt = _p_to_ptilde(psharp_in_p(k))
        w = max(sum(m) for m in pt.coeffs)
        top = Observable("ptilde", {m: c for m, c in pt.coeffs.items() if sum(m) == w})
        ok = (
            w == k + 1
            and top.coeffs.get((k + 1,)) == Fraction(1, k + 1)
            and top == _top_weight_formula(k)
        )
        report.checks.append(
            LeadingTermCheck("top-weight-of-cycle", str(k), "weight", w, k + 1, ok)
        )
        # free cumulant equals the top weight component, exactly
        fc_pt = _p_to_ptilde(_to_p(fcum_in_htilde(k + 1)))
        ok = fc_pt == top
        report.checks.append(
            LeadingTermCheck(
                "free-cumulant-is-top-weight", str(k), "exact", 0 if ok else 1, 0, ok
            )
        )

    for k in range(2, kmax + 1):
        # profile power sums through cycle elements, up to lower weight
        lead = _weight_parts_leading_sum(k, shift=0)
        remainder = _p_to_psharp(ptilde_in_p(k) - lead)
        measured = max(
            (size_with_marked(rho, None) for rho in remainder.coeffs), default=None
        )
        report.checks.append(
            _check("profile-sum-through-cycles", k, "weight", measured, k - 1)
        )

        # moments through cycle elements, up to lower weight
        lead = _weight_parts_leading_sum(k, shift=1)
        remainder = _p_to_psharp(_to_p(htilde_in_ptilde(k)) - lead)
        measured = max(
            (size_with_marked(rho, None) for rho in remainder.coeffs), default=None
        )
        report.checks.append(
            _check("moment-through-cycles", k, "weight", measured, k - 1)
        )

        # centered profile sums expand over scaled cycle elements
        lead = ExtendedElement()
        for j in range((k - 2) // 2 + 1):
            idx = k - 2 * j
            lead = lead + comb(k, j) * zeta_element((idx,))
        diff = q_ext(k) - lead
        report.checks.append(
            _check("centered-profile-vs-cycles", k, "kerov", diff.degree(), -1)
        )

        # and the inverse expansion
        lead = ExtendedElement()
        for j in range((k - 2) // 2 + 1):
            idx = k - 2 * j
            lead = lead + Fraction((-1) ** j * k * comb(k - j, j), k - j) * q_ext(idx)
        diff = zeta_element((k,)) - lead
        report.checks.append(
            _check("cycle-vs-centered-profile", k, "kerov", diff.degree(), -1)
        )

    for k in range(3, kmax + 1):
        # centered moments expand over scaled cycle elements
        lead = ExtendedElement()
        for j in range((k - 3) // 2 + 1):
            idx = k - 1 - 2 * j
            lead = lead + comb(k, j) * zeta_element((idx,))
        diff = g_ext(k) - lead
        report.checks.append(
            _check("centered-moment-vs-cycles", k, "kerov", diff.degree(), -1)
        )

        # and the inverse expansion
        lead = ExtendedElement()
        for j in range(k // 2 + 1):
            idx = k - 2 * j
            if idx < 3:
                continue
            lead = lead + Fraction((-1) ** j * k * comb(k - j, j), k - j) * g_ext(idx)
        diff = zeta_element((k - 1,)) - lead
        report.checks.append(
            _check("cycle-vs-centered-moment", k, "kerov", diff.degree(), -1)
        )

    # normalized basis elements are asymptotically Hermite products
    for size in range(2, kmax + 1):
        for rho in partition_tuples(size):
            if 1 in rho:
                continue
            target = zeta_element(rho)
            prod = ExtendedElement.constant(1)
            for part, m in sorted(multiplicities(rho).items()):
                prod = ext_multiply(prod, scaled_hermite_in_zeta(m, part, cap=cap), cap=cap)
            diff = target - prod
            report.checks.append(
                _check("normalized-vs-hermite", rho, "kerov", diff.degree(), -1)
            )

    return report
