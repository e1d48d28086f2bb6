"""Young diagrams and their three exact coordinate systems.

A diagram is stored by its row lengths.  Two further lossless encodings are
provided: modified Frobenius coordinates (half-integers along the diagonal,
kept exact by storing them doubled) and the interlacing local extrema of the
rotated-profile function y = lambda(x), x = col - row, y = col + row.  In the
rotated picture the profile is 1-Lipschitz, equals |x| far out, and the area
between |x| and the profile is exactly twice the box count.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

PARTITION_ENUM_CAP = 40


def _validate_rows(rows: tuple[int, ...]) -> None:
    for r in rows:
        if not isinstance(r, int) or r <= 0:
            raise ValueError(f"row lengths must be positive integers, got {rows!r}")
    if any(rows[i] < rows[i + 1] for i in range(len(rows) - 1)):
        raise ValueError(f"row lengths must be weakly decreasing, got {rows!r}")


@dataclass(frozen=True)
class YoungDiagram:
    """A partition viewed as a Young diagram; immutable and hashable."""

    rows: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        _validate_rows(self.rows)

    @classmethod
    def of(cls, parts) -> "YoungDiagram":
        """Build from any iterable, dropping trailing zeros."""
        rows = tuple(int(p) for p in parts if int(p) != 0)
        return cls(rows)

    @property
    def n(self) -> int:
        return sum(self.rows)

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def conjugate(self) -> "YoungDiagram":
        return YoungDiagram(conjugate_rows(self.rows))

    def frobenius(self) -> "FrobeniusCoords":
        return frobenius_coords(self)

    def extrema(self) -> "InterlacingExtrema":
        return profile_extrema(self)

    def profile(self, x):
        return profile_value(self, x)

    def rescaled_profile(self, x: float) -> float:
        """Profile of the diagram shrunk by sqrt(n) in both directions."""
        if not self.rows:
            return abs(x)
        s = self.n ** 0.5
        return profile_value(self, x * s) / s

    def to_text(self) -> str:
        return ",".join(str(r) for r in self.rows) if self.rows else "-"

    @classmethod
    def from_text(cls, text: str) -> "YoungDiagram":
        text = text.strip()
        if text in ("-", ""):
            return cls(())
        return cls(tuple(int(p) for p in text.split(",")))

    def __repr__(self) -> str:
        return f"YoungDiagram({self.rows!r})"


@dataclass(frozen=True)
class FrobeniusCoords:
    """Modified Frobenius coordinates, stored doubled to stay in integers.

    ``a2[i] = 2 * (rows[i] - i - 1/2)`` and ``b2[i] = 2 * (cols[i] - i - 1/2)``
    over the diagonal cells; both sequences are strictly decreasing odd
    positive integers and ``sum(a) + sum(b)`` equals the box count.
    """

    a2: tuple[int, ...]
    b2: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.a2) != len(self.b2):
            raise ValueError("coordinate sequences must have equal length")
        for seq in (self.a2, self.b2):
            if any(v <= 0 or v % 2 == 0 for v in seq):
                raise ValueError("doubled coordinates must be odd and positive")
            if any(seq[i] <= seq[i + 1] for i in range(len(seq) - 1)):
                raise ValueError("coordinates must be strictly decreasing")

    @property
    def a(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, 2) for v in self.a2)

    @property
    def b(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(v, 2) for v in self.b2)

    @property
    def d(self) -> int:
        return len(self.a2)

    def size(self) -> int:
        total2 = sum(self.a2) + sum(self.b2)
        return total2 // 2


@dataclass(frozen=True)
class InterlacingExtrema:
    """Local minima and maxima of the rotated profile.

    Minima are the contents of the addable corners, maxima the contents of the
    removable corners; they interlace strictly and have equal sums.
    """

    minima: tuple[int, ...]
    maxima: tuple[int, ...]

    def __post_init__(self) -> None:
        x, y = self.minima, self.maxima
        if len(x) != len(y) + 1:
            raise ValueError("need one more minimum than maxima")
        merged = list(itertools.chain.from_iterable(zip(x, y))) + [x[-1]]
        if any(merged[i] >= merged[i + 1] for i in range(len(merged) - 1)):
            raise ValueError(f"sequences do not interlace: {x} / {y}")
        if sum(x) != sum(y):
            raise ValueError("minima and maxima must have equal sums")

    @property
    def m(self) -> int:
        return len(self.maxima)


@lru_cache(maxsize=65536)
def conjugate_rows(rows: tuple[int, ...]) -> tuple[int, ...]:
    if not rows:
        return ()
    out = []
    for j in range(rows[0]):
        out.append(sum(1 for r in rows if r > j))
    return tuple(out)


def frobenius_coords(diagram: YoungDiagram) -> FrobeniusCoords:
    rows = diagram.rows
    cols = conjugate_rows(rows)
    a2, b2 = [], []
    for i in range(len(rows)):
        if rows[i] < i + 1:
            break
        a2.append(2 * (rows[i] - i) - 1)
        b2.append(2 * (cols[i] - i) - 1)
    return FrobeniusCoords(tuple(a2), tuple(b2))


@lru_cache(maxsize=65536)
def _extrema_of_rows(rows: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    if not rows:
        return (0,), ()
    ell = len(rows)
    # addable corners: below the last row, at every strict descent, right of row 1
    minima = [-ell]
    for i in range(1, ell):
        if rows[i - 1] > rows[i]:
            minima.append(rows[i] - i)
    minima.append(rows[0])
    # removable corners: at the end of every row block
    maxima = []
    for i in range(ell):
        below = rows[i + 1] if i + 1 < ell else 0
        if rows[i] > below:
            maxima.append(rows[i] - (i + 1))
    return tuple(sorted(minima)), tuple(sorted(maxima))


def profile_extrema(diagram: YoungDiagram) -> InterlacingExtrema:
    minima, maxima = _extrema_of_rows(diagram.rows)
    return InterlacingExtrema(minima, maxima)


def from_extrema(extrema: InterlacingExtrema) -> YoungDiagram:
    """Reconstruct the unique diagram with the given profile extrema."""
    x, y = extrema.minima, extrema.maxima
    if x == (0,):
        return YoungDiagram(())
    rows: list[int] = []
    height = 0
    for j in range(len(y), 0, -1):
        length = x[j] + height
        block = length - y[j - 1] - height
        if length < 1 or block < 1:
            raise ValueError(f"extrema do not describe a diagram: {x} / {y}")
        rows.extend([length] * block)
        height += block
    if x[0] != -height:
        raise ValueError(f"extrema do not describe a diagram: {x} / {y}")
    return YoungDiagram(tuple(rows))


@lru_cache(maxsize=65536)
def _profile_breakpoints(rows: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    """Corner points (x, height) of the profile, in increasing x."""
    minima, maxima = _extrema_of_rows(rows)
    pts = [(minima[0], abs(minima[0]))]
    for j in range(len(maxima)):
        h = pts[-1][1] + (maxima[j] - minima[j])
        pts.append((maxima[j], h))
        h -= minima[j + 1] - maxima[j]
        pts.append((minima[j + 1], h))
    return tuple(pts)


def profile_value(diagram: YoungDiagram, x):
    """Height of the profile at x; exact for exact input, float for float."""
    pts = _profile_breakpoints(diagram.rows)
    if x <= pts[0][0] or x >= pts[-1][0]:
        return abs(x)
    # profile alternates slopes +-1 between breakpoints
    for (x0, h0), (x1, h1) in zip(pts, pts[1:]):
        if x <= x1:
            slope = 1 if h1 > h0 else -1
            return h0 + slope * (x - x0)
    return abs(x)  # unreachable


def enumerate_partitions(n: int, cap: int = PARTITION_ENUM_CAP) -> list[YoungDiagram]:
    """All partitions of n in reverse-lexicographic order, (n) first."""
    if n > cap:
        raise ValueError(f"partition enumeration cap exceeded: {n} > {cap}")
    return [YoungDiagram(rows) for rows in partition_tuples(n)]


@lru_cache(maxsize=None)
def partition_tuples(n: int) -> tuple[tuple[int, ...], ...]:
    """Raw reverse-lexicographic partition list as tuples."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return ((),)
    out = []
    current = (n,)
    while True:
        out.append(current)
        # find rightmost part > 1
        i = len(current) - 1
        while i >= 0 and current[i] == 1:
            i -= 1
        if i < 0:
            break
        remaining = len(current) - i
        head = current[:i] + (current[i] - 1,)
        tail: list[int] = []
        while remaining > 0:
            piece = min(tail[-1] if tail else head[-1], remaining)
            tail.append(piece)
            remaining -= piece
        current = head + tuple(tail)
    return tuple(out)


def partitions_up_to(n: int) -> list[YoungDiagram]:
    """All partitions of 0..n, smaller sizes first."""
    out: list[YoungDiagram] = []
    for k in range(n + 1):
        out.extend(enumerate_partitions(k))
    return out


def multiplicities(rho: tuple[int, ...]) -> dict[int, int]:
    mult: dict[int, int] = {}
    for part in rho:
        mult[part] = mult.get(part, 0) + 1
    return mult


def z_factor(rho: tuple[int, ...]) -> int:
    """Order of the centralizer of a permutation of cycle type rho."""
    z = 1
    for part, m in multiplicities(rho).items():
        z *= part**m * factorial(m)
    return z


def falling_factorial(n, k: int):
    out = 1
    for i in range(k):
        out *= n - i
    return out


def sort_partition(parts) -> tuple[int, ...]:
    return tuple(sorted((int(p) for p in parts if int(p) != 0), reverse=True))
