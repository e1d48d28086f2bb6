"""The Plancherel measure: exact expectations and the corner-growth sampler.

Expectations are computed two independent ways: brute-force enumeration over
all diagrams of a given size (exact rationals), and the closed form read off
the character basis, where only the all-unit-parts elements contribute a
falling factorial.  The sampler grows a diagram one box at a time, choosing
an addable corner with the transition-measure probabilities of the current
diagram; the chain's marginal after n steps is exactly the Plancherel measure
(certified by rational path sums for small n and statistically beyond).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import observables
from .algebra import Observable
from .characters import plancherel_weight
from .partitions import (
    YoungDiagram,
    enumerate_partitions,
    falling_factorial,
    from_extrema,
    InterlacingExtrema,
)

EXPECTATION_CAP = 14
_SMALL_SAMPLER_CAP = 24  # below this size, per-diagram thresholds are cached


# ---------------------------------------------------------------------------
# exact expectations

def exact_expectation(f: Observable, n: int, cap: int = EXPECTATION_CAP) -> Fraction:
    """Expectation of an observable under the Plancherel measure, by enumeration."""
    if n > cap:
        raise ValueError(f"enumeration cap exceeded: {n} > {cap}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    total = Fraction(0)
    for lam in enumerate_partitions(n):
        total += f.evaluate(lam) * plancherel_weight(lam)
    return total


@lru_cache(maxsize=None)
def _falling_power_coeffs(r: int) -> tuple[Fraction, ...]:
    """Coefficients of n(n-1)...(n-r+1) in ascending powers of n."""
    coeffs = [Fraction(1)]
    for i in range(r):
        # multiply by (n - i)
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d + 1] += c
            nxt[d] -= i * c
        coeffs = nxt
    return tuple(coeffs)


@dataclass(frozen=True)
class ExpectationPolynomial:
    """Closed form of n -> expectation, in the falling-factorial basis."""

    falling: tuple[tuple[int, Fraction], ...]

    def __call__(self, n: int) -> Fraction:
        return sum((c * falling_factorial(n, r) for r, c in self.falling), Fraction(0))

    def monomial_coefficients(self) -> tuple[Fraction, ...]:
        if not self.falling:
            return (Fraction(0),)
        deg = max(r for r, _ in self.falling)
        out = [Fraction(0)] * (deg + 1)
        for r, c in self.falling:
            for d, fc in enumerate(_falling_power_coeffs(r)):
                out[d] += c * fc
        while len(out) > 1 and out[-1] == 0:
            out.pop()
        return tuple(out)

    @property
    def degree(self) -> int:
        mono = self.monomial_coefficients()
        return 0 if mono == (Fraction(0),) else len(mono) - 1

    @property
    def leading_coefficient(self) -> Fraction:
        return self.monomial_coefficients()[-1]

    def describe(self) -> str:
        if not self.falling:
            return "0"
        bits = []
        for r, c in sorted(self.falling, reverse=True):
            fall = "n" + "".join(f"*(n-{i})" for i in range(1, r)) if r else "1"
            bits.append(f"{c}*{fall}" if c != 1 or r == 0 else fall)
        return " + ".join(bits)


def expectation_polynomial(f: Observable, validate_cap: int = 8) -> ExpectationPolynomial:
    """Exact closed form of the expectation as a polynomial in the size n.

    Reads the all-unit-parts coefficients off the character-basis expansion;
    every other basis element has expectation zero.  Cross-validates against
    the enumeration engine for all sizes up to validate_cap.
    """
    ps = f if f.basis == "psharp" else f.to_basis("psharp")
    falling: dict[int, Fraction] = {}
    for rho, c in ps.coeffs.items():
        if all(part == 1 for part in rho):
            falling[len(rho)] = falling.get(len(rho), Fraction(0)) + c
    poly = ExpectationPolynomial(tuple(sorted(falling.items())))
    for n in range(1, validate_cap + 1):
        if poly(n) != exact_expectation(f, n, cap=max(validate_cap, EXPECTATION_CAP)):
            raise AssertionError(f"closed form disagrees with enumeration at n={n}")
    return poly


# ---------------------------------------------------------------------------
# growth process

@lru_cache(maxsize=65536)
def _add_box(rows: tuple[int, ...], content: int) -> tuple[int, ...]:
    if content == -len(rows):
        return rows + (1,)
    for i in range(len(rows)):
        if rows[i] - i == content and (i == 0 or rows[i - 1] > rows[i]):
            return rows[:i] + (rows[i] + 1,) + rows[i + 1:]
    raise ValueError(f"no addable corner of content {content} in {rows}")


@lru_cache(maxsize=65536)
def _atom_thresholds(rows: tuple[int, ...]) -> tuple[tuple[int, ...], tuple[float, ...]]:
    """Addable-corner contents with cumulative selection thresholds.

    Masses are exact rationals from the transition measure; the cumulative
    sums are converted to float exactly once per diagram.
    """
    atoms = observables.transition_measure(YoungDiagram(rows)).atoms
    contents = tuple(x for x, _ in atoms)
    acc = Fraction(0)
    cum = []
    for _, mass in atoms:
        acc += mass
        cum.append(float(acc))
    cum[-1] = 1.0
    return contents, tuple(cum)


@dataclass
class SamplerState:
    """One growth chain: current diagram, its generator, and the step count."""

    diagram: YoungDiagram
    rng: np.random.Generator
    steps: int = 0

    @property
    def extrema(self) -> InterlacingExtrema:
        return self.diagram.extrema()


def new_sampler(seed: int) -> SamplerState:
    """Fresh chain at the empty diagram; the generator is counter-based (Philox)."""
    return SamplerState(YoungDiagram(()), np.random.Generator(np.random.Philox(seed)))


def growth_step(state: SamplerState) -> SamplerState:
    """Add one box at an addable corner drawn from the transition measure."""
    contents, cum = _atom_thresholds(state.diagram.rows)
    u = float(state.rng.random())
    idx = 0
    while cum[idx] <= u:
        idx += 1
    rows = _add_box(state.diagram.rows, contents[idx])
    return SamplerState(YoungDiagram(rows), state.rng, state.steps + 1)


def _sample_small(n: int, rng: np.random.Generator) -> tuple[int, ...]:
    rows: tuple[int, ...] = ()
    us = rng.random(n)
    for u in us:
        contents, cum = _atom_thresholds(rows)
        idx = 0
        while cum[idx] <= u:
            idx += 1
        rows = _add_box(rows, contents[idx])
    return rows


def _fresh_mass(t: int, minima: np.ndarray, maxima: np.ndarray, pos: int) -> float:
    # pair each maximum with the minimum on its far side so every ratio is <= 1
    den = t - np.delete(minima, pos)
    num = t - maxima
    return float(np.prod(num / den))


def _sample_large(n: int, rng: np.random.Generator) -> tuple[int, ...]:
    """Growth chain with float transition masses, updated incrementally.

    Adding a box at content c multiplies every surviving corner mass by
    (x-c)^2 / ((x-c)^2 - 1) and creates at most two corners whose masses are
    recomputed from the partial-fraction product directly.  Per-step float
    error is ~1e-16 and does not compound (the chain state is discrete).
    """
    minima = np.array([0], dtype=np.int64)
    maxima = np.array([], dtype=np.int64)
    masses = np.array([1.0])
    us = rng.random(n)
    for u in us:
        cs = np.cumsum(masses)
        idx = int(np.searchsorted(cs, u * cs[-1], side="right"))
        if idx >= len(minima):
            idx = len(minima) - 1
        c = int(minima[idx])
        left_cancel = idx >= 1 and maxima[idx - 1] == c - 1
        right_cancel = idx < len(maxima) and maxima[idx] == c + 1

        dx = np.delete(minima, idx) - c
        dx2 = dx.astype(np.float64) ** 2
        survivors = np.delete(masses, idx) * dx2 / (dx2 - 1.0)

        lm = maxima[: idx - 1] if left_cancel else maxima[:idx]
        rm = maxima[idx + 1:] if right_cancel else maxima[idx:]
        new_max = np.concatenate([lm, [c], rm])

        inserts = []
        if not left_cancel:
            inserts.append(c - 1)
        if not right_cancel:
            inserts.append(c + 1)
        new_min = np.concatenate([minima[:idx], inserts, minima[idx + 1:]]).astype(np.int64)
        new_masses = np.concatenate(
            [survivors[:idx], [0.0] * len(inserts), survivors[idx:]]
        )
        for j, t in enumerate(inserts):
            new_masses[idx + j] = _fresh_mass(t, new_min, new_max, idx + j)

        minima, maxima, masses = new_min, new_max, new_masses
    return from_extrema(
        InterlacingExtrema(tuple(int(x) for x in minima), tuple(int(y) for y in maxima))
    ).rows


def sample(n: int, seed: int) -> YoungDiagram:
    """One Plancherel-distributed diagram of size n, deterministic in the seed."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    rng = np.random.Generator(np.random.Philox(seed))
    if n <= _SMALL_SAMPLER_CAP:
        return YoungDiagram(_sample_small(n, rng))
    return YoungDiagram(_sample_large(n, rng))


_SEED_BLOCK = 256  # samples per spawned child seed


def _sample_block(n: int, count: int, seq: np.random.SeedSequence) -> list[tuple[int, ...]]:
    rng = np.random.Generator(np.random.Philox(seq))
    grow = _sample_small if n <= _SMALL_SAMPLER_CAP else _sample_large
    return [grow(n, rng) for _ in range(count)]


def sample_many(
    n: int, count: int, seed: int, workers: int = 1
) -> list[tuple[int, ...]]:
    """Row tuples of `count` independent samples.

    The master seed is split with a SeedSequence spawn, one child per block
    of 256 samples; blocks are concatenated in spawn order.  The output
    therefore depends only on (n, count, seed), not on the worker count.
    """
    if count <= 0:
        return []
    blocks = (count + _SEED_BLOCK - 1) // _SEED_BLOCK
    sizes = [min(_SEED_BLOCK, count - i * _SEED_BLOCK) for i in range(blocks)]
    children = np.random.SeedSequence(seed).spawn(blocks)
    out: list[tuple[int, ...]] = []
    if workers <= 1 or blocks == 1:
        for size, child in zip(sizes, children):
            out.extend(_sample_block(n, size, child))
        return out
    from concurrent.futures import ProcessPoolExecutor

    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [
            pool.submit(_sample_block, n, size, child)
            for size, child in zip(sizes, children)
        ]
        for fut in futures:
            out.extend(fut.result())
    return out


def growth_marginal(n: int) -> dict[tuple[int, ...], Fraction]:
    """Exact distribution of the chain after n steps, by rational path sums."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    dist: dict[tuple[int, ...], Fraction] = {(): Fraction(1)}
    for _ in range(n):
        nxt: dict[tuple[int, ...], Fraction] = {}
        for rows, prob in dist.items():
            for content, mass in observables.transition_measure(YoungDiagram(rows)).atoms:
                grown = _add_box(rows, content)
                nxt[grown] = nxt.get(grown, Fraction(0)) + prob * mass
        dist = nxt
    return dist


# ---------------------------------------------------------------------------
# sample serialization

def sample_records(n: int, count: int, seed: int, workers: int = 1):
    """JSON-ready records, one per sample."""
    for rows in sample_many(n, count, seed, workers=workers):
        yield {"seed": seed, "n": n, "rows": list(rows)}


def write_samples_jsonl(path: str, n: int, count: int, seed: int, workers: int = 1) -> None:
    with open(path, "w") as fh:
        for record in sample_records(n, count, seed, workers=workers):
            fh.write(json.dumps(record) + "\n")
