"""Truncated power-series arithmetic over any commutative coefficient ring.

Series are plain lists of coefficients, constant term first, of length
order + 1.  Coefficients only need +, * (with each other and with Fraction
scalars) and comparison against the integer 0; both Fraction and the symbolic
Observable ring satisfy this.  Arithmetic never consults coefficients beyond
the truncation order.
"""

from __future__ import annotations

from fractions import Fraction


def trimmed(a: list, order: int) -> list:
    if not a:
        raise ValueError("series needs at least the constant coefficient")
    zero = a[0] * 0
    out = list(a[: order + 1])
    while len(out) < order + 1:
        out.append(zero)
    return out


def add(a: list, b: list, order: int) -> list:
    a, b = trimmed(a, order), trimmed(b, order)
    return [x + y for x, y in zip(a, b)]


def mul(a: list, b: list, order: int) -> list:
    a, b = trimmed(a, order), trimmed(b, order)
    out = [a[0] * 0 for _ in range(order + 1)]
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j in range(order + 1 - i):
            bj = b[j]
            if bj == 0:
                continue
            out[i + j] = out[i + j] + ai * bj
    return out


def power(a: list, k: int, order: int) -> list:
    if k < 0:
        return power(inverse(a, order), -k, order)
    zero = a[0] * 0
    if k == 0:
        return [zero + 1 if i == 0 else zero for i in range(order + 1)]
    out = trimmed(a, order)
    result = None
    while k:
        if k & 1:
            result = out if result is None else mul(result, out, order)
        k >>= 1
        if k:
            out = mul(out, out, order)
    return result


def inverse(a: list, order: int) -> list:
    """Multiplicative inverse; requires constant term equal to 1."""
    a = trimmed(a, order)
    if a[0] != 1:
        raise ValueError("series inverse requires constant term 1")
    zero = a[0] * 0
    out = [zero for _ in range(order + 1)]
    out[0] = zero + 1
    for m in range(1, order + 1):
        acc = zero
        for j in range(1, m + 1):
            if a[j] == 0:
                continue
            acc = acc + a[j] * out[m - j]
        out[m] = -acc
    return out


def exp(a: list, order: int) -> list:
    """Exponential of a series with zero constant term."""
    a = trimmed(a, order)
    if a[0] != 0:
        raise ValueError("series exp requires zero constant term")
    zero = a[0] * 0
    out = [zero for _ in range(order + 1)]
    out[0] = zero + 1
    for m in range(1, order + 1):
        acc = zero
        for j in range(1, m + 1):
            if a[j] == 0:
                continue
            acc = acc + (a[j] * Fraction(j, m)) * out[m - j]
        out[m] = acc
    return out


def log(a: list, order: int) -> list:
    """Logarithm of a series with constant term 1."""
    a = trimmed(a, order)
    if a[0] != 1:
        raise ValueError("series log requires constant term 1")
    zero = a[0] * 0
    out = [zero for _ in range(order + 1)]
    for m in range(1, order + 1):
        acc = a[m]
        for j in range(1, m):
            if out[j] == 0 or a[m - j] == 0:
                continue
            acc = acc - (out[j] * Fraction(j, m)) * a[m - j]
        out[m] = acc
    return out


def compose(a: list, b: list, order: int) -> list:
    """a(b(t)) for b with zero constant term, by Horner evaluation."""
    a, b = trimmed(a, order), trimmed(b, order)
    if b[0] != 0:
        raise ValueError("series composition requires zero inner constant term")
    zero = b[0] * 0
    out = [zero for _ in range(order + 1)]
    out[0] = zero + a[-1]
    for coeff in reversed(a[:-1]):
        out = mul(out, b, order)
        out[0] = out[0] + coeff
    return out
