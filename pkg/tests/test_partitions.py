from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from planchlab.partitions import (
    FrobeniusCoords,
    InterlacingExtrema,
    YoungDiagram,
    enumerate_partitions,
    from_extrema,
    partition_tuples,
    partitions_up_to,
    z_factor,
)


@st.composite
def diagram_strategy(draw, max_n=14):
    n = draw(st.integers(min_value=0, max_value=max_n))
    choices = partition_tuples(n)
    idx = draw(st.integers(min_value=0, max_value=len(choices) - 1))
    return YoungDiagram(choices[idx])


def test_validation_rejects_bad_rows():
    with pytest.raises(ValueError):
        YoungDiagram((1, 2))
    with pytest.raises(ValueError):
        YoungDiagram((2, 0))
    with pytest.raises(ValueError):
        YoungDiagram((2, -1))


def test_conjugate_known_values():
    assert YoungDiagram((3, 1)).conjugate().rows == (2, 1, 1)
    assert YoungDiagram((2, 1)).conjugate().rows == (2, 1)
    assert YoungDiagram(()).conjugate().rows == ()
    assert YoungDiagram((4, 2)).conjugate().rows == (2, 2, 1, 1)


@given(diagram_strategy())
def test_conjugate_involution(lam):
    assert lam.conjugate().conjugate() == lam
    assert lam.conjugate().n == lam.n


def test_frobenius_known_values():
    fc = YoungDiagram((3, 1)).frobenius()
    assert fc.a == (Fraction(5, 2),) and fc.b == (Fraction(3, 2),)
    fc = YoungDiagram((1,)).frobenius()
    assert fc.a == (Fraction(1, 2),) and fc.b == (Fraction(1, 2),)
    fc = YoungDiagram(()).frobenius()
    assert fc.a == () and fc.b == ()


@given(diagram_strategy())
def test_frobenius_invariants(lam):
    fc = lam.frobenius()
    assert fc.size() == lam.n
    conj = lam.conjugate().frobenius()
    assert conj.a2 == fc.b2 and conj.b2 == fc.a2


def test_frobenius_validation():
    with pytest.raises(ValueError):
        FrobeniusCoords((2,), (1,))  # even doubled value
    with pytest.raises(ValueError):
        FrobeniusCoords((1, 3), (5, 1))  # not decreasing


def test_extrema_known_values():
    e = YoungDiagram((2, 1)).extrema()
    assert e.minima == (-2, 0, 2) and e.maxima == (-1, 1)
    e = YoungDiagram((2,)).extrema()
    assert e.minima == (-1, 2) and e.maxima == (1,)
    e = YoungDiagram(()).extrema()
    assert e.minima == (0,) and e.maxima == ()


def test_extrema_validation():
    with pytest.raises(ValueError):
        InterlacingExtrema((0, 2), (1, 3))
    with pytest.raises(ValueError):
        InterlacingExtrema((2, 0), (1,))  # not interlacing
    with pytest.raises(ValueError):
        InterlacingExtrema((-1, 2), (0,))  # nonzero sum


def test_from_extrema_known_values():
    assert from_extrema(InterlacingExtrema((-2, 0, 2), (-1, 1))).rows == (2, 1)
    assert from_extrema(InterlacingExtrema((0,), ())).rows == ()
    assert from_extrema(InterlacingExtrema((-1, 1), (0,))).rows == (1,)


@given(diagram_strategy())
def test_extrema_roundtrip(lam):
    assert from_extrema(lam.extrema()) == lam


def test_profile_values():
    assert YoungDiagram(()).profile(0.7) == 0.7
    # a single box peaks at height 2 in the rotated coordinates (the area
    # between |x| and the profile must equal twice the box count)
    assert YoungDiagram((1,)).profile(0) == 2
    assert YoungDiagram((1,)).profile(1) == 1
    assert YoungDiagram((2, 1)).profile(2) == 2
    assert YoungDiagram((2, 1)).profile(Fraction(1, 2)) == Fraction(5, 2)
    assert YoungDiagram((2, 1)).profile(-10) == 10


@given(diagram_strategy(), st.integers(-30, 30), st.integers(-30, 30))
def test_profile_lipschitz(lam, a, b):
    x0, x1 = Fraction(a, 3), Fraction(b, 3)
    assert abs(lam.profile(x0) - lam.profile(x1)) <= abs(x0 - x1)


@given(diagram_strategy())
def test_profile_matches_abs_far_out(lam):
    edge = (lam.rows[0] if lam.rows else 0) + len(lam.rows) + 1
    assert lam.profile(edge) == edge
    assert lam.profile(-edge) == edge


def test_enumeration_counts_and_order():
    assert [p.rows for p in enumerate_partitions(0)] == [()]
    assert len(enumerate_partitions(4)) == 5
    assert len(enumerate_partitions(10)) == 42
    assert [p.rows for p in enumerate_partitions(4)] == [
        (4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1),
    ]
    assert [p.rows for p in enumerate_partitions(6)][:4] == [
        (6,), (5, 1), (4, 2), (4, 1, 1),
    ]


def test_enumeration_cap():
    with pytest.raises(ValueError):
        enumerate_partitions(41)
    assert len(enumerate_partitions(41, cap=41)) == 44583


def test_partitions_up_to():
    assert len(partitions_up_to(6)) == 1 + 1 + 2 + 3 + 5 + 7 + 11


def test_z_factor():
    assert z_factor((1, 1, 1)) == 6
    assert z_factor((3,)) == 3
    assert z_factor((2, 2, 1)) == 8


def test_text_serialization():
    assert YoungDiagram((3, 1)).to_text() == "3,1"
    assert YoungDiagram(()).to_text() == "-"
    assert YoungDiagram.from_text("3,1").rows == (3, 1)
    assert YoungDiagram.from_text("-") == YoungDiagram(())


@given(diagram_strategy())
def test_text_roundtrip(lam):
    assert YoungDiagram.from_text(lam.to_text()) == lam
