from fractions import Fraction
from math import factorial

import pytest

from planchlab.characters import character, class_sign, dimension, plancherel_weight
from planchlab.partitions import YoungDiagram, enumerate_partitions, partition_tuples, z_factor


def _count_standard_tableaux(rows):
    """Brute-force oracle: count fillings by growing one box at a time."""
    if not rows:
        return 1
    total = 0
    for i in range(len(rows)):
        if rows[i] > (rows[i + 1] if i + 1 < len(rows) else 0):
            shrunk = rows[:i] + (rows[i] - 1,) + rows[i + 1:]
            shrunk = tuple(r for r in shrunk if r)
            total += _count_standard_tableaux(shrunk)
    return total


@pytest.mark.parametrize("rows", [r for n in range(0, 8) for r in partition_tuples(n)])
def test_dimension_against_tableau_count(rows):
    assert dimension(YoungDiagram(rows)) == _count_standard_tableaux(rows)


def test_dimension_known_values():
    assert dimension(YoungDiagram((2, 1))) == 2
    assert dimension(YoungDiagram((3, 2))) == 5
    assert dimension(YoungDiagram((7,))) == 1
    assert dimension(YoungDiagram((5, 4, 1))) == 288
    assert dimension(YoungDiagram((4, 3, 2, 1))) == 768


# classical character tables (classes in the enumeration order of Y_n)
S3_TABLE = {
    (3,): {(3,): 1, (2, 1): 1, (1, 1, 1): 1},
    (2, 1): {(3,): -1, (2, 1): 0, (1, 1, 1): 2},
    (1, 1, 1): {(3,): 1, (2, 1): -1, (1, 1, 1): 1},
}
S4_TABLE = {
    (4,): {(4,): 1, (3, 1): 1, (2, 2): 1, (2, 1, 1): 1, (1, 1, 1, 1): 1},
    (3, 1): {(4,): -1, (3, 1): 0, (2, 2): -1, (2, 1, 1): 1, (1, 1, 1, 1): 3},
    (2, 2): {(4,): 0, (3, 1): -1, (2, 2): 2, (2, 1, 1): 0, (1, 1, 1, 1): 2},
    (2, 1, 1): {(4,): 1, (3, 1): 0, (2, 2): -1, (2, 1, 1): -1, (1, 1, 1, 1): 3},
    (1, 1, 1, 1): {(4,): -1, (3, 1): 1, (2, 2): 1, (2, 1, 1): -1, (1, 1, 1, 1): 1},
}


@pytest.mark.parametrize("table", [S3_TABLE, S4_TABLE])
def test_character_full_table(table):
    for rows, row in table.items():
        lam = YoungDiagram(rows)
        for rho, value in row.items():
            assert character(lam, rho) == value, (rows, rho)


def test_character_examples():
    assert character(YoungDiagram((2, 1)), (3,)) == -1
    assert character(YoungDiagram((2, 1)), (2, 1)) == 0


def test_character_on_identity_class_is_dimension():
    for n in range(1, 9):
        for lam in enumerate_partitions(n):
            assert character(lam, (1,) * n) == dimension(lam)


def test_character_size_mismatch():
    with pytest.raises(ValueError):
        character(YoungDiagram((2, 1)), (2,))


def test_burnside():
    for n in range(1, 11):
        assert sum(dimension(l) ** 2 for l in enumerate_partitions(n)) == factorial(n)


def test_column_orthogonality_small():
    for n in (2, 3, 4, 5, 6):
        lams = enumerate_partitions(n)
        classes = [p.rows for p in lams]
        for rho in classes:
            for sigma in classes:
                s = sum(character(l, rho) * character(l, sigma) for l in lams)
                assert s == (z_factor(rho) if rho == sigma else 0)


def test_conjugation_sign_symmetry():
    for n in range(1, 8):
        for lam in enumerate_partitions(n):
            for rho in partition_tuples(n):
                assert character(lam.conjugate(), rho) == class_sign(rho) * character(lam, rho)


def test_character_values_bounded_by_dimension():
    for n in range(1, 9):
        for lam in enumerate_partitions(n):
            dim = dimension(lam)
            for rho in partition_tuples(n):
                assert abs(character(lam, rho)) <= dim


def test_plancherel_weights():
    assert plancherel_weight(YoungDiagram((2, 1))) == Fraction(2, 3)
    assert plancherel_weight(YoungDiagram((1,))) == 1
    assert plancherel_weight(YoungDiagram((2,))) == Fraction(1, 2)
    for n in range(1, 11):
        assert sum(plancherel_weight(l) for l in enumerate_partitions(n)) == 1
