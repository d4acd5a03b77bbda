"""
组合模块测试
"""
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.Combinat import (FrobeniusSymbol, Partition, csign_exponent, dcoef, frobenius_to_partition,
                           gl_dim, ground_set, lambda_of_subset, partition_to_frobenius,
                           single_sign_exponent, weight)
from core.Errors import InvalidSymbol, TooManyParts


def test_ground_set_elements():
    assert ground_set(2, 1).elements == (1, 2, 4)
    assert ground_set(0, 2).elements == (2, 4)
    assert ground_set(0, 0).elements == ()
    assert ground_set(2, 1).weight == 7
    with pytest.raises(ValueError):
        ground_set(-1, 0)


def test_index_subsets_in_mask_order():
    members = [s.members for s in ground_set(1, 1).index_subsets()]
    assert members == [(), (1,), (3,), (1, 3)]


def test_subset_rejects_foreign_elements():
    with pytest.raises(ValueError):
        ground_set(1, 0).subset([2])


def test_dcoef_values():
    assert dcoef(ground_set(2, 0).subset([1])) == 3
    assert dcoef(ground_set(1, 1).subset([1])) == 2
    assert dcoef(ground_set(3, 0).subset([2])) == 15
    assert dcoef(ground_set(2, 1).subset([4])) == 5
    assert dcoef(ground_set(2, 1).subset([])) == 1


def test_sign_exponents():
    ground = ground_set(1, 2)
    assert ground.elements == (1, 3, 5)
    assert csign_exponent(ground.subset([3, 5])) == 3
    assert csign_exponent(ground.subset([1])) == 0
    assert single_sign_exponent(5, 1) == 2
    assert single_sign_exponent(1, 1) == 0


def test_weight_is_element_sum():
    assert weight((2, 4)) == 6
    assert ground_set(0, 2).subset([2, 4]).weight == 6


@pytest.mark.parametrize("n, m", [(n, m) for n in range(7) for m in range(4) if n + 2 * m <= 6])
def test_dcoef_positive_integer_and_complement_symmetric(n, m):
    ground = ground_set(n, m)
    for subset in ground.index_subsets():
        value = dcoef(subset)
        assert value.denominator == 1 and value > 0
        assert dcoef(ground.subset(subset.complement)) == value


def test_partition_normalizes_and_validates():
    assert Partition((3, 1, 0)).parts == (3, 1)
    assert Partition((3, 1)).conjugate() == Partition((2, 1, 1))
    assert Partition(()).size == 0
    with pytest.raises(ValueError):
        Partition((1, 3))


def test_frobenius_conversions():
    assert partition_to_frobenius(Partition((3, 1))) == FrobeniusSymbol((2,), (1,))
    assert frobenius_to_partition(FrobeniusSymbol((2,), (1,))) == Partition((3, 1))
    assert frobenius_to_partition(FrobeniusSymbol((), ())) == Partition(())
    assert str(FrobeniusSymbol((2, 0), (1, 0))) == "(2,0|1,0)"


def test_invalid_frobenius_symbols():
    with pytest.raises(InvalidSymbol):
        FrobeniusSymbol((1, 1), (0, 0))
    with pytest.raises(InvalidSymbol):
        FrobeniusSymbol((1,), ())


def test_lambda_of_subset():
    assert lambda_of_subset([1], 2) == Partition((2,))
    assert lambda_of_subset([], 3) == Partition(())
    assert lambda_of_subset([2], 3) == Partition((3, 1))
    with pytest.raises(ValueError):
        lambda_of_subset([3], 3)


def test_gl_dim_values():
    assert gl_dim(2, Partition((1,))) == 2
    assert gl_dim(3, Partition((1, 1))) == 3
    assert gl_dim(3, Partition((2,))) == 6
    assert gl_dim(0, Partition(())) == 1
    with pytest.raises(TooManyParts):
        gl_dim(1, Partition((1, 1)))


def _ssyt_count(shape: Partition, n: int) -> int:
    """枚举半标准 Young 表：行弱增、列严格增"""
    cells = [(i, j) for i, length in enumerate(shape.parts) for j in range(length)]
    count = 0
    for filling in product(range(1, n + 1), repeat=len(cells)):
        table = dict(zip(cells, filling))
        rows_ok = all(table[(i, j)] <= table[(i, j + 1)] for i, j in cells if (i, j + 1) in table)
        columns_ok = all(table[(i, j)] < table[(i + 1, j)] for i, j in cells if (i + 1, j) in table)
        count += rows_ok and columns_ok
    return count


SHAPES = [(), (1,), (2,), (1, 1), (3,), (2, 1), (1, 1, 1), (4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]


@pytest.mark.parametrize("parts", SHAPES)
@pytest.mark.parametrize("n", [1, 2, 3])
def test_gl_dim_counts_tableaux(parts, n):
    shape = Partition(parts)
    if len(shape) > n:
        with pytest.raises(TooManyParts):
            gl_dim(n, shape)
    else:
        assert gl_dim(n, shape) == _ssyt_count(shape, n)


@settings(derandomize=True, deadline=None, max_examples=40)
@given(st.lists(st.integers(0, 5), max_size=4).map(lambda xs: Partition(tuple(sorted(xs, reverse=True)))))
def test_frobenius_round_trip(shape):
    assert frobenius_to_partition(partition_to_frobenius(shape)) == shape
