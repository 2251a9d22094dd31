from fractions import Fraction

from hypothesis import given, strategies as st

from gentle.exact import rank, rank_gauss


def test_known_ranks():
    assert rank([]) == 0
    assert rank([[0, 0], [0, 0]]) == 0
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[1, 0], [0, 1]]) == 2
    assert rank([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]]) == 1


scalars = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@given(st.integers(1, 6), st.integers(1, 6), st.data())
def test_bareiss_agrees_with_gauss(nrows, ncols, data):
    matrix = [[data.draw(scalars) for _ in range(ncols)] for _ in range(nrows)]
    assert rank(matrix) == rank_gauss(matrix)


@given(st.integers(2, 5), st.data())
def test_duplicated_rows_do_not_raise_rank(n, data):
    row = [data.draw(scalars) for _ in range(n)]
    matrix = [row, [2 * x for x in row], [0 * x for x in row]]
    assert rank(matrix) <= 1
