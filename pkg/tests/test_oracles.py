import pytest

from metaplectic.oracles import hilbert_by_solubility, hilbert_grid_oracle, integer_class_rep
from metaplectic.padic import SquareClass, hilbert_symbol, square_class


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_grid_matches_closed_form(p):
    grid = hilbert_grid_oracle(p)
    for s in SquareClass.all(p):
        for t in SquareClass.all(p):
            assert grid[(s.name, t.name)] == hilbert_symbol(s.representative(), t.representative(), p)


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_integer_representatives(p):
    for c in SquareClass.all(p):
        assert square_class(integer_class_rep(c), p) == c


def test_known_values():
    # p, p at p = 3 mod 4 is (p, -1) = -1; at p = 1 mod 4 it is +1
    assert hilbert_by_solubility(7, 7, 7) == -1
    assert hilbert_by_solubility(5, 5, 5) == 1
    assert hilbert_by_solubility(2, 5, 5) == -1
    with pytest.raises(ValueError):
        hilbert_by_solubility(25, 2, 5)
