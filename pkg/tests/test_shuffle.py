import pytest

from shuffle_pbwd.cli import parse_expression
from shuffle_pbwd.mpoly import MultiLaurent, X
from shuffle_pbwd.ring import ULaurent
from shuffle_pbwd.rootsys import RootSystem
from shuffle_pbwd.rootvec import FreeElement
from shuffle_pbwd.shuffle import (
    NotProportional,
    ShuffleContext,
    ShuffleElement,
    check_wheel,
    generator,
    proportional_up_to_unit,
    psi,
    rank_over_field,
    shuffle_product,
)
from shuffle_pbwd.verify import rank1_power

G2 = ShuffleContext(RootSystem("G"))


def x(i, r):
    return MultiLaurent.var(X(i, r))


def test_g2_product_of_generators():
    F = psi(G2, parse_expression(G2, "e[1,0]*e[2,0]"))
    assert F.k == (1, 1)
    assert F.numerator == x(1, 1) - x(2, 1).scale(ULaurent.monomial(3))


def test_g2_commutator_image():
    F = psi(G2, parse_expression(G2, "comm(e[1,0], e[2,0]; v^3)"))
    assert F.numerator == x(1, 1).scale(ULaurent({0: 1, 6: -1}))


def test_product_methods_agree():
    a = generator(G2, 1, 1)
    b = psi(G2, parse_expression(G2, "e[2,0]*e[2,1]"))
    assert shuffle_product(a, b) == shuffle_product(a, b, method="symmetrize")


def test_product_is_associative():
    a, b, c = generator(G2, 1, 0), generator(G2, 2, 1), generator(G2, 2, 0)
    assert shuffle_product(shuffle_product(a, b), c) == shuffle_product(a, shuffle_product(b, c))


@pytest.mark.parametrize("flavor", ["trig", "rational"])
@pytest.mark.parametrize("l", [1, 2, 3, 4])
def test_rank_one_powers(flavor, l):
    ctx = ShuffleContext(RootSystem("B", 2), flavor)
    for i in (1, 2):
        got, expected = rank1_power(ctx, i, 1, l)
        assert got == expected


def test_rank_one_power_frozen_g2():
    _, expected = rank1_power(G2, 1, 0, 3)
    assert expected.numerator == MultiLaurent.const(ULaurent({0: 1, -6: 2, -12: 2, -18: 1}))


def test_wheel_condition_on_images():
    F = psi(G2, parse_expression(G2, "e[1,0]*e[2,0]*e[2,1]"))
    assert check_wheel(F)


def test_proportional_up_to_unit():
    F = generator(G2, 1, 2)
    c, e = proportional_up_to_unit(F.scale(ULaurent.monomial(5, -3)), F)
    assert (c, e) == (-3, 5)
    with pytest.raises(NotProportional):
        proportional_up_to_unit(F.scale(ULaurent({0: 1, 1: 1})), F)


def test_rank_over_field():
    gens = [generator(G2, 1, r) for r in range(3)]
    assert rank_over_field(gens) == 3
    assert rank_over_field(gens + [gens[0] + gens[1]]) == 3


def test_json_round_trip():
    F = psi(G2, parse_expression(G2, "e[1,0]*e[2,1] + 2*e[2,0]*e[1,1]"))
    assert ShuffleElement.from_json(F.to_json()) == F


def test_rational_flavor_generators():
    ctx = ShuffleContext(RootSystem("G"), "rational")
    F = psi(ctx, parse_expression(ctx, "x[1,0]*x[2,0] - x[2,0]*x[1,0]"))
    assert F.numerator.param_valuation() == 1


def test_free_element_grading():
    E = FreeElement.letter(G2, 1, 0) * FreeElement.letter(G2, 2, 3)
    assert E.gradings() == [(1, 1)]
