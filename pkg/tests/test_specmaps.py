import itertools
from fractions import Fraction

import pytest

from shuffle_pbwd.mpoly import MultiLaurent, W, X, Z
from shuffle_pbwd.ring import ULaurent, angle, qint
from shuffle_pbwd.rootsys import KostantPartition, RootSystem, c_beta, kappa
from shuffle_pbwd.rootvec import divided_power_image, rtt_root_vector, tilde_root_vector, yangian_root_vector
from shuffle_pbwd.shuffle import ShuffleContext, proportional_up_to_unit, psi
from shuffle_pbwd.specmaps import (
    SpecResult,
    a_d,
    b_d,
    g_beta_pair,
    g_beta_pair_from_zeta,
    in_bold_S,
    in_cal_S,
    in_tilde_S,
    is_good,
    is_integral_rational,
    phi,
    reduced_spec,
    vertical_spec,
    vertical_splits,
)

G = RootSystem("G")
B2 = RootSystem("B", 2)


def test_g2_diagonal_specialization_frozen():
    ctx = ShuffleContext(G)
    beta = G.root((1, 2))
    p = phi(KostantPartition(G, {beta: 1}), psi(ctx, tilde_root_vector(ctx, beta, 0))).poly
    assert p == MultiLaurent.var(W((1, 2), 1)).scale(ULaurent({2: 1, 8: -1}))
    target = MultiLaurent.var(W((1, 2), 1), kappa(G, beta)).scale(c_beta(G, beta))
    proportional_up_to_unit(p, target)


def test_spec_result_json_round_trip():
    ctx = ShuffleContext(G)
    F = psi(ctx, tilde_root_vector(ctx, (1, 2, 2), 1))
    res = phi(KostantPartition(G, {G.root((1, 2, 2)): 1}), F)
    assert SpecResult.from_json(res.to_json()).poly == res.poly


def test_lusztig_form_membership():
    ctx = ShuffleContext(G)
    F = divided_power_image(ctx, (1, 2), 0, 2)
    assert in_bold_S(F)
    assert not in_bold_S(F.scale(Fraction(1, 2)))


def test_rtt_generators_of_multiplicity_free_roots():
    ctx = ShuffleContext(B2)
    for beta in ((1,), (2,), (1, 2)):
        F = psi(ctx, rtt_root_vector(ctx, beta, 0))
        assert in_tilde_S(F)
        assert in_cal_S(F)


def test_rtt_generator_of_long_root_fails_vertical_divisibility():
    # The reduced specialization at d = [1] + 2[2] is a unit times w_{[1],1}^2, so the
    # split t_[2] = (2) leaves a monomial that [2]_v cannot divide.
    ctx = ShuffleContext(B2)
    F = psi(ctx, rtt_root_vector(ctx, (1, 2, 2), 0))
    assert F.numerator == MultiLaurent.var(X(1, 1), 2).scale(ULaurent.monomial(2) * angle(2) ** 3)
    d = KostantPartition(B2, {B2.root((1,)): 1, B2.root((2,)): 2})
    assert a_d(B2, d) == angle(2) ** 3
    assert b_d(B2, d) == MultiLaurent.one()
    xi = reduced_spec(d, F)
    assert xi == MultiLaurent.var(W((1,), 1), 2).scale(ULaurent.monomial(-2))
    t = {B2.root((1,)): (1,), B2.root((2,)): (2,)}
    y = vertical_spec(xi, t)
    assert y == MultiLaurent.var(Z((1,), 1), 2).scale(ULaurent.monomial(-10))
    assert not y.divides_param(qint(2))
    assert in_tilde_S(F)
    assert not in_cal_S(F)


def test_vertical_split_count():
    d = KostantPartition(B2, {B2.root((1,)): 3, B2.root((2,)): 2})
    assert len(vertical_splits(d)) == 3 * 2


def test_rational_goodness():
    ctx = ShuffleContext(G, "rational")
    for beta in G.positive_roots():
        F = psi(ctx, yangian_root_vector(ctx, beta, 0))
        assert is_good(F)
        assert F.numerator.param_valuation() >= len(beta.word) - 1


def test_flavor_guards():
    with pytest.raises(ValueError):
        is_good(psi(ShuffleContext(G), tilde_root_vector(ShuffleContext(G), (1,), 0)))
    rc = ShuffleContext(G, "rational")
    with pytest.raises(ValueError):
        in_bold_S(psi(rc, yangian_root_vector(rc, (1,), 0)))
    with pytest.raises(ValueError):
        in_tilde_S(psi(ShuffleContext(G), tilde_root_vector(ShuffleContext(G), (1,), 0)))
    F = psi(rc, yangian_root_vector(rc, (1,), 0))
    assert is_integral_rational(F.scale(ULaurent.monomial(1)))
    assert not is_integral_rational(F)


@pytest.mark.parametrize("m,m2", [(1, 1), (2, 1), (1, 2)])
def test_g2_pair_table_matches_zeta_definition(m, m2):
    ctx = ShuffleContext(G)
    for a, b in itertools.combinations(G.positive_roots(), 2):
        proportional_up_to_unit(g_beta_pair(G, a, b, m, m2), g_beta_pair_from_zeta(ctx, a, b, m, m2))
