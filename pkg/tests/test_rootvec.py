import pytest

from shuffle_pbwd.ring import angle
from shuffle_pbwd.rootsys import RootSystem, divided_power_norm, pbwd_indices
from shuffle_pbwd.rootvec import (
    FreeElement,
    VectorChoice,
    divided_power,
    divided_power_image,
    pbwd_monomial,
    rtt_root_vector,
    tilde_decomposition,
    tilde_root_vector,
    vcomm,
)
from shuffle_pbwd.shuffle import ShuffleContext, proportional_up_to_unit, psi

G2 = ShuffleContext(RootSystem("G"))
B2 = ShuffleContext(RootSystem("B", 2))


def test_render_commutator():
    a = FreeElement.letter(G2, 1, 0)
    b = FreeElement.letter(G2, 2, 0)
    assert vcomm(a, b).render() == "e[1,0]*e[2,0] - e[2,0]*e[1,0]"


def test_tilde_decomposition_sums_to_s():
    rs = RootSystem("G")
    for beta in rs.positive_roots():
        for s in (0, 1, 3):
            dec = tilde_decomposition(rs, beta, s)
            assert len(dec) == len(beta.word)
            assert sum(dec) == s


def test_rtt_root_vector_is_scaled_tilde():
    for beta in ((1, 2), (1, 2, 2)):
        F = psi(B2, rtt_root_vector(B2, beta, 0))
        G = psi(B2, tilde_root_vector(B2, beta, 0))
        assert F == G.scale(angle(2))


def test_divided_power_image_matches_word_expansion():
    A = divided_power_image(G2, (1, 2), 0, 2)
    B = psi(G2, divided_power(G2, (1, 2), 0, 2))
    assert A == B


@pytest.mark.parametrize("sign", [1, -1])
def test_tilde_images_nonzero(sign):
    for beta in RootSystem("G").positive_roots():
        assert not psi(G2, tilde_root_vector(G2, beta, 1, sign)).is_zero()


def test_pbwd_monomial_degree():
    rs = RootSystem("B", 2)
    for h in pbwd_indices(rs, (1, 2), (0, 1)):
        E = pbwd_monomial(B2, h, VectorChoice("tilde"))
        assert E.gradings() == [(1, 2)]


def test_divided_power_norm_rank_one():
    rs = RootSystem("B", 2)
    assert divided_power_norm(rs, (1,), 1).is_one()
