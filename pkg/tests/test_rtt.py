from fractions import Fraction

import pytest

from shuffle_pbwd.ring import ULaurent, VRatFunc
from shuffle_pbwd.rtt import (
    RMatrixContext,
    _difference,
    _embed,
    _matmul,
    build_PQR,
    build_Rtrig,
    check_ybe,
    evaluate_spectral,
)


@pytest.fixture(scope="module")
def ctx():
    return RMatrixContext(2)


def _square(A, N):
    out = {}
    for ((a, b), (c, d)), x in A.items():
        for ((e, f), (g, h)), y in A.items():
            if (c, d) == (e, f):
                key = ((a, b), (g, h))
                out[key] = out.get(key, ULaurent.zero()) + x * y
    return {k: x for k, x in out.items() if not x.is_zero()}


def test_index_data(ctx):
    assert ctx.N == 5
    assert [ctx.bar(i) for i in range(1, 6)] == [Fraction(3, 2), Fraction(1, 2), 0, Fraction(-1, 2), Fraction(-3, 2)]
    assert ctx.prime(1) == 5
    assert ctx.xi == ULaurent.monomial(-6)
    assert ctx.D()[1] == ULaurent.monomial(3)


def test_flip_squares_to_identity(ctx):
    P, _, _ = build_PQR(ctx)
    N = ctx.N
    assert _square(P, N) == {((i, j), (i, j)): ULaurent.one() for i in range(1, N + 1) for j in range(1, N + 1)}


def test_q_and_r_entries(ctx):
    _, Q, R = build_PQR(ctx)
    assert Q[((5, 1), (4, 2))] == ULaurent.monomial(2)  # q^(1bar - 2bar)
    assert Q[((4, 2), (5, 1))] == ULaurent.monomial(-2)
    for i in (1, 2, 4, 5):
        assert R[((i, i), (i, i))] == ULaurent.monomial(2)
    assert R[((3, 3), (3, 3))] == ULaurent.one()
    assert R[((1, 5), (1, 5))] == ULaurent.monomial(-2)


def test_spectral_matrix_at_one_is_flip(ctx):
    P, _, _ = build_PQR(ctx)
    S = build_Rtrig(ctx)
    assert S.at_u(1) == {k: VRatFunc.of(c) for k, c in P.items()}
    assert set(S.support()) <= set(P) | set(build_PQR(ctx)[1]) | set(build_PQR(ctx)[2])


def test_exact_evaluation(ctx):
    S = build_Rtrig(ctx)
    vals = evaluate_spectral(S, Fraction(3, 7), Fraction(2, 3))
    assert all(isinstance(x, Fraction) for x in vals.values())
    with pytest.raises(ZeroDivisionError):
        evaluate_spectral(S, Fraction(1, 16), 2)  # u q = q^-1 at v = 2


def test_ybe_passes_and_is_reproducible(ctx):
    a = check_ybe(ctx, trials=2, seed=7)
    b = check_ybe(ctx, trials=2, seed=7)
    assert a.passed
    assert a.trials == b.trials


def test_ybe_mutation_fails(ctx):
    assert not check_ybe(ctx, trials=1, seed=0, perturb=((1, 1), (1, 1))).passed


def test_middle_entry_q_breaks_ybe(ctx):
    # with q instead of 1 at the middle diagonal entry the equation fails
    _, _, R = build_PQR(ctx)
    R2 = dict(R)
    R2[((3, 3), (3, 3))] = ULaurent.monomial(2)
    S = build_Rtrig(ctx, R2)
    u, w1, w2 = Fraction(2), Fraction(5), Fraction(14, 3)
    A, B, C = (evaluate_spectral(S, x, Fraction(3, 2)) for x in (u / w1, u / w2, w1 / w2))
    N = ctx.N
    lhs = _matmul(_matmul(_embed(A, N, (0, 1)), _embed(B, N, (0, 2))), _embed(C, N, (1, 2)))
    rhs = _matmul(_matmul(_embed(C, N, (1, 2)), _embed(B, N, (0, 2))), _embed(A, N, (0, 1)))
    assert _difference(lhs, rhs)


def test_rejects_small_rank():
    with pytest.raises(ValueError):
        RMatrixContext(1)
