"""The trigonometric R-matrix for so(2n+1) and an exact Yang-Baxter check.

Basis vectors of the vector representation are indexed ``1..N`` with
``N = 2n+1``.  A matrix on ``V (x) V`` is stored sparsely, keyed by
``((a, b), (c, d))`` for the entry of ``e_ac (x) e_bd``.  The parameter is
``q = v^2``; every power ``q^(ibar - jbar)`` is an integer power of ``v``
because the bars are stored doubled.

``R_trig(u)`` is kept as a :class:`SpectralMatrix`: numerators that are
polynomials in ``u`` over Laurent polynomials in ``v``, over the common
denominator ``(u q - q^-1)(u - xi)``.  The Yang-Baxter equation is checked by
exact evaluation over the rationals at seeded random points.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from .mpoly import MultiLaurent, VarId
from .ring import ULaurent

__all__ = [
    "RMatrixContext",
    "SpectralMatrix",
    "build_PQR",
    "build_Rtrig",
    "evaluate_spectral",
    "check_ybe",
    "YBEReport",
    "U",
]

Pair = Tuple[int, int]
Entry = Tuple[Pair, Pair]
ConstMatrix = Dict[Entry, ULaurent]

U = VarId("u", 0, 1)


class RMatrixContext:
    """Index data for the vector representation of so(2n+1)."""

    def __init__(self, n: int):
        if not isinstance(n, int) or n < 2:
            raise ValueError("the R-matrix layer needs n >= 2")
        self.n = n
        self.N = 2 * n + 1
        # doubled bars: 2*ibar = 2n-1, 2n-3, ..., 1, 0, -1, ..., -(2n-1)
        self.bar2 = {}
        for i in range(1, self.N + 1):
            if i <= n:
                self.bar2[i] = 2 * (n - i) + 1
            elif i == n + 1:
                self.bar2[i] = 0
            else:
                self.bar2[i] = -(2 * (i - n - 1) - 1)
        self.xi_exp = 2 * (2 - self.N)  # xi = q^(2-N) as a power of v

    def prime(self, i: int) -> int:
        return self.N + 1 - i

    def bar(self, i: int) -> Fraction:
        return Fraction(self.bar2[i], 2)

    def q_bar_exp(self, i: int, j: int) -> int:
        """Exponent of v in q^(ibar - jbar)."""
        return self.bar2[i] - self.bar2[j]

    @property
    def q(self) -> ULaurent:
        return ULaurent.monomial(2)

    @property
    def xi(self) -> ULaurent:
        return ULaurent.monomial(self.xi_exp)

    def D(self) -> Dict[int, ULaurent]:
        """The diagonal matrix diag(q^ibar), exposed as data only."""
        return {i: ULaurent.monomial(self.bar2[i]) for i in range(1, self.N + 1)}

    def __repr__(self) -> str:
        return f"RMatrixContext(n={self.n})"


def _acc(m: ConstMatrix, key: Entry, c: ULaurent) -> None:
    t = m.get(key)
    t = c if t is None else t + c
    if t.is_zero():
        m.pop(key, None)
    else:
        m[key] = t


def build_PQR(ctx: RMatrixContext) -> Tuple[ConstMatrix, ConstMatrix, ConstMatrix]:
    """The flip ``P``, the matrix ``Q`` and the constant matrix ``R``."""
    N, n = ctx.N, ctx.n
    one = ULaurent.one()
    q = ctx.q
    qinv = ULaurent.monomial(-2)
    qq = q - qinv
    rng = range(1, N + 1)
    P: ConstMatrix = {}
    Q: ConstMatrix = {}
    R: ConstMatrix = {}
    for i in rng:
        for j in rng:
            P[((i, j), (j, i))] = one
            Q[((ctx.prime(i), i), (ctx.prime(j), j))] = ULaurent.monomial(ctx.q_bar_exp(i, j))
    mid = n + 1
    for i in rng:
        # q on the diagonal away from the middle index, 1 at the middle index
        _acc(R, ((i, i), (i, i)), one if i == mid else q)
        if i != mid:
            _acc(R, ((i, ctx.prime(i)), (i, ctx.prime(i))), qinv)
    for i in rng:
        for j in rng:
            if j != i and j != ctx.prime(i):
                _acc(R, ((i, j), (i, j)), one)
    for i in rng:
        for j in rng:
            if i < j:
                _acc(R, ((i, j), (j, i)), qq)
            elif i > j:
                c = qq * ULaurent.monomial(ctx.q_bar_exp(i, j))
                _acc(R, ((ctx.prime(i), i), (ctx.prime(j), j)), -c)
    return P, Q, R


@dataclass
class SpectralMatrix:
    """Sparse ``N^2 x N^2`` matrix with entries ``numerators[key] / denominator``.

    Numerators and the denominator are :class:`MultiLaurent` polynomials in the
    spectral variable :data:`U` over Laurent polynomials in ``v``.
    """

    ctx: RMatrixContext
    numerators: Dict[Entry, MultiLaurent]
    denominator: MultiLaurent

    def support(self) -> List[Entry]:
        return sorted(self.numerators)

    def evaluate(self, u, v) -> Dict[Entry, Fraction]:
        return evaluate_spectral(self, u, v)

    def at_u(self, u_value) -> Dict[Entry, "object"]:
        """Substitute a rational value of ``u``; entries become elements of Q(v)."""
        den = self.denominator.evaluate({U: u_value})
        if den.is_zero():
            raise ZeroDivisionError("spectral parameter at a pole")
        out = {}
        for k, num in self.numerators.items():
            val = num.evaluate({U: u_value}) / den
            if not val.is_zero():
                out[k] = val
        return out


def _const_ml(c: ULaurent) -> MultiLaurent:
    return MultiLaurent.const(c, (U,))


def build_Rtrig(ctx: RMatrixContext, R: Optional[ConstMatrix] = None) -> SpectralMatrix:
    """Assemble ``R_trig(u)`` over the common denominator ``(u q - q^-1)(u - xi)``.

    A replacement constant matrix ``R`` may be passed (used by mutation controls).
    """
    P, Q, R0 = build_PQR(ctx)
    if R is None:
        R = R0
    u = MultiLaurent.var(U)
    q = _const_ml(ctx.q)
    qinv = _const_ml(ULaurent.monomial(-2))
    xi = _const_ml(ctx.xi)
    qq = q - qinv
    cR = (u - 1) * (u - xi)
    cP = qq * (u - xi)
    cQ = -(qq * (u - 1) * xi)
    nums: Dict[Entry, MultiLaurent] = {}
    for mat, coef in ((R, cR), (P, cP), (Q, cQ)):
        for key, c in mat.items():
            term = coef.scale(c)
            t = nums.get(key)
            t = term if t is None else t + term
            if t.is_zero():
                nums.pop(key, None)
            else:
                nums[key] = t
    den = (u * q - qinv) * (u - xi)
    return SpectralMatrix(ctx, nums, den)


def evaluate_spectral(S: SpectralMatrix, u, v) -> Dict[Entry, Fraction]:
    """Exact rational entries at ``(u, v)``; raises ZeroDivisionError at a pole."""
    u = Fraction(u)
    v = Fraction(v)
    if v == 0:
        raise ZeroDivisionError("v = 0")
    den = S.denominator.evaluate_all({U: u}, v)
    if den == 0:
        raise ZeroDivisionError("evaluation at a pole of R_trig")
    out = {}
    for k, num in S.numerators.items():
        val = Fraction(num.evaluate_all({U: u}, v)) / den
        if val:
            out[k] = val
    return out


# --- sparse N^3 x N^3 matrices ---------------------------------------------

Triple = Tuple[int, int, int]
Sparse3 = Dict[Triple, Dict[Triple, Fraction]]


def _embed(R2: Dict[Entry, Fraction], N: int, slots: Tuple[int, int]) -> Sparse3:
    """Place a two-factor matrix on tensor factors ``slots`` of ``V^(x)3``."""
    other = ({0, 1, 2} - set(slots)).pop()
    out: Sparse3 = {}
    for ((a, b), (c, d)), val in R2.items():
        for k in range(1, N + 1):
            row = [0, 0, 0]
            col = [0, 0, 0]
            row[slots[0]], row[slots[1]], row[other] = a, b, k
            col[slots[0]], col[slots[1]], col[other] = c, d, k
            out.setdefault(tuple(row), {})[tuple(col)] = val
    return out


def _matmul(A: Sparse3, B: Sparse3) -> Sparse3:
    out: Sparse3 = {}
    for r, row in A.items():
        acc: Dict[Triple, Fraction] = {}
        for k, a in row.items():
            brow = B.get(k)
            if not brow:
                continue
            for c, b in brow.items():
                acc[c] = acc.get(c, 0) + a * b
        acc = {c: x for c, x in acc.items() if x}
        if acc:
            out[r] = acc
    return out


def _difference(A: Sparse3, B: Sparse3) -> Dict[Tuple[Triple, Triple], Fraction]:
    diff = {}
    for r in set(A) | set(B):
        ra, rb = A.get(r, {}), B.get(r, {})
        for c in set(ra) | set(rb):
            d = ra.get(c, 0) - rb.get(c, 0)
            if d:
                diff[(r, c)] = d
    return diff


def _rand_rational(rng: random.Random, lo: int = 2, hi: int = 9) -> Fraction:
    num = rng.randint(lo, hi) * rng.choice((1, -1))
    den = rng.randint(1, hi)
    return Fraction(num, den)


@dataclass
class YBEReport:
    n: int
    trials: List[dict] = field(default_factory=list)
    resamples: int = 0
    elapsed: float = 0.0
    mutated: bool = False

    @property
    def passed(self) -> bool:
        return bool(self.trials) and all(t["nonzero_entries"] == 0 for t in self.trials)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "mutated": self.mutated,
            "passed": self.passed,
            "resamples": self.resamples,
            "trials": self.trials,
            "elapsed": round(self.elapsed, 3),
        }


def _sample(rng: random.Random, S: SpectralMatrix):
    """Draw ``(u, w1, w2, v)`` and the three evaluated matrices, resampling at poles."""
    resamples = 0
    while True:
        v = _rand_rational(rng)
        u, w1, w2 = (_rand_rational(rng) for _ in range(3))
        if abs(v) == 1 or len({u, w1, w2}) < 3:
            resamples += 1
            continue
        try:
            mats = (
                evaluate_spectral(S, u / w1, v),
                evaluate_spectral(S, u / w2, v),
                evaluate_spectral(S, w1 / w2, v),
            )
        except ZeroDivisionError:
            resamples += 1
            continue
        return (u, w1, w2, v), mats, resamples


def _one_trial(S: SpectralMatrix, rng: random.Random) -> Tuple[dict, int]:
    N = S.ctx.N
    (u, w1, w2, v), (A, B, C), resamples = _sample(rng, S)
    R12 = _embed(A, N, (0, 1))
    R13 = _embed(B, N, (0, 2))
    R23 = _embed(C, N, (1, 2))
    lhs = _matmul(_matmul(R12, R13), R23)
    rhs = _matmul(_matmul(R23, R13), R12)
    diff = _difference(lhs, rhs)
    worst = max((abs(x) for x in diff.values()), default=Fraction(0))
    rec = {
        "u": str(u),
        "w1": str(w1),
        "w2": str(w2),
        "v": str(v),
        "nonzero_entries": len(diff),
        "max_abs_residual": str(worst),
    }
    return rec, resamples


def check_ybe(
    ctx: RMatrixContext,
    trials: int = 5,
    seed: int = 0,
    perturb: Optional[Entry] = None,
) -> YBEReport:
    """Check ``R12(u/w1) R13(u/w2) R23(w1/w2) = R23 R13 R12`` at random points.

    Sample points come from ``random.Random(seed)``.  A draw that hits a pole
    (or coincident parameters, or ``v = +-1``) is discarded and redrawn; the
    number of redraws is reported.  With ``perturb`` set, that entry of the
    constant matrix ``R`` is increased by 1 before assembly.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    start = time.perf_counter()
    R = None
    if perturb is not None:
        _, _, R0 = build_PQR(ctx)
        R = dict(R0)
        _acc(R, perturb, ULaurent.one())
    S = build_Rtrig(ctx, R)
    rng = random.Random(seed)
    report = YBEReport(ctx.n, mutated=perturb is not None)
    for _ in range(trials):
        rec, extra = _one_trial(S, rng)
        report.trials.append(rec)
        report.resamples += extra
    report.elapsed = time.perf_counter() - start
    return report
