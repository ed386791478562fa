"""Specialization maps and the integral-form membership tests.

For a Kostant partition d the variables of grading k are split into groups
``(beta, s)`` with ``1 <= s <= d_beta``; the group (beta, s) holds nu_{beta,i}
variables of color i, and each is sent to a fixed multiple (trigonometric
flavor) or shift (rational flavor) of ``w_{beta,s}``.  The trigonometric image
``v^e * w`` corresponds to the rational image ``w + (e/2) * hbar``.
"""

from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .mpoly import MultiLaurent, VarId, W, X, Z
from .ring import ULaurent, VRatFunc, angle, is_integral_laurent, qfact
from .rootsys import (
    KostantPartition,
    PosRoot,
    RootSystem,
    c_beta,
    c_tilde_beta,
    kappa,
    kostant_partitions,
)
from .shuffle import ShuffleContext, ShuffleElement, block_sum, psi

__all__ = [
    "SpecResult",
    "SpecLayout",
    "spec_exponent",
    "spec_layout",
    "phi",
    "phi_product",
    "g_beta",
    "g_beta_pair",
    "g_beta_pair_from_zeta",
    "p_lambda",
    "rtt_constant",
    "a_d",
    "b_d",
    "reduced_spec",
    "vertical_spec",
    "vertical_splits",
    "cross_spec",
    "in_bold_S",
    "in_tilde_S",
    "in_cal_S",
    "is_good",
    "is_integral_rational",
    "divisible_by_param_power",
]


class SpecResult:
    """phi_d(F): a Laurent polynomial in the w_{beta,s} of d."""

    __slots__ = ("d", "poly", "ctx")

    def __init__(self, ctx: ShuffleContext, d: KostantPartition, poly: MultiLaurent):
        self.ctx, self.d, self.poly = ctx, d, poly

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpecResult):
            return NotImplemented
        return self.d == other.d and self.poly == other.poly

    def __hash__(self):
        return hash((self.d, self.poly))

    def to_json(self) -> dict:
        return {
            "type": self.ctx.rs.name,
            "flavor": self.ctx.flavor,
            "partition": self.d.to_dict(),
            "poly": self.poly.to_json(self.ctx.symbol),
        }

    @classmethod
    def from_json(cls, data) -> "SpecResult":
        if isinstance(data, str):
            data = json.loads(data)
        name = data["type"]
        rs = RootSystem("G") if name == "G2" else RootSystem(name[0], int(name[1:]))
        ctx = ShuffleContext(rs, data["flavor"])
        d = KostantPartition.parse(rs, data["partition"])
        return cls(ctx, d, MultiLaurent.from_json(data["poly"], ctx.symbol))

    def __repr__(self) -> str:
        return f"SpecResult({self.d.to_dict()}, {self.poly.render(self.ctx.symbol)})"


def spec_exponent(rs: RootSystem, beta: PosRoot, i: int, t: int) -> int:
    """Exponent e with x^{(beta,s)}_{i,t} -> v^e w_{beta,s} (trigonometric flavor)."""
    if rs.kind == "A":
        return -i
    if rs.kind == "G":
        return 2 * t if i == 1 else -3 + 2 * t
    n = rs.n
    return -2 * i if t == 1 else -4 * n + 2 * i + 2


def _image(ctx: ShuffleContext, beta: PosRoot, i: int, t: int, s: int) -> MultiLaurent:
    e = spec_exponent(ctx.rs, beta, i, t)
    w = MultiLaurent.var(W(beta.word, s))
    if ctx.rational:
        return w + MultiLaurent.const(ULaurent.monomial(1, Fraction(e, 2)))
    return w.scale(ULaurent.monomial(e))


class SpecLayout:
    """A concrete split of the canonical variables into the groups of d."""

    def __init__(self, ctx: ShuffleContext, d: KostantPartition, perm: Optional[Mapping[int, Sequence[int]]] = None):
        rs = ctx.rs
        self.ctx, self.d = ctx, d
        k = d.grading()
        self.k = k
        slots = {i: list(range(1, k[i - 1] + 1)) for i in rs.I}
        if perm:
            for i, p in perm.items():
                if sorted(p) != slots[i]:
                    raise ValueError(f"assignment for color {i} must permute 1..{k[i - 1]}")
                slots[i] = list(p)
        nxt = {i: 0 for i in rs.I}
        self.images: Dict[VarId, MultiLaurent] = {}
        self.groups: List[Tuple[PosRoot, int, List[VarId]]] = []
        wv = []
        for beta, m in d.items():
            for s in range(1, m + 1):
                members = []
                for i in rs.I:
                    for t in range(1, beta.nu[i - 1] + 1):
                        x = X(i, slots[i][nxt[i]])
                        nxt[i] += 1
                        self.images[x] = _image(ctx, beta, i, t, s)
                        members.append(x)
                self.groups.append((beta, s, members))
                wv.append(W(beta.word, s))
        self.wvars = tuple(sorted(wv, key=VarId.sort_key))


def spec_layout(ctx: ShuffleContext, d: KostantPartition, perm=None) -> SpecLayout:
    return SpecLayout(ctx, d, perm)


def _as_partition(ctx: ShuffleContext, d) -> KostantPartition:
    if isinstance(d, KostantPartition):
        return d
    return KostantPartition(ctx.rs, {ctx.rs.root(b): m for b, m in dict(d).items()})


def phi(d, F: ShuffleElement, layout: Optional[SpecLayout] = None) -> SpecResult:
    """phi_d(F); zero when the grading of F differs from that of d."""
    ctx = F.ctx
    d = _as_partition(ctx, d)
    if F.k != d.grading() or F.is_zero():
        return SpecResult(ctx, d, MultiLaurent.zero())
    layout = layout or SpecLayout(ctx, d)
    poly = F.numerator.substitute(layout.images)
    return SpecResult(ctx, d, poly)


def phi_product(d, factors: Sequence[ShuffleElement], layout: Optional[SpecLayout] = None) -> SpecResult:
    """phi_d of the shuffle product of ``factors`` without forming the product."""
    if not factors:
        raise ValueError("empty product")
    ctx = factors[0].ctx
    d = _as_partition(ctx, d)
    K = tuple(sum(f.k[i] for f in factors) for i in range(ctx.rs.n))
    if K != d.grading():
        return SpecResult(ctx, d, MultiLaurent.zero())
    factors = [f for f in factors if any(f.k) or f.is_zero()] or list(factors[:1])
    layout = layout or SpecLayout(ctx, d)
    if len(factors) == 1:
        return phi(d, factors[0], layout)
    poly = block_sum(ctx, factors, layout.images)
    return SpecResult(ctx, d, poly)


# G factors ---------------------------------------------------------------------------------

_G2_SELF = {
    (1,): ([], 0),
    (2,): ([], 0),
    (1, 2): ([6], 1),
    (1, 2, 2): ([6, 4], 2),
    (1, 2, 2, 2): ([6, 4, 2], 3),
    (1, 2, 1, 2, 2): ([8, 6, 6, 4, 4, 2], 6),
}

_G2_PAIR = {
    ((1,), (1, 2)): [-6],
    ((1,), (1, 2, 1, 2, 2)): [-6, -4, 4],
    ((1,), (1, 2, 2)): [-6, 2],
    ((1,), (1, 2, 2, 2)): [-6, 2, 4],
    ((1,), (2,)): [0],
    ((1, 2), (1, 2, 1, 2, 2)): [8, -6, 6, -4, -2],
    ((1, 2), (1, 2, 2)): [-6, 6, -2],
    ((1, 2), (1, 2, 2, 2)): [-6, 6, -2, 2],
    ((1, 2), (2,)): [-2],
    ((1, 2, 1, 2, 2), (1, 2, 2)): [-8, -6, -6, 6, -4, 4, 2],
    ((1, 2, 1, 2, 2), (1, 2, 2, 2)): [-8, -6, -6, 6, -4, 4, 2, 2, -2],
    ((1, 2, 1, 2, 2), (2,)): [-6, -2],
    ((1, 2, 2), (1, 2, 2, 2)): [-6, 6, -4, 4, -2],
    ((1, 2, 2), (2,)): [-4],
    ((1, 2, 2, 2), (2,)): [-6],
}


def _lin(a: VarId, b: VarId, e: int) -> MultiLaurent:
    """w_a - v^e w_b."""
    return MultiLaurent.var(a) - MultiLaurent.var(b).scale(ULaurent.monomial(e))


def _self_product(word, m: int, exps: Sequence[int], power: int) -> MultiLaurent:
    out = MultiLaurent.one()
    ws = [W(word, s) for s in range(1, m + 1)]
    for w in ws:
        out = out.mul_monomial({w: power}) if power else out
    for a in ws:
        for b in ws:
            if a != b:
                for e in exps:
                    out = out * _lin(a, b, e)
    return out


def g_beta(rs: RootSystem, beta, m: int) -> MultiLaurent:
    """The factor G_beta for d_beta = m (types G_2 and B_n)."""
    beta = rs.root(beta)
    if m < 0:
        raise ValueError("multiplicity must be nonnegative")
    if m == 0:
        return MultiLaurent.one()
    if rs.kind == "G":
        exps, power = _G2_SELF[beta.word]
        return _self_product(beta.word, m, exps, power)
    if rs.kind == "B":
        n = rs.n
        t, i, j = rs.b_type_data(beta)
        if t == "ij":
            return _self_product(beta.word, m, [4] * (j - i), j - i)
        exps = [4] * (2 * n - i - j) + [2]
        for l in range(j, n):
            exps += [4 * n - 4 * l + 2, 4 * n - 4 * l - 6]
        return _self_product(beta.word, m, exps, 4 * n - i - 3 * j + 1)
    raise ValueError(f"G_beta is not tabulated for type {rs.name}")


def g_beta_pair(rs: RootSystem, beta, beta2, m: int, m2: int, flavor: str = "trig") -> MultiLaurent:
    """The factor G_{beta,beta'} for beta < beta' with multiplicities m, m2.

    For G_2 it is read from the fixed table of fifteen pairs (a missing pair is
    an error); for B_n it is computed from the zeta factors it is made of.
    """
    b1, b2 = rs.root(beta), rs.root(beta2)
    if not b1.word < b2.word:
        raise ValueError("G_{beta,beta'} needs beta < beta' in the convex order")
    if m == 0 or m2 == 0:
        return MultiLaurent.one()
    if rs.kind == "G":
        key = (b1.word, b2.word)
        if key not in _G2_PAIR:
            raise KeyError(f"no G_2 factor recorded for the pair {key}")
        out = MultiLaurent.one()
        for s in range(1, m + 1):
            for r in range(1, m2 + 1):
                for e in _G2_PAIR[key]:
                    out = out * _lin(W(b1.word, s), W(b2.word, r), e)
        return out
    if rs.kind == "B":
        return g_beta_pair_from_zeta(ShuffleContext(rs, flavor), b1, b2, m, m2)
    raise ValueError(f"G_(beta,beta') is not tabulated for type {rs.name}")


def g_beta_pair_from_zeta(ctx: ShuffleContext, beta, beta2, m: int, m2: int) -> MultiLaurent:
    """Specialized cross zeta factors between the groups of beta and beta'.

    Adjacent-color pairs contribute their zeta numerator (the pole factor
    cancels the zeta denominator); equal-color pairs contribute the full zeta
    factor.  The quotient is exact.
    """
    rs = ctx.rs
    b1, b2 = rs.root(beta), rs.root(beta2)
    d = KostantPartition(rs, {b1: m, b2: m2})
    lay = SpecLayout(ctx, d)
    num = MultiLaurent.one()
    den = MultiLaurent.one()
    g1 = [g for g in lay.groups if g[0] == b1]
    g2 = [g for g in lay.groups if g[0] == b2]
    for _, _, xs in g1:
        for _, _, ys in g2:
            for a in xs:
                for b in ys:
                    i, j = a.color, b.color
                    if i == j:
                        num = num * ctx.zeta_num(i, j, lay.images[a], lay.images[b])
                        den = den * (lay.images[a] - lay.images[b])
                    elif rs.pairing(i, j) != 0:
                        num = num * ctx.zeta_num(i, j, lay.images[a], lay.images[b])
    q = num.exact_divide(den, laurent=True)
    if q is None:
        raise ArithmeticError("cross factor is not a polynomial")
    return q


def p_lambda(ctx: ShuffleContext, beta, lam: Sequence[int]) -> MultiLaurent:
    """P_lambda for root beta, computed as a rank-one shuffle product x^{r_1} * ... * x^{r_d}."""
    rs = ctx.rs
    beta = rs.root(beta)
    from .rootvec import FreeElement  # local import: rootvec depends on this module's siblings only

    a1 = ShuffleContext(RootSystem("A", 1), ctx.flavor)
    word = tuple((1, r) for r in lam)
    F = psi(a1, FreeElement(a1, {word: 1}))
    num = F.numerator
    if ctx.rational:
        # rank one with (alpha, alpha) = 2; rescale hbar by (beta, beta)/2
        num = num.substitute_param(ULaurent.monomial(1, beta.v_exp)) if beta.v_exp != 1 else num
    else:
        num = num.substitute_param(ULaurent.monomial(beta.v_exp)) if beta.v_exp != 1 else num
    return num.rename({X(1, t): W(beta.word, t) for t in range(1, len(lam) + 1)})


# RTT reduced / vertical / cross specializations ---------------------------------------------------

def rtt_constant(rs: RootSystem, d: KostantPartition) -> ULaurent:
    """prod over [i,n,j] of prod_{l=j}^{n-1} ((v^{-4n+4l-2}-1)(v^{-4n+4l+6}-1))^{d_beta}."""
    if rs.kind != "B":
        raise ValueError("RTT constants are defined for type B")
    n = rs.n
    out = ULaurent.one()
    for beta, m in d.items():
        t, i, j = rs.b_type_data(beta)
        if t == "inj":
            for l in range(j, n):
                out = out * ((ULaurent.monomial(-4 * n + 4 * l - 2) - 1) * (ULaurent.monomial(-4 * n + 4 * l + 6) - 1)) ** m
    return out


def a_d(rs: RootSystem, d: KostantPartition) -> ULaurent:
    return angle(2) ** sum(d.grading()) * rtt_constant(rs, d)


def b_d(rs: RootSystem, d: KostantPartition) -> MultiLaurent:
    out = MultiLaurent.one()
    for beta, m in d.items():
        out = out * g_beta(rs, beta, m)
    return out


def _integral_quotient(p: MultiLaurent, q: MultiLaurent) -> Optional[MultiLaurent]:
    r = p.exact_divide(q, laurent=True)
    if r is None or not r.is_integral():
        return None
    return r


def reduced_spec(d, F: ShuffleElement) -> MultiLaurent:
    """xi_d(F) = phi_d(F) / (A_d B_d); raises when the quotient is not integral."""
    ctx = F.ctx
    rs = ctx.rs
    if rs.kind != "B" or ctx.rational:
        raise ValueError("reduced specialization is defined for type B, trigonometric flavor")
    d = _as_partition(ctx, d)
    p = phi(d, F).poly
    if p.is_zero():
        return p
    q = p.scale(VRatFunc(1, a_d(rs, d)))
    r = _integral_quotient(q, b_d(rs, d))
    if r is None:
        raise ArithmeticError("phi_d(F) is not divisible by A_d B_d over Z[v, v^-1]")
    return r


def vertical_splits(d: KostantPartition) -> List[Dict[PosRoot, Tuple[int, ...]]]:
    """All vertical splits t, one per unordered composition (parts in nonincreasing order)."""

    def partitions(m: int, cap: int):
        if m == 0:
            yield ()
            return
        for first in range(min(m, cap), 0, -1):
            for rest in partitions(m - first, first):
                yield (first,) + rest

    items = d.items()
    out = []
    for combo in itertools.product(*[list(partitions(m, m)) for _, m in items]):
        out.append({b: t for (b, _), t in zip(items, combo)})
    return out


def vertical_spec(g: MultiLaurent, t: Mapping[PosRoot, Sequence[int]]) -> MultiLaurent:
    """Send the r-th group of w_{beta,*} to v_beta^{-2} z_{beta,r}, ..., v_beta^{-2 t_r} z_{beta,r}."""
    sub: Dict[VarId, MultiLaurent] = {}
    for beta, parts in t.items():
        s = 1
        for r, size in enumerate(parts, start=1):
            if size <= 0:
                raise ValueError("vertical split sizes must be positive")
            for q in range(1, size + 1):
                sub[W(beta.word, s)] = MultiLaurent.var(Z(beta.word, r)).scale(ULaurent.monomial(-2 * q * beta.v_exp))
                s += 1
    return g.substitute(sub, partial=True)


def cross_spec(d, t: Mapping[PosRoot, Sequence[int]], F: ShuffleElement) -> MultiLaurent:
    return vertical_spec(reduced_spec(d, F), t)


# membership ------------------------------------------------------------------------------

def _integral_numerator(F: ShuffleElement) -> bool:
    return F.numerator.is_integral()


def in_bold_S(F: ShuffleElement) -> bool:
    """Lusztig-form test: integral numerator, and phi_d(F) divisible by prod c~_beta^{d_beta} for all d."""
    ctx = F.ctx
    rs = ctx.rs
    if ctx.rational or rs.kind not in ("G", "B"):
        raise ValueError("the Lusztig-form test is defined for types G_2 and B_n, trigonometric flavor")
    if F.is_zero():
        return True
    if not _integral_numerator(F):
        return False
    for d in kostant_partitions(rs, F.k):
        c = ULaurent.one()
        for beta, m in d.items():
            c = c * c_tilde_beta(rs, beta) ** m
        p = phi(d, F).poly
        if not p.is_zero() and not p.divides_param(c):
            return False
    return True


def in_tilde_S(F: ShuffleElement) -> bool:
    """The two RTT-form conditions: <2>^{|k|} divides f, and the RTT constants divide phi_d(f / <2>^{|k|})."""
    ctx = F.ctx
    rs = ctx.rs
    if ctx.rational or rs.kind != "B":
        raise ValueError("the RTT-form test is defined for type B, trigonometric flavor")
    if F.is_zero():
        return True
    c = angle(2) ** sum(F.k)
    if not F.numerator.divides_param(c):
        return False
    G = ShuffleElement(ctx, F.k, F.numerator.scale(VRatFunc(1, c)))
    for d in kostant_partitions(rs, F.k):
        p = phi(d, G).poly
        if not p.is_zero() and not p.divides_param(rtt_constant(rs, d)):
            return False
    return True


def in_cal_S(F: ShuffleElement) -> bool:
    """RTT integral-form test: in_tilde_S and Upsilon_{d,t}(F) divisible by prod [t_{beta,r}]_{v_beta}!."""
    if not in_tilde_S(F):
        return False
    if F.is_zero():
        return True
    rs = F.ctx.rs
    for d in kostant_partitions(rs, F.k):
        try:
            xi = reduced_spec(d, F)
        except ArithmeticError:
            return False
        if xi.is_zero():
            continue
        for t in vertical_splits(d):
            y = vertical_spec(xi, t)
            c = ULaurent.one()
            for beta, parts in t.items():
                for size in parts:
                    c = c * qfact(size, beta.v_exp)
            if not y.is_zero() and not y.divides_param(c):
                return False
    return True


def divisible_by_param_power(p: MultiLaurent, m: int) -> bool:
    """True when p lies in param^m * Q[param][variables^+-1]."""
    if p.is_zero():
        return True
    return p.den.is_one() and p.param_valuation() >= m


def is_good(F: ShuffleElement) -> bool:
    """Rational flavor: phi_d(F) divisible by hbar^{sum d_beta kappa_beta} for every d."""
    ctx = F.ctx
    if not ctx.rational:
        raise ValueError("goodness is a rational-flavor notion")
    if F.is_zero():
        return True
    for d in kostant_partitions(ctx.rs, F.k):
        need = sum(m * kappa(ctx.rs, b) for b, m in d.items())
        if not divisible_by_param_power(phi(d, F).poly, need):
            return False
    return True


def is_integral_rational(F: ShuffleElement) -> bool:
    """Rational flavor: hbar^{|k|} divides F and hbar^{sum d_beta (kappa_beta + 1)} divides phi_d(F)."""
    ctx = F.ctx
    if not ctx.rational:
        raise ValueError("this integrality test is a rational-flavor notion")
    if F.is_zero():
        return True
    if not divisible_by_param_power(F.numerator, sum(F.k)):
        return False
    for d in kostant_partitions(ctx.rs, F.k):
        need = sum(m * (kappa(ctx.rs, b) + 1) for b, m in d.items())
        if not divisible_by_param_power(phi(d, F).poly, need):
            return False
    return True
