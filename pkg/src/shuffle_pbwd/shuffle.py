"""Trigonometric and rational shuffle algebras.

An element of the graded piece S_k is stored through its numerator f: the
represented rational function is ``f / D_k`` with the fixed pole denominator
``D_k = prod_{i<j, a_ij != 0} prod_{r,s} (x_{i,r} - x_{j,s})``.

Products are computed block by block.  For factors F_1, ..., F_m the symmetric
sum over shuffles is rewritten as a sum over ordered set partitions of the
variables of each color; after multiplying by D and by the Vandermonde product
V of every color that gets split between factors, each summand is a
polynomial:

    sign * prod_j f_j(B_j) * prod_{j<j'} zeta_num(B_j, B_j') * prod_j V(B_j)

The numerator of the product is this sum divided by V.  The same sum with the
variables already specialized gives specialization maps of products without
ever expanding the full numerator.
"""

from __future__ import annotations

import itertools
import json
import random
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .mpoly import MultiLaurent, VarId, X
from .ring import Number, ULaurent, VRatFunc, _norm, as_rational
from .rootsys import RootSystem

__all__ = [
    "ShuffleContext",
    "ShuffleElement",
    "unit",
    "generator",
    "shuffle_product",
    "shuffle_product_many",
    "psi",
    "check_wheel",
    "proportional_up_to_unit",
    "rank_over_field",
    "NotProportional",
]

TRIG = "trig"
RATIONAL = "rational"


class NotProportional(Exception):
    """Raised by :func:`proportional_up_to_unit` when no unit relates the inputs."""


class ShuffleContext:
    """Root system plus flavor; fixes the zeta factors."""

    def __init__(self, rs: RootSystem, flavor: str = TRIG):
        f = flavor.lower()
        if f not in (TRIG, RATIONAL):
            raise ValueError(f"flavor must be 'trig' or 'rational', got {flavor!r}")
        self.rs = rs
        self.flavor = f
        self.symbol = "v" if f == TRIG else "hbar"
        self._zeta_override: Optional[Callable] = None

    @property
    def rational(self) -> bool:
        return self.flavor == RATIONAL

    def __eq__(self, other) -> bool:
        return isinstance(other, ShuffleContext) and self.rs == other.rs and self.flavor == other.flavor

    def __hash__(self) -> int:
        return hash((self.rs, self.flavor))

    def __repr__(self) -> str:
        return f"ShuffleContext({self.rs.name}, {self.flavor})"

    # variables --------------------------------------------------------------------
    def xvars(self, k: Sequence[int]) -> Tuple[VarId, ...]:
        return tuple(X(i, r) for i in self.rs.I for r in range(1, k[i - 1] + 1))

    def color_groups(self, k: Sequence[int]) -> List[List[VarId]]:
        return [[X(i, r) for r in range(1, k[i - 1] + 1)] for i in self.rs.I if k[i - 1]]

    def interacts(self, i: int, j: int) -> bool:
        return i == j or self.rs.pairing(i, j) != 0

    # kernel ------------------------------------------------------------------------
    def zeta_num(self, i: int, j: int, A: MultiLaurent, B: MultiLaurent) -> MultiLaurent:
        """Numerator of zeta_{i,j} evaluated at the pair (A, B).

        Trig: ``A - v^{-(alpha_i, alpha_j)} B``; rational: ``A - B + (alpha_i, alpha_j) hbar / 2``.
        """
        if self._zeta_override is not None:
            return self._zeta_override(self, i, j, A, B)
        p = self.rs.pairing(i, j)
        if self.flavor == TRIG:
            return A - B.scale(ULaurent.monomial(-p))
        return A - B + MultiLaurent.const(ULaurent.monomial(1, Fraction(p, 2)))

    def param(self, e: int = 1, c: Number = 1) -> ULaurent:
        return ULaurent.monomial(e, c)

    def pole_denominator(self, k: Sequence[int]) -> MultiLaurent:
        out = MultiLaurent.one(self.xvars(k))
        for i in self.rs.I:
            for j in self.rs.I:
                if i < j and self.rs.adjacent(i, j):
                    for r in range(1, k[i - 1] + 1):
                        for s in range(1, k[j - 1] + 1):
                            out = out * (MultiLaurent.var(X(i, r)) - MultiLaurent.var(X(j, s)))
        return out

    def mutated(self) -> "ShuffleContext":
        """A copy whose zeta factors use the wrong sign of the pairing (mutation control)."""
        ctx = ShuffleContext(self.rs, self.flavor)

        def bad(c, i, j, A, B):
            p = -c.rs.pairing(i, j)
            if c.flavor == TRIG:
                return A - B.scale(ULaurent.monomial(-p))
            return A - B + MultiLaurent.const(ULaurent.monomial(1, Fraction(p, 2)))

        ctx._zeta_override = bad
        return ctx


class ShuffleElement:
    """F = f / D_k in the graded piece S_k."""

    __slots__ = ("ctx", "k", "numerator", "wheel_checked")

    def __init__(self, ctx: ShuffleContext, k: Sequence[int], numerator: MultiLaurent, wheel_checked: bool = False):
        k = tuple(int(c) for c in k)
        if len(k) != ctx.rs.n or any(c < 0 for c in k):
            raise ValueError(f"grading must have {ctx.rs.n} nonnegative entries")
        vs = ctx.xvars(k)
        allowed = set(vs)
        for x in numerator.used_vars():
            if x not in allowed:
                raise ValueError(f"variable {x} does not belong to grading {k}")
        self.ctx = ctx
        self.k = k
        if not numerator.terms:
            numerator = MultiLaurent.zero(vs)
        elif numerator.vars != vs:
            numerator = numerator.trim().embed(vs)
        self.numerator = numerator
        self.wheel_checked = wheel_checked

    # algebra -----------------------------------------------------------------------
    def _check(self, other: "ShuffleElement") -> None:
        if not isinstance(other, ShuffleElement) or other.ctx != self.ctx:
            raise ValueError("shuffle elements live in different contexts")

    def __add__(self, other: "ShuffleElement") -> "ShuffleElement":
        self._check(other)
        if other.is_zero():
            return self
        if self.is_zero():
            return other
        if other.k != self.k:
            raise ValueError("cannot add elements of different gradings")
        return ShuffleElement(self.ctx, self.k, self.numerator + other.numerator)

    def __neg__(self) -> "ShuffleElement":
        return ShuffleElement(self.ctx, self.k, -self.numerator, self.wheel_checked)

    def __sub__(self, other: "ShuffleElement") -> "ShuffleElement":
        return self + (-other)

    def scale(self, c) -> "ShuffleElement":
        return ShuffleElement(self.ctx, self.k, self.numerator.scale(c), self.wheel_checked)

    def __mul__(self, other):
        if isinstance(other, ShuffleElement):
            return shuffle_product(self, other)
        return self.scale(other)

    __rmul__ = scale

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def __eq__(self, other) -> bool:
        if not isinstance(other, ShuffleElement):
            return NotImplemented
        if self.ctx != other.ctx:
            return False
        if self.is_zero() and other.is_zero():
            return True
        return self.k == other.k and self.numerator == other.numerator

    def __hash__(self):
        return hash((self.ctx, self.k, self.numerator))

    def degree_vars(self) -> Tuple[VarId, ...]:
        return self.ctx.xvars(self.k)

    def is_symmetric(self) -> bool:
        return self.numerator.is_symmetric(self.ctx.color_groups(self.k))

    # text ------------------------------------------------------------------------------
    def pretty(self) -> str:
        num = self.numerator.render(self.ctx.symbol)
        rs = self.ctx.rs
        factors = []
        for i in rs.I:
            for j in rs.I:
                if i < j and rs.adjacent(i, j):
                    for r in range(1, self.k[i - 1] + 1):
                        for s in range(1, self.k[j - 1] + 1):
                            factors.append(f"(x[{i},{r}] - x[{j},{s}])")
        if not factors:
            return num
        return f"({num}) / ({'*'.join(factors)})"

    def to_json(self) -> dict:
        rs = self.ctx.rs
        return {
            "type": rs.name,
            "flavor": self.ctx.flavor,
            "grading": list(self.k),
            "numerator": self.numerator.to_json(self.ctx.symbol),
        }

    @classmethod
    def from_json(cls, data) -> "ShuffleElement":
        if isinstance(data, str):
            data = json.loads(data)
        name = data["type"]
        rs = RootSystem("G") if name == "G2" else RootSystem(name[0], int(name[1:]))
        ctx = ShuffleContext(rs, data["flavor"])
        num = MultiLaurent.from_json(data["numerator"], ctx.symbol)
        return cls(ctx, data["grading"], num)

    def __repr__(self) -> str:
        return f"ShuffleElement(k={self.k}, f={self.numerator.render(self.ctx.symbol)})"


# constructors ---------------------------------------------------------------------------

def unit(ctx: ShuffleContext) -> ShuffleElement:
    return ShuffleElement(ctx, (0,) * ctx.rs.n, MultiLaurent.one(), wheel_checked=True)


def zero(ctx: ShuffleContext, k: Optional[Sequence[int]] = None) -> ShuffleElement:
    k = tuple(k) if k is not None else (0,) * ctx.rs.n
    return ShuffleElement(ctx, k, MultiLaurent.zero(ctx.xvars(k)))


def generator(ctx: ShuffleContext, i: int, r: int) -> ShuffleElement:
    if i not in ctx.rs.I:
        raise ValueError(f"no simple root {i} in {ctx.rs.name}")
    if ctx.rational and r < 0:
        raise ValueError("rational generators x_{i,r} need r >= 0")
    k = tuple(1 if j == i else 0 for j in ctx.rs.I)
    return ShuffleElement(ctx, k, MultiLaurent.var(X(i, 1), r), wheel_checked=True)


# the block engine ---------------------------------------------------------------------------

def _ordered_set_partitions(slots: Sequence[int], sizes: Sequence[int]):
    """Ordered partitions of ``slots`` into consecutive blocks of the given sizes."""
    if not sizes:
        if not slots:
            yield ()
        return
    first, rest = sizes[0], sizes[1:]
    for chosen in itertools.combinations(slots, first):
        remaining = [s for s in slots if s not in chosen]
        for tail in _ordered_set_partitions(remaining, rest):
            yield (tuple(chosen),) + tail


def _identity_images(vars: Sequence[VarId]) -> Dict[VarId, MultiLaurent]:
    return {x: MultiLaurent.var(x) for x in vars}


def block_sum(
    ctx: ShuffleContext,
    factors: Sequence[ShuffleElement],
    images: Optional[Mapping[VarId, MultiLaurent]] = None,
) -> MultiLaurent:
    """Numerator of F_1 * ... * F_m, with variables optionally replaced by ``images``.

    Without images the result is the numerator of the product in the canonical
    variables of the total grading.  With images (a map defined on every
    canonical variable) the result is the numerator with those values plugged
    in; the division by the Vandermonde product happens after substitution and
    is exact as long as the images of equal-colored variables are distinct.
    """
    rs = ctx.rs
    n = rs.n
    m = len(factors)
    K = tuple(sum(f.k[i] for f in factors) for i in range(n))
    tvars = ctx.xvars(K)
    specialized = images is not None
    if not specialized:
        images = _identity_images(tvars)
    for f in factors:
        if f.is_zero():
            return MultiLaurent.zero(tvars if not specialized else ())
    split_colors = [i for i in rs.I if sum(1 for f in factors if f.k[i - 1]) >= 2]
    per_color = []
    for i in rs.I:
        sizes = [f.k[i - 1] for f in factors]
        per_color.append(list(_ordered_set_partitions(list(range(1, K[i - 1] + 1)), sizes)))
    zcache: Dict[Tuple[VarId, VarId], MultiLaurent] = {}

    def zeta(a: VarId, b: VarId) -> MultiLaurent:
        key = (a, b)
        z = zcache.get(key)
        if z is None:
            z = ctx.zeta_num(a.color, b.color, images[a], images[b])
            zcache[key] = z
        return z

    def vand(a: VarId, b: VarId) -> MultiLaurent:
        key = ("V", a, b)
        z = zcache.get(key)
        if z is None:
            z = images[a] - images[b]
            zcache[key] = z
        return z

    total: Optional[MultiLaurent] = None
    for combo in itertools.product(*per_color):
        # blocks[j] = list of target variables owned by factor j (color-major, slot order)
        blocks: List[List[VarId]] = [[] for _ in range(m)]
        for ci, parts in enumerate(combo):
            i = ci + 1
            for j, part in enumerate(parts):
                blocks[j].extend(X(i, s) for s in part)
        sign = 0
        prod: Optional[MultiLaurent] = None
        factor_terms: List[MultiLaurent] = []
        for j, f in enumerate(factors):
            canon = f.ctx.xvars(f.k)
            owned = blocks[j]
            if not specialized:
                term = f.numerator.rename(dict(zip(canon, owned)))
            else:
                term = f.numerator.substitute({c: images[t] for c, t in zip(canon, owned)})
            factor_terms.append(term)
        linear: List[MultiLaurent] = []
        for j in range(m):
            for jj in range(j + 1, m):
                for a in blocks[j]:
                    for b in blocks[jj]:
                        i, ii = a.color, b.color
                        if i == ii:
                            if a.slot > b.slot:
                                sign ^= 1
                            linear.append(zeta(a, b))
                        elif rs.pairing(i, ii) != 0:
                            if i > ii:
                                sign ^= 1
                            linear.append(zeta(a, b))
        for j in range(m):
            for i in split_colors:
                own = [x for x in blocks[j] if x.color == i]
                for p in range(len(own)):
                    for q in range(p + 1, len(own)):
                        linear.append(vand(own[p], own[q]))
        factor_terms.sort(key=len)
        linear_prod = _product(linear)
        prod = linear_prod
        for t in factor_terms:
            prod = prod * t
        if sign:
            prod = -prod
        total = prod if total is None else total + prod
    if total is None:
        total = MultiLaurent.zero()
    # divide by the Vandermonde product of the split colors
    for i in split_colors:
        for r in range(1, K[i - 1] + 1):
            for s in range(r + 1, K[i - 1] + 1):
                a, b = X(i, r), X(i, s)
                if not specialized:
                    q = total.divide_linear(a, b)
                else:
                    q = total.exact_divide(vand(a, b), laurent=True)
                if q is None:
                    raise ArithmeticError(
                        f"internal error: shuffle numerator not divisible by ({a} - {b})")
                total = q
    if not specialized:
        total = total.embed(tvars) if total.terms else MultiLaurent.zero(tvars)
    return total


def _product(polys: List[MultiLaurent]) -> MultiLaurent:
    if not polys:
        return MultiLaurent.one()
    out = polys[0]
    for p in polys[1:]:
        out = out * p
    return out


def shuffle_product_many(factors: Sequence[ShuffleElement]) -> ShuffleElement:
    if not factors:
        raise ValueError("empty product")
    ctx = factors[0].ctx
    for f in factors:
        if f.ctx != ctx:
            raise ValueError("shuffle elements live in different contexts")
    nontrivial = [f for f in factors if any(f.k) or f.is_zero()]
    scalars = [f for f in factors if not any(f.k) and not f.is_zero()]
    K = tuple(sum(f.k[i] for f in factors) for i in range(ctx.rs.n))
    if any(f.is_zero() for f in factors):
        return zero(ctx, K)
    c = MultiLaurent.one()
    for s in scalars:
        c = c * s.numerator
    if not nontrivial:
        return ShuffleElement(ctx, K, c)
    if len(nontrivial) == 1:
        return ShuffleElement(ctx, K, nontrivial[0].numerator * c)
    # folding binary products keeps each block sum small; the multi-block
    # form pays off only after specialization (see block_sum)
    num = block_sum(ctx, nontrivial[:2])
    acc_k = tuple(nontrivial[0].k[i] + nontrivial[1].k[i] for i in range(ctx.rs.n))
    for f in nontrivial[2:]:
        acc = ShuffleElement(ctx, acc_k, num)
        num = block_sum(ctx, [acc, f])
        acc_k = tuple(acc_k[i] + f.k[i] for i in range(ctx.rs.n))
    if c != MultiLaurent.one():
        num = num * c
    return ShuffleElement(ctx, K, num)


def shuffle_product(F: ShuffleElement, G: ShuffleElement, method: str = "coset") -> ShuffleElement:
    """F * G.  ``method='symmetrize'`` uses the full symmetrization for cross-checks."""
    F._check(G)
    if method == "coset":
        return shuffle_product_many([F, G])
    if method == "symmetrize":
        return _product_by_symmetrization(F, G)
    raise ValueError(f"unknown product method {method!r}")


def _product_by_symmetrization(F: ShuffleElement, G: ShuffleElement) -> ShuffleElement:
    """Literal 1/(k! l!) Sym(F(first) G(last) prod zeta) evaluated through numerators.

    Writes H = (F(first) G(last) prod zeta) * D * V as a polynomial for the
    identity split, antisymmetrizes over the full product of symmetric groups
    and divides by k! l! and by V.
    """
    ctx = F.ctx
    rs = ctx.rs
    n = rs.n
    K = tuple(F.k[i] + G.k[i] for i in range(n))
    tvars = ctx.xvars(K)
    first = {i: list(range(1, F.k[i - 1] + 1)) for i in rs.I}
    last = {i: list(range(F.k[i - 1] + 1, K[i - 1] + 1)) for i in rs.I}
    f = F.numerator.rename({X(i, r): X(i, r) for i in rs.I for r in first[i]})
    g = G.numerator.rename({X(i, r): X(i, r + F.k[i - 1]) for i in rs.I for r in range(1, G.k[i - 1] + 1)})
    images = _identity_images(tvars)
    H = f * g
    sign = 0
    for i in rs.I:
        for ii in rs.I:
            for r in first[i]:
                for s in last[ii]:
                    a, b = X(i, r), X(ii, s)
                    if i == ii or rs.pairing(i, ii) != 0:
                        H = H * ctx.zeta_num(i, ii, images[a], images[b])
                        if i != ii and i > ii:
                            sign ^= 1
    for i in rs.I:
        for group in (first[i], last[i]):
            for p in range(len(group)):
                for q in range(p + 1, len(group)):
                    H = H * (images[X(i, group[p])] - images[X(i, group[q])])
    if sign:
        H = -H
    H = H.embed(tvars) if H.terms else MultiLaurent.zero(tvars)
    # antisymmetrize
    groups = [[X(i, r) for r in range(1, K[i - 1] + 1)] for i in rs.I]
    acc = MultiLaurent.zero(tvars)
    per_group = [list(itertools.permutations(range(len(g)))) for g in groups]
    for combo in itertools.product(*per_group):
        mapping = {}
        sgn = 1
        for g, perm in zip(groups, combo):
            sgn *= _perm_sign(perm)
            for src, dst in zip(range(len(g)), perm):
                mapping[g[src]] = g[dst]
        term = H.rename(mapping)
        acc = acc + (term if sgn > 0 else -term)
    denom = 1
    for i in rs.I:
        for c in (F.k[i - 1], G.k[i - 1]):
            for t in range(2, c + 1):
                denom *= t
    acc = acc.scale(Fraction(1, denom))
    for i in rs.I:
        for r in range(1, K[i - 1] + 1):
            for s in range(r + 1, K[i - 1] + 1):
                q = acc.divide_linear(X(i, r), X(i, s))
                if q is None:
                    raise ArithmeticError("symmetrized numerator not divisible by the Vandermonde")
                acc = q
    acc = acc.embed(tvars) if acc.terms else MultiLaurent.zero(tvars)
    return ShuffleElement(ctx, K, acc)


def _perm_sign(perm: Sequence[int]) -> int:
    s = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


# Psi ----------------------------------------------------------------------------------------

def _coeff_value(c):
    if isinstance(c, (VRatFunc, ULaurent)):
        return c
    return as_rational(c)


_ZETA_WORD_CACHE: Dict[Tuple, Tuple[int, MultiLaurent]] = {}
_ZETA_WORD_CACHE_LIMIT = 20000


def _zeta_word(ctx, letters, tvars, images, zcache) -> Tuple[int, MultiLaurent]:
    """Sign and zeta-numerator product attached to a sequence of single letters."""
    rs = ctx.rs
    sign = 0
    linear = []
    for p in range(len(letters)):
        for q in range(p + 1, len(letters)):
            a, b = letters[p], letters[q]
            if a.color == b.color:
                if a.slot > b.slot:
                    sign ^= 1
            elif rs.pairing(a.color, b.color) != 0:
                if a.color > b.color:
                    sign ^= 1
            else:
                continue
            z = zcache.get((a, b))
            if z is None:
                z = ctx.zeta_num(a.color, b.color, images[a], images[b]).embed(tvars)
                zcache[(a, b)] = z
            linear.append(z)
    Zp = _product(linear).embed(tvars) if linear else MultiLaurent.one(tvars)
    return sign, Zp


def psi_numerator_words(ctx: ShuffleContext, terms: Mapping[Tuple[Tuple[int, int], ...], object]) -> Tuple[Tuple[int, ...], MultiLaurent]:
    """Numerator of Psi of a homogeneous linear combination of words.

    Each word contributes the sum over all assignments of its letters to the
    variables of its color.  Words sharing a color sequence share the zeta
    products, so the work is grouped by color sequence; the Vandermonde
    division happens once at the end.
    """
    rs = ctx.rs
    n = rs.n
    grading = None
    by_colors: Dict[Tuple[int, ...], List[Tuple[Tuple[int, ...], object]]] = {}
    for word, c in terms.items():
        cw = tuple(i for i, _ in word)
        k = tuple(cw.count(i) for i in rs.I)
        if grading is None:
            grading = k
        elif k != grading:
            raise ValueError("Psi needs a homogeneous element (all words of one grading)")
        if ctx.rational and any(r < 0 for _, r in word):
            raise ValueError("rational generators x_{i,r} need r >= 0")
        by_colors.setdefault(cw, []).append((tuple(r for _, r in word), c))
    if grading is None:
        return (0,) * n, MultiLaurent.zero()
    # clear coefficient denominators once; dividing at the end avoids gcd work per term
    common = ULaurent.one()
    for items in by_colors.values():
        for _, c in items:
            c = _coeff_value(c)
            if isinstance(c, VRatFunc) and not c.den.is_one():
                common = common * c.den.exact_div(common.gcd(c.den))
    if not common.is_one():
        by_colors = {cw: [(r, _coeff_value(c) * common) for r, c in items] for cw, items in by_colors.items()}
    K = grading
    tvars = ctx.xvars(K)
    images = _identity_images(tvars)
    zcache: Dict[Tuple[VarId, VarId], MultiLaurent] = {}
    total = MultiLaurent.zero(tvars)
    cacheable = ctx._zeta_override is None
    idx = {x: t + 1 for t, x in enumerate(tvars)}
    for cw, items in by_colors.items():
        positions = {i: [p for p, c in enumerate(cw) if c == i] for i in rs.I}
        perms = [list(itertools.permutations(range(1, K[i - 1] + 1))) for i in rs.I]
        for combo in itertools.product(*perms):
            slot = [0] * len(cw)
            for ci, perm in enumerate(combo):
                for p, s in zip(positions[ci + 1], perm):
                    slot[p] = s
            letters = [X(cw[p], slot[p]) for p in range(len(cw))]
            zkey = (ctx, cw, tuple(slot))
            cached = _ZETA_WORD_CACHE.get(zkey) if cacheable else None
            if cached is not None:
                sign, Zp = cached
            else:
                sign, Zp = _zeta_word(ctx, letters, tvars, images, zcache)
                if cacheable:
                    if len(_ZETA_WORD_CACHE) >= _ZETA_WORD_CACHE_LIMIT:
                        _ZETA_WORD_CACHE.clear()
                    _ZETA_WORD_CACHE[zkey] = (sign, Zp)
            # monomial part: sum of c_w * prod x^{r}, coefficients expanded in the parameter
            acc: Dict[Tuple[int, ...], Number] = {}
            scaled: List[MultiLaurent] = []
            for rexps, c in items:
                key = [0] * (len(tvars) + 1)
                for p, r in enumerate(rexps):
                    key[idx[letters[p]]] += r
                c = _coeff_value(c)
                if isinstance(c, VRatFunc):
                    if not c.den.is_one():
                        scaled.append(MultiLaurent(tvars, {tuple(key): 1}).scale(c))
                        continue
                    c = c.num
                if isinstance(c, ULaurent):
                    for e, a in c._c.items():
                        key[0] = e
                        kt = tuple(key)
                        acc[kt] = acc.get(kt, 0) + a
                else:
                    kt = tuple(key)
                    acc[kt] = acc.get(kt, 0) + c
            M = MultiLaurent(tvars, {k_: _norm(v_) for k_, v_ in acc.items() if v_})
            for s in scaled:
                M = M + s
            term = Zp * M
            total = total - term if sign else total + term
    for i in rs.I:
        for r in range(1, K[i - 1] + 1):
            for s in range(r + 1, K[i - 1] + 1):
                q = total.divide_linear(X(i, r), X(i, s))
                if q is None:
                    raise ArithmeticError("internal error: Psi numerator not divisible by the Vandermonde")
                total = q
    if not common.is_one():
        total = total.scale(VRatFunc(ULaurent.one(), common))
    total = total.embed(tvars) if total.terms else MultiLaurent.zero(tvars)
    return K, total


_PSI_CACHE: Dict[Tuple, ShuffleElement] = {}
_PSI_CACHE_LIMIT = 4096


def psi(ctx: ShuffleContext, w) -> ShuffleElement:
    """Psi of a free-algebra element (anything with a ``terms`` map of words)."""
    terms = w.terms if hasattr(w, "terms") else w
    if hasattr(w, "ctx") and w.ctx != ctx:
        raise ValueError("free element belongs to another context")
    key = None
    if ctx._zeta_override is None:
        key = (ctx, frozenset(terms.items()))
        hit = _PSI_CACHE.get(key)
        if hit is not None:
            return hit
    K, num = psi_numerator_words(ctx, terms)
    out = ShuffleElement(ctx, K, num, wheel_checked=False)
    if key is not None:
        if len(_PSI_CACHE) >= _PSI_CACHE_LIMIT:
            _PSI_CACHE.clear()
        _PSI_CACHE[key] = out
    return out


# wheel conditions ------------------------------------------------------------------------------

def wheel_points(ctx: ShuffleContext, k: Sequence[int], assume_symmetric: bool = True):
    """Yield (description, substitution) for each wheel locus embedded in grading k."""
    rs = ctx.rs
    T = VarId("z", (0,), 1)  # auxiliary variable for the common value
    for i in rs.I:
        for j in rs.I:
            if i == j or rs.a(i, j) == 0:
                continue
            a = rs.a(i, j)
            m = 1 - a
            if k[i - 1] < m or k[j - 1] < 1:
                continue
            di = rs.di(i)
            if assume_symmetric:
                choices = [(tuple(range(1, m + 1)), 1)]
            else:
                choices = [(s, r) for s in itertools.permutations(range(1, k[i - 1] + 1), m)
                           for r in range(1, k[j - 1] + 1)]
            for s_tuple, r in choices:
                sub: Dict[VarId, MultiLaurent] = {}
                tv = MultiLaurent.var(T)
                for t, s in enumerate(s_tuple):
                    if ctx.flavor == TRIG:
                        sub[X(i, s)] = tv.scale(ULaurent.monomial(-2 * di * t))
                    else:
                        sub[X(i, s)] = tv + MultiLaurent.const(ULaurent.monomial(1, -t * di))
                if ctx.flavor == TRIG:
                    sub[X(j, r)] = tv.scale(ULaurent.monomial(di * a))
                else:
                    sub[X(j, r)] = tv + MultiLaurent.const(ULaurent.monomial(1, Fraction(di * a, 2)))
                yield (i, j, s_tuple, r), sub


def check_wheel(F: ShuffleElement, assume_symmetric: bool = True) -> bool:
    """True iff the numerator vanishes on every wheel locus."""
    f = F.numerator
    for _, sub in wheel_points(F.ctx, F.k, assume_symmetric):
        if f.substitute(sub, partial=True).terms:
            return False
    return True


# comparisons -------------------------------------------------------------------------------------

def _numer(F) -> MultiLaurent:
    if isinstance(F, ShuffleElement):
        return F.numerator
    if isinstance(F, MultiLaurent):
        return F
    raise TypeError("expected a ShuffleElement or MultiLaurent")


def proportional_up_to_unit(F, G, rational: Optional[bool] = None) -> Tuple[Number, int]:
    """Return (c, z) with F = c * param^z * G, or raise NotProportional.

    For rational-flavor shuffle elements only z = 0 is accepted.
    """
    if rational is None:
        rational = isinstance(F, ShuffleElement) and F.ctx.rational
    f, g = _numer(F), _numer(G)
    if g.is_zero():
        if f.is_zero():
            return (1, 0)
        raise ZeroDivisionError("cannot compare a nonzero element against zero")
    if f.is_zero():
        raise NotProportional("left side is zero")
    if isinstance(F, ShuffleElement) and isinstance(G, ShuffleElement) and F.k != G.k:
        raise NotProportional("different gradings")
    gm = g.trim()
    lead, gc = gm.sorted_monomials()[0]
    sparse = {x: e for x, e in zip(gm.vars, lead) if e}
    fv = f.coefficient_view()
    key = tuple(sorted(sparse.items(), key=lambda t: t[0].sort_key()))
    fc = fv.get(key)
    if fc is None:
        raise NotProportional("leading monomial missing on the left")
    ratio = fc / VRatFunc(gc, g.den)
    if not ratio.den.is_one() or not ratio.num.is_monomial():
        raise NotProportional("coefficient ratio is not a unit")
    (z, c), = ratio.num._c.items()
    if rational and z != 0:
        raise NotProportional("rational flavor only allows scalar units")
    if f != g.scale(ULaurent.monomial(z, c)):
        raise NotProportional("not proportional")
    return (c, z)


def rank_over_field(elems: Sequence, seed: int = 0) -> int:
    """Rank of numerators as vectors over Q(param), by exact elimination.

    A rank equal to the number of vectors is certified by a rational value of
    the parameter (ranks can only drop under specialization); otherwise the
    elimination is redone symbolically over Q(param).
    """
    polys = [_numer(e) for e in elems]
    polys = [p for p in polys]
    if not polys:
        return 0
    cols: Dict[Tuple, int] = {}
    rows: List[Dict[int, VRatFunc]] = []
    for p in polys:
        row = {}
        for mono, c in p.coefficient_view().items():
            j = cols.setdefault(mono, len(cols))
            row[j] = c
        rows.append(row)
    rng = random.Random(seed)
    for _ in range(2):
        t = Fraction(rng.randint(2, 97), rng.randint(2, 97))
        try:
            numeric = [{j: c.evaluate(t) for j, c in r.items()} for r in rows]
        except ZeroDivisionError:
            continue
        r = _rank_numeric(numeric)
        if r == len(rows):
            return r
    return _rank_symbolic(rows)


def _rank_numeric(rows: List[Dict[int, Number]]) -> int:
    rows = [{j: Fraction(c) for j, c in r.items() if c} for r in rows]
    rank = 0
    pivots: List[Tuple[int, Dict[int, Fraction]]] = []
    for r in rows:
        r = dict(r)
        for pj, pr in pivots:
            c = r.get(pj)
            if c:
                for j, a in pr.items():
                    s = r.get(j, 0) - c * a
                    if s:
                        r[j] = s
                    else:
                        r.pop(j, None)
        if r:
            pj = min(r)
            inv = 1 / r[pj]
            pivots.append((pj, {j: a * inv for j, a in r.items()}))
            rank += 1
    return rank


def _rank_symbolic(rows: List[Dict[int, VRatFunc]]) -> int:
    rank = 0
    pivots: List[Tuple[int, Dict[int, VRatFunc]]] = []
    for r in rows:
        r = dict(r)
        for pj, pr in pivots:
            c = r.get(pj)
            if c is not None and not c.is_zero():
                for j, a in pr.items():
                    s = r.get(j, VRatFunc(0)) - c * a
                    if s.is_zero():
                        r.pop(j, None)
                    else:
                        r[j] = s
        r = {j: a for j, a in r.items() if not a.is_zero()}
        if r:
            pj = min(r)
            inv = r[pj].inverse()
            pivots.append((pj, {j: a * inv for j, a in r.items()}))
            rank += 1
    return rank
