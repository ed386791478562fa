"""Free-algebra words, quantum and Yangian root vectors, PBWD monomials.

Words are tuples of letters ``(i, r)`` standing for ``e_{i,r}`` (trigonometric
flavor) or ``x_{i,r}`` (rational flavor).  Root vectors are iterated
v-commutators ``[a, b]_u = ab - u ba`` of such letters.
"""

from __future__ import annotations

import json
import random
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .mpoly import word_str
from .ring import Number, ULaurent, VRatFunc, angle, as_rational
from .rootsys import PBWDIndex, PosRoot, RootSystem, divided_power_norm
from .shuffle import ShuffleContext, ShuffleElement, psi, shuffle_product_many, unit

__all__ = [
    "FreeElement",
    "vcomm",
    "root_vector",
    "tilde_root_vector",
    "tilde_decomposition",
    "rtt_root_vector",
    "divided_power",
    "divided_power_image",
    "yangian_root_vector",
    "yangian_bar_root_vector",
    "random_root_vector",
    "VectorChoice",
    "pbwd_monomial",
    "pbwd_factors",
    "psi_product",
]

Word = Tuple[Tuple[int, int], ...]


def _coef(c) -> VRatFunc:
    if isinstance(c, VRatFunc):
        return c
    if isinstance(c, ULaurent):
        return VRatFunc._raw(c, ULaurent.one())
    return VRatFunc._raw(ULaurent.const(as_rational(c)), ULaurent.one())


class FreeElement:
    """Finite linear combination of words with coefficients in Q(param)."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: ShuffleContext, terms: Optional[Mapping[Word, object]] = None):
        self.ctx = ctx
        clean: Dict[Word, VRatFunc] = {}
        for w, c in (terms or {}).items():
            w = tuple((int(i), int(r)) for i, r in w)
            for i, r in w:
                if i not in ctx.rs.I:
                    raise ValueError(f"letter index {i} outside 1..{ctx.rs.n}")
                if ctx.rational and r < 0:
                    raise ValueError("rational letters x_{i,r} need r >= 0")
            c = _coef(c)
            if c.is_zero():
                continue
            if w in clean:
                s = clean[w] + c
                if s.is_zero():
                    del clean[w]
                else:
                    clean[w] = s
            else:
                clean[w] = c
        self.terms = clean

    @classmethod
    def _raw(cls, ctx: ShuffleContext, terms: Dict[Word, VRatFunc]) -> "FreeElement":
        obj = cls.__new__(cls)
        obj.ctx = ctx
        obj.terms = terms
        return obj

    @classmethod
    def one(cls, ctx: ShuffleContext) -> "FreeElement":
        return cls(ctx, {(): 1})

    @classmethod
    def zero(cls, ctx: ShuffleContext) -> "FreeElement":
        return cls(ctx, {})

    @classmethod
    def letter(cls, ctx: ShuffleContext, i: int, r: int) -> "FreeElement":
        return cls(ctx, {((i, r),): 1})

    # algebra ---------------------------------------------------------------------
    def _check(self, other: "FreeElement") -> None:
        if not isinstance(other, FreeElement) or other.ctx != self.ctx:
            raise ValueError("free elements live in different contexts")

    def __add__(self, other: "FreeElement") -> "FreeElement":
        self._check(other)
        out = dict(self.terms)
        for w, c in other.terms.items():
            s = out[w] + c if w in out else c
            if s.is_zero():
                out.pop(w, None)
            else:
                out[w] = s
        return FreeElement._raw(self.ctx, out)

    def __neg__(self) -> "FreeElement":
        return FreeElement._raw(self.ctx, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other: "FreeElement") -> "FreeElement":
        return self + (-other)

    def scale(self, c) -> "FreeElement":
        c = _coef(c)
        if c.is_zero():
            return FreeElement.zero(self.ctx)
        return FreeElement._raw(self.ctx, {w: a * c for w, a in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, FreeElement):
            self._check(other)
            out: Dict[Word, VRatFunc] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = w1 + w2
                    c = c1 * c2
                    if w in out:
                        s = out[w] + c
                        if s.is_zero():
                            del out[w]
                        else:
                            out[w] = s
                    else:
                        out[w] = c
            return FreeElement._raw(self.ctx, out)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int) -> "FreeElement":
        if k < 0:
            raise ValueError("negative power in the free algebra")
        out = FreeElement.one(self.ctx)
        for _ in range(k):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if not isinstance(other, FreeElement):
            return NotImplemented
        return self.ctx == other.ctx and self.terms == other.terms

    def __hash__(self):
        return hash((self.ctx, frozenset(self.terms.items())))

    def gradings(self) -> List[Tuple[int, ...]]:
        gs = set()
        for w in self.terms:
            k = [0] * self.ctx.rs.n
            for i, _ in w:
                k[i - 1] += 1
            gs.add(tuple(k))
        return sorted(gs)

    def grading(self) -> Tuple[int, ...]:
        gs = self.gradings()
        if len(gs) != 1:
            raise ValueError("element is not homogeneous")
        return gs[0]

    # text --------------------------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        letter = "x" if self.ctx.rational else "e"
        parts = []
        for w in sorted(self.terms):
            c = self.terms[w]
            ws = "*".join(f"{letter}[{i},{r}]" for i, r in w) or "1"
            cs = c.render(self.ctx.symbol)
            if cs == "1":
                parts.append(ws)
            elif cs == "-1":
                parts.append(f"-{ws}")
            else:
                parts.append(f"({cs})*{ws}")
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def to_json(self) -> dict:
        return {
            "terms": [
                {"word": [[i, r] for i, r in w], "coef": self.terms[w].render(self.ctx.symbol)}
                for w in sorted(self.terms)
            ]
        }

    @classmethod
    def from_json(cls, ctx: ShuffleContext, data) -> "FreeElement":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(ctx, {tuple((i, r) for i, r in t["word"]): VRatFunc.parse(t["coef"], ctx.symbol) for t in data["terms"]})

    def __repr__(self) -> str:
        return f"FreeElement({self.render()})"


def vcomm(a: FreeElement, b: FreeElement, u=1) -> FreeElement:
    """[a, b]_u = ab - u ba."""
    a._check(b)
    u = _coef(u)
    if u.is_zero():
        return a * b
    return a * b - (b * a).scale(u)


def _unit_value(lam) -> VRatFunc:
    """Accept an integer z (meaning v^z) or a monomial +-v^z."""
    if isinstance(lam, int) and not isinstance(lam, bool):
        return _coef(ULaurent.monomial(lam))
    c = _coef(lam)
    if not c.den.is_one() or not c.num.is_monomial():
        raise ValueError(f"commutator parameter must be a unit +-v^z, got {c}")
    (_, a), = c.num._c.items()
    if a not in (1, -1):
        raise ValueError(f"commutator parameter must be a unit +-v^z, got {c}")
    return c


def root_vector(ctx: ShuffleContext, beta, s: int, decomposition: Sequence[int], lambdas: Sequence) -> FreeElement:
    """E_{beta,s} as an iterated v-commutator with explicit exponents and parameters.

    ``decomposition`` gives one exponent per letter of the Lyndon word and
    ``lambdas`` one parameter per bracket (integers z mean v^z).  For the G_2
    root [1,2,1,2,2] the bracket nest is ``[[e1,e2],[[e1,e2],e2]]`` with the
    parameters listed inner-left, inner-right, middle, outer.
    """
    rs = ctx.rs
    beta = rs.root(beta)
    word = beta.word
    dec = [int(x) for x in decomposition]
    if len(dec) != len(word):
        raise ValueError(f"decomposition of {word_str(word)} needs {len(word)} exponents, got {len(dec)}")
    if sum(dec) != s:
        raise ValueError(f"decomposition {dec} does not sum to {s}")
    if len(lambdas) != len(word) - 1:
        raise ValueError(f"{word_str(word)} needs {len(word) - 1} commutator parameters")
    lam = [_unit_value(x) if not ctx.rational else _coef(x) for x in lambdas]
    letters = [FreeElement.letter(ctx, i, r) for i, r in zip(word, dec)]
    if rs.kind == "G" and word == (1, 2, 1, 2, 2):
        left = vcomm(letters[0], letters[1], lam[0])
        inner = vcomm(letters[2], letters[3], lam[1])
        right = vcomm(inner, letters[4], lam[2])
        return vcomm(left, right, lam[3])
    out = letters[0]
    for letter, u in zip(letters[1:], lam):
        out = vcomm(out, letter, u)
    return out


def _pair(rs: RootSystem, nu: Sequence[int], mu: Sequence[int]) -> int:
    return rs.form(nu, mu)


def tilde_decomposition(rs: RootSystem, beta, s: int, params: Optional[Sequence[int]] = None) -> List[int]:
    """Per-letter exponents of the distinguished root vector of (beta, s).

    ``params`` are the free exponents of the distinguished shape: for G_2 the
    pair (s1, s2); for B_n the values s_i, ..., s_j of a root [i, j] and
    s_i, ..., s_n of a root [i, n, j]; for A_n the values s_i, ..., s_j.
    Without ``params`` the whole of s goes to the first letter (for the G_2 root
    [1,2,1,2,2] an odd s uses s2 = 1).
    """
    beta = rs.root(beta)
    w = beta.word
    if rs.kind == "G":
        mult = {(1,): None, (2,): None, (1, 2): (1, 1), (1, 2, 2): (1, 2), (1, 2, 2, 2): (1, 3), (1, 2, 1, 2, 2): (2, 3)}[w]
        if mult is None:
            if params is not None and list(params) != [s]:
                raise ValueError("a simple root takes the single exponent s")
            return [s]
        if params is None:
            if w == (1, 2, 1, 2, 2):
                s2 = s % 2
                params = ((s - 3 * s2) // 2, s2)
            else:
                params = (s, 0)
        s1, s2 = (int(x) for x in params)
        if mult[0] * s1 + mult[1] * s2 != s:
            raise ValueError(f"exponents {params} do not give s = {s} for {word_str(w)}")
        if w == (1, 2, 1, 2, 2):
            return [s1, s2, s1, s2, s2]
        return [s1] + [s2] * (len(w) - 1)
    if rs.kind == "B":
        t, i, j = rs.b_type_data(beta)
        n = rs.n
        if t == "ij":
            if params is None:
                params = [s] + [0] * (j - i)
            params = [int(x) for x in params]
            if len(params) != j - i + 1 or sum(params) != s:
                raise ValueError(f"bad decomposition {params} for {word_str(w)}, s = {s}")
            return params
        if params is None:
            params = [s] + [0] * (n - i)
        params = [int(x) for x in params]
        if len(params) != n - i + 1:
            raise ValueError(f"{word_str(w)} needs exponents s_{i}..s_{n}")
        val = {i + t_: p for t_, p in enumerate(params)}
        total = sum(val[l] for l in range(i, j)) + 2 * sum(val[l] for l in range(j, n + 1))
        if total != s:
            raise ValueError(f"exponents {params} do not give s = {s} for {word_str(w)}")
        return [val[l] for l in w]
    # type A
    if params is None:
        params = [s] + [0] * (len(w) - 1)
    params = [int(x) for x in params]
    if len(params) != len(w) or sum(params) != s:
        raise ValueError(f"bad decomposition {params} for {word_str(w)}, s = {s}")
    return params


def _tilde_lambdas(rs: RootSystem, beta: PosRoot, sign: int) -> List[int]:
    """Exponents z of the parameters v^{sign*z} in the distinguished brackets.

    Every bracket [a, b]_u uses u = v^{-+(a, b)} where (a, b) pairs the root
    weights of the two sides; this reproduces the tabulated B_n and G_2 choices
    (a plain bracket appears exactly where the pairing vanishes).
    """
    w = beta.word
    n = rs.n
    e = lambda i: tuple(1 if k == i else 0 for k in range(1, n + 1))
    add = lambda a, b: tuple(x + y for x, y in zip(a, b))
    if rs.kind == "G" and w == (1, 2, 1, 2, 2):
        a12 = add(e(1), e(2))
        a122 = add(a12, e(2))
        return [-sign * rs.form(e(1), e(2)), -sign * rs.form(e(1), e(2)),
                -sign * rs.form(a12, e(2)), -sign * rs.form(a12, a122)]
    out = []
    cur = e(w[0])
    for i in w[1:]:
        out.append(-sign * rs.form(cur, e(i)))
        cur = add(cur, e(i))
    return out


def tilde_root_vector(ctx: ShuffleContext, beta, s: int, sign: int = 1, params: Optional[Sequence[int]] = None) -> FreeElement:
    """The distinguished root vector with parameters v^{+-...}; ``sign`` is +1 or -1."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    rs = ctx.rs
    beta = rs.root(beta)
    dec = tilde_decomposition(rs, beta, s, params)
    lams = [ULaurent.monomial(z) for z in _tilde_lambdas(rs, beta, sign)]
    return root_vector(ctx, beta, s, dec, lams)


def rtt_root_vector(ctx: ShuffleContext, beta, s: int, sign: int = 1, params: Optional[Sequence[int]] = None) -> FreeElement:
    """<2>_v times the distinguished type B root vector."""
    if ctx.rs.kind != "B" or ctx.rational:
        raise ValueError("RTT root vectors are defined for type B in the trigonometric flavor")
    return tilde_root_vector(ctx, beta, s, sign, params).scale(angle(2))


def divided_power(ctx: ShuffleContext, beta, s: int, k: int, sign: int = 1, params: Optional[Sequence[int]] = None) -> FreeElement:
    """Normalized divided power of the distinguished root vector."""
    if k < 0:
        raise ValueError("divided power needs k >= 0")
    if k == 0:
        return FreeElement.one(ctx)
    E = tilde_root_vector(ctx, beta, s, sign, params)
    return (E ** k).scale(VRatFunc(1, divided_power_norm(ctx.rs, beta, k)))


def divided_power_image(ctx: ShuffleContext, beta, s: int, k: int, sign: int = 1, params: Optional[Sequence[int]] = None) -> ShuffleElement:
    """Psi of the normalized divided power, computed as a shuffle power of Psi(E).

    Equal to ``psi(ctx, divided_power(...))`` but far cheaper: expanding E^k
    into words multiplies the number of symmetrization terms.
    """
    if k < 0:
        raise ValueError("divided power needs k >= 0")
    if k == 0:
        return unit(ctx)
    P = psi(ctx, tilde_root_vector(ctx, beta, s, sign, params))
    F = shuffle_product_many([P] * k)
    return F.scale(VRatFunc(1, divided_power_norm(ctx.rs, ctx.rs.root(beta), k)))


def yangian_root_vector(ctx: ShuffleContext, beta, s: int, decomposition: Optional[Sequence[int]] = None) -> FreeElement:
    """Plain-commutator root vector X_{beta,s}; default decomposition gives the distinguished one."""
    if not ctx.rational:
        raise ValueError("Yangian root vectors need the rational flavor")
    beta = ctx.rs.root(beta)
    if decomposition is None:
        decomposition = [s] + [0] * (beta.height - 1)
    if any(x < 0 for x in decomposition):
        raise ValueError("Yangian decompositions use nonnegative exponents")
    return root_vector(ctx, beta, s, decomposition, [1] * (beta.height - 1))


def yangian_bar_root_vector(ctx: ShuffleContext, beta, s: int, decomposition: Optional[Sequence[int]] = None) -> FreeElement:
    """hbar * X_{beta,s}."""
    return yangian_root_vector(ctx, beta, s, decomposition).scale(ULaurent.monomial(1))


def random_root_vector(ctx: ShuffleContext, beta, s: int, rng: random.Random, spread: int = 2, lam_range: int = 4) -> Tuple[FreeElement, List[int], List[int]]:
    """A root vector with random decomposition (entries within +-spread of even) and random v^z parameters."""
    beta = ctx.rs.root(beta)
    h = beta.height
    if ctx.rational:
        dec = [0] * h
        for _ in range(s):
            dec[rng.randrange(h)] += 1
        lams = [1] * (h - 1)
        return root_vector(ctx, beta, s, dec, lams), dec, lams
    dec = [rng.randint(-spread, spread) for _ in range(h - 1)]
    dec.append(s - sum(dec))
    rng.shuffle(dec)
    lams = [rng.randint(-lam_range, lam_range) for _ in range(h - 1)]
    return root_vector(ctx, beta, s, dec, lams), dec, lams


class VectorChoice:
    """Rule assigning a root vector to every (beta, s).

    kind: ``"tilde"`` (distinguished vectors with ``sign``), ``"rtt"``,
    ``"yangian"``, ``"yangian_bar"`` or ``"custom"`` (``fn(ctx, beta, s)``).
    """

    def __init__(self, kind: str = "tilde", sign: int = 1, fn: Optional[Callable] = None):
        if kind not in ("tilde", "rtt", "yangian", "yangian_bar", "custom"):
            raise ValueError(f"unknown vector choice {kind!r}")
        if kind == "custom" and fn is None:
            raise ValueError("custom choice needs a function")
        self.kind, self.sign, self.fn = kind, sign, fn
        self._cache: Dict[Tuple[ShuffleContext, Tuple[int, ...], int], FreeElement] = {}

    def __call__(self, ctx: ShuffleContext, beta, s: int) -> FreeElement:
        beta = ctx.rs.root(beta)
        key = (ctx, beta.word, s)
        if key not in self._cache:
            if self.kind == "tilde":
                E = tilde_root_vector(ctx, beta, s, self.sign)
            elif self.kind == "rtt":
                E = rtt_root_vector(ctx, beta, s, self.sign)
            elif self.kind == "yangian":
                E = yangian_root_vector(ctx, beta, s)
            elif self.kind == "yangian_bar":
                E = yangian_bar_root_vector(ctx, beta, s)
            else:
                E = self.fn(ctx, beta, s)
            self._cache[key] = E
        return self._cache[key]


def pbwd_factors(ctx: ShuffleContext, h: PBWDIndex, choice: Optional[VectorChoice] = None) -> List[FreeElement]:
    """The ordered factors E_{beta,s} of the PBWD monomial E_h."""
    choice = choice or VectorChoice("tilde")
    return [choice(ctx, b, s) for b, s in h.factors()]


def pbwd_monomial(ctx: ShuffleContext, h: PBWDIndex, choice: Optional[VectorChoice] = None) -> FreeElement:
    """E_h as an element of the free algebra (ordered product of root vectors)."""
    out = FreeElement.one(ctx)
    for f in pbwd_factors(ctx, h, choice):
        out = out * f
    return out


def psi_product(ctx: ShuffleContext, factors: Sequence[FreeElement]) -> ShuffleElement:
    """Psi of an ordered product, computed as the shuffle product of the factor images."""
    if not factors:
        return unit(ctx)
    return shuffle_product_many([psi(ctx, f) for f in factors])
