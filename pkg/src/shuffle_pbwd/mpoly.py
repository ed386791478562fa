"""Sparse multivariate Laurent polynomials in indexed variable families.

Variables are :class:`VarId` triples ``(family, color, slot)``: ``x`` variables
carry a simple-root index as color, ``w`` and ``z`` variables carry a positive
root (its word, a tuple of ints), and the single ``u`` family holds spectral
parameters (integer color, used by the R-matrix layer).

A :class:`MultiLaurent` stores a tuple of variables and a dict from exponent
keys to rational coefficients.  Position 0 of each key is the exponent of the
deformation parameter (``v`` or ``hbar``); the remaining positions follow the
variable tuple.  A common denominator (a polynomial in the parameter with
nonzero constant term and leading coefficient 1) allows coefficients in the
fraction field; it is 1 in almost every computation.
"""

from __future__ import annotations

import heapq
import itertools
from operator import add as _add
import json
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple, Union

from .ring import Number, ULaurent, VRatFunc, _norm, as_rational

__all__ = ["VarId", "MultiLaurent", "X", "W", "Z", "word_str", "parse_word"]

_FAMILY_RANK = {"x": 0, "w": 1, "z": 2, "u": 3}


def word_str(word: Sequence[int]) -> str:
    return "[" + ",".join(str(i) for i in word) + "]"


def parse_word(text: str) -> Tuple[int, ...]:
    t = text.strip()
    if not (t.startswith("[") and t.endswith("]")):
        raise ValueError(f"root word must look like [1,2,2], got {text!r}")
    body = t[1:-1].strip()
    if not body:
        raise ValueError("empty root word")
    return tuple(int(p) for p in body.split(","))


class VarId(NamedTuple):
    family: str
    color: Union[int, Tuple[int, ...]]
    slot: int

    def sort_key(self):
        c = self.color if isinstance(self.color, tuple) else (self.color,)
        return (_FAMILY_RANK[self.family], c, self.slot)

    def key(self) -> str:
        c = word_str(self.color) if isinstance(self.color, tuple) else str(self.color)
        return f"{self.family}:{c}:{self.slot}"

    @classmethod
    def from_key(cls, text: str) -> "VarId":
        fam, rest = text.split(":", 1)
        col, slot = rest.rsplit(":", 1)
        if fam not in _FAMILY_RANK:
            raise ValueError(f"unknown variable family {fam!r}")
        color = parse_word(col) if col.startswith("[") else int(col)
        v = cls(fam, color, int(slot))
        v.validate()
        return v

    def validate(self) -> None:
        if self.family not in _FAMILY_RANK:
            raise ValueError(f"unknown variable family {self.family!r}")
        if self.slot < 1:
            raise ValueError("variable slot must be >= 1")
        if self.family in ("x", "u") and not isinstance(self.color, int):
            raise ValueError(f"{self.family} variables are colored by an integer")
        if self.family in ("w", "z") and not isinstance(self.color, tuple):
            raise ValueError("w and z variables are colored by a root word")

    def pretty(self) -> str:
        c = word_str(self.color) if isinstance(self.color, tuple) else str(self.color)
        return f"{self.family}[{c},{self.slot}]"

    def __str__(self) -> str:
        return self.pretty()


def X(i: int, r: int) -> VarId:
    return VarId("x", i, r)


def W(beta: Sequence[int], s: int) -> VarId:
    return VarId("w", tuple(beta), s)


def Z(beta: Sequence[int], r: int) -> VarId:
    return VarId("z", tuple(beta), r)


def _sorted_vars(vs: Iterable[VarId]) -> Tuple[VarId, ...]:
    return tuple(sorted(set(vs), key=VarId.sort_key))


Key = Tuple[int, ...]


class MultiLaurent:
    """Immutable sparse Laurent polynomial over Q(param).

    The value is ``sum(c * param^k[0] * prod(var_i^k[i+1])) / den``.
    """

    __slots__ = ("vars", "terms", "den", "_index")

    def __init__(self, vars: Sequence[VarId], terms: Dict[Key, Number], den: Optional[ULaurent] = None):
        self.vars = tuple(vars)
        self.terms = terms
        self.den = den if den is not None else _ONE
        self._index = None

    # construction -----------------------------------------------------------
    @classmethod
    def zero(cls, vars: Sequence[VarId] = ()) -> "MultiLaurent":
        return cls(_sorted_vars(vars), {})

    @classmethod
    def one(cls, vars: Sequence[VarId] = ()) -> "MultiLaurent":
        vs = _sorted_vars(vars)
        return cls(vs, {(0,) * (len(vs) + 1): 1})

    @classmethod
    def const(cls, c, vars: Sequence[VarId] = ()) -> "MultiLaurent":
        vs = _sorted_vars(vars)
        n = len(vs)
        if isinstance(c, VRatFunc):
            num, den = c.num, c.den
        elif isinstance(c, ULaurent):
            num, den = c, _ONE
        else:
            num, den = ULaurent.const(c), _ONE
        terms = {(e,) + (0,) * n: a for e, a in num._c.items()}
        return cls(vs, terms, den)

    @classmethod
    def var(cls, x: VarId, power: int = 1) -> "MultiLaurent":
        x.validate()
        return cls((x,), {(0, power): 1})

    @classmethod
    def monomial(cls, exps: Mapping[VarId, int], coeff=1) -> "MultiLaurent":
        vs = _sorted_vars(exps)
        key = tuple(exps[x] for x in vs)
        base = cls(vs, {(0,) + key: 1})
        return base.scale(coeff)

    @classmethod
    def from_terms(cls, items: Iterable[Tuple[Mapping[VarId, int], object]]) -> "MultiLaurent":
        """Build from pairs (exponent map, coefficient)."""
        out = None
        for exps, c in items:
            t = cls.monomial(exps, c)
            out = t if out is None else out + t
        return out if out is not None else cls.zero()

    # basic inspection ------------------------------------------------------
    def index(self) -> Dict[VarId, int]:
        if self._index is None:
            self._index = {x: i for i, x in enumerate(self.vars)}
        return self._index

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def used_vars(self) -> Tuple[VarId, ...]:
        used = set()
        for k in self.terms:
            for i, e in enumerate(k[1:]):
                if e:
                    used.add(i)
        return tuple(x for i, x in enumerate(self.vars) if i in used)

    def coeffs(self) -> Dict[Tuple[int, ...], ULaurent]:
        """Numerator coefficients grouped by x-monomial (the common den is separate)."""
        out: Dict[Tuple[int, ...], Dict[int, Number]] = {}
        for k, a in self.terms.items():
            out.setdefault(k[1:], {})[k[0]] = a
        return {m: ULaurent._raw(c) for m, c in out.items()}

    def coefficient_view(self) -> Dict[Tuple[Tuple[VarId, int], ...], VRatFunc]:
        """Map from sparse monomials ((var, exp), ...) to coefficients in Q(param)."""
        out = {}
        for m, c in self.coeffs().items():
            sparse = tuple((x, e) for x, e in zip(self.vars, m) if e)
            out[sparse] = VRatFunc(c, self.den) if not self.den.is_one() else VRatFunc._raw(c, _ONE)
        return out

    def is_constant(self) -> bool:
        return all(not any(k[1:]) for k in self.terms)

    def constant_value(self) -> VRatFunc:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        num = ULaurent({k[0]: a for k, a in self.terms.items()})
        return VRatFunc(num, self.den)

    def param_valuation(self) -> int:
        """Lowest exponent of the parameter in the numerator."""
        if not self.terms:
            raise ValueError("valuation of zero")
        return min(k[0] for k in self.terms)

    def is_integral(self) -> bool:
        """Coefficients in Z[param, param^-1]."""
        return self.den.is_one() and all(type(a) is int for a in self.terms.values())

    def is_param_polynomial(self) -> bool:
        """Coefficients in Q[param] (no negative parameter powers, trivial den)."""
        return self.den.is_one() and all(k[0] >= 0 for k in self.terms)

    def degree_in(self, x: VarId) -> Tuple[int, int]:
        i = self.index().get(x)
        if i is None or not self.terms:
            return (0, 0)
        es = [k[i + 1] for k in self.terms]
        return (min(es), max(es))

    def total_degree(self) -> int:
        return max((sum(k[1:]) for k in self.terms), default=0)

    # variable bookkeeping ---------------------------------------------------
    def embed(self, vars: Sequence[VarId]) -> "MultiLaurent":
        """Re-express in a larger (sorted) variable tuple."""
        vars = tuple(vars)
        if vars == self.vars:
            return self
        pos = {x: i for i, x in enumerate(vars)}
        n = len(vars)
        for x, i in self.index().items():
            if x not in pos:
                raise ValueError(f"variable {x} missing from target ring")
        mapping = [pos[x] + 1 for x in self.vars]
        terms = {}
        for k, a in self.terms.items():
            nk = [0] * (n + 1)
            nk[0] = k[0]
            for j, e in enumerate(k[1:]):
                if e:
                    nk[mapping[j]] = e
            terms[tuple(nk)] = a
        return MultiLaurent(vars, terms, self.den)

    def trim(self) -> "MultiLaurent":
        used = self.used_vars()
        if len(used) == len(self.vars):
            return self
        return self.embed_subset(used)

    def embed_subset(self, vars: Sequence[VarId]) -> "MultiLaurent":
        pos = self.index()
        idx = [pos[x] + 1 for x in vars]
        terms = {}
        for k, a in self.terms.items():
            nk = (k[0],) + tuple(k[i] for i in idx)
            terms[nk] = terms.get(nk, 0) + a
        return MultiLaurent(tuple(vars), {k: a for k, a in terms.items() if a}, self.den)

    def _common(self, other: "MultiLaurent") -> Tuple["MultiLaurent", "MultiLaurent"]:
        if self.vars == other.vars:
            return self, other
        vs = _sorted_vars(self.vars + other.vars)
        return self.embed(vs), other.embed(vs)

    def rename(self, mapping: Mapping[VarId, VarId]) -> "MultiLaurent":
        """Injective renaming of variables (variables not listed are kept)."""
        new = [mapping.get(x, x) for x in self.vars]
        if len(set(new)) != len(new):
            raise ValueError("renaming must be injective on the variables present")
        order = sorted(range(len(new)), key=lambda i: new[i].sort_key())
        vs = tuple(new[i] for i in order)
        perm = [0] + [i + 1 for i in order]
        terms = {tuple(k[p] for p in perm): a for k, a in self.terms.items()}
        return MultiLaurent(vs, terms, self.den)

    # arithmetic -------------------------------------------------------------
    def __add__(self, other) -> "MultiLaurent":
        other = _lift(other, self)
        if other is NotImplemented:
            return NotImplemented
        if not other.terms:
            return self
        if not self.terms:
            return other
        a, b = self._common(other)
        if a.den == b.den:
            terms = dict(a.terms)
            for k, c in b.terms.items():
                s = terms.get(k, 0) + c
                if s:
                    terms[k] = _norm(s) if type(s) is Fraction else s
                else:
                    del terms[k]
            res = MultiLaurent(a.vars, terms, a.den)
            return res._reduce() if not a.den.is_one() else res
        na = a._mul_param(b.den)
        nb = b._mul_param(a.den)
        terms = dict(na.terms)
        for k, c in nb.terms.items():
            s = terms.get(k, 0) + c
            if s:
                terms[k] = _norm(s) if type(s) is Fraction else s
            else:
                del terms[k]
        return MultiLaurent(a.vars, terms, a.den * b.den)._reduce()

    __radd__ = __add__

    def __neg__(self) -> "MultiLaurent":
        return MultiLaurent(self.vars, {k: -a for k, a in self.terms.items()}, self.den)

    def __sub__(self, other) -> "MultiLaurent":
        other = _lift(other, self)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "MultiLaurent":
        other = _lift(other, self)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def _mul_param(self, u: ULaurent) -> "MultiLaurent":
        """Multiply the numerator by a parameter polynomial (den untouched)."""
        if u.is_one():
            return self
        terms: Dict[Key, Number] = {}
        get = terms.get
        for k, a in self.terms.items():
            rest = k[1:]
            for e, c in u._c.items():
                nk = (k[0] + e,) + rest
                terms[nk] = get(nk, 0) + a * c
        return MultiLaurent(self.vars, {k: _norm(a) for k, a in terms.items() if a}, self.den)

    def __mul__(self, other) -> "MultiLaurent":
        if isinstance(other, (int, Fraction, ULaurent, VRatFunc)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, MultiLaurent):
            return NotImplemented
        a, b = self._common(other)
        if not a.terms or not b.terms:
            return MultiLaurent(a.vars, {})
        ta, tb = a.terms, b.terms
        if len(ta) < len(tb):
            ta, tb = tb, ta
        terms: Dict[Key, Number] = {}
        get = terms.get
        if len(tb) == 1:
            (kb, cb), = tb.items()
            for ka, ca in ta.items():
                terms[tuple(map(_add, ka, kb))] = ca * cb
        else:
            for kb, cb in tb.items():
                for ka, ca in ta.items():
                    nk = tuple(map(_add, ka, kb))
                    terms[nk] = get(nk, 0) + ca * cb
            terms = {k: c for k, c in terms.items() if c}
        if any(type(c) is Fraction for c in terms.values()):
            terms = {k: _norm(c) for k, c in terms.items()}
        den = a.den if b.den.is_one() else (b.den if a.den.is_one() else a.den * b.den)
        res = MultiLaurent(a.vars, terms, den)
        return res._reduce() if not den.is_one() else res

    __rmul__ = __mul__

    def scale(self, c) -> "MultiLaurent":
        if isinstance(c, VRatFunc):
            res = self._mul_param(c.num) if not c.num.is_monomial() else self._scale_monomial(c.num)
            if c.den.is_one():
                return res
            return MultiLaurent(res.vars, res.terms, res.den * c.den)._reduce()
        if isinstance(c, ULaurent):
            if not c._c:
                return MultiLaurent(self.vars, {})
            if c.is_monomial():
                return self._scale_monomial(c)
            res = self._mul_param(c)
            return res._reduce() if not res.den.is_one() else res
        c = as_rational(c)
        if not c:
            return MultiLaurent(self.vars, {})
        if c == 1:
            return self
        return MultiLaurent(self.vars, {k: _norm(a * c) for k, a in self.terms.items()}, self.den)

    def _scale_monomial(self, u: ULaurent) -> "MultiLaurent":
        (e, c), = u._c.items()
        if c == 1:
            terms = {(k[0] + e,) + k[1:]: a for k, a in self.terms.items()}
        else:
            terms = {(k[0] + e,) + k[1:]: _norm(a * c) for k, a in self.terms.items()}
        res = MultiLaurent(self.vars, terms, self.den)
        return res._reduce() if not self.den.is_one() else res

    def mul_monomial(self, exps: Mapping[VarId, int]) -> "MultiLaurent":
        """Multiply by a monomial in the variables."""
        p = self
        missing = [x for x in exps if x not in p.index()]
        if missing:
            p = p.embed(_sorted_vars(p.vars + tuple(missing)))
        idx = p.index()
        shift = [0] * (len(p.vars) + 1)
        for x, e in exps.items():
            shift[idx[x] + 1] += e
        terms = {tuple([a + b for a, b in zip(k, shift)]): c for k, c in p.terms.items()}
        return MultiLaurent(p.vars, terms, p.den)

    def __pow__(self, k: int) -> "MultiLaurent":
        if k < 0:
            if len(self.terms) != 1 or not self.den.is_one():
                raise ValueError("negative power of a non-monomial")
            (key, c), = self.terms.items()
            inv = Fraction(1) / Fraction(c) ** (-k)
            return MultiLaurent(self.vars, {tuple(e * k for e in key): _norm(inv)})
        out = MultiLaurent.one(self.vars)
        base = self
        while k:
            if k & 1:
                out = out * base
            k >>= 1
            if k:
                base = base * base
        return out

    def _reduce(self) -> "MultiLaurent":
        """Cancel common factors between the numerator content and den."""
        den = self.den
        if den.is_one():
            return self
        if not self.terms:
            return MultiLaurent(self.vars, {}, _ONE)
        g = den
        if not den.is_constant():
            for c in self.coeffs().values():
                g = g.gcd(c)
                if g.is_constant():
                    break
        terms = self.terms
        if not g.is_constant():
            new_terms = {}
            for m, c in self.coeffs().items():
                q = c.exact_div(g)
                for e, a in q._c.items():
                    new_terms[(e,) + m] = a
            terms = new_terms
            den = den.exact_div(g)
        lc = Fraction(den.lead_coeff())
        if lc != 1:
            inv = 1 / lc
            terms = {k: _norm(a * inv) for k, a in terms.items()}
            den = den.scale(inv)
        return MultiLaurent(self.vars, terms, den)

    # comparison ---------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiLaurent):
            other = _lift(other, self)
            if other is NotImplemented:
                return NotImplemented
        a, b = self.trim(), other.trim()
        if a.vars != b.vars:
            return not a.terms and not b.terms
        return a.den == b.den and a.terms == b.terms

    def __hash__(self):
        t = self.trim()
        return hash((t.vars, frozenset(t.terms.items()), t.den))

    # substitution and symmetrization ------------------------------------------
    def substitute(self, sigma: Mapping[VarId, object], partial: bool = False) -> "MultiLaurent":
        """Simultaneous substitution of variables by polynomials.

        Images may be MultiLaurent values, or pairs ``(coeff, target)`` meaning
        ``coeff * target`` where target is a VarId or None (the constant 1).
        Every variable that actually occurs must be mapped unless ``partial``.
        """
        images: Dict[VarId, MultiLaurent] = {}
        for x, img in sigma.items():
            images[x] = _image(img)
        used = self.used_vars()
        if not partial:
            missing = [x for x in used if x not in images]
            if missing:
                raise ValueError(f"substitution is not defined on {', '.join(map(str, missing))}")
        for x in used:
            if x not in images:
                images[x] = MultiLaurent.var(x)
        if not self.terms:
            return MultiLaurent.zero()
        target_vars = _sorted_vars(itertools.chain.from_iterable(images[x].vars for x in used))
        usedset = set(used)
        imgs = [images[x].embed(target_vars) if x in usedset else None for x in self.vars]
        mono = all(
            img is None or (len(img.terms) == 1 and img.den.is_one())
            for x, img in zip(self.vars, imgs)
            if x in used
        )
        n = len(target_vars)
        if mono:
            data = []
            for x, img in zip(self.vars, imgs):
                if img is None or x not in used:
                    data.append(None)
                else:
                    (k, c), = img.terms.items()
                    data.append((k, c))
            terms: Dict[Key, Number] = {}
            get = terms.get
            for k, a in self.terms.items():
                nk = [0] * (n + 1)
                nk[0] = k[0]
                coef = a
                for j, e in enumerate(k[1:]):
                    if e:
                        ik, ic = data[j]
                        for t in range(n + 1):
                            if ik[t]:
                                nk[t] += e * ik[t]
                        if ic != 1:
                            coef = coef * (ic ** e if e > 0 else Fraction(1) / Fraction(ic) ** (-e))
                key = tuple(nk)
                terms[key] = get(key, 0) + coef
            out = MultiLaurent(target_vars, {k: _norm(a) for k, a in terms.items() if a}, self.den)
            return out._reduce() if not self.den.is_one() else out
        # general images: expand with cached powers
        cache: Dict[Tuple[int, int], MultiLaurent] = {}

        def power(j: int, e: int) -> MultiLaurent:
            key = (j, e)
            if key not in cache:
                if e < 0:
                    cache[key] = imgs[j] ** e
                elif e == 1:
                    cache[key] = imgs[j]
                else:
                    cache[key] = power(j, e - 1) * imgs[j]
            return cache[key]

        acc: Dict[Key, Number] = {}
        dens = _ONE
        for k, a in self.terms.items():
            t = MultiLaurent(target_vars, {(k[0],) + (0,) * n: a})
            for j, e in enumerate(k[1:]):
                if e:
                    t = t * power(j, e)
            if not t.den.is_one():
                raise ValueError("substitution images must have polynomial coefficients")
            for kk, c in t.terms.items():
                acc[kk] = acc.get(kk, 0) + c
        out = MultiLaurent(target_vars, {k: _norm(a) for k, a in acc.items() if a}, self.den)
        return out._reduce() if not self.den.is_one() else out

    def substitute_param(self, u: ULaurent) -> "MultiLaurent":
        """Substitute the parameter by a Laurent polynomial u (monomial for negative powers)."""
        out: Dict[Key, Number] = {}
        for k, a in self.terms.items():
            pk = u ** k[0]
            for e, c in pk._c.items():
                nk = (e,) + k[1:]
                out[nk] = out.get(nk, 0) + a * c
        den = self.den
        res = MultiLaurent(self.vars, {k: _norm(a) for k, a in out.items() if a})
        if den.is_one():
            return res
        dd = ULaurent.zero()
        for e, c in den._c.items():
            dd = dd + (u ** e).scale(c)
        return res.scale(VRatFunc(ULaurent.one(), dd))

    def permute(self, perm: Mapping[VarId, VarId]) -> "MultiLaurent":
        """Apply a permutation of variables (a bijection on a subset of vars)."""
        return self.rename(perm)

    def symmetrize(self, groups: Sequence[Sequence[VarId]]) -> "MultiLaurent":
        """Sum of all images under the product of symmetric groups on ``groups``."""
        flat = [x for g in groups for x in g]
        if len(set(flat)) != len(flat):
            raise ValueError("symmetrization groups must be disjoint")
        p = self
        missing = [x for x in flat if x not in p.index()]
        if missing:
            p = p.embed(_sorted_vars(p.vars + tuple(missing)))
        idx = p.index()
        n = len(p.vars)
        perms_per_group = []
        for g in groups:
            pos = [idx[x] + 1 for x in g]
            perms_per_group.append([(pos, [pos[i] for i in pi]) for pi in itertools.permutations(range(len(g)))])
        acc: Dict[Key, Number] = {}
        for combo in itertools.product(*perms_per_group):
            mapping = list(range(n + 1))
            for src, dst in combo:
                for s_, d_ in zip(src, dst):
                    mapping[d_] = s_
            for k, a in p.terms.items():
                nk = tuple(k[mapping[t]] for t in range(n + 1))
                acc[nk] = acc.get(nk, 0) + a
        res = MultiLaurent(p.vars, {k: _norm(a) for k, a in acc.items() if a}, p.den)
        return res._reduce() if not p.den.is_one() else res

    def is_symmetric(self, groups: Sequence[Sequence[VarId]]) -> bool:
        """Invariance under adjacent transpositions inside each group."""
        for g in groups:
            for a, b in zip(g, g[1:]):
                if self.rename({a: b, b: a}) != self:
                    return False
        return True

    # division -----------------------------------------------------------------
    def exact_divide(self, q: "MultiLaurent", laurent: bool = False) -> Optional["MultiLaurent"]:
        """Exact quotient self/q, or None when q does not divide self.

        Both operands are first shifted by monomials into the polynomial range,
        then divided with the graded-lexicographic order on the variables.
        By default the quotient may not introduce negative exponents that self
        does not already have (so ``x / y`` fails); ``laurent=True`` accepts any
        quotient in the Laurent ring.
        """
        r = self._exact_divide(q)
        if r is None or laurent or not r.terms:
            return r
        p = self
        pidx = p.index()
        for j, x in enumerate(r.vars):
            low = min(k[j + 1] for k in r.terms)
            if low >= 0:
                continue
            pj = pidx.get(x)
            plow = min(k[pj + 1] for k in p.terms) if pj is not None else 0
            if low < min(0, plow):
                return None
        return r

    def _exact_divide(self, q: "MultiLaurent") -> Optional["MultiLaurent"]:
        if not isinstance(q, MultiLaurent):
            q = _lift(q, self)
        if not q.terms:
            raise ZeroDivisionError("division by the zero polynomial")
        if not self.terms:
            return self
        p, q = self._common(q)
        n = len(p.vars)
        # quotient in the denominator part
        den_factor = VRatFunc(q.den, p.den)
        if all(not any(k[1:]) for k in q.terms):
            c = VRatFunc(ULaurent({k[0]: a for k, a in q.terms.items()}))
            return MultiLaurent(p.vars, p.terms, _ONE).scale(den_factor / c)
        mp = [min(k[i] for k in p.terms) for i in range(1, n + 1)]
        mq = [min(k[i] for k in q.terms) for i in range(1, n + 1)]
        P = _group(p.terms, mp)
        Q = _group(q.terms, mq)
        R = _poly_divide(P, Q)
        if R is None:
            return None
        shift = [a - b for a, b in zip(mp, mq)]
        terms: Dict[Key, Number] = {}
        den = _ONE
        items = list(R.items())
        if any(isinstance(c, VRatFunc) and not c.den.is_one() for _, c in items):
            common = _ONE
            for _, c in items:
                if isinstance(c, VRatFunc) and not c.den.is_one():
                    common = common * c.den.exact_div(common.gcd(c.den) if not common.is_one() else _ONE)
            den = common
            conv = []
            for m, c in items:
                c = VRatFunc.of(c) * VRatFunc(common)
                assert c.den.is_one()
                conv.append((m, c.num))
            items = conv
        for m, c in items:
            num = c.num if isinstance(c, VRatFunc) else c
            mk = tuple(a + b for a, b in zip(m, shift))
            for e, a in num._c.items():
                terms[(e,) + mk] = a
        res = MultiLaurent(p.vars, terms, den)
        res = res._reduce() if not den.is_one() else res
        if not den_factor.num.is_one() or not den_factor.den.is_one():
            res = res.scale(den_factor)
        return res

    def divides_param(self, c: ULaurent) -> bool:
        """True when the numerator divided by c has all coefficients in Z[param^+-1]."""
        if not self.den.is_one():
            return False
        for coef in self.coeffs().values():
            qt = coef.exact_div(c)
            if qt is None or not qt.is_integral():
                return False
        return True

    def divide_param(self, c: ULaurent) -> "MultiLaurent":
        """Divide by a nonzero parameter polynomial (result may acquire a den)."""
        return self.scale(VRatFunc(ULaurent.one(), c))

    def divide_linear(self, a: VarId, b: VarId, c: Optional[ULaurent] = None) -> Optional["MultiLaurent"]:
        """Exact division by (a - c*b) for a monomial c (default 1), or None."""
        c = c if c is not None else _ONE
        if not c.is_monomial():
            raise ValueError("divide_linear needs a monomial coefficient")
        if not self.terms:
            return self
        p = self
        idx = p.index()
        if a not in idx or b not in idx:
            missing = tuple(x for x in (a, b) if x not in idx)
            p = p.embed(_sorted_vars(p.vars + missing))
            idx = p.index()
        ia, ib = idx[a] + 1, idx[b] + 1
        (ce, cc), = c._c.items()
        lo = min(k[ia] for k in p.terms)
        # group by the exponent of a
        by_e: Dict[int, List[Tuple[Key, Number]]] = {}
        for k, v in p.terms.items():
            by_e.setdefault(k[ia] - lo, []).append((k, v))
        top = max(by_e)
        q: Dict[Key, Number] = {}
        carry: Dict[Key, Number] = {}
        # synthetic division from the top degree in a: Q_{e-1} = P_e + c*b*Q_e
        for e in range(top, 0, -1):
            cur: Dict[Key, Number] = {}
            for k, v in by_e.get(e, ()):
                kk = list(k)
                kk[ia] = 0
                t = tuple(kk)
                cur[t] = cur.get(t, 0) + v
            for t, v in carry.items():
                cur[t] = cur.get(t, 0) + v
            cur = {t: v for t, v in cur.items() if v}
            carry = {}
            for t, v in cur.items():
                kk = list(t)
                kk[ia] = e - 1 + lo
                q[tuple(kk)] = v
                kk = list(t)
                kk[0] += ce
                kk[ib] += 1
                carry[tuple(kk)] = v * cc
        rem: Dict[Key, Number] = {}
        for k, v in by_e.get(0, ()):
            kk = list(k)
            kk[ia] = 0
            t = tuple(kk)
            rem[t] = rem.get(t, 0) + v
        for t, v in carry.items():
            rem[t] = rem.get(t, 0) + v
        if any(v for v in rem.values()):
            return None
        return MultiLaurent(p.vars, {k: _norm(v) for k, v in q.items() if v}, p.den)

    # evaluation -----------------------------------------------------------------
    def evaluate(self, point: Mapping[VarId, Number]) -> VRatFunc:
        """Exact value in Q(param) at rational values of all occurring variables."""
        vals = []
        for x in self.vars:
            vals.append(point.get(x))
        acc: Dict[int, Number] = {}
        for k, a in self.terms.items():
            val = Fraction(a)
            for j, e in enumerate(k[1:]):
                if e:
                    x = vals[j]
                    if x is None:
                        raise ValueError(f"no value given for {self.vars[j]}")
                    x = Fraction(as_rational(x))
                    if x == 0 and e < 0:
                        raise ZeroDivisionError(f"negative power of {self.vars[j]} at zero")
                    val *= x ** e
            acc[k[0]] = acc.get(k[0], 0) + val
        return VRatFunc(ULaurent(acc), self.den)

    def evaluate_all(self, point: Mapping[VarId, Number], param: Number) -> Number:
        r = self.evaluate(point)
        return r.evaluate(param)

    # text ----------------------------------------------------------------------
    def sorted_monomials(self) -> List[Tuple[Tuple[int, ...], ULaurent]]:
        """Monomials with coefficients, in decreasing graded-lexicographic order."""
        items = list(self.coeffs().items())
        items.sort(key=lambda mc: (sum(mc[0]), mc[0]), reverse=True)
        return items

    def render(self, symbol: str = "v") -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_monomials():
            mono = "*".join(
                (x.pretty() if e == 1 else f"{x.pretty()}^{e}") for x, e in zip(self.vars, m) if e
            )
            cs = c.render(symbol)
            if not mono:
                parts.append(f"({cs})")
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        body = " + ".join(parts)
        if not self.den.is_one():
            body = f"({body})/({self.den.render(symbol)})"
        return body

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"MultiLaurent({self.render()!r})"

    def to_json(self, symbol: str = "v") -> dict:
        terms = []
        for m, c in self.sorted_monomials():
            exps = {x.key(): e for x, e in zip(self.vars, m) if e}
            terms.append({"exps": exps, "coef": VRatFunc(c, self.den).render(symbol)})
        return {"terms": terms}

    @classmethod
    def from_json(cls, data, symbol: str = "v") -> "MultiLaurent":
        if isinstance(data, str):
            data = json.loads(data)
        out = cls.zero()
        for t in data["terms"]:
            exps = {VarId.from_key(k): int(e) for k, e in t["exps"].items()}
            coef = VRatFunc.parse(t["coef"], symbol)
            out = out + cls.monomial(exps, 1).scale(coef)
        return out


_ONE = ULaurent.one()


def _lift(x, like: MultiLaurent):
    if isinstance(x, MultiLaurent):
        return x
    if isinstance(x, (int, Fraction, ULaurent, VRatFunc)) and not isinstance(x, bool):
        return MultiLaurent.const(x)
    return NotImplemented


def _image(img) -> MultiLaurent:
    if isinstance(img, MultiLaurent):
        return img
    if isinstance(img, VarId):
        return MultiLaurent.var(img)
    if isinstance(img, tuple) and len(img) == 2:
        coeff, target = img
        base = MultiLaurent.var(target) if target is not None else MultiLaurent.one()
        return base.scale(coeff)
    if isinstance(img, (int, Fraction, ULaurent, VRatFunc)):
        return MultiLaurent.const(img)
    raise TypeError(f"bad substitution image {img!r}")


def _group(terms: Dict[Key, Number], shift: Sequence[int]) -> Dict[Tuple[int, ...], ULaurent]:
    out: Dict[Tuple[int, ...], Dict[int, Number]] = {}
    for k, a in terms.items():
        m = tuple(e - s for e, s in zip(k[1:], shift))
        out.setdefault(m, {})[k[0]] = a
    return {m: ULaurent._raw(c) for m, c in out.items()}


def _grlex(m: Tuple[int, ...]):
    return (sum(m), m)


def _poly_divide(P: Dict[Tuple[int, ...], object], Q: Dict[Tuple[int, ...], object]):
    """Exact division of polynomials with coefficients in Q(param) (grlex)."""
    lq = max(Q, key=_grlex)
    lc = Q[lq]
    mono_lc = isinstance(lc, ULaurent) and lc.is_monomial()
    if not mono_lc:
        P = {m: VRatFunc.of(c) for m, c in P.items()}
        Q = {m: VRatFunc.of(c) for m, c in Q.items()}
        lc = Q[lq]
        inv = lc.inverse()
    else:
        (le, la), = lc._c.items()
        inv = ULaurent.monomial(-le, Fraction(1) / Fraction(la))
    qrest = [(m, c) for m, c in Q.items() if m != lq]
    P = dict(P)
    heap = [(-sum(m), tuple(-e for e in m)) for m in P]
    heapq.heapify(heap)
    quot: Dict[Tuple[int, ...], object] = {}
    while heap:
        negdeg, negm = heapq.heappop(heap)
        m = tuple(-e for e in negm)
        c = P.get(m)
        if c is None:
            continue
        del P[m]
        if not c:
            continue
        d = tuple(a - b for a, b in zip(m, lq))
        if any(e < 0 for e in d):
            return None
        t = c * inv
        quot[d] = t
        for mm, cc in qrest:
            key = tuple(a + b for a, b in zip(mm, d))
            old = P.get(key)
            new = (old - t * cc) if old is not None else -(t * cc)
            if new:
                if old is None:
                    heapq.heappush(heap, (-sum(key), tuple(-e for e in key)))
                P[key] = new
            elif old is not None:
                P[key] = new
    return quot
