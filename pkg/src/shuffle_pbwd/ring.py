"""Exact coefficient arithmetic in one deformation parameter.

The same classes serve the trigonometric context (parameter ``v``) and the
rational context (parameter ``hbar``).  A :class:`ULaurent` is a Laurent
polynomial with rational coefficients, stored as an immutable mapping from
exponents to coefficients.  A :class:`VRatFunc` is a reduced fraction of two
such polynomials.

Coefficients are Python ``int`` whenever possible and ``fractions.Fraction``
otherwise, so the integral case (the common one) stays on the fast path.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Dict, Iterable, Iterator, Mapping, Optional, Tuple, Union

Rational = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Rational",
    "ULaurent",
    "VRatFunc",
    "qint",
    "qfact",
    "qbinom",
    "angle",
    "is_integral_laurent",
    "as_rational",
]


def _norm(c: Number) -> Number:
    """Collapse a Fraction with unit denominator to an int."""
    if type(c) is Fraction and c.denominator == 1:
        return c.numerator
    return c


def as_rational(c) -> Number:
    """Coerce ints, Fractions and strings like ``'3/4'`` to a normalized scalar."""
    if isinstance(c, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return _norm(c)
    if isinstance(c, str):
        return _norm(Fraction(c.strip()))
    raise TypeError(f"cannot use {c!r} as an exact scalar")


class ULaurent:
    """Univariate Laurent polynomial over Q, immutable.

    ``ULaurent({2: 1, -1: 3})`` is ``v^2 + 3*v^-1``.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Optional[Mapping[int, Number]] = None):
        c: Dict[int, Number] = {}
        if coeffs:
            for e, a in coeffs.items():
                if a:
                    c[int(e)] = _norm(a) if type(a) is Fraction else a
        self._c = c
        self._hash = None

    @classmethod
    def _raw(cls, c: Dict[int, Number]) -> "ULaurent":
        obj = cls.__new__(cls)
        obj._c = c
        obj._hash = None
        return obj

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls) -> "ULaurent":
        return cls._raw({})

    @classmethod
    def one(cls) -> "ULaurent":
        return cls._raw({0: 1})

    @classmethod
    def const(cls, c: Number) -> "ULaurent":
        c = as_rational(c)
        return cls._raw({0: c} if c else {})

    @classmethod
    def monomial(cls, e: int, c: Number = 1) -> "ULaurent":
        c = as_rational(c)
        return cls._raw({int(e): c} if c else {})

    @classmethod
    def var(cls) -> "ULaurent":
        return cls._raw({1: 1})

    # inspection -----------------------------------------------------------
    @property
    def coeffs(self) -> Dict[int, Number]:
        return dict(self._c)

    def items(self) -> Iterator[Tuple[int, Number]]:
        return iter(sorted(self._c.items()))

    def is_zero(self) -> bool:
        return not self._c

    def is_one(self) -> bool:
        return self._c == {0: 1}

    def is_monomial(self) -> bool:
        return len(self._c) == 1

    def is_constant(self) -> bool:
        return not self._c or set(self._c) == {0}

    def constant_term(self) -> Number:
        return self._c.get(0, 0)

    def valuation(self) -> int:
        if not self._c:
            raise ValueError("valuation of zero")
        return min(self._c)

    def degree(self) -> int:
        if not self._c:
            raise ValueError("degree of zero")
        return max(self._c)

    def lead_coeff(self) -> Number:
        return self._c[self.degree()] if self._c else 0

    def coeff(self, e: int) -> Number:
        return self._c.get(e, 0)

    def is_integral(self) -> bool:
        """True when every coefficient is an integer (membership in Z[v, v^-1])."""
        return all(type(a) is int for a in self._c.values())

    def is_polynomial(self) -> bool:
        """True when no negative exponent occurs (membership in Q[v])."""
        return all(e >= 0 for e in self._c)

    def is_palindromic(self) -> bool:
        return all(self._c.get(-e) == a for e, a in self._c.items())

    # arithmetic -----------------------------------------------------------
    def __add__(self, other) -> "ULaurent":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        if not other._c:
            return self
        if not self._c:
            return other
        c = dict(self._c)
        for e, a in other._c.items():
            s = c.get(e, 0) + a
            if s:
                c[e] = _norm(s) if type(s) is Fraction else s
            else:
                c.pop(e, None)
        return ULaurent._raw(c)

    __radd__ = __add__

    def __neg__(self) -> "ULaurent":
        return ULaurent._raw({e: -a for e, a in self._c.items()})

    def __sub__(self, other) -> "ULaurent":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ULaurent":
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "ULaurent":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        other = _lift(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = self._c, other._c
        if not a or not b:
            return ULaurent._raw({})
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (f, y), = b.items()
            if y == 1:
                return ULaurent._raw({e + f: x for e, x in a.items()})
            return ULaurent._raw({e + f: _norm(x * y) for e, x in a.items()})
        c: Dict[int, Number] = {}
        get = c.get
        for f, y in b.items():
            for e, x in a.items():
                k = e + f
                c[k] = get(k, 0) + x * y
        return ULaurent._raw({e: _norm(s) for e, s in c.items() if s})

    __rmul__ = __mul__

    def scale(self, s: Number) -> "ULaurent":
        s = as_rational(s)
        if not s:
            return ULaurent._raw({})
        if s == 1:
            return self
        return ULaurent._raw({e: _norm(a * s) for e, a in self._c.items()})

    def shift(self, k: int) -> "ULaurent":
        """Multiply by v^k."""
        if not k:
            return self
        return ULaurent._raw({e + k: a for e, a in self._c.items()})

    def __pow__(self, k: int) -> "ULaurent":
        if k < 0:
            if not self.is_monomial():
                raise ValueError("negative power of a non-monomial Laurent polynomial")
            (e, a), = self._c.items()
            return ULaurent._raw({e * k: _norm(Fraction(1) / Fraction(a) ** (-k))})
        result = ULaurent.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def subs_power(self, k: int) -> "ULaurent":
        """Substitute v -> v^k (k may be negative)."""
        if k == 0:
            return ULaurent.const(sum(self._c.values(), 0))
        return ULaurent._raw({e * k: a for e, a in self._c.items()})

    def evaluate(self, x: Number) -> Number:
        x = as_rational(x)
        if not self._c:
            return 0
        if x == 0:
            if any(e < 0 for e in self._c):
                raise ZeroDivisionError("negative exponent evaluated at zero")
            return self._c.get(0, 0)
        x = Fraction(x)
        total = Fraction(0)
        for e, a in self._c.items():
            total += a * x ** e
        return _norm(total)

    # division -------------------------------------------------------------
    def divmod_poly(self, other: "ULaurent") -> Tuple["ULaurent", "ULaurent"]:
        """Euclidean division for ordinary polynomials (nonnegative exponents)."""
        if not other._c:
            raise ZeroDivisionError("division by zero polynomial")
        if not self.is_polynomial() or not other.is_polynomial():
            raise ValueError("divmod_poly needs ordinary polynomials")
        r = dict(self._c)
        q: Dict[int, Number] = {}
        dg = other.degree()
        lc = other._c[dg]
        ob = other._c
        while r:
            rd = max(r)
            if rd < dg:
                break
            t = Fraction(r[rd]) / lc
            t = _norm(t)
            k = rd - dg
            q[k] = t
            for e, a in ob.items():
                j = e + k
                s = r.get(j, 0) - a * t
                if s:
                    r[j] = _norm(s) if type(s) is Fraction else s
                else:
                    r.pop(j, None)
        return ULaurent._raw(q), ULaurent._raw(r)

    def exact_div(self, other: "ULaurent") -> Optional["ULaurent"]:
        """Quotient in Q[v, v^-1] when ``other`` divides ``self`` exactly, else None."""
        if not other._c:
            raise ZeroDivisionError("division by zero Laurent polynomial")
        if not self._c:
            return self
        if other.is_monomial():
            (e, a), = other._c.items()
            if a == 1:
                return self.shift(-e)
            inv = Fraction(1) / Fraction(a)
            return ULaurent._raw({k - e: _norm(b * inv) for k, b in self._c.items()})
        sv, ov = self.valuation(), other.valuation()
        q, r = self.shift(-sv).divmod_poly(other.shift(-ov))
        if r._c:
            return None
        return q.shift(sv - ov)

    def gcd(self, other: "ULaurent") -> "ULaurent":
        """Monic gcd of the polynomial parts (valuations stripped), as a polynomial."""
        a = self.shift(-self.valuation()) if self._c else self
        b = other.shift(-other.valuation()) if other._c else other
        while b._c:
            _, r = a.divmod_poly(b)
            a, b = b, r
        if not a._c:
            return ULaurent.zero()
        return a.scale(Fraction(1) / Fraction(a.lead_coeff()))

    # comparison -------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if isinstance(other, ULaurent):
            return self._c == other._c
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self._c == ({0: other} if other else {})
        if isinstance(other, VRatFunc):
            return other == self
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._c.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._c)

    # text -----------------------------------------------------------------
    def render(self, symbol: str = "v") -> str:
        if not self._c:
            return "0"
        parts = []
        for e, a in sorted(self._c.items()):
            neg = a < 0
            mag = -a if neg else a
            if e == 0:
                body = str(mag)
            else:
                pw = symbol if e == 1 else f"{symbol}^{e}"
                body = pw if mag == 1 else f"{mag}*{pw}"
            if not parts:
                parts.append(("-" if neg else "") + body)
            else:
                parts.append(("- " if neg else "+ ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"ULaurent({self.render()!r})"

    @classmethod
    def parse(cls, text: str, symbol: str = "v") -> "ULaurent":
        return _parse_laurent(text, symbol)


def _lift(x):
    if isinstance(x, ULaurent):
        return x
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return ULaurent.const(x)
    return NotImplemented


def _parse_laurent(text: str, symbol: str) -> ULaurent:
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty Laurent polynomial")
    sym = re.escape(symbol)
    term_re = re.compile(
        rf"([+-]?)(?:(\d+(?:/\d+)?)(?:\*({sym})(?:\^(-?\d+))?)?|({sym})(?:\^(-?\d+))?)"
    )
    pos = 0
    c: Dict[int, Number] = {}
    while pos < len(s):
        m = term_re.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse Laurent polynomial {text!r} at position {pos}")
        if pos > 0 and not m.group(1):
            raise ValueError(f"missing sign between terms in {text!r} at position {pos}")
        sign = -1 if m.group(1) == "-" else 1
        if m.group(2) is not None:
            coef = Fraction(m.group(2))
            if m.group(3):
                exp = int(m.group(4)) if m.group(4) is not None else 1
            else:
                exp = 0
        else:
            coef = Fraction(1)
            exp = int(m.group(6)) if m.group(6) is not None else 1
        c[exp] = c.get(exp, 0) + sign * coef
        pos = m.end()
    return ULaurent(c)


class VRatFunc:
    """Element of Q(v) stored as a reduced fraction num/den.

    The denominator is an ordinary polynomial with nonzero constant term and
    leading coefficient 1, so equal elements have identical storage.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = _lift(num) if not isinstance(num, ULaurent) else num
        if num is NotImplemented:
            raise TypeError("numerator must be a ULaurent or a scalar")
        if den is None:
            self.num, self.den = num, ULaurent.one()
            return
        den = _lift(den) if not isinstance(den, ULaurent) else den
        if den is NotImplemented:
            raise TypeError("denominator must be a ULaurent or a scalar")
        if not den._c:
            raise ZeroDivisionError("zero denominator")
        self.num, self.den = _reduce(num, den)

    @classmethod
    def _raw(cls, num: ULaurent, den: ULaurent) -> "VRatFunc":
        obj = cls.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def of(cls, x) -> "VRatFunc":
        if isinstance(x, VRatFunc):
            return x
        return cls(x)

    def is_zero(self) -> bool:
        return not self.num._c

    def is_laurent(self) -> bool:
        return self.den.is_one()

    def __add__(self, other):
        other = _lift_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return VRatFunc(self.num + other.num, self.den)
        return VRatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return VRatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        other = _lift_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _lift_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = _lift_rf(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den.is_one() and other.den.is_one():
            return VRatFunc._raw(self.num * other.num, self.den)
        return VRatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "VRatFunc":
        if not self.num._c:
            raise ZeroDivisionError("inverse of zero")
        return VRatFunc(self.den, self.num)

    def __truediv__(self, other):
        other = _lift_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _lift_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        return VRatFunc._raw(self.num ** k, self.den ** k) if self.den.is_one() else VRatFunc(self.num ** k, self.den ** k)

    def evaluate(self, x: Number) -> Number:
        d = self.den.evaluate(x)
        if d == 0:
            raise ZeroDivisionError("evaluation at a pole")
        return _norm(Fraction(self.num.evaluate(x)) / d)

    def __eq__(self, other) -> bool:
        other = _lift_rf(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __bool__(self) -> bool:
        return bool(self.num._c)

    def render(self, symbol: str = "v") -> str:
        if self.den.is_one():
            return self.num.render(symbol)
        return f"({self.num.render(symbol)})/({self.den.render(symbol)})"

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"VRatFunc({self.render()!r})"

    @classmethod
    def parse(cls, text: str, symbol: str = "v") -> "VRatFunc":
        t = text.strip()
        if "/(" in t.replace(" ", ""):
            compact = t.replace(" ", "")
            idx = compact.index(")/(")
            num = compact[1:idx] if compact.startswith("(") else compact[:idx]
            den = compact[idx + 3 : -1]
            return cls(ULaurent.parse(num, symbol), ULaurent.parse(den, symbol))
        return cls(ULaurent.parse(t, symbol))


def _lift_rf(x):
    if isinstance(x, VRatFunc):
        return x
    y = _lift(x)
    if y is NotImplemented:
        return NotImplemented
    return VRatFunc._raw(y, ULaurent.one())


def _reduce(num: ULaurent, den: ULaurent) -> Tuple[ULaurent, ULaurent]:
    if not num._c:
        return num, ULaurent.one()
    dv = den.valuation()
    num = num.shift(-dv)
    den = den.shift(-dv)
    if not den.is_constant():
        g = num.gcd(den)
        if not g.is_constant():
            num = num.exact_div(g)
            den = den.exact_div(g)
    lc = Fraction(den.lead_coeff())
    if lc != 1:
        num = num.scale(1 / lc)
        den = den.scale(1 / lc)
    return num, den


# q-numbers -------------------------------------------------------------------

def _unit(u) -> Tuple[int, int]:
    """Decode a monomial unit +-v^z given as int z or a ULaurent; returns (sign, z)."""
    if isinstance(u, bool):
        raise TypeError("bad unit")
    if isinstance(u, int):
        return 1, u
    if isinstance(u, ULaurent) and u.is_monomial():
        (z, a), = u._c.items()
        if a in (1, -1):
            return int(a), z
    raise ValueError(f"expected a monomial +-v^z, got {u!r}")


def qint(l: int, u=1) -> ULaurent:
    """Quantum integer [l]_u = (u^l - u^-l)/(u - u^-1) with u = +-v^z."""
    if l < 0:
        raise ValueError("quantum integer needs l >= 0")
    sign, z = _unit(u)
    if l == 0:
        return ULaurent.zero()
    if l >= 2 and z == 0:
        raise ValueError("[l]_u with u = +-1 is excluded")
    s = sign ** (l - 1)
    c: Dict[int, Number] = {}
    for k in range(l):
        e = z * (l - 1 - 2 * k)
        c[e] = c.get(e, 0) + s
    return ULaurent(c)


def qfact(l: int, u=1) -> ULaurent:
    """Quantum factorial [l]_u! = [1]_u [2]_u ... [l]_u."""
    if l < 0:
        raise ValueError("quantum factorial needs l >= 0")
    out = ULaurent.one()
    for k in range(2, l + 1):
        out = out * qint(k, u)
    return out


def qbinom(l: int, m: int, u=1) -> ULaurent:
    """Quantum binomial [l choose m]_u, a Laurent polynomial."""
    if m < 0 or l < 0 or m > l:
        raise ValueError(f"quantum binomial needs 0 <= m <= l, got l={l}, m={m}")
    q = qfact(l, u).exact_div(qfact(m, u) * qfact(l - m, u))
    assert q is not None
    return q


def angle(m: int, u=1) -> ULaurent:
    """<m>_u = u^m - u^-m with u = +-v^z."""
    sign, z = _unit(u)
    return ULaurent({z * m: sign ** (m % 2)}) - ULaurent({-z * m: sign ** (m % 2)})


def is_integral_laurent(r) -> bool:
    """True iff r lies in Z[v, v^-1]."""
    if isinstance(r, ULaurent):
        return r.is_integral()
    r = VRatFunc.of(r)
    return r.den.is_one() and r.num.is_integral()
