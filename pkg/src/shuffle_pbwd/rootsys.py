"""Root-system combinatorics for types A_n, B_n and G_2.

Positive roots are identified with their standard Lyndon words.  Plain tuple
comparison of the words (a proper prefix is smaller) is the convex order used
throughout: for G_2 it gives ``[1] < [1,2] < [1,2,1,2,2] < [1,2,2] < [1,2,2,2] < [2]``.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .mpoly import parse_word, word_str
from .ring import ULaurent, angle, qfact, qint

__all__ = [
    "RootSystem",
    "PosRoot",
    "KostantPartition",
    "PBWDIndex",
    "positive_roots",
    "kappa",
    "c_beta",
    "c_tilde_beta",
    "divided_power_norm",
    "kostant_partitions",
    "pbwd_indices",
]


@dataclass(frozen=True)
class PosRoot:
    """A positive root, named by its standard Lyndon word."""

    word: Tuple[int, ...]
    nu: Tuple[int, ...]
    norm: int  # (beta, beta)

    @property
    def height(self) -> int:
        return len(self.word)

    @property
    def v_exp(self) -> int:
        """Exponent z with v_beta = v^z, i.e. (beta, beta)/2."""
        return self.norm // 2

    def __str__(self) -> str:
        return word_str(self.word)

    def __repr__(self) -> str:
        return f"PosRoot({word_str(self.word)})"

    def __lt__(self, other: "PosRoot") -> bool:
        return self.word < other.word


class RootSystem:
    """Cartan data of type A_n, B_n or G_2.

    ``kind`` is one of ``"A"``, ``"B"``, ``"G"``; the pairing is
    ``(alpha_i, alpha_j) = d_i * a_ij``.
    """

    def __init__(self, kind: str, n: Optional[int] = None):
        kind = kind.upper()
        if kind == "G2":
            kind = "G"
        if kind not in ("A", "B", "G"):
            raise ValueError(f"unsupported root system type {kind!r}")
        if kind == "G":
            if n not in (None, 2):
                raise ValueError("type G forces rank 2")
            n = 2
        if n is None or n < 1:
            raise ValueError("rank must be a positive integer")
        if kind == "B" and n < 2:
            raise ValueError("type B needs rank n >= 2")
        self.kind = kind
        self.n = n
        a = [[0] * n for _ in range(n)]
        for i in range(n):
            a[i][i] = 2
        if kind == "A":
            d = [1] * n
            for i in range(n - 1):
                a[i][i + 1] = a[i + 1][i] = -1
        elif kind == "B":
            d = [2] * (n - 1) + [1]
            for i in range(n - 1):
                a[i][i + 1] = -1
                a[i + 1][i] = -1
            a[n - 1][n - 2] = -2
        else:
            d = [3, 1]
            a[0][1] = -1
            a[1][0] = -3
        self.cartan = tuple(tuple(r) for r in a)
        self.d = tuple(d)
        for i in range(n):
            for j in range(n):
                assert d[i] * a[i][j] == d[j] * a[j][i]
        self._roots = None

    # identity -----------------------------------------------------------------
    @property
    def name(self) -> str:
        return "G2" if self.kind == "G" else f"{self.kind}{self.n}"

    def __repr__(self) -> str:
        return f"RootSystem({self.name})"

    def __eq__(self, other) -> bool:
        return isinstance(other, RootSystem) and (self.kind, self.n) == (other.kind, other.n)

    def __hash__(self) -> int:
        return hash((self.kind, self.n))

    @property
    def I(self) -> range:
        return range(1, self.n + 1)

    # Cartan data ----------------------------------------------------------------
    def a(self, i: int, j: int) -> int:
        return self.cartan[i - 1][j - 1]

    def di(self, i: int) -> int:
        return self.d[i - 1]

    def pairing(self, i: int, j: int) -> int:
        """(alpha_i, alpha_j)."""
        return self.d[i - 1] * self.cartan[i - 1][j - 1]

    def form(self, nu: Sequence[int], mu: Sequence[int]) -> int:
        return sum(nu[i] * mu[j] * self.pairing(i + 1, j + 1) for i in range(self.n) for j in range(self.n))

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and self.cartan[i - 1][j - 1] != 0

    # roots -----------------------------------------------------------------------
    def root_words(self) -> List[Tuple[int, ...]]:
        n = self.n
        words: List[Tuple[int, ...]] = []
        if self.kind == "A":
            for i in range(1, n + 1):
                for j in range(i, n + 1):
                    words.append(tuple(range(i, j + 1)))
        elif self.kind == "B":
            for i in range(1, n + 1):
                for j in range(i, n + 1):
                    words.append(tuple(range(i, j + 1)))
            for i in range(1, n + 1):
                for j in range(i + 1, n + 1):
                    words.append(tuple(range(i, n + 1)) + tuple(range(n, j - 1, -1)))
        else:
            words = [(1,), (1, 2), (1, 2, 1, 2, 2), (1, 2, 2), (1, 2, 2, 2), (2,)]
        return sorted(words)

    def make_root(self, word: Sequence[int]) -> PosRoot:
        word = tuple(word)
        nu = [0] * self.n
        for i in word:
            if not 1 <= i <= self.n:
                raise ValueError(f"letter {i} outside 1..{self.n}")
            nu[i - 1] += 1
        return PosRoot(word, tuple(nu), self.form(nu, nu))

    def positive_roots(self) -> List[PosRoot]:
        if self._roots is None:
            self._roots = [self.make_root(w) for w in self.root_words()]
        return list(self._roots)

    def root(self, spec) -> PosRoot:
        """Look up a positive root by word, by string like ``"[1,2,2]"`` or ``"[i,n,j]"`` shorthand."""
        if isinstance(spec, PosRoot):
            spec = spec.word
        if isinstance(spec, str):
            spec = parse_word(spec)
        word = tuple(spec)
        for b in self.positive_roots():
            if b.word == word:
                return b
        if self.kind == "B" and len(word) == 3 and word[1] == self.n and word[0] < word[2] <= self.n:
            i, _, j = word
            return self.root(tuple(range(i, self.n + 1)) + tuple(range(self.n, j - 1, -1)))
        if self.kind == "B" and len(word) == 2 and word[0] <= word[1] and word != tuple(range(word[0], word[1] + 1)):
            return self.root(tuple(range(word[0], word[1] + 1)))
        raise ValueError(f"{word_str(word)} is not a positive root of {self.name}")

    def root_by_nu(self, nu: Sequence[int]) -> Optional[PosRoot]:
        nu = tuple(nu)
        for b in self.positive_roots():
            if b.nu == nu:
                return b
        return None

    def v_exp(self, i: int) -> int:
        """Exponent of v_i = v^{d_i}."""
        return self.d[i - 1]

    def b_type_data(self, beta: PosRoot) -> Tuple[str, int, int]:
        """For type B: ('ij', i, j) for [i,j] and ('inj', i, j) for [i,n,j]."""
        if self.kind != "B":
            raise ValueError("only meaningful for type B")
        w = beta.word
        if list(w) == list(range(w[0], w[0] + len(w))):
            return ("ij", w[0], w[-1])
        return ("inj", w[0], w[-1])


# root constants --------------------------------------------------------------------

def positive_roots(rs: RootSystem) -> List[PosRoot]:
    return rs.positive_roots()


def kappa(rs: RootSystem, beta) -> int:
    beta = rs.root(beta)
    h = beta.height
    if rs.kind == "G" and beta.word == (1, 2, 1, 2, 2):
        return h + 1
    if rs.kind == "B":
        t, i, j = rs.b_type_data(beta)
        if t == "inj":
            return h + 2 * (rs.n - j) - 1
    return h - 1


def _b_tail(rs: RootSystem, j: int) -> ULaurent:
    n = rs.n
    out = ULaurent.one()
    for l in range(j, n):
        out = out * (ULaurent.monomial(-4 * n + 4 * l - 2) - 1) * (ULaurent.monomial(-4 * n + 4 * l + 6) - 1)
    return out


def c_beta(rs: RootSystem, beta) -> ULaurent:
    """Constant c_beta of the diagonal specialization of Psi(E_{beta,s})."""
    beta = rs.root(beta)
    h = beta.height
    if rs.kind == "A":
        return angle(1) ** (h - 1)
    if rs.kind == "G":
        a2, a3, a4, q2 = angle(2), angle(3), angle(4), qint(2)
        table = {
            (1,): ULaurent.one(),
            (2,): ULaurent.one(),
            (1, 2): a3,
            (1, 2, 2): a3 * a2 * q2,
            (1, 2, 2, 2): a3 * a3 * a2 * q2,
            (1, 2, 1, 2, 2): a4 * a3 ** 3 * a2 ** 2 * q2,
        }
        return table[beta.word]
    t, i, j = rs.b_type_data(beta)
    base = angle(2) ** (h - 1)
    if t == "ij":
        return base
    return base * _b_tail(rs, j)


def c_tilde_beta(rs: RootSystem, beta) -> ULaurent:
    """Integral normalization of c_beta (divided by [2]! or [3]! where required)."""
    beta = rs.root(beta)
    c = c_beta(rs, beta)
    if rs.kind == "G":
        if beta.word == (1, 2, 2):
            q = c.exact_div(qfact(2))
        elif beta.word in ((1, 2, 2, 2), (1, 2, 1, 2, 2)):
            q = c.exact_div(qfact(3))
        else:
            return c
        assert q is not None
        return q
    if rs.kind == "B" and rs.b_type_data(beta)[0] == "inj":
        q = c.exact_div(qfact(2))
        assert q is not None
        return q
    return c


def divided_power_norm(rs: RootSystem, beta, k: int) -> ULaurent:
    """Denominator of the normalized divided power of a root vector."""
    beta = rs.root(beta)
    base = qfact(k, beta.v_exp)
    if rs.kind == "G":
        if beta.word == (1, 2, 2):
            return qfact(2) ** k * base
        if beta.word in ((1, 2, 2, 2), (1, 2, 1, 2, 2)):
            return qfact(3) ** k * base
    if rs.kind == "B" and rs.b_type_data(beta)[0] == "inj":
        return qfact(2) ** k * base
    return base


# Kostant partitions -------------------------------------------------------------------

class KostantPartition:
    """A finitely supported vector d over the positive roots."""

    __slots__ = ("rs", "d")

    def __init__(self, rs: RootSystem, d: Mapping):
        self.rs = rs
        clean: Dict[PosRoot, int] = {}
        for b, m in d.items():
            b = rs.root(b)
            if m < 0:
                raise ValueError("Kostant partition entries must be nonnegative")
            if m:
                clean[b] = clean.get(b, 0) + int(m)
        self.d = clean

    def __getitem__(self, beta) -> int:
        return self.d.get(self.rs.root(beta), 0)

    def items(self) -> List[Tuple[PosRoot, int]]:
        return sorted(self.d.items(), key=lambda t: t[0].word)

    def grading(self) -> Tuple[int, ...]:
        k = [0] * self.rs.n
        for b, m in self.d.items():
            for i, c in enumerate(b.nu):
                k[i] += m * c
        return tuple(k)

    def total(self) -> int:
        return sum(self.d.values())

    def order_key(self) -> Tuple[int, ...]:
        return tuple(self.d.get(b, 0) for b in self.rs.positive_roots())

    def __lt__(self, other: "KostantPartition") -> bool:
        return self.order_key() < other.order_key()

    def __eq__(self, other) -> bool:
        return isinstance(other, KostantPartition) and self.rs == other.rs and self.d == other.d

    def __hash__(self) -> int:
        return hash((self.rs, frozenset(self.d.items())))

    def to_dict(self) -> Dict[str, int]:
        return {word_str(b.word): m for b, m in self.items()}

    def __repr__(self) -> str:
        return f"KP({json.dumps(self.to_dict())})"

    @classmethod
    def parse(cls, rs: RootSystem, text) -> "KostantPartition":
        data = json.loads(text) if isinstance(text, str) else text
        return cls(rs, {parse_word(k): int(m) for k, m in data.items()})


def kostant_partitions(rs: RootSystem, k: Sequence[int]) -> List[KostantPartition]:
    """All Kostant partitions of k, in increasing order."""
    k = tuple(k)
    if len(k) != rs.n or any(c < 0 for c in k):
        raise ValueError(f"grading must be a vector of {rs.n} nonnegative integers")
    roots = rs.positive_roots()
    out: List[Dict[PosRoot, int]] = []

    def rec(idx: int, rem: Tuple[int, ...], acc: Dict[PosRoot, int]):
        if not any(rem):
            out.append(dict(acc))
            return
        if idx < 0:
            return
        b = roots[idx]
        cap = min((rem[i] // c for i, c in enumerate(b.nu) if c), default=0)
        for m in range(cap, -1, -1):
            nxt = tuple(r - m * c for r, c in zip(rem, b.nu))
            if m:
                acc[b] = m
            rec(idx - 1, nxt, acc)
            acc.pop(b, None)

    rec(len(roots) - 1, k, {})
    parts = [KostantPartition(rs, d) for d in out]
    parts.sort(key=KostantPartition.order_key)
    return parts


# PBWD indices ---------------------------------------------------------------------------

class PBWDIndex:
    """Finitely supported h on (root, exponent) pairs."""

    __slots__ = ("rs", "h")

    def __init__(self, rs: RootSystem, h: Mapping):
        self.rs = rs
        clean: Dict[Tuple[PosRoot, int], int] = {}
        for (b, s), m in h.items():
            b = rs.root(b)
            if m < 0:
                raise ValueError("multiplicities must be nonnegative")
            if m:
                clean[(b, int(s))] = clean.get((b, int(s)), 0) + int(m)
        self.h = clean

    def factors(self) -> List[Tuple[PosRoot, int]]:
        """The ordered list of (beta, s) factors of E_h, with repetition."""
        out = []
        for (b, s), m in sorted(self.h.items(), key=lambda t: (t[0][0].word, t[0][1])):
            out.extend([(b, s)] * m)
        return out

    def degree(self) -> KostantPartition:
        d: Dict[PosRoot, int] = {}
        for (b, s), m in self.h.items():
            d[b] = d.get(b, 0) + m
        return KostantPartition(self.rs, d)

    def grading(self) -> Tuple[int, ...]:
        return self.degree().grading()

    def lam(self, beta) -> List[int]:
        """lambda_{h,beta}: the exponents attached to beta in nondecreasing order."""
        beta = self.rs.root(beta)
        out = []
        for (b, s), m in sorted(self.h.items(), key=lambda t: t[0][1]):
            if b == beta:
                out.extend([s] * m)
        return out

    def r(self, beta, s: int) -> int:
        """r_beta(h, s), 1-based."""
        return self.lam(beta)[s - 1]

    def sort_key(self):
        return (self.degree().order_key(), tuple((b.word, s, m) for (b, s), m in sorted(self.h.items(), key=lambda t: (t[0][0].word, t[0][1]))))

    def __eq__(self, other) -> bool:
        return isinstance(other, PBWDIndex) and self.rs == other.rs and self.h == other.h

    def __hash__(self) -> int:
        return hash((self.rs, frozenset(self.h.items())))

    def to_list(self) -> List[Dict]:
        return [{"root": word_str(b.word), "s": s, "mult": m} for (b, s), m in sorted(self.h.items(), key=lambda t: (t[0][0].word, t[0][1]))]

    def __repr__(self) -> str:
        inner = ", ".join(f"({word_str(b.word)},{s}):{m}" for (b, s), m in sorted(self.h.items(), key=lambda t: (t[0][0].word, t[0][1])))
        return f"h{{{inner}}}"


def pbwd_indices(rs: RootSystem, k: Sequence[int], window: Tuple[int, int]) -> List[PBWDIndex]:
    """All h of grading k whose exponents lie in the closed window [lo, hi]."""
    lo, hi = window
    if lo > hi:
        raise ValueError("exponent window needs lo <= hi")
    out: List[PBWDIndex] = []
    span = range(lo, hi + 1)
    for part in kostant_partitions(rs, k):
        choices = []
        for b, m in part.items():
            choices.append([(b, combo) for combo in itertools.combinations_with_replacement(span, m)])
        for sel in itertools.product(*choices):
            h: Dict[Tuple[PosRoot, int], int] = {}
            for b, combo in sel:
                for s in combo:
                    h[(b, s)] = h.get((b, s), 0) + 1
            out.append(PBWDIndex(rs, h))
    return out
