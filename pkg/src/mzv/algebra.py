"""Compositions, two-letter words, and the product expansions on multiple
zeta indices: stuffle, shuffle, duality, and the explicit binomial-sum
expansions of products of zeta values.

Everything here is exact rational arithmetic; no floating point.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

Composition = tuple[int, ...]

P, Q = "P", "Q"


class DomainError(ValueError):
    """An argument violates a documented precondition."""


def check_composition(c: Composition) -> None:
    if not all(isinstance(s, int) and s >= 1 for s in c):
        raise DomainError(f"composition parts must be integers >= 1: {c}")


def weight(c: Composition) -> int:
    return sum(c)


def depth(c: Composition) -> int:
    return len(c)


def is_admissible(c: Composition) -> bool:
    """A zeta index converges iff it is empty or its first part is >= 2."""
    return not c or c[0] >= 2


def require_admissible(c: Composition) -> None:
    check_composition(c)
    if not is_admissible(c):
        raise DomainError(f"inadmissible index {c}: leading part {c[0]} < 2")


def to_word(c: Composition) -> str:
    """Encode an admissible composition as a word over {P, Q}.

    Part s maps to P^(s-1) Q, so the word length equals the weight.
    """
    require_admissible(c)
    return "".join(P * (s - 1) + Q for s in c)


def from_word(w: str) -> Composition:
    """Decode a word over {P, Q}; it must be empty or end with Q."""
    if not w:
        return ()
    if any(ch not in (P, Q) for ch in w):
        raise DomainError(f"word contains a letter outside {{P,Q}}: {w!r}")
    if w[-1] != Q:
        raise DomainError(f"word {w!r} does not end with {Q}; no composition reads it")
    parts = []
    run = 0
    for ch in w:
        if ch == P:
            run += 1
        else:
            parts.append(run + 1)
            run = 0
    return tuple(parts)


def is_admissible_word(w: str) -> bool:
    return not w or (w[0] == P and w[-1] == Q)


def reverse_swap(w: str) -> str:
    """Reverse the word and exchange the two letters."""
    return "".join(P if ch == Q else Q for ch in reversed(w))


def dual(c: Composition) -> Composition:
    """The involution induced by reversing the word and swapping letters."""
    require_admissible(c)
    if not c:
        raise DomainError("the empty index has no dual")
    return from_word(reverse_swap(to_word(c)))


def binomial(n: int, k: int) -> int:
    """Binomial coefficient, zero outside 0 <= k <= n."""
    if k < 0 or k > n or n < 0:
        return 0
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# Rational linear combinations of zeta symbols


class MzvCombo:
    """A finitely supported map from compositions to exact rationals.

    The empty composition stands for the rational unit, so a combo can
    carry an additive constant.  Zero coefficients are never stored and
    iteration order is lexicographic in the index, which keeps every
    downstream computation deterministic.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[tuple[Composition, Fraction | int]] = ()):
        data: dict[Composition, Fraction] = {}
        for comp, coeff in terms:
            check_composition(comp)
            q = Fraction(coeff)
            if q:
                q += data.get(comp, 0)
                if q:
                    data[comp] = q
                elif comp in data:
                    del data[comp]
        self._terms = data

    @classmethod
    def zero(cls) -> "MzvCombo":
        return cls()

    @classmethod
    def single(cls, comp: Composition, coeff: Fraction | int = 1) -> "MzvCombo":
        return cls([(tuple(comp), coeff)])

    @classmethod
    def constant(cls, coeff: Fraction | int) -> "MzvCombo":
        return cls([((), coeff)])

    def items(self) -> list[tuple[Composition, Fraction]]:
        return sorted(self._terms.items())

    def coefficient(self, comp: Composition) -> Fraction:
        return self._terms.get(tuple(comp), Fraction(0))

    def support(self) -> list[Composition]:
        return sorted(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MzvCombo) and self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self.items()))

    def __add__(self, other: "MzvCombo") -> "MzvCombo":
        out = dict(self._terms)
        for comp, coeff in other._terms.items():
            q = out.get(comp, 0) + coeff
            if q:
                out[comp] = q
            elif comp in out:
                del out[comp]
        res = MzvCombo.zero()
        res._terms = out
        return res

    def __sub__(self, other: "MzvCombo") -> "MzvCombo":
        return self + (-other)

    def __neg__(self) -> "MzvCombo":
        res = MzvCombo.zero()
        res._terms = {c: -q for c, q in self._terms.items()}
        return res

    def scale(self, r: Fraction | int) -> "MzvCombo":
        q = Fraction(r)
        res = MzvCombo.zero()
        if q:
            res._terms = {c: q * v for c, v in self._terms.items()}
        return res

    def __mul__(self, r):
        return self.scale(r)

    __rmul__ = __mul__

    def is_homogeneous(self) -> bool:
        weights = {weight(c) for c in self._terms}
        return len(weights) <= 1

    def homogeneous_weight(self) -> int:
        """Common weight of the support; raises on mixed or empty combos."""
        weights = {weight(c) for c in self._terms}
        if len(weights) != 1:
            raise DomainError(f"combo is not weight-homogeneous: weights {sorted(weights)}")
        return weights.pop()

    def all_admissible(self) -> bool:
        return all(is_admissible(c) for c in self._terms)

    def rational_part(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def to_records(self) -> list[dict]:
        """Serialize as a list of {index, coeff} records (coeff as 'p/q')."""
        return [{"index": list(c), "coeff": str(q)} for c, q in self.items()]

    @classmethod
    def from_records(cls, records: Iterable[dict]) -> "MzvCombo":
        return cls((tuple(r["index"]), Fraction(r["coeff"])) for r in records)

    def __repr__(self) -> str:
        if not self._terms:
            return "0"
        bits = []
        for comp, coeff in self.items():
            sym = "1" if not comp else "z(%s)" % ",".join(map(str, comp))
            bits.append(f"{coeff}*{sym}" if coeff != 1 or not comp else sym)
        return " + ".join(bits)


def combo(*terms: tuple[Composition, Fraction | int]) -> MzvCombo:
    return MzvCombo(terms)


# ---------------------------------------------------------------------------
# Stuffle (quasi-shuffle of nested-sum indices)


@lru_cache(maxsize=None)
def _stuffle_raw(u: Composition, v: Composition) -> tuple[tuple[Composition, int], ...]:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    a, ur = u[0], u[1:]
    b, vr = v[0], v[1:]
    acc: dict[Composition, int] = {}
    for head, tail_pairs in ((a, _stuffle_raw(ur, v)), (b, _stuffle_raw(u, vr)), (a + b, _stuffle_raw(ur, vr))):
        for comp, mult in tail_pairs:
            key = (head,) + comp
            acc[key] = acc.get(key, 0) + mult
    return tuple(sorted(acc.items()))


def stuffle(u: Composition, v: Composition) -> MzvCombo:
    """Quasi-shuffle product of two indices, expanding zeta(u)*zeta(v)."""
    check_composition(u)
    check_composition(v)
    return MzvCombo(_stuffle_raw(tuple(u), tuple(v)))


def stuffle_combo(x: MzvCombo, y: MzvCombo) -> MzvCombo:
    """Bilinear extension of the stuffle product to combos."""
    out = MzvCombo.zero()
    for cu, qu in x.items():
        for cv, qv in y.items():
            out = out + stuffle(cu, cv).scale(qu * qv)
    return out


def stuffle_factors(factors: Iterable[Composition]) -> MzvCombo:
    """Stuffle expansion of a product of several zeta indices."""
    out = MzvCombo.constant(1)
    for f in factors:
        out = stuffle_combo(out, MzvCombo.single(tuple(f)))
    return out


# ---------------------------------------------------------------------------
# Shuffle (riffle product of iterated-integral words)


@lru_cache(maxsize=None)
def _shuffle_raw(u: str, v: str) -> tuple[tuple[str, int], ...]:
    if not u:
        return ((v, 1),)
    if not v:
        return ((u, 1),)
    acc: dict[str, int] = {}
    for w, m in _shuffle_raw(u[1:], v):
        key = u[0] + w
        acc[key] = acc.get(key, 0) + m
    for w, m in _shuffle_raw(u, v[1:]):
        key = v[0] + w
        acc[key] = acc.get(key, 0) + m
    return tuple(sorted(acc.items()))


def shuffle(u: str, v: str) -> dict[str, int]:
    """Shuffle product of two words, with interleaving multiplicities."""
    if any(ch not in (P, Q) for ch in u + v):
        raise DomainError("shuffle arguments must be words over {P,Q}")
    return dict(_shuffle_raw(u, v))


def shuffle_mzv(u: Composition, v: Composition) -> MzvCombo:
    """Shuffle expansion of zeta(u)*zeta(v) through the word encoding."""
    wu, wv = to_word(tuple(u)), to_word(tuple(v))
    return MzvCombo((from_word(w), m) for w, m in shuffle(wu, wv).items())


# ---------------------------------------------------------------------------
# Explicit binomial expansions of products


def euler_decomposition(s1: int, s2: int) -> MzvCombo:
    """Depth-two expansion of zeta(s1)*zeta(s2), symmetric binomial form.

    Coefficient of zeta(t1,t2) is C(t1-1,s1-1) + C(t1-1,s2-1); this equals
    the shuffle expansion of the two words.
    """
    if s1 < 2 or s2 < 2:
        raise DomainError(f"euler_decomposition needs s1,s2 >= 2, got ({s1},{s2})")
    n = s1 + s2
    return MzvCombo(
        ((t1, n - t1), binomial(t1 - 1, s1 - 1) + binomial(t1 - 1, s2 - 1))
        for t1 in range(2, n)
    )


def literal_euler_decomposition(s1: int, s2: int) -> MzvCombo:
    """Diagnostic variant with the second binomial taken on t2 instead of t1.

    Kept only to document that this reading fails numerically at (2,2).
    """
    if s1 < 2 or s2 < 2:
        raise DomainError(f"literal_euler_decomposition needs s1,s2 >= 2, got ({s1},{s2})")
    n = s1 + s2
    return MzvCombo(
        ((t1, n - t1), binomial(t1 - 1, s1 - 1) + binomial(n - t1 - 1, s2 - 1))
        for t1 in range(2, n)
    )


def expand_2x1(s1: int, s2: int, s3: int) -> MzvCombo:
    """Two-sum expansion of zeta(s1,s2)*zeta(s3) for s1,s3 >= 2, s2 >= 1."""
    if s1 < 2 or s3 < 2 or s2 < 1:
        raise DomainError(f"expand_2x1 needs s1,s3 >= 2 and s2 >= 1, got ({s1},{s2},{s3})")
    out: list[tuple[Composition, int]] = []
    for t1 in range(2, s1 + s3 - 1 + 1):
        t2 = s1 + s3 - t1
        if t2 >= 1:
            out.append(((t1, t2, s2), binomial(t1 - 1, s3 - 1)))
    n = s1 + s2 + s3
    for t1 in range(2, n - 1):
        for t2 in range(1, n - t1):
            t3 = n - t1 - t2
            coeff = binomial(t1 - 1, s1 - 1) * (
                binomial(t2 - 1, s2 - t3) + binomial(t2 - 1, s2 - 1)
            )
            if coeff:
                out.append(((t1, t2, t3), coeff))
    return MzvCombo(out)


def guo_xie_expand(s1: int, s2: int, s3: int, s4: int) -> MzvCombo:
    """Three-block expansion of zeta(s1,s2)*zeta(s3,s4).

    Two triple sums land the leftover part of one factor in the last slot;
    the quadruple-sum block carries four binomial products.  Equals the
    shuffle expansion of the corresponding words.
    """
    if s1 < 2 or s3 < 2 or s2 < 1 or s4 < 1:
        raise DomainError(
            f"guo_xie_expand needs s1,s3 >= 2 and s2,s4 >= 1, got ({s1},{s2},{s3},{s4})"
        )
    out: list[tuple[Composition, int]] = []
    m = s1 + s2 + s3
    for t1 in range(2, m - 1):
        for t2 in range(1, m - t1):
            t3 = m - t1 - t2
            coeff = binomial(t1 - 1, s1 - 1) * binomial(t2 - 1, s2 - 1)
            if coeff:
                out.append(((t1, t2, t3, s4), coeff))
    m = s1 + s3 + s4
    for t1 in range(2, m - 1):
        for t2 in range(1, m - t1):
            t3 = m - t1 - t2
            coeff = binomial(t1 - 1, s3 - 1) * binomial(t2 - 1, s4 - 1)
            if coeff:
                out.append(((t1, t2, t3, s2), coeff))
    n = s1 + s2 + s3 + s4
    for t1 in range(2, n - 2):
        for t2 in range(1, n - t1 - 1):
            for t3 in range(1, n - t1 - t2):
                t4 = n - t1 - t2 - t3
                mid = binomial(t2 - 1, t1 + t2 - s1 - s3)
                if not mid:
                    continue
                coeff = binomial(t1 - 1, s1 - 1) * mid * (
                    binomial(t3 - 1, s4 - t4) + binomial(t3 - 1, s4 - 1)
                ) + binomial(t1 - 1, s3 - 1) * mid * (
                    binomial(t3 - 1, s2 - t4) + binomial(t3 - 1, s2 - 1)
                )
                if coeff:
                    out.append(((t1, t2, t3, t4), coeff))
    return MzvCombo(out)


def stuffle_13_term(s1: int, s2: int, s3: int, s4: int) -> MzvCombo:
    """Algorithmic stuffle expansion of zeta(s1,s2)*zeta(s3,s4) (13 terms)."""
    if s1 < 2 or s3 < 2 or s2 < 1 or s4 < 1:
        raise DomainError(
            f"stuffle_13_term needs s1,s3 >= 2 and s2,s4 >= 1, got ({s1},{s2},{s3},{s4})"
        )
    return stuffle((s1, s2), (s3, s4))


def literal_stuffle_13_term(s1: int, s2: int, s3: int, s4: int) -> MzvCombo:
    """The 13-entry list exactly as printed in the depth-four product display.

    The list repeats (s1+s3, s2, s4) and omits (s1+s3, s4, s2), so it differs
    from the algorithmic expansion whenever s2 != s4; kept as a diagnostic.
    """
    if s1 < 2 or s3 < 2 or s2 < 1 or s4 < 1:
        raise DomainError(
            f"literal_stuffle_13_term needs s1,s3 >= 2 and s2,s4 >= 1, got ({s1},{s2},{s3},{s4})"
        )
    s13, s14, s23, s24 = s1 + s3, s1 + s4, s2 + s3, s2 + s4
    terms = [
        (s3, s4, s1, s2),
        (s3, s1, s4, s2),
        (s1, s3, s4, s2),
        (s1, s3, s2, s4),
        (s1, s2, s3, s4),
        (s3, s1, s2, s4),
        (s13, s2, s4),
        (s1, s23, s4),
        (s13, s2, s4),
        (s3, s14, s2),
        (s1, s3, s24),
        (s3, s1, s24),
        (s13, s24),
    ]
    return MzvCombo((t, 1) for t in terms)
