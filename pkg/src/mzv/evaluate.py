"""Arbitrary-precision evaluation of multiple zeta values and multiple
polylogarithms, with explicit absolute error bounds.

Strategy: a zeta value is split along its word into a bilinear convolution
of multiple polylogarithms at 1/2 (reverse-and-swap on the left factor), so
every series converges geometrically, about 3.3 terms per decimal digit.
Truncation tails are bounded analytically, rounding is charged against ten
guard digits, and a truncated nested summation of the defining series is
kept alongside as an independent cross-check oracle.
"""

from __future__ import annotations

import math
import os
import threading
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .algebra import (
    Composition,
    DomainError,
    MzvCombo,
    from_word,
    is_admissible,
    require_admissible,
    reverse_swap,
    to_word,
)

_EVAL_LOCK = threading.RLock()

GUARD_DIGITS = 10


@dataclass(frozen=True)
class BigReal:
    """A real number with a rigorous absolute error bound."""

    value: mpf
    err: mpf

    def __post_init__(self):
        if self.err < 0:
            raise DomainError("error bound must be nonnegative")

    def __add__(self, other: "BigReal") -> "BigReal":
        v = self.value + other.value
        return BigReal(v, self.err + other.err + _ulp(v))

    def __sub__(self, other: "BigReal") -> "BigReal":
        v = self.value - other.value
        return BigReal(v, self.err + other.err + _ulp(v))

    def __mul__(self, other: "BigReal") -> "BigReal":
        v = self.value * other.value
        e = (
            abs(self.value) * other.err
            + abs(other.value) * self.err
            + self.err * other.err
            + _ulp(v)
        )
        return BigReal(v, e)

    def scale(self, q: Fraction | int) -> "BigReal":
        q = Fraction(q)
        num = mpf(q.numerator)
        v = self.value * num / q.denominator
        return BigReal(v, abs(num) * self.err / q.denominator + _ulp(v))

    def __neg__(self) -> "BigReal":
        return BigReal(-self.value, self.err)

    def __repr__(self) -> str:
        return f"BigReal({mp.nstr(self.value, 20)} +/- {mp.nstr(self.err, 3)})"


def _ulp(x: mpf) -> mpf:
    # one unit of ambient relative precision, as an absolute bound
    return (abs(x) + mpf(10) ** (-mp.dps)) * mpf(10) ** (2 - mp.dps)


def big_zero() -> BigReal:
    return BigReal(mpf(0), mpf(0))


def big_one() -> BigReal:
    return BigReal(mpf(1), mpf(0))


@dataclass(frozen=True)
class EvalConfig:
    digits: int = 30
    strategy: str = "holder"  # "holder" | "direct"
    truncation: int | None = None

    def __post_init__(self):
        if self.digits < 10:
            raise DomainError(f"digits must be >= 10, got {self.digits}")
        if self.strategy not in ("holder", "direct"):
            raise DomainError(f"unknown strategy {self.strategy!r}")

    @property
    def dps(self) -> int:
        return self.digits + GUARD_DIGITS


# ---------------------------------------------------------------------------
# Multiple polylogarithm series


def _li_truncation(z: float, d: int, digits: int) -> int:
    """Smallest cutoff whose documented tail bound clears 10^-(digits+5).

    Tail of sum_{k>N} z^k (1+ln k)^(d-1) is geometric with ratio
    rho = z*exp((d-1)/(N(1+ln N))); the bound below is rigorous once
    rho < 1.
    """
    target = -(digits + 5)
    N = max(16, 3 * d)
    while True:
        rho = z * math.exp((d - 1) / (N * (1.0 + math.log(N)))) if d > 1 else z
        if rho < 0.995:
            lb = (
                (N + 1) * math.log10(z)
                + (d - 1) * math.log10(1.0 + math.log(N + 1))
                - math.log10(1.0 - rho)
            )
            if lb <= target:
                return N
        N += max(8, N // 8)


def eval_polylog(c: Composition, z: Fraction, cfg: EvalConfig = EvalConfig()) -> BigReal:
    """Evaluate Li_c(z) = sum over k1 > ... > kd >= 1 of z^k1 / prod ki^si.

    Any composition with parts >= 1 is allowed; the series converges for
    0 < z < 1.  The error bound covers the truncation tail and rounding.
    """
    c = tuple(c)
    if not all(isinstance(s, int) and s >= 1 for s in c):
        raise DomainError(f"polylog index parts must be >= 1: {c}")
    z = Fraction(z)
    if not (0 < z < 1):
        raise DomainError(f"polylog argument must satisfy 0 < z < 1, got {z}")
    with _EVAL_LOCK:
        with mp.workdps(cfg.digits + GUARD_DIGITS):
            if not c:
                return big_one()
            d = len(c)
            N = cfg.truncation or _li_truncation(float(z), d, cfg.digits)
            zz = mpf(z.numerator) / z.denominator
            # chain[k] = sum over k > k2 > ... > kd of prod ki^-si (inner slots)
            chain = [mpf(1)] * (N + 1)
            for s in reversed(c[1:]):
                new = [mpf(0)] * (N + 1)
                acc = mpf(0)
                for k in range(2, N + 1):
                    acc += chain[k - 1] / mpf(k - 1) ** s
                    new[k] = acc
                chain = new
            s1 = c[0]
            total = mpf(0)
            zpow = mpf(1)
            for k in range(1, N + 1):
                zpow *= zz
                total += zpow / mpf(k) ** s1 * chain[k]
            rho = (
                zz * mp.exp(mpf(d - 1) / (N * (1 + mp.log(N)))) if d > 1 else zz
            )
            if rho >= 1:
                raise DomainError("truncation override too small for a tail bound")
            tail = zz ** (N + 1) * (1 + mp.log(N + 1)) ** (d - 1) / (1 - rho)
            mag = (1 + mp.log(N + 1)) ** (d - 1)
            rounding = 4 * N * (d + 1) * mag * mpf(10) ** (2 - mp.dps)
            return BigReal(total, tail * mpf("1.01") + rounding)


_HALF = Fraction(1, 2)
_LI_MEMO: dict[tuple[Composition, int, int | None], BigReal] = {}


def _polylog_half(c: Composition, cfg: EvalConfig) -> BigReal:
    key = (c, cfg.digits, cfg.truncation)
    hit = _LI_MEMO.get(key)
    if hit is None:
        hit = eval_polylog(c, _HALF, cfg)
        _LI_MEMO[key] = hit
    return hit


# ---------------------------------------------------------------------------
# Value cache


class CacheFormatError(ValueError):
    pass


class ValueCache:
    """In-memory store of evaluated zeta values, keyed by (index, digits).

    Entries are immutable once computed.  Lookup at a requested precision
    returns the highest-precision entry that meets it, so loading a
    lower-precision file never degrades what is already known.  The file
    format is one record per line:

        index=2,1;digits=40;value=<decimal>;err=<decimal>

    Loading is all-or-nothing, and the lock makes a concurrent lookup see
    either the old or the new complete entry, never a torn one.
    """

    def __init__(self):
        self._data: dict[Composition, dict[int, tuple[str, str]]] = {}
        self._lock = threading.RLock()

    def __len__(self) -> int:
        return sum(len(v) for v in self._data.values())

    def put(self, comp: Composition, digits: int, value: str, err: str) -> None:
        with self._lock:
            self._data.setdefault(tuple(comp), {}).setdefault(digits, (value, err))

    def lookup(self, comp: Composition, digits: int) -> tuple[int, str, str] | None:
        with self._lock:
            entries = self._data.get(tuple(comp))
            if not entries:
                return None
            usable = [d for d in entries if d >= digits]
            if not usable:
                return None
            d = max(usable)
            v, e = entries[d]
            return d, v, e

    def records(self) -> list[tuple[Composition, int, str, str]]:
        with self._lock:
            return sorted(
                (c, d, v, e)
                for c, entries in self._data.items()
                for d, (v, e) in entries.items()
            )

    def store(self, path: str) -> None:
        lines = [
            f"index={','.join(map(str, c))};digits={d};value={v};err={e}\n"
            for c, d, v, e in self.records()
        ]
        tmp = f"{path}.tmp.{os.getpid()}"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.writelines(lines)
        os.replace(tmp, path)

    def load(self, path: str) -> int:
        """Merge records from a file; returns the number of lines read."""
        parsed = []
        with open(path, encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                fields = line.split(";")
                if len(fields) != 4:
                    raise CacheFormatError(f"{path}:{lineno}: expected 4 fields, got {len(fields)}")
                keys = ("index=", "digits=", "value=", "err=")
                if not all(f.startswith(k) for f, k in zip(fields, keys)):
                    raise CacheFormatError(f"{path}:{lineno}: malformed record {line!r}")
                try:
                    comp = tuple(int(p) for p in fields[0][6:].split(","))
                    digits = int(fields[1][7:])
                except ValueError as exc:
                    raise CacheFormatError(f"{path}:{lineno}: {exc}") from exc
                parsed.append((comp, digits, fields[2][6:], fields[3][4:]))
        with self._lock:
            for comp, digits, value, err in parsed:
                self._data.setdefault(comp, {}).setdefault(digits, (value, err))
        return len(parsed)


DEFAULT_CACHE = ValueCache()


# ---------------------------------------------------------------------------
# Zeta values


def eval_mzv(
    c: Composition, cfg: EvalConfig = EvalConfig(), cache: ValueCache | None = None
) -> BigReal:
    """Evaluate an admissible zeta index to cfg.digits decimal digits."""
    c = tuple(c)
    require_admissible(c)
    if not c:
        raise DomainError("the empty index is the rational 1, not a series")
    if cache is None:
        cache = DEFAULT_CACHE
    with _EVAL_LOCK:
        with mp.workdps(cfg.digits + GUARD_DIGITS):
            hit = cache.lookup(c, cfg.digits)
            if hit is not None:
                d, v, e = hit
                slack = mpf(10) ** (-(d + 6))
                return BigReal(mpf(v), mpf(e) + slack)
            if cfg.strategy == "direct":
                n = cfg.truncation or _direct_truncation(c, cfg.digits)
                out = eval_direct(c, n, dps=cfg.digits + GUARD_DIGITS)
            else:
                out = _holder(c, cfg)
            if cfg.truncation is None and cfg.strategy == "holder":
                value_str = mp.nstr(out.value, cfg.digits + 8)
                err_str = mp.nstr(
                    out.err * mpf("1.001") + mpf(10) ** (-(cfg.digits + 8)), 8
                )
                cache.put(c, cfg.digits, value_str, err_str)
            return out


def _holder(c: Composition, cfg: EvalConfig) -> BigReal:
    w = to_word(c)
    total = big_zero()
    for j in range(len(w) + 1):
        left = from_word(reverse_swap(w[:j]))
        right = from_word(w[j:])
        total = total + _polylog_half(left, cfg) * _polylog_half(right, cfg)
    return total


def _direct_truncation(c: Composition, digits: int) -> int:
    target = 10.0 ** (-(digits + 2))
    n = 64
    while _direct_tail_float(c[0], len(c) - 1, n) > target:
        n *= 2
        if n > 4_000_000:
            raise DomainError(
                f"direct summation cannot reach {digits} digits for {c}; use the holder strategy"
            )
    return n


def _direct_tail_float(s: int, m: int, N: int) -> float:
    # integral bound: sum_{k>N} k^-s (1+ln k)^m <= I(s,m,N) via the exact
    # by-parts recursion I(s,m) = N^(1-s)(1+ln N)^m/(s-1) + m/(s-1) I(s,m-1)
    base = (1.0 + math.log(N)) ** m * N ** (1 - s) / (s - 1)
    if m == 0:
        return base
    return base + m / (s - 1) * _direct_tail_float(s, m - 1, N)


def eval_direct(c: Composition, N: int, dps: int = 35) -> BigReal:
    """Truncated nested summation of the defining series; cross-check oracle.

    The err field carries the coarse integral tail bound, which is honest
    but pessimistic for indices with many trailing 1s.
    """
    c = tuple(c)
    require_admissible(c)
    if not c:
        raise DomainError("the empty index is the rational 1, not a series")
    if N < len(c):
        raise DomainError(f"cutoff {N} below depth {len(c)}")
    with _EVAL_LOCK:
        with mp.workdps(dps):
            d = len(c)
            chain = [mpf(1)] * (N + 1)
            for s in reversed(c[1:]):
                new = [mpf(0)] * (N + 1)
                acc = mpf(0)
                for k in range(2, N + 1):
                    acc += chain[k - 1] / mpf(k - 1) ** s
                    new[k] = acc
                chain = new
            total = mpf(0)
            for k in range(1, N + 1):
                total += chain[k] / mpf(k) ** c[0]
            tail = mpf(_direct_tail_float(c[0], d - 1, N)) * mpf("1.001")
            mag = (1 + mp.log(N + 1)) ** (d - 1)
            rounding = 4 * N * (d + 1) * mag * mpf(10) ** (2 - dps)
            return BigReal(total, tail + rounding)


ProductTerm = tuple[Fraction, tuple[Composition, ...]]


def eval_combo(
    x: MzvCombo | list[ProductTerm],
    cfg: EvalConfig = EvalConfig(),
    cache: ValueCache | None = None,
) -> BigReal:
    """Evaluate a zeta combination, or a list of (coeff, factors) products."""
    with _EVAL_LOCK:
        with mp.workdps(cfg.digits + GUARD_DIGITS):
            total = big_zero()
            if isinstance(x, MzvCombo):
                for comp, coeff in x.items():
                    if not comp:
                        q = mpf(coeff.numerator) / coeff.denominator
                        total = total + BigReal(q, _ulp(q))
                        continue
                    if not is_admissible(comp):
                        raise DomainError(f"combo contains the divergent index {comp}")
                    total = total + eval_mzv(comp, cfg, cache).scale(coeff)
                return total
            for coeff, factors in x:
                prod = big_one()
                for f in factors:
                    prod = prod * eval_mzv(tuple(f), cfg, cache)
                total = total + prod.scale(coeff)
            return total
