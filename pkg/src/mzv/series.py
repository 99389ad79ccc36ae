"""Total-degree-truncated multivariate Laurent series whose coefficients are
exact rational combinations of zeta symbols.

Series are built from index patterns (each slot contributes one part of a
zeta index and one power of a linear form), so a generating function
instantiated at sums of variables is a single enumeration.  Divided
differences are expanded monomial by monomial, (t^m - u^m)/(t - u) =
sum t^a u^b over a+b = m-1, so no division ever happens; remaining
denominators are either single variables (a Laurent shift, floor -2) or
are cleared by multiplying through with the product of the offending
linear forms, which is exact on truncated series.

No floating point anywhere in this module.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable

from .algebra import Composition, DomainError, MzvCombo

Vars = tuple[str, ...]
FormVec = tuple[Fraction, ...]
Exps = tuple[int, ...]

FLOOR = -2


# ---------------------------------------------------------------------------
# Linear forms


def var_vec(vars: Vars, name: str) -> FormVec:
    if name not in vars:
        raise DomainError(f"unknown variable {name!r}; have {vars}")
    return tuple(Fraction(1 if v == name else 0) for v in vars)


def lin(vars: Vars, *names: str) -> FormVec:
    """Sum of the named variables, e.g. lin(vars, 'x1', 'x3') = x1 + x3."""
    out = [Fraction(0)] * len(vars)
    for name in names:
        if name not in vars:
            raise DomainError(f"unknown variable {name!r}; have {vars}")
        out[vars.index(name)] += 1
    return tuple(out)


def vec_sub(a: FormVec, b: FormVec) -> FormVec:
    return tuple(x - y for x, y in zip(a, b))


def vec_is_zero(v: FormVec) -> bool:
    return all(c == 0 for c in v)


def vec_canonical(v: FormVec) -> tuple[int, FormVec]:
    """Sign-normalize a nonzero form: first nonzero coefficient positive."""
    for c in v:
        if c > 0:
            return 1, v
        if c < 0:
            return -1, tuple(-x for x in v)
    raise DomainError("the zero form cannot be canonicalized (vanishing denominator)")


def vec_str(vars: Vars, v: FormVec) -> str:
    bits = []
    for name, c in zip(vars, v):
        if c == 0:
            continue
        if c == 1:
            bits.append(f"+{name}")
        elif c == -1:
            bits.append(f"-{name}")
        else:
            bits.append(f"{'+' if c > 0 else '-'}{abs(c)}*{name}")
    s = "".join(bits) or "0"
    return s[1:] if s.startswith("+") else s


@lru_cache(maxsize=None)
def _form_power(v: FormVec, e: int) -> tuple[tuple[Exps, Fraction], ...]:
    n = len(v)
    if e == 0:
        return (((0,) * n, Fraction(1)),)
    prev = _form_power(v, e - 1)
    acc: dict[Exps, Fraction] = {}
    for exps, q in prev:
        for i, c in enumerate(v):
            if c:
                key = exps[:i] + (exps[i] + 1,) + exps[i + 1 :]
                acc[key] = acc.get(key, Fraction(0)) + q * c
    return tuple(sorted(acc.items()))


def _mono_mul(
    mono: dict[Exps, Fraction], factor: tuple[tuple[Exps, Fraction], ...]
) -> dict[Exps, Fraction]:
    out: dict[Exps, Fraction] = {}
    for e1, q1 in mono.items():
        for e2, q2 in factor:
            key = tuple(a + b for a, b in zip(e1, e2))
            q = out.get(key, Fraction(0)) + q1 * q2
            if q:
                out[key] = q
            elif key in out:
                del out[key]
    return out


def degplus(exps: Exps) -> int:
    return sum(e for e in exps if e > 0)


def monomial_str(vars: Vars, exps: Exps) -> str:
    bits = []
    for name, e in zip(vars, exps):
        if e == 1:
            bits.append(name)
        elif e:
            bits.append(f"{name}^{e}")
    return "*".join(bits) or "1"


# ---------------------------------------------------------------------------
# Series


class LaurentSeriesMV:
    """A truncated series: exponent vectors mapping to MzvCombo coefficients.

    cutoff is the reliable degree: stored coefficients are exact for every
    monomial whose positive-exponent degree is at most cutoff.  Exponents
    below FLOOR are a hard error.
    """

    __slots__ = ("vars", "cutoff", "data")

    def __init__(self, vars: Vars, cutoff: int, data: dict[Exps, MzvCombo] | None = None):
        self.vars = tuple(vars)
        self.cutoff = cutoff
        self.data: dict[Exps, MzvCombo] = {}
        if data:
            for exps, combo in data.items():
                self._set(exps, combo)

    def _set(self, exps: Exps, combo: MzvCombo) -> None:
        if len(exps) != len(self.vars):
            raise DomainError("exponent vector length mismatch")
        for name, e in zip(self.vars, exps):
            if e < FLOOR:
                raise DomainError(f"exponent {e} of {name} below the Laurent floor {FLOOR}")
        if combo and degplus(exps) <= self.cutoff:
            self.data[exps] = combo

    def coefficient(self, exps: Exps) -> MzvCombo:
        return self.data.get(tuple(exps), MzvCombo.zero())

    def monomials(self) -> list[Exps]:
        return sorted(self.data)

    def min_exponent(self) -> int:
        return min((min(e) for e in self.data), default=0)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, LaurentSeriesMV)
            and self.vars == other.vars
            and self.data == other.data
        )

    def __add__(self, other: "LaurentSeriesMV") -> "LaurentSeriesMV":
        if self.vars != other.vars:
            raise DomainError("variable universes differ")
        cutoff = min(self.cutoff, other.cutoff)
        out = LaurentSeriesMV(self.vars, cutoff)
        for src in (self.data, other.data):
            for exps, combo in src.items():
                if degplus(exps) > cutoff:
                    continue
                q = out.data.get(exps)
                merged = combo if q is None else q + combo
                if merged:
                    out.data[exps] = merged
                elif exps in out.data:
                    del out.data[exps]
        return out

    def __neg__(self) -> "LaurentSeriesMV":
        out = LaurentSeriesMV(self.vars, self.cutoff)
        out.data = {e: -c for e, c in self.data.items()}
        return out

    def __sub__(self, other: "LaurentSeriesMV") -> "LaurentSeriesMV":
        return self + (-other)

    def scale(self, q: Fraction | int) -> "LaurentSeriesMV":
        q = Fraction(q)
        out = LaurentSeriesMV(self.vars, self.cutoff)
        if q:
            out.data = {e: c.scale(q) for e, c in self.data.items()}
        return out

    def mul(self, other: "LaurentSeriesMV") -> "LaurentSeriesMV":
        """Product of two nonnegative-exponent series (coefficientwise the
        rational side must be scalar: zeta symbols never multiply here)."""
        if self.vars != other.vars:
            raise DomainError("variable universes differ")
        if self.min_exponent() < 0 or other.min_exponent() < 0:
            raise DomainError("series product requires nonnegative exponents")
        cutoff = min(self.cutoff, other.cutoff)
        out = LaurentSeriesMV(self.vars, cutoff)
        for e1, c1 in self.data.items():
            for e2, c2 in other.data.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                if degplus(exps) > cutoff:
                    continue
                prod = _combo_scalar_mul(c1, c2)
                q = out.data.get(exps)
                merged = prod if q is None else q + prod
                if merged:
                    out.data[exps] = merged
                elif exps in out.data:
                    del out.data[exps]
        return out

    def mul_form(self, form: FormVec) -> "LaurentSeriesMV":
        """Multiply by a homogeneous linear form; exact, cutoff grows by one
        unless Laurent exponents are present."""
        cutoff = self.cutoff + 1 if self.min_exponent() >= 0 else self.cutoff
        out = LaurentSeriesMV(self.vars, cutoff)
        for exps, combo in self.data.items():
            for i, c in enumerate(form):
                if not c:
                    continue
                key = exps[:i] + (exps[i] + 1,) + exps[i + 1 :]
                if degplus(key) > cutoff:
                    continue
                add = combo.scale(c)
                q = out.data.get(key)
                merged = add if q is None else q + add
                if merged:
                    out.data[key] = merged
                elif key in out.data:
                    del out.data[key]
        return out

    def divide_by_var(self, name: str) -> "LaurentSeriesMV":
        i = self.vars.index(name)
        out = LaurentSeriesMV(self.vars, self.cutoff - 1)
        for exps, combo in self.data.items():
            if exps[i] - 1 < FLOOR:
                raise DomainError(
                    f"dividing by {name} drops exponent {exps[i] - 1} below floor {FLOOR}"
                )
            key = exps[:i] + (exps[i] - 1,) + exps[i + 1 :]
            if degplus(key) <= out.cutoff:
                out.data[key] = combo
        return out

    def differentiate(self, name: str) -> "LaurentSeriesMV":
        i = self.vars.index(name)
        out = LaurentSeriesMV(self.vars, self.cutoff - 1)
        for exps, combo in self.data.items():
            e = exps[i]
            if e == 0:
                continue
            if e - 1 < FLOOR:
                raise DomainError(f"derivative drops {name}-exponent below floor {FLOOR}")
            key = exps[:i] + (e - 1,) + exps[i + 1 :]
            if degplus(key) <= out.cutoff:
                out.data[key] = combo.scale(e)
        return out

    def homogeneous_part(self, n: int) -> "LaurentSeriesMV":
        """The total-degree-n slice (the t^n coefficient under x_i -> x_i t)."""
        if n > self.cutoff:
            raise DomainError(f"slice degree {n} beyond reliable cutoff {self.cutoff}")
        if self.min_exponent() < 0:
            raise DomainError("homogeneous slices require nonnegative exponents")
        out = LaurentSeriesMV(self.vars, self.cutoff)
        out.data = {e: c for e, c in self.data.items() if sum(e) == n}
        return out

    def specialize(self, assignment: dict[str, Fraction | int]) -> MzvCombo:
        """Evaluate every variable at a rational; combine coefficients."""
        missing = set(self.vars) - set(assignment)
        if missing:
            raise DomainError(f"unassigned variables {sorted(missing)}")
        vals = [Fraction(assignment[v]) for v in self.vars]
        total = MzvCombo.zero()
        for exps, combo in self.data.items():
            q = Fraction(1)
            for val, e in zip(vals, exps):
                if e == 0:
                    continue
                if val == 0 and e < 0:
                    raise DomainError("specializing a negative power at zero")
                q *= val ** e
            if q:
                total = total + combo.scale(q)
        return total

    def substitute_linear(self, assignment: dict[str, FormVec]) -> "LaurentSeriesMV":
        """Replace variables by homogeneous linear forms and re-expand."""
        if self.min_exponent() < 0:
            raise DomainError("substitution requires nonnegative exponents")
        forms = [assignment.get(v, var_vec(self.vars, v)) for v in self.vars]
        out = LaurentSeriesMV(self.vars, self.cutoff)
        for exps, combo in self.data.items():
            mono: dict[Exps, Fraction] = {(0,) * len(self.vars): Fraction(1)}
            for form, e in zip(forms, exps):
                if e:
                    mono = _mono_mul(mono, _form_power(form, e))
            for key, q in mono.items():
                if degplus(key) > self.cutoff:
                    continue
                add = combo.scale(q)
                prev = out.data.get(key)
                merged = add if prev is None else prev + add
                if merged:
                    out.data[key] = merged
                elif key in out.data:
                    del out.data[key]
        return out

    def __repr__(self) -> str:
        bits = [
            f"({combo})*{monomial_str(self.vars, e)}" for e, combo in sorted(self.data.items())
        ]
        return " + ".join(bits) if bits else "0"


def _combo_scalar_mul(a: MzvCombo, b: MzvCombo) -> MzvCombo:
    if a.support() in ([], [()]):
        return b.scale(a.rational_part())
    if b.support() in ([], [()]):
        return a.scale(b.rational_part())
    raise DomainError("refusing to multiply two transcendental coefficients")


def zero_series(vars: Vars, cutoff: int) -> LaurentSeriesMV:
    return LaurentSeriesMV(vars, cutoff)


def constant_series(vars: Vars, combo: MzvCombo, cutoff: int) -> LaurentSeriesMV:
    return LaurentSeriesMV(vars, cutoff, {(0,) * len(vars): combo})


# ---------------------------------------------------------------------------
# Pattern enumeration: sums of zeta symbols against powers of linear forms


@dataclass(frozen=True)
class VarSlot:
    """One summation index: part s >= lo, monomial factor form^(s-1)."""

    form: FormVec
    lo: int = 1


@dataclass(frozen=True)
class ConstSlot:
    """A fixed part contributing no monomial factor."""

    part: int


Slot = VarSlot | ConstSlot


def _check_leading(slots: tuple[Slot, ...]) -> None:
    if not slots:
        raise DomainError("a pattern needs at least one slot")
    head = slots[0]
    if isinstance(head, ConstSlot):
        if head.part < 2:
            raise DomainError(f"leading constant part {head.part} < 2 diverges")
    elif head.lo < 2:
        raise DomainError("the leading slot must force its part >= 2")
    for s in slots:
        if isinstance(s, ConstSlot) and s.part < 1:
            raise DomainError(f"constant part {s.part} < 1")
        if isinstance(s, VarSlot) and s.lo < 1:
            raise DomainError(f"slot lower bound {s.lo} < 1")


def pattern_series(vars: Vars, slots: Iterable[Slot], cutoff: int) -> LaurentSeriesMV:
    """Sum over the pattern of zeta(parts) * prod form^(part-1), truncated."""
    slots = tuple(slots)
    _check_leading(slots)
    nv = len(vars)
    acc: dict[Exps, dict[Composition, Fraction]] = {}
    unit_mono = {(0,) * nv: Fraction(1)}

    def rec(i: int, budget: int, parts: list[int], mono: dict[Exps, Fraction]) -> None:
        if i == len(slots):
            comp = tuple(parts)
            for exps, q in mono.items():
                acc.setdefault(exps, {})[comp] = acc.get(exps, {}).get(comp, Fraction(0)) + q
            return
        slot = slots[i]
        if isinstance(slot, ConstSlot):
            parts.append(slot.part)
            rec(i + 1, budget, parts, mono)
            parts.pop()
            return
        for e in range(slot.lo - 1, budget + 1):
            parts.append(e + 1)
            rec(i + 1, budget - e, parts, _mono_mul(mono, _form_power(slot.form, e)))
            parts.pop()

    rec(0, cutoff, [], unit_mono)
    out = LaurentSeriesMV(vars, cutoff)
    for exps, terms in acc.items():
        combo = MzvCombo(terms.items())
        if combo:
            out.data[exps] = combo
    return out


def G(vars: Vars, args: Iterable[FormVec], cutoff: int) -> LaurentSeriesMV:
    """Generating function of depth len(args): coefficient of
    prod args_i^(s_i - 1) is zeta(s_1,...,s_d), leading part >= 2."""
    args = tuple(args)
    slots = tuple(
        VarSlot(form, 2 if i == 0 else 1) for i, form in enumerate(args)
    )
    return pattern_series(vars, slots, cutoff)


def pattern_dd(
    vars: Vars,
    slots: Iterable[Slot],
    slot_index: int,
    u: FormVec,
    v: FormVec,
    cutoff: int,
) -> LaurentSeriesMV:
    """Divided difference (F(u) - F(v)) / (u - v) on one slot of a pattern.

    The slot's power m expands as sum_{a+b=m-1} u^a v^b; nothing is divided.
    """
    slots = tuple(slots)
    _check_leading(slots)
    if not isinstance(slots[slot_index], VarSlot):
        raise DomainError("the divided-difference slot must be a variable slot")
    nv = len(vars)
    acc: dict[Exps, dict[Composition, Fraction]] = {}
    unit_mono = {(0,) * nv: Fraction(1)}

    def rec(i: int, budget: int, parts: list[int], mono: dict[Exps, Fraction]) -> None:
        if i == len(slots):
            comp = tuple(parts)
            for exps, q in mono.items():
                acc.setdefault(exps, {})[comp] = acc.get(exps, {}).get(comp, Fraction(0)) + q
            return
        slot = slots[i]
        if isinstance(slot, ConstSlot):
            parts.append(slot.part)
            rec(i + 1, budget, parts, mono)
            parts.pop()
            return
        if i == slot_index:
            # exponent m = s-1 expands to sum_{a+b=m-1} u^a v^b, degree m-1
            for m in range(max(slot.lo - 1, 1), budget + 2):
                parts.append(m + 1)
                for a in range(m):
                    pm = _mono_mul(mono, _form_power(u, a))
                    pm = _mono_mul(pm, _form_power(v, m - 1 - a))
                    rec(i + 1, budget - (m - 1), parts, pm)
                parts.pop()
            return
        for e in range(slot.lo - 1, budget + 1):
            parts.append(e + 1)
            rec(i + 1, budget - e, parts, _mono_mul(mono, _form_power(slot.form, e)))
            parts.pop()

    rec(0, cutoff, [], unit_mono)
    out = LaurentSeriesMV(vars, cutoff)
    for exps, terms in acc.items():
        combo = MzvCombo(terms.items())
        if combo:
            out.data[exps] = combo
    return out


def divided_difference(
    vars: Vars, slots: Iterable[Slot], x: str, y: str, cutoff: int, slot_index: int = 0
) -> LaurentSeriesMV:
    """(F(x) - F(y)) / (x - y) for a one-slot family F, expanded exactly."""
    return pattern_dd(vars, slots, slot_index, var_vec(vars, x), var_vec(vars, y), cutoff)


# ---------------------------------------------------------------------------
# Symmetrization


@dataclass(frozen=True)
class SymmetrySpec:
    """Permutation set acting on a listed subset of the variables."""

    kind: str  # "sym" | "cyc" | "explicit"
    variables: tuple[str, ...]
    images: tuple[tuple[str, ...], ...] = ()

    def maps(self) -> list[dict[str, str]]:
        vs = self.variables
        if self.kind == "sym":
            rows = list(itertools.permutations(vs))
        elif self.kind == "cyc":
            rows = [vs[i:] + vs[:i] for i in range(len(vs))]
        elif self.kind == "explicit":
            rows = [tuple(img) for img in self.images]
        else:
            raise DomainError(f"unknown symmetry kind {self.kind!r}")
        return [dict(zip(vs, row)) for row in rows]


def symmetrize(
    builder: Callable[[dict[str, str]], LaurentSeriesMV], spec: SymmetrySpec
) -> LaurentSeriesMV:
    """Sum of the builder over the permutation set (identity off the list)."""
    total: LaurentSeriesMV | None = None
    for m in spec.maps():
        piece = builder(m)
        total = piece if total is None else total + piece
    if total is None:
        raise DomainError("empty permutation set")
    return total


# ---------------------------------------------------------------------------
# Denominator clearing for identities with non-Laurent singular parts


@dataclass(frozen=True)
class Atom:
    """coeff * (series builder) / prod(denoms); builder takes a cutoff."""

    coeff: Fraction
    builder: Callable[[int], LaurentSeriesMV]
    denoms: tuple[FormVec, ...] = ()


def clearing_factors(atoms: Iterable[Atom]) -> tuple[FormVec, ...]:
    """Least common multiple (as a multiset of canonical forms) of denominators."""
    need: dict[FormVec, int] = {}
    for atom in atoms:
        counts: dict[FormVec, int] = {}
        for f in atom.denoms:
            _, cf = vec_canonical(f)
            counts[cf] = counts.get(cf, 0) + 1
        for cf, k in counts.items():
            need[cf] = max(need.get(cf, 0), k)
    return tuple(f for f in sorted(need) for _ in range(need[f]))


def clear_atoms(
    vars: Vars, atoms: Iterable[Atom], cap: int, factors: tuple[FormVec, ...] | None = None
) -> tuple[LaurentSeriesMV, tuple[FormVec, ...]]:
    """Multiply the sum of atoms through by the product of the clearing
    factors; exact, and injective on series, so comparing cleared sides is
    equivalent to comparing the originals up to the shifted degree window."""
    atoms = tuple(atoms)
    V = clearing_factors(atoms) if factors is None else factors
    out_cap = cap + len(V)
    total = zero_series(vars, out_cap)
    for atom in atoms:
        sign = 1
        counts: dict[FormVec, int] = {}
        for f in atom.denoms:
            s, cf = vec_canonical(f)
            sign *= s
            counts[cf] = counts.get(cf, 0) + 1
        extra: list[FormVec] = []
        remaining = dict(counts)
        for f in V:
            if remaining.get(f, 0) > 0:
                remaining[f] -= 1
            else:
                extra.append(f)
        if any(k > 0 for k in remaining.values()):
            raise DomainError("clearing factors do not cover an atom's denominator")
        piece = atom.builder(cap + len(atom.denoms))
        for f in extra:
            piece = piece.mul_form(f)
        piece = piece.scale(atom.coeff * sign)
        total = total + piece
    return total, V


def assemble_atoms(vars: Vars, atoms: Iterable[Atom], cap: int) -> LaurentSeriesMV:
    """Direct Laurent assembly; every denominator must be a single variable."""
    total = zero_series(vars, cap)
    for atom in atoms:
        piece = atom.builder(cap + len(atom.denoms))
        for f in atom.denoms:
            hot = [i for i, c in enumerate(f) if c]
            if len(hot) != 1 or f[hot[0]] != 1:
                raise DomainError(
                    f"direct assembly needs single-variable denominators, got {f}"
                )
            piece = piece.divide_by_var(vars[hot[0]])
        total = total + piece.scale(atom.coeff)
    return total
