"""Exact certification of zeta identities at a fixed weight.

Relation rows are combos that vanish as real numbers: stuffle-minus-shuffle
of a convergent product (one row per unordered admissible pair) and
duality differences.  Rows are echelonized over the rationals with the
lexicographic index order as pivot order, and a candidate is Proven iff it
reduces to the zero combo.  A nonzero normal form means Unresolved, never
disproven: these families are known to be incomplete at small weights.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    Composition,
    DomainError,
    MzvCombo,
    dual,
    is_admissible,
    shuffle_mzv,
    stuffle,
    weight,
)

FAMILIES = ("fds", "duality")

DEFAULT_WEIGHT_CAP = 10


def enumerate_admissible(w: int) -> list[Composition]:
    """All admissible compositions of weight w, lexicographic; 2^(w-2) many."""
    if w < 2:
        raise DomainError(f"no admissible index has weight {w} < 2")

    def comps(total: int, first_min: int):
        if total == 0:
            yield ()
            return
        for head in range(first_min, total + 1):
            for rest in comps(total - head, 1):
                yield (head,) + rest

    return sorted(comps(w, 2))


@dataclass(frozen=True)
class RelationRow:
    tag: str
    combo: MzvCombo


@dataclass(frozen=True)
class RelationSet:
    weight: int
    rows: tuple[RelationRow, ...]


def fds_relations(w: int) -> RelationSet:
    """Finite double shuffle rows: stuffle(u,v) - shuffle(u,v) per pair.

    Empty below weight 4, where no admissible pair exists.
    """
    rows = []
    seen = set()
    for wu in range(2, w - 1):
        wv = w - wu
        if wv < 2:
            continue
        for u in enumerate_admissible(wu):
            for v in enumerate_admissible(wv):
                key = frozenset((u, v))
                if key in seen:
                    continue
                seen.add(key)
                combo = stuffle(u, v) - shuffle_mzv(u, v)
                rows.append(RelationRow(f"fds {u}*{v}", combo))
    return RelationSet(w, tuple(rows))


def duality_relations(w: int) -> RelationSet:
    """One row zeta(c) - zeta(dual c) per non-self-dual orbit."""
    rows = []
    for c in enumerate_admissible(w):
        d = dual(c)
        if c < d:
            rows.append(
                RelationRow(f"duality {c}", MzvCombo.single(c) - MzvCombo.single(d))
            )
    return RelationSet(w, tuple(rows))


def relation_sets(w: int, families=FAMILIES) -> list[RelationSet]:
    out = []
    for fam in families:
        if fam == "fds":
            out.append(fds_relations(w))
        elif fam == "duality":
            out.append(duality_relations(w))
        else:
            raise DomainError(f"unknown relation family {fam!r}")
    return out


@dataclass(frozen=True)
class EchelonBasis:
    weight: int
    pivots: tuple[Composition, ...]
    rows: tuple[MzvCombo, ...]  # fully reduced, pivot coefficient 1
    rank: int

    def reduce(self, combo: MzvCombo) -> MzvCombo:
        """Normal form of a combo modulo the basis."""
        out = combo
        for pivot, row in zip(self.pivots, self.rows):
            q = out.coefficient(pivot)
            if q:
                out = out - row.scale(q)
        return out


def echelonize(*sets: RelationSet) -> EchelonBasis:
    """Exact Gauss-Jordan elimination with lexicographic pivot order."""
    weights = {rs.weight for rs in sets if rs.rows}
    if len(weights) > 1:
        raise DomainError(f"mixed weights in relation sets: {sorted(weights)}")
    if not weights:
        w = min((rs.weight for rs in sets), default=0)
        return EchelonBasis(w, (), (), 0)
    w = weights.pop()
    columns = enumerate_admissible(w)
    work = [row.combo for rs in sets for row in rs.rows if row.combo]
    pivots: list[Composition] = []
    reduced: list[MzvCombo] = []
    for col in columns:
        hit = None
        for i, row in enumerate(work):
            if row.coefficient(col):
                hit = i
                break
        if hit is None:
            continue
        row = work.pop(hit)
        row = row.scale(Fraction(1) / row.coefficient(col))
        reduced = [r - row.scale(r.coefficient(col)) for r in reduced]
        work = [r - row.scale(r.coefficient(col)) for r in work]
        work = [r for r in work if r]
        pivots.append(col)
        reduced.append(row)
    return EchelonBasis(w, tuple(pivots), tuple(reduced), len(pivots))


_BASIS_MEMO: dict[tuple[int, tuple[str, ...]], EchelonBasis] = {}


def basis_for(w: int, families=FAMILIES) -> EchelonBasis:
    key = (w, tuple(families))
    hit = _BASIS_MEMO.get(key)
    if hit is None:
        hit = echelonize(*relation_sets(w, families))
        _BASIS_MEMO[key] = hit
    return hit


@dataclass(frozen=True)
class ExactResult:
    status: str  # "proven" | "unresolved"
    normal_form: MzvCombo
    weight: int
    families: tuple[str, ...]

    @property
    def proven(self) -> bool:
        return self.status == "proven"


def verify_exact(combo: MzvCombo, families=FAMILIES) -> ExactResult:
    """Decide whether a homogeneous zero-candidate lies in the relation span."""
    families = tuple(families)
    if not combo:
        return ExactResult("proven", combo, 0, families)
    if not combo.all_admissible():
        raise DomainError("candidate contains a divergent index")
    w = combo.homogeneous_weight()
    normal = basis_for(w, families).reduce(combo)
    return ExactResult("proven" if not normal else "unresolved", normal, w, families)
