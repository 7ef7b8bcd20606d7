"""Bound checks on equipped families and exhaustive small enumerations."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import IncompatibleLiftsError, LimitError
from .famforge import EquippedFamily, build_family, verify_axioms
from .foamkit import assemble_compressed
from .permcore import Permutation, canonical_conjugate, conjugate_in
from .realcover import (ComponentCover, RealBase, admissible_component, involution_lifts,
                        orbits, separating_ovals)

EQUAL, CONJUGATE, NON_CONJUGATE = "equal", "conjugate", "non-conjugate"

DEFAULT_LIMITS = {"max_degree": 3, "n": 4, "max_components": 2}
GUARDRAILS = {"max_degree": 5, "n": 6, "max_components": 4}


def classify_real_forms(F: EquippedFamily) -> list[list[str]]:
    """Pairwise relation of the real forms inside the group they generate with G."""
    forms = [F.real_form(i) for i in range(F.r)]
    deck = F.deck_group()
    extended = deck + [a * forms[0] for a in deck]
    out = []
    for i in range(F.r):
        row = []
        for j in range(F.r):
            if forms[i] == forms[j]:
                row.append(EQUAL)
            elif conjugate_in(forms[i], forms[j], extended):
                row.append(CONJUGATE)
            else:
                row.append(NON_CONJUGATE)
        out.append(row)
    return out


def phi_images_coincide(F: EquippedFamily) -> bool | None:
    """Do all components glue onto the same part of the compressed graph?

    None when some component is inadmissible and no compressed foam exists.
    """
    if not all(admissible_component(c) for c in F.components):
        return None
    foam = assemble_compressed(F.base, F.components)
    images = {frozenset(step[0] for walk in walks for step in walk) for walks in foam.gluing}
    return len(images) == 1


def component_quotient_orientable(F: EquippedFamily, i: int) -> bool:
    return separating_ovals(F.components[i])


@dataclass
class BoundRecord:
    name: str
    applicable: bool
    reason: str
    lhs: int | None = None
    rhs: int | float | None = None
    holds: bool | None = None

    def as_dict(self) -> dict:
        return {"name": self.name, "applicable": self.applicable, "reason": self.reason,
                "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


@dataclass
class BoundReport:
    records: list[BoundRecord]
    relations: list[list[str]]
    orientable: list[bool]
    gating: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> BoundRecord:
        for r in self.records:
            if r.name == name:
                return r
        raise KeyError(name)

    @property
    def violations(self) -> list[BoundRecord]:
        return [r for r in self.records if r.applicable and not r.holds]

    def as_dict(self) -> dict:
        return {"records": [r.as_dict() for r in self.records], "real_form_relations": self.relations,
                "quotients_orientable": self.orientable, "gating": self.gating}


def _as_number(x: Fraction | float):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else float(x)
    return x


def sqrt_bound(g: int):
    """``2 (sqrt(g) + 1)``, exact when ``g`` is a perfect square."""
    s = math.isqrt(g)
    return 2 * (s + 1) if s * s == g else 2 * (math.sqrt(g) + 1)


def within_sqrt_bound(r: int, g: int) -> bool:
    # r <= 2 sqrt(g) + 2  <=>  r <= 2 or (r - 2)^2 <= 4 g
    return r <= 2 or (r - 2) ** 2 <= 4 * g


def corollary3_rhs(g: int, r: int) -> Fraction:
    return Fraction(2 * g - 2) + Fraction(2) ** (r - 3) * (9 - r)


def check_corollaries(F: EquippedFamily) -> BoundReport:
    g, r = F.hat_genus, F.r
    relations = classify_real_forms(F)
    pairs = [(i, j) for i in range(r) for j in range(i + 1, r)]
    distinct = all(relations[i][j] != EQUAL for i, j in pairs)
    nonconj = all(relations[i][j] == NON_CONJUGATE for i, j in pairs)
    orientable = [component_quotient_orientable(F, i) for i in range(r)]
    coincide = phi_images_coincide(F)
    gating = {"foam_different_proxy": "pairwise distinct real forms",
              "not_weakly_equivalent_proxy": "pairwise non-conjugate real forms",
              "pairwise_distinct": distinct, "pairwise_non_conjugate": nonconj,
              "phi_images_coincide": coincide,
              "foam_different": None if coincide is None or r == 1 else not coincide}
    names = ["corollary1_components", "corollary1_real_forms", "corollary2_sqrt",
             "corollary2_even", "corollary3", "corollary3_weak"]
    if g <= 1:
        why = f"not applicable: hat genus {g} <= 1"
        return BoundReport([BoundRecord(n, False, why) for n in names], relations, orientable, gating)

    sum_k, sum_hat = sum(F.ovals), sum(F.hat_ovals)
    cap42 = 42 * (g - 1)
    records = []
    why1 = "real forms pairwise distinct" if distinct else "not applicable: two real forms coincide"
    records.append(BoundRecord(names[0], distinct, why1, sum_k, cap42, sum_k <= cap42 if distinct else None))
    records.append(BoundRecord(names[1], distinct, why1, sum_hat, cap42,
                               sum_hat <= cap42 if distinct else None))
    why2 = "real forms pairwise non-conjugate" if nonconj else "not applicable: conjugate real forms"
    records.append(BoundRecord(names[2], nonconj, why2, r, sqrt_bound(g),
                               within_sqrt_bound(r, g) if nonconj else None))
    even = nonconj and g % 2 == 0
    records.append(BoundRecord(names[3], even, why2 if g % 2 == 0 else "not applicable: hat genus odd",
                               r, 4, r <= 4 if even else None))
    shape_ok = r in (3, 4) or all(orientable)
    app3 = nonconj and shape_ok
    if not nonconj:
        why3 = why2
    elif not shape_ok:
        why3 = "not applicable: r not in {3, 4} and some quotient is non-orientable"
    else:
        why3 = "non-conjugate real forms with " + ("r in {3, 4}" if r in (3, 4) else "orientable quotients")
    rhs3 = corollary3_rhs(g, r)
    records.append(BoundRecord(names[4], app3, why3, sum_k, _as_number(rhs3),
                               sum_k <= rhs3 if app3 else None))
    records.append(BoundRecord(names[5], app3, why3, sum_k, 2 * g + 30,
                               sum_k < 2 * g + 30 if app3 else None))
    return BoundReport(records, relations, orientable, gating)


# -- enumeration -----------------------------------------------------------

def monodromy_tuples(degree: int, n: int) -> list[tuple[Permutation, ...]]:
    """Transitive tuples with product identity, one per simultaneous-conjugacy class."""
    if n == 0:
        return [()] if degree == 1 else []
    perms = [Permutation(im) for im in itertools.permutations(range(1, degree + 1))]
    ident = Permutation.identity(degree)
    found = set()
    for head in itertools.product(perms, repeat=n - 1):
        acc = ident
        for p in head:
            acc = acc * p
        tup = head + (~acc,)
        if len(orbits(degree, tup)) != 1:
            continue
        found.add(canonical_conjugate(tup))
    return sorted(found, key=lambda t: tuple(p.images for p in t))


def _check_limits(limits: dict, guardrails: dict) -> None:
    for key, cap in guardrails.items():
        if limits[key] > cap or limits[key] < (0 if key == "n" else 1):
            raise LimitError(f"{key}={limits[key]} outside guardrail 0..{cap}"
                             if key == "n" else f"{key}={limits[key]} outside guardrail 1..{cap}")


def admissible_units(max_degree: int, n: int) -> list[ComponentCover]:
    """Admissible (monodromy, lift) pairs up to simultaneous conjugation."""
    units = {}
    for d in range(1, max_degree + 1):
        for tup in monodromy_tuples(d, n):
            c = ComponentCover(d, tup)
            for t in involution_lifts(c):
                if not admissible_component(c, t):
                    continue
                key = canonical_conjugate(tup + (t,)) if n else (t,)
                if key not in units:
                    units[key] = ComponentCover(d, key[:-1], key[-1])
    ordered = sorted(units.items(), key=lambda kv: (len(kv[0][0].images), tuple(p.images for p in kv[0])))
    return [c for _, c in ordered]


def _build_checked(base: RealBase, combo: Sequence[ComponentCover]) -> EquippedFamily | None:
    named = [c.__class__(c.degree, c.monodromy, c.lift, f"u{k + 1}") for k, c in enumerate(combo)]
    try:
        F = build_family(base, named)
    except IncompatibleLiftsError:
        return None
    return F if verify_axioms(F).ok else None


def enumerate_families(max_degree: int = 3, n: int = 4, max_components: int = 2,
                       jobs: int = 1, guardrails: dict | None = None) -> Iterator[EquippedFamily]:
    """Yield every family of admissible components passing all axioms, in a fixed order."""
    limits = {"max_degree": max_degree, "n": n, "max_components": max_components}
    _check_limits(limits, guardrails or GUARDRAILS)
    base = RealBase(n)
    units = admissible_units(max_degree, n)
    combos = [combo for r in range(1, max_components + 1)
              for combo in itertools.combinations_with_replacement(units, r)]
    if jobs <= 1:
        results: Iterable = (_build_checked(base, c) for c in combos)
        for F in results:
            if F is not None:
                yield F
        return
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        # map preserves input order, so output is independent of scheduling
        for F in pool.map(lambda c: _build_checked(base, c), combos):
            if F is not None:
                yield F


def family_key(F: EquippedFamily) -> str:
    parts = []
    for c in F.components:
        mono = ",".join(p.cycle_string() for p in c.monodromy) or "-"
        parts.append(f"d{c.degree}[{mono}|{c.lift.cycle_string()}]")
    return " + ".join(parts)


def real_form_classes(F: EquippedFamily) -> int:
    """Number of conjugacy classes among the real forms of the family."""
    rel = classify_real_forms(F)
    reps: list[int] = []
    for i in range(F.r):
        if not any(rel[i][j] != NON_CONJUGATE for j in reps):
            reps.append(i)
    return len(reps)


@dataclass
class ExtremalReport:
    rows: list[dict]
    reason: str

    def as_dict(self) -> dict:
        return {"rows": self.rows, "reason": self.reason}


def extremal_report(families: Iterable[EquippedFamily], top: int | None = None) -> ExtremalReport:
    rows = []
    seen = 0
    for F in families:
        seen += 1
        if F.hat_genus <= 1:
            continue
        rows.append({
            "family": family_key(F),
            "hat_genus": F.hat_genus,
            "r": F.r,
            "G_order": F.order,
            "sum_hat_ovals": sum(F.hat_ovals),
            "sum_ovals": sum(F.ovals),
            "ceiling_42": 42 * (F.hat_genus - 1),
            "margin_42": 42 * (F.hat_genus - 1) - sum(F.hat_ovals),
            "non_conjugate_classes": real_form_classes(F),
            "class_cap": sqrt_bound(F.hat_genus),
        })
    if seen == 0:
        raise ValueError("extremal_report needs a non-empty stream")
    rows.sort(key=lambda row: (-row["sum_hat_ovals"], -row["non_conjugate_classes"], row["family"]))
    reason = "ranked by total real-form ovals, then by non-conjugate real forms"
    if not rows:
        reason = "no family with hat genus > 1"
    return ExtremalReport(rows if top is None else rows[:top], reason)
