"""Equipped families of real forms built from a base and its components.

The block representation ``x_j -> (p_j^1, ..., p_j^r)`` has kernel equal to
the intersection of all conjugates of the component subgroups, so its image
``G`` is the deck group of the common regular cover.  Sheets of the regular
cover are the elements of ``G``: loops act by right multiplication, deck
transformations by left multiplication, and the sheet ``g`` lies over the
point ``1 * g_i`` of component ``i``.

The real structure induces the automorphism ``alpha`` of ``G``; a real form on
the regular cover is ``g -> h * alpha(g)`` with ``h * alpha(h) = 1``, and it
covers the lift ``t_i`` of component ``i`` exactly when ``1 * h_i = 1 * t_i``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import ConsistencyError, IncompatibleLiftsError, LimitError
from .permcore import (DEFAULT_ELEMENT_CAP, ImageGroup, InducedAutomorphism, Permutation,
                       group_closure, induced_automorphism, is_generated_by,
                       point_stabilizer)
from .realcover import (ComponentCover, RealBase, admissibility_diagnosis, choose_lift,
                        count_ovals, genus_rh, is_lift, realize_cw, sigma_star,
                        validate_monodromy)


@dataclass(frozen=True, eq=False)
class EquippedFamily:
    base: RealBase
    components: tuple[ComponentCover, ...]
    group: ImageGroup
    subgroups: tuple[tuple[int, ...], ...]
    alpha: InducedAutomorphism
    h_choices: tuple[int, ...]
    hat_genus: int
    hat_ovals: tuple[int, ...]
    genera: tuple[int, ...]
    ovals: tuple[int, ...]
    lift_sources: tuple[str, ...] = ()
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def r(self) -> int:
        return len(self.components)

    @property
    def order(self) -> int:
        return self.group.order

    @property
    def subgroup_orders(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self.subgroups)

    def subgroup_elements(self, i: int) -> list[Permutation]:
        return [self.group.elements[k] for k in self.subgroups[i]]

    def regular_monodromy(self) -> tuple[Permutation, ...]:
        if "mono" not in self._cache:
            G = self.group
            self._cache["mono"] = tuple(
                Permutation._raw(tuple(G.index(g * x) + 1 for g in G.elements))
                for x in G.generators)
        return self._cache["mono"]

    def real_form(self, i: int) -> Permutation:
        """The involution ``g -> h_i * alpha(g)`` of the regular fibre."""
        key = ("L", i)
        if key not in self._cache:
            G = self.group
            h = G.elements[self.h_choices[i]]
            self._cache[key] = Permutation._raw(tuple(
                G.index(h * G.elements[self.alpha(k)]) + 1 for k in range(G.order)))
        return self._cache[key]

    def deck(self, k: int) -> Permutation:
        """Deck transformation ``g -> elements[k] * g``."""
        G = self.group
        a = G.elements[k]
        return Permutation._raw(tuple(G.index(a * g) + 1 for g in G.elements))

    def deck_group(self) -> list[Permutation]:
        if "deck" not in self._cache:
            self._cache["deck"] = [self.deck(k) for k in range(self.order)]
        return self._cache["deck"]

    def regular_cover(self, i: int = 0) -> ComponentCover:
        return ComponentCover(self.order, self.regular_monodromy(), self.real_form(i),
                              name=f"regular[{i + 1}]")

    def projection(self, i: int) -> list[int]:
        """Sheet of component ``i`` under each regular sheet."""
        G = self.group
        return [G.block(g, i)(1) for g in G.elements]


def _regular_genus(G: ImageGroup) -> int:
    chi = 2 * G.order - sum(G.order - G.order // x.order() for x in G.generators)
    return (2 - chi) // 2


def real_form_candidates(G: ImageGroup, alpha: InducedAutomorphism, block: int,
                         lift: Permutation) -> list[int]:
    """Twists ``h`` giving involutive real forms that cover ``lift`` on ``block``."""
    target = lift(1)
    return [k for k in alpha.solutions if G.block(G.elements[k], block)(1) == target]


def _prepare(base: RealBase, comps: Sequence[ComponentCover]):
    if not comps:
        raise ValueError("a family needs at least one component")
    prepared, sources = [], []
    for idx, c in enumerate(comps):
        name = c.name or f"component {idx + 1}"
        if c.n != base.n:
            raise ValueError(f"{name}: {c.n} monodromy entries for {base.n} branch points")
        rep = validate_monodromy(c)
        if not rep.ok:
            raise ValueError(f"{name}: " + "; ".join(rep.problems()))
        if c.lift is None:
            t = choose_lift(c)
            if t is None:
                raise IncompatibleLiftsError(f"{name}: the real structure does not lift")
            c = c.with_lift(t)
            sources.append("auto")
        else:
            sources.append("given")
        prepared.append(c)
    return prepared, sources


def _group_of(base: RealBase, comps: Sequence[ComponentCover], cap: int):
    degrees = tuple(c.degree for c in comps)
    gens = [tuple(c.monodromy[j] for c in comps) for j in range(base.n)]
    G = group_closure(gens, degrees=degrees, cap=cap)
    alpha = induced_automorphism(G, [sigma_star(base.n, j) for j in range(1, base.n + 1)])
    return G, alpha


def _assemble(base, comps, sources, G, alpha, h_choices, check: bool) -> EquippedFamily:
    subgroups = tuple(tuple(G.index(g) for g in point_stabilizer(G, i, 1))
                      for i in range(len(comps)))
    hat_genus = _regular_genus(G)
    fam = EquippedFamily(base, tuple(comps), G, subgroups, alpha, tuple(h_choices),
                         hat_genus, (), tuple(genus_rh(c) for c in comps),
                         tuple(count_ovals(c).k for c in comps), tuple(sources))
    hat_ovals = tuple(count_ovals(fam.regular_cover(i)).k for i in range(len(comps)))
    object.__setattr__(fam, "hat_ovals", hat_ovals)
    if check:
        check_family_invariants(fam)
    return fam


def build_family(base: RealBase, comps: Sequence[ComponentCover], lift_policy: str = "first",
                 h_choices: Sequence[int] | None = None, cap: int = DEFAULT_ELEMENT_CAP,
                 check: bool = True) -> EquippedFamily:
    """Construct the equipped family of a base and its components.

    Components without a lift get the default one from
    :func:`foamlab.realcover.choose_lift`.  ``lift_policy`` picks the twist
    ``h_i`` among the valid ones: ``"first"`` or ``"last"`` in group order.
    Inadmissible components are accepted; :func:`verify_axioms` reports them.
    """
    comps, sources = _prepare(base, comps)
    G, alpha = _group_of(base, comps, cap)
    chosen = []
    for i, c in enumerate(comps):
        cands = real_form_candidates(G, alpha, i, c.lift)
        if not cands:
            raise IncompatibleLiftsError(
                f"{c.name or f'component {i + 1}'}: no involutive real form on the regular "
                f"cover covers the lift {c.lift.cycle_string()}")
        if h_choices is not None:
            if h_choices[i] not in cands:
                raise IncompatibleLiftsError(f"h choice {h_choices[i]} is not valid for component {i + 1}")
            chosen.append(h_choices[i])
        elif lift_policy == "first":
            chosen.append(cands[0])
        elif lift_policy == "last":
            chosen.append(cands[-1])
        else:
            raise ValueError(f"unknown lift policy {lift_policy!r}")
    return _assemble(base, comps, sources, G, alpha, chosen, check)


def family_variants(base: RealBase, comps: Sequence[ComponentCover],
                    cap: int = DEFAULT_ELEMENT_CAP) -> Iterator[EquippedFamily]:
    """Every family obtained by varying the twists ``h_i`` independently."""
    comps, sources = _prepare(base, comps)
    G, alpha = _group_of(base, comps, cap)
    cands = [real_form_candidates(G, alpha, i, c.lift) for i, c in enumerate(comps)]
    for combo in itertools.product(*cands):
        yield _assemble(base, comps, sources, G, alpha, combo, True)


def check_family_invariants(F: EquippedFamily) -> None:
    """Assert the structural facts every built family must satisfy."""
    mono = F.regular_monodromy()
    for i, c in enumerate(F.components):
        L = F.real_form(i)
        if not (L * L).is_identity():
            raise ConsistencyError(f"real form {i + 1} is not an involution")
        if not is_lift(F.regular_cover(i), L):
            raise ConsistencyError(f"real form {i + 1} violates the conjugation law")
        proj = F.projection(i)
        if any(proj[L(a) - 1] != c.lift(proj[a - 1]) for a in range(1, F.order + 1)):
            raise ConsistencyError(f"projection to component {i + 1} does not intertwine the lifts")
        if F.order != c.degree * len(F.subgroups[i]):
            raise ConsistencyError(f"|G| != d_{i + 1} |G_{i + 1}|")
    reg = ComponentCover(F.order, mono)
    if genus_rh(reg) != F.hat_genus or realize_cw(reg).genus() != F.hat_genus:
        raise ConsistencyError("regular-cover genus disagrees between Riemann-Hurwitz and cells")


@dataclass
class AxiomReport:
    normalizes_group: list[bool]
    preserves_subgroup: list[bool]
    generated: bool
    admissible: list[bool]
    involutive: list[bool]
    diagnostics: list[str]

    @property
    def ok(self) -> bool:
        return (all(self.normalizes_group) and all(self.preserves_subgroup) and self.generated
                and all(self.admissible) and all(self.involutive))

    def as_dict(self) -> dict:
        return {
            "real_forms_normalize_G": self.normalizes_group,
            "real_forms_preserve_G_i": self.preserves_subgroup,
            "G_generated_by_G_i": self.generated,
            "ovals_map_homeomorphically": self.admissible,
            "real_forms_involutive": self.involutive,
            "diagnostics": self.diagnostics,
            "all_pass": self.ok,
        }


def verify_axioms(F: EquippedFamily) -> AxiomReport:
    deck = F.deck_group()
    deck_set = set(deck)
    normal, preserve, admissible, invol, diag = [], [], [], [], []
    for i, c in enumerate(F.components):
        L = F.real_form(i)
        conj = [L * a * L for a in deck]
        normal.append(set(conj) == deck_set)
        sub = [deck[k] for k in F.subgroups[i]]
        preserve.append({L * a * L for a in sub} == set(sub))
        invol.append((L * L).is_identity() and is_lift(F.regular_cover(i), L))
        why = admissibility_diagnosis(c)
        admissible.append(why is None)
        if why is not None:
            diag.append(f"{c.name or f'component {i + 1}'}: axiom 5 fails, {why}")
    generated = is_generated_by(F.group, [F.subgroup_elements(i) for i in range(F.r)])
    if not generated:
        diag.append("the subgroups G_i do not generate G")
    return AxiomReport(normal, preserve, generated, admissible, invol, diag)


def family_invariants(F: EquippedFamily) -> dict:
    return {
        "r": F.r,
        "G_order": F.order,
        "G_i_orders": list(F.subgroup_orders),
        "hat_genus": F.hat_genus,
        "hat_ovals": list(F.hat_ovals),
        "genera": list(F.genera),
        "ovals": list(F.ovals),
    }


def _num(x: Fraction):
    return x.numerator if x.denominator == 1 else float(x)


@dataclass
class QuotientReport:
    applicable: bool
    reason: str
    genus_rows: list[dict]
    oval_rows: list[dict]

    @property
    def holds(self) -> bool:
        return all(r["holds"] for r in self.genus_rows + self.oval_rows)

    def as_dict(self) -> dict:
        return {"bound_suite_applicable": self.applicable, "reason": self.reason,
                "genus_bound": self.genus_rows, "oval_bound": self.oval_rows,
                "all_hold": self.holds}


def quotient_checks(F: EquippedFamily, strict: bool = True) -> QuotientReport:
    """Evaluate ``g_i <= (g^ - 1)/|G_i| + 1`` and ``k_i <= k^_i``.

    Both are theorems for families passing :func:`verify_axioms`; there,
    with ``strict``, a violation raises ConsistencyError.  Elsewhere (for
    example an inadmissible component) a failure is only reported.
    """
    genus_rows, oval_rows = [], []
    for i in range(F.r):
        rhs = Fraction(F.hat_genus - 1, len(F.subgroups[i])) + 1
        g = F.genera[i]
        genus_rows.append({"component": i + 1, "lhs": g, "rhs": _num(rhs), "holds": g <= rhs,
                           "equality": g == rhs})
        oval_rows.append({"component": i + 1, "lhs": F.ovals[i], "rhs": F.hat_ovals[i],
                          "holds": F.ovals[i] <= F.hat_ovals[i]})
    applicable = F.hat_genus > 1
    reason = "hat genus > 1" if applicable else f"not applicable: hat genus {F.hat_genus} <= 1"
    rep = QuotientReport(applicable, reason, genus_rows, oval_rows)
    if not rep.holds:
        # the inequalities are only theorems for genuine equipped families
        if strict and verify_axioms(F).ok:
            raise ConsistencyError(f"quotient inequality violated: {rep.as_dict()}")
        rep.reason += "; an inequality fails, the family does not satisfy the axioms"
    return rep


def _group_isomorphism(G1: ImageGroup, G2: ImageGroup) -> list[int] | None:
    """Index map of the isomorphism sending generator j to generator j, if any."""
    g1, g2 = G1.generators, G2.generators
    if len(g1) != len(g2) or G1.order != G2.order:
        return None
    images = [G2.identity]
    for k in range(1, G1.order):
        m, j = G1.parents[k]
        images.append(images[m] * g2[j - 1])
    for k, g in enumerate(G1.elements):
        for j, x in enumerate(g1):
            if images[G1.index(g * x)] != images[k] * g2[j]:
                return None
    table = [G2.index(h) for h in images]
    return table if len(set(table)) == G2.order else None


def families_equivalent(F1: EquippedFamily, F2: EquippedFamily, max_order: int = 5000) -> bool:
    """Search for equivalence data among automorphisms induced by relabelling.

    The identification ``H`` of the two regular covers ranges over maps that
    cover the identity of the base (``g -> k * psi(g)``); on top of it the
    twists ``h_i`` in G and ``l_i`` in G_i are searched exhaustively and
    components may be matched in any degree-preserving order.  A True answer
    exhibits an equivalence; False only means none exists in this range.
    """
    if F1.base.n != F2.base.n or F1.r != F2.r or F1.order != F2.order:
        return False
    if sorted(c.degree for c in F1.components) != sorted(c.degree for c in F2.components):
        return False
    if F1.order > max_order:
        raise LimitError(f"group order {F1.order} exceeds equivalence search cap {max_order}")
    psi = _group_isomorphism(F1.group, F2.group)
    if psi is None:
        return False
    N = F1.order
    deck1 = F1.deck_group()
    sub2 = [frozenset(F2.deck_group()[k] for k in s) for s in F2.subgroups]
    forms2 = [F2.real_form(i) for i in range(F2.r)]
    for k in range(N):
        a = F2.group.elements[k]
        # H as a permutation from F1 sheets to F2 sheets (both numbered 1..N)
        H = Permutation._raw(tuple(F2.group.index(a * F2.group.elements[psi[m]]) + 1
                                   for m in range(N)))
        Hi = ~H

        def move(X):
            return Hi * X * H

        for match in itertools.permutations(range(F1.r)):
            if any(F1.components[i].degree != F2.components[match[i]].degree for i in range(F1.r)):
                continue
            if all(_component_matches(F1, i, move, sub2[match[i]], forms2[match[i]], deck1)
                   for i in range(F1.r)):
                return True
    return False


def _component_matches(F1, i, move, target_sub, target_form, deck1) -> bool:
    L = F1.real_form(i)
    sub = [deck1[k] for k in F1.subgroups[i]]
    for hk in range(F1.order):
        h = deck1[hk]
        hinv = ~h
        # as maps h o X o h^-1: apply h^-1, then X, then h
        if frozenset(move(hinv * s * h) for s in sub) != target_sub:
            continue
        for l in sub:
            hl = l * h  # the map h o l
            if move(~hl * L * hl) == target_form:
                return True
    return False
