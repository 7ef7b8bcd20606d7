"""Branched covers of the real sphere and their real structures.

The base is the Riemann sphere with complex conjugation.  Branch points
``b_1 .. b_n`` sit on the real circle in counterclockwise order, arc ``e_j``
runs from ``b_j`` to ``b_{j+1}`` and the basepoint lies on ``e_n``.  The
loop ``x_j`` goes through the upper hemisphere and turns once around
``b_j``; with this choice ``x_1 x_2 ... x_n = 1`` and complex conjugation acts
on loops by ``x_j -> c_{j-1} x_j^-1 c_{j-1}^-1`` where ``c_j = x_1 ... x_j``.

Sheets are labelled by the fibre over the basepoint.  Upper and lower
hemisphere sheets ``U_i`` and ``D_i`` meet along the lift of ``e_n`` through
fibre point ``i``; along ``e_j`` the sheet ``U_i`` meets ``D_{i * pi_j}``
with ``pi_j = rho(c_j)^-1``.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import ConsistencyError, LimitError
from .permcore import FreeGroupContext, Permutation, Word, free_reduce, word_image

CELL_CAP = 10 ** 6


@dataclass(frozen=True)
class RealBase:
    """Genus-0 base with ``n`` real branch points on its single real circle."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("number of branch points must be >= 0")

    @property
    def context(self) -> FreeGroupContext:
        return FreeGroupContext(self.n)


@dataclass(frozen=True)
class ComponentCover:
    """One connected component: monodromy tuple and an optional involution lift."""

    degree: int
    monodromy: tuple[Permutation, ...]
    lift: Permutation | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "monodromy", tuple(self.monodromy))
        for p in self.monodromy:
            if p.degree != self.degree:
                raise ValueError(f"{self.name or 'component'}: permutation degree "
                                 f"{p.degree} != {self.degree}")
        if self.lift is not None and self.lift.degree != self.degree:
            raise ValueError(f"{self.name or 'component'}: lift has wrong degree")

    @property
    def n(self) -> int:
        return len(self.monodromy)

    def with_lift(self, t: Permutation | None) -> ComponentCover:
        return replace(self, lift=t)

    def rho(self, w: Word) -> Permutation:
        if not w:
            return Permutation.identity(self.degree)
        return word_image(w, self.monodromy)


def sigma_star(ctx: FreeGroupContext | int, j: int) -> Word:
    """Image of ``x_j`` under the real structure: ``c_{j-1} x_j^-1 c_{j-1}^-1``."""
    n = ctx.n if isinstance(ctx, FreeGroupContext) else ctx
    if not 1 <= j <= n:
        raise ValueError(f"generator index {j} out of range 1..{n}")
    prefix = tuple(range(1, j))
    return prefix + (-j,) + tuple(-a for a in reversed(prefix))


def sigma_star_word(n: int, w: Word) -> Word:
    """Apply the real structure to an arbitrary word (freely reduced)."""
    out: list[int] = []
    for a in w:
        img = sigma_star(n, abs(a))
        out.extend(img if a > 0 else tuple(-b for b in reversed(img)))
    return free_reduce(out)


def prefix_images(c: ComponentCover) -> list[Permutation]:
    """``rho(c_0), rho(c_1), ..., rho(c_n)``."""
    acc = Permutation.identity(c.degree)
    out = [acc]
    for p in c.monodromy:
        acc = acc * p
        out.append(acc)
    return out


def sigma_images(c: ComponentCover) -> list[Permutation]:
    return [c.rho(sigma_star(c.n, j)) for j in range(1, c.n + 1)]


def orbits(degree: int, perms: Sequence[Permutation]) -> list[list[int]]:
    seen: set[int] = set()
    out = []
    for s in range(1, degree + 1):
        if s in seen:
            continue
        orb = [s]
        seen.add(s)
        queue = deque([s])
        while queue:
            a = queue.popleft()
            for p in perms:
                b = p(a)
                if b not in seen:
                    seen.add(b)
                    orb.append(b)
                    queue.append(b)
        out.append(sorted(orb))
    return out


@dataclass
class MonodromyReport:
    name: str
    product_identity: bool
    transitive: bool
    lift_ok: bool | None
    orbits: list[list[int]]

    @property
    def ok(self) -> bool:
        return self.product_identity and self.transitive and self.lift_ok is not False

    def problems(self) -> list[str]:
        out = []
        if not self.product_identity:
            out.append("product of monodromy is not the identity")
        if not self.transitive:
            out.append(f"monodromy is not transitive (orbits {self.orbits})")
        if self.lift_ok is False:
            out.append("lift is not an involution satisfying the conjugation condition")
        return out


def is_lift(c: ComponentCover, t: Permutation) -> bool:
    if t.degree != c.degree or not (t * t).is_identity():
        return False
    return all(t * p * t == q for p, q in zip(c.monodromy, sigma_images(c)))


def validate_monodromy(c: ComponentCover) -> MonodromyReport:
    prod = prefix_images(c)[-1]
    orbs = orbits(c.degree, c.monodromy)
    lift_ok = None if c.lift is None else is_lift(c, c.lift)
    return MonodromyReport(c.name, prod.is_identity(), len(orbs) == 1, lift_ok, orbs)


def ramification_total(c: ComponentCover) -> int:
    return sum(c.degree - p.cycle_count() for p in c.monodromy)


def genus_rh(c: ComponentCover) -> int:
    """Genus by Riemann-Hurwitz: chi = 2d - sum_j (d - #cycles(p_j))."""
    chi = 2 * c.degree - ramification_total(c)
    if chi % 2:
        raise ConsistencyError(f"odd Euler characteristic {chi}; monodromy is invalid")
    g = (2 - chi) // 2
    if g < 0:
        raise ConsistencyError(f"negative genus {g}; monodromy is not transitive")
    return g


def involution_lifts(c: ComponentCover) -> list[Permutation]:
    """All involutions ``t`` with ``t p_j t = rho(sigma*(x_j))``, lexicographic.

    A lift intertwines the monodromy action with its conjugate, so for a
    transitive action it is fixed by the image of the point 1.
    """
    d = c.degree
    sig = sigma_images(c)
    gens = list(c.monodromy)
    if len(orbits(d, gens)) != 1:
        if d > 8:
            raise LimitError("lift search for intransitive monodromy is capped at degree 8")
        cands = (Permutation(im) for im in itertools.permutations(range(1, d + 1)))
        return sorted(t for t in cands if is_lift(c, t))
    out = []
    for target in range(1, d + 1):
        images = {1: target}
        queue = deque([1])
        ok = True
        while queue and ok:
            a = queue.popleft()
            for p, q in zip(gens, sig):
                # (a p) t = (a t) q
                b, tb = p(a), q(images[a])
                if b in images:
                    if images[b] != tb:
                        ok = False
                        break
                else:
                    images[b] = tb
                    queue.append(b)
        if not ok or len(images) != d or len(set(images.values())) != d:
            continue
        t = Permutation(images[i] for i in range(1, d + 1))
        if is_lift(c, t):
            out.append(t)
    return sorted(out)


# -- cellular model --------------------------------------------------------

@dataclass
class CWSurface:
    """Cell structure pulled back from the base: b_j, e_j and two hemispheres.

    Vertices are ``(j, cycle of p_j)``, edges ``(j, i)`` is the lift of ``e_j``
    on the boundary of ``U_i``, faces are ``("U", i)`` and ``("D", i)``.  With
    no branch points the real circle is a single vertex-free circle cell.
    Face boundaries are cyclic lists of ``(edge index, direction)``.
    """

    n: int
    degree: int
    vertices: list[tuple[int, tuple[int, ...]]]
    edges: list[tuple[int, int]]
    edge_ends: list[tuple[int | None, int | None]]
    faces: list[tuple[str, int]]
    boundaries: list[list[tuple[int, int]]]
    vertex_map: list[int] | None = None
    edge_map: list[int] | None = None
    face_map: list[int] | None = None
    _edge_index: dict = field(default_factory=dict, repr=False)

    @property
    def circle_cells(self) -> int:
        return 1 if self.n == 0 else 0

    def euler_characteristic(self) -> int:
        # a vertex-free circle cell contributes 0
        segment_edges = len(self.edges) - self.circle_cells * self.degree
        return len(self.vertices) - segment_edges + len(self.faces)

    def genus(self) -> int:
        return (2 - self.euler_characteristic()) // 2

    def edge_index(self, j: int, i: int) -> int:
        return self._edge_index[(j, i)]

    @property
    def has_involution(self) -> bool:
        return self.edge_map is not None

    def fixed_edges(self) -> list[int]:
        return [e for e, f in enumerate(self.edge_map) if f == e]

    def fixed_vertices(self) -> list[int]:
        return [v for v, f in enumerate(self.vertex_map) if f == v]

    def cell_count(self) -> int:
        return len(self.vertices) + len(self.edges) + len(self.faces)


def realize_cw(c: ComponentCover, t: Permutation | None = None, check: bool = True) -> CWSurface:
    """Build the covering surface cell by cell, with the cellular involution of ``t``."""
    d, n = c.degree, c.n
    if n * d + 2 * d + sum(p.cycle_count() for p in c.monodromy) > CELL_CAP:
        raise LimitError(f"cell count exceeds {CELL_CAP}")
    faces = [("U", i) for i in range(1, d + 1)] + [("D", i) for i in range(1, d + 1)]
    if n == 0:
        if d != 1:
            raise ValueError("only the trivial cover exists over an unbranched sphere")
        surf = CWSurface(0, 1, [], [(0, 1)], [(None, None)], faces, [[(0, 1)], [(0, -1)]])
        surf._edge_index[(0, 1)] = 0
        if t is not None:
            surf.vertex_map, surf.edge_map, surf.face_map = [], [0], [1, 0]
        if check:
            verify_cw(surf)
        return surf

    vertices = []
    vertex_of: dict[tuple[int, int], int] = {}
    for j, p in enumerate(c.monodromy, 1):
        for cyc in p.cycles(include_fixed=True):
            for i in cyc:
                vertex_of[(j, i)] = len(vertices)
            vertices.append((j, cyc))
    edges, ends = [], []
    edge_index = {}
    for j in range(1, n + 1):
        nxt = j % n + 1
        for i in range(1, d + 1):
            edge_index[(j, i)] = len(edges)
            edges.append((j, i))
            ends.append((vertex_of[(j, i)], vertex_of[(nxt, i)]))
    pis = [~q for q in prefix_images(c)]  # pis[j] = rho(c_j)^-1
    boundaries = []
    for i in range(1, d + 1):
        boundaries.append([(edge_index[(j, i)], 1) for j in range(1, n + 1)])
    for k in range(1, d + 1):
        # D_k traversed with reversed orientation: e_n backwards down to e_1
        boundaries.append([(edge_index[(j, (~pis[j])(k))], -1) for j in range(n, 0, -1)])
    surf = CWSurface(n, d, vertices, edges, ends, faces, boundaries, _edge_index=edge_index)

    if t is not None:
        emap = [edge_index[(j, t(pis[j](i)))] for (j, i) in edges]
        fmap = [d + t(i) - 1 for i in range(1, d + 1)] + [t(i) - 1 for i in range(1, d + 1)]
        vmap = [-1] * len(vertices)
        for e, (tail, _head) in enumerate(ends):
            vmap[tail] = ends[emap[e]][0]
        surf.vertex_map, surf.edge_map, surf.face_map = vmap, emap, fmap
    if check:
        verify_cw(surf)
    return surf


def _corner_links(surf: CWSurface) -> dict[int, list[tuple[tuple[int, int], tuple[int, int]]]]:
    """For each vertex, the corners as pairs of edge-end nodes ``(edge, 0=tail/1=head)``."""
    links: dict[int, list] = {v: [] for v in range(len(surf.vertices))}
    for bd in surf.boundaries:
        m = len(bd)
        for s in range(m):
            e1, d1 = bd[s]
            e2, d2 = bd[(s + 1) % m]
            end1 = (e1, 1 if d1 > 0 else 0)
            start2 = (e2, 0 if d2 > 0 else 1)
            v1 = surf.edge_ends[e1][end1[1]]
            v2 = surf.edge_ends[e2][start2[1]]
            if v1 != v2:
                raise ConsistencyError(f"face boundary is not closed at edges {e1},{e2}")
            links[v1].append((end1, start2))
    return links


def verify_cw(surf: CWSurface) -> None:
    """Check the surface and involution invariants; raise ConsistencyError on failure."""
    uses: dict[int, list[int]] = {e: [] for e in range(len(surf.edges))}
    for bd in surf.boundaries:
        for e, direction in bd:
            uses[e].append(direction)
    for e, dirs in uses.items():
        if sorted(dirs) != [-1, 1]:
            raise ConsistencyError(f"edge {surf.edges[e]} is not traversed once each way")
    if surf.n:
        for v, corners in _corner_links(surf).items():
            adj: dict = {}
            for a, b in corners:
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
            if any(len(x) != 2 for x in adj.values()):
                raise ConsistencyError(f"vertex {surf.vertices[v]} link is not a circle")
            start = next(iter(adj))
            seen = {start}
            queue = [start]
            while queue:
                a = queue.pop()
                for b in adj[a]:
                    if b not in seen:
                        seen.add(b)
                        queue.append(b)
            if len(seen) != len(adj):
                raise ConsistencyError(f"vertex {surf.vertices[v]} link is disconnected")
    if surf.euler_characteristic() % 2:
        raise ConsistencyError("odd Euler characteristic")
    if len(face_components(surf, blocked=set())) != 1:
        raise ConsistencyError("surface is disconnected")
    if surf.has_involution:
        _verify_involution(surf)


def _verify_involution(surf: CWSurface) -> None:
    for name, m in (("vertex", surf.vertex_map), ("edge", surf.edge_map), ("face", surf.face_map)):
        if sorted(m) != list(range(len(m))) or any(m[m[x]] != x for x in range(len(m))):
            raise ConsistencyError(f"{name} map of the involution is not an involution")
    for e, (tail, head) in enumerate(surf.edge_ends):
        te = surf.edge_map[e]
        if tail is not None and (surf.vertex_map[tail], surf.vertex_map[head]) != surf.edge_ends[te]:
            raise ConsistencyError(f"involution does not commute with the ends of edge {e}")
    for f, bd in enumerate(surf.boundaries):
        tf = surf.face_map[f]
        if surf.faces[f][0] == surf.faces[tf][0]:
            raise ConsistencyError("involution does not exchange the hemispheres")
        if {surf.edge_map[e] for e, _ in bd} != {e for e, _ in surf.boundaries[tf]}:
            raise ConsistencyError(f"involution does not commute with the boundary of face {f}")


def face_components(surf: CWSurface, blocked: set[int]) -> list[list[int]]:
    """Connected components of faces glued along edges not in ``blocked``."""
    parent = list(range(len(surf.faces)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    incident: dict[int, list[int]] = {}
    for f, bd in enumerate(surf.boundaries):
        for e, _ in bd:
            incident.setdefault(e, []).append(f)
    for e, fs in incident.items():
        if e in blocked:
            continue
        for f in fs[1:]:
            parent[find(f)] = find(fs[0])
    groups: dict[int, list[int]] = {}
    for f in range(len(surf.faces)):
        groups.setdefault(find(f), []).append(f)
    return sorted(groups.values())


# -- ovals -----------------------------------------------------------------

@dataclass(frozen=True)
class OvalCount:
    """Ovals as cyclic lists of ``((j, i), direction)`` edge cells."""

    k: int
    ovals: tuple[tuple[tuple[tuple[int, int], int], ...], ...]

    def arcs(self, oval: int) -> list[int]:
        return [cell[0] for cell, _ in self.ovals[oval]]


def fixed_ovals(surf: CWSurface) -> OvalCount:
    if not surf.has_involution:
        raise ValueError("surface has no involution")
    fixed = surf.fixed_edges()
    if surf.n == 0:
        return OvalCount(len(fixed), tuple(((surf.edges[e], 1),) for e in fixed))
    fixed_set = set(fixed)
    at_vertex: dict[int, list[tuple[int, int]]] = {}
    for e in fixed:
        tail, head = surf.edge_ends[e]
        at_vertex.setdefault(tail, []).append((e, 0))
        at_vertex.setdefault(head, []).append((e, 1))
    fixed_vertices = set(surf.fixed_vertices())
    if set(at_vertex) != fixed_vertices:
        raise ConsistencyError("fixed vertices and ends of fixed edges disagree")
    for v, ends in at_vertex.items():
        if len(ends) != 2:
            raise ConsistencyError(f"fixed set is not a 1-manifold at vertex {surf.vertices[v]}")
    ovals = []
    seen: set[int] = set()
    for start in fixed:
        if start in seen:
            continue
        walk = []
        e, direction = start, 1
        while e not in seen:
            seen.add(e)
            walk.append((surf.edges[e], direction))
            v = surf.edge_ends[e][1 if direction > 0 else 0]
            a, b = at_vertex[v]
            came = (e, 1 if direction > 0 else 0)
            nxt = b if a == came else a
            e, direction = nxt[0], 1 if nxt[1] == 0 else -1
        if e != start:
            raise ConsistencyError("oval walk did not close up")
        ovals.append(tuple(walk))
    if seen != fixed_set:
        raise ConsistencyError("oval walks missed fixed edges")
    return OvalCount(len(ovals), tuple(ovals))


def count_ovals(c: ComponentCover, t: Permutation | None = None) -> OvalCount:
    t = t if t is not None else c.lift
    if t is None or not is_lift(c, t):
        raise ValueError("count_ovals needs a valid involution lift")
    return fixed_ovals(realize_cw(c, t))


def admissible_component(c: ComponentCover, t: Permutation | None = None) -> bool:
    """Every oval passes over each base arc exactly once."""
    ovals = count_ovals(c, t)
    if c.n == 0:
        return True
    want = list(range(1, c.n + 1))
    return all(sorted(ovals.arcs(o)) == want for o in range(ovals.k))


def admissibility_diagnosis(c: ComponentCover, t: Permutation | None = None) -> str | None:
    ovals = count_ovals(c, t)
    if c.n == 0:
        return None
    want = list(range(1, c.n + 1))
    for o in range(ovals.k):
        arcs = sorted(ovals.arcs(o))
        if arcs != want:
            return f"oval {o + 1} passes over arcs {arcs}, expected each of {want} once"
    return None


def separating_ovals(c: ComponentCover, t: Permutation | None = None) -> bool:
    """True iff the ovals cut the surface in two (quotient is orientable)."""
    t = t if t is not None else c.lift
    surf = realize_cw(c, t)
    return len(face_components(surf, blocked=set(surf.fixed_edges()))) == 2


def choose_lift(c: ComponentCover) -> Permutation | None:
    """Default lift policy: smallest admissible lift, else smallest lift, else None."""
    lifts = involution_lifts(c)
    for t in lifts:
        if admissible_component(c, t):
            return t
    return lifts[0] if lifts else None


# -- relabelling the base --------------------------------------------------

def rotate_base(c: ComponentCover) -> ComponentCover:
    """Move the basepoint across ``b_1`` so that ``b_2`` becomes the first point."""
    if c.n == 0:
        return c
    p1 = c.monodromy[0]
    lift = None if c.lift is None else c.lift * p1
    return ComponentCover(c.degree, c.monodromy[1:] + (p1,), lift, c.name)


def reflect_base(c: ComponentCover) -> ComponentCover:
    """Relabel through ``z -> -z``: branch points in reverse order, hemispheres swapped."""
    n = c.n
    pre = prefix_images(c)
    mono = tuple((pre[m - 1] * c.monodromy[m - 1]) * ~pre[m - 1] for m in range(n, 0, -1))
    return ComponentCover(c.degree, mono, c.lift, c.name)


def drop_unramified(comps: Sequence[ComponentCover]) -> tuple[list[ComponentCover], list[int]]:
    """Remove branch points where every component is unramified.

    Returns the reduced components and the kept (1-based) point indices.
    """
    if not comps:
        return [], []
    n = comps[0].n
    keep = [j for j in range(1, n + 1)
            if any(not c.monodromy[j - 1].is_identity() for c in comps)]
    out = [ComponentCover(c.degree, tuple(c.monodromy[j - 1] for j in keep), c.lift, c.name)
           for c in comps]
    return out, keep


def conjugate_cover(c: ComponentCover, g: Permutation) -> ComponentCover:
    """Relabel sheets by ``g``: every monodromy entry and the lift become ``g^-1 x g``."""
    gi = ~g
    lift = None if c.lift is None else gi * c.lift * g
    return ComponentCover(c.degree, tuple(gi * p * g for p in c.monodromy), lift, c.name)
