"""Generalized graphs, foams and the compressing operation.

A foam here is a list of component covers with chosen lifts, a generalized
graph and, for every oval of every component, a closed walk in the graph.
A walk is a cyclic tuple of steps ``(element, direction, span)``: the next
``span`` edge cells of the oval map onto graph edge (or circle) ``element``,
traversed forwards (``+1``) or backwards (``-1``).  Junctions between steps
are the surface vertices glued to graph vertices.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import ExpansionError, InadmissibleComponentError, LimitError
from .permcore import canonical_conjugate
from .realcover import (ComponentCover, RealBase, admissibility_diagnosis, count_ovals,
                        drop_unramified, realize_cw, reflect_base, rotate_base)

Step = tuple  # (element id, direction, span)
Walk = tuple  # tuple of Steps


@dataclass(frozen=True)
class GeneralizedGraph:
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (id, u, v)
    circles: tuple[str, ...] = ()

    def edge(self, eid: str) -> tuple[str, str] | None:
        for e, u, v in self.edges:
            if e == eid:
                return u, v
        return None

    @property
    def element_ids(self) -> list[str]:
        return [e for e, _, _ in self.edges] + list(self.circles)


@dataclass
class GraphReport:
    self_loops: list[str]
    duplicate_ids: list[str]
    unknown_vertices: list[str]

    @property
    def ok(self) -> bool:
        return not (self.self_loops or self.duplicate_ids or self.unknown_vertices)


def validate_graph(g: GeneralizedGraph) -> GraphReport:
    ids = list(g.vertices) + [e for e, _, _ in g.edges] + list(g.circles)
    dup = sorted(k for k, c in Counter(ids).items() if c > 1)
    loops = [e for e, u, v in g.edges if u == v]
    vs = set(g.vertices)
    unknown = sorted({x for _, u, v in g.edges for x in (u, v) if x not in vs})
    return GraphReport(loops, dup, unknown)


@dataclass
class FoamReport:
    graph_ok: bool
    well_formed: bool
    a: bool
    b: bool
    c: bool
    d: bool
    connected: bool
    messages: list[str] = field(default_factory=list)

    @property
    def classification(self) -> str:
        if not (self.graph_ok and self.well_formed and self.a and self.b and self.d
                and self.connected):
            return "invalid"
        return "foam" if self.c else "pseudofoam"

    def as_dict(self) -> dict:
        return {"graph_valid": self.graph_ok, "well_formed": self.well_formed,
                "a_image_is_graph": self.a, "b_homeomorphic_on_ovals": self.b,
                "c_one_preimage_per_component": self.c, "d_vertex_links_connected": self.d,
                "connected": self.connected, "classification": self.classification,
                "messages": self.messages}


@dataclass(frozen=True)
class OvalCells:
    """An oval as edge cells ``((j, i), direction)`` and the vertex cell after each."""

    cells: tuple
    ends: tuple


def component_ovals(c: ComponentCover) -> list[OvalCells]:
    surf = realize_cw(c, c.lift)
    out = []
    for oval in count_ovals(c, c.lift).ovals:
        ends = []
        for (j, i), direction in oval:
            tail, head = surf.edge_ends[surf.edge_index(j, i)]
            ends.append(head if direction > 0 else tail)
        out.append(OvalCells(tuple(oval), tuple(ends)))
    return out


@dataclass(frozen=True, eq=True)
class Foam:
    base: RealBase
    components: tuple[ComponentCover, ...]
    graph: GeneralizedGraph
    gluing: tuple[tuple[Walk, ...], ...]
    report: FoamReport = field(compare=False, default=None, repr=False)

    @property
    def classification(self) -> str:
        return self.report.classification


def make_foam(base: RealBase, comps: Sequence[ComponentCover], graph: GeneralizedGraph,
              gluing: Sequence[Sequence[Walk]]) -> Foam:
    for c in comps:
        if c.lift is None:
            raise ValueError("foam components need chosen lifts")
    gl = tuple(tuple(tuple(tuple(step) for step in walk) for walk in comp) for comp in gluing)
    f = Foam(base, tuple(comps), graph, gl)
    object.__setattr__(f, "report", check_foam_conditions(f))
    return f


def _step_ends(graph: GeneralizedGraph, step: Step):
    """(start vertex, end vertex, start edge-end node, end edge-end node) of a step."""
    eid, direction, _ = step
    uv = graph.edge(eid)
    if uv is None:
        return None
    u, v = uv if direction > 0 else uv[::-1]
    start = (eid, 0 if direction > 0 else 1)
    end = (eid, 1 if direction > 0 else 0)
    return u, v, start, end


def check_foam_conditions(f: Foam) -> FoamReport:
    g = f.graph
    msgs: list[str] = []
    greport = validate_graph(g)
    if not greport.ok:
        msgs.append(f"graph invalid: self-loops {greport.self_loops}, duplicate ids "
                    f"{greport.duplicate_ids}, unknown vertices {greport.unknown_vertices}")
    circles = set(g.circles)
    edge_ids = {e for e, _, _ in g.edges}
    ovals = [component_ovals(c) for c in f.components]

    well_formed = len(f.gluing) == len(f.components)
    for i, (walks, ov) in enumerate(zip(f.gluing, ovals)):
        if len(walks) != len(ov):
            well_formed = False
            msgs.append(f"component {i + 1}: {len(walks)} walks for {len(ov)} ovals")
            continue
        for o, (walk, cells) in enumerate(zip(walks, ov)):
            if not walk or sum(s[2] for s in walk) != len(cells.cells) or any(s[2] < 1 for s in walk):
                well_formed = False
                msgs.append(f"component {i + 1} oval {o + 1}: spans do not cover the oval")
            for s in walk:
                if s[0] not in edge_ids and s[0] not in circles:
                    well_formed = False
                    msgs.append(f"component {i + 1} oval {o + 1}: unknown graph element {s[0]!r}")
                if s[1] not in (1, -1):
                    well_formed = False
                    msgs.append(f"component {i + 1} oval {o + 1}: bad direction {s[1]!r}")
    if not well_formed:
        return FoamReport(greport.ok, False, False, False, False, False, False, msgs)

    # (a) the image is the whole graph
    used = {s[0] for walks in f.gluing for walk in walks for s in walk}
    touched = {x for e, u, v in g.edges if e in used for x in (u, v)}
    missing = [x for x in g.element_ids if x not in used] + [v for v in g.vertices if v not in touched]
    cond_a = not missing
    if missing:
        msgs.append(f"(a) graph elements outside the image: {missing}")

    # (b) each oval maps homeomorphically onto a circle of the graph
    cond_b = True
    for i, walks in enumerate(f.gluing):
        for o, walk in enumerate(walks):
            problem = None
            if any(s[0] in circles for s in walk):
                if len(walk) != 1:
                    problem = "an isolated circle must be the whole walk"
            else:
                elems = [s[0] for s in walk]
                ends = [_step_ends(g, s) for s in walk]
                if len(set(elems)) != len(elems):
                    problem = "walk repeats an edge"
                elif any(ends[k][1] != ends[(k + 1) % len(ends)][0] for k in range(len(ends))):
                    problem = "walk is not closed"
                elif len({e[0] for e in ends}) != len(ends):
                    problem = "walk repeats a vertex"
            if problem:
                cond_b = False
                msgs.append(f"(b) component {i + 1} oval {o + 1}: {problem}")

    # (c) at most one preimage component of each open edge per surface component
    cond_c = True
    for i, walks in enumerate(f.gluing):
        hits = Counter(s[0] for walk in walks for s in walk)
        for eid, count in sorted(hits.items()):
            if count > 1:
                cond_c = False
                msgs.append(f"(c) component {i + 1} has {count} preimage arcs over {eid!r}")

    # (d) punctured neighbourhoods of graph vertices are connected
    cond_d = True
    for v in g.vertices:
        nodes = {("end", e, 0) for e, u, w in g.edges if u == v}
        nodes |= {("end", e, 1) for e, u, w in g.edges if w == v}
        links = []
        for i, (walks, ov) in enumerate(zip(f.gluing, ovals)):
            for walk, cells in zip(walks, ov):
                if walk[0][0] in circles:
                    continue
                pos = 0
                for k, s in enumerate(walk):
                    pos += s[2]
                    _, end_v, _, end_node = _step_ends(g, s)
                    if end_v != v:
                        continue
                    point = ("pt", i, cells.ends[pos - 1])
                    nodes.add(point)
                    links.append((point, ("end",) + end_node))
                    nxt_start, _, start_node, _ = _step_ends(g, walk[(k + 1) % len(walk)])
                    # an unclosed walk is already a (b) failure
                    if nxt_start == v:
                        links.append((point, ("end",) + start_node))
        if not nodes or _components(nodes, links) != 1:
            cond_d = False
            msgs.append(f"(d) punctured neighbourhood of vertex {v!r} is disconnected")

    # connectedness of the glued space
    nodes = {("S", i) for i in range(len(f.components))} | {("g", x) for x in g.vertices}
    nodes |= {("g", x) for x in g.element_ids}
    links = [(("g", e), ("g", x)) for e, u, w in g.edges for x in (u, w)]
    links += [(("S", i), ("g", s[0])) for i, walks in enumerate(f.gluing)
              for walk in walks for s in walk]
    connected = _components(nodes, links) == 1
    if not connected:
        msgs.append("glued space is disconnected")
    return FoamReport(greport.ok, True, cond_a, cond_b, cond_c, cond_d, connected, msgs)


def _components(nodes, links) -> int:
    parent = {x: x for x in nodes}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, b in links:
        parent[find(a)] = find(b)
    return len({find(x) for x in nodes})


def _check_admissible(comps: Sequence[ComponentCover]) -> None:
    for k, c in enumerate(comps):
        if c.lift is None:
            raise ValueError(f"component {c.name or k + 1} has no lift")
        why = admissibility_diagnosis(c)
        if why is not None:
            raise InadmissibleComponentError(c.name or str(k + 1), why)


def compressed_graph(m: int) -> GeneralizedGraph:
    if m == 0:
        return GeneralizedGraph((), (), ("c",))
    vs = tuple(f"b{j}" for j in range(1, m + 1))
    es = tuple((f"e{j}", f"b{j}", f"b{j % m + 1}") for j in range(1, m + 1))
    return GeneralizedGraph(vs, es)


def assemble_compressed(base: RealBase, comps: Sequence[ComponentCover]) -> Foam:
    """The compressed (pseudo)foam: the base real locus cut at the critical values.

    Branch points where no component ramifies are not critical values and are
    erased, so the result lives over the reduced base.
    """
    comps = list(comps)
    for c in comps:
        if c.n != base.n:
            raise ValueError("component does not match the base")
    _check_admissible(comps)
    reduced, keep = drop_unramified(comps)
    m = len(keep)
    graph = compressed_graph(m)
    gluing = []
    for c in reduced:
        walks = []
        for oval in count_ovals(c, c.lift).ovals:
            if m == 0:
                walks.append((("c", 1, len(oval)),))
            else:
                walks.append(tuple((f"e{j}", direction, 1) for (j, _), direction in oval))
        gluing.append(tuple(walks))
    return make_foam(RealBase(m), reduced, graph, gluing)


def _base_image(f: Foam) -> dict:
    """Oriented arc sequence of every graph element, checked for consistency."""
    images: dict = {}
    for i, (walks, ov) in enumerate(zip(f.gluing, [component_ovals(c) for c in f.components])):
        for walk, cells in zip(walks, ov):
            pos = 0
            for eid, direction, span in walk:
                arcs = [(j, d) for (j, _), d in cells.cells[pos:pos + span]]
                pos += span
                if direction < 0:
                    arcs = [(j, -d) for j, d in reversed(arcs)]
                if eid in f.graph.circles:
                    # a circle has no start; compare up to rotation
                    k = arcs.index(min(arcs))
                    arcs = arcs[k:] + arcs[:k]
                prev = images.setdefault(eid, arcs)
                if prev != arcs:
                    raise ValueError(f"graph element {eid!r} has inconsistent base images "
                                     f"{prev} and {arcs}")
    return images


def compress(f: Foam) -> Foam:
    """Identify graph points with equal base image."""
    _base_image(f)
    return assemble_compressed(f.base, f.components)


@dataclass(frozen=True)
class Expansion:
    """A graph surjection onto the foam's graph together with lifted walks.

    ``walks[i][o]`` lists the new graph element of each step of the existing
    walk of oval ``o`` of component ``i``; spans are inherited.
    """

    graph: GeneralizedGraph
    vertex_map: Mapping[str, str]
    edge_map: Mapping[str, str]
    walks: tuple


def identity_expansion(f: Foam) -> Expansion:
    g = f.graph
    return Expansion(g, {v: v for v in g.vertices}, {e: e for e in g.element_ids},
                     tuple(tuple(tuple(s[0] for s in walk) for walk in walks) for walks in f.gluing))


def expand(f: Foam, expansion: Expansion) -> Foam:
    g, new = f.graph, expansion.graph
    rep = validate_graph(new)
    if not rep.ok:
        raise ExpansionError("expanded graph is not a generalized graph")
    vmap, emap = dict(expansion.vertex_map), dict(expansion.edge_map)
    if set(vmap) != set(new.vertices) or set(emap) != set(new.element_ids):
        raise ExpansionError("vertex and edge maps must be defined on the whole expanded graph")
    orient: dict[str, int] = {}
    for e, u, w in new.edges:
        target = g.edge(emap[e])
        if target is None:
            raise ExpansionError(f"edge {e!r} must map to an edge")
        if (vmap[u], vmap[w]) == target:
            orient[e] = 1
        elif (vmap[w], vmap[u]) == target:
            orient[e] = -1
        else:
            raise ExpansionError(f"edge {e!r} does not map compatibly onto {emap[e]!r}")
    for cid in new.circles:
        if emap[cid] not in g.circles:
            raise ExpansionError(f"circle {cid!r} must map to a circle")
        orient[cid] = 1
    lost = ([v for v in g.vertices if v not in set(vmap.values())]
            + [x for x in g.element_ids if x not in set(emap.values())])
    if lost:
        raise ExpansionError(f"surjectivity violated, nothing maps onto {lost}")
    if len(expansion.walks) != len(f.gluing):
        raise ExpansionError("walk data does not match the components")
    gluing = []
    for i, (walks, new_walks) in enumerate(zip(f.gluing, expansion.walks)):
        if len(walks) != len(new_walks):
            raise ExpansionError(f"component {i + 1}: walk count mismatch")
        comp = []
        for walk, elems in zip(walks, new_walks):
            if len(walk) != len(elems):
                raise ExpansionError(f"component {i + 1}: walk length mismatch")
            steps = []
            for (eid, direction, span), e2 in zip(walk, elems):
                if e2 not in emap or emap[e2] != eid:
                    raise ExpansionError(f"step on {e2!r} does not map to {eid!r}; "
                                         f"the walks do not commute with the surjection")
                steps.append((e2, direction * orient[e2], span))
            comp.append(tuple(steps))
        gluing.append(tuple(comp))
    return make_foam(f.base, f.components, new, gluing)


# -- weak isomorphism ------------------------------------------------------

def _cover_key(c: ComponentCover) -> tuple:
    key = canonical_conjugate(c.monodromy + (c.lift,))
    return (c.degree,) + tuple(p.images for p in key)


def _relabelings(comps: list[ComponentCover], allow_reflection: bool):
    variants = [comps]
    if allow_reflection:
        variants.append([reflect_base(c) for c in comps])
    for start in variants:
        cur = start
        for _ in range(max(1, cur[0].n if cur else 1)):
            yield cur
            cur = [rotate_base(c) for c in cur]


def weak_iso(f1: Foam, f2: Foam, allow_reflection: bool = False,
             max_components: int = 6, max_degree: int = 8) -> bool:
    """Are the compressings isomorphic?

    Compressed graphs are cycles over the reduced base, so the candidate
    graph isomorphisms are its rotations (plus reflections if allowed); for
    each, components are matched up to simultaneous conjugation of monodromy
    and lift.
    """
    for f in (f1, f2):
        if len(f.components) > max_components or any(c.degree > max_degree for c in f.components):
            raise LimitError("weak isomorphism search limited to "
                             f"{max_components} components of degree <= {max_degree}")
    c1, c2 = compress(f1), compress(f2)
    if c1.base.n != c2.base.n or len(c1.components) != len(c2.components):
        return False
    target = sorted(_cover_key(c) for c in c1.components)
    for comps in _relabelings(list(c2.components), allow_reflection):
        if sorted(_cover_key(c) for c in comps) == target:
            return True
    return False
