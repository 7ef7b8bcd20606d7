import pytest

from foamlab.errors import ExpansionError, InadmissibleComponentError, LimitError
from foamlab.foamkit import (Expansion, GeneralizedGraph, assemble_compressed, compress,
                             compressed_graph, expand, identity_expansion, make_foam,
                             validate_graph, weak_iso)
from foamlab.permcore import Permutation
from foamlab.realcover import (ComponentCover, RealBase, conjugate_cover, involution_lifts,
                               reflect_base, rotate_base)

from conftest import hyperelliptic, perm, trigonal_a, trigonal_b, with_default_lift


def e9_foam():
    return assemble_compressed(RealBase(4), [with_default_lift(trigonal_a()),
                                             with_default_lift(trigonal_b())])


def two_oval_component():
    mono = tuple(perm(s, 4) for s in ("(2 3 4)", "(2 4 3)", "(1 2 3)", "(1 3 2)"))
    return ComponentCover(4, mono, perm("(2 3)", 4), "W")


def test_validate_graph_examples():
    assert validate_graph(GeneralizedGraph((), (), ("c",))).ok
    assert validate_graph(compressed_graph(4)).ok
    loop = validate_graph(GeneralizedGraph(("v",), (("e", "v", "v"),)))
    assert loop.self_loops == ["e"] and not loop.ok
    dup = validate_graph(GeneralizedGraph(("v", "w"), (("v", "v", "w"),)))
    assert dup.duplicate_ids == ["v"]
    multi = GeneralizedGraph(("v", "w"), (("e", "v", "w"), ("f", "v", "w")))
    assert validate_graph(multi).ok


def test_omega0_is_foam():
    f = assemble_compressed(RealBase(0), [ComponentCover(1, (), Permutation.identity(1))])
    assert f.graph.circles == ("c",) and not f.graph.vertices
    assert f.gluing == (((("c", 1, 1),),),)
    assert f.classification == "foam"
    assert compress(f) == f


def test_e9_compressed_foam():
    f = e9_foam()
    assert [e for e, _, _ in f.graph.edges] == ["e1", "e2", "e3", "e4"]
    rep = f.report
    assert rep.a and rep.b and rep.c and rep.d and rep.connected
    assert f.classification == "foam"
    # each component's single oval walks the full cycle
    assert all(len(walks) == 1 and len(walks[0]) == 4 for walks in f.gluing)


def test_duplicate_component_still_foam():
    A = with_default_lift(trigonal_a())
    f = assemble_compressed(RealBase(4), [A, A])
    assert f.classification == "foam"


def test_inadmissible_rejected_with_diagnosis():
    h = hyperelliptic()
    h = h.with_lift(involution_lifts(h)[0])
    with pytest.raises(InadmissibleComponentError, match="axiom 5") as info:
        assemble_compressed(RealBase(6), [h])
    assert info.value.name == "H"


def test_missing_lift_rejected():
    with pytest.raises(ValueError):
        assemble_compressed(RealBase(4), [trigonal_a()])


def test_edge_outside_image_fails_a():
    f = e9_foam()
    g = GeneralizedGraph(f.graph.vertices, f.graph.edges + (("extra", "b1", "b3"),))
    broken = make_foam(f.base, f.components, g, f.gluing)
    assert not broken.report.a
    assert broken.classification == "invalid"


def test_two_ovals_on_one_circle_is_pseudofoam():
    f = assemble_compressed(RealBase(4), [two_oval_component()])
    rep = f.report
    assert rep.a and rep.b and rep.d and rep.connected and not rep.c
    assert f.classification == "pseudofoam"


def test_walk_repeating_an_edge_fails_b():
    f = e9_foam()
    walks = ((("e1", 1, 1), ("e1", 1, 1), ("e3", 1, 1), ("e4", 1, 1)),)
    broken = make_foam(f.base, f.components, f.graph, (walks, f.gluing[1]))
    assert not broken.report.b


def test_malformed_gluing_is_invalid():
    f = e9_foam()
    broken = make_foam(f.base, f.components, f.graph, (f.gluing[0],))
    assert not broken.report.well_formed and broken.classification == "invalid"


def test_compress_idempotent():
    for f in (e9_foam(), assemble_compressed(RealBase(4), [two_oval_component()])):
        once = compress(f)
        assert compress(once) == once == f


def test_compress_erases_unramified_points():
    a, e = perm("(1 2 3)", 3), Permutation.identity(3)
    c = ComponentCover(3, (a, e, ~a, e))
    c = c.with_lift(involution_lifts(c)[0])
    f = assemble_compressed(RealBase(4), [c])
    assert f.base.n == 2 and len(f.graph.edges) == 2
    assert f.classification == "foam"


def parallel_edge_expansion(f):
    g = GeneralizedGraph(("b1", "b2", "b3", "b4"),
                         (("e1x", "b1", "b2"), ("e1y", "b1", "b2"), ("e2", "b2", "b3"),
                          ("e3", "b3", "b4"), ("e4", "b4", "b1")))
    return Expansion(g, {v: v for v in g.vertices},
                     {"e1x": "e1", "e1y": "e1", "e2": "e2", "e3": "e3", "e4": "e4"},
                     ((("e1x", "e2", "e3", "e4"),), (("e1y", "e2", "e3", "e4"),)))


def test_identity_expansion():
    f = e9_foam()
    assert expand(f, identity_expansion(f)) == f


def test_parallel_edge_expansion_is_foam():
    f = e9_foam()
    big = expand(f, parallel_edge_expansion(f))
    assert big.classification == "foam"
    assert big != f
    assert compress(big) == f
    assert weak_iso(big, f)


def test_two_circle_expansion_is_disconnected():
    f = e9_foam()
    vs = tuple(f"b{j}{s}" for s in "xy" for j in range(1, 5))
    es = tuple((f"e{j}{s}", f"b{j}{s}", f"b{j % 4 + 1}{s}") for s in "xy" for j in range(1, 5))
    g = GeneralizedGraph(vs, es)
    ex = Expansion(g, {v: v[:-1] for v in vs}, {e: e[:-1] for e, _, _ in es},
                   ((tuple(f"e{j}x" for j in range(1, 5)),), (tuple(f"e{j}y" for j in range(1, 5)),)))
    big = expand(f, ex)
    rep = big.report
    assert rep.a and rep.b and rep.c and rep.d
    assert not rep.connected
    assert compress(big) == f


def test_expansion_dropping_an_edge():
    f = e9_foam()
    g = GeneralizedGraph(f.graph.vertices, f.graph.edges[:3])
    ex = Expansion(g, {v: v for v in g.vertices}, {e: e for e, _, _ in g.edges},
                   identity_expansion(f).walks)
    with pytest.raises(ExpansionError, match="defined on the whole|surjectivity"):
        expand(f, ex)


def test_expansion_not_surjective():
    f = e9_foam()
    # map both new edges onto e1 and leave e2 uncovered
    g = GeneralizedGraph(("b1", "b2", "b3", "b4"),
                         (("e1", "b1", "b2"), ("e3", "b3", "b4"), ("e4", "b4", "b1")))
    ex = Expansion(g, {v: v for v in g.vertices}, {"e1": "e1", "e3": "e3", "e4": "e4"},
                   identity_expansion(f).walks)
    with pytest.raises(ExpansionError, match="surjectivity violated"):
        expand(f, ex)


def test_expansion_not_commuting():
    f = e9_foam()
    ex = parallel_edge_expansion(f)
    bad = Expansion(ex.graph, ex.vertex_map, ex.edge_map,
                    ((("e2", "e1x", "e3", "e4"),), ex.walks[1]))
    with pytest.raises(ExpansionError, match="commute"):
        expand(f, bad)


def test_weak_iso_examples():
    f = e9_foam()
    assert weak_iso(f, f)
    A, B = f.components
    rotated = assemble_compressed(RealBase(4), [rotate_base(B), rotate_base(A)])
    assert weak_iso(f, rotated) and weak_iso(rotated, f)
    g = perm("(1 2)", 3)
    conj = assemble_compressed(RealBase(4), [conjugate_cover(A, g), B])
    assert weak_iso(f, conj)
    single = assemble_compressed(RealBase(4), [A])
    assert not weak_iso(f, single)


def test_weak_iso_reflection_flag():
    f = e9_foam()
    refl = assemble_compressed(RealBase(4), [reflect_base(c) for c in f.components])
    assert weak_iso(f, refl, allow_reflection=True)
    # E9 is also matched without the flag: reflecting swaps the roles of the
    # arcs but the conjugacy classes recur under a rotation
    assert weak_iso(f, refl)


def test_weak_iso_limits():
    f = e9_foam()
    with pytest.raises(LimitError):
        weak_iso(f, f, max_components=1)


def test_reflection_flag_matters_for_some_pairs():
    # found by sweeping pairs of admissible units at d <= 3, n = 4
    e = "()"
    u = ComponentCover(3, tuple(perm(s, 3) for s in (e, e, "(1 2 3)", "(1 3 2)")), perm("(2 3)", 3))
    v = ComponentCover(3, tuple(perm(s, 3) for s in ("(1 2 3)", "(1 2 3)", e, "(1 2 3)")),
                       perm("(2 3)", 3))
    f = assemble_compressed(RealBase(4), [u, v])
    mirror = assemble_compressed(RealBase(4), [reflect_base(u), reflect_base(v)])
    assert not weak_iso(f, mirror)
    assert weak_iso(f, mirror, allow_reflection=True)
