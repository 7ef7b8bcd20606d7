from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from foamlab.famforge import build_family, quotient_checks, verify_axioms
from foamlab.permcore import (Permutation, canonical_conjugate, free_reduce, group_closure,
                              induced_automorphism, point_stabilizer, word_image)
from foamlab.realcover import (ComponentCover, RealBase, conjugate_cover, count_ovals, genus_rh,
                               involution_lifts, orbits, ramification_total, realize_cw,
                               sigma_star, sigma_star_word)

from oracles import compose as o_compose

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


def perms(d):
    return st.permutations(list(range(1, d + 1))).map(Permutation)


@st.composite
def words(draw, n, max_len=8):
    return tuple(draw(st.lists(st.integers(1, n).flatmap(lambda j: st.sampled_from((j, -j))),
                               max_size=max_len)))


@st.composite
def transitive_tuples(draw, max_d=4, max_n=4):
    d = draw(st.integers(1, max_d))
    n = draw(st.integers(2, max_n))
    head = [draw(perms(d)) for _ in range(n - 1)]
    acc = Permutation.identity(d)
    for p in head:
        acc = acc * p
    tup = tuple(head) + (~acc,)
    assume(len(orbits(d, tup)) == 1)
    return ComponentCover(d, tup)


@SETTINGS
@given(st.integers(1, 6).flatmap(lambda d: st.tuples(perms(d), perms(d), perms(d))))
def test_compose_associative(triple):
    p, q, r = triple
    assert (p * q) * r == p * (q * r)
    e = Permutation.identity(p.degree)
    assert e * p == p * e == p
    assert (p * q).images == o_compose(p.images, q.images)


@SETTINGS
@given(st.data())
def test_word_image_homomorphism(data):
    n = data.draw(st.integers(1, 4))
    d = data.draw(st.integers(1, 5))
    assignment = tuple(data.draw(perms(d)) for _ in range(n))
    w1, w2 = data.draw(words(n)), data.draw(words(n))
    assert word_image(w1 + w2, assignment) == word_image(w1, assignment) * word_image(w2, assignment)
    assert word_image(free_reduce(w1), assignment) == word_image(w1, assignment)


@SETTINGS
@given(st.data())
def test_sigma_star_involution(data):
    n = data.draw(st.integers(1, 6))
    w = data.draw(words(n))
    assert free_reduce(sigma_star_word(n, sigma_star_word(n, w))) == free_reduce(w)
    for j in range(1, n + 1):
        assert free_reduce(sigma_star_word(n, sigma_star(n, j))) == (j,)


@SETTINGS
@given(transitive_tuples(), st.data())
def test_lift_conjugation_law(c, data):
    for t in involution_lifts(c):
        w = data.draw(words(c.n))
        assert t * word_image(w, c.monodromy) * t == word_image(sigma_star_word(c.n, w), c.monodromy)


@SETTINGS
@given(transitive_tuples())
def test_riemann_hurwitz_matches_cells(c):
    assert ramification_total(c) % 2 == 0
    assert realize_cw(c).genus() == genus_rh(c)


@SETTINGS
@given(transitive_tuples())
def test_harnack_and_fixed_points(c):
    for t in involution_lifts(c):
        k = count_ovals(c, t).k
        assert k <= genus_rh(c) + 1


@SETTINGS
@given(transitive_tuples(max_d=4, max_n=3))
def test_orbit_stabilizer(c):
    G = group_closure([(p,) for p in c.monodromy])
    stab = point_stabilizer(G, 0)
    assert len(stab) * c.degree == G.order
    gens = tuple(G.generators)
    assert all(word_image(G.word_of(k), gens) == G.elements[k] for k in range(G.order))
    assert G.satisfies_relation()


@SETTINGS
@given(transitive_tuples(max_d=4, max_n=4))
def test_alpha_is_involutive_automorphism(c):
    assume(involution_lifts(c))
    G = group_closure([(p,) for p in c.monodromy])
    alpha = induced_automorphism(G, [sigma_star(c.n, j) for j in range(1, c.n + 1)])
    els = G.elements
    for a in range(min(G.order, 12)):
        assert alpha.table[alpha.table[a]] == a
        for b in range(min(G.order, 12)):
            assert els[alpha.table[G.index(els[a] * els[b])]] == \
                els[alpha.table[a]] * els[alpha.table[b]]


@SETTINGS
@given(transitive_tuples(max_d=4, max_n=4), st.data())
def test_canonical_form_invariant(c, data):
    g = data.draw(perms(c.degree))
    moved = conjugate_cover(c, g)
    assert canonical_conjugate(c.monodromy) == canonical_conjugate(moved.monodromy)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(transitive_tuples(max_d=3, max_n=4))
def test_family_identities(c):
    assume(involution_lifts(c))
    F = build_family(RealBase(c.n), [c])
    assert F.order == c.degree * F.subgroup_orders[0]
    assert F.genera[0] <= (F.hat_genus - 1) / F.subgroup_orders[0] + 1
    assert F.hat_ovals[0] <= F.hat_genus + 1
    rep = quotient_checks(F)
    if verify_axioms(F).ok:
        assert rep.holds
