"""Permutations, free-group words and finite image groups.

Conventions used everywhere in foamlab:

* points are 1-based;
* ``p * q`` applies ``p`` first and then ``q`` (left-to-right), so
  ``(p * q)(i) == q(p(i))``;
* an element of an image group is a single :class:`Permutation` on the
  disjoint union of the blocks, block ``i`` occupying points
  ``offset_i + 1 .. offset_i + d_i``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field
from math import lcm
from typing import Iterable, Sequence

from .errors import InconsistentLiftError, LimitError, ParseError

DEFAULT_ELEMENT_CAP = 20000

Word = tuple  # tuple of signed generator indices, e.g. (1, -2, -1)


class Permutation:
    """An immutable permutation of ``{1..d}`` stored as its image array."""

    __slots__ = ("images", "_hash")

    def __init__(self, images: Iterable[int]):
        images = tuple(int(x) for x in images)
        if not images:
            raise ValueError("a permutation needs degree >= 1")
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"not a bijection on 1..{len(images)}: {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def _raw(cls, images: tuple) -> Permutation:
        p = object.__new__(cls)
        p.images = images
        p._hash = hash(images)
        return p

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(range(1, degree + 1))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        images = list(range(1, degree + 1))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 1 <= a <= degree or a in seen:
                    raise ValueError(f"bad cycle {tuple(cyc)} for degree {degree}")
                seen.add(a)
            for a, b in zip(cyc, tuple(cyc[1:]) + tuple(cyc[:1])):
                images[a - 1] = b
        return cls(images)

    @classmethod
    def parse(cls, text: str, degree: int) -> Permutation:
        """Parse cycle notation such as ``"(1 2 3)(4 5)"``, ``"(1,2)"`` or ``"()"``."""
        s = text.strip()
        if s in ("", "()", "id", "e"):
            return cls.identity(degree)
        if not re.fullmatch(r"(\(\s*\d+(\s*[ ,]\s*\d+)*\s*\)\s*)+", s):
            raise ParseError(f"malformed cycle string {text!r}")
        cycles = [tuple(int(x) for x in re.split(r"[ ,]+", body.strip()))
                  for body in re.findall(r"\(([^)]*)\)", s)]
        try:
            return cls.from_cycles(cycles, degree)
        except ValueError as exc:
            raise ParseError(f"cycle string {text!r}: {exc}") from None

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: Permutation) -> Permutation:
        if not isinstance(other, Permutation):
            return NotImplemented
        if len(other.images) != len(self.images):
            raise ValueError(f"degree mismatch: {self.degree} vs {other.degree}")
        q = other.images
        return Permutation._raw(tuple(q[i - 1] for i in self.images))

    def __invert__(self) -> Permutation:
        inv = [0] * len(self.images)
        for i, a in enumerate(self.images, 1):
            inv[a - 1] = i
        return Permutation._raw(tuple(inv))

    def __pow__(self, k: int) -> Permutation:
        base = self if k >= 0 else ~self
        result = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            result = result * base
        return result

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash

    def is_identity(self) -> bool:
        return all(a == i for i, a in enumerate(self.images, 1))

    def cycles(self, include_fixed: bool = False) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cyc = [start]
            seen.add(start)
            a = self(start)
            while a != start:
                cyc.append(a)
                seen.add(a)
                a = self(a)
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def cycle_count(self) -> int:
        return len(self.cycles(include_fixed=True))

    def order(self) -> int:
        return lcm(*(len(c) for c in self.cycles(include_fixed=True)))

    def fixed_points(self) -> list[int]:
        return [i for i, a in enumerate(self.images, 1) if a == i]

    def cycle_string(self) -> str:
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()}, degree={self.degree})"


def compose(p: Permutation, q: Permutation) -> Permutation:
    """Apply ``p`` then ``q``."""
    return p * q


def join_blocks(perms: Sequence[Permutation]) -> Permutation:
    """Place permutations side by side on the disjoint union of their supports."""
    images = []
    offset = 0
    for p in perms:
        images.extend(a + offset for a in p.images)
        offset += p.degree
    return Permutation._raw(tuple(images))


def split_blocks(g: Permutation, degrees: Sequence[int]) -> tuple[Permutation, ...]:
    out = []
    offset = 0
    for d in degrees:
        out.append(Permutation._raw(tuple(a - offset for a in g.images[offset:offset + d])))
        offset += d
    return tuple(out)


def canonical_conjugate(perms: Sequence[Permutation]) -> tuple[Permutation, ...]:
    """Canonical representative of a transitive tuple under simultaneous conjugation.

    Points are relabelled in breadth-first discovery order from each possible
    start point; the lexicographically smallest relabelled tuple wins.
    """
    perms = tuple(perms)
    if not perms:
        return perms
    d = perms[0].degree
    best = None
    for start in range(1, d + 1):
        label = {start: 1}
        order = [start]
        for a in order:
            for p in perms:
                b = p(a)
                if b not in label:
                    label[b] = len(label) + 1
                    order.append(b)
        if len(label) != d:
            raise ValueError("canonical_conjugate needs a transitive tuple")
        key = tuple(tuple(label[p(a)] for a in order) for p in perms)
        if best is None or key < best:
            best = key
    return tuple(Permutation._raw(k) for k in best)


# -- free group words ------------------------------------------------------

@dataclass(frozen=True)
class FreeGroupContext:
    """Free group on x_1..x_n with the product x_1 x_2 ... x_n marked trivial."""

    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("n must be >= 0")

    @property
    def relation(self) -> Word:
        return tuple(range(1, self.n + 1))

    def generator(self, j: int) -> Word:
        self.check((j,))
        return (j,)

    def check(self, w: Word) -> None:
        for a in w:
            if a == 0 or abs(a) > self.n:
                raise ValueError(f"generator index {a} out of range 1..{self.n}")


def free_reduce(w: Iterable[int]) -> Word:
    out: list[int] = []
    for a in w:
        if out and out[-1] == -a:
            out.pop()
        else:
            out.append(a)
    return tuple(out)


def word_inverse(w: Word) -> Word:
    return tuple(-a for a in reversed(w))


def word_image(w: Word, assignment: Sequence[Permutation]) -> Permutation:
    """Evaluate a word homomorphically; ``x_j`` maps to ``assignment[j-1]``."""
    if not assignment:
        if w:
            raise ValueError("non-empty word with empty assignment")
        raise ValueError("cannot infer degree from an empty assignment")
    degree = assignment[0].degree
    if any(p.degree != degree for p in assignment):
        raise ValueError("assignment permutations must share a degree")
    result = Permutation.identity(degree)
    inverses: dict[int, Permutation] = {}
    for a in w:
        if a == 0 or abs(a) > len(assignment):
            raise ValueError(f"generator index {a} out of range 1..{len(assignment)}")
        if a > 0:
            result = result * assignment[a - 1]
        else:
            if a not in inverses:
                inverses[a] = ~assignment[-a - 1]
            result = result * inverses[a]
    return result


# -- image groups ----------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ImageGroup:
    """The image of a block permutation representation, materialized.

    ``elements[0]`` is the identity; ``parents[k] = (m, j)`` records that
    ``elements[k] = elements[m] * generator(j)`` (``j`` 1-based), which gives
    every element a spelling as a positive word in the generators.
    """

    degrees: tuple[int, ...]
    generator_images: tuple[tuple[Permutation, ...], ...]
    elements: tuple[Permutation, ...]
    parents: tuple[tuple[int, int] | None, ...] = field(repr=False)
    _index: dict = field(repr=False, compare=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Permutation:
        return self.elements[0]

    @property
    def generators(self) -> tuple[Permutation, ...]:
        return tuple(join_blocks(g) for g in self.generator_images)

    def index(self, g: Permutation) -> int:
        try:
            return self._index[g]
        except KeyError:
            raise ValueError(f"{g!r} is not an element of the group") from None

    def __contains__(self, g) -> bool:
        return g in self._index

    def block(self, g: Permutation, i: int) -> Permutation:
        return split_blocks(g, self.degrees)[i]

    def word_of(self, k: int) -> Word:
        letters = []
        while self.parents[k] is not None:
            k, j = self.parents[k]
            letters.append(j)
        return tuple(reversed(letters))

    def satisfies_relation(self) -> bool:
        if not self.generator_images:
            return True
        prod = self.identity
        for g in self.generators:
            prod = prod * g
        return prod.is_identity()

    def is_transitive_block(self, i: int) -> bool:
        d = self.degrees[i]
        orbit = {self.block(g, i)(1) for g in self.elements}
        return len(orbit) == d


def group_closure(gens: Sequence[Sequence[Permutation]], degrees: Sequence[int] | None = None,
                  cap: int = DEFAULT_ELEMENT_CAP) -> ImageGroup:
    """Materialize the group generated by block-form generators.

    Breadth-first from the identity, generators tried in index order, so the
    element list is reproducible.  ``degrees`` is only needed when ``gens`` is
    empty (the trivial group).
    """
    gens = tuple(tuple(g) for g in gens)
    if gens:
        degs = tuple(p.degree for p in gens[0])
        for g in gens:
            if tuple(p.degree for p in g) != degs:
                raise ValueError("generators have inconsistent block degrees")
        if degrees is not None and tuple(degrees) != degs:
            raise ValueError("degrees disagree with generator blocks")
    elif degrees is None:
        raise ValueError("empty generator list needs explicit degrees")
    else:
        degs = tuple(degrees)
    flat = [join_blocks(g) for g in gens]
    ident = Permutation.identity(sum(degs))
    elements = [ident]
    parents: list = [None]
    index = {ident: 0}
    queue = deque([0])
    while queue:
        k = queue.popleft()
        g = elements[k]
        for j, x in enumerate(flat, 1):
            h = g * x
            if h not in index:
                if len(elements) >= cap:
                    raise LimitError(f"group closure exceeds element cap {cap}")
                index[h] = len(elements)
                elements.append(h)
                parents.append((k, j))
                queue.append(len(elements) - 1)
    return ImageGroup(degs, gens, tuple(elements), tuple(parents), index)


def point_stabilizer(G: ImageGroup, block: int, point: int = 1) -> list[Permutation]:
    """Elements whose ``block``-th component (0-based) fixes ``point``."""
    if not 0 <= block < len(G.degrees):
        raise ValueError(f"block {block} out of range")
    if not 1 <= point <= G.degrees[block]:
        raise ValueError(f"point {point} out of range for block {block}")
    target = sum(G.degrees[:block]) + point
    return [g for g in G.elements if g(target) == target]


def subgroup_closure(G: ImageGroup, elements: Iterable[Permutation]) -> set[Permutation]:
    gens = []
    for g in elements:
        if g not in G:
            raise ValueError(f"{g!r} is not an element of the ambient group")
        gens.append(g)
    found = {G.identity}
    queue = deque([G.identity])
    while queue:
        g = queue.popleft()
        for x in gens:
            h = g * x
            if h not in found:
                found.add(h)
                queue.append(h)
    return found


def is_generated_by(G: ImageGroup, subgroups: Sequence[Sequence[Permutation]]) -> bool:
    union = [g for sub in subgroups for g in sub]
    return len(subgroup_closure(G, union)) == G.order


def conjugate_in(a: Permutation, b: Permutation, amb: Iterable[Permutation]) -> bool:
    """True iff ``g^-1 a g == b`` for some ``g`` in ``amb`` (brute force)."""
    for g in amb:
        if (~g) * a * g == b:
            return True
    return False


@dataclass(frozen=True)
class InducedAutomorphism:
    """Automorphism ``alpha`` of G as an index table, with the involutive twists.

    ``solutions`` lists the indices of ``h`` with ``alpha(h) * h == identity``;
    each such ``h`` gives an involutive real form on the regular cover.
    """

    table: tuple[int, ...]
    solutions: tuple[int, ...]

    def __call__(self, k: int) -> int:
        return self.table[k]


def induced_automorphism(G: ImageGroup, sigma_words: Sequence[Word]) -> InducedAutomorphism:
    """Extend ``rho(x_j) -> rho(sigma_words[j])`` to an automorphism of G."""
    gens = G.generators
    if len(sigma_words) != len(gens):
        raise ValueError("need one sigma word per generator")
    if not gens:
        return InducedAutomorphism((0,), (0,))
    sig = [word_image(w, gens) for w in sigma_words]
    images: list[Permutation] = [G.identity]
    for k in range(1, G.order):
        m, j = G.parents[k]
        images.append(images[m] * sig[j - 1])
    for k, g in enumerate(G.elements):
        for j, x in enumerate(gens):
            if images[G.index(g * x)] != images[k] * sig[j]:
                raise InconsistentLiftError(
                    "sigma images do not define a homomorphism of the image group "
                    "(two spellings of one element have different images)")
    try:
        table = tuple(G.index(h) for h in images)
    except ValueError:
        raise InconsistentLiftError("sigma images leave the image group") from None
    if len(set(table)) != G.order:
        raise InconsistentLiftError("induced map is not bijective")
    if any(table[table[k]] != k for k in range(G.order)):
        raise InconsistentLiftError("induced automorphism is not an involution")
    sols = tuple(k for k, h in enumerate(G.elements)
                 if (G.elements[table[k]] * h).is_identity())
    return InducedAutomorphism(table, sols)
