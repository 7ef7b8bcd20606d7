"""Independent reference computations used to freeze derived values.

None of these touch foamlab's cell complex or group code.  Permutations are
plain 1-based image tuples, composed left to right.
"""
from __future__ import annotations

from collections import deque


def compose(p, q):
    return tuple(q[p[i] - 1] for i in range(len(p)))


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x - 1] = i + 1
    return tuple(out)


def ident(d):
    return tuple(range(1, d + 1))


def word_value(perms, word, d):
    """Evaluate a signed 1-based word on image tuples."""
    acc = ident(d)
    for letter in word:
        p = perms[abs(letter) - 1]
        acc = compose(acc, p if letter > 0 else inverse(p))
    return acc


class _DSU:
    def __init__(self):
        self.parent = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


# -- refined triangulation ---------------------------------------------------

class Triangulation:
    """The cover pulled back from a fan triangulation of the base sphere.

    Base: the real circle through ``b_1..b_n`` with a midpoint ``m_j`` on each
    arc, poles N (upper hemisphere) and S.  Every arc half spans one upper
    and one lower triangle.  Upper sheet ``i`` meets lower sheet
    ``gamma_j(i)`` across arc ``j``, with ``gamma_j`` the value of the word
    ``x_{j+1} .. x_n``, so lower sheets are named by crossing arc ``n``.
    """

    def __init__(self, degree, perms, lift=None):
        perms = [tuple(p) for p in perms]
        # pad with unramified marked points so the fan is a genuine complex
        while len(perms) < 2:
            perms.append(ident(degree))
        self.d, self.n, self.perms = degree, len(perms), perms
        n = self.n
        self.gamma = [None] + [word_value(perms, list(range(j + 1, n + 1)), degree)
                               for j in range(1, n + 1)]
        # base triangles: (hemisphere, j, half) with labelled edges
        self.tris = [(h, j, k) for h in "US" for j in range(1, n + 1) for k in (1, 2)]
        self.adj = self._adjacency()
        self.vertex_of = self._vertices()
        self.tau = self._propagate(lift) if lift is not None else None

    def tri_edges(self, tri):
        h, j, k = tri
        nxt = j % self.n + 1
        pole = "N" if h == "U" else "S"
        if k == 1:
            return [((pole, "b", j), (pole, "b"), ("b", j)), (("arc", j, 1), ("b", j), ("m", j)),
                    ((pole, "m", j), (pole, "m"), ("m", j))]
        return [((pole, "m", j), (pole, "m"), ("m", j)), (("arc", j, 2), ("m", j), ("b", nxt)),
                ((pole, "b", nxt), (pole, "b"), ("b", nxt))]

    def crossing(self, tri, label, s):
        """Neighbouring cover triangle across edge ``label`` of ``(tri, s)``."""
        h, j, k = tri
        if label[0] == "arc":
            if h == "U":
                return ("S", j, k), self.gamma[j][s - 1]
            return ("U", j, k), inverse(self.gamma[j])[s - 1]
        _, kind, idx = label
        if kind == "m":
            return (h, j, 2 if k == 1 else 1), s
        # radial edge to b_idx, shared by half 1 of arc idx and half 2 of arc idx-1
        if k == 1:
            return (h, (j - 2) % self.n + 1, 2), s
        return (h, j % self.n + 1, 1), s

    def _adjacency(self):
        adj = {}
        for tri in self.tris:
            for s in range(1, self.d + 1):
                for label, _, _ in self.tri_edges(tri):
                    adj[(tri, s, label)] = self.crossing(tri, label, s)
        # gluing must be symmetric
        for (tri, s, label), (t2, s2) in adj.items():
            assert adj[(t2, s2, label)] == (tri, s), "asymmetric gluing"
        return adj

    def _vertices(self):
        dsu = _DSU()
        for tri in self.tris:
            for s in range(1, self.d + 1):
                for label, a, b in self.tri_edges(tri):
                    t2, s2 = self.adj[(tri, s, label)]
                    for v in (a, b):
                        dsu.union((tri, s, self._norm(v)), (t2, s2, self._norm(v)))
        return dsu

    @staticmethod
    def _norm(v):
        return v if v[0] not in ("N", "S") else (v[0],)

    def vertex_classes(self):
        classes = set()
        for tri in self.tris:
            for s in range(1, self.d + 1):
                for _, a, b in self.tri_edges(tri):
                    for v in (a, b):
                        classes.add((self._norm(v), self.vertex_of.find((tri, s, self._norm(v)))))
        return classes

    def euler_characteristic(self):
        V = len({c for _, c in self.vertex_classes()})
        F = len(self.tris) * self.d
        E = 3 * F // 2
        return V - E + F

    def vertices_over(self, base_vertex):
        return len({c for v, c in self.vertex_classes() if v == base_vertex})

    def connected(self):
        seen = {(self.tris[0], 1)}
        todo = [(self.tris[0], 1)]
        while todo:
            tri, s = todo.pop()
            for label, _, _ in self.tri_edges(tri):
                nb = self.adj[(tri, s, label)]
                if nb not in seen:
                    seen.add(nb)
                    todo.append(nb)
        return len(seen) == len(self.tris) * self.d

    @staticmethod
    def _conj(tri):
        h, j, k = tri
        return ("S" if h == "U" else "U", j, k)

    @staticmethod
    def _conj_label(label):
        if label[0] == "arc":
            return label
        return ("S" if label[0] == "N" else "N",) + label[1:]

    def _propagate(self, lift):
        """Extend the involution from one triangle; raises if it does not close up."""
        start = ("U", self.n, 2)
        tau = {}
        todo = deque()
        lower = ("S", self.n, 2)
        for s in range(1, self.d + 1):
            # lower sheets are named across arc n, where gamma_n is the identity
            tau[(start, s)] = (lower, lift[s - 1])
        todo.extend(tau)
        while todo:
            x = todo.popleft()
            y = tau[x]
            for label, _, _ in self.tri_edges(x[0]):
                x2 = self.adj[(x[0], x[1], label)]
                y2 = self.adj[(y[0], y[1], self._conj_label(label))]
                if x2 in tau:
                    if tau[x2] != y2:
                        raise ValueError("lift does not extend to an involution of the cover")
                else:
                    tau[x2] = y2
                    todo.append(x2)
        for x, y in tau.items():
            if tau[y] != x:
                raise ValueError("propagated map is not an involution")
        return tau

    def ovals(self):
        """Flood-fill the fixed one-skeleton; returns a list of arc multisets."""
        fixed = []
        for j in range(1, self.n + 1):
            for k in (1, 2):
                up = ("U", j, k)
                for s in range(1, self.d + 1):
                    other = self.adj[(up, s, ("arc", j, k))]
                    if self.tau[(up, s)] == other:
                        a, b = self.tri_edges(up)[1][1:]
                        ends = [self.vertex_of.find((up, s, a)), self.vertex_of.find((up, s, b))]
                        fixed.append(((j, k), ends))
        dsu = _DSU()
        for idx, (_, ends) in enumerate(fixed):
            dsu.union(("e", idx), ends[0])
            dsu.union(("e", idx), ends[1])
        groups = {}
        for idx, (arc, _) in enumerate(fixed):
            groups.setdefault(dsu.find(("e", idx)), []).append(arc)
        return list(groups.values())

    def oval_count(self):
        return len(self.ovals())

    def admissible(self):
        """Every oval passes over each arc half exactly once."""
        want = sorted((j, k) for j in range(1, self.n + 1) for k in (1, 2))
        return all(sorted(o) == want for o in self.ovals())


def triangulation_genus(degree, perms):
    tri = Triangulation(degree, perms)
    chi = tri.euler_characteristic()
    assert chi % 2 == 0
    return (2 - chi) // 2


# -- groups --------------------------------------------------------------------

def brute_force_order(gens, max_len=40):
    """Grow products of generators and inverses by word length until a level adds nothing."""
    d = len(gens[0])
    letters = list(gens) + [inverse(g) for g in gens]
    seen = {ident(d)}
    frontier = [ident(d)]
    for _ in range(max_len):
        new = []
        for w in frontier:
            for g in letters:
                x = compose(w, g)
                if x not in seen:
                    seen.add(x)
                    new.append(x)
        if not new:
            return len(seen)
        frontier = new
    raise RuntimeError("closure did not stabilise")


def coset_core_index(blocks, n, max_word=12):
    """Index of the intersection of all point stabilisers of the block actions.

    ``blocks`` is a list of monodromy tuples (one per component).  The coset
    table of the stabiliser of a point is its Schreier graph; a coset of the
    intersection is the tuple of cosets it lies in, one per (block, root).
    Breadth-first search over these signatures, truncated at ``max_word``
    letters, must close up: every table lookup from a found signature lands
    on a found signature.  Returns None when the truncation is hit.
    """
    tables = []
    for perms in blocks:
        d = len(perms[0])
        for root in range(1, d + 1):
            table = {}
            for pt in range(1, d + 1):
                for j in range(1, n + 1):
                    table[(pt, j)] = perms[j - 1][pt - 1]
                    table[(pt, -j)] = inverse(perms[j - 1])[pt - 1]
            tables.append((root, table))
    start = tuple(root for root, _ in tables)
    depth = {start: 0}
    queue = deque([start])
    letters = [j for j in range(1, n + 1)] + [-j for j in range(1, n + 1)]
    while queue:
        sig = queue.popleft()
        if depth[sig] >= max_word:
            continue
        for a in letters:
            nxt = tuple(tab[(c, a)] for c, (_, tab) in zip(sig, tables))
            if nxt not in depth:
                depth[nxt] = depth[sig] + 1
                queue.append(nxt)
    # closure certificate
    for sig in depth:
        for a in letters:
            nxt = tuple(tab[(c, a)] for c, (_, tab) in zip(sig, tables))
            if nxt not in depth:
                return None
    return len(depth)
