"""Exact finite Cayley-ball geometry for verified C'(1/6) presentations.

The word problem is Dehn's algorithm (replace any subword that is more than
half of a closure member by the inverse of the complement), which is only
guaranteed correct for C'(1/6) presentations; every operation here refuses
unverified presentations rather than risk a silently wrong answer.

Balls are built layer by layer.  Non-geodesic candidates are folded back by
Dehn reduction; coinciding geodesic candidates are discovered by tracing
relator cycles and merging (Todd-Coxeter style coincidence processing).
Single-face relations between ball words are always traced; multi-face
relations only occur once 2*radius+1 reaches twice the shortest relator
minus twice the longest piece, and beyond that threshold the builder keeps
a margin of extra layers so the cascade still sees every rung.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .smallcancel import check_cprime_lambda, closure, pieces
from .words import Presentation, Word, free_reduce, shortlex_key


class PresentationNotVerified(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class Uncertified(ValueError):
    """The ball cannot certify the requested quantity at this radius."""


CANONICAL_LETTERS_CACHE: dict[int, tuple[int, ...]] = {}


def canonical_letters(n: int) -> tuple[int, ...]:
    """Symmetrized letters in normal-form order: 1, -1, 2, -2, ..."""
    out = CANONICAL_LETTERS_CACHE.get(n)
    if out is None:
        out = tuple(x for k in range(1, n + 1) for x in (k, -k))
        CANONICAL_LETTERS_CACHE[n] = out
    return out


class DehnReducer:
    """Greedy leftmost-longest Dehn reduction over the symmetrized closure."""

    def __init__(self, p: Presentation):
        if p.relators:
            verdict = check_cprime_lambda(p, Fraction(1, 6))
            if not verdict.passed:
                raise PresentationNotVerified(
                    "presentation is not C'(1/6); Dehn's algorithm not applicable"
                )
        self.presentation = p
        # trie over closure members; a node carries the best replacement for
        # the majority prefix ending there (shortest, then shortlex)
        self.root: dict = {}
        for m in closure(p).members:
            half = len(m) / 2
            node = self.root
            for i, x in enumerate(m):
                node = node.setdefault(x, {})
                if i + 1 > half:
                    repl = tuple(-y for y in reversed(m[i + 1 :]))
                    old = node.get(0)
                    if old is None or shortlex_key(repl) < shortlex_key(old):
                        node[0] = repl

    def reduce(self, w: Word) -> Word:
        """Iterate replacements until none applies; empty iff w = 1 in G."""
        w = free_reduce(w)
        root = self.root
        if not root:
            return w
        while True:
            hit = None
            n = len(w)
            for i in range(n):
                node = root
                depth = 0
                best = None
                for j in range(i, n):
                    node = node.get(w[j])
                    if node is None:
                        break
                    depth += 1
                    if 0 in node:
                        best = (depth, node[0])
                if best is not None:
                    hit = (i, best[0], best[1])
                    break
            if hit is None:
                return w
            i, length, repl = hit
            w = free_reduce(w[:i] + repl + w[i + length :])

    def is_identity(self, w: Word) -> bool:
        return not self.reduce(w)


@lru_cache(maxsize=None)
def dehn_reducer(p: Presentation) -> DehnReducer:
    return DehnReducer(p)


def dehn_reduce(p: Presentation, w: Word) -> Word:
    """Dehn-reduce ``w``; requires a verified C'(1/6) (or free) presentation."""
    return dehn_reducer(p).reduce(w)


@dataclass
class CayleyBall:
    """Radius-``radius`` ball around the identity, exact.

    Vertex 0 is the identity.  ``words[v]`` is the shortlex-minimal geodesic
    word for v (letters ordered 1 < -1 < 2 < -2 < ...), ``dist0[v]`` its
    distance from the identity, and ``edges[v]`` maps each letter to the
    neighbour when that neighbour is inside the ball.
    """

    presentation: Presentation
    radius: int
    words: tuple[Word, ...]
    dist0: tuple[int, ...]
    edges: tuple[dict[int, int], ...]
    sphere_sizes: tuple[int, ...]
    index: dict[Word, int] = field(repr=False, default_factory=dict)
    _bfs_cache: dict[int, tuple[int, ...]] = field(repr=False, default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {w: i for i, w in enumerate(self.words)}

    def __len__(self) -> int:
        return len(self.words)

    def vertex(self, w: Word) -> int:
        """Vertex of the element represented by ``w``; Uncertified if the
        letter-by-letter trace leaves the ball."""
        v = self.trace(0, w)
        if v is None:
            raise Uncertified(f"word of length {len(w)} leaves the ball")
        return v

    def trace(self, start: int, w: Word) -> int | None:
        cur = start
        edges = self.edges
        for x in w:
            nxt = edges[cur].get(x)
            if nxt is None:
                return None
            cur = nxt
        return cur

    def distances_from(self, u: int) -> tuple[int, ...]:
        """Graph distances within the ball (-1 when unreachable)."""
        cached = self._bfs_cache.get(u)
        if cached is not None:
            return cached
        dist = [-1] * len(self.words)
        dist[u] = 0
        frontier = [u]
        edges = self.edges
        while frontier:
            nxt = []
            for v in frontier:
                dv = dist[v] + 1
                for t in edges[v].values():
                    if dist[t] < 0:
                        dist[t] = dv
                        nxt.append(t)
            frontier = nxt
        out = tuple(dist)
        self._bfs_cache[u] = out
        return out

    def certified_distance(self, u: int, v: int) -> int:
        """Exact d(u, v), or Uncertified.

        If dist0(u) + dist0(v) + d_ball(u, v) <= 2*radius then every true
        geodesic between u and v stays inside the ball, so the ball distance
        is the true distance.
        """
        d = self.distances_from(u)[v]
        if d < 0 or self.dist0[u] + self.dist0[v] + d > 2 * self.radius:
            raise Uncertified(f"distance between vertices {u} and {v} not certified")
        return d

    def word_problem(self, w: Word) -> bool:
        """True iff w = 1 in G.  Needs 2*radius >= len(w): a trivial word's
        prefixes stay within distance len(w)/2, so leaving the ball decides."""
        w = free_reduce(w)
        if len(w) > 2 * self.radius:
            raise Uncertified("word too long for this ball radius")
        v = self.trace(0, w)
        return v == 0

    def to_json(self) -> dict:
        from .words import format_presentation

        return {
            "presentation": format_presentation(self.presentation),
            "radius": self.radius,
            "sphere_sizes": list(self.sphere_sizes),
            "vertices": [self.presentation.text(w) for w in self.words],
            "edges": [
                [u, x, tgt]
                for u, e in enumerate(self.edges)
                for x, tgt in sorted(e.items(), key=lambda kv: shortlex_key((kv[0],)))
                if u < tgt or (u == tgt)
            ],
        }


def ball_from_json(data: dict) -> CayleyBall:
    from .words import parse_presentation

    p = parse_presentation(data["presentation"])
    words = tuple(p.word(t) for t in data["vertices"])
    dist0 = tuple(len(w) for w in words)
    edges: list[dict[int, int]] = [dict() for _ in words]
    for u, x, v in data["edges"]:
        edges[u][x] = v
        edges[v][-x] = u
    return CayleyBall(
        p, data["radius"], words, dist0, tuple(edges), tuple(data["sphere_sizes"])
    )


class _Builder:
    def __init__(self, p: Presentation, radius: int, max_vertices: int):
        self.p = p
        self.radius = radius
        self.max_vertices = max_vertices
        self.letters = canonical_letters(p.alphabet.size)
        self.reducer = dehn_reducer(p) if p.relators else None
        self.members = closure(p).members if p.relators else ()
        self.words: list[Word] = [()]
        self.dist: list[int] = [0]
        self.edges: list[dict[int, int]] = [dict()]
        self.parent: list[int] = [0]  # union-find
        self.index: dict[Word, int] = {(): 0}
        self.pending: list[tuple[int, int]] = []
        if p.relators:
            table = pieces(p)
            l_min = min(len(r) for r in p.relators)
            p_max = max(table.max_piece_len, default=0)
            # single-face relations are traced directly; multi-face relations
            # need 2R+1 >= 2*l_min - 2*p_max and interior rungs (pieces) that
            # may stick out by p_max, hence the margin
            self.internal_radius = radius + (
                p_max if 2 * radius + 1 >= 2 * l_min - 2 * p_max else 0
            )
        else:
            self.internal_radius = radius
        self.max_member_len = max((len(m) for m in self.members), default=0)

    # union-find ------------------------------------------------------
    def find(self, v: int) -> int:
        parent = self.parent
        root = v
        while parent[root] != root:
            root = parent[root]
        while parent[v] != root:
            parent[v], v = root, parent[v]
        return root

    def add_edge(self, u: int, x: int, v: int) -> None:
        u, v = self.find(u), self.find(v)
        for a, s, b in ((u, x, v), (v, -x, u)):
            old = self.edges[a].get(s)
            if old is None:
                self.edges[a][s] = b
            else:
                old = self.find(old)
                if old != b:
                    self.pending.append((old, b))

    def merge_pending(self) -> bool:
        merged = False
        while self.pending:
            a, b = self.pending.pop()
            a, b = self.find(a), self.find(b)
            if a == b:
                continue
            merged = True
            ka = (self.dist[a], shortlex_key(self.words[a]))
            kb = (self.dist[b], shortlex_key(self.words[b]))
            if kb < ka:
                a, b = b, a
            self.parent[b] = a
            for s, t in list(self.edges[b].items()):
                t = self.find(t)
                old = self.edges[a].get(s)
                if old is None:
                    self.edges[a][s] = t
                    if self.edges[t].get(-s) is None:
                        self.edges[t][-s] = a
                else:
                    old = self.find(old)
                    if old != t:
                        self.pending.append((old, t))
            self.edges[b] = {}
        return merged

    def trace(self, start: int, w: Word) -> int | None:
        cur = self.find(start)
        for x in w:
            nxt = self.edges[cur].get(x)
            if nxt is None:
                return None
            cur = self.find(nxt)
        return cur

    def enforce_closures(self, min_dist: int) -> None:
        """Trace every relator cycle whose edges are all present; merge any
        that fail to close.  Repeat until stable."""
        if not self.members:
            return
        while True:
            merged = False
            for v in range(len(self.words)):
                if self.find(v) != v or not self.edges[v]:
                    continue
                if self.dist[v] < min_dist:
                    continue
                for m in self.members:
                    end = self.trace(v, m)
                    if end is not None and end != self.find(v):
                        self.pending.append((end, self.find(v)))
                        merged = True
                if self.pending:
                    self.merge_pending()
            if not merged:
                break

    def live_vertices(self) -> list[int]:
        return [v for v in range(len(self.words)) if self.find(v) == v]

    def run(self) -> CayleyBall:
        frontier = [0]
        for layer in range(self.internal_radius):
            candidates: dict[Word, list[tuple[int, int]]] = {}
            for u in frontier:
                u = self.find(u)
                wu = self.words[u]
                eu = self.edges[u]
                for s in self.letters:
                    if s in eu:
                        continue
                    if wu and wu[-1] == -s:
                        self.add_edge(u, s, self.index[wu[:-1]])
                        continue
                    candidates.setdefault(wu + (s,), []).append((u, s))
            new_ids = []
            for c in sorted(candidates, key=shortlex_key):
                parents = candidates[c]
                if self.reducer is not None:
                    d = self.reducer.reduce(c)
                    if len(d) < len(c):
                        v = self.trace(0, d)
                        if v is None:
                            raise RuntimeError("internal: reduced word left the ball")
                        for u, s in parents:
                            self.add_edge(u, s, v)
                        self.merge_pending()
                        continue
                v = len(self.words)
                self.words.append(c)
                self.dist.append(layer + 1)
                self.edges.append(dict())
                self.parent.append(v)
                self.index[c] = v
                new_ids.append(v)
                for u, s in parents:
                    self.add_edge(u, s, v)
                self.merge_pending()
            self.enforce_closures(max(0, layer + 1 - self.max_member_len))
            live = self.live_vertices()
            if len(live) > self.max_vertices:
                raise BudgetExceeded(
                    f"ball exceeded {self.max_vertices} vertices at layer {layer + 1}"
                )
            frontier = [v for v in new_ids if self.find(v) == v]
        self.finish_top_edges()
        return self.compact()

    def finish_top_edges(self) -> None:
        """Discover edges among top-layer vertices (and down) without
        creating vertices beyond the internal radius."""
        if not self.members:
            return
        top = self.internal_radius
        changed = True
        while changed:
            changed = False
            for u in self.live_vertices():
                if self.dist[u] != top:
                    continue
                wu = self.words[u]
                for s in self.letters:
                    if s in self.edges[u]:
                        continue
                    if wu and wu[-1] == -s:
                        self.add_edge(u, s, self.index[wu[:-1]])
                        changed = True
                        continue
                    if self.reducer is None:
                        continue
                    d = self.reducer.reduce(wu + (s,))
                    if len(d) <= top:
                        v = self.trace(0, d)
                        if v is not None and self.dist[self.find(v)] <= top:
                            self.add_edge(u, s, v)
                            changed = True
                self.merge_pending()
            self.enforce_closures(max(0, top - self.max_member_len))

    def compact(self) -> CayleyBall:
        live = [
            v
            for v in self.live_vertices()
            if self.dist[v] <= self.radius
        ]
        live.sort(key=lambda v: (self.dist[v], shortlex_key(self.words[v])))
        remap = {v: i for i, v in enumerate(live)}
        words = tuple(self.words[v] for v in live)
        dist0 = tuple(self.dist[v] for v in live)
        edges = []
        for v in live:
            e = {}
            for s in canonical_letters(self.p.alphabet.size):
                t = self.edges[v].get(s)
                if t is not None:
                    t = self.find(t)
                    if self.dist[t] <= self.radius:
                        e[s] = remap[t]
            edges.append(e)
        spheres = [0] * (self.radius + 1)
        for d in dist0:
            spheres[d] += 1
        return CayleyBall(
            self.p, self.radius, words, dist0, tuple(edges), tuple(spheres)
        )


def build_ball(
    p: Presentation, radius: int, max_vertices: int = 300_000
) -> CayleyBall:
    """Exact radius-``radius`` ball of Cay(G, S) around the identity.

    Raises PresentationNotVerified unless ``p`` is relator-free or verified
    C'(1/6), and BudgetExceeded when the vertex cap is hit.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if p.relators:
        dehn_reducer(p)  # raises PresentationNotVerified on failure
    return _Builder(p, radius, max_vertices).run()


@dataclass(frozen=True)
class GeodesicPath:
    """A shortlex-canonical geodesic between two ball vertices."""

    vertices: tuple[int, ...]
    word: Word

    def __len__(self) -> int:
        return len(self.word)

    @property
    def start(self) -> int:
        return self.vertices[0]

    @property
    def end(self) -> int:
        return self.vertices[-1]


def geodesic(ball: CayleyBall, u: int, v: int) -> GeodesicPath:
    """The shortlex-least geodesic word from u to v, with its vertex path.

    Deterministic: at every step the smallest letter (1 < -1 < 2 < ...) that
    still decreases the certified distance is taken.
    """
    d = ball.certified_distance(u, v)
    dist_to_v = ball.distances_from(v)
    letters = canonical_letters(ball.presentation.alphabet.size)
    path = [u]
    word = []
    cur = u
    for remaining in range(d, 0, -1):
        for s in letters:
            t = ball.edges[cur].get(s)
            if t is not None and dist_to_v[t] == remaining - 1:
                path.append(t)
                word.append(s)
                cur = t
                break
        else:
            raise RuntimeError("internal: geodesic step not found")
    return GeodesicPath(tuple(path), tuple(word))


def project(ball: CayleyBall, target: tuple[int, ...], x: int) -> tuple[int, ...]:
    """Full closest-point projection of x onto the target vertex set.

    Every distance involved must be certified; no arbitrary selection is
    made.  Returns the argmin set sorted by vertex id.
    """
    if not target:
        raise ValueError("target must be nonempty")
    best = None
    result = []
    for t in sorted(set(target)):
        d = ball.certified_distance(x, t)
        if best is None or d < best:
            best = d
            result = [t]
        elif d == best:
            result.append(t)
    return tuple(result)
