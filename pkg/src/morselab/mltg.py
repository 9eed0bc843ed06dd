"""Finite-scale local-to-global experiments.

"Locally Morse" is operationalized as locally geodesic plus locally
intersection-bounded, which is the finitely checkable translation of the
gauge condition for C'(1/6) groups; no quasi-geodesic enumeration happens
anywhere.  Scales follow the construction exactly: the input path is
2L-locally constrained while anchors sit L apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .cayley import CayleyBall, GeodesicPath, Uncertified, canonical_letters, geodesic
from .metrics import IntersectionProfile, intersection_function, local_intersection_ok
from .smallcancel import FunctionSample, closure
from .words import Presentation, Word


def promotion_threshold(q: int, c: int) -> int:
    """Least scale L with L > Q(3C + Q + 2): locally quasi-geodesic paths
    staying C-close to a geodesic promote to global quasi-geodesics."""
    if q < 1 or c < 0:
        raise ValueError("need Q >= 1 and C >= 0")
    return q * (3 * c + q + 2) + 1


@dataclass(frozen=True)
class LocalSpec:
    L: int
    Q: int
    bound: FunctionSample

    def __post_init__(self):
        if self.L < 1 or self.Q < 1:
            raise ValueError("L and Q must be >= 1")


@dataclass(frozen=True)
class EnumerationResult:
    words: tuple[Word, ...]
    truncated: bool
    visited: int


def _is_locally_geodesic(ball: CayleyBall, w: Word, L: int) -> bool:
    """Every length-<=L subword labels a geodesic (checked at the identity;
    the Cayley graph is homogeneous)."""
    for i in range(len(w)):
        v = 0
        for j in range(i, min(i + L, len(w))):
            v = ball.edges[v].get(w[j])
            if v is None or ball.dist0[v] != j - i + 1:
                return False
    return True


def enumerate_local_words(
    ball: CayleyBall, spec: LocalSpec, length: int, budget: int = 100_000
) -> EnumerationResult:
    """Freely reduced words of the given length whose every length-<=L
    subword is geodesic and passes the local intersection bound.

    Both conditions are hereditary, so the DFS prunes safely; only the
    windows ending at each new letter are rechecked.  Exhaustive unless the
    budget trips, which is flagged.
    """
    if length > ball.radius:
        raise ValueError("length exceeds the certified scope of the ball")
    p = ball.presentation
    letters = canonical_letters(p.alphabet.size)
    out: list[Word] = []
    visited = 0
    truncated = False

    def ok_extension(word: list[int]) -> bool:
        # geodesic windows ending at the last letter
        n = len(word)
        lo = max(0, n - spec.L)
        v = 0
        for j in range(n - 1, lo - 1, -1):
            v = ball.edges[v].get(-word[j])
            if v is None or ball.dist0[v] != n - j:
                return False
        window = tuple(word[lo:n])
        return local_intersection_ok(p, window, spec.L, spec.bound).passed

    def dfs(word: list[int]):
        nonlocal visited, truncated
        if truncated:
            return
        visited += 1
        if visited > budget:
            truncated = True
            return
        if len(word) == length:
            out.append(tuple(word))
            return
        for x in letters:
            if word and word[-1] == -x:
                continue
            word.append(x)
            if ok_extension(word):
                dfs(word)
            word.pop()

    dfs([])
    return EnumerationResult(tuple(out), truncated, visited)


@dataclass(frozen=True)
class GlobalAudit:
    q_prime: float
    profile: IntersectionProfile
    hausdorff: int


def _hausdorff(ball: CayleyBall, xs: tuple[int, ...], ys: tuple[int, ...]) -> int:
    worst = 0
    for a_set, b_set in ((xs, ys), (ys, xs)):
        for a in a_set:
            da = ball.distances_from(a)
            best = None
            for b in b_set:
                d = ball.certified_distance(a, b)
                best = d if best is None else min(best, d)
            worst = max(worst, best)
    return worst


def global_audit(ball: CayleyBall, w: Word, spec: LocalSpec) -> GlobalAudit:
    """Global observables for a locally constrained word: the best global
    quasi-geodesic constant realized against certified distances, the global
    intersection profile, and the Hausdorff distance to the canonical
    geodesic between its endpoints."""
    p = ball.presentation
    verts = [0]
    for x in w:
        v = ball.edges[verts[-1]].get(x)
        if v is None:
            raise Uncertified("word leaves the ball")
        verts.append(v)
    q_prime = 1.0
    for i in range(len(verts)):
        for j in range(i + 1, len(verts)):
            d = ball.certified_distance(verts[i], verts[j])
            delta = j - i
            # least Q with delta/Q - Q <= d: positive root of Q^2 + dQ - delta
            need = (-d + math.sqrt(d * d + 4 * delta)) / 2
            q_prime = max(q_prime, need)
    tmax = max(p.max_relator_length, 1)
    prof = intersection_function(p, w, tmax)
    geo = geodesic(ball, verts[0], verts[-1])
    haus = _hausdorff(ball, tuple(verts), geo.vertices)
    return GlobalAudit(q_prime, prof, haus)


@dataclass(frozen=True)
class Bridge:
    """One junction of the auxiliary path: the chosen relator window and the
    departure/landing points on the surrounding geodesics."""

    junction: int  # index i: bridge between eta_i and eta_{i+1}
    x_vertex: int
    y_vertex: int
    window: Word | None  # None for a degenerate bridge
    window_start: int | None
    degenerate: bool


@dataclass(frozen=True)
class AuxPath:
    anchors: tuple[int, ...]
    etas: tuple[GeodesicPath, ...]
    bridges: tuple[Bridge, ...]
    vertices: tuple[int, ...]
    word: Word
    segments: tuple[tuple[str, int], ...]  # (kind, start offset in vertices)

    def to_json(self, ball: CayleyBall) -> dict:
        p = ball.presentation
        return {
            "anchors": [p.text(ball.words[a]) for a in self.anchors],
            "etas": [p.text(e.word) for e in self.etas],
            "bridges": [
                {
                    "junction": b.junction,
                    "x": p.text(ball.words[b.x_vertex]),
                    "y": p.text(ball.words[b.y_vertex]),
                    "window": None if b.window is None else p.text(b.window),
                    "degenerate": b.degenerate,
                }
                for b in self.bridges
            ],
            "word": p.text(self.word),
            "segments": [list(s) for s in self.segments],
        }


class BridgeOverlapError(RuntimeError):
    def __init__(self, junction: int):
        super().__init__(
            f"bridges overlap at junction {junction}: scale L is below the "
            "non-overlap regime for this instance"
        )
        self.junction = junction


def _best_junction_window(
    ball: CayleyBall,
    members: tuple[Word, ...],
    eta_a: GeodesicPath,
    eta_b: GeodesicPath,
    da: tuple[int, ...],
):
    """The relator-image window (>= 1 edge, <= half its relator) meeting
    both geodesics that maximizes d(a_i, x_W) + d(a_i, y_W).

    For each vertex x of eta_a and each way a closure member passes through
    x, the image is traced half a relator both ways; minimal windows
    spanning x's side to a hit on eta_b realize the maximal score, since
    enlarging a window can only lower the minimizing points.  Returns
    (x_vertex, y_vertex, window word, start vertex) or None.
    """
    pos_a = {}
    for i, v in enumerate(eta_a.vertices):
        pos_a.setdefault(v, i)
    pos_b = {}
    for i, v in enumerate(eta_b.vertices):
        pos_b.setdefault(v, i)
    best = None  # ((-score, tiebreak), x_v, y_v, word, start_vertex)
    for m_idx, m in enumerate(members):
        half = len(m) // 2
        if half < 1:
            continue
        n = len(m)
        doubled = m + m
        for x in eta_a.vertices:
            for j in range(n):
                # trace the image through x: offsets -half..half, x at 0
                trace: dict[int, int] = {0: x}
                v = x
                for k in range(1, half + 1):
                    v = ball.edges[v].get(doubled[(j + k - 1) % n])
                    if v is None:
                        break
                    trace[k] = v
                v = x
                for k in range(1, half + 1):
                    v = ball.edges[v].get(-doubled[(j - k) % n])
                    if v is None:
                        break
                    trace[-k] = v
                hits_b = [t for t, v in trace.items() if v in pos_b]
                if not hits_b:
                    continue
                for t in hits_b:
                    lo, hi = min(0, t), max(0, t)
                    if hi - lo < 1:
                        continue
                    window = [trace[k] for k in range(lo, hi + 1)]
                    in_a = [v for v in window if v in pos_a]
                    in_b = [v for v in window if v in pos_b]
                    x_v = min(in_a, key=lambda u: (da[u], pos_a[u]))
                    y_v = min(in_b, key=lambda u: (da[u], pos_b[u]))
                    score = da[x_v] + da[y_v]
                    word = tuple(doubled[(j + k) % n] for k in range(lo, hi))
                    tiebreak = (m_idx, (j + lo) % n, hi - lo, window[0])
                    cand = ((-score, tiebreak), x_v, y_v, word, window[0])
                    if best is None or cand[0] < best[0]:
                        best = cand
    return None if best is None else best[1:]


def build_aux_path(
    ball: CayleyBall, p: Presentation, gamma: Word, L: int
) -> AuxPath:
    """The auxiliary path: anchors every L letters along gamma, shortlex
    geodesics between consecutive anchors, and at each junction the relator
    window (at most half its relator) meeting both geodesics that maximizes
    d(a_i, x) + d(a_i, y); ties break to the smallest (member, shift,
    length, start vertex).  With no qualifying window the bridge degenerates
    to the junction anchor."""
    if L < 1:
        raise ValueError("L must be >= 1")
    if p is not ball.presentation and p != ball.presentation:
        raise ValueError("presentation does not match the ball")
    if not _is_locally_geodesic(ball, gamma, 2 * L):
        raise ValueError("gamma is not 2L-locally geodesic")
    verts = [0]
    for x in gamma:
        v = ball.edges[verts[-1]].get(x)
        if v is None:
            raise Uncertified("gamma leaves the ball")
        verts.append(v)
    anchor_pos = list(range(0, len(gamma), L))
    if anchor_pos[-1] != len(gamma):
        anchor_pos.append(len(gamma))
    anchors = tuple(verts[i] for i in anchor_pos)
    etas = tuple(
        geodesic(ball, anchors[i], anchors[i + 1]) for i in range(len(anchors) - 1)
    )
    members = closure(p).members
    bridges = []
    for i in range(len(etas) - 1):
        da = ball.distances_from(anchors[i])
        got = _best_junction_window(ball, members, etas[i], etas[i + 1], da)
        if got is None:
            junction = anchors[i + 1]
            bridges.append(Bridge(i, junction, junction, None, None, True))
        else:
            x_v, y_v, www, start = got
            bridges.append(Bridge(i, x_v, y_v, www, start, False))
    # assemble p, checking the bridges stay in order along each eta
    vertices: list[int] = [anchors[0]]
    word: list[int] = []
    segments: list[tuple[str, int]] = []

    def extend(path_vertices, path_word):
        nonlocal vertices, word
        assert path_vertices[0] == vertices[-1]
        vertices.extend(path_vertices[1:])
        word.extend(path_word)

    for i, eta in enumerate(etas):
        start_v = vertices[-1]
        from_pos = eta.vertices.index(start_v)
        if i < len(bridges):
            to_pos = eta.vertices.index(bridges[i].x_vertex)
            if to_pos < from_pos:
                raise BridgeOverlapError(i)
        else:
            to_pos = len(eta.vertices) - 1
        segments.append(("eta", len(vertices) - 1))
        extend(eta.vertices[from_pos : to_pos + 1], eta.word[from_pos:to_pos])
        if i < len(bridges):
            b = bridges[i]
            segments.append(("bridge", len(vertices) - 1))
            hop = geodesic(ball, b.x_vertex, b.y_vertex)
            extend(hop.vertices, hop.word)
    return AuxPath(
        anchors, etas, bridges, tuple(vertices), tuple(word), tuple(segments)
    )


@dataclass(frozen=True)
class AuxAudit:
    profile: IntersectionProfile
    two_thirds_ok: bool
    first_violation: int | None
    hausdorff_to_gamma: int
    max_subpath_hausdorff: int


def audit_aux_path(
    ap: AuxPath, p: Presentation, ball: CayleyBall, gamma: Word
) -> AuxAudit:
    """Audit the assembled path: the intersection bound rho_p(t) <= 2t/3 at
    every sampled t, the Hausdorff distance to gamma, and the worst
    Hausdorff distance of a subpath to the canonical geodesic between its
    endpoints."""
    tmax = max(p.max_relator_length, 1)
    prof = intersection_function(p, ap.word, tmax)
    violation = None
    for t in range(1, tmax + 1):
        if 3 * prof(t) > 2 * t:
            violation = t
            break
    gamma_verts = [0]
    for x in gamma:
        gamma_verts.append(ball.edges[gamma_verts[-1]][x])
    haus_gamma = _hausdorff(ball, ap.vertices, tuple(gamma_verts))
    worst = 0
    n = len(ap.vertices)
    for s in range(n):
        for t in range(s + 1, n):
            try:
                geo = geodesic(ball, ap.vertices[s], ap.vertices[t])
                worst = max(
                    worst, _hausdorff(ball, ap.vertices[s : t + 1], geo.vertices)
                )
            except Uncertified:
                continue
    return AuxAudit(prof, violation is None, violation, haus_gamma, worst)
