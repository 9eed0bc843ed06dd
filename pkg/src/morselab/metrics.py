"""Measurable geometry: intersection profiles, contraction and
bounded-geodesic-image constants, the relator-length bound, horofunctions.

Morseness is never estimated by enumerating quasi-geodesics.  The
intersection function (longest common subword between a path and the
relators of each length scale) is the implemented proxy; it is sublinear
exactly when the geodesic is Morse in a C'(1/6) group, so all finite-scale
tests are phrased against it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cayley import CayleyBall, GeodesicPath, Uncertified, canonical_letters, project
from .smallcancel import FunctionSample, closure
from .words import Presentation, Word


class _SuffixAutomaton:
    """Suffix automaton of a word; supports longest-common-substring walks."""

    def __init__(self, word: Word):
        self.next: list[dict[int, int]] = [{}]
        self.link = [-1]
        self.length = [0]
        last = 0
        for ch in word:
            cur = len(self.next)
            self.next.append({})
            self.link.append(0)
            self.length.append(self.length[last] + 1)
            p = last
            while p >= 0 and ch not in self.next[p]:
                self.next[p][ch] = cur
                p = self.link[p]
            if p >= 0:
                q = self.next[p][ch]
                if self.length[p] + 1 == self.length[q]:
                    self.link[cur] = q
                else:
                    clone = len(self.next)
                    self.next.append(dict(self.next[q]))
                    self.link.append(self.link[q])
                    self.length.append(self.length[p] + 1)
                    while p >= 0 and self.next[p].get(ch) == q:
                        self.next[p][ch] = clone
                        p = self.link[p]
                    self.link[q] = clone
                    self.link[cur] = clone
            last = cur

    def longest_common_with(self, other: Word) -> tuple[int, int]:
        """(length, end position in ``other``) of the longest common substring."""
        best = best_end = 0
        state = cur = 0
        for i, ch in enumerate(other):
            while state and ch not in self.next[state]:
                state = self.link[state]
                cur = self.length[state]
            if ch in self.next[state]:
                state = self.next[state][ch]
                cur += 1
            else:
                state = cur = 0
            if cur > best:
                best, best_end = cur, i + 1
        return best, best_end


@dataclass(frozen=True)
class IntersectionProfile:
    """rho(t) = longest common subword with any closure member of length <= t."""

    tmax: int
    rho: tuple[int, ...]
    witnesses: tuple[tuple[Word, Word] | None, ...]  # (subword, member) per t

    def __call__(self, t: int) -> int:
        if not 1 <= t <= self.tmax:
            raise ValueError(f"t={t} outside [1, {self.tmax}]")
        return self.rho[t - 1]


def intersection_function(p: Presentation, path: Word, tmax: int) -> IntersectionProfile:
    """Exact intersection profile of a path label against the closure,
    computed by a substring automaton over the path."""
    if tmax < 1:
        raise ValueError("tmax must be >= 1")
    sa = _SuffixAutomaton(path)
    per_member: list[tuple[int, int, Word, Word]] = []
    for m in closure(p).members:  # members come shortlex sorted
        if len(m) <= tmax:
            length, end = sa.longest_common_with(m)
            per_member.append((len(m), length, m[end - length : end], m))
    rho = []
    witnesses: list[tuple[Word, Word] | None] = []
    for t in range(1, tmax + 1):
        best = 0
        wit = None
        for mlen, length, sub, m in per_member:
            if mlen <= t and length > best:
                best = length
                wit = (sub, m)
        rho.append(best)
        witnesses.append(wit if best > 0 else None)
    return IntersectionProfile(tmax, tuple(rho), tuple(witnesses))


@dataclass(frozen=True)
class LocalCheck:
    passed: bool
    failing_window: tuple[int, int] | None  # (start, end) in path positions
    failing_t: int | None


def local_intersection_ok(
    p: Presentation, path: Word, L: int, bound: FunctionSample
) -> LocalCheck:
    """Every length-<=L subword of the path must have profile <= bound
    pointwise.  Profiles are monotone under extension, so the length-L
    windows dominate all shorter subwords."""
    if L < 1:
        raise ValueError("L must be >= 1")
    tmax = bound.domain_max
    if len(path) <= L:
        windows = [(0, len(path))]
    else:
        windows = [(i, i + L) for i in range(len(path) - L + 1)]
    for start, end in windows:
        prof = intersection_function(p, path[start:end], tmax)
        for t in range(1, tmax + 1):
            if prof(t) > bound(t):
                return LocalCheck(False, (start, end), t)
    return LocalCheck(True, None, None)


@dataclass(frozen=True)
class ContractionReport:
    constant: int
    witness_x: int | None
    witness_pair: tuple[int, int] | None
    tested: int
    skipped: int
    radius: int


def contraction_constant(ball: CayleyBall, path: GeodesicPath) -> ContractionReport:
    """sup over admissible x of diam(proj_path(B_{d(x, path)}(x))), exact.

    A base point x is admissible when dist0(x) + d(x, path) <= radius, which
    puts the whole closed ball B_{d(x, path)}(x) inside the certified
    region; other points are skipped and counted.
    """
    if not path.vertices:
        raise ValueError("path must be nonempty")
    pts = path.vertices
    dist_to = {g: ball.distances_from(g) for g in set(pts)}
    best = 0
    wit_x = None
    wit_pair = None
    tested = skipped = 0
    for x in range(len(ball)):
        r = min(dist_to[g][x] for g in set(pts))
        if r < 0 or ball.dist0[x] + r > ball.radius:
            skipped += 1
            continue
        tested += 1
        if r == 0:
            continue
        dx = ball.distances_from(x)
        proj: set[int] = set()
        ok = True
        for y in range(len(ball)):
            if 0 <= dx[y] <= r:
                try:
                    proj.update(project(ball, pts, y))
                except Uncertified:
                    ok = False
                    break
        if not ok:
            skipped += 1
            tested -= 1
            continue
        proj_list = sorted(proj)
        for i, u in enumerate(proj_list):
            du = dist_to.get(u) or ball.distances_from(u)
            for v in proj_list[i + 1 :]:
                d = du[v]
                if d > best:
                    best = d
                    wit_x = x
                    wit_pair = (u, v)
    return ContractionReport(best, wit_x, wit_pair, tested, skipped, ball.radius)


@dataclass(frozen=True)
class BgiReport:
    constant: int | None  # None = unbounded at this radius
    pairs_tested: int
    radius: int


def bgi_constant(ball: CayleyBall, path: GeodesicPath) -> BgiReport:
    """Least integer D such that every certified shortlex geodesic lambda
    with d(path, lambda) >= D has diam(proj_path(lambda)) <= D.

    Enumerates the shortlex geodesic between every certified vertex pair.
    Reports None when no D up to the ball diameter works.
    """
    from .cayley import geodesic as shortlex_geodesic

    pts = set(path.vertices)
    dist_to = {g: ball.distances_from(g) for g in pts}
    observations = []  # (distance to path, projection diameter)
    pairs = 0
    n = len(ball)
    for u in range(n):
        du = ball.distances_from(u)
        for v in range(u, n):
            if du[v] < 0 or ball.dist0[u] + ball.dist0[v] + du[v] > 2 * ball.radius:
                continue
            try:
                lam = shortlex_geodesic(ball, u, v)
                d_lam = min(dist_to[g][x] for g in pts for x in lam.vertices)
                proj: set[int] = set()
                for x in lam.vertices:
                    proj.update(project(ball, tuple(pts), x))
                diam = 0
                proj_list = sorted(proj)
                for i, a in enumerate(proj_list):
                    da = ball.distances_from(a)
                    for b in proj_list[i + 1 :]:
                        diam = max(diam, ball.certified_distance(a, b))
            except Uncertified:
                continue
            pairs += 1
            observations.append((d_lam, diam))
    for d_bound in range(0, 2 * ball.radius + 2):
        worst = max((diam for d, diam in observations if d >= d_bound), default=0)
        if worst <= d_bound:
            return BgiReport(d_bound, pairs, ball.radius)
    return BgiReport(None, pairs, ball.radius)


@dataclass(frozen=True)
class MorseGaugeSample:
    """Sampled Morse gauge: non-decreasing values at Q = 1..Qmax."""

    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("need at least one gauge value")
        if any(v < 0 for v in self.values):
            raise ValueError("gauge values must be nonnegative")
        if any(a > b for a, b in zip(self.values, self.values[1:])):
            raise ValueError("gauge must be non-decreasing")

    @classmethod
    def of(cls, *values) -> "MorseGaugeSample":
        return cls(tuple(Fraction(v) for v in values))

    def __call__(self, q: int) -> Fraction:
        if not 1 <= q <= len(self.values):
            raise ValueError(f"gauge not sampled at Q={q}")
        return self.values[q - 1]


def relator_length_bound(gauge: MorseGaugeSample, n: int) -> Fraction:
    """D = 2N/(N-1) * M(N): relators containing an M-Morse subword of at
    least 1/N of their length are no longer than D."""
    if n < 2:
        raise ValueError("N must be >= 2")
    return Fraction(2 * n, n - 1) * gauge(n)


def horofunction_value(ball: CayleyBall, y: int, z: int) -> int:
    """rho_y(z) = d(z, y) - d(x0, y) with x0 the identity vertex."""
    return ball.certified_distance(z, y) - ball.certified_distance(0, y)


@dataclass(frozen=True)
class SeparationReport:
    gamma1_difference: int
    gamma2_difference: int
    t_used: int
    t_prime_used: int


def horofunction_separation(
    ball: CayleyBall, gamma1: GeodesicPath, gamma2: GeodesicPath, s: int, S: int
) -> SeparationReport:
    """(rho_{gamma1(t)}(z) - rho_{gamma1(t)}(Z), same along gamma2) for
    z = gamma1(s), Z = gamma1(S), at the largest certified t, t'.

    The first component equals S - s exactly whenever t >= S.
    """
    if gamma1.vertices[0] != 0 or gamma2.vertices[0] != 0:
        raise ValueError("both geodesics must start at the identity")
    if not 0 <= s < S < len(gamma1.vertices):
        raise ValueError("need 0 <= s < S within gamma1")
    z = gamma1.vertices[s]
    Z = gamma1.vertices[S]

    def best_difference(path: GeodesicPath) -> tuple[int, int]:
        for t in range(len(path.vertices) - 1, -1, -1):
            y = path.vertices[t]
            try:
                return horofunction_value(ball, y, z) - horofunction_value(ball, y, Z), t
            except Uncertified:
                continue
        raise Uncertified("no certified point along the geodesic")

    d1, t1 = best_difference(gamma1)
    d2, t2 = best_difference(gamma2)
    return SeparationReport(d1, d2, t1, t2)


def worst_geodesic(ball: CayleyBall, length: int) -> tuple[Word, IntersectionProfile]:
    """Geodesic word of the given length maximizing the intersection profile
    maximum; ties broken by shortlex.  Finite-scale stand-in for picking the
    least Morse direction."""
    p = ball.presentation
    tmax = max(p.max_relator_length, 1)
    best_word: Word | None = None
    best_val = -1
    letters = canonical_letters(p.alphabet.size)

    def extend(v: int, word: list[int], depth: int):
        nonlocal best_word, best_val
        if depth == length:
            prof = intersection_function(p, tuple(word), tmax)
            val = max(prof.rho) if prof.rho else 0
            if val > best_val:
                best_val = val
                best_word = tuple(word)
            return
        for x in letters:
            t = ball.edges[v].get(x)
            if t is not None and ball.dist0[t] == ball.dist0[v] + 1:
                word.append(x)
                extend(t, word, depth + 1)
                word.pop()

    if length > ball.radius:
        raise ValueError("length exceeds ball radius")
    extend(0, [], 0)
    assert best_word is not None
    return best_word, intersection_function(p, best_word, tmax)
