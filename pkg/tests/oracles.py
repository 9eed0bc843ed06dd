"""Independent brute-force oracles the tests check the library against.

Everything here is deliberately naive: quadratic scans, exhaustive
enumeration, dense linear algebra over exact rationals.  None of it shares
code with the fast paths it certifies.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from morselab.words import Presentation, Word, cyclic_shifts, free_reduce, inverse_word


def closure_words(p: Presentation) -> list[Word]:
    """The symmetrized closure, assembled without morselab.smallcancel."""
    seen = []
    for r in p.relators:
        for base in (r, inverse_word(r)):
            for w in cyclic_shifts(base):
                if w not in seen:
                    seen.append(w)
    return seen


def brute_pieces(p: Presentation) -> dict[int, int]:
    """Max piece length per relator by the O(n^2 L^2) definition-chasing scan:
    try every prefix of every pair of distinct closure members."""
    members = closure_words(p)
    piece_lens: dict[Word, int] = {m: 0 for m in members}
    for a, b in itertools.combinations(members, 2):
        k = 0
        while k < min(len(a), len(b)) and a[k] == b[k]:
            k += 1
        piece_lens[a] = max(piece_lens[a], k)
        piece_lens[b] = max(piece_lens[b], k)
    out = {}
    for idx, r in enumerate(p.relators):
        mx = 0
        for base in (r, inverse_word(r)):
            for w in cyclic_shifts(base):
                mx = max(mx, piece_lens[w])
        out[idx] = mx
    return out


def brute_common_subwords(x: Word, m: Word) -> set[Word]:
    """All nonempty common contiguous subwords of x and m."""
    subs_x = {x[i:j] for i in range(len(x)) for j in range(i + 1, len(x) + 1)}
    subs_m = {m[i:j] for i in range(len(m)) for j in range(i + 1, len(m) + 1)}
    return subs_x & subs_m


def brute_longest_common_subword(x: Word, m: Word) -> int:
    common = brute_common_subwords(x, m)
    return max((len(w) for w in common), default=0)


def brute_intersection_profile(p: Presentation, path: Word, tmax: int) -> list[int]:
    """rho(t) for t in [1, tmax] by the double loop over all substrings."""
    members = closure_words(p)
    out = []
    for t in range(1, tmax + 1):
        best = 0
        for m in members:
            if len(m) <= t:
                best = max(best, brute_longest_common_subword(path, m))
        out.append(best)
    return out


def free_group_ball(n_gens: int, radius: int) -> dict[Word, int]:
    """Hash-set BFS ball of the free group: word -> distance."""
    dist = {(): 0}
    frontier = [()]
    letters = [x for k in range(1, n_gens + 1) for x in (k, -k)]
    for d in range(1, radius + 1):
        nxt = []
        for w in frontier:
            for s in letters:
                if w and w[-1] == -s:
                    continue
                c = w + (s,)
                if c not in dist:
                    dist[c] = d
                    nxt.append(c)
        frontier = nxt
    return dist


def solve_linear(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    """Gaussian elimination over Fraction (dense, partial pivot by nonzero)."""
    n = len(rows)
    a = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        inv = Fraction(1) / a[col][col]
        a[col] = [v * inv for v in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [v - f * w for v, w in zip(a[r], a[col])]
    return [a[r][n] for r in range(n)]


def absorption_exit_measure(ball, mu_support, exit_radius: int) -> dict[int, Fraction]:
    """Exact first-exit distribution through the radius-``exit_radius`` sphere.

    Transient states are the ball vertices at distance < exit_radius; one
    step multiplies on the right by a mu-step, applied letter by letter, and
    absorption happens at the first vertex of distance exit_radius reached
    mid-step.  Solved exactly by linear algebra over Fraction.
    """
    transient = [v for v in range(len(ball.words)) if ball.dist0[v] < exit_radius]
    t_index = {v: i for i, v in enumerate(transient)}
    sphere = [v for v in range(len(ball.words)) if ball.dist0[v] == exit_radius]

    def step_outcome(v: int, word: Word):
        cur = v
        for x in word:
            cur = ball.edges[cur].get(x)
            if cur is None:
                return None
            if ball.dist0[cur] == exit_radius:
                return ("exit", cur)
        return ("in", cur)

    n = len(transient)
    exit_prob: dict[int, list[Fraction]] = {}
    for target in sphere:
        rows = [[Fraction(0)] * n for _ in range(n)]
        rhs = [Fraction(0)] * n
        for v in transient:
            i = t_index[v]
            rows[i][i] += 1
            for word, prob in mu_support:
                got = step_outcome(v, word)
                if got is None:
                    raise ValueError("mu step leaves the ball; enlarge the ball")
                kind, u = got
                if kind == "exit":
                    if u == target:
                        rhs[i] += prob
                else:
                    rows[i][t_index[u]] -= prob
        exit_prob[target] = solve_linear(rows, rhs)
    base = t_index[0]
    return {target: exit_prob[target][base] for target in sphere}
