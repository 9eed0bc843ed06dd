"""Finite state automata over the symmetrized alphabet.

States are integers; edges carry letters (signed ints).  The geodesic
automaton uses horizon-truncated cone types observed in a ball: two ball
vertices start in the same class when their geodesic continuations agree to
the horizon depth, and classes are split (Moore refinement) until the
transition function is single-valued.  Words no longer than
radius - horizon are accepted exactly when they are geodesic; whether cone
types stabilized (no new type in the last layer) is reported, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .cayley import CayleyBall, canonical_letters
from .metrics import intersection_function
from .smallcancel import FunctionSample
from .words import Presentation, Word, letter_key, shortlex_key


@dataclass(frozen=True)
class Automaton:
    n_states: int
    edges: tuple[tuple[int, int, int], ...]  # (src, letter, dst), sorted
    initial: int
    accepting: frozenset[int]

    def __post_init__(self):
        for src, _, dst in self.edges:
            if not (0 <= src < self.n_states and 0 <= dst < self.n_states):
                raise ValueError("edge endpoint outside state range")
        if not 0 <= self.initial < self.n_states:
            raise ValueError("initial state outside state range")
        if not all(0 <= z < self.n_states for z in self.accepting):
            raise ValueError("accept state outside state range")

    @classmethod
    def make(cls, n_states, edges, initial, accepting) -> "Automaton":
        es = tuple(
            sorted(set(edges), key=lambda e: (e[0], letter_key(e[1]), e[2]))
        )
        return cls(n_states, es, initial, frozenset(accepting))

    @property
    def deterministic(self) -> bool:
        seen = set()
        for src, x, _ in self.edges:
            if (src, x) in seen:
                return False
            seen.add((src, x))
        return True

    def transition_map(self) -> list[dict[int, list[int]]]:
        out: list[dict[int, list[int]]] = [dict() for _ in range(self.n_states)]
        for src, x, dst in self.edges:
            out[src].setdefault(x, []).append(dst)
        return out

    def to_json(self) -> dict:
        return {
            "states": self.n_states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "edges": [list(e) for e in self.edges],
        }

    def to_dot(self, p: Presentation | None = None) -> str:
        def label(x: int) -> str:
            return p.alphabet.char_from_letter(x) if p else str(x)

        lines = ["digraph fsa {", "  rankdir=LR;"]
        for q in range(self.n_states):
            shape = "doublecircle" if q in self.accepting else "circle"
            lines.append(f'  q{q} [shape={shape}];')
        lines.append(f"  start [shape=point];")
        lines.append(f"  start -> q{self.initial};")
        for src, x, dst in self.edges:
            lines.append(f'  q{src} -> q{dst} [label="{label(x)}"];')
        lines.append("}")
        return "\n".join(lines)


def automaton_from_json(data: dict) -> Automaton:
    return Automaton.make(
        data["states"],
        [tuple(e) for e in data["edges"]],
        data["initial"],
        data["accepting"],
    )


def accepts(a: Automaton, w: Word) -> bool:
    """Nondeterministic acceptance: some path from the initial state reading
    w ends in an accept state."""
    tmap = a.transition_map()
    current = {a.initial}
    for x in w:
        nxt: set[int] = set()
        for q in current:
            nxt.update(tmap[q].get(x, ()))
        if not nxt:
            return False
        current = nxt
    return bool(current & a.accepting)


def determinize(a: Automaton) -> Automaton:
    """Subset construction; accepts the same language."""
    tmap = a.transition_map()
    start = frozenset([a.initial])
    states = {start: 0}
    order = [start]
    edges = []
    i = 0
    while i < len(order):
        cur = order[i]
        by_letter: dict[int, set[int]] = {}
        for q in cur:
            for x, dsts in tmap[q].items():
                by_letter.setdefault(x, set()).update(dsts)
        for x in sorted(by_letter, key=letter_key):
            tgt = frozenset(by_letter[x])
            if tgt not in states:
                states[tgt] = len(order)
                order.append(tgt)
            edges.append((states[cur], x, states[tgt]))
        i += 1
    accepting = {states[s] for s in order if s & a.accepting}
    return Automaton.make(len(order), edges, 0, accepting)


@dataclass(frozen=True)
class GeodesicAutomatonReport:
    automaton: Automaton
    stabilized: bool
    cone_count: int
    refinement_rounds: int
    exact_up_to: int


def _cone(ball: CayleyBall, v: int, horizon: int) -> frozenset[Word]:
    """Geodesic continuations of v up to the horizon depth."""
    out: set[Word] = set()

    def walk(u: int, prefix: tuple[int, ...]):
        if len(prefix) == horizon:
            return
        for x, t in ball.edges[u].items():
            if ball.dist0[t] == ball.dist0[u] + 1:
                w = prefix + (x,)
                out.add(w)
                walk(t, w)

    walk(v, ())
    return frozenset(out)


def geodesic_automaton(ball: CayleyBall, horizon: int) -> GeodesicAutomatonReport:
    """Deterministic automaton of horizon-truncated cone types.

    Accepts exactly the geodesic words of length <= radius - horizon.
    Truncated cones need not transition consistently, so classes are split
    (Moore refinement) until they do.  Vertices on the cutoff layer carry no
    transition information: they only constrain as targets, and follow
    whatever subclass their cone-mates end up in.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    cutoff = ball.radius - horizon
    if cutoff < 1:
        raise ValueError("ball too small for this horizon")
    vertices = [v for v in range(len(ball)) if ball.dist0[v] <= cutoff]
    cones: dict[int, frozenset[Word]] = {v: _cone(ball, v, horizon) for v in vertices}

    def cone_key(c: frozenset[Word]) -> tuple:
        return tuple(sorted(shortlex_key(w) for w in c))

    distinct = sorted({cones[v] for v in vertices}, key=cone_key)
    cone_id = {c: i for i, c in enumerate(distinct)}
    cls = {v: cone_id[cones[v]] for v in vertices}
    letters = canonical_letters(ball.presentation.alphabet.size)
    dist0 = ball.dist0
    edges_of = ball.edges

    def row_of(v: int) -> tuple[int, ...] | None:
        if dist0[v] >= cutoff:
            return None
        out = []
        for x in letters:
            t = edges_of[v].get(x)
            out.append(cls[t] if t is not None and dist0[t] == dist0[v] + 1 else -1)
        return tuple(out)

    rounds = 0
    while True:
        rounds += 1
        rows = {v: row_of(v) for v in vertices}
        keys = sorted({(cls[v], rows[v]) for v in vertices if rows[v] is not None})
        new_id = {key: i for i, key in enumerate(keys)}
        first_in_class: dict[int, int] = {}
        for key in keys:
            first_in_class.setdefault(key[0], new_id[key])
        fresh = len(new_id)
        new_cls = {}
        for v in vertices:
            if rows[v] is not None:
                new_cls[v] = new_id[(cls[v], rows[v])]
            elif cls[v] in first_in_class:
                new_cls[v] = first_in_class[cls[v]]
            else:
                key = (cls[v], None)
                if key not in new_id:
                    new_id[key] = fresh
                    fresh += 1
                new_cls[v] = new_id[key]
        if fresh == max(cls.values()) + 1 and new_cls == cls:
            break
        changed = new_cls != cls
        cls = new_cls
        if not changed:
            break
    edges = set()
    for v in vertices:
        if dist0[v] >= cutoff:
            continue
        for x in letters:
            t = edges_of[v].get(x)
            if t is not None and dist0[t] == dist0[v] + 1:
                edges.add((cls[v], x, cls[t]))
    n_classes = max(cls.values()) + 1
    auto = Automaton.make(n_classes, edges, cls[0], set(range(n_classes)))
    if not auto.deterministic:
        raise RuntimeError("internal: refinement left a nondeterministic transition")
    last_layer = {cones[v] for v in vertices if dist0[v] == cutoff}
    earlier = {cones[v] for v in vertices if dist0[v] < cutoff}
    stabilized = last_layer <= earlier
    return GeodesicAutomatonReport(auto, stabilized, len(distinct), rounds, cutoff)


def window_product(
    a: Automaton, p: Presentation, L: int, bound: FunctionSample, state_budget: int = 200_000
) -> Automaton:
    """Restrict ``a`` to words whose every length-<=L subword has
    intersection profile pointwise <= bound.

    Product with the window-content automaton whose states are the last
    min(len, L-1) letters read; a transition is allowed when the grown
    window still passes.  Both factor conditions are prefix-closed, so the
    language is hereditary.
    """
    if L < 1:
        raise ValueError("L must be >= 1")
    tmap = a.transition_map()
    window_ok_cache: dict[Word, bool] = {}

    def window_ok(w: Word) -> bool:
        got = window_ok_cache.get(w)
        if got is None:
            prof = intersection_function(p, w, bound.domain_max)
            got = all(prof(t) <= bound(t) for t in range(1, bound.domain_max + 1))
            window_ok_cache[w] = got
        return got

    start = (a.initial, ())
    states: dict[tuple[int, Word], int] = {start: 0}
    order = [start]
    edges = []
    i = 0
    while i < len(order):
        q, win = order[i]
        for x in sorted(tmap[q], key=letter_key):
            grown = win + (x,)
            if not window_ok(grown):
                continue
            nxt_win = grown[max(0, len(grown) - (L - 1)) :] if L > 1 else ()
            for dst in tmap[q][x]:
                key = (dst, nxt_win)
                if key not in states:
                    if len(order) >= state_budget:
                        raise RuntimeError("window_product state budget exceeded")
                    states[key] = len(order)
                    order.append(key)
                edges.append((states[(q, win)], x, states[key]))
        i += 1
    accepting = {idx for (q, _), idx in states.items() if q in a.accepting}
    return Automaton.make(len(order), edges, 0, accepting)


def limit_liveness(a: Automaton) -> frozenset[int]:
    """States from which an infinite all-prefixes-accepted word departs:
    the largest subset of accept states in which every state has a
    successor inside the subset."""
    tmap = a.transition_map()
    live = set(a.accepting)
    while True:
        keep = {
            q
            for q in live
            if any(d in live for dsts in tmap[q].values() for d in dsts)
        }
        if keep == live:
            return frozenset(live)
        live = keep


@dataclass(frozen=True)
class LanguageReport:
    counts: tuple[int, ...]  # words of length 0..n
    empty: bool
    live_states: int


def count_accepted(a: Automaton, n: int) -> LanguageReport:
    """Exact accepted-word counts by length, by vector-transfer iteration.

    Nondeterministic automata are determinized first so paths biject with
    words.
    """
    d = a if a.deterministic else determinize(a)
    tmap = d.transition_map()
    vec = [0] * d.n_states
    vec[d.initial] = 1
    counts = [sum(vec[q] for q in d.accepting)]
    for _ in range(n):
        nxt = [0] * d.n_states
        for q, c in enumerate(vec):
            if c:
                for dsts in tmap[q].values():
                    for t in dsts:
                        nxt[t] += c
        vec = nxt
        counts.append(sum(vec[q] for q in d.accepting))
    return LanguageReport(
        tuple(counts), empty=not any(counts), live_states=len(limit_liveness(a))
    )
