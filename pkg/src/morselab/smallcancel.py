"""Symmetrized closures, pieces, and the small-cancellation predicates.

Pieces are computed over the full cyclic closure of R u R^-1, so "prefix of
two distinct closure members" captures common subwords of relators up to
cyclic shift and inversion.  A subword of a single relator occurring at two
distinct cyclic positions counts as a piece whenever the two shifted members
are distinct words.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .words import (
    Presentation,
    Word,
    cyclic_shifts,
    inverse_word,
    shortlex_key,
)


@dataclass(frozen=True)
class SymmetrizedClosure:
    """Cyclic closure of R u R^-1 with back-pointers to originating relators.

    ``origins[i]`` is ``(relator_index, inverted, shift)`` for ``members[i]``,
    the lexicographically first derivation when a word arises more than once.
    """

    members: tuple[Word, ...]
    origins: tuple[tuple[int, bool, int], ...]

    def __len__(self) -> int:
        return len(self.members)

    def member_set(self) -> frozenset[Word]:
        return frozenset(self.members)


def closure(p: Presentation) -> SymmetrizedClosure:
    seen: dict[Word, tuple[int, bool, int]] = {}
    for idx, r in enumerate(p.relators):
        for inverted, base in ((False, r), (True, inverse_word(r))):
            for shift, w in enumerate(cyclic_shifts(base)):
                if w not in seen:
                    seen[w] = (idx, inverted, shift)
    members = sorted(seen, key=shortlex_key)
    return SymmetrizedClosure(tuple(members), tuple(seen[m] for m in members))


def _lcp(a: Word, b: Word) -> int:
    n = min(len(a), len(b))
    for i in range(n):
        if a[i] != b[i]:
            return i
    return n


@dataclass(frozen=True)
class PieceTable:
    """Per relator: the longest piece occurring as a subword, with witnesses."""

    relator_lengths: tuple[int, ...]
    max_piece_len: tuple[int, ...]
    witnesses: tuple[tuple[Word, Word, Word] | None, ...]  # (piece, member, other)
    all_pieces: tuple[frozenset[Word], ...] | None = None


def _members_per_relator(p: Presentation, members: tuple[Word, ...]) -> list[set[int]]:
    """Indices into ``members`` of the closure words each relator gives rise to."""
    where = {m: i for i, m in enumerate(members)}
    out: list[set[int]] = []
    for r in p.relators:
        idxs = set()
        for base in (r, inverse_word(r)):
            for w in cyclic_shifts(base):
                idxs.add(where[w])
        out.append(idxs)
    return out


def pieces(p: Presentation, enumerate_all: bool = False) -> PieceTable:
    """Exact maximum piece length per relator.

    Fast path: sort the closure members; the longest common prefix of a
    member with any other member is attained at a lexicographic neighbour,
    so one sorted sweep finds every relator's longest piece.
    """
    if not p.relators:
        return PieceTable((), (), (), () if enumerate_all else None)
    cl = closure(p)
    members = cl.members
    order = sorted(range(len(members)), key=lambda i: members[i])
    best_len = [0] * len(members)
    best_other: list[Word | None] = [None] * len(members)
    for a, b in zip(order, order[1:]):
        k = _lcp(members[a], members[b])
        if k > best_len[a]:
            best_len[a], best_other[a] = k, members[b]
        if k > best_len[b]:
            best_len[b], best_other[b] = k, members[a]
    n_rel = len(p.relators)
    per_rel = _members_per_relator(p, members)
    max_len = [0] * n_rel
    witness: list[tuple[Word, Word, Word] | None] = [None] * n_rel
    for rel_idx in range(n_rel):
        for i in sorted(per_rel[rel_idx]):
            if best_len[i] > max_len[rel_idx]:
                m = members[i]
                max_len[rel_idx] = best_len[i]
                witness[rel_idx] = (m[: best_len[i]], m, best_other[i])
    all_pieces = None
    if enumerate_all:
        sets: list[set[Word]] = [set() for _ in range(n_rel)]
        for rel_idx in range(n_rel):
            for i in per_rel[rel_idx]:
                for k in range(1, best_len[i] + 1):
                    sets[rel_idx].add(members[i][:k])
        all_pieces = tuple(frozenset(s) for s in sets)
    return PieceTable(
        tuple(len(r) for r in p.relators), tuple(max_len), tuple(witness), all_pieces
    )


@dataclass(frozen=True)
class Witness:
    relator_index: int
    relator_length: int
    piece: Word
    piece_length: int
    bound: Fraction

    def to_json(self, p: Presentation) -> dict:
        return {
            "relator_index": self.relator_index,
            "relator_length": self.relator_length,
            "piece": p.text(self.piece),
            "piece_length": self.piece_length,
            "bound": str(self.bound),
        }


@dataclass(frozen=True)
class CheckVerdict:
    passed: bool
    witnesses: tuple[Witness, ...]
    detail: dict | None = None

    def to_json(self, p: Presentation) -> dict:
        out = {
            "verdict": "PASS" if self.passed else "FAIL",
            "witnesses": [w.to_json(p) for w in self.witnesses],
        }
        if self.detail:
            out.update(self.detail)
        return out


def check_cprime_lambda(p: Presentation, lam: Fraction) -> CheckVerdict:
    """C'(lambda): every piece of every relator r has |piece| < lambda * |r|.

    Strict inequality; ties fail.  The witness is the offending piece.
    """
    if lam <= 0:
        raise ValueError("lambda must be positive")
    table = pieces(p)
    bad = []
    for idx, (length, mx) in enumerate(zip(table.relator_lengths, table.max_piece_len)):
        if mx >= lam * length:
            piece = table.witnesses[idx][0] if table.witnesses[idx] else ()
            bad.append(Witness(idx, length, piece, mx, lam * length))
    return CheckVerdict(not bad, tuple(bad), {"lambda": str(lam)})


@dataclass(frozen=True)
class FunctionSample:
    """A function on the integer interval [1, domain_max], exact rationals.

    Asymptotic notions (viable, sublinear) only make sense as sampled
    predicates here; the domain is always recorded with any verdict built
    from one of these.
    """

    domain_max: int
    values: tuple[Fraction, ...]
    non_decreasing: bool = False
    note: str = ""

    def __post_init__(self):
        if self.domain_max < 1 or len(self.values) != self.domain_max:
            raise ValueError("values must cover [1, domain_max]")
        if any(v < 0 for v in self.values):
            raise ValueError("values must be nonnegative")
        if self.non_decreasing and any(
            a > b for a, b in zip(self.values, self.values[1:])
        ):
            raise ValueError("non_decreasing flag asserted but values decrease")

    @classmethod
    def constant(cls, value, domain_max: int) -> "FunctionSample":
        v = Fraction(value)
        return cls(domain_max, (v,) * domain_max, non_decreasing=True)

    @classmethod
    def from_values(cls, values: Sequence, note: str = "") -> "FunctionSample":
        vals = tuple(Fraction(v) for v in values)
        mono = all(a <= b for a, b in zip(vals, vals[1:]))
        return cls(len(vals), vals, non_decreasing=mono, note=note)

    def __call__(self, t: int) -> Fraction:
        if not 1 <= t <= self.domain_max:
            raise ValueError(f"t={t} outside sampled domain [1, {self.domain_max}]")
        return self.values[t - 1]

    def is_viable_on_domain(self) -> bool:
        """f(n) >= 6 and non-decreasing on the sampled domain."""
        if any(v < 6 for v in self.values):
            return False
        return all(a <= b for a, b in zip(self.values, self.values[1:]))


def _require_viable(f: FunctionSample, needed: int) -> None:
    if f.domain_max < needed:
        raise ValueError(f"f not defined up to {needed} (domain_max={f.domain_max})")
    if not f.is_viable_on_domain():
        raise ValueError("f is not viable on its sampled domain (needs f >= 6, non-decreasing)")


def check_cprime_f(p: Presentation, f: FunctionSample) -> CheckVerdict:
    """C'(1/f): every piece of r satisfies |piece| < |r| / f(|r|).

    Also reports the induced intersection bound rho(n) = n / f(n) on the
    sampled domain.
    """
    _require_viable(f, p.max_relator_length)
    table = pieces(p)
    bad = []
    for idx, (length, mx) in enumerate(zip(table.relator_lengths, table.max_piece_len)):
        bound = Fraction(length) / f(length)
        if mx >= bound:
            piece = table.witnesses[idx][0] if table.witnesses[idx] else ()
            bad.append(Witness(idx, length, piece, mx, bound))
    rho = tuple(Fraction(n) / f(n) for n in range(1, f.domain_max + 1))
    return CheckVerdict(not bad, tuple(bad), {"induced_rho": [str(v) for v in rho]})


def _common_subword_longest(x: Word, m: Word) -> Word:
    """Longest common (contiguous) subword, lexicographically-first witness."""
    best: Word = ()
    if not x or not m:
        return best
    # quadratic scan is fine here: only used against closure members
    prev = [0] * (len(m) + 1)
    best_len, best_end = 0, 0
    for i in range(1, len(x) + 1):
        cur = [0] * (len(m) + 1)
        for j in range(1, len(m) + 1):
            if x[i - 1] == m[j - 1]:
                cur[j] = prev[j - 1] + 1
                if cur[j] > best_len:
                    best_len, best_end = cur[j], i
        prev = cur
    return x[best_end - best_len : best_end]


@dataclass(frozen=True)
class PairVerdict:
    passed: bool
    witness: Word | None
    witness_member: Word | None
    member_length: int | None
    bound: Fraction | None


def check_pair_cprime_f(x: Word, p: Presentation, f: FunctionSample) -> PairVerdict:
    """Pair condition: every common subword of x and a closure member r
    satisfies |p| < |r| / f(|r|).  FAIL carries the longest offender."""
    _require_viable(f, p.max_relator_length)
    worst: tuple[int, Word, Word, Fraction] | None = None
    for m in closure(p).members:
        w = _common_subword_longest(x, m)
        bound = Fraction(len(m)) / f(len(m))
        if len(w) >= bound:
            if worst is None or len(w) > worst[0]:
                worst = (len(w), w, m, bound)
    if worst is None:
        return PairVerdict(True, None, None, None, None)
    return PairVerdict(False, worst[1], worst[2], len(worst[2]), worst[3])


@dataclass(frozen=True)
class IpscVerdict:
    passed: bool
    length_ok: bool
    fraction_ok: bool
    pair: PairVerdict | None


def ipsc_witness_check(
    p: Presentation,
    i: int,
    r: Word,
    split: int,
    n: FunctionSample,
    f: FunctionSample,
) -> IpscVerdict:
    """Check one finite witness of the increasing partial small-cancellation
    condition: (i) |r| >= n(i), (ii) |x| >= |r|/i for x the length-``split``
    prefix of r, (iii) the pair (x, R) satisfies C'(1/f)."""
    if i < 1:
        raise ValueError("i must be >= 1")
    if r not in closure(p).member_set():
        raise ValueError("r is not a member of the symmetrized closure")
    if not 0 < split <= len(r):
        raise ValueError("split must be in (0, |r|]")
    x = r[:split]
    length_ok = len(r) >= n(i)
    fraction_ok = Fraction(len(x)) >= Fraction(len(r), i)
    pair = None
    passed = length_ok and fraction_ok
    if passed:
        pair = check_pair_cprime_f(x, p, f)
        passed = pair.passed
    return IpscVerdict(passed, length_ok, fraction_ok, pair)


def construct_g(
    m: Sequence[int], l: Sequence[int], domain_max: int
) -> FunctionSample:
    """Sampled minimum of the staircase family g_i(t) = t if t <= l_i else t/m_i.

    Beyond the supplied prefixes the implicit next g_i is the identity, so
    g(t) = min(t, min_i g_i(t)) on [1, domain_max].
    """
    if len(m) != len(l):
        raise ValueError("m and l must have equal length")
    if any(a >= b for a, b in zip(m, m[1:])) or any(a >= b for a, b in zip(l, l[1:])):
        raise ValueError("m and l must be strictly increasing")
    if any(v < 1 for v in m):
        raise ValueError("m values must be positive")
    values = []
    for t in range(1, domain_max + 1):
        best = Fraction(t)
        for mi, li in zip(m, l):
            gi = Fraction(t) if t <= li else Fraction(t, mi)
            if gi < best:
                best = gi
        values.append(best)
    return FunctionSample(domain_max, tuple(values))


def derive_viable_from_sublinear(g: FunctionSample) -> FunctionSample:
    """Turn a sampled sublinear g into a sampled viable f.

    f'(n) = n/g(n); f''(n) = min over k in [n, domain_max] of f'(k);
    f(n) = max(6, f''(n)).  The inner minimum is a finite-domain
    approximation of a minimum over all k >= n, recorded in the note.
    """
    if any(v == 0 for v in g.values):
        raise ValueError("g has a zero value")
    n = g.domain_max
    fprime = [Fraction(t) / g(t) for t in range(1, n + 1)]
    fsecond = list(fprime)
    for t in range(n - 2, -1, -1):
        if fsecond[t + 1] < fsecond[t]:
            fsecond[t] = fsecond[t + 1]
    values = tuple(max(Fraction(6), v) for v in fsecond)
    return FunctionSample(
        n,
        values,
        non_decreasing=True,
        note=f"tail minimum truncated at domain_max={n}",
    )
