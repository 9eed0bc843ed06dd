import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from morselab.cayley import build_ball
from morselab.words import Presentation

# ---------------------------------------------------------------------------
# Fixture corpus.  The one-relator words below were found by randomized
# search and are re-certified against the brute-force piece oracle in
# test_smallcancel/test_acceptance, so nothing here is taken on trust.
#
# (name, gens, relators, facts) where facts notes the expected verdicts.
# ---------------------------------------------------------------------------

W13 = "ABababAbbAAAb"  # 2 gens, max piece 2: C'(1/6), not C'(1/9)
W14 = "bAbAAbaBBAABBa"  # 2 gens, max piece 2: C'(1/6)
W20 = "BABabaBabAAbbbaaBBAA"  # 2 gens, max piece 3: C'(1/6)
W28 = "abAbabaabbAAbbbaBAbaBababbaa"  # 2 gens, max piece 3: C'(1/9)
W8_3 = "CBAAcacB"  # 3 gens, max piece 1: C'(1/6)
W10_3 = "cbaccabCBB"  # 3 gens, max piece 1: C'(1/9)
W9_4 = "DBdBDAAca"  # 4 gens, max piece 1: C'(1/6)

CORPUS_SPEC = [
    ("free1", "a", ()),
    ("free2", "a b", ()),
    ("free3", "a b c", ()),
    ("z2", "a b", ("abAB",)),
    ("torus_like", "a b", ("aabb",)),
    ("genus2", "a b c d", ("abABcdCD",)),
    ("genus3", "a b c d e f", ("abABcdCDefEF",)),
    ("abc", "a b c", ("abc",)),
    ("w13", "a b", (W13,)),
    ("w14", "a b", (W14,)),
    ("w20", "a b", (W20,)),
    ("w28", "a b", (W28,)),
    ("w8_3", "a b c", (W8_3,)),
    ("w10_3", "a b c", (W10_3,)),
    ("w9_4", "a b c d", (W9_4,)),
    ("w13_pair", "a b", (W13, "abaBaabbABB")),
    ("w8_pair", "a b c", (W8_3, "acbACBcb")),
    ("bs_like", "a b", ("abaBB",)),
    ("w13_conj", "a b", (W13, W13[5:] + W13[:5])),
    ("pentagon", "a b c d e", ("abcde",)),
    ("ab_square", "a b", ("abab",)),
    ("z2_3gen", "a b c", ("abAB", "acAC")),
]


@pytest.fixture(scope="session")
def corpus() -> dict[str, Presentation]:
    return {
        name: Presentation.make(gens, rels) for name, gens, rels in CORPUS_SPEC
    }


# Presentations whose balls are reused across test modules, keyed by
# (corpus name, radius).  Session scoped: ball construction dominates the
# suite runtime otherwise.
_BALL_PLAN = {
    ("free2", 4): None,
    ("free2", 6): None,
    ("free2", 8): None,
    ("free1", 5): None,
    ("free3", 4): None,
    ("abc", 4): None,
    ("genus2", 4): None,
    ("genus3", 4): None,
    ("w13", 9): None,
    ("w14", 9): None,
    ("w8_3", 6): None,
    ("w10_3", 6): None,
    ("w28", 8): None,
}


@pytest.fixture(scope="session")
def balls(corpus):
    cache: dict[tuple[str, int], object] = {}

    def get(name: str, radius: int):
        key = (name, radius)
        if key not in cache:
            cache[key] = build_ball(corpus[name], radius)
        return cache[key]

    return get
