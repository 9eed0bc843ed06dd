import random
from fractions import Fraction

import pytest

from morselab.cayley import GeodesicPath, Uncertified, geodesic
from morselab.metrics import (
    MorseGaugeSample,
    bgi_constant,
    contraction_constant,
    horofunction_separation,
    horofunction_value,
    intersection_function,
    local_intersection_ok,
    relator_length_bound,
    worst_geodesic,
)
from morselab.smallcancel import FunctionSample

from oracles import brute_intersection_profile


def random_reduced(p, rng, length):
    letters = [x for k in range(1, p.alphabet.size + 1) for x in (k, -k)]
    out = []
    for _ in range(length):
        out.append(rng.choice([s for s in letters if not out or s != -out[-1]]))
    return tuple(out)


def test_profile_free_group_is_zero(corpus):
    p = corpus["free2"]
    prof = intersection_function(p, p.word("abABab"), 10)
    assert prof.rho == (0,) * 10


def test_profile_relator_prefix(corpus):
    p = corpus["w8_3"]
    r = p.relators[0]
    x = r[:5]
    prof = intersection_function(p, x, 12)
    for t in range(1, 8):
        assert prof(t) == 0
    for t in range(8, 13):
        assert prof(t) == 5


def test_profile_matches_bruteforce(corpus):
    rng = random.Random(3)
    for name in ("genus3", "w13", "w8_3"):
        p = corpus[name]
        tmax = p.max_relator_length + 2
        for _ in range(8):
            path = random_reduced(p, rng, rng.randrange(0, 16))
            prof = intersection_function(p, path, tmax)
            assert list(prof.rho) == brute_intersection_profile(p, path, tmax)


def test_profile_monotone_in_t_and_extension(corpus):
    rng = random.Random(4)
    p = corpus["w13"]
    path = random_reduced(p, rng, 12)
    prof = intersection_function(p, path, 15)
    assert all(a <= b for a, b in zip(prof.rho, prof.rho[1:]))
    sub = intersection_function(p, path[:7], 15)
    assert all(a <= b for a, b in zip(sub.rho, prof.rho))


def test_profile_witnesses_are_common_subwords(corpus):
    p = corpus["w13"]
    prof = intersection_function(p, p.relators[0][:6], 13)
    for t in range(1, 14):
        wit = prof.witnesses[t - 1]
        if wit is None:
            assert prof(t) == 0
            continue
        sub, member = wit
        assert len(sub) == prof(t)
        assert len(member) <= t
        text = p.text(sub)
        assert text in p.text(member) and text in p.text(p.relators[0][:6])


def test_relator_cycle_geodesic_has_big_intersection(corpus, balls):
    # a geodesic running along a relator cycle certifies non-Morse behaviour
    # at that scale: rho(|r|) >= min(|path|, |r|/2)
    for name, radius in (("w13", 9), ("w8_3", 6)):
        p = corpus[name]
        r = p.relators[0]
        half = len(r) // 2
        path = r[:half]
        prof = intersection_function(p, path, len(r))
        assert prof(len(r)) >= min(len(path), half)


def test_local_check_window_equals_global_when_L_big(corpus):
    p = corpus["w13"]
    path = p.relators[0][:6]
    bound = FunctionSample.constant(5, 13)
    full = local_intersection_ok(p, path, len(path) + 3, bound)
    prof = intersection_function(p, path, 13)
    assert full.passed == all(prof(t) <= 5 for t in range(1, 14))


def test_local_check_zero_bound_fails_on_contact(corpus):
    p = corpus["w13"]
    bound = FunctionSample.constant(0, 13)
    got = local_intersection_ok(p, p.relators[0][:2], 4, bound)
    assert not got.passed


def test_local_check_windows_match_recompute(corpus):
    p = corpus["w8_3"]
    rng = random.Random(9)
    bound = FunctionSample.constant(2, 8)
    for _ in range(6):
        path = random_reduced(p, rng, 10)
        got = local_intersection_ok(p, path, 4, bound)
        expect = True
        for i in range(len(path) - 3):
            prof = intersection_function(p, path[i : i + 4], 8)
            if any(prof(t) > 2 for t in range(1, 9)):
                expect = False
        assert got.passed == expect


def axis_path(ball, p, letter, length):
    vs = [0]
    for _ in range(length):
        vs.append(ball.edges[vs[-1]][p.alphabet.letter_from_char(letter)])
    word = tuple([p.alphabet.letter_from_char(letter)] * length)
    return GeodesicPath(tuple(vs), word)


def test_contraction_tree_axis_is_zero(corpus, balls):
    b = balls("free2", 4)
    p = corpus["free2"]
    rep = contraction_constant(b, axis_path(b, p, "a", 3))
    assert rep.constant == 0
    assert rep.tested > 0


def test_contraction_single_vertex(corpus, balls):
    b = balls("free2", 4)
    rep = contraction_constant(b, GeodesicPath((0,), ()))
    assert rep.constant == 0


def test_contraction_relator_geodesic(corpus, balls):
    # along a relator cycle the projection of nearby balls can spread:
    # value is exact by enumeration, witness reproduces it
    b = balls("w8_3", 6)
    p = corpus["w8_3"]
    g = geodesic(b, 0, b.vertex(p.relators[0][:4]))
    rep = contraction_constant(b, g)
    assert 0 <= rep.constant <= len(p.relators[0])
    if rep.witness_pair is not None:
        u, v = rep.witness_pair
        assert b.certified_distance(u, v) == rep.constant


def test_bgi_tree_axis(corpus, balls):
    b = balls("free2", 4)
    p = corpus["free2"]
    rep = bgi_constant(b, axis_path(b, p, "a", 2))
    assert rep.constant == 1


def test_bgi_monotone_in_radius(corpus, balls):
    p = corpus["free2"]
    from morselab.cayley import build_ball

    small = bgi_constant(build_ball(p, 3), axis_path(build_ball(p, 3), p, "a", 2))
    big = bgi_constant(balls("free2", 4), axis_path(balls("free2", 4), p, "a", 2))
    assert big.constant >= small.constant


def test_bgi_degenerate_unbounded():
    from morselab.cayley import build_ball
    from morselab.words import Presentation

    p = Presentation.make("a")
    b = build_ball(p, 1)
    # path spans the whole diameter of a thin ball: nothing is far from it
    path = GeodesicPath((1, 0, 2), (-1, 1))
    rep = bgi_constant(b, path)
    assert rep.constant == 0 or rep.constant is None  # all geodesics touch the path
    b2 = build_ball(p, 0)
    rep2 = bgi_constant(b2, GeodesicPath((0,), ()))
    assert rep2.constant == 0


def test_relator_length_bound_formula():
    assert relator_length_bound(MorseGaugeSample.of(10, 10), 2) == 40
    assert relator_length_bound(MorseGaugeSample.of(6, 6, 6), 3) == 18
    assert relator_length_bound(MorseGaugeSample.of(0, 0), 2) == 0
    with pytest.raises(ValueError):
        relator_length_bound(MorseGaugeSample.of(1, 1), 1)


def test_relator_length_bound_monotonicity():
    for n in (2, 3, 5):
        lo = relator_length_bound(MorseGaugeSample.of(*([3] * n)), n)
        hi = relator_length_bound(MorseGaugeSample.of(*([7] * n)), n)
        assert hi > lo
    # decreasing in N for fixed gauge value
    vals = [relator_length_bound(MorseGaugeSample.of(*([5] * n)), n) for n in (2, 3, 4)]
    assert vals[0] > vals[1] > vals[2]


def test_horofunction_values(corpus, balls):
    b = balls("free2", 4)
    p = corpus["free2"]
    y = b.vertex(p.word("ab"))
    assert horofunction_value(b, y, 0) == 0
    assert horofunction_value(b, y, y) == -2


def test_horofunction_lipschitz(corpus, balls):
    b = balls("abc", 4)
    rng = random.Random(11)
    for _ in range(80):
        y, z, z2 = (rng.randrange(len(b)) for _ in range(3))
        try:
            lhs = abs(
                horofunction_value(b, y, z) - horofunction_value(b, y, z2)
            )
            assert lhs <= b.certified_distance(z, z2)
        except Uncertified:
            continue


def test_horofunction_separation_same_ray(corpus, balls):
    b = balls("free2", 4)
    p = corpus["free2"]
    ray = geodesic(b, 0, b.vertex(p.word("aaaa")))
    rep = horofunction_separation(b, ray, ray, 1, 3)
    assert rep.gamma1_difference == 2
    assert rep.gamma2_difference == 2
    rep0 = horofunction_separation(b, ray, ray, 2, 2 + 1)
    assert rep0.gamma1_difference == 1


def test_horofunction_separation_two_rays(corpus, balls):
    # F2, a-ray versus b-ray, s=1, S=3: first difference 2, second -2
    b = balls("free2", 4)
    p = corpus["free2"]
    a_ray = geodesic(b, 0, b.vertex(p.word("aaaa")))
    b_ray = geodesic(b, 0, b.vertex(p.word("bbbb")))
    rep = horofunction_separation(b, a_ray, b_ray, 1, 3)
    assert rep.gamma1_difference == 2
    assert rep.gamma2_difference == -2


def test_worst_geodesic_finds_relator_run(corpus, balls):
    b = balls("w8_3", 6)
    word, prof = worst_geodesic(b, 4)
    assert max(prof.rho) == 4  # half of the length-8 relator is geodesic
