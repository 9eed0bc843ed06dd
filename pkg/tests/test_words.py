import random

import pytest
from hypothesis import given, strategies as st

from morselab.words import (
    Alphabet,
    Presentation,
    PresentationSyntaxError,
    concat,
    cyclic_reduce,
    cyclic_shifts,
    format_presentation,
    free_reduce,
    inverse_word,
    is_cyclically_reduced,
    is_reduced,
    parse_presentation,
    reduced_words,
    shortlex_key,
)

AB = Alphabet(("a", "b"))


def w(text):
    return AB.word_from_str(text)


letters = st.integers(min_value=-3, max_value=3).filter(lambda x: x != 0)
words = st.lists(letters, max_size=24).map(tuple)


def test_free_reduce_examples():
    assert free_reduce(w("abB")) == w("a")
    assert free_reduce(()) == ()
    assert free_reduce(w("aAaA")) == ()


@given(words)
def test_free_reduce_idempotent_and_shorter(xs):
    r = free_reduce(xs)
    assert free_reduce(r) == r
    assert len(r) <= len(xs)
    assert is_reduced(r)


@given(words)
def test_word_times_inverse_cancels(xs):
    assert concat(xs, inverse_word(xs)) == ()


def test_cyclic_reduce_examples():
    assert cyclic_reduce(w("abA")) == (w("b"), w("a"))
    assert cyclic_reduce(w("ab")) == (w("ab"), ())
    assert cyclic_reduce(w("BaAb")) == ((), w("Ba"))


@given(words)
def test_cyclic_reduce_core_shifts_reduced(xs):
    xs = free_reduce(xs)
    core, conj = cyclic_reduce(xs)
    for s in cyclic_shifts(core):
        assert is_reduced(s)
    assert is_cyclically_reduced(core) or core == ()
    assert free_reduce(conj + core + inverse_word(conj)) == xs


def test_parse_free_group():
    p = parse_presentation("gens: a b\n")
    assert p.alphabet.names == ("a", "b")
    assert p.relators == ()


def test_parse_z2():
    p = parse_presentation("gens: a b\nrel: abAB\n")
    assert p.relators == (w("abAB"),)


def test_parse_empty_relator_rejected():
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("gens: a b\nrel: ab\nrel: \n")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("gens: a b\nrel: aA\n")


def test_parse_errors_carry_location():
    with pytest.raises(PresentationSyntaxError) as err:
        parse_presentation("gens: a b\nrel: axb\n")
    assert err.value.line == 2
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("gens: a a\n")
    with pytest.raises(PresentationSyntaxError):
        parse_presentation("rel: ab\n")


def test_parse_comments_and_blanks():
    p = parse_presentation("# header\ngens: a b  # inline\n\nrel: abAB\n")
    assert p.relators == (w("abAB"),)


def test_normalisation_warns():
    with pytest.warns(UserWarning):
        p = Presentation.make("a b", ["abA"])  # conjugate of the core "b"
    assert all(is_cyclically_reduced(r) for r in p.relators)


def test_roundtrip(corpus):
    for p in corpus.values():
        assert parse_presentation(format_presentation(p)) == p


def test_reduced_words_count():
    assert sum(1 for _ in reduced_words(AB, 0)) == 1
    assert sum(1 for _ in reduced_words(AB, 1)) == 4
    assert sum(1 for _ in reduced_words(AB, 5)) == 4 * 3**4


def test_shortlex_key_orders_like_normal_forms():
    ws = sorted(reduced_words(AB, 2), key=shortlex_key)
    assert ws[0] == w("aa")
    rng = random.Random(0)
    sample = [tuple(rng.choice([1, -1, 2, -2]) for _ in range(4)) for _ in range(50)]
    assert sorted(sample, key=shortlex_key) == sorted(
        sample, key=lambda v: (len(v), [2 * abs(x) - 2 + (x < 0) for x in v])
    )
