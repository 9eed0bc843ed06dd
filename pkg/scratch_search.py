"""Dev-time search for one-relator small-cancellation fixtures (not shipped)."""
import itertools
import random

from morselab.words import Alphabet, Presentation, is_cyclically_reduced
from morselab.smallcancel import pieces


def brute_max_piece(p):
    from morselab.smallcancel import closure

    members = closure(p).members
    best = {i: 0 for i in range(len(p.relators))}
    for a, b in itertools.combinations(range(len(members)), 2):
        ma, mb = members[a], members[b]
        k = 0
        while k < min(len(ma), len(mb)) and ma[k] == mb[k]:
            k += 1
        if k:
            for i, r in enumerate(p.relators):
                # is members[a][:k] a subword of some member of r? approximate by updating both
                pass
    return best


def search(ngens, length, max_piece, tries=200000, seed=1):
    rng = random.Random(seed)
    alph = Alphabet(tuple("abcdef"[:ngens]))
    letters = [x for k in range(1, ngens + 1) for x in (k, -k)]
    for _ in range(tries):
        w = []
        for i in range(length):
            choices = [x for x in letters if not w or x != -w[-1]]
            if i == length - 1:
                choices = [x for x in choices if x != -w[0]]
                if not choices:
                    break
            w.append(rng.choice(choices))
        else:
            w = tuple(w)
            if not is_cyclically_reduced(w):
                continue
            p = Presentation(alph, (w,))
            t = pieces(p)
            if t.max_piece_len[0] <= max_piece:
                return p, w, t.max_piece_len[0]
    return None


for ngens, length, mp, name in [
    (2, 13, 2, "w13 C'(1/6) 2gen"),
    (2, 14, 2, "w14 C'(1/6) 2gen"),
    (3, 8, 1, "w8 C'(1/6) 3gen"),
    (3, 10, 1, "w10 C'(1/9) 3gen"),
    (2, 28, 3, "w28 C'(1/9) 2gen"),
    (2, 20, 3, "w20 C'(1/6) 2gen"),
    (4, 9, 1, "w9 C'(1/9) 4gen"),
]:
    got = search(ngens, length, mp)
    if got:
        p, w, actual = got
        print(f"{name}: {p.text(w)}  max_piece={actual}  len={length}")
    else:
        print(f"{name}: NOT FOUND")
