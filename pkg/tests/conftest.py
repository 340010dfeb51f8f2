import random

import pytest

from derivalg.freealg import Element, Signature, enumerate_reduced


def random_word(sig, length, rng):
    words = enumerate_reduced(sig, length)
    return words[rng.randrange(len(words))] if words else None


def random_element(sig, rng, max_length=3, terms=2):
    """A small random combination of words of length <= max_length."""
    acc = {}
    for _ in range(terms):
        lengths = [l for l in range(1, max_length + 1) if enumerate_reduced(sig, l)]
        w = random_word(sig, rng.choice(lengths), rng)
        c = rng.randint(-3, 3)
        if w is not None and c:
            acc[w] = acc.get(w, 0) + c
    return Element(sig, acc)


def random_derivation(sig, rng, max_length=3, terms=2):
    from derivalg.deriv import Derivation

    coords = tuple(
        random_element(sig, rng, max_length, terms)
        for _ in range(sig.num_generators)
    )
    return Derivation(sig, coords)


@pytest.fixture
def rng():
    return random.Random(20260815)
