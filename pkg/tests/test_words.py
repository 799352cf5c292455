import pytest

from extremal.sequence import ExtremalSequence, fibonacci_seed
from extremal.triples import Triple
from extremal.words import (fibonacci_prefix, fibonacci_word, fibonacci_words, letters_to_quotients,
                            morphism_image)
from oracles import fibonacci_word_oracle


def test_words_recursion():
    assert fibonacci_words(4) == "abaab"
    for i in range(3, 15):
        assert fibonacci_words(i) == fibonacci_words(i - 1) + fibonacci_words(i - 2)


def test_word_prefix_matches_substitution():
    assert fibonacci_word(200) == fibonacci_word_oracle(200)


def test_prefixes():
    assert fibonacci_prefix(0) == ""
    assert fibonacci_prefix(1) == "a"
    assert fibonacci_prefix(2) == "aba"
    for k in range(2, 14):
        s = "ab" if k % 2 else "ba"
        assert fibonacci_prefix(k) == fibonacci_prefix(k - 1) + s + fibonacci_prefix(k - 2)
        assert fibonacci_prefix(k) == fibonacci_words(k + 2)[:-2]


def test_morphism_examples():
    seed = fibonacci_seed(1, 2)
    assert morphism_image("", seed) == ((1, 0), (0, 1))
    assert morphism_image(fibonacci_prefix(3), seed) == ((25, 18), (18, 13))


@pytest.mark.parametrize("a, b", [(1, 2), (3, 1)])
def test_morphism_images_are_sequence_points(a, b):
    seq = ExtremalSequence.fibonacci(a, b)
    for k in range(0, 15):
        m = morphism_image(fibonacci_prefix(k), seq.seed)
        assert Triple.from_matrix(m).normalized() == seq[k]


def test_letters_to_quotients():
    assert letters_to_quotients("abaab", 1, 2) == [1, 2, 1, 1, 2]
