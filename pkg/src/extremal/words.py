"""Fibonacci words over {a, b} and their images in GL2(Z)."""
from __future__ import annotations

from functools import lru_cache

from .triples import IDENTITY, Matrix, mat_mul


def fibonacci_words(i: int) -> str:
    """``w_i`` with ``w_0 = b``, ``w_1 = a`` and ``w_i = w_{i-1} w_{i-2}``."""
    prev, cur = "b", "a"
    if i == 0:
        return prev
    for _ in range(i - 1):
        prev, cur = cur, cur + prev
    return cur


def fibonacci_word(n: int) -> str:
    """First ``n`` letters of the fixed point of ``a -> ab, b -> a``."""
    word = "a"
    while len(word) < n:
        word = "".join("ab" if c == "a" else "a" for c in word)
    return word[:n]


@lru_cache(maxsize=None)
def fibonacci_prefix(k: int) -> str:
    """``m_k``: the word ``w_{k+2}`` with its last two letters removed.

    Built by ``m_0 = ''``, ``m_1 = 'a'``, ``m_k = m_{k-1} s m_{k-2}`` where
    ``s = 'ab'`` for odd ``k`` and ``'ba'`` for even ``k``.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return ""
    if k == 1:
        return "a"
    s = "ab" if k % 2 else "ba"
    return fibonacci_prefix(k - 1) + s + fibonacci_prefix(k - 2)


def morphism_image(word: str, seed) -> Matrix:
    """Image of ``word`` under the monoid morphism ``a -> A``, ``b -> B``."""
    images = {"a": seed.A, "b": seed.B}
    out = IDENTITY
    for letter in word:
        out = mat_mul(out, images[letter])
    return out


def letters_to_quotients(word: str, a: int, b: int) -> list[int]:
    return [a if c == "a" else b for c in word]
