"""Words and conjugacy classes in the free group F_n.

A letter is a nonzero integer: ``i`` stands for the generator x_i and ``-i``
for its inverse.  A word is a tuple of letters.  Letters are ordered
x_1 < x_1^{-1} < x_2 < x_2^{-1} < ..., and words by length, then
lexicographically in that letter order.

Text syntax: ``a``..``z`` are x_1..x_26, upper case letters are inverses, so
``"abA"`` is x_1 x_2 x_1^{-1}.
"""
from __future__ import annotations

import string
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator

from .errors import IdentityWord, WordParseError

Word = tuple  # tuple[int, ...]

_LOWER = string.ascii_lowercase


def letter_key(letter: int) -> int:
    """Position of ``letter`` in the order x1 < x1^-1 < x2 < x2^-1 < ..."""
    return 2 * (abs(letter) - 1) + (1 if letter < 0 else 0)


def word_key(w: Word) -> tuple:
    return (len(w), tuple(letter_key(x) for x in w))


def free_reduce(w: Iterable[int]) -> Word:
    """Cancel adjacent inverse pairs until none remain."""
    out: list[int] = []
    for x in w:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def cyclic_reduce(w: Iterable[int]) -> Word:
    """Return a cyclically reduced conjugate of ``w``."""
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == -w[j - 1]:
        i += 1
        j -= 1
    return w[i:j]


def rotations(w: Word) -> Iterator[Word]:
    for i in range(len(w)):
        yield w[i:] + w[:i]


def _canonical_rep(w: Word) -> Word:
    # w is cyclically reduced and nonempty
    best = w
    bkey = word_key(w)
    for cand in rotations(w):
        k = word_key(cand)
        if k < bkey:
            best, bkey = cand, k
    for cand in rotations(inverse(w)):
        k = word_key(cand)
        if k < bkey:
            best, bkey = cand, k
    return best


@dataclass(frozen=True, order=False)
class ConjugacyClass:
    """A nontrivial conjugacy class, identified with its inverse class.

    ``rep`` is the least rotation of the word or of its inverse under the
    length-then-lex order.
    """

    rep: Word

    @property
    def length(self) -> int:
        return len(self.rep)

    def sort_key(self) -> tuple:
        return word_key(self.rep)

    def __lt__(self, other: "ConjugacyClass") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return format_word(self.rep)


def canonical_class(w: Iterable[int]) -> ConjugacyClass:
    c = cyclic_reduce(w)
    if not c:
        raise IdentityWord("the word reduces to the identity")
    return ConjugacyClass(_canonical_rep(c))


def is_canonical(w: Word) -> bool:
    """True if ``w`` is the canonical representative of its class."""
    if not w or cyclic_reduce(w) != w:
        return False
    return _canonical_rep(w) == w


# -- enumeration --------------------------------------------------------------

_class_cache: dict[tuple[int, int], tuple[ConjugacyClass, ...]] = {}
_class_lock = threading.Lock()


def _letters(n: int) -> list[int]:
    out = []
    for i in range(1, n + 1):
        out.extend((i, -i))
    return out


def classes_of_length(n: int, length: int) -> tuple[ConjugacyClass, ...]:
    """All canonical classes of exactly ``length`` letters, in W-order."""
    key = (n, length)
    cached = _class_cache.get(key)
    if cached is not None:
        return cached
    letters = _letters(n)
    found: list[ConjugacyClass] = []
    first_key = letter_key

    def extend(prefix: list[int]):
        if len(prefix) == length:
            w = tuple(prefix)
            if w[0] != -w[-1] and _canonical_rep(w) == w:
                found.append(ConjugacyClass(w))
            return
        for x in letters:
            if prefix and x == -prefix[-1]:
                continue
            # a canonical rep starts with its least letter
            if prefix and first_key(x) < first_key(prefix[0]):
                continue
            prefix.append(x)
            extend(prefix)
            prefix.pop()

    if length > 0:
        extend([])
    result = tuple(found)
    with _class_lock:
        _class_cache[key] = result
    return result


class ClassStream:
    """Iterator over the conjugacy classes of F_n in W-order.

    Lengths are non-decreasing and ties are broken lexicographically on the
    canonical representative.  Each consumer gets an independent cursor.
    """

    def __init__(self, n: int, max_length: int | None = None):
        if n < 1:
            raise ValueError("rank must be positive")
        self.rank = n
        self.max_length = max_length
        self._length = 1
        self._index = 0

    def __iter__(self) -> "ClassStream":
        return self

    def __next__(self) -> ConjugacyClass:
        while True:
            if self.max_length is not None and self._length > self.max_length:
                raise StopIteration
            layer = classes_of_length(self.rank, self._length)
            if self._index < len(layer):
                c = layer[self._index]
                self._index += 1
                return c
            self._length += 1
            self._index = 0


def enumerate_classes(n: int, max_length: int | None = None) -> ClassStream:
    if n < 2:
        raise ValueError("enumeration is defined for rank n >= 2")
    return ClassStream(n, max_length)


def classes_up_to(n: int, max_length: int) -> list[ConjugacyClass]:
    return list(ClassStream(n, max_length))


# -- text syntax ---------------------------------------------------------------

def parse_word(text: str, n: int | None = None) -> Word:
    """Parse ``"abA"`` style text; ``"1"`` or ``""`` is the empty word."""
    text = text.strip()
    if text in ("", "1", "e"):
        return ()
    letters = []
    for pos, ch in enumerate(text):
        if ch in _LOWER:
            x = _LOWER.index(ch) + 1
        elif ch in string.ascii_uppercase:
            x = -(string.ascii_uppercase.index(ch) + 1)
        else:
            raise WordParseError(text, pos, f"unexpected character {ch!r}")
        if n is not None and abs(x) > n:
            raise WordParseError(text, pos, f"generator {ch!r} exceeds rank {n}")
        letters.append(x)
    return free_reduce(letters)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return "".join(_LOWER[x - 1] if x > 0 else _LOWER[-x - 1].upper() for x in w)
