"""Braid words: free group words in the generators s1..s_{m-1} of the braid
group on m strands.

Words are stored freely reduced is NOT assumed; ``free_reduce`` cancels
adjacent inverse pairs only (no braid relations are applied, so two words
can represent the same braid group element while differing as words).

Text syntax: space-separated tokens ``s3`` and ``s3^-1``; the empty string is
the identity word.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .errors import IndexOutOfRange, SchemaError

_LETTER_RE = re.compile(r"^s(?P<i>[1-9]\d*)(?:\^(?P<e>-1))?$")


@dataclass(frozen=True)
class BraidWord:
    """A word in the braid group on ``strands`` strands.

    ``letters`` is a tuple of (generator index, sign) with 1-based indices in
    1..strands-1 and signs +-1.
    """

    strands: int
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if not isinstance(self.strands, int) or self.strands < 2:
            raise ValueError("a braid word needs at least 2 strands")
        for idx, sign in self.letters:
            if not 1 <= idx <= self.strands - 1:
                raise IndexOutOfRange(
                    "letter s%d outside 1..%d" % (idx, self.strands - 1)
                )
            if sign not in (1, -1):
                raise ValueError("letter sign must be +1 or -1")

    # -- constructors -------------------------------------------------------

    @classmethod
    def identity(cls, strands: int) -> "BraidWord":
        return cls(strands, ())

    @classmethod
    def generator(cls, strands: int, index: int, sign: int = 1) -> "BraidWord":
        return cls(strands, ((index, sign),))

    @classmethod
    def from_letters(cls, strands: int, letters: Iterable[tuple[int, int]]) -> "BraidWord":
        return cls(strands, tuple((int(i), int(s)) for i, s in letters))

    # -- group operations -----------------------------------------------------

    def free_reduce(self) -> "BraidWord":
        """Cancel adjacent s_i s_i^-1 pairs until none remain."""
        stack: list[tuple[int, int]] = []
        for idx, sign in self.letters:
            if stack and stack[-1][0] == idx and stack[-1][1] == -sign:
                stack.pop()
            else:
                stack.append((idx, sign))
        return BraidWord(self.strands, tuple(stack))

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands,
                         tuple((i, -s) for i, s in reversed(self.letters)))

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if not isinstance(other, BraidWord):
            return NotImplemented
        if self.strands != other.strands:
            raise ValueError("strand count mismatch")
        return BraidWord(self.strands, self.letters + other.letters).free_reduce()

    def __pow__(self, k: int) -> "BraidWord":
        if k < 0:
            return self.inverse() ** (-k)
        out = BraidWord.identity(self.strands)
        for _ in range(k):
            out = out * self
        return out

    def __len__(self) -> int:
        return len(self.letters)

    # -- text and JSON ---------------------------------------------------------

    def format(self) -> str:
        return " ".join(
            "s%d" % i if s > 0 else "s%d^-1" % i for i, s in self.letters
        )

    @classmethod
    def parse(cls, strands: int, text: str) -> "BraidWord":
        letters = []
        for tok in text.split():
            m = _LETTER_RE.match(tok)
            if not m:
                raise ValueError("bad braid letter %r" % tok)
            letters.append((int(m.group("i")), -1 if m.group("e") else 1))
        return cls(strands, tuple(letters))

    def to_json_dict(self) -> dict:
        return {"strands": self.strands, "word": self.format()}

    @classmethod
    def from_json_dict(cls, d: dict) -> "BraidWord":
        if not isinstance(d, dict) or "strands" not in d or "word" not in d:
            raise SchemaError("braid word JSON needs 'strands' and 'word'")
        strands = d["strands"]
        if not isinstance(strands, int) or strands < 2:
            raise SchemaError("strands must be an integer >= 2")
        if not isinstance(d["word"], str):
            raise SchemaError("word must be a string")
        try:
            return cls.parse(strands, d["word"])
        except (ValueError, IndexOutOfRange) as exc:
            raise SchemaError(str(exc)) from exc

    def __str__(self) -> str:
        return self.format() or "<empty>"


def theta_word(strands: int) -> BraidWord:
    """The word s1 s2 ... s_{m-1}; its m-th power generates the center for
    m >= 3, and conjugation by it cycles the generators."""
    return BraidWord(strands, tuple((i, 1) for i in range(1, strands)))


def conjugate(w: BraidWord, g: BraidWord) -> BraidWord:
    """g w g^-1, freely reduced."""
    if w.strands != g.strands:
        raise ValueError("strand count mismatch")
    return (g * w) * g.inverse()
