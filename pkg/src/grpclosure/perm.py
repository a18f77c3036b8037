"""Permutations on {0, ..., n-1} with 1-based cycle notation at the edges."""

from __future__ import annotations

import re
from typing import Sequence

from .errors import DegreeMismatch, ParseError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """A bijection of ``range(degree)`` stored as its image tuple.

    Products compose left to right: ``(p * q)(i) == q(p(i))``, so ``p * q``
    means "apply p, then q".
    """

    __slots__ = ("images", "_hash")

    def __init__(self, images: Sequence[int]):
        images = tuple(int(i) for i in images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of range({len(images)}): {images}")
        self.images = images
        self._hash = hash(images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(range(degree))

    @classmethod
    def from_cycles(cls, cycles: Sequence[Sequence[int]], degree: int) -> Permutation:
        """Build from 0-based cycles."""
        images = list(range(degree))
        seen: set[int] = set()
        for cyc in cycles:
            for a in cyc:
                if not 0 <= a < degree:
                    raise ValueError(f"point {a + 1} outside degree {degree}")
                if a in seen:
                    raise ValueError(f"point {a + 1} occurs twice")
                seen.add(a)
            for a, b in zip(cyc, list(cyc[1:]) + list(cyc[:1])):
                images[a] = b
        return cls(images)

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> Permutation:
        """Parse 1-based cycle notation such as ``"(1 2 3)(4 5)"`` or ``"()"``.

        Entries inside a cycle may be separated by whitespace or commas.  When
        ``degree`` is omitted the largest point mentioned is used.
        """
        cycles: list[list[int]] = []
        pos = 0
        stripped = text.strip()
        offset = len(text) - len(text.lstrip())
        for m in _CYCLE_RE.finditer(stripped):
            gap = stripped[pos:m.start()]
            if gap.strip():
                raise ParseError(f"unexpected {gap.strip()!r} in permutation {text!r}",
                                 column=offset + pos + 1)
            body = m.group(1).replace(",", " ").split()
            cyc = []
            for tok in body:
                if not tok.isdigit() or int(tok) < 1:
                    col = offset + m.start() + 1 + m.group(1).find(tok) + 1
                    raise ParseError(f"bad point {tok!r} in permutation {text!r}", column=col)
                cyc.append(int(tok) - 1)
            if cyc:
                cycles.append(cyc)
            pos = m.end()
        if stripped[pos:].strip() or not stripped:
            raise ParseError(f"malformed permutation {text!r}", column=offset + pos + 1)
        top = max((a for c in cycles for a in c), default=-1) + 1
        if degree is None:
            degree = max(top, 1)
        elif top > degree:
            raise DegreeMismatch(f"permutation {text!r} moves point {top} beyond degree {degree}")
        try:
            return cls.from_cycles(cycles, degree)
        except ValueError as exc:
            raise ParseError(f"{exc} in permutation {text!r}", column=offset + 1) from None

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point]

    def __mul__(self, other: Permutation) -> Permutation:
        if other.degree != self.degree:
            raise DegreeMismatch(f"degrees {self.degree} and {other.degree} differ")
        q = other.images
        return Permutation([q[i] for i in self.images])

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point (0-based)."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            j = self.images[start]
            while j != start:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm
        return lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def __str__(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(str(a + 1) for a in c) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({str(self)!r}, degree={self.degree})"

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return self._hash
