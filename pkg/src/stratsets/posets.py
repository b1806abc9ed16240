"""Finite posets and monotone color words.

A color word is a weakly increasing sequence of poset elements; a word of
length N+1 names the filtered simplex of dimension N lying over the nerve
of the poset.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Iterable, Iterator


class PosetError(ValueError):
    pass


class Poset:
    """A finite poset, stored with its full order relation.

    Immutable after construction; safe to share.
    """

    __slots__ = ("elements", "_leq", "_key")

    def __init__(self, elements: Iterable[str], leq_pairs: Iterable[tuple[str, str]]):
        self.elements = tuple(sorted(set(elements)))
        universe = set(self.elements)
        rel = {(a, a) for a in self.elements}
        for a, b in leq_pairs:
            if a not in universe or b not in universe:
                raise PosetError(f"relation {a}<={b} mentions unknown element")
            rel.add((a, b))
        # transitive closure
        changed = True
        while changed:
            changed = False
            for (a, b), (c, d) in product(tuple(rel), tuple(rel)):
                if b == c and (a, d) not in rel:
                    rel.add((a, d))
                    changed = True
        for a, b in rel:
            if a != b and (b, a) in rel:
                raise PosetError(f"antisymmetry fails on {a},{b}")
        self._leq = frozenset(rel)
        self._key = (self.elements, tuple(sorted(self._leq)))

    @classmethod
    def chain(cls, *elements: str) -> "Poset":
        pairs = [(elements[i], elements[i + 1]) for i in range(len(elements) - 1)]
        return cls(elements, pairs)

    @classmethod
    def antichain(cls, *elements: str) -> "Poset":
        return cls(elements, [])

    @classmethod
    def from_covers(cls, elements: Iterable[str], covers: Iterable[tuple[str, str]]) -> "Poset":
        return cls(elements, covers)

    def leq(self, a: str, b: str) -> bool:
        return (a, b) in self._leq

    def lt(self, a: str, b: str) -> bool:
        return a != b and (a, b) in self._leq

    def __eq__(self, other):
        return isinstance(other, Poset) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        strict = sorted((a, b) for a, b in self._leq if a != b)
        return f"Poset({list(self.elements)}, {strict})"

    def cover_pairs(self) -> list[tuple[str, str]]:
        """Covering relations a < b with nothing strictly between."""
        out = []
        for a, b in sorted(self._leq):
            if a == b:
                continue
            if any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                continue
            out.append((a, b))
        return out

    def is_monotone(self, word: tuple[str, ...]) -> bool:
        return all(self.leq(word[i], word[i + 1]) for i in range(len(word) - 1))

    def monotone_words(self, length: int) -> Iterator[tuple[str, ...]]:
        """All weakly increasing words of the given length, in sorted order."""

        def extend(prefix):
            if len(prefix) == length:
                yield prefix
                return
            for e in self.elements:
                if not prefix or self.leq(prefix[-1], e):
                    yield from extend(prefix + (e,))

        yield from extend(())

    def strict_chains(self, max_length: int | None = None) -> list[tuple[str, ...]]:
        """All nonempty strictly increasing chains; the nondegenerate nerve simplices."""
        top = max_length if max_length is not None else len(self.elements)
        chains: list[tuple[str, ...]] = []

        def extend(prefix):
            if prefix:
                chains.append(prefix)
            if len(prefix) == top:
                return
            for e in self.elements:
                if not prefix or self.lt(prefix[-1], e):
                    extend(prefix + (e,))

        extend(())
        return sorted(chains, key=lambda c: (len(c), c))


# ---------------------------------------------------------------------------
# Color words


def word_face(word: tuple[str, ...], i: int) -> tuple[str, ...]:
    """Delete letter i. Needs at least two letters."""
    if len(word) < 2:
        raise IndexError("face of a length-1 word")
    if not 0 <= i < len(word):
        raise IndexError(f"face index {i} out of range for word of length {len(word)}")
    return word[:i] + word[i + 1 :]


def word_degeneracy(word: tuple[str, ...], i: int) -> tuple[str, ...]:
    """Repeat letter i."""
    if not 0 <= i < len(word):
        raise IndexError(f"degeneracy index {i} out of range")
    return word[: i + 1] + word[i:]


def nondegenerate_support(word: tuple[str, ...]) -> tuple[str, ...]:
    """Strictly increasing word of the distinct letters, in order of appearance."""
    out: list[str] = []
    for q in word:
        if not out or out[-1] != q:
            out.append(q)
    return tuple(out)


def small_posets(max_size: int = 3) -> list[Poset]:
    """Representatives of all posets with at most max_size elements, up to iso."""
    catalog = [Poset.chain("p0")]
    if max_size >= 2:
        catalog += [Poset.chain("p0", "p1"), Poset.antichain("p0", "p1")]
    if max_size >= 3:
        catalog += [
            Poset.chain("p0", "p1", "p2"),
            Poset.antichain("p0", "p1", "p2"),
            Poset(["p0", "p1", "p2"], [("p0", "p1"), ("p0", "p2")]),  # V
            Poset(["p0", "p1", "p2"], [("p0", "p2"), ("p1", "p2")]),  # wedge
            Poset(["p0", "p1", "p2"], [("p0", "p1")]),  # chain plus isolated point
        ]
    if max_size >= 4:
        raise PosetError("catalog only covers sizes up to 3")
    return catalog
