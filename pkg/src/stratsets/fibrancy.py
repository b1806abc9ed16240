"""Admissible horns, horn-filler search, and fibrancy checking.

A horn on a word is admissible when the deleted vertex sits at a repeated
color.  Fibrancy is only ever decided up to a word-length bound; "unknown"
(budget exhausted) is a first-class verdict.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .budget import Budget, BudgetExceeded
from .complexes import FilteredComplex, Ref, horn, identity_ref, plain_simplex, standard_simplex, tensor
from .maps import (
    FilteredMap,
    enumerate_maps,
    identity_map,
    inclusion_map,
    map_from_vertex_images,
    tensor_end_inclusion,
    vertex_sequence,
)
from .posets import Poset


def is_admissible(word: tuple[str, ...], k: int) -> bool:
    """True iff the k-th letter repeats at position k-1 or k+1."""
    n = len(word) - 1
    if not 0 <= k <= n:
        raise IndexError(f"horn index {k} out of range")
    return (k > 0 and word[k] == word[k - 1]) or (k < n and word[k] == word[k + 1])


def admissible_horns(poset: Poset, max_word_len: int) -> Iterator[tuple[tuple[str, ...], int]]:
    for length in range(2, max_word_len + 1):
        for word in poset.monotone_words(length):
            for k in range(length):
                if is_admissible(word, k):
                    yield word, k


def all_horns(poset: Poset, max_word_len: int) -> Iterator[tuple[tuple[str, ...], int]]:
    for length in range(2, max_word_len + 1):
        for word in poset.monotone_words(length):
            for k in range(length):
                yield word, k


def find_filler(X: FilteredComplex, word: tuple[str, ...], k: int, lam: FilteredMap, budget: Budget | None = None):
    """Extend a horn map to the whole simplex, or certify that none exists.

    Returns the first filler in deterministic order, or None after an
    exhaustive search.  Budget exhaustion raises BudgetExceeded.
    """
    simplex = standard_simplex(X.poset, word)
    for g, r in lam.assignment.items():
        if g not in simplex:
            raise ValueError("horn map domain does not match the horn")
    for F in enumerate_maps(simplex, X, budget, fixed=dict(lam.assignment)):
        return F
    return None


@dataclass
class FibrancyReport:
    verdict: str  # "fibrant", "not-fibrant", "unknown"
    dim_bound: int
    problems: int = 0
    witness: tuple | None = None  # (word, k, horn map)
    budget_used: int = 0

    def summary(self) -> str:
        if self.verdict == "fibrant":
            return f"fibrant up to dimension {self.dim_bound} ({self.problems} horn problems)"
        if self.verdict == "not-fibrant":
            word, k, lam = self.witness
            return f"not fibrant: no filler for the horn on {list(word)} at {k} (problem: {lam.format()})"
        return f"unknown: budget exhausted after {self.problems} problems"


def check_fibrant(X: FilteredComplex, dim_bound: int = 3, budget: Budget | None = None) -> FibrancyReport:
    """Check fillers for every admissible horn problem up to the bound.

    When X is itself a horn complex, its own identity lifting problem is
    probed first; it is the canonical witness when X is not fibrant.
    """
    budget = budget or Budget.unlimited()
    problems = 0
    try:
        if X.meta.get("kind") == "horn" and is_admissible(X.meta["word"], X.meta["k"]):
            word, k = X.meta["word"], X.meta["k"]
            if len(word) <= dim_bound + 1:
                lam = identity_map(X)
                problems += 1
                if find_filler(X, word, k, lam, budget) is None:
                    return FibrancyReport("not-fibrant", dim_bound, problems, (word, k, lam), budget.used)
        for word, k in admissible_horns(X.poset, dim_bound + 1):
            H = horn(X.poset, word, k)
            for lam in enumerate_maps(H, X, budget):
                problems += 1
                filler = find_filler(X, word, k, lam, budget)
                if filler is None:
                    return FibrancyReport("not-fibrant", dim_bound, problems, (word, k, lam), budget.used)
    except BudgetExceeded:
        return FibrancyReport("unknown", dim_bound, problems, None, budget.used)
    return FibrancyReport("fibrant", dim_bound, problems, None, budget.used)


@dataclass
class HornWitness:
    """Homotopy-equivalence data for an admissible horn inclusion."""

    word: tuple[str, ...]
    k: int
    collapsed: int  # the vertex sent to e_k
    retraction: FilteredMap  # simplex -> horn
    homotopy: FilteredMap  # simplex tensor Delta^1 -> simplex, between id and j o r
    horn_homotopy: FilteredMap  # horn tensor Delta^1 -> horn, between id and r o j
    identity_end: int  # which end of the cylinder carries the identity

    def validate(self) -> None:
        P = self.retraction.codomain.poset
        simplex = self.retraction.domain
        hornc = self.retraction.codomain
        n = len(self.word) - 1
        self.retraction.validate()
        self.homotopy.validate()
        self.horn_homotopy.validate()
        j = inclusion_map(hornc, simplex)
        jr = j.compose(self.retraction)
        cyl = self.homotopy.domain
        ends = [self.homotopy.compose(tensor_end_inclusion(simplex, cyl, eps)) for eps in (0, 1)]
        ident = identity_map(simplex)
        if ends[self.identity_end] != ident or ends[1 - self.identity_end] != jr:
            raise ValueError("cylinder ends do not match id and j o r")
        rj = self.retraction.compose(j)
        hcyl = self.horn_homotopy.domain
        hends = [self.horn_homotopy.compose(tensor_end_inclusion(hornc, hcyl, eps)) for eps in (0, 1)]
        if hends[self.identity_end] != identity_map(hornc) or hends[1 - self.identity_end] != rj:
            raise ValueError("horn cylinder ends do not match id and r o j")


def admissible_horn_witness(poset: Poset, word: tuple[str, ...], k: int) -> HornWitness:
    """The explicit retraction and prism homotopies of an admissible horn."""
    word = tuple(word)
    n = len(word) - 1
    if not is_admissible(word, k):
        raise ValueError(f"horn on {list(word)} at {k} is not admissible")
    if k > 0 and word[k] == word[k - 1]:
        collapsed = k - 1
        identity_end = 0
    else:
        collapsed = k + 1
        identity_end = 1
    simplex = standard_simplex(poset, word)
    hornc = horn(poset, word, k)

    rimg = {str(v): (k if v == collapsed else v) for v in range(n + 1)}
    retraction = map_from_vertex_images(simplex, hornc, rimg)

    cyl = tensor(simplex, plain_simplex(1))
    vimg = {}
    for vg in cyl.generators(0):
        rx, rt = cyl.meta["pairs"][vg]
        v, eps = int(rx.gen), int(rt.gen)
        if eps == identity_end:
            vimg[vg] = v
        else:
            vimg[vg] = k if v == collapsed else v
    homotopy = map_from_vertex_images(cyl, simplex, vimg)

    hcyl = tensor(hornc, plain_simplex(1))
    himg = {}
    for vg in hcyl.generators(0):
        rx, rt = hcyl.meta["pairs"][vg]
        v, eps = int(rx.gen), int(rt.gen)
        if eps == identity_end:
            himg[vg] = v
        else:
            himg[vg] = k if v == collapsed else v
    horn_homotopy = map_from_vertex_images(hcyl, hornc, himg)

    w = HornWitness(word, k, collapsed, retraction, homotopy, horn_homotopy, identity_end)
    w.validate()
    return w


def retraction_exists(poset: Poset, word: tuple[str, ...], k: int, budget: Budget | None = None) -> bool:
    """Exhaustively search for a strict filtered retraction simplex -> horn."""
    simplex = standard_simplex(poset, word)
    hornc = horn(poset, word, k)
    fixed = {g: identity_ref(g) for g in hornc.generators()}
    for _ in enumerate_maps(simplex, hornc, budget, fixed=fixed):
        return True
    return False


def homotopy_retraction_exists(poset: Poset, word: tuple[str, ...], k: int, budget: Budget | None = None) -> bool:
    """Search for r: simplex -> horn with r o j homotopic to the identity.

    This is the operative reading of a homotopy inverse to the horn
    inclusion: exhaustive over maps and over the homotopy closure.
    """
    from .maps import homotopy_classes

    simplex = standard_simplex(poset, word)
    hornc = horn(poset, word, k)
    j = inclusion_map(hornc, simplex)
    classes = homotopy_classes(hornc, hornc, budget)
    ident = identity_map(hornc)
    id_class = next(c for c in classes if ident in c)
    for r in enumerate_maps(simplex, hornc, budget):
        if r.compose(j) in id_class:
            return True
    return False
