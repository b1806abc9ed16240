"""Filtered and naive subdivision, last-vertex maps, and structural maps.

The filtered subdivision of a filtered simplex has as simplices the chains
of pairs (face, color) where the faces weakly grow, the colors weakly grow,
and every color already occurs on the smallest face.  Subdivision of a
general complex glues the per-generator subdivisions along faces.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable, Iterable

from .colimits import Colimit, coequalize
from .complexes import (
    ComplexError,
    FilteredComplex,
    Ref,
    degens_of_surj,
    identity_ref,
    standard_simplex,
    surj_of_degens,
)
from .maps import FilteredMap, map_from_vertex_images
from .posets import Poset, word_degeneracy, word_face

PairChain = tuple[tuple[tuple[int, ...], str], ...]


def _entry_name(entry: tuple[tuple[int, ...], str]) -> str:
    subset, color = entry
    return ".".join(map(str, subset)) + "@" + color


def chain_name(chain: PairChain) -> str:
    return "+".join(_entry_name(e) for e in chain)


def _colors_of_subset(word: tuple[str, ...], subset: tuple[int, ...]) -> frozenset[str]:
    return frozenset(word[v] for v in subset)


def pair_leq(poset: Poset, a, b) -> bool:
    (sa, qa), (sb, qb) = a, b
    return set(sa) <= set(sb) and poset.leq(qa, qb)


@lru_cache(maxsize=None)
def sdp_cell(poset: Poset, word: tuple[str, ...]) -> FilteredComplex:
    """Filtered subdivision of the filtered simplex on `word`."""
    n = len(word) - 1
    subsets = []

    def all_subsets():
        from itertools import combinations

        for size in range(1, n + 2):
            yield from combinations(range(n + 1), size)

    vertices = []
    for S in all_subsets():
        for q in sorted(_colors_of_subset(word, S)):
            vertices.append((S, q))

    chains: list[PairChain] = []

    def extend(chain: PairChain, allowed: frozenset[str]):
        chains.append(chain)
        last = chain[-1]
        for v in vertices:
            if v == last:
                continue
            if v[1] not in allowed:
                continue
            if pair_leq(poset, last, v):
                extend(chain + (v,), allowed)

    for v in vertices:
        extend((v,), _colors_of_subset(word, v[0]))

    gens: dict[str, tuple[tuple[str, ...], tuple[Ref, ...]]] = {}
    for chain in chains:
        colors = tuple(q for _, q in chain)
        if len(chain) == 1:
            faces: tuple[Ref, ...] = ()
        else:
            faces = tuple(
                identity_ref(chain_name(chain[:i] + chain[i + 1 :])) for i in range(len(chain))
            )
        gens[chain_name(chain)] = (colors, faces)
    meta = {"kind": "sdp_cell", "word": word, "chain": {chain_name(c): c for c in chains}}
    return FilteredComplex(poset, gens, meta=meta, validate=False)


@lru_cache(maxsize=None)
def naive_cell(poset: Poset, word: tuple[str, ...]) -> FilteredComplex:
    """Classical subdivision of the simplex, recolored by the last vertex."""
    from itertools import combinations

    n = len(word) - 1
    subsets = [S for size in range(1, n + 2) for S in combinations(range(n + 1), size)]
    chains: list[tuple[tuple[int, ...], ...]] = []

    def extend(chain):
        chains.append(chain)
        for S in subsets:
            if set(chain[-1]) < set(S):
                extend(chain + (S,))

    for S in subsets:
        extend((S,))

    def cname(chain):
        return "+".join(".".join(map(str, S)) for S in chain)

    gens: dict[str, tuple[tuple[str, ...], tuple[Ref, ...]]] = {}
    for chain in chains:
        colors = tuple(word[max(S)] for S in chain)
        if len(chain) == 1:
            faces: tuple[Ref, ...] = ()
        else:
            faces = tuple(identity_ref(cname(chain[:i] + chain[i + 1 :])) for i in range(len(chain)))
        gens[cname(chain)] = (colors, faces)
    meta = {"kind": "naive_cell", "word": word, "chain": {cname(c): c for c in chains}}
    return FilteredComplex(poset, gens, meta=meta, validate=False)


# ---------------------------------------------------------------------------
# Maps between cells


def chain_image_ref(cod: FilteredComplex, entries: Iterable) -> Ref:
    """Normalize a weakly increasing chain of entries to a Ref of a cell."""
    entries = list(entries)
    keep = [0]
    for i in range(1, len(entries)):
        if entries[i] != entries[i - 1]:
            keep.append(i)
    core = tuple(entries[i] for i in keep)
    if cod.meta["kind"] == "sdp_cell":
        name = chain_name(core)
    else:
        name = "+".join(".".join(map(str, S)) for S in core)
    if name not in cod:
        raise ComplexError(f"image chain {name} is not a simplex of the codomain cell")
    word = []
    j = -1
    for i in range(len(entries)):
        if j + 1 < len(keep) and keep[j + 1] == i:
            j += 1
        word.append(j)
    return Ref(name, degens_of_surj(tuple(word)))


def cell_map(dom: FilteredComplex, cod: FilteredComplex, entry_image: Callable) -> FilteredMap:
    """Map of subdivision cells induced by a function on chain entries."""
    table = {}
    for g in dom.generators():
        chain = dom.meta["chain"][g]
        table[g] = chain_image_ref(cod, [entry_image(e) for e in chain])
    return FilteredMap(dom, cod, table, validate=False)


def sdp_induced(poset: Poset, src_word, dst_word, posmap: dict[int, int]) -> FilteredMap:
    """sd_P of the vertex map `posmap` between filtered simplices."""
    dom = sdp_cell(poset, tuple(src_word))
    cod = sdp_cell(poset, tuple(dst_word))

    def image(entry):
        S, q = entry
        return (tuple(sorted({posmap[v] for v in S})), q)

    return cell_map(dom, cod, image)


def naive_induced(poset: Poset, src_word, dst_word, posmap: dict[int, int]) -> FilteredMap:
    dom = naive_cell(poset, tuple(src_word))
    cod = naive_cell(poset, tuple(dst_word))

    def image(S):
        return tuple(sorted({posmap[v] for v in S}))

    return cell_map(dom, cod, image)


def last_vertex_cell_map(poset: Poset, word: tuple[str, ...]) -> FilteredMap:
    """The filtered last-vertex map sd_P(simplex) -> simplex."""
    word = tuple(word)
    dom = sdp_cell(poset, word)
    cod = standard_simplex(poset, word)
    vimg = {}
    for g in dom.generators(0):
        ((S, q),) = dom.meta["chain"][g]
        vimg[g] = max(v for v in S if word[v] == q)
    return map_from_vertex_images(dom, cod, vimg)


def classical_last_vertex(poset: Poset, word: tuple[str, ...]):
    """Vertex table of the plain last-vertex map on the naive cell."""
    dom = naive_cell(poset, tuple(word))
    return {g: max(dom.meta["chain"][g][0]) for g in dom.generators(0)}


def functor_G(poset: Poset, src_word, dst_word, f: FilteredMap) -> FilteredMap:
    """Lift a map between naive subdivisions to the filtered subdivisions.

    Acts entrywise: a chain entry (S, q) goes to (f(S), q), where f(S) is
    read off the vertex assignment of `f`.
    """
    src_word, dst_word = tuple(src_word), tuple(dst_word)
    nsrc = naive_cell(poset, src_word)
    vert_image = {}
    for g in nsrc.generators(0):
        (S,) = nsrc.meta["chain"][g]
        img = f.assignment[g]
        vert_image[S] = f.codomain.meta["chain"][img.gen][0]

    dom = sdp_cell(poset, src_word)
    cod = sdp_cell(poset, dst_word)

    def image(entry):
        S, q = entry
        return (vert_image[S], q)

    return cell_map(dom, cod, image)


# -- the structural maps j^k, r^k, sd(d^k), sd(s^k) --------------------------


def j_map(poset: Poset, word: tuple[str, ...], k: int) -> FilteredMap:
    """j^k: sd_P(simplex) -> itself; collapses everything above vertex k."""
    word = tuple(word)
    n = len(word) - 1
    if not 0 <= k <= n:
        raise ComplexError(f"j index {k} out of range")
    cell = sdp_cell(poset, word)

    def jset(S):
        m = max(S)
        return S if m <= k else tuple(range(m + 1))

    return cell_map(cell, cell, lambda e: (jset(e[0]), e[1]))


def r_word(word: tuple[str, ...], k: int) -> tuple[str, ...]:
    return word_degeneracy(tuple(word), k)


def r_map(poset: Poset, word: tuple[str, ...], k: int) -> FilteredMap:
    """r^k: sd_P of the k-degenerated simplex -> sd_P(simplex), 1 <= k <= n."""
    word = tuple(word)
    n = len(word) - 1
    if not 1 <= k <= n:
        raise ComplexError(f"r index {k} out of range")
    dom = sdp_cell(poset, r_word(word, k))
    cod = sdp_cell(poset, word)

    def rvert(i):
        if i <= k:
            return (i,)
        if i == k + 1:
            return tuple(range(k + 1))
        return (i - 1,)

    def image(entry):
        S, q = entry
        out = set()
        for v in S:
            out.update(rvert(v))
        return (tuple(sorted(out)), q)

    return cell_map(dom, cod, image)


def sd_face_map(poset: Poset, word: tuple[str, ...], i: int) -> FilteredMap:
    """sd_P of the face inclusion delta^i into the simplex on `word`."""
    word = tuple(word)
    src = word_face(word, i)
    posmap = {v: (v if v < i else v + 1) for v in range(len(src))}
    return sdp_induced(poset, src, word, posmap)


def sd_degeneracy_map(poset: Poset, word: tuple[str, ...], i: int) -> FilteredMap:
    """sd_P of the degeneracy sigma^i onto the simplex on `word`."""
    word = tuple(word)
    src = word_degeneracy(word, i)
    posmap = {v: (v if v <= i else v - 1) for v in range(len(src))}
    return sdp_induced(poset, src, word, posmap)


def structural_map(poset: Poset, kind: str, k: int, word: tuple[str, ...]) -> FilteredMap:
    """Dispatch for the lifted structural maps on subdivided simplices."""
    if kind == "j":
        return j_map(poset, word, k)
    if kind == "r":
        return r_map(poset, word, k)
    if kind == "sd_d":
        return sd_face_map(poset, word, k)
    if kind == "sd_s":
        return sd_degeneracy_map(poset, word, k)
    raise ComplexError(f"unknown structural map kind {kind!r}")


# ---------------------------------------------------------------------------
# Subdivision of a general complex


class SdResult:
    """sd_P(X) together with enough bookkeeping to act on maps."""

    def __init__(self, X: FilteredComplex, colimit: Colimit, naive: bool = False):
        self.base = X
        self.colimit = colimit
        self.complex = colimit.complex
        self.naive = naive

    def cell_of(self, gen: str) -> FilteredComplex:
        return self.colimit.cells[gen]

    def class_ref(self, gen: str, ref: Ref) -> Ref:
        return self.colimit.element_class(gen, ref)

    def rep(self, qgen: str) -> tuple[str, Ref]:
        return self.complex.meta["reps"][qgen]


def _cell_for(poset, word, naive):
    return naive_cell(poset, tuple(word)) if naive else sdp_cell(poset, tuple(word))


def _induced_for(poset, src_word, dst_word, posmap, naive):
    if naive:
        return naive_induced(poset, src_word, dst_word, posmap)
    return sdp_induced(poset, src_word, dst_word, posmap)


def subdivide(X: FilteredComplex, naive: bool = False) -> SdResult:
    """Glue per-generator subdivisions along the stored faces of X."""
    cache_key = "_naive_sd" if naive else "_sd"
    if cache_key in X.meta:
        return X.meta[cache_key]
    poset = X.poset
    cells = {g: _cell_for(poset, X.color(g), naive) for g in X.generators()}
    spans = []
    for g in X.generators():
        n = X.dim(g)
        word = X.color(g)
        for i in range(n + 1) if n else ():
            fref = X.face_of_gen(g, i)
            src = word_face(word, i)
            face_pos = {v: (v if v < i else v + 1) for v in range(n)}
            u = _induced_for(poset, src, word, face_pos, naive)
            eta = surj_of_degens(X.dim(fref.gen), fref.degens)
            v = _induced_for(poset, src, X.color(fref.gen), {a: eta[a] for a in range(n)}, naive)
            spans.append((u.domain, g, u, fref.gen, v))
    colim = coequalize(poset, cells, spans, kind="naive_sd" if naive else "sd")
    result = SdResult(X, colim, naive)
    X.meta[cache_key] = result
    return result


def subdivide_map(f: FilteredMap, sdX: SdResult, sdY: SdResult) -> FilteredMap:
    """The induced map sd_P(f) between glued subdivisions."""
    X, Y = f.domain, f.codomain
    poset = X.poset
    table = {}
    for qgen in sdX.complex.generators():
        g, cref = sdX.complex.meta["reps"][qgen]
        img = f.assignment[g]
        eta = surj_of_degens(Y.dim(img.gen), img.degens)
        posmap = {a: eta[a] for a in range(X.dim(g) + 1)}
        cellmap = _induced_for(poset, X.color(g), Y.color(img.gen), posmap, sdX.naive)
        table[qgen] = sdY.class_ref(img.gen, cellmap.apply(cref))
    return FilteredMap(sdX.complex, sdY.complex, table, validate=False)


def last_vertex_map(sdX: SdResult, X: FilteredComplex) -> FilteredMap:
    """The natural last-vertex map sd_P(X) -> X (or plain last-vertex, naive)."""
    table = {}
    for qgen in sdX.complex.generators():
        g, cref = sdX.complex.meta["reps"][qgen]
        word = X.color(g)
        chain = sdX.cell_of(g).meta["chain"][cref.gen]
        if sdX.naive:
            positions = [max(S) for S in chain]
        else:
            positions = [max(v for v in S if word[v] == q) for S, q in chain]
        table[qgen] = X.apply_vertex_word(g, tuple(positions))
    return FilteredMap(sdX.complex, X, table, validate=False)


class SdTower:
    """Iterated subdivisions X, sd(X), sd^2(X), ... with induced maps."""

    def __init__(self, X: FilteredComplex):
        self.stages = [X]
        self.results: list[SdResult] = []

    def stage(self, k: int) -> FilteredComplex:
        while len(self.stages) <= k:
            res = subdivide(self.stages[-1])
            self.results.append(res)
            self.stages.append(res.complex)
        return self.stages[k]

    def result(self, k: int) -> SdResult:
        """The SdResult presenting stage k+1 as sd of stage k."""
        self.stage(k + 1)
        return self.results[k]


def tower(X: FilteredComplex) -> SdTower:
    if "_tower" not in X.meta:
        X.meta["_tower"] = SdTower(X)
    return X.meta["_tower"]


def tower_map(f: FilteredMap, k: int) -> FilteredMap:
    """sd_P^k(f), computed through the towers of domain and codomain."""
    if k == 0:
        return f
    tx, ty = tower(f.domain), tower(f.codomain)
    cur = f
    for i in range(k):
        tx.stage(i + 1), ty.stage(i + 1)
        cur = subdivide_map(cur, tx.results[i], ty.results[i])
    return cur
