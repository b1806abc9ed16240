"""Extension levels along iterated subdivision, and the explicit horn filler.

A stage-k level element over a word is a filtered map sd^k(simplex) -> X;
levels are never materialized as standalone complexes.  Faces, degeneracies
and the tower inclusion act by precomposition with subdivided structure
maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .budget import Budget
from .complexes import FilteredComplex, Ref, cached_simplex, identity_ref, surj_of_degens
from .fibrancy import is_admissible
from .maps import FilteredMap, enumerate_maps, map_from_vertex_images
from .posets import Poset, word_degeneracy, word_face
from .subdivision import (
    SdResult,
    chain_image_ref,
    last_vertex_map,
    sdp_cell,
    subdivide,
    tower,
    tower_map,
)


def sd_stage(poset: Poset, word: tuple[str, ...], k: int) -> FilteredComplex:
    """sd^k of the filtered simplex on `word`, in glued form."""
    return tower(cached_simplex(poset, tuple(word))).stage(k)


def sd_stage_result(poset: Poset, word: tuple[str, ...], k: int) -> SdResult:
    """The SdResult presenting sd^{k+1} as the subdivision of sd^k."""
    return tower(cached_simplex(poset, tuple(word))).result(k)


@lru_cache(maxsize=None)
def simplex_face_inclusion(poset: Poset, word: tuple[str, ...], i: int) -> FilteredMap:
    src = cached_simplex(poset, word_face(word, i))
    dst = cached_simplex(poset, word)
    vimg = {str(v): (v if v < i else v + 1) for v in range(len(word) - 1)}
    return map_from_vertex_images(src, dst, vimg)


@lru_cache(maxsize=None)
def simplex_degeneracy(poset: Poset, word: tuple[str, ...], i: int) -> FilteredMap:
    src = cached_simplex(poset, word_degeneracy(word, i))
    dst = cached_simplex(poset, word)
    vimg = {str(v): (v if v <= i else v - 1) for v in range(len(word) + 1)}
    return map_from_vertex_images(src, dst, vimg)


@lru_cache(maxsize=None)
def stage_face_map(poset: Poset, word: tuple[str, ...], i: int, k: int) -> FilteredMap:
    """sd^k of the i-th face inclusion into the simplex on `word`."""
    return tower_map(simplex_face_inclusion(poset, word, i), k)


@lru_cache(maxsize=None)
def stage_degeneracy_map(poset: Poset, word: tuple[str, ...], i: int, k: int) -> FilteredMap:
    return tower_map(simplex_degeneracy(poset, word, i), k)


@lru_cache(maxsize=None)
def stage_lv_map(poset: Poset, word: tuple[str, ...], k: int) -> FilteredMap:
    """sd^k of the last-vertex map: a map sd^{k+1} -> sd^k of the simplex."""
    base = cached_simplex(poset, tuple(word))
    res = tower(base).result(0)
    lv = last_vertex_map(res, base)
    return tower_map(lv, k)


def simplex_char_map(X: FilteredComplex, ref: Ref, word: tuple[str, ...]) -> FilteredMap:
    """The map simplex(word) -> X classifying the simplex `ref` of X."""
    poset = X.poset
    simplex = cached_simplex(poset, tuple(word))
    eta = surj_of_degens(X.dim(ref.gen), ref.degens)
    table = {}
    for g in simplex.generators():
        positions = tuple(int(v) for v in g.split("."))
        table[g] = X.apply_vertex_word(ref.gen, tuple(eta[v] for v in positions))
    return FilteredMap(simplex, X, table, validate=False)


# ---------------------------------------------------------------------------
# Levels


def ex_level(X: FilteredComplex, word: tuple[str, ...], stage: int, budget: Budget | None = None) -> list[FilteredMap]:
    """All stage-`stage` elements over `word`: maps sd^stage(simplex) -> X."""
    dom = sd_stage(X.poset, tuple(word), stage)
    return list(enumerate_maps(dom, X, budget))


def element_face(el: FilteredMap, word: tuple[str, ...], i: int, stage: int) -> FilteredMap:
    return el.compose(stage_face_map(el.domain.poset, tuple(word), i, stage))


def element_degeneracy(el: FilteredMap, word: tuple[str, ...], i: int, stage: int) -> FilteredMap:
    return el.compose(stage_degeneracy_map(el.domain.poset, tuple(word), i, stage))


def element_value(table: dict[str, FilteredMap], X: FilteredComplex, dom: FilteredComplex, ref: Ref, stage: int) -> FilteredMap:
    """Evaluate a levelwise table on a possibly degenerate simplex of `dom`."""
    el = table[ref.gen]
    word = dom.color(ref.gen)
    cur_word = word
    for d in reversed(ref.degens):
        cur_word = word_degeneracy(cur_word, d)
    # apply degeneracies innermost-first so each acts on the current word
    el_out = el
    w = word
    for d in reversed(ref.degens):
        el_out = el_out.compose(stage_degeneracy_map(X.poset, w, d, stage))
        w = word_degeneracy(w, d)
    return el_out


def is_degenerate_element(el: FilteredMap, word: tuple[str, ...], stage: int) -> bool:
    word = tuple(word)
    n = len(word) - 1
    for j in range(n):
        face = element_face(el, word, j, stage)
        back = element_degeneracy(face, word_face(word, j), j, stage)
        if back == el:
            return True
    return False


def tower_up(el: FilteredMap, word: tuple[str, ...], stage: int) -> FilteredMap:
    """Include a stage-`stage` element into stage+1 along the tower."""
    return el.compose(stage_lv_map(el.domain.poset, tuple(word), stage))


def iota_element(X: FilteredComplex, ref: Ref, word: tuple[str, ...]) -> FilteredMap:
    """The stage-1 element underlying a simplex of X (precompose last-vertex)."""
    char = simplex_char_map(X, ref, word)
    return tower_up(char, word, 0)


def iota_image(X: FilteredComplex, word: tuple[str, ...]) -> dict[FilteredMap, Ref]:
    """All stage-1 elements arising from honest simplices of X over `word`."""
    out = {}
    n = len(word) - 1
    for ref in X.level(n):
        if X.ref_color(ref) == tuple(word):
            out[iota_element(X, ref, word)] = ref
    return out


# -- Gamma filtration ---------------------------------------------------------


@lru_cache(maxsize=None)
def j_glued(poset: Poset, word: tuple[str, ...], k: int) -> FilteredMap:
    """The j^k endomap transported to the glued stage-1 complex."""
    word = tuple(word)
    stage1 = sd_stage(poset, word, 1)
    res = sd_stage_result(poset, word, 0)
    cell = sdp_cell(poset, word)
    n = len(word) - 1
    top = ".".join(str(v) for v in range(n + 1))

    def jset(S):
        m = max(S)
        return S if m <= k else tuple(range(m + 1))

    table = {}
    for qgen in stage1.generators():
        g, cref = stage1.meta["reps"][qgen]
        positions = tuple(int(v) for v in g.split("."))
        chain = res.cell_of(g).meta["chain"][cref.gen]
        abs_chain = [(tuple(positions[v] for v in S), q) for S, q in chain]
        image = [(jset(S), q) for S, q in abs_chain]
        cell_ref = chain_image_ref(cell, image)
        table[qgen] = res.class_ref(top, cell_ref)
    return FilteredMap(stage1, stage1, table, validate=False)


def gamma_degree(el: FilteredMap, word: tuple[str, ...]) -> int:
    """Smallest k with el o j^k = el; degree 0 means the element comes from X."""
    word = tuple(word)
    poset = el.domain.poset
    n = len(word) - 1
    for k in range(n + 1):
        if el.compose(j_glued(poset, word, k)) == el:
            return k
    raise AssertionError("j^n must fix every element")


def gamma_filtration(X: FilteredComplex, word: tuple[str, ...], budget: Budget | None = None) -> dict[FilteredMap, int]:
    return {el: gamma_degree(el, word) for el in ex_level(X, word, 1, budget)}


@lru_cache(maxsize=None)
def r_glued(poset: Poset, word: tuple[str, ...], k: int) -> FilteredMap:
    """The r^k map transported to glued stage-1 complexes.

    Maps stage 1 of the k-degenerated word to stage 1 of `word`.
    """
    word = tuple(word)
    src_word = word_degeneracy(word, k)
    stage1_src = sd_stage(poset, src_word, 1)
    stage1_dst = sd_stage(poset, word, 1)
    res_src = sd_stage_result(poset, src_word, 0)
    res_dst = sd_stage_result(poset, word, 0)
    cell_dst = sdp_cell(poset, word)
    n = len(word) - 1
    top_dst = ".".join(str(v) for v in range(n + 1))

    def rvert(i):
        if i <= k:
            return (i,)
        if i == k + 1:
            return tuple(range(k + 1))
        return (i - 1,)

    def rset(S):
        out = set()
        for v in S:
            out.update(rvert(v))
        return tuple(sorted(out))

    table = {}
    for qgen in stage1_src.generators():
        g, cref = stage1_src.meta["reps"][qgen]
        positions = tuple(int(v) for v in g.split("."))
        chain = res_src.cell_of(g).meta["chain"][cref.gen]
        abs_chain = [(tuple(positions[v] for v in S), q) for S, q in chain]
        image = [(rset(S), q) for S, q in abs_chain]
        cell_ref = chain_image_ref(cell_dst, image)
        table[qgen] = res_dst.class_ref(top_dst, cell_ref)
    return FilteredMap(stage1_src, stage1_dst, table, validate=False)


def precompose_r(el: FilteredMap, word: tuple[str, ...], k: int) -> FilteredMap:
    """el o r^k: a stage-1 element over the k-degenerated word."""
    return el.compose(r_glued(el.domain.poset, tuple(word), k))


# ---------------------------------------------------------------------------
# The explicit filler for admissible horn problems into stage-1 levels


@dataclass
class FillerResult:
    word: tuple[str, ...]
    k: int
    kappa: dict[str, FilteredMap]  # per generator of sd^2(simplex): stage-1 element into X
    filler: dict[str, FilteredMap]  # per generator of the simplex: stage-3 element
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def _subset_of(name: str) -> tuple[int, ...]:
    return tuple(int(v) for v in name.split("."))


def _horn_allows(word_len: int, k: int, subset: tuple[int, ...]) -> bool:
    full = tuple(range(word_len))
    missing = tuple(v for v in full if v != k)
    return subset != full and subset != missing


def ex_filler(X: FilteredComplex, word: tuple[str, ...], k: int, lam: dict[str, FilteredMap]) -> FillerResult:
    """Fill an admissible horn problem mapping into stage-1 levels of X.

    `lam` assigns to each generator of the horn a stage-1 element over its
    color word.  The construction follows the vertexwise three-case last-
    vertex formula, lifted through the naive-to-filtered comparison functor,
    and validates every step.
    """
    word = tuple(word)
    poset = X.poset
    n = len(word) - 1
    if not is_admissible(word, k):
        raise ValueError("filler construction needs an admissible horn")
    p = word[k]

    simplex = cached_simplex(poset, word)
    stage2 = sd_stage(poset, word, 2)
    res0 = sd_stage_result(poset, word, 0)  # presents stage1 as sd of the simplex
    res1 = sd_stage_result(poset, word, 1)  # presents stage2 as sd of stage1
    stage1 = res0.complex

    checks: dict[str, bool] = {}

    # absolute pair chain of a stage-1 generator
    def abs_chain_of(qgen: str):
        g, cref = stage1.meta["reps"][qgen]
        positions = _subset_of(g)
        chain = res0.cell_of(g).meta["chain"][cref.gen]
        return tuple((tuple(positions[v] for v in S), q) for S, q in chain)

    # evaluate lam on an arbitrary simplex of the horn subdivision, given as
    # an absolute pair chain inside the horn
    def lam_value(abs_chain) -> FilteredMap:
        carrier = abs_chain[-1][0]
        gname = ".".join(map(str, carrier))
        el = lam[gname]
        sub_word = tuple(word[v] for v in carrier)
        rank = {v: i for i, v in enumerate(carrier)}
        rel = [(tuple(rank[v] for v in S), q) for S, q in abs_chain]
        cell = sdp_cell(poset, sub_word)
        cref = chain_image_ref(cell, rel)
        r0 = sd_stage_result(poset, sub_word, 0)
        top = ".".join(str(v) for v in range(len(sub_word)))
        return el.apply(r0.class_ref(top, cref))

    # -- the vertexwise formula ----------------------------------------------

    full = tuple(range(n + 1))
    dk_face = tuple(v for v in full if v != k)

    def f_sigma(sigma_chains, colors):
        """Vertex images for one generator of the double subdivision."""
        out = []
        for sigma_l, q_l in zip(sigma_chains, colors):
            last_subset = sigma_l[-1][0]
            lv_is_big = last_subset in (full, dk_face)
            has_p = any(q == p for _, q in sigma_l)
            if not lv_is_big or not has_p or poset.lt(q_l, p):
                # last vertex of color q_l of (last entry of color q_l)
                entry = max(i for i, (_, q) in enumerate(sigma_l) if q == q_l)
                S = sigma_l[entry][0]
                out.append(max(v for v in S if word[v] == q_l))
            elif poset.lt(p, q_l):
                entry = max(i for i, (_, q) in enumerate(sigma_l) if q == p)
                S = sigma_l[entry][0]
                out.append(max(v for v in S if word[v] == q_l))
            else:  # p == q_l
                out.append(k)
        return tuple(out)

    # -- build kappa on the double subdivision --------------------------------

    horn_cell_names = None
    kappa: dict[str, FilteredMap] = {}
    image_ok = True
    for q2 in stage2.generators():
        g1, c1 = stage2.meta["reps"][q2]
        A = abs_chain_of(g1)
        chain2 = res1.cell_of(g1).meta["chain"][c1.gen]
        sigma_chains = [tuple(A[t] for t in T) for T, _ in chain2]
        colors = [q for _, q in chain2]
        fimg = f_sigma(sigma_chains, colors)
        jprime = tuple(colors)
        # image of each first-subdivision chain entry under sd(f_sigma), kept
        # as a stage-1 element valued in X via lam
        sub_simplex_word = jprime
        sub_stage1 = sd_stage(poset, sub_simplex_word, 1)
        sub_res = sd_stage_result(poset, sub_simplex_word, 0)
        table = {}
        for sg in sub_stage1.generators():
            sgen, scref = sub_stage1.meta["reps"][sg]
            spos = _subset_of(sgen)
            schain = sub_res.cell_of(sgen).meta["chain"][scref.gen]
            abs_sub = [(tuple(spos[v] for v in S), q) for S, q in schain]
            image_entries = []
            for S, q in abs_sub:
                img = tuple(sorted({fimg[v] for v in S}))
                if not _horn_allows(n + 1, k, img):
                    image_ok = False
                image_entries.append((img, q))
            table[sg] = lam_value(tuple(image_entries))
        kappa[q2] = FilteredMap(sub_stage1, X, table, validate=False)
    checks["image-in-horn"] = image_ok

    # -- simpliciality of kappa ----------------------------------------------

    simplicial_ok = True
    for q2 in stage2.generators():
        jprime = stage2.color(q2)
        m = len(jprime) - 1
        for i in range(m + 1) if m else ():
            fref = stage2.face_of_gen(q2, i)
            expected = element_value(kappa, X, stage2, fref, 1)
            got = kappa[q2].compose(stage_face_map(poset, jprime, i, 1))
            if expected != got:
                simplicial_ok = False
    checks["simplicial"] = simplicial_ok

    # -- square against the double last-vertex on the horn part ---------------

    lv1 = last_vertex_map(res0, simplex)
    lv2 = lv1.compose(last_vertex_map(res1, stage1))
    square_ok = True
    for q2 in stage2.generators():
        g1, c1 = stage2.meta["reps"][q2]
        A = abs_chain_of(g1)
        chain2 = res1.cell_of(g1).meta["chain"][c1.gen]
        in_horn = all(
            _horn_allows(n + 1, k, A[t][0]) for T, _ in chain2 for t in T
        )
        if not in_horn:
            continue
        target = lv2.assignment[q2]
        expected = lam_value_of_simplex_ref(lam, poset, word, target, X)
        if kappa[q2] != expected:
            square_ok = False
    checks["square"] = square_ok

    # -- assemble the filler into stage 3 --------------------------------------

    stage3 = sd_stage(poset, word, 3)
    res2 = sd_stage_result(poset, word, 2)
    kappa_hat = {}
    for q3 in stage3.generators():
        g2, c2 = stage3.meta["reps"][q3]
        jp = stage2.color(g2)
        r0 = sd_stage_result(poset, jp, 0)
        top = ".".join(str(v) for v in range(len(jp)))
        cell = sdp_cell(poset, jp)
        chain = res2.cell_of(g2).meta["chain"][c2.gen]
        cref = chain_image_ref(cell, chain)
        kappa_hat[q3] = kappa[g2].apply(r0.class_ref(top, cref))
    kappa_hat_map = FilteredMap(stage3, X, kappa_hat, validate=False)

    filler = {}
    for g in simplex.generators():
        sub_word = simplex.color(g)
        positions = _subset_of(g)
        inc = map_from_vertex_images(
            cached_simplex(poset, sub_word), simplex, {str(v): positions[v] for v in range(len(sub_word))}
        )
        filler[g] = kappa_hat_map.compose(tower_map(inc, 3))

    # -- restriction agrees with the tower image of lam -----------------------

    restrict_ok = True
    for g, el in lam.items():
        sub_word = simplex.color(g)
        expect = tower_up(tower_up(el, sub_word, 1), sub_word, 2)
        if filler[g] != expect:
            restrict_ok = False
    checks["restricts-to-horn-data"] = restrict_ok

    return FillerResult(word, k, kappa, filler, checks)


def lam_value_of_simplex_ref(lam: dict[str, FilteredMap], poset: Poset, word, ref: Ref, X: FilteredComplex) -> FilteredMap:
    """Evaluate a horn-level table on a possibly degenerate simplex ref."""
    sub_word = tuple(tuple(word)[v] for v in _subset_of(ref.gen))
    el = lam[ref.gen]
    out = el
    w = sub_word
    for d in reversed(ref.degens):
        out = out.compose(stage_degeneracy_map(poset, w, d, 1))
        w = word_degeneracy(w, d)
    return out


def validate_horn_level_map(X: FilteredComplex, word, k: int, lam: dict[str, FilteredMap]) -> bool:
    """Check that a horn-indexed table of stage-1 elements is simplicial."""
    word = tuple(word)
    poset = X.poset
    from .complexes import horn as horn_builder

    H = horn_builder(poset, word, k)
    for g in H.generators():
        m = H.dim(g)
        sub_word = H.color(g)
        for i in range(m + 1) if m else ():
            fref = H.face_of_gen(g, i)
            expected = lam_value_of_simplex_ref(lam, poset, word, fref, X)
            got = lam[g].compose(stage_face_map(poset, sub_word, i, 1))
            if expected != got:
                return False
    return True


def enumerate_horn_level_maps(X: FilteredComplex, word, k: int, budget: Budget | None = None):
    """All maps from the horn into stage-1 levels, by constrained search."""
    word = tuple(word)
    poset = X.poset
    from .complexes import horn as horn_builder

    H = horn_builder(poset, word, k)
    gens = sorted(H.generators(), key=lambda g: (H.dim(g), g))
    level_cache: dict[tuple[str, ...], list[FilteredMap]] = {}

    def level_for(w):
        if w not in level_cache:
            level_cache[w] = ex_level(X, w, 1, budget)
        return level_cache[w]

    out: list[dict[str, FilteredMap]] = []
    table: dict[str, FilteredMap] = {}

    def extend(idx):
        if idx == len(gens):
            out.append(dict(table))
            return
        g = gens[idx]
        m = H.dim(g)
        sub_word = H.color(g)
        for cand in level_for(sub_word):
            if budget:
                budget.charge()
            ok = True
            for i in range(m + 1) if m else ():
                fref = H.face_of_gen(g, i)
                expected = lam_value_of_simplex_ref(table, poset, word, fref, X)
                got = cand.compose(stage_face_map(poset, sub_word, i, 1))
                if expected != got:
                    ok = False
                    break
            if not ok:
                continue
            table[g] = cand
            extend(idx + 1)
            del table[g]

    extend(0)
    return out
