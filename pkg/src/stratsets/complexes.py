"""Finite filtered simplicial sets in generator / normal-form presentation.

A complex stores only its nondegenerate simplices (generators).  Every other
simplex is a `Ref`: a generator with a degeneracy word in canonical
decreasing-index normal form.  Faces of generators are stored as Refs, so the
whole simplicial structure is recoverable at any level.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator, NamedTuple

from .posets import Poset, nondegenerate_support, word_face


class ComplexError(ValueError):
    pass


class Ref(NamedTuple):
    """A simplex in normal form: s_{d0} s_{d1} ... applied to a generator.

    The word `degens` is strictly decreasing, outermost index first.
    """

    gen: str
    degens: tuple[int, ...] = ()

    def format(self) -> str:
        if not self.degens:
            return self.gen
        return " ".join(f"s{d}" for d in self.degens) + " " + self.gen


def identity_ref(gen: str) -> Ref:
    return Ref(gen, ())


# -- surjection words --------------------------------------------------------
#
# A Ref of dimension n over an m-generator corresponds to a monotone
# surjection [n] -> [m], stored as the tuple of its n+1 values.


def surj_of_degens(gen_dim: int, degens: tuple[int, ...]) -> tuple[int, ...]:
    word = list(range(gen_dim + 1))
    for d in reversed(degens):  # innermost first
        word.insert(d + 1, word[d])
    return tuple(word)


def degens_of_surj(word: tuple[int, ...]) -> tuple[int, ...]:
    out: list[int] = []
    w = list(word)
    while True:
        dup = -1
        for i in range(len(w) - 1):
            if w[i] == w[i + 1]:
                dup = i
        if dup < 0:
            break
        del w[dup + 1]
        out.append(dup)
    if w != list(range(len(w))):
        raise ComplexError(f"word {word} is not a surjection onto an interval")
    return tuple(out)


def compose_surj(outer: tuple[int, ...], inner: tuple[int, ...]) -> tuple[int, ...]:
    """outer o inner, both given as value tuples."""
    return tuple(outer[i] for i in inner)


class FilteredComplex:
    """A finite simplicial set with a structure map to the nerve of a poset.

    Construction data, per generator: dimension, color word (length dim+1,
    weakly increasing in the poset) and the tuple of faces d_0..d_n as Refs.
    """

    def __init__(
        self,
        poset: Poset,
        generators: dict[str, tuple[tuple[str, ...], tuple[Ref, ...]]],
        meta: dict | None = None,
        validate: bool = True,
    ):
        self.poset = poset
        self._colors: dict[str, tuple[str, ...]] = {}
        self._faces: dict[str, tuple[Ref, ...]] = {}
        for name, (colors, faces) in generators.items():
            self._colors[name] = tuple(colors)
            self._faces[name] = tuple(faces)
        self.meta = meta or {}
        self._level_cache: dict[int, tuple[Ref, ...]] = {}
        self._level_color_cache: dict[int, dict[tuple[str, ...], tuple[Ref, ...]]] = {}
        self._face_cache: dict[tuple[Ref, int], Ref] = {}
        self._pullback_cache: dict[tuple[Ref, tuple[int, ...]], Ref] = {}
        if validate:
            self.validate()

    # -- basic accessors ----------------------------------------------------

    def generators(self, dim: int | None = None) -> list[str]:
        names = sorted(self._colors)
        if dim is None:
            return names
        return [g for g in names if self.dim(g) == dim]

    def __contains__(self, gen: str) -> bool:
        return gen in self._colors

    def dim(self, gen: str) -> int:
        return len(self._colors[gen]) - 1

    def color(self, gen: str) -> tuple[str, ...]:
        return self._colors[gen]

    def face_of_gen(self, gen: str, i: int) -> Ref:
        return self._faces[gen][i]

    @property
    def max_dim(self) -> int:
        return max((self.dim(g) for g in self._colors), default=-1)

    def size(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for g in self._colors:
            out[self.dim(g)] = out.get(self.dim(g), 0) + 1
        return out

    def is_empty(self) -> bool:
        return not self._colors

    # -- simplex algebra ----------------------------------------------------

    def ref_dim(self, ref: Ref) -> int:
        return self.dim(ref.gen) + len(ref.degens)

    def ref_color(self, ref: Ref) -> tuple[str, ...]:
        base = self._colors[ref.gen]
        word = surj_of_degens(self.dim(ref.gen), ref.degens)
        return tuple(base[v] for v in word)

    def degenerate_ref(self, ref: Ref, i: int) -> Ref:
        n = self.ref_dim(ref)
        if not 0 <= i <= n:
            raise ComplexError(f"degeneracy index {i} out of range")
        word = surj_of_degens(self.dim(ref.gen), ref.degens)
        new = word[: i + 1] + (word[i],) + word[i + 1 :]
        return Ref(ref.gen, degens_of_surj(new))

    def face_ref(self, ref: Ref, i: int) -> Ref:
        key = (ref, i)
        hit = self._face_cache.get(key)
        if hit is not None:
            return hit
        n = self.ref_dim(ref)
        if n == 0 or not 0 <= i <= n:
            raise ComplexError(f"face index {i} out of range for dimension {n}")
        m = self.dim(ref.gen)
        word = surj_of_degens(m, ref.degens)
        w2 = word[:i] + word[i + 1 :]
        values = set(w2)
        if len(values) == m + 1:
            out = Ref(ref.gen, degens_of_surj(w2))
        else:
            (missing,) = set(range(m + 1)) - values
            sub = self.face_of_gen(ref.gen, missing)
            subword = surj_of_degens(self.dim(sub.gen), sub.degens)
            w3 = tuple(subword[v if v < missing else v - 1] for v in w2)
            out = Ref(sub.gen, degens_of_surj(w3))
        self._face_cache[key] = out
        return out

    def apply_vertex_word(self, gen: str, word: tuple[int, ...]) -> Ref:
        """Pull the generator back along the monotone map given by `word`.

        `word` lists vertex positions of the generator, weakly increasing.
        """
        m = self.dim(gen)
        ref = identity_ref(gen)
        for v in sorted(set(range(m + 1)) - set(word), reverse=True):
            ref = self.face_ref(ref, v)
        kept = sorted(set(word))
        rank = {v: j for j, v in enumerate(kept)}
        surj = tuple(rank[v] for v in word)
        base = surj_of_degens(self.dim(ref.gen), ref.degens)
        return Ref(ref.gen, degens_of_surj(compose_surj(base, surj)))

    def pullback_ref(self, ref: Ref, surj: tuple[int, ...]) -> Ref:
        """Precompose a ref with a monotone surjection (pure degeneracy)."""
        key = (ref, surj)
        hit = self._pullback_cache.get(key)
        if hit is None:
            base = surj_of_degens(self.dim(ref.gen), ref.degens)
            hit = Ref(ref.gen, degens_of_surj(compose_surj(base, surj)))
            self._pullback_cache[key] = hit
        return hit

    def nondegenerate_part(self, ref: Ref) -> str:
        return ref.gen

    # -- levels ---------------------------------------------------------------

    def level(self, n: int) -> tuple[Ref, ...]:
        if n in self._level_cache:
            return self._level_cache[n]
        refs: list[Ref] = []
        for g in self.generators():
            m = self.dim(g)
            if m > n:
                continue
            if m == n:
                refs.append(identity_ref(g))
                continue
            for positions in combinations(range(1, n + 1), n - m):
                # positions where the surjection word repeats its predecessor
                word = []
                v = 0
                for j in range(n + 1):
                    if j == 0:
                        word.append(0)
                    elif j in positions:
                        word.append(word[-1])
                    else:
                        v = word[-1] + 1
                        word.append(v)
                refs.append(Ref(g, degens_of_surj(tuple(word))))
        refs.sort(key=ref_sort_key)
        self._level_cache[n] = tuple(refs)
        return self._level_cache[n]

    def level_by_color(self, n: int) -> dict[tuple[str, ...], tuple[Ref, ...]]:
        if n in self._level_color_cache:
            return self._level_color_cache[n]
        out: dict[tuple[str, ...], list[Ref]] = {}
        for ref in self.level(n):
            out.setdefault(self.ref_color(ref), []).append(ref)
        frozen = {c: tuple(rs) for c, rs in out.items()}
        self._level_color_cache[n] = frozen
        return frozen

    # -- validation -----------------------------------------------------------

    def validate(self) -> None:
        for g, colors in self._colors.items():
            n = len(colors) - 1
            if not self.poset.is_monotone(colors):
                raise ComplexError(f"color word of {g} is not monotone: {colors}")
            faces = self._faces[g]
            if n == 0:
                if faces:
                    raise ComplexError(f"vertex {g} must have no faces")
                continue
            if len(faces) != n + 1:
                raise ComplexError(f"{g} needs {n + 1} faces, has {len(faces)}")
            for i, ref in enumerate(faces):
                if ref.gen not in self._colors:
                    raise ComplexError(f"face d_{i} of {g} uses unknown generator {ref.gen}")
                if list(ref.degens) != sorted(ref.degens, reverse=True) or len(set(ref.degens)) != len(ref.degens):
                    raise ComplexError(f"face d_{i} of {g} has a non-normal degeneracy word")
                if self.ref_dim(ref) != n - 1:
                    raise ComplexError(f"face d_{i} of {g} has wrong dimension")
                if self.ref_color(ref) != word_face(colors, i):
                    raise ComplexError(
                        f"color mismatch at d_{i} of {g}: {self.ref_color(ref)} vs {word_face(colors, i)}"
                    )
        for g in self._colors:
            n = self.dim(g)
            if n < 2:
                continue
            for j in range(n + 1):
                for i in range(j):
                    lhs = self.face_ref(self.face_ref(identity_ref(g), j), i)
                    rhs = self.face_ref(self.face_ref(identity_ref(g), i), j - 1)
                    if lhs != rhs:
                        raise ComplexError(f"simplicial identity d_{i} d_{j} fails on {g}")

    # -- misc -----------------------------------------------------------------

    def restrict(self, gens: Iterable[str], meta: dict | None = None) -> "FilteredComplex":
        keep = set(gens)
        for g in keep:
            if g not in self._colors:
                raise ComplexError(f"unknown generator {g}")
            if self.dim(g) > 0:
                for ref in self._faces[g]:
                    if ref.gen not in keep:
                        raise ComplexError(f"{g} kept but its face generator {ref.gen} dropped")
        table = {g: (self._colors[g], self._faces[g]) for g in keep}
        return FilteredComplex(self.poset, table, meta=meta, validate=False)

    def __repr__(self):
        return f"FilteredComplex({sum(1 for _ in self._colors)} generators over {list(self.poset.elements)})"


def ref_sort_key(ref: Ref):
    return (len(ref.degens), ref.gen, ref.degens)


# ---------------------------------------------------------------------------
# Standard objects.  Generators of a standard simplex are named by the sorted
# vertex positions they span, joined with dots:  "0", "0.2", "0.1.3", ...


def _subset_name(positions: Iterable[int]) -> str:
    return ".".join(str(p) for p in sorted(positions))


def _subset_of_name(name: str) -> tuple[int, ...]:
    return tuple(int(p) for p in name.split("."))


def standard_simplex(poset: Poset, word: tuple[str, ...]) -> FilteredComplex:
    """The representable filtered simplex on a monotone color word."""
    word = tuple(word)
    if not poset.is_monotone(word):
        raise ComplexError(f"word {word} is not monotone")
    gens: dict[str, tuple[tuple[str, ...], tuple[Ref, ...]]] = {}
    n = len(word) - 1
    for size in range(1, n + 2):
        for subset in combinations(range(n + 1), size):
            colors = tuple(word[v] for v in subset)
            faces = tuple(
                identity_ref(_subset_name(subset[:i] + subset[i + 1 :])) for i in range(size)
            ) if size > 1 else ()
            gens[_subset_name(subset)] = (colors, faces)
    meta = {"kind": "simplex", "word": word, "vertex_named": True}
    return FilteredComplex(poset, gens, meta=meta, validate=False)


from functools import lru_cache


@lru_cache(maxsize=None)
def cached_simplex(poset: Poset, word: tuple[str, ...]) -> FilteredComplex:
    """Shared standard simplex; use when per-object caches should persist."""
    return standard_simplex(poset, word)


def boundary(poset: Poset, word: tuple[str, ...]) -> FilteredComplex:
    full = standard_simplex(poset, word)
    top = _subset_name(range(len(word)))
    keep = [g for g in full.generators() if g != top]
    out = full.restrict(keep, meta={"kind": "boundary", "word": tuple(word), "vertex_named": True})
    return out


def horn(poset: Poset, word: tuple[str, ...], k: int) -> FilteredComplex:
    if len(word) < 2:
        raise ComplexError("horns need words of length at least 2")
    if not 0 <= k < len(word):
        raise ComplexError(f"horn index {k} out of range")
    full = standard_simplex(poset, word)
    n = len(word) - 1
    top = _subset_name(range(n + 1))
    missing = _subset_name([v for v in range(n + 1) if v != k])
    keep = [g for g in full.generators() if g not in (top, missing)]
    return full.restrict(keep, meta={"kind": "horn", "word": tuple(word), "k": k, "vertex_named": True})


def nerve(poset: Poset) -> FilteredComplex:
    """The nerve of the poset as a filtered complex over itself."""
    gens: dict[str, tuple[tuple[str, ...], tuple[Ref, ...]]] = {}
    for chain in poset.strict_chains():
        name = ".".join(chain)
        if len(chain) == 1:
            gens[name] = (chain, ())
        else:
            faces = tuple(identity_ref(".".join(chain[:i] + chain[i + 1 :])) for i in range(len(chain)))
            gens[name] = (chain, faces)
    return FilteredComplex(poset, gens, meta={"kind": "nerve"}, validate=False)


TRIVIAL_POSET = Poset.chain("*")


def plain_simplex(n: int) -> FilteredComplex:
    """Delta^n as a complex over the one-point poset."""
    return standard_simplex(TRIVIAL_POSET, ("*",) * (n + 1))


def plain_cycle(n: int) -> FilteredComplex:
    """A circle with n vertices and n edges over the one-point poset (n >= 3... or any n >= 1)."""
    return cycle_complex(TRIVIAL_POSET, "*", n, prefix="c")


def cycle_complex(poset: Poset, color: str, n: int, prefix: str = "c") -> FilteredComplex:
    """Simplicial circle: vertices prefix0..prefix{n-1}, edge i from vertex i to i+1."""
    gens: dict[str, tuple[tuple[str, ...], tuple[Ref, ...]]] = {}
    for i in range(n):
        gens[f"{prefix}{i}"] = ((color,), ())
    for i in range(n):
        # d_1 = start, d_0 = end
        gens[f"{prefix}e{i}"] = (
            (color, color),
            (identity_ref(f"{prefix}{(i + 1) % n}"), identity_ref(f"{prefix}{i}")),
        )
    return FilteredComplex(poset, gens, meta={"kind": "cycle", "n": n}, validate=False)


def disjoint_union(X: FilteredComplex, Y: FilteredComplex, tagx="A", tagy="B") -> FilteredComplex:
    if X.poset != Y.poset:
        raise ComplexError("disjoint union needs a common poset")
    gens = {}
    for g in X.generators():
        faces = tuple(Ref(f"{tagx}~{r.gen}", r.degens) for r in X._faces[g])
        gens[f"{tagx}~{g}"] = (X.color(g), faces)
    for g in Y.generators():
        faces = tuple(Ref(f"{tagy}~{r.gen}", r.degens) for r in Y._faces[g])
        gens[f"{tagy}~{g}"] = (Y.color(g), faces)
    return FilteredComplex(X.poset, gens, meta={"kind": "disjoint_union"}, validate=False)


# ---------------------------------------------------------------------------
# Pair complexes: filtered product and tensor with a plain simplicial set.


def _joint_nondegenerate(wx: tuple[int, ...], wy: tuple[int, ...]) -> bool:
    return not any(wx[i] == wx[i + 1] and wy[i] == wy[i + 1] for i in range(len(wx) - 1))


def _pair_name(rx: Ref, ry: Ref) -> str:
    fx = rx.gen if not rx.degens else "s" + ".".join(map(str, rx.degens)) + "_" + rx.gen
    fy = ry.gen if not ry.degens else "s" + ".".join(map(str, ry.degens)) + "_" + ry.gen
    return f"{fx}|{fy}"


def _normalize_pair(X: FilteredComplex, Y: FilteredComplex, rx: Ref, ry: Ref) -> tuple[Ref, Ref, tuple[int, ...]]:
    """Split a pair of refs into common degeneracies and a jointly-nondegenerate core."""
    wx = surj_of_degens(X.dim(rx.gen), rx.degens)
    wy = surj_of_degens(Y.dim(ry.gen), ry.degens)
    keep = [0]
    for i in range(1, len(wx)):
        if wx[i] == wx[i - 1] and wy[i] == wy[i - 1]:
            continue
        keep.append(i)
    common = tuple(wj for wj in _positions_to_surj(keep, len(wx)))
    core_x = Ref(rx.gen, degens_of_surj(tuple(wx[i] for i in keep)))
    core_y = Ref(ry.gen, degens_of_surj(tuple(wy[i] for i in keep)))
    return core_x, core_y, common


def _positions_to_surj(keep: list[int], total: int) -> tuple[int, ...]:
    # map [total-1] ->> [len(keep)-1]: position i goes to index of the last kept position <= i
    out = []
    j = -1
    for i in range(total):
        if j + 1 < len(keep) and keep[j + 1] == i:
            j += 1
        out.append(j)
    return tuple(out)


def _build_pair_complex(X: FilteredComplex, Y: FilteredComplex, match_colors: bool, kind: str) -> FilteredComplex:
    max_dim = X.max_dim + Y.max_dim
    if X.is_empty() or Y.is_empty():
        return FilteredComplex(X.poset, {}, meta={"kind": kind, "pairs": {}, "pair_index": {}}, validate=False)
    pairs: dict[str, tuple[Ref, Ref]] = {}
    names: dict[tuple[Ref, Ref], str] = {}
    gens: dict[str, tuple[tuple[str, ...], tuple[Ref, ...]]] = {}
    for n in range(max_dim + 1):
        ylevel = Y.level(n)
        ybycolor = Y.level_by_color(n) if match_colors else None
        for rx in X.level(n):
            wx = surj_of_degens(X.dim(rx.gen), rx.degens)
            if match_colors:
                candidates = ybycolor.get(X.ref_color(rx), ())
            else:
                candidates = ylevel
            for ry in candidates:
                wy = surj_of_degens(Y.dim(ry.gen), ry.degens)
                if not _joint_nondegenerate(wx, wy):
                    continue
                name = _pair_name(rx, ry)
                pairs[name] = (rx, ry)
                names[(rx, ry)] = name
    for name, (rx, ry) in pairs.items():
        n = X.ref_dim(rx)
        colors = X.ref_color(rx)
        if n == 0:
            gens[name] = (colors, ())
            continue
        faces = []
        for i in range(n + 1):
            fx = X.face_ref(rx, i)
            fy = Y.face_ref(ry, i)
            cx, cy, surj = _normalize_pair(X, Y, fx, fy)
            faces.append(Ref(names[(cx, cy)], degens_of_surj(surj)))
        gens[name] = (colors, tuple(faces))
    meta = {"kind": kind, "pairs": pairs, "pair_index": names}
    return FilteredComplex(X.poset, gens, meta=meta, validate=False)


def filtered_product(X: FilteredComplex, Y: FilteredComplex) -> FilteredComplex:
    """Fibered product over the nerve: pairs of simplices with equal color words."""
    if X.poset != Y.poset:
        raise ComplexError("filtered product needs a common poset")
    return _build_pair_complex(X, Y, match_colors=True, kind="product")


def tensor(X: FilteredComplex, K: FilteredComplex) -> FilteredComplex:
    """X tensor K for a plain simplicial set K; colors come from X."""
    return _build_pair_complex(X, K, match_colors=False, kind="tensor")


def pair_ref(T: FilteredComplex, X: FilteredComplex, Y: FilteredComplex, rx: Ref, ry: Ref) -> Ref:
    """The simplex of the pair complex T determined by component refs."""
    cx, cy, surj = _normalize_pair(X, Y, rx, ry)
    name = T.meta["pair_index"].get((cx, cy))
    if name is None:
        raise ComplexError(f"pair {cx},{cy} not present in the pair complex")
    return Ref(name, degens_of_surj(surj))
