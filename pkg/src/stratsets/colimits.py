"""Levelwise colimits of filtered complexes.

Presheaf colimits are computed level by level: simplices of the cells are
identified along the given spans with a union-find, then the quotient's
normal-form presentation is extracted by stripping degeneracies.
"""

from __future__ import annotations

from .complexes import ComplexError, FilteredComplex, Ref, identity_ref
from .maps import FilteredMap
from .posets import Poset


class Colimit:
    """A glued complex together with the projections from its cells."""

    def __init__(self, complex: FilteredComplex, cells: dict, class_of: dict):
        self.complex = complex
        self.cells = cells
        self._class_of = class_of

    def element_class(self, key, ref: Ref) -> Ref:
        """The quotient simplex under a cell simplex; degeneracies commute."""
        base = self._class_of[(key, identity_ref(ref.gen))]
        if not ref.degens:
            return base
        from .complexes import surj_of_degens

        word = surj_of_degens(self.cells[key].dim(ref.gen), ref.degens)
        return self.complex.pullback_ref(base, word)

    def injection(self, key) -> FilteredMap:
        cell = self.cells[key]
        table = {g: self._class_of[(key, identity_ref(g))] for g in cell.generators()}
        return FilteredMap(cell, self.complex, table, validate=False)


def coequalize(
    poset: Poset,
    cells: dict[object, FilteredComplex],
    spans: list[tuple[FilteredComplex, object, FilteredMap, object, FilteredMap]],
    kind: str = "colimit",
) -> Colimit:
    """Quotient the disjoint union of `cells` by the relations of `spans`.

    Each span is (D, keyA, u: D -> cells[keyA], keyB, v: D -> cells[keyB]);
    for every simplex of D, its two images are identified.
    """
    n_max = max((c.max_dim for c in cells.values()), default=-1)

    parent: dict = {}

    def find(x):
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            lo, hi = sorted((ra, rb))
            parent[hi] = lo
            parent.setdefault(lo, lo)

    elements: dict[int, list] = {n: [] for n in range(n_max + 1)}
    for key in sorted(cells, key=str):
        cell = cells[key]
        for n in range(n_max + 1):
            for ref in cell.level(n):
                item = (key, ref)
                parent.setdefault(item, item)
                elements[n].append(item)

    for D, keyA, u, keyB, v in spans:
        for n in range(n_max + 1):
            for ref in D.level(n):
                union((keyA, u.apply(ref)), (keyB, v.apply(ref)))

    def face_class(item, i):
        key, ref = item
        return find((key, cells[key].face_ref(ref, i)))

    def degen_class(item, j):
        key, ref = item
        return find((key, cells[key].degenerate_ref(ref, j)))

    def ref_dim(item):
        key, ref = item
        return cells[key].ref_dim(ref)

    # normal form of a class: strip the largest degeneracy index repeatedly
    nf_cache: dict = {}

    def normal_form(item) -> tuple[tuple[int, ...], object]:
        root = find(item)
        if root in nf_cache:
            return nf_cache[root]
        n = ref_dim(root)
        result = None
        for j in range(n - 1, -1, -1):
            fc = face_class(root, j)
            if degen_class(fc, j) == root:
                word, base = normal_form(fc)
                result = (_merge_degeneracy(word, j), base)
                break
        if result is None:
            result = ((), root)
        nf_cache[root] = result
        return result

    def _merge_degeneracy(word: tuple[int, ...], j: int) -> tuple[int, ...]:
        # prepend an outermost s_j to a normal word; s_j s_i = s_{i+1} s_j for j <= i
        out = list(word)
        pos = 0
        while pos < len(out) and j <= out[pos]:
            out[pos] += 1
            pos += 1
        out.insert(pos, j)
        for a in range(len(out) - 1):
            if out[a] <= out[a + 1]:
                raise ComplexError("degeneracy merge failed")
        return tuple(out)

    # collect nondegenerate classes per level, in deterministic order
    gen_name: dict = {}
    gen_items: dict[str, object] = {}
    reps: dict[str, tuple] = {}
    for n in range(n_max + 1):
        roots = sorted({find(it) for it in elements[n]}, key=lambda it: (str(it[0]), it[1].gen, it[1].degens))
        for root in roots:
            word, base = normal_form(root)
            if word:
                continue
            members = [it for it in elements[n] if find(it) == root and not it[1].degens]
            members.sort(key=lambda it: (str(it[0]), it[1].gen))
            key, ref = members[0]
            name = f"{key}~{ref.gen}"
            gen_name[root] = name
            gen_items[name] = root
            reps[name] = (key, ref)

    def class_ref(item) -> Ref:
        word, base = normal_form(item)
        return Ref(gen_name[base], word)

    gens: dict[str, tuple[tuple[str, ...], tuple[Ref, ...]]] = {}
    for name, root in gen_items.items():
        key, ref = root
        colors = cells[key].ref_color(ref)
        n = cells[key].ref_dim(ref)
        faces = tuple(class_ref(face_class(root, i)) for i in range(n + 1)) if n else ()
        gens[name] = (colors, faces)

    out = FilteredComplex(poset, gens, meta={"kind": kind, "reps": reps}, validate=False)

    class_of = {}
    for n in range(n_max + 1):
        for item in elements[n]:
            if not item[1].degens:
                class_of[item] = class_ref(item)
    return Colimit(out, dict(cells), class_of)


def _rewrite_merge_test():  # pragma: no cover
    pass


def pushout(f: FilteredMap, g: FilteredMap) -> Colimit:
    """Pushout of X <- A -> Y along f: A -> X and g: A -> Y.

    Injection keys are "left" (codomain of f) and "right" (codomain of g).
    """
    A = f.domain
    if g.domain is not A and g.domain.generators() != A.generators():
        raise ComplexError("pushout legs must share their domain")
    cells = {"left": f.codomain, "right": g.codomain}
    spans = [(A, "left", f, "right", g)]
    return coequalize(f.codomain.poset, cells, spans, kind="pushout")


def filtered_cone(L: FilteredComplex, apex_color: str, apex_name: str = "apex") -> FilteredComplex:
    """Cone on L with a fresh apex vertex below it.

    Every color of L must lie strictly above the apex color; the join adds,
    for each simplex of L, the simplex with the apex prepended.
    """
    P = L.poset
    for g in L.generators():
        for c in L.color(g):
            if not P.lt(apex_color, c):
                raise ComplexError(f"cone base color {c} is not above the apex color {apex_color}")
    gens: dict[str, tuple[tuple[str, ...], tuple[Ref, ...]]] = {apex_name: ((apex_color,), ())}

    def lifted(ref: Ref) -> Ref:
        return Ref(f"{apex_name}*{ref.gen}", tuple(d + 1 for d in ref.degens))

    for g in L.generators():
        gens[g] = (L.color(g), L._faces[g])
        n = L.dim(g)
        colors = (apex_color,) + L.color(g)
        if n == 0:
            faces = (identity_ref(g), identity_ref(apex_name))
        else:
            faces = (identity_ref(g),) + tuple(lifted(L.face_of_gen(g, i)) for i in range(n + 1))
        gens[f"{apex_name}*{g}"] = (colors, faces)
    return FilteredComplex(P, gens, meta={"kind": "cone", "apex": apex_name}, validate=False)


def euler_characteristic(X: FilteredComplex) -> int:
    return sum((-1) ** d * c for d, c in X.size().items())
