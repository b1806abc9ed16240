"""Filtered simplicial maps and exhaustive map enumeration.

A map is determined by where it sends the generators of its domain; the
search runs dimension by dimension with face constraints checked as soon as
a candidate image is proposed.  Colors prune first: candidate images are
looked up by color word.
"""

from __future__ import annotations

from typing import Callable, Iterator

from .budget import Budget
from .complexes import (
    ComplexError,
    FilteredComplex,
    Ref,
    identity_ref,
    pair_ref,
    plain_simplex,
    ref_sort_key,
    surj_of_degens,
    tensor,
)


class MapError(ValueError):
    pass


class FilteredMap:
    """A color-preserving simplicial map, stored by generator assignment."""

    __slots__ = ("domain", "codomain", "assignment", "_key")

    def __init__(self, domain: FilteredComplex, codomain: FilteredComplex, assignment: dict[str, Ref], validate: bool = True):
        self.domain = domain
        self.codomain = codomain
        self.assignment = dict(assignment)
        self._key = tuple(sorted(self.assignment.items()))
        if validate:
            self.validate()

    def validate(self) -> None:
        for g in self.domain.generators():
            if g not in self.assignment:
                raise MapError(f"no image for generator {g}")
            img = self.assignment[g]
            if img.gen not in self.codomain:
                raise MapError(f"image of {g} uses unknown generator {img.gen}")
            if self.codomain.ref_dim(img) != self.domain.dim(g):
                raise MapError(f"image of {g} has wrong dimension")
            if self.codomain.ref_color(img) != self.domain.color(g):
                raise MapError(f"image of {g} breaks colors")
        for g in self.domain.generators():
            n = self.domain.dim(g)
            for i in range(n + 1) if n else ():
                want = self.apply(self.domain.face_of_gen(g, i))
                got = self.codomain.face_ref(self.assignment[g], i)
                if want != got:
                    raise MapError(f"face d_{i} of {g} does not commute")

    def apply(self, ref: Ref) -> Ref:
        img = self.assignment[ref.gen]
        if not ref.degens:
            return img
        word = surj_of_degens(self.domain.dim(ref.gen), ref.degens)
        return self.codomain.pullback_ref(img, word)

    def compose(self, other: "FilteredMap") -> "FilteredMap":
        """self o other."""
        if other.codomain is not self.domain:
            # allow structurally equal complexes
            pass
        table = {g: self.apply(other.assignment[g]) for g in other.domain.generators()}
        return FilteredMap(other.domain, self.codomain, table, validate=False)

    def is_identity_on(self, gens) -> bool:
        return all(self.assignment[g] == identity_ref(g) for g in gens)

    def __eq__(self, other):
        return isinstance(other, FilteredMap) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        return f"FilteredMap({len(self.assignment)} generators)"

    def format(self) -> str:
        return "; ".join(f"{g} -> {r.format()}" for g, r in self._key)


def identity_map(X: FilteredComplex) -> FilteredMap:
    return FilteredMap(X, X, {g: identity_ref(g) for g in X.generators()}, validate=False)


def inclusion_map(sub: FilteredComplex, sup: FilteredComplex) -> FilteredMap:
    """Inclusion of a subcomplex that shares generator names with `sup`."""
    table = {}
    for g in sub.generators():
        if g not in sup:
            raise MapError(f"{g} is not a generator of the ambient complex")
        table[g] = identity_ref(g)
    return FilteredMap(sub, sup, table, validate=False)


def constant_map(X: FilteredComplex, Y: FilteredComplex, vertex: str) -> FilteredMap:
    """Collapse X onto a vertex of Y.  Every color of X must equal the vertex color."""
    table = {}
    (vcolor,) = Y.color(vertex)
    for g in X.generators():
        if set(X.color(g)) != {vcolor}:
            raise MapError("constant map breaks colors")
        n = X.dim(g)
        table[g] = Ref(vertex, tuple(range(n - 1, -1, -1)))
    return FilteredMap(X, Y, table, validate=False)


def map_from_vertex_images(dom: FilteredComplex, cod: FilteredComplex, vimg: dict[str, str]) -> FilteredMap:
    """Build a map from a vertex assignment, for vertex-named codomains.

    The codomain must be a standard simplex, horn, or boundary: its
    generators are named by the vertex positions they span, so a monotone
    vertex word determines a unique simplex.
    """
    if not cod.meta.get("vertex_named"):
        raise MapError("codomain is not vertex-named")
    table: dict[str, Ref] = {}
    for g in dom.generators():
        word = _vertex_sequence(dom, g)
        positions = tuple(int(vimg[v]) if isinstance(vimg[v], str) else vimg[v] for v in word)
        if list(positions) != sorted(positions):
            raise MapError(f"vertex images along {g} are not monotone")
        top = ".".join(str(p) for p in sorted(set(positions)))
        if top not in cod:
            raise MapError(f"image of {g} spans {top}, absent from the codomain")
        rank = {p: j for j, p in enumerate(sorted(set(positions)))}
        from .complexes import degens_of_surj

        table[g] = Ref(top, degens_of_surj(tuple(rank[p] for p in positions)))
    return FilteredMap(dom, cod, table)


def _vertex_sequence(X: FilteredComplex, gen: str) -> list[str]:
    """The ordered vertex generators of a generator (via iterated faces)."""
    n = X.dim(gen)
    out = []
    for i in range(n + 1):
        ref = identity_ref(gen)
        for j in range(n, -1, -1):
            if j != i:
                ref = X.face_ref(ref, j)
        out.append(ref.gen)
    return out


def vertex_sequence(X: FilteredComplex, gen: str) -> list[str]:
    return _vertex_sequence(X, gen)


# ---------------------------------------------------------------------------
# Exhaustive enumeration


def _structure(X: FilteredComplex):
    """Constraint graph of a domain complex: face constraints and cofaces."""
    if "_csp" in X.meta:
        return X.meta["_csp"]
    constraints: dict[str, list] = {}
    deps: dict[str, frozenset] = {}
    cofaces: dict[str, tuple] = {g: () for g in X.generators()}
    for g in X.generators():
        n = X.dim(g)
        cs = []
        for i in range(n + 1) if n else ():
            fref = X.face_of_gen(g, i)
            surj = surj_of_degens(X.dim(fref.gen), fref.degens) if fref.degens else None
            cs.append((i, fref.gen, surj))
        constraints[g] = cs
        deps[g] = frozenset(fg for _, fg, _ in cs)
    cof: dict[str, list] = {g: [] for g in X.generators()}
    for g, ds in deps.items():
        for d in ds:
            cof[d].append(g)
    cofaces = {g: tuple(sorted(cs)) for g, cs in cof.items()}
    X.meta["_csp"] = (constraints, deps, cofaces)
    return X.meta["_csp"]


def enumerate_maps(
    X: FilteredComplex,
    Y: FilteredComplex,
    budget: Budget | None = None,
    fixed: dict[str, Ref] | None = None,
) -> Iterator[FilteredMap]:
    """Yield every filtered map X -> Y exactly once, in deterministic order.

    Most-constrained-first search with forward checking: a generator becomes
    assignable once all its faces are assigned, at which point its candidate
    list is filtered by the face constraints; the generator with the fewest
    remaining candidates is assigned next.  `fixed` pins images of some
    generators and must be face-closed.  One budget unit per candidate tried.
    """
    budget = budget or Budget.unlimited()
    constraints, deps, cofaces = _structure(X)
    face_ref = Y.face_ref
    pull = Y.pullback_ref
    charge = budget.charge

    assignment: dict[str, Ref] = {}
    if fixed:
        for g in fixed:
            if deps[g] - fixed.keys():
                raise MapError("pinned generators must form a face-closed set")
        assignment.update(fixed)
        for g, cand in fixed.items():
            for i, fgen, surj in constraints[g]:
                want = assignment[fgen]
                if surj is not None:
                    want = pull(want, surj)
                if face_ref(cand, i) != want:
                    return  # inconsistent pins admit no extension

    depcount: dict[str, int] = {}
    ready: dict[str, list[Ref]] = {}

    def filtered_domain(g: str) -> list[Ref]:
        cands = Y.level_by_color(X.dim(g)).get(X.color(g), ())
        out = []
        for cand in cands:
            ok = True
            for i, fgen, surj in constraints[g]:
                want = assignment[fgen]
                if surj is not None:
                    want = pull(want, surj)
                if face_ref(cand, i) != want:
                    ok = False
                    break
            if ok:
                out.append(cand)
        return out

    dead = False
    for g in X.generators():
        if g in assignment:
            continue
        depcount[g] = sum(1 for d in deps[g] if d not in assignment)
        if depcount[g] == 0:
            dom = filtered_domain(g)
            ready[g] = dom
            if not dom:
                dead = True
    if dead:
        return

    total = len(X.generators())

    def extend() -> Iterator[FilteredMap]:
        if len(assignment) == total:
            yield FilteredMap(X, Y, dict(assignment), validate=False)
            return
        g = min(ready, key=lambda v: (len(ready[v]), v))
        dom = ready.pop(g)
        for cand in dom:
            charge()
            assignment[g] = cand
            opened: list[str] = []
            touched: list[str] = []
            alive = True
            for c in cofaces[g]:
                if c in assignment:
                    continue
                depcount[c] -= 1
                touched.append(c)
                if depcount[c] == 0:
                    dom_c = filtered_domain(c)
                    ready[c] = dom_c
                    opened.append(c)
                    if not dom_c:
                        alive = False
            if alive:
                yield from extend()
            for c in opened:
                del ready[c]
            for c in touched:
                depcount[c] += 1
            del assignment[g]
        ready[g] = dom

    yield from extend()


def count_maps(X, Y, budget=None) -> int:
    return sum(1 for _ in enumerate_maps(X, Y, budget))


# ---------------------------------------------------------------------------
# Mapping space levels, prisms, homotopy


_PLAIN_FACE_CACHE: dict[tuple[int, int], FilteredMap] = {}


def plain_face_map(n: int, i: int) -> FilteredMap:
    """delta^i: Delta^{n-1} -> Delta^n over the trivial poset."""
    key = (n, i)
    if key not in _PLAIN_FACE_CACHE:
        dom = plain_simplex(n - 1)
        cod = plain_simplex(n)
        vimg = {str(v): (v if v < i else v + 1) for v in range(n)}
        _PLAIN_FACE_CACHE[key] = map_from_vertex_images(dom, cod, vimg)
    return _PLAIN_FACE_CACHE[key]


_PLAIN_DEGEN_CACHE: dict[tuple[int, int], FilteredMap] = {}


def plain_degeneracy_map(n: int, i: int) -> FilteredMap:
    """sigma^i: Delta^{n+1} -> Delta^n over the trivial poset."""
    key = (n, i)
    if key not in _PLAIN_DEGEN_CACHE:
        dom = plain_simplex(n + 1)
        cod = plain_simplex(n)
        vimg = {str(v): (v if v <= i else v - 1) for v in range(n + 2)}
        _PLAIN_DEGEN_CACHE[key] = map_from_vertex_images(dom, cod, vimg)
    return _PLAIN_DEGEN_CACHE[key]


def pair_map(
    T: FilteredComplex,
    Tprime: FilteredComplex,
    X: FilteredComplex,
    Y: FilteredComplex,
    Xp: FilteredComplex,
    Yp: FilteredComplex,
    u: FilteredMap | None,
    v: FilteredMap | None,
) -> FilteredMap:
    """Induced map between pair complexes, from maps on the two factors.

    `u`: X -> Xp (None for identity), `v`: Y -> Yp (None for identity).
    """
    table = {}
    for name, (rx, ry) in T.meta["pairs"].items():
        ix = u.apply(rx) if u else rx
        iy = v.apply(ry) if v else ry
        table[name] = pair_ref(Tprime, Xp, Yp, ix, iy)
    return FilteredMap(T, Tprime, table, validate=False)


_PRISM_CACHE: dict[int, FilteredComplex] = {}


def prism(X: FilteredComplex, n: int = 1) -> FilteredComplex:
    """X tensor Delta^n (not cached across complexes; cache per call site)."""
    return tensor(X, plain_simplex(n))


def tensor_end_inclusion(X: FilteredComplex, T: FilteredComplex, eps: int, n: int = 1) -> FilteredMap:
    """X -> X tensor Delta^n at the vertex eps of Delta^n."""
    table = {}
    K = plain_simplex(n)
    for g in X.generators():
        m = X.dim(g)
        const = Ref(str(eps), tuple(range(m - 1, -1, -1)))
        table[g] = pair_ref(T, X, K, identity_ref(g), const)
    return FilteredMap(X, T, table, validate=False)


def tensor_projection(X: FilteredComplex, T: FilteredComplex) -> FilteredMap:
    """X tensor K -> X."""
    table = {name: rx for name, (rx, ry) in T.meta["pairs"].items()}
    return FilteredMap(T, X, table, validate=False)


def mapping_space_level(X: FilteredComplex, Y: FilteredComplex, n: int, budget: Budget | None = None) -> list[FilteredMap]:
    """Map(X, Y)_n as the set of maps X tensor Delta^n -> Y."""
    if n == 0:
        dom = tensor(X, plain_simplex(0))
    else:
        dom = tensor(X, plain_simplex(n))
    return list(enumerate_maps(dom, Y, budget))


def homotopy_graph(X: FilteredComplex, Y: FilteredComplex, budget: Budget | None = None):
    """All maps X -> Y plus the elementary homotopies between them.

    Returns (vertices, edges) where edges are (f, g, H) with H defined on
    the cylinder X tensor Delta^1 restricting to f at end 0 and g at end 1.
    """
    budget = budget or Budget.unlimited()
    vertices = list(enumerate_maps(X, Y, budget))
    cyl = tensor(X, plain_simplex(1))
    i0 = tensor_end_inclusion(X, cyl, 0)
    i1 = tensor_end_inclusion(X, cyl, 1)
    edges = []
    for H in enumerate_maps(cyl, Y, budget):
        f = H.compose(i0)
        g = H.compose(i1)
        edges.append((f, g, H))
    return vertices, edges


def homotopy_classes(X: FilteredComplex, Y: FilteredComplex, budget: Budget | None = None) -> list[list[FilteredMap]]:
    """Partition of Hom(X, Y) by the homotopy closure, deterministically ordered."""
    vertices, edges = homotopy_graph(X, Y, budget)
    index = {f: i for i, f in enumerate(vertices)}
    parent = list(range(len(vertices)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for f, g, _ in edges:
        ra, rb = find(index[f]), find(index[g])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    classes: dict[int, list[FilteredMap]] = {}
    for f, i in index.items():
        classes.setdefault(find(i), []).append(f)
    out = [sorted(c, key=lambda m: m._key) for c in classes.values()]
    out.sort(key=lambda c: c[0]._key)
    return out


def are_homotopic(f: FilteredMap, g: FilteredMap, budget: Budget | None = None):
    """Decide homotopy via the closure of elementary homotopies.

    Returns (True, chain) with a list of (H, forward) steps, or (False, None)
    once the full graph is known.
    """
    if f.domain is not g.domain or f.codomain is not g.codomain:
        if f.domain.generators() != g.domain.generators():
            raise MapError("maps must share a domain and codomain")
    if f == g:
        cyl = tensor(f.domain, plain_simplex(1))
        pr = tensor_projection(f.domain, cyl)
        return True, [(f.compose(pr), True)]
    vertices, edges = homotopy_graph(f.domain, f.codomain, budget)
    adj: dict[FilteredMap, list[tuple[FilteredMap, FilteredMap, bool]]] = {}
    for a, b, H in edges:
        adj.setdefault(a, []).append((b, H, True))
        adj.setdefault(b, []).append((a, H, False))
    seen = {f: None}
    queue = [f]
    while queue:
        cur = queue.pop(0)
        if cur == g:
            chain = []
            node = cur
            while seen[node] is not None:
                prev, H, forward = seen[node]
                chain.append((H, forward))
                node = prev
            return True, list(reversed(chain))
        for nxt, H, forward in adj.get(cur, ()):
            if nxt not in seen:
                seen[nxt] = (cur, H, forward)
                queue.append(nxt)
    return False, None
