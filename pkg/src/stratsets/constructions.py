"""Example factory: mapping-cylinder bundle constructions and fixtures.

Every shipped example is a validated complex over the two-element chain
p0 < p1 together with its expected invariant record, derived by brute force
ahead of time (component counts, Euler characteristics, torsion data).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .colimits import coequalize, euler_characteristic, filtered_cone, pushout
from .complexes import (
    FilteredComplex,
    Ref,
    TRIVIAL_POSET,
    cycle_complex,
    identity_ref,
    plain_simplex,
    standard_simplex,
    horn,
    tensor,
)
from .invariants import (
    GroupPresentation,
    HomData,
    Spi0Diagram,
    Spi1Diagram,
    edge_path_group,
    induced_pi1_matrix,
)
from .maps import FilteredMap, inclusion_map, tensor_projection
from .posets import Poset

P2 = Poset.chain("p0", "p1")


@dataclass
class BundleSpec:
    """Singular base M, holink surrogate E, regular model E', and the two
    attaching maps out of E.  All models are plain complexes."""

    base: FilteredComplex
    holink: FilteredComplex
    regular: FilteredComplex
    attach: FilteredMap
    reattach: FilteredMap


def recolor(X: FilteredComplex, poset: Poset, color: str) -> FilteredComplex:
    """Relabel every vertex of a plain complex with one color of `poset`."""
    gens = {}
    for g in X.generators():
        gens[g] = ((color,) * (X.dim(g) + 1), X._faces[g])
    return FilteredComplex(poset, gens, meta=dict(X.meta), validate=False)


def bicolored_cylinder(E: FilteredComplex, poset: Poset, c0: str, c1: str) -> FilteredComplex:
    """E tensor the 1-simplex, colored c0 at end 0 and c1 at end 1."""
    K = plain_simplex(1)
    T = tensor(E, K)
    gens = {}
    for g in T.generators():
        rx, rt = T.meta["pairs"][g]
        from .complexes import surj_of_degens
        from .maps import vertex_sequence

        base_vertices = vertex_sequence(K, rt.gen)
        word = surj_of_degens(K.dim(rt.gen), rt.degens)
        colors = tuple(c0 if base_vertices[v] == "0" else c1 for v in word)
        gens[g] = (colors, T._faces[g])
    return FilteredComplex(poset, gens, meta=dict(T.meta), validate=False)


def build_filtered_space(spec: BundleSpec, poset: Poset = P2, c0: str = "p0", c1: str = "p1") -> FilteredComplex:
    """Mapping cylinder of the attach map, colored, pushed out along reattach."""
    cyl = bicolored_cylinder(spec.holink, poset, c0, c1)
    M = recolor(spec.base, poset, c0)
    Ep = recolor(spec.regular, poset, c1)
    E0 = recolor(spec.holink, poset, c0)
    E1 = recolor(spec.holink, poset, c1)
    K = plain_simplex(1)

    def end_map(Ec: FilteredComplex, eps: int) -> FilteredMap:
        from .complexes import pair_ref

        table = {}
        for g in Ec.generators():
            m = Ec.dim(g)
            const = Ref(str(eps), tuple(range(m - 1, -1, -1)))
            table[g] = pair_ref(cyl, spec.holink, K, identity_ref(g), const)
        return FilteredMap(Ec, cyl, table, validate=False)

    attach0 = FilteredMap(E0, M, dict(spec.attach.assignment), validate=False)
    reattach1 = FilteredMap(E1, Ep, dict(spec.reattach.assignment), validate=False)
    spans = [
        (E0, "body", end_map(E0, 0), "sing", attach0),
        (E1, "body", end_map(E1, 1), "reg", reattach1),
    ]
    colim = coequalize(poset, {"body": cyl, "sing": M, "reg": Ep}, spans, kind="bundle_space")
    out = colim.complex
    out.validate()
    out.meta["strata"] = {c0: "sing", c1: "reg"}
    return out


# ---------------------------------------------------------------------------
# Assembled invariants of a bundle construction


def assemble_spi_from_bundle(spec: BundleSpec) -> Spi1Diagram:
    """First homotopy group diagram predicted by the bundle construction.

    Transitions: the face toward the singular vertex word is induced by the
    attach map, the face toward the regular vertex word by the reattach map.
    """
    rootM = min(spec.base.generators(0))
    rootE = min(spec.holink.generators(0))
    rootEp = min(spec.regular.generators(0))
    dM = edge_path_group(spec.base, rootM)
    dE = edge_path_group(spec.holink, rootE)
    dEp = edge_path_group(spec.regular, rootEp)
    to_sing = HomData(dE.presentation, dM.presentation, induced_pi1_matrix(spec.attach, dE, dM))
    to_reg = HomData(dE.presentation, dEp.presentation, induced_pi1_matrix(spec.reattach, dE, dEp))
    return Spi1Diagram(dM.presentation, dEp.presentation, dE.presentation, to_sing, to_reg)


def plain_components(K: FilteredComplex) -> dict[str, int]:
    verts = K.generators(0)
    index = {v: i for i, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for e in K.generators(1):
        a = K.face_of_gen(e, 1).gen
        b = K.face_of_gen(e, 0).gen
        ra, rb = find(index[a]), find(index[b])
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    roots = sorted({find(i) for i in range(len(verts))})
    label = {r: i for i, r in enumerate(roots)}
    return {v: label[find(index[v])] for v in verts}


def assemble_spi0_from_bundle(spec: BundleSpec, poset: Poset = P2) -> Spi0Diagram:
    """Connected-component diagram predicted by the bundle construction."""
    compM = plain_components(spec.base)
    compE = plain_components(spec.holink)
    compEp = plain_components(spec.regular)
    w0, w1, w01 = ("p0",), ("p1",), ("p0", "p1")
    classes = {
        w0: [f"p0#{i}" for i in sorted(set(compM.values()))],
        w1: [f"p1#{i}" for i in sorted(set(compEp.values()))],
        w01: [f"p0.p1#{i}" for i in sorted(set(compE.values()))],
    }
    trans1 = {}
    trans0 = {}
    for v, c in compE.items():
        img_sing = compM[spec.attach.assignment[v].gen]
        img_reg = compEp[spec.reattach.assignment[v].gen]
        trans1[f"p0.p1#{c}"] = f"p0#{img_sing}"
        trans0[f"p0.p1#{c}"] = f"p1#{img_reg}"
    transitions = {(w01, 0): trans0, (w01, 1): trans1}
    return Spi0Diagram(poset, [w0, w1, w01], classes, {}, transitions, stage=-1)


# ---------------------------------------------------------------------------
# Plain models


def circle(n: int, prefix: str = "c") -> FilteredComplex:
    return cycle_complex(TRIVIAL_POSET, "*", n, prefix=prefix)


def cover_map(src: FilteredComplex, dst: FilteredComplex, fold: int) -> FilteredMap:
    """The simplicial degree-`fold` covering between cycle complexes."""
    n_src = src.meta["n"]
    n_dst = dst.meta["n"]
    if n_src != fold * n_dst:
        raise ValueError("cover requires source length = fold * target length")
    ps, pd = _cycle_prefix(src), _cycle_prefix(dst)
    table = {}
    for i in range(n_src):
        table[f"{ps}{i}"] = identity_ref(f"{pd}{i % n_dst}")
        table[f"{ps}e{i}"] = identity_ref(f"{pd}e{i % n_dst}")
    return FilteredMap(src, dst, table)


def _cycle_prefix(K: FilteredComplex) -> str:
    v = min(K.generators(0))
    return v.rstrip("0123456789")


def torus_product(long_n: int, mer_n: int) -> FilteredComplex:
    """Product of two cycles, longitude first."""
    return tensor(cycle_complex(TRIVIAL_POSET, "*", long_n, prefix="L"), cycle_complex(TRIVIAL_POSET, "*", mer_n, prefix="M"))


def csaszar_torus() -> FilteredComplex:
    """The 7-vertex torus triangulation as a plain complex."""
    import itertools

    gens: dict = {}
    for i in range(7):
        gens[f"v{i}"] = (("*",), ())
    edges = set()
    tris = []
    for i in range(7):
        for pattern in ((0, 1, 3), (0, 2, 3)):
            tri = tuple(sorted((i + a) % 7 for a in pattern))
            tris.append(tri)
            for pair in itertools.combinations(tri, 2):
                edges.add(pair)
    for a, b in sorted(edges):
        gens[f"e{a}_{b}"] = (("*",) * 2, (identity_ref(f"v{b}"), identity_ref(f"v{a}")))
    for idx, (a, b, c) in enumerate(sorted(set(tris))):
        gens[f"t{idx}"] = (
            ("*",) * 3,
            (identity_ref(f"e{b}_{c}"), identity_ref(f"e{a}_{c}"), identity_ref(f"e{a}_{b}")),
        )
    return FilteredComplex(TRIVIAL_POSET, gens, meta={"kind": "csaszar"}, validate=False)


# ---------------------------------------------------------------------------
# The example library


@dataclass
class ExampleRecord:
    name: str
    complex: FilteredComplex
    bundle: BundleSpec | None
    expected: dict = field(default_factory=dict)
    description: str = ""


def _cylinder_spec() -> BundleSpec:
    M = circle(3, "m")
    E = circle(3, "e")
    Ep = circle(3, "r")
    attach = cover_map(E, M, 1)
    reattach = cover_map(E, Ep, 1)
    return BundleSpec(M, E, Ep, attach, reattach)


def _moebius_spec() -> BundleSpec:
    M = circle(3, "m")
    E = circle(6, "e")
    Ep = circle(6, "r")
    attach = cover_map(E, M, 2)
    reattach = cover_map(E, Ep, 1)
    return BundleSpec(M, E, Ep, attach, reattach)


def _pair_a_spec() -> BundleSpec:
    M = circle(3, "m")
    E = torus_product(3, 3)
    L = cycle_complex(TRIVIAL_POSET, "*", 3, prefix="L")
    Ep = circle(3, "r")
    pr = tensor_projection(L, E)
    relabel = FilteredMap(L, M, {g: identity_ref(g.replace("L", "m", 1)) for g in L.generators()})
    relabel_r = FilteredMap(L, Ep, {g: identity_ref(g.replace("L", "r", 1)) for g in L.generators()})
    return BundleSpec(M, E, Ep, relabel.compose(pr), relabel_r.compose(pr))


def _pair_b_spec() -> BundleSpec:
    M = circle(3, "m")
    E = torus_product(6, 3)
    L6 = cycle_complex(TRIVIAL_POSET, "*", 6, prefix="L")
    Ep = circle(6, "r")
    pr = tensor_projection(L6, E)
    M3 = circle(3, "m")
    cover = cover_map(cycle_complex(TRIVIAL_POSET, "*", 6, prefix="L"), M3, 2)
    relabel_r = FilteredMap(L6, Ep, {g: identity_ref(g.replace("L", "r", 1)) for g in L6.generators()})
    return BundleSpec(M, E, Ep, cover.compose(pr), relabel_r.compose(pr))


def _pinched_torus() -> FilteredComplex:
    """Two cones on one circle, glued along the circle and both apexes."""
    base = cycle_complex(P2, "p1", 3, prefix="b")
    cone1 = filtered_cone(base, "p0")
    cone2 = filtered_cone(base, "p0")
    shared = cone1.restrict([g for g in cone1.generators() if not g.startswith("apex*")])
    f = inclusion_map(shared, cone1)
    g = inclusion_map(shared, cone2)
    out = pushout(f, g).complex
    out.validate()
    return out


def _glued_spheres() -> FilteredComplex:
    """Two spheres sharing their poles; each sphere is two cones on a circle."""
    gens: dict = {}
    gens["n"] = (("p0",), ())
    gens["s"] = (("p0",), ())
    for j in (1, 2):
        for i in range(3):
            gens[f"q{j}v{i}"] = (("p1",), ())
        for i in range(3):
            gens[f"q{j}e{i}"] = (
                ("p1", "p1"),
                (identity_ref(f"q{j}v{(i + 1) % 3}"), identity_ref(f"q{j}v{i}")),
            )
        for pole in ("n", "s"):
            for i in range(3):
                gens[f"{pole}{j}sp{i}"] = (
                    ("p0", "p1"),
                    (identity_ref(f"q{j}v{i}"), identity_ref(pole)),
                )
            for i in range(3):
                gens[f"{pole}{j}t{i}"] = (
                    ("p0", "p1", "p1"),
                    (
                        identity_ref(f"q{j}e{i}"),
                        identity_ref(f"{pole}{j}sp{(i + 1) % 3}"),
                        identity_ref(f"{pole}{j}sp{i}"),
                    ),
                )
    out = FilteredComplex(P2, gens, meta={"kind": "glued_spheres"})
    return out


_REGISTRY = ("cylinder", "moebius", "pinched_torus", "glued_spheres", "solid_torus_pair_a", "solid_torus_pair_b", "horn-p0p0p1-1")


def example_names() -> tuple[str, ...]:
    return _REGISTRY


def example(name: str) -> ExampleRecord:
    """A validated example complex with its expected invariant record."""
    if name == "cylinder":
        spec = _cylinder_spec()
        cx = build_filtered_space(spec)
        return ExampleRecord(
            name,
            cx,
            spec,
            expected={
                "strata": 2,
                "singular_pi1": [0],
                "regular_pi1": [0],
                "link_transition_cokernel": [],
                "spi0_counts": {("p0",): 1, ("p1",): 1, ("p0", "p1"): 1},
            },
            description="band over a circle with one boundary circle as singular stratum",
        )
    if name == "moebius":
        spec = _moebius_spec()
        cx = build_filtered_space(spec)
        return ExampleRecord(
            name,
            cx,
            spec,
            expected={
                "strata": 2,
                "singular_pi1": [0],
                "regular_pi1": [0],
                "link_transition_cokernel": [2],
                "euler": 0,
                "spi0_counts": {("p0",): 1, ("p1",): 1, ("p0", "p1"): 1},
            },
            description="twisted band with its core circle as singular stratum",
        )
    if name == "pinched_torus":
        cx = _pinched_torus()
        return ExampleRecord(
            name,
            cx,
            None,
            expected={
                "strata": 2,
                "singular_vertices": 1,
                "spi0_counts": {("p0",): 1, ("p1",): 1, ("p0", "p1"): 2},
            },
            description="sphere with both poles identified, pinch point singular",
        )
    if name == "glued_spheres":
        cx = _glued_spheres()
        return ExampleRecord(
            name,
            cx,
            None,
            expected={
                "strata": 2,
                "singular_vertices": 2,
                "spi0_counts": {("p0",): 2, ("p1",): 2, ("p0", "p1"): 4},
            },
            description="two spheres glued along their north and south poles",
        )
    if name == "solid_torus_pair_a":
        spec = _pair_a_spec()
        cx = build_filtered_space(spec)
        return ExampleRecord(
            name,
            cx,
            spec,
            expected={"link_pi1": [0, 0], "link_transition_cokernel": [], "regular_pi1": [0]},
            description="circle times a sphere with one pinch point, via its tubular data",
        )
    if name == "solid_torus_pair_b":
        spec = _pair_b_spec()
        cx = build_filtered_space(spec)
        return ExampleRecord(
            name,
            cx,
            spec,
            expected={"link_pi1": [0, 0], "link_transition_cokernel": [2], "regular_pi1": [0]},
            description="twisted sphere bundle counterpart of pair a",
        )
    if name == "horn-p0p0p1-1":
        cx = horn(P2, ("p0", "p0", "p1"), 1)
        return ExampleRecord(
            name,
            cx,
            None,
            expected={"fibrant": False},
            description="the horn at the repeated color, not fibrant",
        )
    raise KeyError(f"unknown example {name!r}; known: {', '.join(_REGISTRY)}")
