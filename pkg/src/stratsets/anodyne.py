"""Strong anodyne presentations: data, verifier, and generators.

A presentation certifies an inclusion as a strong anodyne extension: the
new nondegenerate simplices split into type II and type I, matched by a
capping bijection whose ancestral preorder is well founded (acyclic, on
finite instances).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter

from .budget import Budget
from .complexes import FilteredComplex, Ref, cached_simplex, identity_ref, standard_simplex, tensor
from .exfunctor import (
    element_face,
    ex_level,
    gamma_degree,
    is_degenerate_element,
    iota_image,
    precompose_r,
    stage_face_map,
)
from .fibrancy import find_filler, is_admissible
from .maps import FilteredMap, enumerate_maps
from .posets import Poset, nondegenerate_support, word_degeneracy, word_face
from .subdivision import chain_name, sdp_cell


class ClassificationError(RuntimeError):
    """The generated partition failed; this falsifies the construction."""


# ---------------------------------------------------------------------------
# Simplex universes: a uniform face interface for materialized and level-
# indexed ambient objects.


class ComplexUniverse:
    """Ambient = a materialized complex; base = a generator subset."""

    def __init__(self, Y: FilteredComplex, base: set[str]):
        self.Y = Y
        self.base = set(base)

    def outside(self, max_dim: int) -> list[str]:
        return [g for g in self.Y.generators() if g not in self.base and self.Y.dim(g) <= max_dim]

    def dim(self, token) -> int:
        return self.Y.dim(token)

    def word(self, token) -> tuple[str, ...]:
        return self.Y.color(token)

    def face_support(self, token, i: int):
        ref = self.Y.face_of_gen(token, i)
        return ref.gen, not ref.degens

    def in_base(self, token) -> bool:
        return token in self.base

    def sort_key(self, token):
        return (self.dim(token), token)


class ExUniverse:
    """Ambient = stage-1 extension levels of X; base = honest simplices of X."""

    def __init__(self, X: FilteredComplex, max_dim: int, budget: Budget | None = None):
        self.X = X
        self.max_dim = max_dim
        self.budget = budget
        self._tokens: dict[tuple[str, ...], list] = {}
        self._nondeg: dict = {}
        self._base: dict = {}
        for length in range(1, max_dim + 2):
            for w in X.poset.monotone_words(length):
                level = ex_level(X, w, 1, budget)
                base_elements = set(iota_image(X, w).keys())
                toks = []
                for el in level:
                    if is_degenerate_element(el, w, 1):
                        continue
                    tok = (w, el)
                    toks.append(tok)
                    self._base[tok] = el in base_elements
                self._tokens[w] = sorted(toks, key=lambda t: t[1]._key)

    def outside(self, max_dim: int) -> list:
        out = []
        for w in sorted(self._tokens, key=lambda w: (len(w), w)):
            if len(w) - 1 > max_dim:
                continue
            out.extend(t for t in self._tokens[w] if not self._base[t])
        return out

    def dim(self, token) -> int:
        return len(token[0]) - 1

    def word(self, token) -> tuple[str, ...]:
        return token[0]

    def face_support(self, token, i: int):
        w, el = token
        cur_w = word_face(w, i)
        cur = element_face(el, w, i, 1)
        degenerate = False
        changed = True
        while changed:
            changed = False
            n = len(cur_w) - 1
            for j in range(n):
                fj = element_face(cur, cur_w, j, 1)
                from .exfunctor import element_degeneracy

                if element_degeneracy(fj, word_face(cur_w, j), j, 1) == cur:
                    cur, cur_w = fj, word_face(cur_w, j)
                    degenerate = True
                    changed = True
                    break
        return (cur_w, cur), not degenerate

    def in_base(self, token) -> bool:
        return self._base[token]

    def sort_key(self, token):
        return (self.dim(token), token[0], token[1]._key)

    def find_token(self, w, el):
        tok = (tuple(w), el)
        if tok in self._base:
            return tok
        return None


# ---------------------------------------------------------------------------
# Presentations and the verifier


@dataclass
class AnodynePresentation:
    kind: str
    universe: object
    type_ii: list
    type_i: list
    phi: dict
    frontier: list = field(default_factory=list)
    params: dict = field(default_factory=dict)
    labels: dict = field(default_factory=dict)  # optional class letters per token

    def phi_cap_index(self, sigma) -> int:
        """The unique face index with d_k(phi(sigma)) == sigma."""
        tau = self.phi[sigma]
        U = self.universe
        ks = []
        for i in range(U.dim(tau) + 1) if U.dim(tau) else ():
            sup, nondeg = U.face_support(tau, i)
            if nondeg and sup == sigma:
                ks.append(i)
        if len(ks) != 1:
            raise ClassificationError(f"no unique cap index for {sigma}")
        return ks[0]


@dataclass
class Verdict:
    ok: bool
    failures: list[str] = field(default_factory=list)

    def summary(self) -> str:
        return "pass" if self.ok else "fail: " + "; ".join(self.failures[:4])


def verify_presentation(pres: AnodynePresentation, dim_bound: int) -> Verdict:
    """Check all conditions of a filtered anodyne presentation up to dim_bound."""
    U = pres.universe
    failures: list[str] = []
    outside = U.outside(dim_bound)
    claimed = list(pres.type_ii) + list(pres.type_i) + list(pres.frontier)
    if len(set(map(U.sort_key, claimed))) != len(claimed):
        failures.append("partition has repeated simplices")
    missing = [t for t in outside if t not in set(claimed)]
    extra = [t for t in claimed if t not in set(outside)]
    if missing:
        failures.append(f"partition misses {len(missing)} simplices, first {missing[0]}")
    if extra:
        failures.append(f"partition claims {len(extra)} foreign simplices")
    for t in pres.frontier:
        if U.dim(t) != dim_bound:
            failures.append(f"frontier simplex {t} not at the dimension bound")

    ii, i_ = set(map(U.sort_key, pres.type_ii)), set(map(U.sort_key, pres.type_i))
    if ii & i_:
        failures.append("type I and type II overlap")
    phi_targets = [pres.phi.get(s) for s in pres.type_ii]
    if any(t is None for t in phi_targets):
        failures.append("phi undefined on some type II simplex")
    elif sorted(map(U.sort_key, phi_targets)) != sorted(i_):
        failures.append("phi is not a bijection onto type I")

    cap: dict = {}
    for sigma in pres.type_ii:
        tau = pres.phi.get(sigma)
        if tau is None:
            continue
        ks = []
        for i in range(U.dim(tau) + 1) if U.dim(tau) else ():
            sup, nondeg = U.face_support(tau, i)
            if nondeg and sup == sigma:
                ks.append(i)
        if len(ks) != 1:
            failures.append(f"face condition fails at {sigma}: cap indices {ks}")
            continue
        k = ks[0]
        cap[U.sort_key(sigma)] = k
        wtau, wsig = U.word(tau), U.word(sigma)
        if wtau[k] not in set(wsig):
            failures.append(f"color condition fails at {sigma}")

    # ancestral preorder: edges go from a simplex to each of its ancestors
    outside_set = set(map(U.sort_key, outside))
    key_of = {U.sort_key(t): t for t in outside}
    ii_keys = set(map(U.sort_key, pres.type_ii))

    def proper_faces(token):
        seen = set()
        stack = [token]
        first = True
        while stack:
            t = stack.pop()
            for i in range(U.dim(t) + 1) if U.dim(t) else ():
                sup, _ = U.face_support(t, i)
                kk = U.sort_key(sup)
                if kk not in seen:
                    seen.add(kk)
                    if U.dim(sup):
                        stack.append(sup)
        seen.discard(U.sort_key(token))
        return seen

    graph: dict = {}
    for t in outside:
        k = U.sort_key(t)
        ancestors = {a for a in proper_faces(t) if a in outside_set}
        if k in ii_keys and pres.phi.get(t) is not None:
            tau = pres.phi[t]
            ancestors |= {a for a in proper_faces(tau) if a in outside_set and a != k}
        graph[k] = ancestors
    try:
        list(TopologicalSorter(graph).static_order())
    except CycleError as e:
        failures.append(f"ancestral preorder has a cycle: {e.args[1][:4]}")

    return Verdict(not failures, failures)


def same_dimension_ancestors(pres: AnodynePresentation, sigma) -> set:
    """Transitive same-dimension type-II ancestors of a type-II simplex."""
    U = pres.universe
    d = U.dim(sigma)
    ii = {U.sort_key(t): t for t in pres.type_ii}

    def direct(t):
        out = []
        tau = pres.phi[t]
        for i in range(U.dim(tau) + 1):
            sup, nondeg = U.face_support(tau, i)
            kk = U.sort_key(sup)
            if nondeg and kk != U.sort_key(t) and kk in ii and U.dim(sup) == d:
                out.append(ii[kk])
        return out

    seen = {U.sort_key(sigma)}
    order = []
    stack = [sigma]
    while stack:
        t = stack.pop()
        for a in direct(t):
            kk = U.sort_key(a)
            if kk in seen:
                if kk == U.sort_key(sigma):
                    raise ClassificationError(f"same-dimension ancestor cycle at {sigma}")
                continue
            seen.add(kk)
            order.append(a)
            stack.append(a)
    return set(order)


# ---------------------------------------------------------------------------
# Generator 1: subdivided admissible horns


def generate_sdp_horn_presentation(poset: Poset, word: tuple[str, ...], k: int) -> AnodynePresentation:
    """Classify the subdivision of an admissible horn inclusion.

    Every nondegenerate chain outside the subdivided horn falls into one of
    eight classes; the odd classes are capped by the even ones through an
    explicit vertex insertion.  A classification gap or overlap raises.
    """
    word = tuple(word)
    if not is_admissible(word, k):
        raise ValueError("presentation only exists for admissible horns")
    n = len(word) - 1
    kprime = min(v for v in range(n + 1) if v != k and word[v] == word[k])
    full = tuple(range(n + 1))
    dk = tuple(v for v in full if v != k)
    cell = sdp_cell(poset, word)

    def outside_chain(chain) -> bool:
        return any(S in (full, dk) for S, _ in chain)

    def classify(chain):
        """Return (letter, role, partner_chain)."""
        subsets = [S for S, _ in chain]
        if dk in subsets:
            i1 = max(i for i, (S, _) in enumerate(chain) if S == dk)
            if i1 + 1 < len(chain) and chain[i1 + 1][0] == full and chain[i1 + 1][1] == chain[i1][1]:
                return "b", "I", chain[: i1 + 1] + chain[i1 + 2 :]
            return "a", "II", chain[: i1 + 1] + ((full, chain[i1][1]),) + chain[i1 + 1 :]
        z = min(i for i, (S, _) in enumerate(chain) if S == full)
        gamma0 = chain[z][1]
        prefix = chain[:z]
        if prefix and chain[0][1] != gamma0:
            c0 = chain[0][1]
            t = 0
            while t + 1 < len(chain) and chain[t + 1][1] == c0:
                t += 1
            m = t
            while m + 1 < len(chain) and chain[m + 1][0] == chain[t][0]:
                m += 1
            corner = chain[m]
            nxt = chain[m + 1]
            if m > t and nxt[1] == corner[1]:
                return "d", "I", chain[:m] + chain[m + 1 :]
            return "c", "II", chain[: m + 1] + ((corner[0], nxt[1]),) + chain[m + 1 :]
        if any(k not in S for S, _ in prefix):
            w_end = max(i for i, (S, _) in enumerate(prefix) if k not in S)
            eta = prefix[w_end][0]
            capped = tuple(sorted(set(eta) | {k}))
            if w_end + 1 < z and prefix[w_end + 1][0] == capped:
                return "f", "I", chain[: w_end + 1] + chain[w_end + 2 :]
            return "e", "II", chain[: w_end + 1] + ((capped, gamma0),) + chain[w_end + 1 :]
        y = 0
        while y < len(prefix) and kprime not in prefix[y][0]:
            y += 1
        B = prefix[y][0] if y < len(prefix) else full
        reduced = tuple(v for v in B if v != kprime)
        if y >= 1 and prefix[y - 1][0] == reduced:
            return "h", "I", chain[: y - 1] + chain[y:]
        return "g", "II", chain[:y] + ((reduced, gamma0),) + chain[y:]

    type_ii, type_i, phi, labels = [], [], {}, {}
    pending: dict[str, str] = {}  # type I name -> expected type II partner
    for g in cell.generators():
        chain = cell.meta["chain"][g]
        if not outside_chain(chain):
            continue
        letter, role, partner = classify(chain)
        labels[g] = letter
        pname = chain_name(partner)
        if pname not in cell:
            raise ClassificationError(f"partner of {g} is not a simplex: {pname}")
        if role == "II":
            type_ii.append(g)
            phi[g] = pname
        else:
            type_i.append(g)
            pending[g] = pname
    for g, partner in pending.items():
        if phi.get(partner) != g:
            raise ClassificationError(f"pairing mismatch: {g} expects {partner}")
    for sigma, tau in phi.items():
        if pending.get(tau) != sigma:
            raise ClassificationError(f"pairing mismatch: {sigma} -> {tau}")

    base = {g for g in cell.generators() if not outside_chain(cell.meta["chain"][g])}
    universe = ComplexUniverse(cell, base)
    return AnodynePresentation(
        "sdp-horn", universe, type_ii, type_i, phi, params={"word": word, "k": k, "kprime": kprime}, labels=labels
    )


# ---------------------------------------------------------------------------
# Generator 2: the unit inclusion into the extension level


def generate_ex_presentation(X: FilteredComplex, dim_bound: int, budget: Budget | None = None) -> AnodynePresentation:
    """Presentation for the unit inclusion of X into its extension, truncated.

    Type II elements are those not reachable by precomposition with any r^k
    from the previous level's filtration gap; type I partners arise from
    precomposition at the element's own filtration degree.  Dimension-bound
    type II elements whose partner would live one dimension higher are kept
    as the frontier.
    """
    U = ExUniverse(X, dim_bound, budget)
    poset = X.poset
    degrees: dict = {}
    for w, toks in U._tokens.items():
        for tok in toks:
            degrees[tok] = gamma_degree(tok[1], w)
    # all level elements by word (including degenerate) for the r-image test
    reachable: dict = {}
    for w in sorted(U._tokens, key=lambda w: (len(w), w)):
        n = len(w) - 1
        if n + 1 > dim_bound + 1:
            continue
        for tau in ex_level(X, w, 1, budget):
            gdeg = gamma_degree(tau, w)
            if gdeg < 1:
                continue
            for kk in range(1, n + 1):
                if gdeg != kk:
                    continue
                sigma = precompose_r(tau, w, kk)
                reachable.setdefault(word_degeneracy(w, kk), set()).add(sigma)

    type_ii, type_i, phi, frontier = [], [], {}, []
    for w in sorted(U._tokens, key=lambda w: (len(w), w)):
        if len(w) - 1 > dim_bound:
            continue
        for tok in U._tokens[w]:
            if U._base[tok]:
                continue
            _, el = tok
            if el in reachable.get(w, ()):
                type_i.append(tok)
                continue
            if len(w) - 1 == dim_bound:
                frontier.append(tok)
                continue
            type_ii.append(tok)
            h = degrees[tok]
            partner_el = precompose_r(el, w, h)
            partner = U.find_token(word_degeneracy(w, h), partner_el)
            if partner is None:
                raise ClassificationError(f"partner of a type II element is missing over {w}")
            phi[tok] = partner
    return AnodynePresentation("ex", U, type_ii, type_i, phi, frontier=frontier, params={"dim_bound": dim_bound})


# ---------------------------------------------------------------------------
# Generator 3: prism caps over a monomorphism


def generate_prism_presentation(Y: FilteredComplex, sub: set[str], eps: int) -> AnodynePresentation:
    """Presentation for (X tensor 1-simplex) united with the eps end, inside
    the cylinder on Y, where X is the subcomplex of Y spanned by `sub`.

    Each new prism is filled by the classical shuffle order: the free face
    u_j is capped by the shuffle w_j through its only missing face.
    """
    from .complexes import pair_ref, plain_simplex

    if eps not in (0, 1):
        raise ValueError("eps must be 0 or 1")
    for g in sub:
        if g not in Y:
            raise ValueError(f"{g} is not a generator of the ambient complex")
        for i in range(Y.dim(g) + 1) if Y.dim(g) else ():
            if Y.face_of_gen(g, i).gen not in sub:
                raise ValueError("sub is not a subcomplex")
    K = plain_simplex(1)
    T = tensor(Y, K)

    def tname(ry: Ref, tword: tuple[int, ...]) -> str:
        if len(set(tword)) == 2:
            rt = K.apply_vertex_word("0.1", tword)
        else:
            rt = Ref(str(tword[0]), tuple(range(len(tword) - 2, -1, -1)))
        ref = pair_ref(T, Y, K, ry, rt)
        if ref.degens:
            raise ClassificationError("expected a nondegenerate prism simplex")
        return ref.gen

    base = set()
    for name, (ry, rt) in T.meta["pairs"].items():
        if ry.gen in sub or set(_plain_edge_values(K, rt)) == {str(eps)}:
            base.add(name)

    type_ii, type_i, phi = [], [], {}
    for y in Y.generators():
        if y in sub:
            continue
        m = Y.dim(y)
        for j in range(-1, m + 1):
            tword = tuple([0] * (j + 1) + [1] * (m - j))
            if all(v == eps for v in tword):
                continue  # lies in the base end
            u = tname(identity_ref(y), tword)
            type_ii.append(u)
            if eps == 0:
                jj = j + 1
                cap_tword = tuple([0] * (jj + 1) + [1] * (m + 1 - jj))
                cap = tname(Y.degenerate_ref(identity_ref(y), jj), cap_tword)
            else:
                jj = j
                cap_tword = tuple([0] * (jj + 1) + [1] * (m + 1 - jj))
                cap = tname(Y.degenerate_ref(identity_ref(y), jj), cap_tword)
            type_i.append(cap)
            phi[u] = cap
    universe = ComplexUniverse(T, base)
    return AnodynePresentation("prism", universe, type_ii, type_i, phi, params={"eps": eps, "sub": sorted(sub)})


def _plain_edge_values(K: FilteredComplex, rt: Ref) -> list[str]:
    """Vertex names of a simplex of the plain 1-simplex."""
    from .complexes import surj_of_degens
    from .maps import vertex_sequence

    base_vertices = vertex_sequence(K, rt.gen)
    word = surj_of_degens(K.dim(rt.gen), rt.degens)
    return [base_vertices[v] for v in word]


# ---------------------------------------------------------------------------
# Operational soundness: play a presentation as a filler strategy


def extend_along_presentation(
    pres: AnodynePresentation, m: FilteredMap, budget: Budget | None = None
) -> FilteredMap:
    """Extend a map off the base along the presentation, pair by pair.

    Processes II/I pairs in a linear extension of the ancestral preorder;
    each step is an admissible horn problem in the target, solvable when the
    target is fibrant enough.  Returns the extension, validated.
    """
    U = pres.universe
    if not isinstance(U, ComplexUniverse):
        raise ValueError("extension requires a materialized ambient complex")
    Y = U.Y
    T = m.codomain
    assignment = dict(m.assignment)

    keys = {U.sort_key(t): t for t in U.outside(Y.max_dim)}
    graph = {}
    for t in keys.values():
        deps = set()
        for i in range(U.dim(t) + 1) if U.dim(t) else ():
            sup, _ = U.face_support(t, i)
            if not U.in_base(sup) and U.sort_key(sup) != U.sort_key(t):
                deps.add(U.sort_key(sup))
        if t in pres.phi:
            tau = pres.phi[t]
            for i in range(U.dim(tau) + 1):
                sup, _ = U.face_support(tau, i)
                kk = U.sort_key(sup)
                if not U.in_base(sup) and kk not in (U.sort_key(t), U.sort_key(tau)):
                    deps.add(kk)
        graph[U.sort_key(t)] = deps
    order = list(TopologicalSorter(graph).static_order())

    filled = set(g for g in assignment)
    phi_of = dict(pres.phi)
    caps = {U.sort_key(s): pres.phi_cap_index(s) for s in pres.type_ii}

    for key in order:
        tok = keys[key]
        if tok in filled:
            continue
        if tok not in phi_of:
            continue  # type I simplices are filled together with their partner
        tau = phi_of[tok]
        k = caps[key]
        word = Y.color(tau)
        if not is_admissible(word, k):
            raise ClassificationError(f"cap face of {tok} is not at a repeated color")
        from .complexes import horn as horn_builder

        H = horn_builder(Y.poset, word, k)
        table = {}
        for hgen in H.generators():
            positions = tuple(int(v) for v in hgen.split("."))
            ref = Y.apply_vertex_word(tau, positions)
            img_base = assignment.get(ref.gen)
            if img_base is None:
                raise ClassificationError(f"face {ref.gen} of {tau} not yet filled")
            from .complexes import surj_of_degens

            table[hgen] = T.pullback_ref(img_base, surj_of_degens(Y.dim(ref.gen), ref.degens)) if ref.degens else img_base
        lam = FilteredMap(H, T, table, validate=False)
        filler = find_filler(T, word, k, lam, budget)
        if filler is None:
            raise ClassificationError(f"target admits no filler for the pair at {tok}")
        top = ".".join(str(v) for v in range(len(word)))
        assignment[tau] = filler.assignment[top]
        missing = ".".join(str(v) for v in range(len(word)) if v != k)
        assignment[tok] = filler.assignment[missing]
        filled.update((tok, tau))

    out = FilteredMap(Y, T, assignment)
    return out
