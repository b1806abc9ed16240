"""Integer matrix normal forms and finitely generated abelian invariants.

Groups are presented as cokernels: Z^g modulo the column span of a relator
matrix.  Invariant factors list the nontrivial torsion factors in their
divisibility order followed by one 0 per free rank.
"""

from __future__ import annotations

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A: Matrix, B: Matrix) -> Matrix:
    if not A or not B:
        return [[0] * (len(B[0]) if B else 0) for _ in A]
    n, m, p = len(A), len(B), len(B[0])
    out = [[0] * p for _ in range(n)]
    for i in range(n):
        Ai = A[i]
        for kk in range(m):
            a = Ai[kk]
            if a:
                Bk = B[kk]
                row = out[i]
                for j in range(p):
                    row[j] += a * Bk[j]
    return out


def smith_normal_form(A: Matrix) -> tuple[Matrix, Matrix, Matrix]:
    """Return (S, U, V) with S = U A V diagonal, divisibility chain, S >= 0."""
    m = len(A)
    n = len(A[0]) if A else 0
    S = [row[:] for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        S[i], S[j] = S[j], S[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in S:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, c):  # row_dst += c * row_src
        S[dst] = [a + c * b for a, b in zip(S[dst], S[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(src, dst, c):
        for row in S:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    def negate_row(i):
        S[i] = [-a for a in S[i]]
        U[i] = [-a for a in U[i]]

    t = 0
    while True:
        pivot = None
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if S[i][j] and (best is None or abs(S[i][j]) < best):
                    best = abs(S[i][j])
                    pivot = (i, j)
        if pivot is None:
            break
        i, j = pivot
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            progress = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    add_row(t, i, -q)
                    if S[i][t]:
                        swap_rows(t, i)
                    progress = True
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    add_col(t, j, -q)
                    if S[t][j]:
                        swap_cols(t, j)
                    progress = True
            if not progress:
                break
        # force divisibility of the remaining block
        bad = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if S[i][j] % S[t][t]:
                    bad = i
                    break
            if bad is not None:
                break
        if bad is not None:
            add_row(bad, t, 1)
            continue
        if S[t][t] < 0:
            negate_row(t)
        t += 1
    return S, U, V


def diagonal(A: Matrix) -> list[int]:
    S, _, _ = smith_normal_form(A)
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]


def cokernel_invariants(num_gens: int, relator_columns: list[list[int]]) -> list[int]:
    """Invariant factors of Z^num_gens modulo the span of the given columns."""
    if num_gens == 0:
        return []
    if not relator_columns:
        return [0] * num_gens
    A = [[col[i] for col in relator_columns] for i in range(num_gens)]
    diag = diagonal(A)
    rank = sum(1 for d in diag if d != 0)
    factors = [d for d in diag if d not in (0, 1)]
    return factors + [0] * (num_gens - rank)


def kernel_columns(A: Matrix, ncols: int) -> list[list[int]]:
    """An integer basis of the kernel of A, as columns."""
    if ncols == 0:
        return []
    if not A:
        return [[1 if i == j else 0 for i in range(ncols)] for j in range(ncols)]
    S, U, V = smith_normal_form(A)
    m = len(S)
    rank = 0
    for i in range(min(m, ncols)):
        if S[i][i]:
            rank += 1
    cols = []
    for j in range(rank, ncols):
        cols.append([V[i][j] for i in range(ncols)])
    return cols


def lattice_quotient_invariants(lattice: list[list[int]], sub: list[list[int]], ambient_dim: int) -> list[int]:
    """Invariants of (span of `lattice` columns) / (span of `sub` columns).

    The sub columns must lie in the lattice.  Coordinates of each sub column
    in a basis of the lattice are computed through the normal form.
    """
    if not lattice:
        return []
    L = [[col[i] for col in lattice] for i in range(ambient_dim)]
    S, U, V = smith_normal_form(L)
    rank = sum(1 for i in range(min(len(S), len(lattice))) if S[i][i])
    # basis of the lattice: columns of L*V restricted to the first `rank`
    LV = matmul(L, V)
    basis = [[LV[i][j] for i in range(ambient_dim)] for j in range(rank)]
    # solve basis * x = col for each sub column via U: U*L*V = S
    coords = []
    for col in sub:
        Ucol = [sum(U[i][k] * col[k] for k in range(ambient_dim)) for i in range(len(U))]
        x = []
        for i in range(rank):
            if Ucol[i] % S[i][i]:
                raise ValueError("sub column does not lie in the lattice")
            x.append(Ucol[i] // S[i][i])
        for i in range(rank, len(Ucol)):
            if Ucol[i]:
                raise ValueError("sub column does not lie in the lattice")
        # lattice coordinates: x in the V-transformed basis
        coords.append(x)
    return cokernel_invariants(rank, coords)
