"""Smith normal form of small integer matrices with unimodular transforms."""

from __future__ import annotations


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(A: list[list[int]]):
    """Return ``(D, U, V)`` with ``U * A * V == D`` diagonal, ``d_i | d_{i+1}``."""
    A = [list(row) for row in A]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for M in (A, V):
            for row in M:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        for M in (A, U):
            M[dst] = [x + k * y for x, y in zip(M[dst], M[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for M in (A, V):
            for row in M:
                row[dst] += k * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                return A, U, V
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            for M in (A, U):
                M[t] = [-x for x in M[t]]
    return A, U, V
