"""Hermite and Smith normal forms over the integers.

Matrices are plain lists of rows of Python ints, so entries never overflow.

Conventions
-----------
``hnf`` returns the row-style Hermite normal form of the lattice spanned by
the rows: upper echelon, positive pivots, entries above each pivot reduced
into ``[0, pivot)``, zero rows dropped.

``snf`` returns the full Smith diagonal ``d_1 | d_2 | ...`` of length
``min(rows, cols)``, zeros last.  Unit entries are kept; callers that only
want the nontrivial invariant factors strip the 1s themselves.
"""

from math import gcd

IntMatrix = list  # list[list[int]]


def _check_rect(M):
    if M and any(len(row) != len(M[0]) for row in M):
        raise ValueError("matrix rows have unequal length")


def hnf(M):
    """Row Hermite normal form of the lattice spanned by the rows of ``M``.

    >>> hnf([[2, 2], [2, -2]])
    [[2, 2], [0, 4]]
    """
    _check_rect(M)
    A = [list(row) for row in M if any(row)]
    if not A:
        return []
    ncols = len(A[0])
    r = 0
    pivots = []
    for c in range(ncols):
        if r == len(A):
            break
        while True:
            nz = [i for i in range(r, len(A)) if A[i][c]]
            if not nz:
                break
            k = min(nz, key=lambda i: abs(A[i][c]))
            A[r], A[k] = A[k], A[r]
            p = A[r][c]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][c]:
                    q = A[i][c] // p
                    if q:
                        A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][c]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][c]:
            if A[r][c] < 0:
                A[r] = [-a for a in A[r]]
            p = A[r][c]
            for i in range(r):
                q = A[i][c] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            pivots.append(c)
            r += 1
    return [row for row in A[:r]]


def snf(M):
    """Smith normal form diagonal of ``M``.

    >>> snf([[4, 0], [0, 6]])
    [2, 12]
    """
    _check_rect(M)
    A = [list(row) for row in M]
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    diag = []
    t = 0
    while t < min(nrows, ncols):
        entries = [(abs(A[i][j]), i, j) for i in range(t, nrows)
                   for j in range(t, ncols) if A[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        A[t], A[i] = A[i], A[t]
        for row in A:
            row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            changed = False
            for i in range(t + 1, nrows):
                q = A[i][t] // p
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[t])]
                if A[i][t]:
                    changed = True
            for j in range(t + 1, ncols):
                q = A[t][j] // p
                if q:
                    for row in A:
                        row[j] -= q * row[t]
                if A[t][j]:
                    changed = True
            if not changed:
                # pivot must divide the remaining block
                bad = next(((i, j) for i in range(t + 1, nrows)
                            for j in range(t + 1, ncols) if A[i][j] % p), None)
                if bad is None:
                    break
                A[t] = [a + b for a, b in zip(A[t], A[bad[0]])]
                continue
            entries = [(abs(A[i][t]), i, t) for i in range(t, nrows) if A[i][t]]
            entries += [(abs(A[t][j]), t, j) for j in range(t, ncols) if A[t][j]]
            _, i, j = min(entries)
            A[t], A[i] = A[i], A[t]
            for row in A:
                row[t], row[j] = row[j], row[t]
        diag.append(abs(A[t][t]))
        t += 1
    diag.extend([0] * (min(nrows, ncols) - len(diag)))
    return diag


def solve_upper(H, v):
    """Integer coefficients ``c`` with ``c @ H == v`` for a square, full-rank HNF ``H``.

    Raises ``ValueError`` if ``v`` is not in the row lattice of ``H``.
    """
    v = list(v)
    coeffs = []
    for i, row in enumerate(H):
        p = row[i]
        q, rem = divmod(v[i], p)
        if rem:
            raise ValueError("vector not in lattice")
        coeffs.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    if any(v):
        raise ValueError("vector not in lattice")
    return coeffs


def det_upper(H):
    out = 1
    for i, row in enumerate(H):
        out *= row[i]
    return out


def diag_chain(orders):
    """Invariant-factor chain of ``Z/o_1 x ... x Z/o_k`` by pairwise gcd/lcm."""
    a = list(orders)
    for i in range(len(a)):
        for j in range(i + 1, len(a)):
            g = gcd(a[i], a[j])
            a[i], a[j] = g, a[i] * a[j] // g
    return [x for x in a if x != 1]
