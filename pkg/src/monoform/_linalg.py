"""Exact linear algebra over the rationals and the integers.

Matrices are lists (or tuples) of rows; vectors are flat sequences.  All
arithmetic is done with python ints and ``fractions.Fraction`` so every
result is exact.  Sizes here are tiny (a handful of rows/columns), so the
textbook algorithms are the right tool.
"""

from __future__ import annotations

from fractions import Fraction


def identity(n):
    """n x n integer identity matrix."""
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    """Matrix product a @ b (entries int or Fraction)."""
    rows, inner, cols = len(a), len(b), len(b[0])
    for row in a:
        if len(row) != inner:
            raise ValueError("incompatible shapes in mat_mul")
    return [
        [sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)]
        for i in range(rows)
    ]


def vec_mat(v, a):
    """Row vector times matrix: v @ a."""
    if len(v) != len(a):
        raise ValueError("incompatible shapes in vec_mat")
    cols = len(a[0])
    return [sum(v[k] * a[k][j] for k in range(len(v))) for j in range(cols)]


def mat_vec(a, v):
    """Matrix times column vector: a @ v."""
    return [sum(row[j] * v[j] for j in range(len(v))) for row in a]


def transpose(a):
    return [list(col) for col in zip(*a)]


def rank(a) -> int:
    """Rank over Q by Gaussian elimination."""
    if not a or not a[0]:
        return 0
    m = [[Fraction(x) for x in row] for row in a]
    rows, cols = len(m), len(m[0])
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == rows:
            break
    return r


def det(a) -> Fraction:
    """Determinant over Q (fraction Gaussian elimination)."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("determinant of a non-square matrix")
    m = [[Fraction(x) for x in row] for row in a]
    result = Fraction(1)
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            result = -result
        result *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return result


def int_det(a) -> int:
    d = det(a)
    if d.denominator != 1:
        raise ValueError("expected an integer determinant")
    return int(d)


def inverse(a):
    """Inverse over Q; raises ValueError if singular."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(a)]
    for c in range(n):
        pivot = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        m[c], m[pivot] = m[pivot], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [row[n:] for row in m]


def int_inverse(a):
    """Inverse of a unimodular integer matrix, as an integer matrix."""
    inv = inverse(a)
    out = []
    for row in inv:
        int_row = []
        for x in row:
            if x.denominator != 1:
                raise ValueError("matrix is not unimodular")
            int_row.append(int(x))
        out.append(int_row)
    return out


def solve_right(a, b):
    """Solve x @ a = b for the row vector x (a square, invertible)."""
    return vec_mat(b, inverse(a))


def kernel_right(a):
    """Basis of {e : a @ e = 0}, scaled to primitive integer vectors.

    Rows of ``a`` are the linear constraints; the kernel lives in the
    column space.
    """
    if not a:
        raise ValueError("empty constraint matrix")
    rows, cols = len(a), len(a[0])
    m = [[Fraction(x) for x in row] for row in a]
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * cols
        v[fc] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][fc]
        basis.append(primitive(v))
    return basis


def primitive(v):
    """Scale a rational vector to a primitive integer vector."""
    from math import gcd, lcm

    denoms = [Fraction(x).denominator for x in v]
    scale = 1
    for d in denoms:
        scale = lcm(scale, d)
    ints = [int(Fraction(x) * scale) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def smith_normal_form(a):
    """Smith normal form with multipliers: returns (U, D, V) with U A V = D.

    U and V are unimodular integer matrices and D is diagonal (as a
    rectangular matrix) with d1 | d2 | ... >= 0.
    """
    rows = len(a)
    cols = len(a[0]) if rows else 0
    m = [[int(x) for x in row] for row in a]
    u = identity(rows)
    v = identity(cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, k):
        # row dst += k * row src
        m[dst] = [x + k * y for x, y in zip(m[dst], m[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for row in m:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(rows, cols):
        # find a nonzero pivot of least absolute value in the trailing block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                if m[i][j] != 0 and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, rows):
                if m[i][t] != 0:
                    q = m[i][t] // m[t][t]
                    add_row(t, i, -q)
                    if m[i][t] != 0:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, cols):
                if m[t][j] != 0:
                    q = m[t][j] // m[t][t]
                    add_col(t, j, -q)
                    if m[t][j] != 0:
                        swap_cols(t, j)
                        dirty = True
        # enforce the divisibility chain: m[t][t] must divide the rest
        fixed = True
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if m[i][j] % m[t][t] != 0:
                    add_row(i, t, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if not fixed:
            continue
        if m[t][t] < 0:
            m[t] = [-x for x in m[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, m, v


def diagonal_of(d):
    """Nonzero diagonal entries of a rectangular SNF matrix."""
    out = []
    for i in range(min(len(d), len(d[0]) if d else 0)):
        if d[i][i] != 0:
            out.append(d[i][i])
    return out
