"""Exact rational simplex for ``max c.x  s.t.  A x <= b, x >= 0`` with ``b >= 0``.

The origin is always feasible for these problems, so a single phase is
enough.  Several objectives may be given; they are optimized
lexicographically by restricting later stages to the columns whose reduced
cost vanished in every earlier stage.  Bland's rule is used throughout.
"""

from fractions import Fraction


class Unbounded(ArithmeticError):
    pass


def lexmax(A, b, objectives):
    """Lexicographically maximize ``objectives`` over ``{A x <= b, x >= 0}``.

    Parameters
    ----------
    A : list of list
        ``m x n`` constraint matrix.
    b : list
        Right hand sides, all nonnegative.
    objectives : list of list
        Objective vectors of length ``n``, in priority order.

    Returns
    -------
    x : tuple of Fraction
        An optimal basic solution (a vertex of the feasible set).
    values : list of Fraction
        Objective values at ``x``.
    """
    m = len(A)
    n = len(objectives[0])
    if any(Fraction(v) < 0 for v in b):
        raise ValueError("right hand sides must be nonnegative")
    # columns 0..n-1 structural, n..n+m-1 slacks
    width = n + m
    T = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]] + [Fraction(0)] * m + [Fraction(b[i])]
        row[n + i] = Fraction(1)
        T.append(row)
    basis = [n + i for i in range(m)]
    # reduced-cost rows; last entry holds the current objective value
    R = [[Fraction(v) for v in c] + [Fraction(0)] * m + [Fraction(0)] for c in objectives]

    def pivot(r, c):
        prow = T[r]
        inv = 1 / prow[c]
        for k in range(width + 1):
            prow[k] *= inv
        for i in range(m):
            if i != r and T[i][c] != 0:
                f = T[i][c]
                row = T[i]
                for k in range(width + 1):
                    if prow[k] != 0:
                        row[k] -= f * prow[k]
        for row in R:
            f = row[c]
            if f != 0:
                for k in range(width + 1):
                    if prow[k] != 0:
                        row[k] -= f * prow[k]
        basis[r] = c

    allowed = set(range(width))
    for stage in range(len(R)):
        while True:
            in_basis = set(basis)
            entering = next((c for c in range(width)
                             if c in allowed and c not in in_basis and R[stage][c] > 0), None)
            if entering is None:
                break
            best = None
            for i in range(m):
                a = T[i][entering]
                if a > 0:
                    ratio = T[i][width] / a
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("objective is unbounded")
            pivot(best[1], entering)
        allowed = {c for c in allowed if R[stage][c] == 0}

    x = [Fraction(0)] * width
    for i, var in enumerate(basis):
        x[var] = T[i][width]
    sol = tuple(x[:n])
    values = [sum((Fraction(ci) * xi for ci, xi in zip(c, sol)), Fraction(0)) for c in objectives]
    return sol, values
