"""Exact rational helpers: parsing, formatting and a small linear solver."""

from fractions import Fraction

from .errors import SpecError


def parse_rational(text):
    """``"1/3"``, ``"2"`` or ``"0.25"`` -> Fraction."""
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise SpecError(f"not a rational number: {text!r}") from None


def parse_point(text):
    """Comma separated rationals, e.g. ``"1/3,1/3,1/3,1/3"``."""
    parts = [p for p in str(text).split(",")]
    if not parts or any(not p.strip() for p in parts):
        raise SpecError(f"malformed point: {text!r}")
    return to_point(parse_rational(p) for p in parts)


def to_point(values):
    """Tuple of nonnegative Fractions."""
    point = tuple(v if type(v) is Fraction else Fraction(v) for v in values)
    for k, v in enumerate(point, start=1):
        if v.numerator < 0:
            raise SpecError(f"component d_{k} = {v} is negative")
    return point


def fmt(q):
    """Serialize a rational as ``"p/q"`` (integers as ``"p/1"`` are written ``"p"``)."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def fmt_point(point):
    return [fmt(v) for v in point]


def solve(A, b):
    """Solve the square system ``A x = b`` exactly.

    Returns ``None`` when ``A`` is singular.  Entries may be ints or
    Fractions; the result is a tuple of Fractions.
    """
    n = len(A)
    rows = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if rows[r][col] != 0), None)
        if piv is None:
            return None
        rows[col], rows[piv] = rows[piv], rows[col]
        pivot_row = rows[col]
        inv = 1 / pivot_row[col]
        for c in range(col, n + 1):
            pivot_row[c] *= inv
        for r in range(n):
            if r != col and rows[r][col] != 0:
                f = rows[r][col]
                row = rows[r]
                for c in range(col, n + 1):
                    row[c] -= f * pivot_row[c]
    return tuple(rows[i][n] for i in range(n))


def rank(rows):
    """Exact rank of a list of rational row vectors."""
    mat = [[Fraction(v) for v in r] for r in rows]
    if not mat:
        return 0
    ncols = len(mat[0])
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][col] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(r + 1, len(mat)):
            if mat[i][col] != 0:
                f = mat[i][col] / mat[r][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        r += 1
        if r == len(mat):
            break
    return r
