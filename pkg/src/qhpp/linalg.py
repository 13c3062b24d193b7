"""Exact linear algebra over the rationals (small dense systems)."""

from fractions import Fraction


class SingularMatrixError(ArithmeticError):
    pass


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly; the result is a list of Fractions.

    Integer systems go through fraction-free (Bareiss) elimination, which
    avoids a gcd per entry; anything else uses Gauss-Jordan over Fractions.
    """
    n = len(matrix)
    if any(len(row) != n for row in matrix) or len(rhs) != n:
        raise ValueError("expected a square system")
    if all(isinstance(v, int) for row in matrix for v in row) and all(isinstance(b, int) for b in rhs):
        return _solve_integer(matrix, rhs)
    aug = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(matrix, rhs)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot is None:
            raise SingularMatrixError(f"no pivot in column {col}")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        p = aug[col][col]
        row = [v / p for v in aug[col]]
        aug[col] = row
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], row)]
    return [aug[r][n] for r in range(n)]


def _solve_integer(matrix, rhs):
    n = len(matrix)
    m = [list(row) + [b] for row, b in zip(matrix, rhs)]
    prev = 1
    for k in range(n):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                raise SingularMatrixError(f"no pivot in column {k}")
            m[k], m[swap] = m[swap], m[k]
        pk = m[k][k]
        for i in range(k + 1, n):
            mik = m[i][k]
            row_i, row_k = m[i], m[k]
            for j in range(k + 1, n + 1):
                row_i[j] = (row_i[j] * pk - mik * row_k[j]) // prev
            row_i[k] = 0
        prev = pk
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(m[i][n])
        for j in range(i + 1, n):
            if m[i][j]:
                acc -= m[i][j] * x[j]
        x[i] = acc / m[i][i]
    return x


def quadratic_form(matrix, x):
    """Return x^T M x exactly."""
    total = Fraction(0)
    for i, xi in enumerate(x):
        row = matrix[i]
        inner = sum((mij * xj for mij, xj in zip(row, x) if mij), Fraction(0))
        total += xi * inner
    return total


def determinant(matrix):
    """Bareiss fraction-free determinant of an integer matrix."""
    n = len(matrix)
    if n == 0:
        return 1
    m = [list(row) for row in matrix]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k] != 0), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]
