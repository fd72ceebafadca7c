"""Exact integer/rational matrix kernel.

Everything downstream (linking forms, obstructions) reduces to five exact
operations on small integer matrices: determinant, adjugate, Smith normal
form with unimodular transforms, signature, and rank over F_p.  Matrices
are plain lists of lists of Python ints; results are exact for arbitrary
magnitudes.

>>> det([[-2, 1], [1, -2]])
3
>>> smith([[-2, 1], [1, -2]]).D
[1, 3]
>>> signature([[-2, 1], [1, -2]])
-2
"""

from fractions import Fraction
from math import gcd
from typing import NamedTuple

from .errors import ArgumentError, ShapeError, SingularMatrixError


def shape(M):
    """(rows, cols) of a list-of-lists matrix, validating rectangularity."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    for row in M:
        if len(row) != cols:
            raise ShapeError(f"ragged matrix: row lengths {[len(r) for r in M]}")
    return rows, cols


def _require_square(M, what):
    r, c = shape(M)
    if r != c:
        raise ShapeError(f"{what} requires a square matrix, got {r}x{c}")
    return r


def identity(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    ra, ca = shape(A)
    rb, cb = shape(B)
    if ca != rb:
        raise ShapeError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    return [
        [sum(A[i][k] * B[k][j] for k in range(ca)) for j in range(cb)]
        for i in range(ra)
    ]


def transpose(M):
    r, c = shape(M)
    return [[M[i][j] for i in range(r)] for j in range(c)]


def det(M):
    """Exact determinant by fraction-free Bareiss elimination.

    >>> det([[2, 1], [1, -2]])
    -5
    >>> det([])
    1
    """
    n = _require_square(M, "det")
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                assert num % prev == 0
                A[i][j] = num // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def adjugate(M):
    """adj(M) with M*adj(M) = det(M)*I, via signed cofactors.

    >>> adjugate([[-2, 1], [1, -2]])
    [[-2, -1], [-1, -2]]
    """
    n = _require_square(M, "adjugate")
    if n == 0:
        return []
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            minor = [
                [M[r][c] for c in range(n) if c != j]
                for r in range(n)
                if r != i
            ]
            adj[j][i] = (-1) ** (i + j) * det(minor)
    return adj


class SmithDecomposition(NamedTuple):
    """U*M*V = diag(D) with U, V unimodular and D a divisibility chain."""

    U: list
    V: list
    D: list


def smith(M):
    """Smith normal form with transforms, for any rectangular M.

    Returns (U, V, D) with U (rows x rows) and V (cols x cols) unimodular,
    U*M*V = diag(D), each D[i] >= 0, D[i] | D[i+1], zeros last.

    >>> smith([[2, 0], [0, 3]]).D
    [1, 6]
    >>> smith([[0, 0], [0, 0]]).D
    [0, 0]
    """
    r, c = shape(M)
    A = [row[:] for row in M]
    U = identity(r)
    V = identity(c)

    def row_op(i, j, q):
        # row_i -= q * row_j (and same on U)
        for k in range(c):
            A[i][k] -= q * A[j][k]
        for k in range(r):
            U[i][k] -= q * U[j][k]

    def col_op(i, j, q):
        # col_i -= q * col_j (and same on V)
        for k in range(r):
            A[k][i] -= q * A[k][j]
        for k in range(c):
            V[k][i] -= q * V[k][j]

    def row_swap(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def col_swap(i, j):
        for k in range(r):
            A[k][i], A[k][j] = A[k][j], A[k][i]
        for k in range(c):
            V[k][i], V[k][j] = V[k][j], V[k][i]

    k = min(r, c)
    for t in range(k):
        # move a minimal-magnitude nonzero entry of A[t:,t:] to (t,t)
        piv = None
        for i in range(t, r):
            for j in range(t, c):
                if A[i][j] != 0 and (piv is None or abs(A[i][j]) < piv[0]):
                    piv = (abs(A[i][j]), i, j)
        if piv is None:
            break
        _, pi, pj = piv
        if pi != t:
            row_swap(t, pi)
        if pj != t:
            col_swap(t, pj)
        # Euclidean passes until column t and row t are clear below/right
        while True:
            dirty = False
            for i in range(t + 1, r):
                if A[i][t] != 0:
                    q = A[i][t] // A[t][t]
                    row_op(i, t, q)
                    if A[i][t] != 0:
                        row_swap(t, i)
                        dirty = True
            for j in range(t + 1, c):
                if A[t][j] != 0:
                    q = A[t][j] // A[t][t]
                    col_op(j, t, q)
                    if A[t][j] != 0:
                        col_swap(t, j)
                        dirty = True
            if not dirty:
                clear = all(A[i][t] == 0 for i in range(t + 1, r)) and all(
                    A[t][j] == 0 for j in range(t + 1, c)
                )
                if clear:
                    break

    # enforce the divisibility chain by folding the offender into its
    # predecessor and re-eliminating the 2x2 corner
    while True:
        fixed = True
        for t in range(k - 1):
            a, b = A[t][t], A[t + 1][t + 1]
            if a == 0 and b != 0:
                row_swap(t, t + 1)
                col_swap(t, t + 1)
                fixed = False
                continue
            if a != 0 and b % a != 0:
                col_op(t, t + 1, -1)  # col_t += col_{t+1}: puts b at (t+1, t)
                while A[t + 1][t] != 0:
                    q = A[t + 1][t] // A[t][t]
                    row_op(t + 1, t, q)
                    if A[t + 1][t] != 0:
                        row_swap(t, t + 1)
                q = A[t][t + 1] // A[t][t] if A[t][t] else 0
                col_op(t + 1, t, q)
                assert A[t][t + 1] == 0 and A[t + 1][t] == 0
                fixed = False
        if fixed:
            break

    for t in range(k):
        if A[t][t] < 0:
            for j in range(c):
                A[t][j] = -A[t][j]
            for j in range(r):
                U[t][j] = -U[t][j]

    D = [A[t][t] for t in range(k)]
    for t in range(k - 1):
        assert (D[t + 1] % D[t] == 0) if D[t] != 0 else D[t + 1] == 0
    return SmithDecomposition(U, V, D)


def signature(S):
    """Signature of a symmetric nonsingular matrix, exactly.

    Congruence diagonalization over Q: pick a nonzero diagonal pivot and
    clear its row/column; when every remaining diagonal entry is zero,
    some off-diagonal entry is not, and the corresponding hyperbolic
    2x2 block contributes 0 to the signature.

    >>> signature([[1, 0], [0, -1]])
    0
    >>> signature([[0, 3], [3, 0]])
    0
    """
    n = _require_square(S, "signature")
    for i in range(n):
        for j in range(n):
            if S[i][j] != S[j][i]:
                raise ShapeError(f"signature requires symmetry; entry ({i},{j})")
    A = [[Fraction(x) for x in row] for row in S]
    live = list(range(n))
    sig = 0

    def add_multiple(k, m, alpha):
        # congruence v_k <- v_k + alpha*v_m; the diagonal picks up the
        # cross term twice plus alpha^2 times the source diagonal
        new_diag = A[k][k] + 2 * alpha * A[k][m] + alpha * alpha * A[m][m]
        for t in range(n):
            A[k][t] += alpha * A[m][t]
        for t in range(n):
            A[t][k] = A[k][t]
        A[k][k] = new_diag

    while live:
        p = next((i for i in live if A[i][i] != 0), None)
        if p is not None:
            d = A[p][p]
            sig += 1 if d > 0 else -1
            for k in live:
                if k != p and A[k][p] != 0:
                    add_multiple(k, p, -A[k][p] / d)
            live.remove(p)
            continue
        pair = next(
            ((i, j) for i in live for j in live if i < j and A[i][j] != 0),
            None,
        )
        if pair is None:
            raise SingularMatrixError("signature of a singular matrix")
        i, j = pair
        # hyperbolic block [[0,b],[b,0]]: eigenvalues +-b, contributes 0
        b = A[i][j]
        for k in live:
            if k in (i, j):
                continue
            if A[k][j] != 0:
                add_multiple(k, i, -A[k][j] / b)
            if A[k][i] != 0:
                add_multiple(k, j, -A[k][i] / b)
            assert A[k][i] == 0 and A[k][j] == 0
        live.remove(i)
        live.remove(j)
    return sig


def is_prime(p):
    """Deterministic trial-division primality (arguments here are small).

    >>> [q for q in range(2, 30) if is_prime(q)]
    [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    """
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def rank_mod_p(M, p):
    """Rank of M over F_p by Gaussian elimination.

    >>> rank_mod_p([[-2, 1], [1, -2]], 3)
    1
    >>> rank_mod_p([[2, 1], [1, -2]], 5)
    1
    """
    if not is_prime(p):
        raise ArgumentError(f"p = {p} is not prime")
    r, c = shape(M)
    A = [[x % p for x in row] for row in M]
    rank = 0
    col = 0
    for col in range(c):
        piv = next((i for i in range(rank, r) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][col], -1, p)
        A[rank] = [(x * inv) % p for x in A[rank]]
        for i in range(r):
            if i != rank and A[i][col]:
                f = A[i][col]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


class QmodZ:
    """An element of Q/Z in lowest terms with 0 <= num < den.

    >>> QmodZ(7, 5)
    QmodZ(2/5)
    >>> QmodZ(-1, 3)
    QmodZ(2/3)
    >>> str(QmodZ(0, 1))
    '0/1'
    >>> QmodZ(1, 3) + QmodZ(2, 3)
    QmodZ(0/1)
    >>> 2 * QmodZ(2, 5)
    QmodZ(4/5)
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        if den == 0:
            raise ArgumentError("QmodZ with zero denominator")
        f = Fraction(num, den) % 1
        self.num = f.numerator
        self.den = f.denominator
        assert 0 <= self.num < self.den and gcd(self.num, self.den) == 1

    @classmethod
    def from_fraction(cls, f):
        return cls(f.numerator, f.denominator)

    def as_fraction(self):
        return Fraction(self.num, self.den)

    def __add__(self, other):
        return QmodZ(
            self.num * other.den + other.num * self.den, self.den * other.den
        )

    def __neg__(self):
        return QmodZ(-self.num, self.den)

    def __rmul__(self, k):
        assert isinstance(k, int)
        return QmodZ(k * self.num, self.den)

    def __eq__(self, other):
        return (
            isinstance(other, QmodZ)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self):
        return hash((self.num, self.den))

    def __str__(self):
        return f"{self.num}/{self.den}"

    def __repr__(self):
        return f"QmodZ({self.num}/{self.den})"

    def __lt__(self, other):
        return self.as_fraction() < other.as_fraction()


def parse_qmodz(text):
    """Inverse of str(QmodZ): "num/den" -> QmodZ.

    >>> parse_qmodz("2/5")
    QmodZ(2/5)
    """
    from .errors import ParseError

    parts = text.strip().split("/")
    if len(parts) != 2:
        raise ParseError(f"expected num/den, got {text!r}")
    try:
        return QmodZ(int(parts[0]), int(parts[1]))
    except ValueError as exc:
        raise ParseError(f"bad fraction {text!r}: {exc}") from None
