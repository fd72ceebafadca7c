"""Shared test helpers: seeded matrix builders and brute-force oracles.

Every oracle here recomputes its answer from first principles (Fraction
Gaussian elimination, exhaustive subgroup closure, depth-first isometry
search) so that agreement with the package is meaningful evidence, not
a tautology.
"""

from fractions import Fraction
import itertools


def frac_det(M):
    """Determinant by fraction-free-less Gaussian elimination over Q."""
    n = len(M)
    if any(len(row) != n for row in M):
        raise ValueError("square matrix required")
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for col in range(n):
        piv = next((i for i in range(col, n) if A[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        det *= A[col][col]
        inv = 1 / A[col][col]
        for i in range(col + 1, n):
            if A[i][col] != 0:
                f = A[i][col] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[col])]
    assert det.denominator == 1
    return det


def frac_rank(M):
    """Rank over Q by Gaussian elimination."""
    if not M:
        return 0
    A = [[Fraction(x) for x in row] for row in M]
    rows, cols = len(A), len(A[0])
    rank = 0
    for col in range(cols):
        piv = next((i for i in range(rank, rows) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = 1 / A[rank][col]
        A[rank] = [x * inv for x in A[rank]]
        for i in range(rows):
            if i != rank and A[i][col] != 0:
                f = A[i][col]
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def gf_rank(M, p):
    """Rank over F_p, written without reference to the module under test."""
    if not M:
        return 0
    A = [[x % p for x in row] for row in M]
    rows, cols = len(A), len(A[0])
    rank = 0
    for col in range(cols):
        piv = next((i for i in range(rank, rows) if A[i][col]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][col], p - 2, p)
        A[rank] = [x * inv % p for x in A[rank]]
        for i in range(rows):
            if i != rank and A[i][col]:
                f = A[i][col]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def signature_by_minors(S):
    """Signature via Jacobi's leading-principal-minor rule.

    Only valid when every leading principal minor is nonzero; callers
    must arrange that (a random shuffle usually does).  Returns None
    when a minor vanishes so callers can retry.
    """
    n = len(S)
    prev = Fraction(1)
    sig = 0
    for k in range(1, n + 1):
        mk = frac_det([row[:k] for row in S[:k]])
        if mk == 0:
            return None
        sig += 1 if (mk > 0) == (prev > 0) else -1
        prev = mk
    return sig


def mat_mul_int(A, B):
    if not A or not B:
        return []
    return [
        [sum(A[i][t] * B[t][j] for t in range(len(B))) for j in range(len(B[0]))]
        for i in range(len(A))
    ]


def congruent(M, P):
    """P^T M P with plain integer arithmetic."""
    Pt = [list(col) for col in zip(*P)]
    return mat_mul_int(mat_mul_int(Pt, M), P)


def random_matrix(rng, rows, cols, lo=-9, hi=9):
    return [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]


def random_symmetric(rng, n, lo=-9, hi=9):
    M = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            M[i][j] = M[j][i] = rng.randint(lo, hi)
    return M


def random_symmetric_odd_det(rng, n, lo=-5, hi=5, det_bound=None):
    """Random symmetric integer matrix with odd (hence nonzero) determinant.

    det_bound, when given, caps |det| so cokernels stay enumerable.
    """
    while True:
        M = random_symmetric(rng, n, lo, hi)
        d = frac_det(M)
        if d % 2 != 0 and (det_bound is None or abs(d) <= det_bound):
            return M


def random_unimodular(rng, n, steps=12):
    """Product of elementary integer row operations, so det = +-1."""
    P = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(steps):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        alpha = rng.choice([-2, -1, 1, 2])
        for t in range(n):
            P[i][t] += alpha * P[j][t]
    if rng.random() < 0.5:
        i = rng.randrange(n)
        for t in range(n):
            P[i][t] = -P[i][t]
    rng.shuffle(P)
    return P


def random_seifert_like(rng, genus, lo=-3, hi=3):
    """2g x 2g integer matrix A with det(A - A^T) = 1.

    Built as U + S where U carries 1 at positions (2i, 2i+1) (so
    A - A^T is the standard symplectic form) and S is a random
    symmetric matrix.  A + A^T is then congruent to the symplectic
    form mod 2, so its determinant is automatically odd.
    """
    n = 2 * genus
    A = random_symmetric(rng, n, lo, hi)
    for i in range(0, n, 2):
        A[i][i + 1] += 1
    return A


def group_elements(orders):
    return list(itertools.product(*[range(d) for d in orders]))


def pair_frac(form, v, w):
    """Bilinear pairing re-derived from the printed gram, as a Fraction mod 1."""
    total = Fraction(0)
    for i, vi in enumerate(v):
        if not vi:
            continue
        for j, wj in enumerate(w):
            if wj:
                g = form.gram[i][j]
                total += vi * wj * Fraction(g.num, g.den)
    return total % 1


def subgroup_closure(orders, gens):
    """All elements generated by gens, via breadth-first closure."""
    zero = tuple([0] * len(orders))
    seen = {zero}
    frontier = [zero]
    gens = [tuple(g) for g in gens]
    while frontier:
        nxt = []
        for e in frontier:
            for g in gens:
                s = tuple((a + b) % d for a, b, d in zip(e, g, orders))
                if s not in seen:
                    seen.add(s)
                    nxt.append(s)
        frontier = nxt
    return seen


def generates_brute(form, elems):
    size = 1
    for d in form.orders:
        size *= d
    return len(subgroup_closure(form.orders, elems)) == size


def rank2_isometric_naive(a, b, c, form):
    """No-prefilter oracle: is the form of [[a,c],[c,b]] isometric to form?

    Sweeps every ordered pair of group elements and checks the three
    pairing targets plus generation directly, with Fraction arithmetic.
    """
    det = a * b - c * c
    assert abs(det) == form.group_order and det != 0
    t00 = Fraction(b, det) % 1
    t11 = Fraction(a, det) % 1
    t01 = Fraction(-c, det) % 1
    elems = group_elements(form.orders)
    for v1 in elems:
        for v2 in elems:
            if (
                pair_frac(form, v1, v1) == t00
                and pair_frac(form, v2, v2) == t11
                and pair_frac(form, v1, v2) == t01
                and generates_brute(form, [v1, v2])
            ):
                return True
    return False


def isometric_brute(f1, f2):
    """Depth-first search for an isometry between two linking forms.

    Sound and complete for nondegenerate forms: an isometry must send
    the canonical generators of f1 to elements of f2 with matching
    orders and matching pairwise pairings that generate f2; conversely
    any such tuple defines one (surjectivity plus equal cardinality
    gives bijectivity, bilinearity extends the pairing match).
    """
    if f1.orders != f2.orders:
        return False
    if not f1.orders:
        return True
    orders = f1.orders
    k = len(orders)
    elems = group_elements(orders)
    targets = [
        [Fraction(f1.gram[i][j].num, f1.gram[i][j].den) % 1 for j in range(k)]
        for i in range(k)
    ]

    def order_divides(e, d):
        return all((d * c) % o == 0 for c, o in zip(e, orders))

    chosen = []

    def extend(i):
        if i == k:
            return generates_brute(f2, chosen)
        for e in elems:
            if not order_divides(e, orders[i]):
                continue
            if pair_frac(f2, e, e) != targets[i][i]:
                continue
            if any(
                pair_frac(f2, e, chosen[j]) != targets[i][j] for j in range(i)
            ):
                continue
            chosen.append(e)
            if extend(i + 1):
                return True
            chosen.pop()
        return False

    return extend(0)
