"""Linking forms of double branched covers, in exact arithmetic.

A linking form is a finite abelian group H of odd order together with a
nondegenerate symmetric pairing H x H -> Q/Z.  Here H is presented by
invariant factors (an ascending divisibility chain) and the pairing by
the Gram matrix of self/cross linkings of the chosen generators.

For a knot with Seifert matrix A the double branched cover has
H_1 = coker(A + A^T) and the linking of classes [x], [y] is
x^T (A + A^T)^{-1} y mod 1; everything below works from any symmetric
integer matrix with odd nonzero determinant.

>>> tref = LinkingForm.from_symmetric([[-2, 1], [1, -2]])
>>> tref.orders
(3,)
>>> print(tref.gram[0][0])
1/3
"""

from fractions import Fraction
from itertools import product
from math import gcd

from .errors import ArgumentError, CapExceededError, ShapeError, SingularMatrixError
from .exactmat import QmodZ, adjugate, det, shape, smith

DEFAULT_GROUP_CAP = 10**6


class LinkingForm:
    """Finite symmetric pairing on Q/Z presented by generators.

    orders: ascending divisibility chain of invariant factors, each > 1
    (empty for the trivial group).  gram[i][j]: linking of generators i
    and j, a QmodZ whose denominator divides gcd(orders[i], orders[j]).
    """

    __slots__ = ("orders", "gram", "_scaled_cache")

    def __init__(self, orders, gram):
        orders = tuple(int(d) for d in orders)
        gram = tuple(tuple(q for q in row) for row in gram)
        k = len(orders)
        for d in orders:
            if d <= 1:
                raise ArgumentError(f"invariant factor {d} must exceed 1")
        for a, b in zip(orders, orders[1:]):
            if b % a != 0:
                raise ArgumentError(f"orders {orders} are not a divisibility chain")
        if len(gram) != k or any(len(row) != k for row in gram):
            raise ShapeError(f"gram must be {k}x{k}")
        for i in range(k):
            for j in range(k):
                q = gram[i][j]
                if not isinstance(q, QmodZ):
                    raise ArgumentError("gram entries must be QmodZ")
                if q != gram[j][i]:
                    raise ShapeError("gram must be symmetric")
                if gcd(orders[i], orders[j]) % q.den != 0:
                    raise ArgumentError(
                        f"gram[{i}][{j}] = {q} has denominator not dividing "
                        f"gcd({orders[i]}, {orders[j]})"
                    )
        object.__setattr__(self, "orders", orders)
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "_scaled_cache", None)

    def __setattr__(self, name, value):
        raise AttributeError("LinkingForm is immutable")

    def __eq__(self, other):
        if not isinstance(other, LinkingForm):
            return NotImplemented
        return self.orders == other.orders and self.gram == other.gram

    def __hash__(self):
        return hash((self.orders, self.gram))

    def __repr__(self):
        entries = "; ".join(
            " ".join(str(q) for q in row) for row in self.gram
        )
        return f"LinkingForm(orders={list(self.orders)}, gram=[{entries}])"

    @property
    def group_order(self):
        out = 1
        for d in self.orders:
            out *= d
        return out

    @property
    def exponent(self):
        return self.orders[-1] if self.orders else 1

    # -- construction -------------------------------------------------

    @classmethod
    def from_symmetric(cls, Q):
        """Linking form of coker(Q) for symmetric Q with odd nonzero det.

        Generators are the cokernel classes of the columns of U^{-1}
        where U Q V is the Smith normal form, restricted to invariant
        factors exceeding 1; their pairings come from the adjugate:
        lk(x, y) = x^T adj(Q) y / det(Q) mod 1.

        >>> LinkingForm.from_symmetric([[5]]).gram[0][0] == QmodZ(1, 5)
        True
        >>> LinkingForm.from_symmetric([[1]]).orders
        ()
        """
        n, m = shape(Q)
        if n != m:
            raise ShapeError(f"Q is {n}x{m}, not square")
        for i in range(n):
            for j in range(i):
                if Q[i][j] != Q[j][i]:
                    raise ShapeError("Q must be symmetric")
        d = det(Q)
        if d == 0:
            raise SingularMatrixError("Q is singular")
        if d % 2 == 0:
            raise ArgumentError(f"det(Q) = {d} is even; group order must be odd")
        if n == 0:
            return cls((), ())
        dec = smith(Q)
        det_u = det(dec.U)
        assert det_u in (1, -1)
        adj_u = adjugate(dec.U)
        # U^{-1} = adj(U) / det(U) and det(U) is a unit
        u_inv = [[det_u * adj_u[i][j] for j in range(n)] for i in range(n)]
        adj_q = adjugate(Q)
        keep = [i for i in range(n) if dec.D[i] > 1]
        orders = tuple(dec.D[i] for i in keep)
        cols = [[u_inv[r][i] for r in range(n)] for i in keep]

        def pair(x, y):
            acc = 0
            for r in range(n):
                acc += x[r] * sum(adj_q[r][s] * y[s] for s in range(n))
            return QmodZ.from_fraction(Fraction(acc, d))

        gram = tuple(
            tuple(pair(cols[a], cols[b]) for b in range(len(keep)))
            for a in range(len(keep))
        )
        return cls(orders, gram)

    # -- serialization ------------------------------------------------

    def to_payload(self):
        """JSON-ready dict; lossless (ints and num/den strings only).

        >>> LinkingForm.from_symmetric([[-2, 1], [1, -2]]).to_payload()
        {'orders': [3], 'gram': [['1/3']]}
        """
        return {
            "orders": list(self.orders),
            "gram": [[str(q) for q in row] for row in self.gram],
        }

    @classmethod
    def from_payload(cls, payload):
        from .exactmat import parse_qmodz

        return cls(
            tuple(payload["orders"]),
            tuple(
                tuple(parse_qmodz(s) for s in row) for row in payload["gram"]
            ),
        )

    # -- derived forms ------------------------------------------------

    def negate(self):
        """Same group, negated pairing (the form of the mirror cover)."""
        return LinkingForm(
            self.orders,
            tuple(tuple(-q for q in row) for row in self.gram),
        )

    def double(self):
        """Same group, pairing multiplied by 2.

        Multiplication by 2 is invertible on odd-order groups, so the
        doubled form is again nondegenerate.
        """
        return LinkingForm(
            self.orders,
            tuple(tuple(2 * q for q in row) for row in self.gram),
        )

    def direct_sum(self, other):
        """Orthogonal sum, renormalized to an invariant-factor chain.

        The concatenated orders rarely form a divisibility chain, so the
        diagonal relation matrix is put back in Smith form and the new
        generators are re-expressed through the old ones.

        >>> a = LinkingForm.from_symmetric([[3]])
        >>> b = LinkingForm.from_symmetric([[5]])
        >>> a.direct_sum(b).orders
        (15,)
        """
        if not isinstance(other, LinkingForm):
            raise ArgumentError("direct_sum needs another LinkingForm")
        if not self.orders:
            return other
        if not other.orders:
            return self
        mix_orders = self.orders + other.orders
        k = len(mix_orders)
        ka = len(self.orders)

        def mix_pair(x, y):
            acc = Fraction(0)
            for i in range(k):
                if x[i] == 0:
                    continue
                for j in range(k):
                    if y[j] == 0:
                        continue
                    if i < ka and j < ka:
                        q = self.gram[i][j]
                    elif i >= ka and j >= ka:
                        q = other.gram[i - ka][j - ka]
                    else:
                        continue
                    acc += x[i] * y[j] * q.as_fraction()
            return QmodZ.from_fraction(acc)

        rel = [[mix_orders[i] if i == j else 0 for j in range(k)] for i in range(k)]
        dec = smith(rel)
        det_u = det(dec.U)
        assert det_u in (1, -1)
        adj_u = adjugate(dec.U)
        u_inv = [[det_u * adj_u[i][j] for j in range(k)] for i in range(k)]
        keep = [i for i in range(k) if dec.D[i] > 1]
        orders = tuple(dec.D[i] for i in keep)
        cols = [[u_inv[r][i] for r in range(k)] for i in keep]
        gram = tuple(
            tuple(mix_pair(cols[a], cols[b]) for b in range(len(keep)))
            for a in range(len(keep))
        )
        return LinkingForm(orders, gram)

    # -- evaluation ---------------------------------------------------

    def _scaled(self):
        """Gram numerators scaled to the common denominator exponent."""
        cached = self._scaled_cache
        if cached is None:
            m = self.exponent
            cached = [
                [q.num * (m // q.den) % m for q in row] for row in self.gram
            ]
            object.__setattr__(self, "_scaled_cache", cached)
        return cached

    def reduce(self, coeffs):
        """Normalize coefficients mod the generator orders.

        >>> LinkingForm.from_symmetric([[-2, 1], [1, -2]]).reduce((-1,))
        (2,)
        """
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != len(self.orders):
            raise ShapeError(
                f"element needs {len(self.orders)} coefficients, got {len(coeffs)}"
            )
        return tuple(c % d for c, d in zip(coeffs, self.orders))

    def evaluate(self, x, y):
        """Pairing of two elements given by generator coefficients.

        >>> f = LinkingForm.from_symmetric([[-2, 1], [1, -2]])
        >>> print(f.evaluate((1,), (2,)))
        2/3
        """
        x = self.reduce(x)
        y = self.reduce(y)
        m = self.exponent
        s = self._scaled()
        acc = 0
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            row = s[i]
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                acc += xi * yj * row[j]
        return QmodZ(acc % m, m)

    def elements(self, cap=DEFAULT_GROUP_CAP):
        """Iterate all coefficient tuples, smallest-order digit last."""
        if self.group_order > cap:
            raise CapExceededError(
                f"group order {self.group_order} exceeds cap {cap}",
                order=self.group_order,
                cap=cap,
            )
        return product(*(range(d) for d in self.orders))

    # -- group-theoretic queries --------------------------------------

    def generates(self, elems):
        """Do the given elements generate the whole group?

        The cokernel of [elements | diag(orders)] is trivial exactly
        when they do; for the trivial group any list (even the empty
        one) generates.

        >>> f = LinkingForm((3, 15), ((QmodZ(1, 3), QmodZ(0, 1)),
        ...                           (QmodZ(0, 1), QmodZ(1, 15))))
        >>> f.generates([(1, 1)])
        False
        >>> f.generates([(1, 0), (0, 1)])
        True
        """
        k = len(self.orders)
        if k == 0:
            return True
        cols = [self.reduce(e) for e in elems]
        width = len(cols) + k
        M = [[0] * width for _ in range(k)]
        for j, col in enumerate(cols):
            for i in range(k):
                M[i][j] = col[i]
        for i in range(k):
            M[i][len(cols) + i] = self.orders[i]
        D = smith(M).D
        for i in range(k):
            if D[i] != 1:
                return False
        return True

    def generator_self_links(self, cap=DEFAULT_GROUP_CAP):
        """Self-linkings of all single generators, as a set of QmodZ.

        Empty when the group is not cyclic (no single element
        generates); {0} for the trivial group, whose zero element is a
        generator.

        >>> f = LinkingForm.from_symmetric([[-2, 1], [1, -2]])
        >>> sorted(str(q) for q in f.generator_self_links())
        ['1/3']
        >>> LinkingForm((), ()).generator_self_links() == {QmodZ(0, 1)}
        True
        """
        if len(self.orders) == 0:
            return {QmodZ(0, 1)}
        if len(self.orders) > 1:
            return set()
        n = self.orders[0]
        if n > cap:
            raise CapExceededError(
                f"group order {n} exceeds cap {cap}", order=n, cap=cap
            )
        a = self._scaled()[0][0]
        out = set()
        for x in range(1, n):
            if gcd(x, n) == 1:
                out.add(QmodZ(a * x * x % n, n))
        return out

    def is_nondegenerate(self, cap=10**4):
        """Brute-force nondegeneracy: no nonzero element pairs to zero
        with every generator.  Guarded by a group-order cap.
        """
        if self.group_order > cap:
            raise CapExceededError(
                f"group order {self.group_order} exceeds cap {cap}",
                order=self.group_order,
                cap=cap,
            )
        k = len(self.orders)
        m = self.exponent
        s = self._scaled()
        for v in self.elements(cap=cap):
            if all(c == 0 for c in v):
                continue
            hits = False
            for j in range(k):
                if sum(v[i] * s[i][j] for i in range(k)) % m != 0:
                    hits = True
                    break
            if not hits:
                return False
        return True
