"""Gordian-distance obstructions and classical bounds.

Two linking-form obstructions for the distance d(J, K) between knots
with coprime determinants, both evaluated on the double branched cover
of -J # K (mirror of J summed with K), whose first homology has order
det(J)*det(K):

* distance-one test: if d = 1 the homology is cyclic and some generator
  g has lk(g, g) = 2*eps / (det(J)*det(K)) with eps = +-1.  No such
  generator (or a non-cyclic group) rules out d = 1, so d >= 2.

* distance-two test: if d <= 2 the doubled linking form is isometric to
  the standard form of some 2x2 candidate matrix of determinant
  +-det(J)*det(K).  No candidate matching rules out d <= 2, so d >= 3.

Alongside these run the classical lower bounds from the signature, the
s and tau concordance invariants, and F_p-homology ranks, plus the
unknotting-number upper bound d <= u(J) + u(K).
"""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import NamedTuple

from .errors import (
    ArgumentError,
    CapExceededError,
    InapplicableError,
    ValidationError,
)
from .exactmat import QmodZ
from .knots import (
    UNKNOT,
    canonical_expr,
    connected_sum,
    fp_rank,
    knot_det,
    knot_signature,
    mirror_matrix,
    parse_expr,
    seifert_matrix,
    symmetrized,
)
from .linkform import DEFAULT_GROUP_CAP, LinkingForm


class CandidateMatrix(NamedTuple):
    """Symmetric 2x2 integer matrix [[a, c], [c, b]] in reduced form."""

    a: int
    b: int
    c: int

    def matrix(self):
        return [[self.a, self.c], [self.c, self.b]]

    @property
    def det(self):
        return self.a * self.b - self.c * self.c


def _raw_candidates(d):
    """Reduced-form 2x2 candidates of determinant d, before parity filtering.

    Family 1: a*b - c^2 = d with 0 < |a| <= |b| <= |d|, 0 <= c <= |a|/2.
    Family 2 (only when -d is a perfect square): [[a, c], [c, 0]] with
    c = sqrt(-d) and |a| <= c; its off-diagonal range is a completion
    choice, harmless because the parity filter removes the whole family.
    """
    if d == 0:
        raise ArgumentError("candidate determinant must be nonzero")
    out = set()
    ad = abs(d)
    cmax = isqrt(ad // 3) if ad >= 3 else 0
    for c in range(cmax + 1):
        n = d + c * c
        if n == 0:
            continue
        an = abs(n)
        for a_abs in range(max(1, 2 * c), isqrt(an) + 1):
            if an % a_abs != 0:
                continue
            b_abs = an // a_abs
            if b_abs > ad:
                continue
            if n > 0:
                out.add(CandidateMatrix(a_abs, b_abs, c))
                out.add(CandidateMatrix(-a_abs, -b_abs, c))
            else:
                out.add(CandidateMatrix(a_abs, -b_abs, c))
                out.add(CandidateMatrix(-a_abs, b_abs, c))
    if d < 0 and isqrt(ad) * isqrt(ad) == ad:
        c = isqrt(ad)
        for a in range(-c, c + 1):
            out.add(CandidateMatrix(a, 0, c))
    for cand in out:
        assert cand.det == d
    return sorted(out)


def candidate_matrices(d):
    """Candidate intersection forms of determinant d for the distance-two
    test: reduced 2x2 matrices with odd diagonal and even off-diagonal.

    d must be odd (determinants of knots are odd).

    >>> [c.matrix() for c in candidate_matrices(3)]
    [[[-1, 0], [0, -3]], [[1, 0], [0, 3]]]
    >>> [(c.a, c.b) for c in candidate_matrices(1)]
    [(-1, -1), (1, 1)]
    >>> candidate_matrices(4)
    Traceback (most recent call last):
        ...
    gordian.errors.ArgumentError: candidate determinant 4 must be odd
    """
    if d % 2 == 0:
        raise ArgumentError(f"candidate determinant {d} must be odd")
    return [
        cand
        for cand in _raw_candidates(d)
        if cand.a % 2 != 0 and cand.b % 2 != 0 and cand.c % 2 == 0
    ]


@dataclass
class ObstructionVerdict:
    """Outcome of one obstruction run on one pair."""

    kind: str
    violated: bool
    witness: dict = None
    notes: str = ""

    def to_dict(self):
        return {
            "kind": self.kind,
            "violated": self.violated,
            "witness": self.witness,
            "notes": self.notes,
        }


def _check_pair_dets(det_j, det_k):
    for d in (det_j, det_k):
        if d <= 0 or d % 2 == 0:
            raise ArgumentError(f"knot determinant {d} must be odd and positive")
    if gcd(det_j, det_k) != 1:
        raise InapplicableError(
            f"determinants {det_j} and {det_k} share a factor "
            f"{gcd(det_j, det_k)}; the linking obstructions need them coprime"
        )


def d1_obstruction(form, det_j, det_k, eps=None, cap=DEFAULT_GROUP_CAP,
                   progress=None):
    """Distance-one test on the linking form of the cover of -J # K.

    Violated (hence d(J, K) >= 2) when the group is not cyclic or no
    generator self-links to 2*eps/(det(J)*det(K)).  eps = +1, -1 or None
    for both signs.  Raises InapplicableError unless the determinants
    are coprime.

    `progress`, if given, is invoked periodically as progress(done,
    total) during the generator sweep; an exception it raises cancels
    the search and propagates.

    >>> f = LinkingForm.from_symmetric([[-2, 1], [1, -2]])
    >>> v = d1_obstruction(f, 1, 3)
    >>> v.violated, v.witness["eps"]
    (False, -1)
    """
    _check_pair_dets(det_j, det_k)
    if eps not in (None, 1, -1):
        raise ArgumentError(f"eps must be +1, -1 or None, got {eps!r}")
    signs = (1, -1) if eps is None else (eps,)
    n = det_j * det_k
    if form.group_order != n:
        raise ValidationError(
            f"linking-form group order {form.group_order} does not match "
            f"det(J)*det(K) = {n}"
        )
    if len(form.orders) > 1:
        return ObstructionVerdict(
            kind="d1",
            violated=True,
            notes=f"homology {form.orders} is not cyclic",
        )
    if n > cap:
        raise CapExceededError(
            f"group order {n} exceeds cap {cap}", order=n, cap=cap
        )
    if not form.orders:
        # trivial group: its zero element is a generator and all targets
        # 2*eps/1 vanish in Q/Z
        return ObstructionVerdict(
            kind="d1",
            violated=False,
            witness={"generator": [], "eps": signs[0], "value": "0/1"},
        )
    a = form._scaled()[0][0]
    targets = [(e, (2 * e) % n) for e in signs]
    for x in range(1, n):
        if progress is not None and x % 4096 == 0:
            progress(x, n)
        if gcd(x, n) != 1:
            continue
        v = a * x * x % n
        for e, t in targets:
            if v == t:
                return ObstructionVerdict(
                    kind="d1",
                    violated=False,
                    witness={
                        "generator": [x],
                        "eps": e,
                        "value": str(QmodZ(v, n)),
                    },
                )
    wanted = " or ".join(str(QmodZ(t, n)) for _, t in targets)
    return ObstructionVerdict(
        kind="d1",
        violated=True,
        notes=f"no generator of Z/{n} self-links to {wanted}",
    )


def _self_link_index(form):
    """Map scaled self-linking numerator -> elements attaining it."""
    index = {}
    k = len(form.orders)
    m = form.exponent
    s = form._scaled()
    for v in form.elements(cap=float("inf")):
        acc = 0
        for i in range(k):
            vi = v[i]
            if vi == 0:
                continue
            row = s[i]
            acc += vi * vi * row[i]
            for j in range(i + 1, k):
                if v[j]:
                    acc += 2 * vi * v[j] * row[j]
        index.setdefault(acc % m, []).append(v)
    return index


def _target_scaled(num, den, m):
    """Numerator of num/den rescaled to denominator m, or None if the
    reduced denominator does not divide m."""
    q = Fraction(num, den) % 1
    if m % q.denominator != 0:
        return None
    return q.numerator * (m // q.denominator) % m


def _isometric_with_index(cand, form, index):
    a, b, c = cand.a, cand.b, cand.c
    dc = cand.det
    m = form.exponent
    t00 = _target_scaled(b, dc, m)
    t11 = _target_scaled(a, dc, m)
    t01 = _target_scaled(-c, dc, m)
    if t00 is None or t11 is None or t01 is None:
        return None
    k = len(form.orders)
    s = form._scaled()
    for v1 in index.get(t00, ()):
        for v2 in index.get(t11, ()):
            cross = 0
            for i in range(k):
                if v1[i]:
                    row = s[i]
                    cross += v1[i] * sum(
                        v2[j] * row[j] for j in range(k) if v2[j]
                    )
            if cross % m != t01:
                continue
            if form.generates([v1, v2]):
                return {
                    "candidate": [a, b, c],
                    "v1": list(v1),
                    "v2": list(v2),
                }
    return None


def lambda_isometric(cand, form, cap=DEFAULT_GROUP_CAP):
    """Is the standard form of the candidate matrix isometric to `form`?

    The candidate's form on Z^2/C Z^2 has Gram C^{-1} mod 1; isometry
    holds exactly when some pair v1, v2 generating `form` (v1 = 0 is
    admissible when it matches) pairs as C^{-1}.  Returns (flag,
    witness-or-None).

    >>> f = LinkingForm.from_symmetric([[-2, 1], [1, -2]]).double()
    >>> ok, w = lambda_isometric(CandidateMatrix(1, -3, 0), f)
    >>> ok, w["v1"], w["v2"]
    (True, [0], [1])
    """
    if not isinstance(cand, CandidateMatrix):
        M = cand
        if (
            len(M) != 2
            or any(len(row) != 2 for row in M)
            or M[0][1] != M[1][0]
        ):
            raise ArgumentError("candidate must be a symmetric 2x2 matrix")
        cand = CandidateMatrix(M[0][0], M[1][1], M[0][1])
    if abs(cand.det) != form.group_order:
        raise ArgumentError(
            f"|det C| = {abs(cand.det)} does not match group order "
            f"{form.group_order}"
        )
    if form.group_order > cap:
        raise CapExceededError(
            f"group order {form.group_order} exceeds cap {cap}",
            order=form.group_order,
            cap=cap,
        )
    witness = _isometric_with_index(cand, form, _self_link_index(form))
    return (witness is not None, witness)


def d2_obstruction(form, det_j, det_k, cap=DEFAULT_GROUP_CAP, progress=None):
    """Distance-two test on the linking form of the cover of -J # K.

    Violated (hence d(J, K) >= 3) when no candidate matrix of
    determinant +-det(J)*det(K) has standard form isometric to the
    doubled linking form.  Raises InapplicableError unless the
    determinants are coprime.

    `progress`, if given, is invoked as progress(done, total) before
    each candidate is tried; an exception it raises cancels the search
    and propagates.

    >>> f = LinkingForm.from_symmetric([[-2, 1], [1, -2]])
    >>> v = d2_obstruction(f, 1, 3)
    >>> v.violated, v.witness["candidate"]
    (False, [-1, -3, 0])
    """
    _check_pair_dets(det_j, det_k)
    n = det_j * det_k
    if form.group_order != n:
        raise ValidationError(
            f"linking-form group order {form.group_order} does not match "
            f"det(J)*det(K) = {n}"
        )
    if n > cap:
        raise CapExceededError(
            f"group order {n} exceeds cap {cap}", order=n, cap=cap
        )
    doubled = form.double()
    index = _self_link_index(doubled)
    cands = candidate_matrices(n) + candidate_matrices(-n)
    for done, cand in enumerate(cands):
        if progress is not None:
            progress(done, len(cands))
        witness = _isometric_with_index(cand, doubled, index)
        if witness is not None:
            return ObstructionVerdict(kind="d2", violated=False, witness=witness)
    return ObstructionVerdict(
        kind="d2",
        violated=True,
        notes=f"none of {len(cands)} candidate forms of determinant "
        f"+-{n} is isometric to the doubled linking form",
    )


def _summand_invariant(expr, table, attr):
    """Sum a concordance invariant over summands; None if any is unknown.

    The invariant must negate under mirroring and ignore reversal
    (signature, s, tau all do).
    """
    total = 0
    for s in expr.summands:
        if s.name == UNKNOT:
            continue
        value = getattr(table[s.name], attr)
        if value is None:
            return None
        total += -value if s.mirrored else value
    return total


def _u_range(expr, table):
    """(min, max) unknotting-number sums over summands, or None."""
    lo = hi = 0
    for s in expr.summands:
        if s.name == UNKNOT:
            continue
        rec = table[s.name]
        if rec.u_min is None or rec.u_max is None:
            return None
        lo += rec.u_min
        hi += rec.u_max
    return (lo, hi)


@dataclass
class ClassicalBounds:
    """Signature/s/tau/F_p lower bounds and the unknotting upper bound.

    Bounds from invariants missing in the table are None, never zero.
    """

    sigma_bound: int
    s_bound: int
    tau_bound: int
    fp_bound: int
    fp_best_p: int
    u_sum_min: int
    u_sum_max: int

    def known(self):
        """(value, label) pairs for the bounds that could be computed."""
        pairs = [
            (self.sigma_bound, "signature"),
            (self.s_bound, "s"),
            (self.tau_bound, "tau"),
            (self.fp_bound, "fp_rank"),
        ]
        return [(v, label) for v, label in pairs if v is not None]

    def to_dict(self):
        return {
            "sigma_bound": self.sigma_bound,
            "s_bound": self.s_bound,
            "tau_bound": self.tau_bound,
            "fp_bound": self.fp_bound,
            "fp_best_p": self.fp_best_p,
            "u_sum_min": self.u_sum_min,
            "u_sum_max": self.u_sum_max,
        }


def _odd_prime_factors(n):
    out = []
    n = abs(n)
    while n % 2 == 0:
        n //= 2
    p = 3
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 2
    if n > 1:
        out.append(n)
    return out


def classical_bounds(expr_j, expr_k, table):
    """All classical distance bounds for a pair of knot expressions.

    Lower bounds: |sigma(J) - sigma(K)| / 2, |s(J) - s(K)| / 2,
    |tau(J) - tau(K)|, and max_p |dim_p(J) - dim_p(K)| over odd primes p
    dividing det(J)*det(K).  Upper bound: u(J) + u(K) summed over table
    ranges.  Each invariant is additive under connected sum and negates
    under mirroring.
    """
    A_j = seifert_matrix(expr_j, table)
    A_k = seifert_matrix(expr_k, table)
    sig_j = knot_signature(A_j)
    sig_k = knot_signature(A_k)
    assert (sig_j - sig_k) % 2 == 0
    sigma_bound = abs(sig_j - sig_k) // 2

    s_j = _summand_invariant(expr_j, table, "s")
    s_k = _summand_invariant(expr_k, table, "s")
    s_bound = None
    if s_j is not None and s_k is not None:
        assert (s_j - s_k) % 2 == 0
        s_bound = abs(s_j - s_k) // 2

    tau_j = _summand_invariant(expr_j, table, "tau")
    tau_k = _summand_invariant(expr_k, table, "tau")
    tau_bound = None
    if tau_j is not None and tau_k is not None:
        tau_bound = abs(tau_j - tau_k)

    fp_bound = 0
    fp_best_p = None
    for p in _odd_prime_factors(knot_det(A_j) * knot_det(A_k)):
        diff = abs(fp_rank(A_j, p) - fp_rank(A_k, p))
        if diff > fp_bound:
            fp_bound = diff
            fp_best_p = p

    u_j = _u_range(expr_j, table)
    u_k = _u_range(expr_k, table)
    u_sum_min = u_sum_max = None
    if u_j is not None and u_k is not None:
        u_sum_min = u_j[0] + u_k[0]
        u_sum_max = u_j[1] + u_k[1]
    return ClassicalBounds(
        sigma_bound=sigma_bound,
        s_bound=s_bound,
        tau_bound=tau_bound,
        fp_bound=fp_bound,
        fp_best_p=fp_best_p,
        u_sum_min=u_sum_min,
        u_sum_max=u_sum_max,
    )


@dataclass
class BoundReport:
    """Everything known about the Gordian distance of one pair."""

    expr_j: str
    expr_k: str
    canonical_j: str
    canonical_k: str
    det_j: int
    det_k: int
    coprime: bool
    bounds: ClassicalBounds
    d1_status: str
    d1_detail: dict
    d2_status: str
    d2_detail: dict
    lower: int
    lower_source: str
    upper: int
    exact: bool
    verdict: str

    def to_dict(self):
        out = {
            "expr_j": self.expr_j,
            "expr_k": self.expr_k,
            "canonical_j": self.canonical_j,
            "canonical_k": self.canonical_k,
            "det_j": self.det_j,
            "det_k": self.det_k,
            "coprime": self.coprime,
            "bounds": self.bounds.to_dict(),
            "d1_status": self.d1_status,
            "d1_detail": self.d1_detail,
            "d2_status": self.d2_status,
            "d2_detail": self.d2_detail,
            "lower": self.lower,
            "lower_source": self.lower_source,
            "upper": self.upper,
            "exact": self.exact,
            "verdict": self.verdict,
        }
        return out


def _run_obstruction(runner, form, det_j, det_k, **kw):
    """Run one obstruction, folding errors into a (status, detail) pair."""
    try:
        verdict = runner(form, det_j, det_k, **kw)
    except InapplicableError as exc:
        return "inapplicable", {"notes": str(exc)}
    except CapExceededError as exc:
        return "cap", {"notes": str(exc), "order": exc.order, "cap": exc.cap}
    if verdict.violated:
        return "violated", {"notes": verdict.notes}
    return "holds", {"witness": verdict.witness, "notes": verdict.notes}


def pair_form(expr_j, expr_k, table):
    """Linking form of the double branched cover of -J # K."""
    A_j = seifert_matrix(expr_j, table)
    A_k = seifert_matrix(expr_k, table)
    Q = symmetrized(connected_sum([mirror_matrix(A_j), A_k]))
    return LinkingForm.from_symmetric(Q)


def report(expr_j, expr_k, table, eps=None, cap=DEFAULT_GROUP_CAP):
    """Full bound report for a pair of knot expressions.

    Accepts parsed expressions or strings.  Expressions naming the same
    knot (equal canonical forms) short-circuit to d = 0; otherwise both
    linking obstructions and all classical bounds run, and the verdict
    combines the best lower bound with the unknotting upper bound.
    """
    if isinstance(expr_j, str):
        expr_j = parse_expr(expr_j)
    if isinstance(expr_k, str):
        expr_k = parse_expr(expr_k)
    canon_j = canonical_expr(expr_j)
    canon_k = canonical_expr(expr_k)
    A_j = seifert_matrix(expr_j, table)
    A_k = seifert_matrix(expr_k, table)
    det_j = knot_det(A_j)
    det_k = knot_det(A_k)
    coprime = gcd(det_j, det_k) == 1
    bounds = classical_bounds(expr_j, expr_k, table)

    if canon_j == canon_k:
        skip = {"notes": "identical knots, distance is 0"}
        return BoundReport(
            expr_j=str(expr_j),
            expr_k=str(expr_k),
            canonical_j=canon_j,
            canonical_k=canon_k,
            det_j=det_j,
            det_k=det_k,
            coprime=coprime,
            bounds=bounds,
            d1_status="inapplicable",
            d1_detail=skip,
            d2_status="inapplicable",
            d2_detail=skip,
            lower=0,
            lower_source="identity",
            upper=0,
            exact=True,
            verdict="d = 0",
        )

    form = pair_form(expr_j, expr_k, table)
    d1_status, d1_detail = _run_obstruction(
        d1_obstruction, form, det_j, det_k, eps=eps, cap=cap
    )
    d2_status, d2_detail = _run_obstruction(
        d2_obstruction, form, det_j, det_k, cap=cap
    )

    lower = 0
    lower_source = "trivial"
    for value, label in bounds.known():
        if value > lower:
            lower = value
            lower_source = label
    if d1_status == "violated" and lower < 2:
        lower = 2
        lower_source = "linking_d1"
    if d2_status == "violated" and lower < 3:
        lower = 3
        lower_source = "linking_d2"

    upper = bounds.u_sum_max
    if upper is not None and lower > upper:
        blame = (
            "the crossing-sign assumption or the table data is inconsistent"
            if eps is not None
            else "table data is inconsistent"
        )
        raise ValidationError(
            f"lower bound {lower} exceeds upper bound {upper} for "
            f"{canon_j} vs {canon_k}; {blame}"
        )
    exact = upper is not None and lower == upper
    if exact:
        verdict = f"d = {lower}"
    elif upper is not None:
        verdict = f"{lower} <= d <= {upper}"
    else:
        verdict = f"d >= {lower}"
    return BoundReport(
        expr_j=str(expr_j),
        expr_k=str(expr_k),
        canonical_j=canon_j,
        canonical_k=canon_k,
        det_j=det_j,
        det_k=det_k,
        coprime=coprime,
        bounds=bounds,
        d1_status=d1_status,
        d1_detail=d1_detail,
        d2_status=d2_status,
        d2_detail=d2_detail,
        lower=lower,
        lower_source=lower_source,
        upper=upper,
        exact=exact,
        verdict=verdict,
    )
