"""Knot expressions and Seifert-matrix algebra.

A knot expression is a connected sum of table knots, each optionally
mirrored and/or orientation-reversed: ``"3_1"``, ``"-8_7 # 9_40"``,
``"m 4_1 # r 5_2"``.  The prefix ``m`` mirrors, ``r`` reverses, ``-``
does both (the concordance inverse).  On Seifert matrices: mirror sends
A to -A^T, reversal to A^T, connected sum to the block-diagonal sum.

The invariants derived here (determinant, signature, F_p-ranks) feed the
distance bounds; all are exact integers.

>>> parse_expr("m m 4_1").summands
(Summand(name='4_1', mirrored=False, reversed=False),)
>>> knot_det(connected_sum([mirror_matrix([[-1, 1], [0, -1]])]))
3
"""

import re
from dataclasses import dataclass

from .errors import ArgumentError, ParseError, UnknownKnotError, ValidationError
from .exactmat import det, is_prime, rank_mod_p, shape, signature, transpose

UNKNOT = "unknot"

_NAME_RE = re.compile(r"[0-9A-Za-z_]+")


@dataclass(frozen=True)
class Summand:
    name: str
    mirrored: bool = False
    reversed: bool = False


@dataclass(frozen=True)
class KnotExpr:
    """Ordered connected sum of (possibly mirrored/reversed) table knots."""

    summands: tuple

    def __str__(self):
        parts = []
        for s in self.summands:
            prefix = ""
            if s.mirrored and s.reversed:
                prefix = "-"
            elif s.mirrored:
                prefix = "m"
            elif s.reversed:
                prefix = "r"
            parts.append(prefix + s.name)
        return " # ".join(parts)


def parse_expr(text):
    """Parse a knot expression, reporting errors with byte offsets.

    Grammar: expr := term ('#' term)*; term := prefix* NAME;
    prefix one of 'm', 'r', '-'; whitespace ignored everywhere.

    >>> str(parse_expr("-8_7#9_40"))
    '-8_7 # 9_40'
    >>> parse_expr("3_1").summands[0].name
    '3_1'
    """
    if not isinstance(text, str):
        raise ParseError(f"expected a string, got {type(text).__name__}")
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    summands = []
    skip_ws()
    if pos == n:
        raise ParseError("empty knot expression", offset=0)
    while True:
        mirrored = False
        reversed_ = False
        skip_ws()
        term_start = pos
        # prefixes: single letters m/r/- followed by more term content
        while pos < n:
            ch = text[pos]
            if ch == "-":
                mirrored = not mirrored
                reversed_ = not reversed_
                pos += 1
                skip_ws()
            elif ch in "mr":
                # 'm'/'r' is a prefix only if a name still follows; a name
                # itself never starts with m/r in the shipped tables
                look = pos + 1
                while look < n and text[look].isspace():
                    look += 1
                if look < n and (text[look].isalnum() or text[look] in "_-mr"):
                    if ch == "m":
                        mirrored = not mirrored
                    else:
                        reversed_ = not reversed_
                    pos += 1
                    skip_ws()
                else:
                    break
            else:
                break
        m = _NAME_RE.match(text, pos)
        if not m:
            raise ParseError(
                "expected a knot name"
                + (" after prefixes" if pos > term_start else ""),
                offset=pos,
            )
        summands.append(
            Summand(name=m.group(0), mirrored=mirrored, reversed=reversed_)
        )
        pos = m.end()
        skip_ws()
        if pos == n:
            break
        if text[pos] != "#":
            raise ParseError(f"unexpected character {text[pos]!r}", offset=pos)
        pos += 1
        skip_ws()
        if pos == n:
            raise ParseError("dangling '#'", offset=pos)
    return KnotExpr(summands=tuple(summands))


def _name_sort_key(name):
    m = re.fullmatch(r"(\d+)_(\d+)", name)
    if m:
        return (0, int(m.group(1)), int(m.group(2)), name)
    if name == UNKNOT:
        return (0, 0, 0, name)
    return (1, 0, 0, name)


def canonical_expr(expr):
    """Canonical string for an expression: reversal dropped (it changes no
    implemented invariant), summands sorted, unknot summands elided.

    >>> canonical_expr(parse_expr("4_1 # m3_1"))
    'm3_1 # 4_1'
    >>> canonical_expr(parse_expr("r 5_2"))
    '5_2'
    >>> canonical_expr(parse_expr("unknot"))
    'unknot'
    """
    parts = sorted(
        (
            (_name_sort_key(s.name), s.mirrored, s.name)
            for s in expr.summands
            if s.name != UNKNOT
        ),
    )
    if not parts:
        return UNKNOT
    return " # ".join(("m" if m else "") + name for _, m, name in parts)


def mirror_expr(expr):
    return KnotExpr(
        summands=tuple(
            Summand(s.name, not s.mirrored, s.reversed) for s in expr.summands
        )
    )


def validate_seifert(A, name=None):
    """Check the Seifert-matrix invariants, raising ValidationError.

    A must be square of even size, A - A^T unimodular (det exactly 1),
    and det(A + A^T) odd (automatically nonzero then).

    >>> validate_seifert([[-1, 1], [0, -1]])
    >>> validate_seifert([[1, 0], [0, 1]])
    Traceback (most recent call last):
        ...
    gordian.errors.ValidationError: det(A - A^T) = 0, expected 1
    """
    where = f" for {name}" if name else ""
    r, c = shape(A)
    if r != c:
        raise ValidationError(f"Seifert matrix{where} is {r}x{c}, not square")
    if r % 2 != 0:
        raise ValidationError(f"Seifert matrix{where} has odd size {r}")
    skew = [[A[i][j] - A[j][i] for j in range(r)] for i in range(r)]
    d = det(skew)
    if d != 1:
        raise ValidationError(f"det(A - A^T) = {d}, expected 1" + where)
    q = det(symmetrized(A))
    if q % 2 == 0:
        raise ValidationError(f"det(A + A^T) = {q} is even" + where)


def symmetrized(A):
    n, _ = shape(A)
    return [[A[i][j] + A[j][i] for j in range(n)] for i in range(n)]


def mirror_matrix(A):
    """Seifert matrix of the mirror image: -A^T."""
    return [[-x for x in row] for row in transpose(A)]


def reverse_matrix(A):
    """Seifert matrix of the reverse: A^T."""
    return transpose(A)


def connected_sum(matrices):
    """Block-diagonal sum of Seifert matrices.

    >>> connected_sum([[[1]], [[2]]])
    [[1, 0], [0, 2]]
    >>> connected_sum([])
    []
    """
    total = sum(len(A) for A in matrices)
    out = [[0] * total for _ in range(total)]
    base = 0
    for A in matrices:
        k = len(A)
        for i in range(k):
            for j in range(k):
                out[base + i][base + j] = A[i][j]
        base += k
    return out


def seifert_matrix(expr, table):
    """Seifert matrix of a knot expression over a loaded table.

    `table` is anything mapping names to records with a `.seifert`
    attribute (or to raw matrices); the built-in name "unknot" resolves
    to the empty matrix without consulting the table.
    """
    blocks = []
    for s in expr.summands:
        if s.name == UNKNOT:
            A = []
        else:
            try:
                rec = table[s.name]
            except (KeyError, TypeError):
                raise UnknownKnotError(f"unknown knot {s.name!r}") from None
            A = rec.seifert if hasattr(rec, "seifert") else rec
        if s.mirrored:
            A = mirror_matrix(A)
        if s.reversed:
            A = reverse_matrix(A)
        blocks.append(A)
    out = connected_sum(blocks)
    validate_seifert(out, name=str(expr))
    return out


def knot_det(A):
    """|det(A + A^T)|: the knot determinant.

    >>> knot_det([[-1, 1], [0, -1]])
    3
    """
    return abs(det(symmetrized(A)))


def knot_signature(A):
    """Signature of A + A^T; always even for a knot.

    >>> knot_signature([[-1, 1], [0, -1]])
    -2
    >>> knot_signature([])
    0
    """
    return signature(symmetrized(A))


def fp_rank(A, p):
    """dim_{F_p} H_1 of the double branched cover, for odd prime p.

    Equals the number of invariant factors of A + A^T divisible by p,
    i.e. the corank of A + A^T over F_p.

    >>> fp_rank(connected_sum([[[1, 1], [0, -1]]] * 2), 5)
    2
    >>> fp_rank([[-1, 1], [0, -1]], 5)
    0
    """
    if p == 2 or not is_prime(p):
        raise ArgumentError(f"p = {p} is not an odd prime")
    Q = symmetrized(A)
    return len(Q) - rank_mod_p(Q, p) if Q else 0
