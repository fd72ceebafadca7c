"""Batch pair scans over a knot table.

The scan universe holds every table knot, every mirror, and (when
enabled) connected sums of table knots up to a total crossing budget.
Unordered pairs of distinct knots are scanned once per equivalence
class under simultaneous mirroring: (J, K), (K, J), (mJ, mK) and
(mK, mJ) share one canonical pair key and one row.

Each row records determinants, the four classical lower bounds, the two
linking-form obstruction outcomes, and the combined lower/upper bounds.
The summary counts where the linking obstructions beat every classical
bound, and where unknotting numbers pin the distance exactly.
"""

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd

from .errors import ArgumentError
from .knots import KnotExpr, Summand, canonical_expr, mirror_expr, parse_expr
from .linkform import DEFAULT_GROUP_CAP
from .obstruct import report

SCAN_COLUMNS = (
    "pair_key",
    "knotJ",
    "knotK",
    "detJ",
    "detK",
    "coprime",
    "bound_sigma",
    "bound_s",
    "bound_tau",
    "bound_fp",
    "d1_status",
    "d2_status",
    "lower",
    "upper",
    "exact",
    "millis",
)


@dataclass
class ScanOptions:
    """Scan controls: composite budget, group-order cap, parallelism."""

    max_composite_crossings: int = 0
    cap: int = DEFAULT_GROUP_CAP
    jobs: int = 1
    eps: int = None


@dataclass
class ScanSummary:
    """Aggregate counts; *_prime restricts to pairs of single table knots.

    beats_classical: the obstruction is violated while every classical
    bound is known and too weak (at most 1 for the distance-one test,
    at most 2 for the distance-two test); pairs of two 2-bridge knots
    are excluded from the distance-one count.  exact: the beating pairs
    whose unknotting numbers are known exactly and certify d = 2
    (respectively d = 3).
    """

    pairs_total: int = 0
    pairs_prime: int = 0
    pairs_capped: int = 0
    d1_violated: int = 0
    d2_violated: int = 0
    d1_beats_classical_all: int = 0
    d1_beats_classical_prime: int = 0
    d1_exact_all: int = 0
    d1_exact_prime: int = 0
    d2_beats_classical_all: int = 0
    d2_beats_classical_prime: int = 0
    d2_exact_all: int = 0
    d2_exact_prime: int = 0

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def build_universe(table, max_composite_crossings=0):
    """All scan subjects as canonical expression strings.

    Every table knot and its mirror always enter; connected sums of two
    or more table knots (any chiralities) enter when their total
    crossing number fits the budget.  Sums need crossing data for every
    summand.

    >>> class _R:
    ...     def __init__(self, c):
    ...         self.crossing_number = c
    >>> u = build_universe({"3_1": _R(3)}, 6)
    >>> u
    ['3_1', '3_1 # 3_1', '3_1 # m3_1', 'm3_1', 'm3_1 # m3_1']
    """
    atoms = []
    for name in sorted(table.names() if hasattr(table, "names") else table):
        for mirrored in (False, True):
            atoms.append((name, mirrored))
    out = set()
    for name, mirrored in atoms:
        out.add(canonical_expr(KnotExpr((Summand(name, mirrored),))))

    def crossing(name):
        c = table[name].crossing_number
        if c is None:
            raise ArgumentError(
                f"knot {name} has no crossing number; composites need one"
            )
        return c

    def extend(start, parts, budget):
        for idx in range(start, len(atoms)):
            name, mirrored = atoms[idx]
            cost = crossing(name)
            if cost > budget:
                continue
            parts.append(Summand(name, mirrored))
            if len(parts) >= 2:
                out.add(canonical_expr(KnotExpr(tuple(parts))))
            extend(idx, parts, budget - cost)
            parts.pop()

    if max_composite_crossings > 0:
        extend(0, [], max_composite_crossings)
    return sorted(out)


def pair_key_of(expr_j, expr_k):
    """Canonical key of the pair orbit under swap and joint mirroring.

    >>> pair_key_of(parse_expr("m3_1"), parse_expr("4_1"))
    '3_1|m4_1'
    """
    cj, ck = canonical_expr(expr_j), canonical_expr(expr_k)
    mj, mk = canonical_expr(mirror_expr(expr_j)), canonical_expr(
        mirror_expr(expr_k)
    )
    best = min((cj, ck), (ck, cj), (mj, mk), (mk, mj))
    return f"{best[0]}|{best[1]}"


def scan_pairs(table, options=None, cache=None):
    """Scan every canonical pair; returns (rows, summary).

    Rows are dicts over SCAN_COLUMNS, sorted by pair key.  With a cache,
    finished pairs are reused (their millis reads 0) and new results are
    stored under the table digest before returning.
    """
    options = options or ScanOptions()
    universe = build_universe(table, options.max_composite_crossings)
    exprs = {c: parse_expr(c) for c in universe}
    jobs = []
    seen = set()
    for i, cj in enumerate(universe):
        for ck in universe[i + 1 :]:
            key = pair_key_of(exprs[cj], exprs[ck])
            if key in seen:
                continue
            seen.add(key)
            jobs.append((key, key.split("|", 1)))
    jobs.sort()

    digest = getattr(table, "digest", None)
    rows = []
    pending = []
    for key, (cj, ck) in jobs:
        cached = None
        if cache is not None and digest:
            cached = cache.get(digest, _cache_key(key, options))
        if cached is not None:
            row = dict(cached)
            row["millis"] = 0
            rows.append(row)
        else:
            pending.append((key, cj, ck))

    if options.jobs > 1 and len(pending) > 1:
        chunk = max(1, len(pending) // (options.jobs * 4))
        batches = [
            pending[i : i + chunk] for i in range(0, len(pending), chunk)
        ]
        with ProcessPoolExecutor(
            max_workers=options.jobs,
            initializer=_worker_init,
            initargs=(table, options),
        ) as pool:
            for batch_rows in pool.map(_worker_batch, batches):
                rows.extend(batch_rows)
    else:
        _worker_init(table, options)
        rows.extend(_worker_batch(pending))

    if cache is not None and digest:
        fresh = {key for key, _, _ in pending}
        for row in rows:
            if row["pair_key"] in fresh:
                stored = dict(row)
                stored["millis"] = None
                cache.put(digest, _cache_key(row["pair_key"], options), stored)
        cache.save()
    rows.sort(key=lambda r: r["pair_key"])
    summary = summarize(rows, table)
    return rows, summary


def _cache_key(pair_key, options):
    return f"pair:{pair_key}:cap={options.cap}:eps={options.eps}"


_WORKER_TABLE = None
_WORKER_OPTIONS = None


def _worker_init(table, options):
    global _WORKER_TABLE, _WORKER_OPTIONS
    _WORKER_TABLE = table
    _WORKER_OPTIONS = options


def _worker_batch(batch):
    out = []
    for key, cj, ck in batch:
        out.append(_scan_one(key, cj, ck, _WORKER_TABLE, _WORKER_OPTIONS))
    return out


def _scan_one(key, cj, ck, table, options):
    t0 = time.perf_counter()
    rep = report(cj, ck, table, eps=options.eps, cap=options.cap)
    millis = int((time.perf_counter() - t0) * 1000)
    return {
        "pair_key": key,
        "knotJ": rep.canonical_j,
        "knotK": rep.canonical_k,
        "detJ": rep.det_j,
        "detK": rep.det_k,
        "coprime": rep.coprime,
        "bound_sigma": rep.bounds.sigma_bound,
        "bound_s": rep.bounds.s_bound,
        "bound_tau": rep.bounds.tau_bound,
        "bound_fp": rep.bounds.fp_bound,
        "d1_status": rep.d1_status,
        "d2_status": rep.d2_status,
        "lower": rep.lower,
        "upper": rep.upper,
        "exact": rep.exact,
        "millis": millis,
    }


def _is_prime_expr(canon):
    return "#" not in canon


def _is_two_bridge(canon, table):
    """Is the canonical expression a 2-bridge knot?  Composites never
    are; a prime knot is when its table row says bridge_number 2."""
    if "#" in canon:
        return False
    name = canon[1:] if canon.startswith("m") else canon
    rec = table.get(name) if hasattr(table, "get") else table[name]
    return rec is not None and rec.bridge_number == 2


def _u_sum_exact(canon_j, canon_k, table):
    """Sum of unknotting numbers when known exactly for every summand."""
    total = 0
    for canon in (canon_j, canon_k):
        for part in canon.split(" # "):
            name = part[1:] if part.startswith("m") else part
            rec = table.get(name) if hasattr(table, "get") else None
            if rec is None or rec.u_min is None or rec.u_min != rec.u_max:
                return None
            total += rec.u_min
    return total


def summarize(rows, table):
    """Recompute the ScanSummary from finished rows."""
    s = ScanSummary()
    for row in rows:
        s.pairs_total += 1
        prime = _is_prime_expr(row["knotJ"]) and _is_prime_expr(row["knotK"])
        if prime:
            s.pairs_prime += 1
        if row["d1_status"] == "cap" or row["d2_status"] == "cap":
            s.pairs_capped += 1
        classical = [
            row["bound_sigma"],
            row["bound_s"],
            row["bound_tau"],
            row["bound_fp"],
        ]
        classical_known = all(v is not None for v in classical)
        if row["d1_status"] == "violated":
            s.d1_violated += 1
            both_2bridge = _is_two_bridge(row["knotJ"], table) and (
                _is_two_bridge(row["knotK"], table)
            )
            if (
                classical_known
                and max(classical) <= 1
                and not both_2bridge
            ):
                s.d1_beats_classical_all += 1
                if prime:
                    s.d1_beats_classical_prime += 1
                u_sum = _u_sum_exact(row["knotJ"], row["knotK"], table)
                if u_sum is not None and u_sum <= 2:
                    s.d1_exact_all += 1
                    if prime:
                        s.d1_exact_prime += 1
        if row["d2_status"] == "violated":
            s.d2_violated += 1
            if classical_known and max(classical) <= 2:
                s.d2_beats_classical_all += 1
                if prime:
                    s.d2_beats_classical_prime += 1
                u_sum = _u_sum_exact(row["knotJ"], row["knotK"], table)
                if u_sum is not None and u_sum <= 3:
                    s.d2_exact_all += 1
                    if prime:
                        s.d2_exact_prime += 1
    return s


def _format_cell(value):
    if value is None:
        return ""
    if value is True:
        return "true"
    if value is False:
        return "false"
    return str(value)


def emit_report(rows, summary, fmt="text", stream=None):
    """Serialize a scan deterministically.

    csv: one row per pair in the fixed column order (summary omitted so
    the output stays machine-readable).  json: rows plus summary with
    sorted keys.  text: human-readable rows and summary block.
    """
    import io as _io
    import json as _json

    out = stream or _io.StringIO()
    if fmt == "csv":
        out.write(",".join(SCAN_COLUMNS) + "\n")
        for row in rows:
            out.write(
                ",".join(_format_cell(row[c]) for c in SCAN_COLUMNS) + "\n"
            )
    elif fmt == "json":
        _json.dump(
            {"rows": rows, "summary": summary.to_dict()},
            out,
            indent=2,
            sort_keys=True,
        )
        out.write("\n")
    elif fmt == "text":
        for row in rows:
            bits = [
                f"{row['pair_key']}:",
                f"d1={row['d1_status']}",
                f"d2={row['d2_status']}",
                f"lower={row['lower']}",
                f"upper={_format_cell(row['upper']) or '?'}",
            ]
            out.write(" ".join(bits) + "\n")
        out.write("\n")
        for key, value in summary.to_dict().items():
            out.write(f"{key}: {value}\n")
    else:
        raise ArgumentError(f"unknown report format {fmt!r}")
    if stream is None:
        return out.getvalue()
    return None
