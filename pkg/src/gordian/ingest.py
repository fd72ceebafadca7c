"""Knot-table loading, validation, and the invariant cache.

Tables are CSV or TSV (delimiter sniffed from the header line) with one
knot per row.  Required columns: name, seifert_matrix.  Recognized
optional columns: crossing_number, determinant, signature, s_invariant,
tau_invariant, unknotting_number (single value or "lo..hi" range),
alternating (Y/N), bridge_number.  Unrecognized columns are preserved
verbatim in each record's extras.

Stated determinant and signature columns are cross-checked against the
values computed from the Seifert matrix; any mismatch fails the whole
load with a per-row error list.  Missing s/tau are filled for
alternating knots via s = -sigma, tau = -sigma/2.
"""

import csv
import hashlib
import io
import json
import logging
import os
import re
import tempfile
from dataclasses import dataclass, field

from .errors import ParseError, UnknownKnotError, ValidationError
from .knots import knot_det, knot_signature, validate_seifert

log = logging.getLogger(__name__)

CACHE_VERSION = 1

_KNOWN_COLUMNS = (
    "name",
    "seifert_matrix",
    "crossing_number",
    "determinant",
    "signature",
    "s_invariant",
    "tau_invariant",
    "unknotting_number",
    "alternating",
    "bridge_number",
)


def parse_matrix_literal(text):
    """Parse a nested integer-list literal like "[[0,1],[1,0]]".

    Rows must be nonempty and of equal length; "[]" is the empty matrix.
    Errors carry the offset of the first bad character.

    >>> parse_matrix_literal(" [[-1, 1], [0, -1]] ")
    [[-1, 1], [0, -1]]
    >>> parse_matrix_literal("[]")
    []
    >>> parse_matrix_literal("[[1],[2,3]]")
    Traceback (most recent call last):
        ...
    gordian.errors.ParseError: row 2 has 2 entries, expected 1 (at offset 5)
    >>> parse_matrix_literal("[[]]")
    Traceback (most recent call last):
        ...
    gordian.errors.ParseError: empty row (at offset 1)
    """
    pos = 0
    n = len(text)

    def skip_ws():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def expect(ch):
        nonlocal pos
        skip_ws()
        if pos >= n or text[pos] != ch:
            found = text[pos] if pos < n else "end of input"
            raise ParseError(f"expected {ch!r}, found {found!r}", offset=pos)
        pos += 1

    def parse_int():
        nonlocal pos
        skip_ws()
        m = re.compile(r"-?\d+").match(text, pos)
        if not m:
            found = text[pos] if pos < n else "end of input"
            raise ParseError(f"expected an integer, found {found!r}", offset=pos)
        pos = m.end()
        return int(m.group(0))

    def parse_row():
        nonlocal pos
        start = pos
        expect("[")
        skip_ws()
        if pos < n and text[pos] == "]":
            raise ParseError("empty row", offset=start)
        entries = [parse_int()]
        while True:
            skip_ws()
            if pos < n and text[pos] == ",":
                pos += 1
                entries.append(parse_int())
            else:
                break
        expect("]")
        return entries

    expect("[")
    skip_ws()
    rows = []
    if pos < n and text[pos] == "]":
        pos += 1
    else:
        row_start = pos
        rows.append(parse_row())
        while True:
            skip_ws()
            if pos < n and text[pos] == ",":
                pos += 1
                skip_ws()
                row_start = pos
                row = parse_row()
                if len(row) != len(rows[0]):
                    raise ParseError(
                        f"row {len(rows) + 1} has {len(row)} entries, "
                        f"expected {len(rows[0])}",
                        offset=row_start,
                    )
                rows.append(row)
            else:
                break
        expect("]")
    skip_ws()
    if pos != n:
        raise ParseError(f"trailing characters {text[pos:]!r}", offset=pos)
    return rows


@dataclass
class KnotRecord:
    """One validated table row.

    determinant and sigma are always the values computed from the
    Seifert matrix; stated columns only cross-check them.  s, tau,
    u_min/u_max, crossing_number, and bridge_number are None when the
    table does not provide them.
    """

    name: str
    seifert: list
    determinant: int
    sigma: int
    crossing_number: int = None
    s: int = None
    tau: int = None
    u_min: int = None
    u_max: int = None
    alternating: bool = None
    bridge_number: int = None
    extras: dict = field(default_factory=dict)


def _natural_key(name):
    m = re.fullmatch(r"(\d+)_(\d+)", name)
    if m:
        return (0, int(m.group(1)), int(m.group(2)), name)
    return (1, 0, 0, name)


class KnotTable:
    """Mapping from knot name to KnotRecord, with source path and digest."""

    def __init__(self, records, digest, path=None):
        self.records = dict(records)
        self.digest = digest
        self.path = path

    def __getitem__(self, name):
        try:
            return self.records[name]
        except KeyError:
            raise UnknownKnotError(f"unknown knot {name!r}") from None

    def get(self, name, default=None):
        return self.records.get(name, default)

    def __contains__(self, name):
        return name in self.records

    def __len__(self):
        return len(self.records)

    def names(self):
        return sorted(self.records, key=_natural_key)


def _parse_bool(raw):
    low = raw.strip().lower()
    if low in ("y", "yes", "true", "1"):
        return True
    if low in ("n", "no", "false", "0"):
        return False
    raise ValueError(f"cannot read {raw!r} as yes/no")


def _parse_u_range(raw):
    raw = raw.strip()
    if ".." in raw:
        lo_s, hi_s = raw.split("..", 1)
        lo, hi = int(lo_s), int(hi_s)
    else:
        lo = hi = int(raw)
    if lo < 0 or hi < lo:
        raise ValueError(f"bad unknotting range {raw!r}")
    return lo, hi


def load_table(path):
    """Load and fully validate a knot table; any failure is collective.

    Returns a KnotTable whose digest is the sha256 of the file bytes.
    Raises ValidationError carrying one detail line per offending row.
    """
    with open(path, "rb") as f:
        raw = f.read()
    digest = hashlib.sha256(raw).hexdigest()
    text = raw.decode("utf-8-sig")
    header_line = text.splitlines()[0] if text.strip() else ""
    delimiter = "\t" if "\t" in header_line else ","
    reader = csv.DictReader(io.StringIO(text), delimiter=delimiter)
    fieldnames = reader.fieldnames or []
    missing = [c for c in ("name", "seifert_matrix") if c not in fieldnames]
    if missing:
        raise ValidationError(
            f"table {path} lacks required column(s): {', '.join(missing)}",
            details=[f"columns present: {fieldnames}"],
        )

    records = {}
    failures = []
    for line_no, row in enumerate(reader, start=2):
        name = (row.get("name") or "").strip()
        if not name and not any((v or "").strip() for v in row.values()):
            continue

        def fail(msg):
            failures.append(f"line {line_no} ({name or '?'}): {msg}")

        if not name:
            fail("missing name")
            continue
        if name in records:
            fail("duplicate name")
            continue
        try:
            seifert = parse_matrix_literal(row.get("seifert_matrix") or "")
            validate_seifert(seifert)
        except (ParseError, ValidationError) as exc:
            fail(f"seifert_matrix: {exc}")
            continue
        rec = KnotRecord(
            name=name,
            seifert=seifert,
            determinant=knot_det(seifert),
            sigma=knot_signature(seifert),
        )
        for col, attr, conv, check in (
            ("crossing_number", "crossing_number", int, lambda v: v >= 0),
            ("determinant", None, int, lambda v: v == rec.determinant),
            ("signature", None, int, lambda v: v == rec.sigma),
            ("s_invariant", "s", int, lambda v: v % 2 == 0),
            ("tau_invariant", "tau", int, lambda v: True),
            ("bridge_number", "bridge_number", int, lambda v: v >= 1),
        ):
            raw_val = (row.get(col) or "").strip()
            if not raw_val:
                continue
            try:
                value = conv(raw_val)
            except ValueError:
                fail(f"{col}: cannot read {raw_val!r}")
                continue
            if not check(value):
                if col == "determinant":
                    fail(
                        f"determinant {value} contradicts computed "
                        f"{rec.determinant}"
                    )
                elif col == "signature":
                    fail(f"signature {value} contradicts computed {rec.sigma}")
                else:
                    fail(f"{col}: {value} out of range")
                continue
            if attr:
                setattr(rec, attr, value)
        raw_val = (row.get("alternating") or "").strip()
        if raw_val:
            try:
                rec.alternating = _parse_bool(raw_val)
            except ValueError as exc:
                fail(f"alternating: {exc}")
        raw_val = (row.get("unknotting_number") or "").strip()
        if raw_val:
            try:
                rec.u_min, rec.u_max = _parse_u_range(raw_val)
            except ValueError as exc:
                fail(f"unknotting_number: {exc}")
        rec.extras = {
            k: v
            for k, v in row.items()
            if k not in _KNOWN_COLUMNS and v not in (None, "")
        }
        if rec.alternating:
            if rec.s is None:
                rec.s = -rec.sigma
            if rec.tau is None:
                assert rec.sigma % 2 == 0
                rec.tau = -rec.sigma // 2
        records[name] = rec
    if failures:
        raise ValidationError(
            f"table {path} failed validation ({len(failures)} error(s))",
            details=failures,
        )
    return KnotTable(records, digest=digest, path=str(path))


def default_table_path():
    """Path of the bundled knot table."""
    here = os.path.dirname(os.path.abspath(__file__))
    return os.path.join(here, "data", "knots.csv")


class InvariantCache:
    """Versioned JSON store for computed results, keyed by table digest
    plus a caller-chosen key.  A corrupt or stale file is discarded with
    a warning and rebuilt, never trusted.
    """

    def __init__(self, path=None):
        self.path = path
        self.entries = {}
        self.dirty = False
        if path and os.path.exists(path):
            try:
                with open(path, "r", encoding="utf-8") as f:
                    payload = json.load(f)
                if payload.get("version") != CACHE_VERSION:
                    raise ValueError(
                        f"cache version {payload.get('version')!r}, "
                        f"expected {CACHE_VERSION}"
                    )
                entries = payload["entries"]
                if not isinstance(entries, dict):
                    raise ValueError("entries is not an object")
                self.entries = entries
            except (OSError, ValueError, KeyError) as exc:
                log.warning("discarding unusable cache %s: %s", path, exc)
                self.entries = {}

    @staticmethod
    def key(digest, name):
        return f"{digest}:{name}"

    def get(self, digest, name):
        return self.entries.get(self.key(digest, name))

    def put(self, digest, name, value):
        self.entries[self.key(digest, name)] = value
        self.dirty = True

    def save(self):
        if not self.path or not self.dirty:
            return
        payload = {"version": CACHE_VERSION, "entries": self.entries}
        directory = os.path.dirname(os.path.abspath(self.path))
        os.makedirs(directory, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                json.dump(payload, f, sort_keys=True)
            os.replace(tmp, self.path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        self.dirty = False
