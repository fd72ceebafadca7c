"""FastAPI application wrapping the core toolkit.

All computation lives in the core modules; the service adds transport,
schemas, and a uniform error envelope {"error": {"type", "message"}}
whose type field lets clients map failures back to the exact core
error class.
"""

from fastapi import FastAPI, Query
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import (
    ArgumentError,
    CapExceededError,
    GordianError,
    ParseError,
    ShapeError,
    SingularMatrixError,
    UnknownKnotError,
    ValidationError,
)
from ..ingest import InvariantCache, default_table_path, load_table
from ..knots import (
    canonical_expr,
    fp_rank,
    knot_det,
    knot_signature,
    parse_expr,
    seifert_matrix,
    symmetrized,
)
from ..linkform import DEFAULT_GROUP_CAP, LinkingForm
from ..obstruct import (
    _odd_prime_factors,
    _summand_invariant,
    _u_range,
    candidate_matrices,
    report,
)
from ..scan import ScanOptions, scan_pairs
from . import schemas

_STATUS_CODES = {
    ParseError: 400,
    UnknownKnotError: 404,
    ValidationError: 422,
    ArgumentError: 422,
    ShapeError: 422,
    SingularMatrixError: 422,
    CapExceededError: 422,
}


def _error_payload(exc):
    payload = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ParseError) and exc.offset is not None:
        payload["offset"] = exc.offset
    if isinstance(exc, ValidationError) and exc.details:
        payload["details"] = exc.details
    if isinstance(exc, CapExceededError):
        payload["order"] = exc.order
        payload["cap"] = exc.cap
    return {"error": payload}


def create_app(table_path=None, cache_path=None, cap=DEFAULT_GROUP_CAP):
    """Build the service around one loaded table and optional cache."""
    table_path = table_path or default_table_path()
    table = load_table(table_path)
    cache = InvariantCache(cache_path) if cache_path else None

    app = FastAPI(title="gordian", version=__version__)

    @app.exception_handler(GordianError)
    async def _handle_gordian(request, exc):
        status = 500
        for cls, code in _STATUS_CODES.items():
            if isinstance(exc, cls):
                status = code
                break
        return JSONResponse(status_code=status, content=_error_payload(exc))

    @app.get("/healthz", response_model=schemas.HealthResponse)
    def healthz():
        return {"status": "ok"}

    @app.get("/knots", response_model=schemas.KnotsResponse)
    def knots():
        out = []
        for name in table.names():
            rec = table[name]
            out.append(
                {
                    "name": rec.name,
                    "crossing_number": rec.crossing_number,
                    "determinant": rec.determinant,
                    "signature": rec.sigma,
                    "s": rec.s,
                    "tau": rec.tau,
                    "u_min": rec.u_min,
                    "u_max": rec.u_max,
                    "alternating": rec.alternating,
                    "bridge_number": rec.bridge_number,
                }
            )
        return {"table_digest": table.digest, "knots": out}

    @app.get("/info", response_model=schemas.InfoResponse)
    def info(expr: str = Query(...)):
        parsed = parse_expr(expr)
        A = seifert_matrix(parsed, table)
        form = LinkingForm.from_symmetric(symmetrized(A))
        u = _u_range(parsed, table)
        d = knot_det(A)
        return {
            "expr": expr,
            "canonical": canonical_expr(parsed),
            "determinant": d,
            "signature": knot_signature(A),
            "s": _summand_invariant(parsed, table, "s"),
            "tau": _summand_invariant(parsed, table, "tau"),
            "u_min": u[0] if u else None,
            "u_max": u[1] if u else None,
            "group_order": form.group_order,
            "orders": list(form.orders),
            "gram": form.to_payload()["gram"],
            "fp_ranks": {p: fp_rank(A, p) for p in _odd_prime_factors(d)},
        }

    @app.post("/bound", response_model=schemas.BoundResponse)
    def bound(req: schemas.BoundRequest):
        rep = report(
            req.expr_j,
            req.expr_k,
            table,
            eps=req.eps,
            cap=req.cap if req.cap is not None else cap,
        )
        return rep.to_dict()

    @app.get("/candidates", response_model=schemas.CandidatesResponse)
    def candidates(d: int = Query(...)):
        # both determinant signs: a distance-two factorization may use
        # either orientation, so the usable list is the union
        cands = sorted(candidate_matrices(d) + candidate_matrices(-d))
        return {
            "d": d,
            "candidates": [
                {"a": c.a, "b": c.b, "c": c.c, "matrix": c.matrix()}
                for c in cands
            ],
        }

    @app.post("/scan", response_model=schemas.ScanResponse)
    def scan(req: schemas.ScanRequest):
        options = ScanOptions(
            max_composite_crossings=req.max_composite_crossings,
            cap=req.cap if req.cap is not None else cap,
            jobs=req.jobs,
            eps=req.eps,
        )
        rows, summary = scan_pairs(table, options, cache=cache)
        return {"rows": rows, "summary": summary.to_dict()}

    app.state.table = table
    app.state.cache = cache
    return app
