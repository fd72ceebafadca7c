"""Command-line client for the knot-distance service.

The CLI never computes anything itself: every command talks HTTP to the
FastAPI app, either in-process (the default) or to a running server via
--server / GORDIAN_SERVER.  Exit codes: 0 success, 1 parse or usage
error, 2 data or validation error, 3 group-order cap exceeded.
"""

import json
import sys
from contextlib import contextmanager

import click
import httpx

from .linkform import DEFAULT_GROUP_CAP
from .scan import ScanSummary, emit_report
from .service import create_app

_EXIT_CODES = {
    "ParseError": 1,
    "UnknownKnotError": 2,
    "ValidationError": 2,
    "ArgumentError": 2,
    "ShapeError": 2,
    "SingularMatrixError": 2,
    "InapplicableError": 2,
    "CapExceededError": 3,
}

_EPS_CHOICES = {"both": None, "+1": 1, "-1": -1, "1": 1}


class CliFailure(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


@contextmanager
def _client(cfg):
    if cfg["server"]:
        with httpx.Client(base_url=cfg["server"], timeout=600.0) as client:
            yield client
    else:
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            from fastapi.testclient import TestClient

        app = create_app(
            table_path=cfg["table"],
            cache_path=cfg["cache"],
            cap=cfg["cap"],
        )
        with TestClient(app, base_url="http://gordian.internal") as client:
            yield client


def _call(client, method, path, **kw):
    try:
        response = client.request(method, path, **kw)
    except httpx.HTTPError as exc:
        raise CliFailure(f"cannot reach service: {exc}", 2) from exc
    if response.status_code < 400:
        return response.json()
    try:
        body = response.json()
    except ValueError:
        raise CliFailure(
            f"service error {response.status_code}: {response.text}", 2
        ) from None
    if "error" in body:
        err = body["error"]
        code = _EXIT_CODES.get(err.get("type"), 2)
        raise CliFailure(err.get("message", "unknown error"), code)
    return_detail = body.get("detail")
    raise CliFailure(f"invalid request: {return_detail}", 2)


@click.group()
@click.option(
    "--table",
    envvar="GORDIAN_TABLE",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="Knot table CSV/TSV (default: the bundled table).",
)
@click.option(
    "--cache",
    envvar="GORDIAN_CACHE",
    type=click.Path(dir_okay=False),
    default=None,
    help="JSON cache file for scan results.",
)
@click.option(
    "--cap",
    envvar="GORDIAN_CAP",
    type=int,
    default=DEFAULT_GROUP_CAP,
    show_default=True,
    help="Largest homology group order to enumerate.",
)
@click.option(
    "--server",
    envvar="GORDIAN_SERVER",
    default=None,
    help="URL of a running service; default runs the app in-process.",
)
@click.pass_context
def cli(ctx, table, cache, cap, server):
    """Exact linking-form bounds on the Gordian distance of knots."""
    ctx.obj = {"table": table, "cache": cache, "cap": cap, "server": server}


@cli.command()
@click.argument("expr")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_obj
def info(cfg, expr, fmt):
    """Invariants and linking form of one knot expression."""
    with _client(cfg) as client:
        data = _call(client, "GET", "/info", params={"expr": expr})
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
        return
    click.echo(f"expression: {data['expr']}")
    click.echo(f"canonical: {data['canonical']}")
    click.echo(f"determinant: {data['determinant']}")
    click.echo(f"signature: {data['signature']}")
    for label in ("s", "tau", "u_min", "u_max"):
        value = data[label]
        click.echo(f"{label}: {'?' if value is None else value}")
    click.echo(f"homology order: {data['group_order']}")
    orders = data["orders"]
    click.echo(
        "homology: "
        + (" + ".join(f"Z/{d}" for d in orders) if orders else "trivial")
    )
    for i, row in enumerate(data["gram"]):
        click.echo(f"linking gram[{i}]: {' '.join(row)}")
    for p, rank in sorted(data["fp_ranks"].items(), key=lambda kv: int(kv[0])):
        click.echo(f"F_{p} rank: {rank}")


@cli.command()
@click.argument("expr_j")
@click.argument("expr_k")
@click.option(
    "--eps",
    type=click.Choice(sorted(_EPS_CHOICES)),
    default="both",
    show_default=True,
    help="Restrict the distance-one test to one sign.",
)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_obj
def bound(cfg, expr_j, expr_k, eps, fmt):
    """Distance bounds for a pair of knot expressions."""
    payload = {
        "expr_j": expr_j,
        "expr_k": expr_k,
        "eps": _EPS_CHOICES[eps],
        "cap": cfg["cap"],
    }
    with _client(cfg) as client:
        data = _call(client, "POST", "/bound", json=payload)
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
        return
    click.echo(f"pair: {data['canonical_j']} vs {data['canonical_k']}")
    click.echo(f"verdict: {data['verdict']}")
    click.echo(f"lower bound: {data['lower']} (from {data['lower_source']})")
    upper = data["upper"]
    click.echo(f"upper bound: {'?' if upper is None else upper}")
    b = data["bounds"]
    click.echo(
        "classical bounds: "
        f"sigma {b['sigma_bound']}, "
        f"s {'?' if b['s_bound'] is None else b['s_bound']}, "
        f"tau {'?' if b['tau_bound'] is None else b['tau_bound']}, "
        f"F_p {b['fp_bound']}"
        + (f" (p = {b['fp_best_p']})" if b["fp_best_p"] else "")
    )
    for kind in ("d1", "d2"):
        status = data[f"{kind}_status"]
        detail = data[f"{kind}_detail"]
        line = f"{kind} obstruction: {status}"
        notes = detail.get("notes")
        if notes:
            line += f" ({notes})"
        witness = detail.get("witness")
        if witness:
            line += f" witness {json.dumps(witness, sort_keys=True)}"
        click.echo(line)


@cli.command()
@click.argument("d", type=int)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@click.pass_obj
def candidates(cfg, d, fmt):
    """Candidate 2x2 intersection forms of determinant D."""
    with _client(cfg) as client:
        data = _call(client, "GET", "/candidates", params={"d": d})
    if fmt == "json":
        click.echo(json.dumps(data, indent=2, sort_keys=True))
        return
    cands = data["candidates"]
    click.echo(f"{len(cands)} candidate(s) of determinant +-{abs(data['d'])}")
    for c in cands:
        click.echo(f"[[{c['a']}, {c['c']}], [{c['c']}, {c['b']}]]")


@cli.command()
@click.option(
    "--max-composite-crossings",
    type=int,
    default=0,
    show_default=True,
    help="Include connected sums up to this total crossing number.",
)
@click.option(
    "--jobs",
    envvar="GORDIAN_JOBS",
    type=int,
    default=1,
    show_default=True,
    help="Worker processes for the scan.",
)
@click.option(
    "--eps",
    type=click.Choice(sorted(_EPS_CHOICES)),
    default="both",
    show_default=True,
)
@click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json", "csv"]),
    default="text",
)
@click.pass_obj
def scan(cfg, max_composite_crossings, jobs, eps, fmt):
    """Scan all knot pairs in the table; csv keeps rows on stdout and
    the summary on stderr."""
    payload = {
        "max_composite_crossings": max_composite_crossings,
        "jobs": jobs,
        "eps": _EPS_CHOICES[eps],
        "cap": cfg["cap"],
    }
    with _client(cfg) as client:
        data = _call(client, "POST", "/scan", json=payload)
    summary = ScanSummary(**data["summary"])
    if fmt == "csv":
        click.echo(emit_report(data["rows"], summary, fmt="csv"), nl=False)
        for key, value in summary.to_dict().items():
            click.echo(f"{key}: {value}", err=True)
    else:
        click.echo(emit_report(data["rows"], summary, fmt=fmt), nl=False)


@cli.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.pass_obj
def serve(cfg, host, port):
    """Run the HTTP service."""
    import uvicorn

    app = create_app(
        table_path=cfg["table"], cache_path=cfg["cache"], cap=cfg["cap"]
    )
    uvicorn.run(app, host=host, port=port)


def main(argv=None):
    from .errors import GordianError

    try:
        cli.main(args=argv, standalone_mode=False)
    except CliFailure as exc:
        click.echo(f"error: {exc}", err=True)
        return exc.code
    except GordianError as exc:
        click.echo(f"error: {exc}", err=True)
        return _EXIT_CODES.get(type(exc).__name__, 2)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        exc.show()
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
