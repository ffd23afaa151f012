"""Command-line front end.

A thin HTTP client over the service: by default requests are dispatched
in-process against the FastAPI app (no network); `--server URL` points the
same commands at a running instance.  The `serve` subcommand starts one.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click
import httpx

FLIP_GUARD_ENV = "TEXC_FLIP_GUARD"


def _default_flip_guard():
    raw = os.environ.get(FLIP_GUARD_ENV)
    if raw is None:
        return 1000
    try:
        return int(raw)
    except ValueError:
        raise click.ClickException(
            f"{FLIP_GUARD_ENV} must be an integer, got {raw!r}"
        )


def _client(server):
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _fan_source(fan):
    """A built-in name is passed through; anything else is a JSON file path."""
    from .fans import BUILTIN_FANS

    if fan in BUILTIN_FANS:
        return fan
    path = Path(fan)
    if not path.exists():
        raise click.ClickException(
            f"{fan!r} is neither a built-in fan nor an existing file"
        )
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise click.ClickException(f"could not parse {fan}: {e}")


def _post(ctx, endpoint, payload):
    with _client(ctx.obj["server"]) as client:
        resp = client.post(endpoint, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except ValueError:
            detail = resp.text
        raise click.ClickException(f"{endpoint} failed: {detail}")
    return resp.json()


def _emit(data, out):
    text = json.dumps(data, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n")
        click.echo(f"wrote {out}")
    else:
        click.echo(text)


@click.group()
@click.option("--server", default=None, metavar="URL",
              help="Send requests to a running service instead of in-process.")
@click.pass_context
def main(ctx, server):
    """Toric stack toolkit: fans, minimal model program, cohomology,
    exceptional collections."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server


@main.command("check-fan")
@click.option("--fan", required=True, help="Built-in name or fan JSON path.")
@click.option("--seed", default=0, show_default=True,
              help="Seed for the completeness sampling directions.")
@click.option("--samples", default=200, show_default=True)
@click.option("--out", default=None, metavar="FILE")
@click.pass_context
def check_fan(ctx, fan, seed, samples, out):
    """Validate a fan: completeness, simpliciality, projectivity."""
    data = _post(ctx, "/check-fan", {
        "fan": _fan_source(fan), "seed": seed, "samples": samples,
    })
    _emit(data, out)
    if not data["valid"]:
        sys.exit(1)


@main.command()
@click.option("--fan", required=True)
@click.option("--out", default=None, metavar="FILE")
@click.pass_context
def walls(ctx, fan, out):
    """List walls with their normalized relations and contraction kinds."""
    data = _post(ctx, "/walls", {"fan": _fan_source(fan)})
    _emit(data, out)


@main.command()
@click.option("--fan", required=True)
@click.option("--trace", default=None, metavar="FILE",
              help="Write the ordered step log to a JSON file.")
@click.option("--flip-guard", default=None, type=int,
              help=f"Abort after this many flips (default 1000 or "
                   f"${FLIP_GUARD_ENV}).")
@click.option("--seed", default=0, show_default=True)
@click.pass_context
def mmp(ctx, fan, trace, flip_guard, seed):
    """Run the minimal model program and print the step log."""
    data = _post(ctx, "/mmp", {
        "fan": _fan_source(fan),
        "flip_guard": flip_guard if flip_guard is not None
        else _default_flip_guard(),
        "seed": seed,
    })
    _emit(data, trace)


@main.command()
@click.option("--fan", required=True)
@click.option("--k", "kvec", required=True,
              help="Divisor class, comma-separated integers, one per ray.")
@click.option("--method", default="weight", show_default=True,
              type=click.Choice(["weight", "cech"]))
@click.option("--out", default=None, metavar="FILE")
@click.pass_context
def cohom(ctx, fan, kvec, method, out):
    """Sheaf cohomology dimensions of a line-bundle class."""
    try:
        k = [int(x) for x in kvec.split(",")]
    except ValueError:
        raise click.ClickException("--k must be comma-separated integers")
    data = _post(ctx, "/cohom", {
        "fan": _fan_source(fan), "k": k, "method": method,
    })
    _emit(data, out)


@main.command()
@click.option("--fan", required=True)
@click.option("--out", default=None, metavar="FILE")
@click.option("--flip-guard", default=None, type=int)
@click.option("--seed", default=0, show_default=True)
@click.pass_context
def collection(ctx, fan, out, flip_guard, seed):
    """Build the exceptional collection for a fan."""
    data = _post(ctx, "/collection", {
        "fan": _fan_source(fan),
        "flip_guard": flip_guard if flip_guard is not None
        else _default_flip_guard(),
        "seed": seed,
    })
    _emit(data, out)


@main.command()
@click.option("--fan", required=True)
@click.option("--collection", "coll_path", required=True, metavar="FILE",
              help="Collection JSON (as written by the collection command).")
@click.option("--method", default="weight", show_default=True,
              type=click.Choice(["weight", "cech"]))
@click.option("--out", default=None, metavar="FILE")
@click.pass_context
def verify(ctx, fan, coll_path, method, out):
    """Verify a collection; exit code 0 only if no violations."""
    try:
        doc = json.loads(Path(coll_path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise click.ClickException(f"could not read {coll_path}: {e}")
    coll = doc.get("collection", doc)
    data = _post(ctx, "/verify", {
        "fan": _fan_source(fan), "collection": coll, "method": method,
    })
    _emit(data, out)
    click.echo(data["summary"], err=True)
    if data["report"]["violations"]:
        sys.exit(1)


@main.command()
@click.option("--fan", required=True)
@click.option("--out", default=None, metavar="FILE")
@click.option("--flip-guard", default=None, type=int)
@click.option("--method", default="weight", show_default=True,
              type=click.Choice(["weight", "cech"]))
@click.option("--seed", default=0, show_default=True)
@click.pass_context
def pipeline(ctx, fan, out, flip_guard, method, seed):
    """Full run: minimal model program, collection, verification."""
    data = _post(ctx, "/pipeline", {
        "fan": _fan_source(fan),
        "flip_guard": flip_guard if flip_guard is not None
        else _default_flip_guard(),
        "method": method,
        "seed": seed,
    })
    _emit(data, out)
    click.echo(data["summary"], err=True)
    if data["report"]["violations"]:
        sys.exit(1)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
def serve(host, port):
    """Start the HTTP service."""
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
