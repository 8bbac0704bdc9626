"""Command-line client for the solver service.

Every subcommand is a thin HTTP client: it builds a request, sends it to
the service, and renders the response.  By default the service runs
in-process (no server needed); pass ``--server URL`` to talk to a remote
instance started with ``ceopt serve``.

Exit codes: 0 success, 1 failed verification or unexpected error,
2 parse/usage error, 3 nonconvergence, 4 resource limit exceeded,
5 undefined price-of-anarchy ratio.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys

import httpx

from .jsonio import canonical_dumps

_EXIT_BY_KIND = {
    "parse-error": 2,
    "unsupported-structure": 2,
    "invalid-argument": 2,
    "nonconvergence": 3,
    "resource-limit": 4,
    "undefined-ratio": 5,
}

_TIMEOUT = 600.0


def _call(server: str | None, path: str, payload: dict) -> tuple[int, dict]:
    if server:
        with httpx.Client(base_url=server, timeout=_TIMEOUT) as client:
            resp = client.post(path, json=payload)
        return resp.status_code, resp.json()

    async def in_process():
        from .service import create_app

        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(
            transport=transport, base_url="http://ceopt.local", timeout=_TIMEOUT
        ) as client:
            return await client.post(path, json=payload)

    resp = asyncio.run(in_process())
    return resp.status_code, resp.json()


def _fail(status: int, body) -> int:
    if isinstance(body, dict) and "error_kind" in body:
        print(f"error ({body['error_kind']}): {body.get('detail', '')}", file=sys.stderr)
        return _EXIT_BY_KIND.get(body["error_kind"], 1)
    print(f"error (HTTP {status}): {body}", file=sys.stderr)
    return 2 if status == 422 else 1


def _load_json(path: str, what: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        print(f"cannot read {what} {path}: {exc}", file=sys.stderr)
        return None
    if not isinstance(doc, dict):
        print(f"{what} {path} is not a JSON object", file=sys.stderr)
        return None
    return doc


def _emit(doc: dict, out: str | None) -> None:
    text = canonical_dumps(doc)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_weights(text: str | None):
    if text is None:
        return None
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        return "bad"


def _options(args) -> dict:
    opts = {
        "method": args.method,
        "oracle": args.oracle,
        "tol": args.tol,
        "penalty_doublings": args.penalty_doublings,
        "profile_cap": args.profile_cap,
    }
    if args.max_iters is not None:
        opts["max_iterations"] = args.max_iters
    return opts


def cmd_solve(args) -> int:
    game = _load_json(args.game, "game file")
    if game is None:
        return 2
    weights = _parse_weights(args.weights)
    if weights == "bad":
        print("--weights must be comma-separated numbers", file=sys.stderr)
        return 2
    payload = {
        "game": game,
        "concept": args.concept,
        "direction": args.direction,
        "weights": weights,
        "options": _options(args),
    }
    status, body = _call(args.server, "/solve", payload)
    if status != 200:
        return _fail(status, body)
    _emit(body, args.out)
    return 0


def cmd_verify(args) -> int:
    game = _load_json(args.game, "game file")
    solution = _load_json(args.solution, "solution file")
    if game is None or solution is None:
        return 2
    payload = {"game": game, "solution": solution, "tol": args.tol}
    status, body = _call(args.server, "/verify", payload)
    if status != 200:
        return _fail(status, body)
    _emit(body, args.out)
    return 0 if body.get("ok") else 1


def cmd_poa(args) -> int:
    game = _load_json(args.game, "game file")
    if game is None:
        return 2
    payload = {
        "game": game,
        "concept": args.concept,
        "options": _options(args),
    }
    status, body = _call(args.server, "/poa", payload)
    if status != 200:
        return _fail(status, body)
    _emit(body, args.out)
    return 0


def cmd_gen(args) -> int:
    payload = {
        "kind": args.kind,
        "seed": args.seed,
        "players": args.players,
        "actions": args.actions,
    }
    status, body = _call(args.server, "/generate", payload)
    if status != 200:
        return _fail(status, body)
    _emit(body, args.out)
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("ceopt.service:app", host=args.host, port=args.port)
    return 0


def _add_solver_flags(sub) -> None:
    sub.add_argument("--method", choices=["colgen", "full"], default="colgen")
    sub.add_argument(
        "--oracle",
        choices=["auto", "bruteforce", "tree", "scg-symmetric"],
        default="auto",
    )
    sub.add_argument("--tol", type=float, default=1e-7, help="pricing slack")
    sub.add_argument("--max-iters", type=int, default=None)
    sub.add_argument("--penalty-doublings", type=int, default=6)
    sub.add_argument("--profile-cap", type=int, default=10**6)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ceopt",
        description="Optimal correlated / coarse correlated equilibria "
        "of compactly represented games.",
    )
    parser.add_argument(
        "--server", default=None, help="URL of a running service (default: in-process)"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="compute an optimal equilibrium")
    solve.add_argument("game", help="path to a game JSON file")
    solve.add_argument("--concept", choices=["ce", "cce", "maxmin"], default="ce")
    solve.add_argument("--direction", choices=["max", "min"], default="max")
    solve.add_argument("--weights", default=None, help="comma-separated player weights")
    _add_solver_flags(solve)
    solve.add_argument("--out", default=None, help="write the solution here")
    solve.set_defaults(func=cmd_solve)

    verify = commands.add_parser("verify", help="check a solution file")
    verify.add_argument("game")
    verify.add_argument("solution")
    verify.add_argument("--tol", type=float, default=1e-7)
    verify.add_argument("--out", default=None)
    verify.set_defaults(func=cmd_verify)

    poa = commands.add_parser("poa", help="price of anarchy")
    poa.add_argument("game")
    poa.add_argument("--concept", choices=["ce", "cce"], default="ce")
    _add_solver_flags(poa)
    poa.add_argument("--out", default=None)
    poa.set_defaults(func=cmd_poa)

    gen = commands.add_parser("gen", help="generate a random game file")
    gen.add_argument(
        "--kind",
        choices=["normal-form", "tree-polymatrix", "singleton-congestion"],
        required=True,
    )
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--players", type=int, default=3)
    gen.add_argument("--actions", type=int, default=2)
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=cmd_gen)

    serve = commands.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    serve.set_defaults(func=cmd_serve)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
