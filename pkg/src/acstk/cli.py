"""Command-line interface: a thin client over the service handlers.

Every subcommand builds a request model, runs the matching handler
in-process, and prints either a short human summary or (--json) the
byte-stable JSON artifact.  Exit codes: 0 success, 1 validation failure,
2 numerical failure, 3 search exhausted without a hit, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

import pydantic

from .algebra import catalog
from .emit import dumps_stable, profile_csv
from .errors import NumericalError, ValidationError
from .service import handlers, models

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2
EXIT_EXHAUSTED = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 64."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


@dataclass
class RunConfig:
    """A fully resolved CLI run: operation, request payload, output options."""

    op: str
    request: pydantic.BaseModel | None = None
    json_out: bool = False
    csv_path: str | None = None
    out_path: str | None = None
    params: dict = field(default_factory=dict)


def _read_json(path: str) -> dict | list:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path} is not valid JSON: {exc}") from None


def _model(cls, doc, what: str):
    try:
        return cls(**doc) if isinstance(doc, dict) else cls(doc)
    except pydantic.ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first["loc"]) or what
        raise ValidationError(f"{what}: invalid field {where}: {first['msg']}") from None
    except TypeError:
        raise ValidationError(f"{what}: expected a JSON object") from None


def _algebra_ref(value: str) -> models.AlgebraRef:
    """Catalog name if it resolves, else a path to an algebra document."""
    try:
        catalog(value)
        return value
    except ValidationError:
        pass
    if not os.path.exists(value):
        raise ValidationError(
            f"{value!r} is neither a catalog algebra nor an existing file"
        )
    return _model(models.AlgebraDoc, _read_json(value), f"algebra {value}")


def _acs_doc(path: str) -> models.AcsDoc:
    return _model(models.AcsDoc, _read_json(path), f"acs {path}")


def _curve_doc(path: str) -> models.CurveDoc:
    return _model(models.CurveDoc, _read_json(path), f"curve {path}")


def _patch_doc(path: str) -> models.PatchDoc:
    return _model(models.PatchDoc, _read_json(path), f"patch {path}")


def _samples(path: str) -> list[models.SamplePoint]:
    doc = _read_json(path)
    if isinstance(doc, dict) and "samples" in doc:
        doc = doc["samples"]
    if not isinstance(doc, list):
        raise ValidationError(f"{path}: samples must be a list of {{t, l}} objects")
    return [_model(models.SamplePoint, item, f"sample {pos}") for pos, item in enumerate(doc)]


def _interval(tokens: list[str]) -> tuple[float, float]:
    """Two numbers given as separate tokens or one comma-joined token.

    Use --interval=LO,HI when LO is negative; a bare leading dash reads
    as an option to argparse.
    """
    if len(tokens) == 1:
        tokens = tokens[0].split(",")
    try:
        if len(tokens) != 2:
            raise ValueError
        return float(tokens[0]), float(tokens[1])
    except ValueError:
        print(f"acstk: error: --interval expects LO HI or LO,HI, got {tokens!r}",
              file=sys.stderr)
        raise SystemExit(EXIT_USAGE) from None


def _add_tols(sub) -> None:
    sub.add_argument("--tol-rank-rel", type=float, default=1e-8,
                     help="relative singular value threshold (default 1e-8)")
    sub.add_argument("--tol-rank-abs", type=float, default=1e-12,
                     help="absolute singular value threshold (default 1e-12)")


def build_parser() -> _Parser:
    parser = _Parser(
        prog="acstk",
        description="Almost complex structures: Nijenhuis tensors, complex rank, "
                    "deformation curves, and first-order invariants.",
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def cmd(name: str, help_: str):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--json", action="store_true", help="print the JSON artifact")
        return p

    p = cmd("validate", "validate input documents")
    p.add_argument("--algebra", help="catalog name or algebra JSON path")
    p.add_argument("--acs", help="acs JSON path")
    p.add_argument("--curve", help="curve JSON path")
    p.add_argument("--patch", help="patch JSON path")

    p = cmd("rank", "pointwise complex rank of an invariant structure")
    p.add_argument("--algebra", required=True, help="catalog name or algebra JSON path")
    p.add_argument("--acs", required=True, help="acs JSON path")
    _add_tols(p)

    p = cmd("curve-scan", "rank profile of a deformation curve on a grid")
    p.add_argument("--algebra", required=True)
    p.add_argument("--curve", required=True, help="curve JSON path")
    p.add_argument("--grid", type=int, default=1001, help="grid points (default 1001)")
    p.add_argument("--csv", help="write the t,rank,sigma_k table to this path")
    _add_tols(p)

    p = cmd("curve-refine", "localize rank drops inside an interval")
    p.add_argument("--algebra", required=True)
    p.add_argument("--curve", required=True)
    p.add_argument("--k", type=int, required=True, help="rank level whose loss is localized")
    p.add_argument("--interval", nargs="+", required=True, metavar="LO[,HI]",
                   help="two numbers, space- or comma-separated")
    p.add_argument("--max-iter", type=int, default=40,
                   help="halvings: final width <= (hi-lo) * 2^-max_iter (default 40)")
    p.add_argument("--scan-n", type=int, default=256, help="initial scan intervals (default 256)")
    _add_tols(p)

    p = cmd("perturb", "search for a nearby structure of prescribed rank")
    p.add_argument("--algebra", required=True)
    p.add_argument("--acs", required=True)
    p.add_argument("--target-rank", type=int, required=True)
    p.add_argument("--eps", type=float, default=1e-3, help="c0 distance budget (default 1e-3)")
    p.add_argument("--trials", type=int, default=100, help="random directions (default 100)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the found acs JSON to this path")
    _add_tols(p)

    p = cmd("approx", "Bernstein curve approximation of sampled deformation data")
    p.add_argument("--j0", required=True, help="base acs JSON path")
    p.add_argument("--samples", required=True,
                   help="JSON path: list of {t, l} or {\"samples\": [...]}")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--out", help="write the curve JSON to this path")

    p = cmd("invariants", "h1 of the d + d^c complex, b1, and complex rank")
    p.add_argument("--algebra", required=True)
    p.add_argument("--acs", required=True)
    _add_tols(p)

    p = cmd("patch-rank", "minimum pointwise rank of a coordinate patch on a grid")
    p.add_argument("--patch", required=True, help="patch JSON path")
    p.add_argument("--per-axis", type=int, required=True, help="grid points per axis (>= 2)")
    _add_tols(p)

    p = cmd("catalog", "list built-in algebras or dump one")
    p.add_argument("--name", help="dump this algebra as JSON")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    """Resolve parsed arguments into a RunConfig with a request payload."""
    op = args.command
    if op == "validate":
        if not any([args.algebra, args.acs, args.curve, args.patch]):
            raise ValidationError("validate needs at least one of --algebra/--acs/--curve/--patch")
        req = models.ValidateRequest(
            algebra=_algebra_ref(args.algebra) if args.algebra else None,
            acs=_acs_doc(args.acs) if args.acs else None,
            curve=_curve_doc(args.curve) if args.curve else None,
            patch=_patch_doc(args.patch) if args.patch else None,
        )
        return RunConfig(op=op, request=req, json_out=args.json)
    if op == "rank":
        req = models.RankRequest(
            algebra=_algebra_ref(args.algebra), acs=_acs_doc(args.acs),
            tol_rank_rel=args.tol_rank_rel, tol_rank_abs=args.tol_rank_abs,
        )
        return RunConfig(op=op, request=req, json_out=args.json)
    if op == "curve-scan":
        req = models.CurveScanRequest(
            algebra=_algebra_ref(args.algebra), curve=_curve_doc(args.curve),
            grid=args.grid, tol_rank_rel=args.tol_rank_rel, tol_rank_abs=args.tol_rank_abs,
        )
        return RunConfig(op=op, request=req, json_out=args.json, csv_path=args.csv)
    if op == "curve-refine":
        req = models.CurveRefineRequest(
            algebra=_algebra_ref(args.algebra), curve=_curve_doc(args.curve),
            k=args.k, interval=_interval(args.interval),
            max_iter=args.max_iter, scan_n=args.scan_n,
            tol_rank_rel=args.tol_rank_rel, tol_rank_abs=args.tol_rank_abs,
        )
        return RunConfig(op=op, request=req, json_out=args.json)
    if op == "perturb":
        req = models.PerturbRequest(
            algebra=_algebra_ref(args.algebra), acs=_acs_doc(args.acs),
            target_rank=args.target_rank, eps=args.eps, trials=args.trials,
            seed=args.seed, tol_rank_rel=args.tol_rank_rel, tol_rank_abs=args.tol_rank_abs,
        )
        return RunConfig(op=op, request=req, json_out=args.json, out_path=args.out)
    if op == "approx":
        req = models.ApproxRequest(
            j0=_acs_doc(args.j0), samples=_samples(args.samples), degree=args.degree,
        )
        return RunConfig(op=op, request=req, json_out=args.json, out_path=args.out)
    if op == "invariants":
        req = models.InvariantsRequest(
            algebra=_algebra_ref(args.algebra), acs=_acs_doc(args.acs),
            tol_rank_rel=args.tol_rank_rel, tol_rank_abs=args.tol_rank_abs,
        )
        return RunConfig(op=op, request=req, json_out=args.json)
    if op == "patch-rank":
        req = models.PatchRankRequest(
            patch=_patch_doc(args.patch), per_axis=args.per_axis,
            tol_rank_rel=args.tol_rank_rel, tol_rank_abs=args.tol_rank_abs,
        )
        return RunConfig(op=op, request=req, json_out=args.json)
    if op == "catalog":
        return RunConfig(op=op, json_out=args.json, params={"name": args.name})
    raise ValidationError(f"unknown command {op!r}")


_HANDLERS = {
    "validate": handlers.handle_validate,
    "rank": handlers.handle_rank,
    "curve-scan": handlers.handle_curve_scan,
    "curve-refine": handlers.handle_curve_refine,
    "perturb": handlers.handle_perturb,
    "approx": handlers.handle_approx,
    "invariants": handlers.handle_invariants,
    "patch-rank": handlers.handle_patch_rank,
}


def execute(cfg: RunConfig) -> pydantic.BaseModel:
    """Run the handler for a resolved config, in-process."""
    if cfg.op == "catalog":
        return handlers.handle_catalog(cfg.params.get("name"))
    return _HANDLERS[cfg.op](cfg.request)


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def _human(cfg: RunConfig, resp) -> str:
    if cfg.op == "validate":
        return f"valid: {', '.join(resp.checked)}"
    if cfg.op == "rank":
        sv = ", ".join(_fmt(s) for s in resp.singular_values)
        return f"rank = {resp.rank}\nsingular values: [{sv}]"
    if cfg.op == "curve-scan":
        parts = [
            f"generic rank = {resp.generic_rank} on {len(resp.ts)} points",
            f"flagged {len(resp.flagged)} point(s), skipped {len(resp.skipped)}",
        ]
        if resp.exceptional:
            spans = "; ".join(f"[{_fmt(a)}, {_fmt(b)}]" for a, b in resp.exceptional)
            parts.append(f"exceptional intervals: {spans}")
        parts.append(f"semicontinuity check: {'ok' if resp.semicontinuity_ok else 'FAILED'}")
        return "\n".join(parts)
    if cfg.op == "curve-refine":
        if resp.diagnostic:
            return f"diagnostic: {resp.diagnostic}"
        if not resp.intervals:
            return "no rank drops found in the interval"
        spans = "\n".join(
            f"  [{a!r}, {b!r}]  (width {_fmt(b - a)})" for a, b in resp.intervals
        )
        return f"localized {len(resp.intervals)} interval(s):\n{spans}"
    if cfg.op == "perturb":
        if not resp.found:
            return (f"no structure of rank >= {cfg.request.target_rank} found within "
                    f"eps after {resp.trials_run} trial(s)")
        return (f"found rank {resp.rank} at distance {_fmt(resp.distance)} "
                f"(trial {resp.trial}, t = {_fmt(resp.t)})")
    if cfg.op == "approx":
        r = resp.report
        return (f"degree {r.degree}: sup error {_fmt(r.sup_error)}, "
                f"endpoint errors ({_fmt(r.endpoint_error_0)}, {_fmt(r.endpoint_error_1)}), "
                f"curve c0 distance {_fmt(r.curve_c0_distance)}, "
                f"max coefficient {_fmt(r.max_coeff)}")
    if cfg.op == "invariants":
        return (f"h1_ddc = {resp.h1_ddc}  (method A = {resp.method_a}, "
                f"method B = {resp.method_b}, {resp.scope})\n"
                f"b1 = {resp.b1}\nrank = {resp.rank}")
    if cfg.op == "patch-rank":
        point = ", ".join(_fmt(x) for x in resp.argmin)
        return (f"min rank = {resp.k_min} over {resp.points} grid points\n"
                f"attained at x = ({point}), grid index {list(resp.argmin_index)}")
    if cfg.op == "catalog":
        if resp.algebra is not None:
            return dumps_stable(resp.algebra.model_dump())
        return "\n".join(resp.names)
    return str(resp)


def emit_report(cfg: RunConfig, resp) -> str:
    """Artifact text for a finished run: stable JSON or a human summary."""
    if cfg.json_out:
        return dumps_stable(resp.model_dump())
    return _human(cfg, resp)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if args.command == "serve":
        import uvicorn

        from .service.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return EXIT_OK
    try:
        cfg = make_config(args)
        resp = execute(cfg)
        if cfg.csv_path is not None and cfg.op == "curve-scan":
            with open(cfg.csv_path, "w", encoding="utf-8") as fh:
                fh.write(profile_csv(resp.ts, resp.ranks, resp.sigma_k))
        if cfg.out_path is not None:
            doc = None
            if cfg.op == "perturb" and resp.acs is not None:
                doc = resp.acs.model_dump()
            elif cfg.op == "approx":
                doc = resp.curve.model_dump()
            if doc is not None:
                with open(cfg.out_path, "w", encoding="utf-8") as fh:
                    fh.write(dumps_stable(doc) + "\n")
        print(emit_report(cfg, resp))
        if cfg.op == "perturb" and not resp.found:
            return EXIT_EXHAUSTED
        return EXIT_OK
    except ValidationError as exc:
        print(f"acstk: validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalError as exc:
        print(f"acstk: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
