"""Command-line front end: ``anss-q2 {e2,delta,jpow,verify,greek}``.

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 internal consistency failure (FormulaMismatch or LiftFailure).
Output goes to stdout unless ``--out`` is given; a relative ``--out`` is
resolved against ``$ANSS_Q2_OUTPUT_DIR`` when that variable is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .connecting import analyze_block, build_block, delta0_column, delta1_on_jpow
from .errors import FormulaMismatch, InvalidIndex, LiftFailure
from .spectral import SCHEMA, ExtData, assemble_E2, greek_report, greek_text, json_chart, text_chart
from .verify import SUITES, run_suite

OUTPUT_DIR_ENV = "ANSS_Q2_OUTPUT_DIR"


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    t_min: int = 0
    t_max: int = 16
    s_max: int = 2
    window_columns: int | None = None
    modulus_slack: int = 2
    format: str = "text"
    ext_data_path: str | None = None
    seed: int = 0

    def validate(self):
        if self.t_min > self.t_max:
            raise ConfigError("--t-min must not exceed --t-max")
        if self.window_columns is not None and self.window_columns < 8:
            raise ConfigError("--window must be at least 8")
        if self.s_max < 0:
            raise ConfigError("--s-max must be non-negative")
        if self.format not in ("json", "csv", "text"):
            raise ConfigError(f"unknown format {self.format!r}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="anss-q2", description=__doc__.splitlines()[0])
    p.add_argument("--out", help="write output to this file instead of stdout")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e2 = sub.add_parser("e2", help="E2 chart over a t-range")
    e2.add_argument("--t-min", type=int, default=0)
    e2.add_argument("--t-max", type=int, default=16)
    e2.add_argument("--s-max", type=int, default=2)
    e2.add_argument("--window", type=int, default=None)
    e2.add_argument("--modulus-slack", type=int, default=2)
    e2.add_argument("--format", choices=["text", "json"], default="text")
    e2.add_argument("--ext-data", default=None)

    d = sub.add_parser("delta", help="dump a delta^1 block with kernel and cokernel")
    d.add_argument("--eps", type=int, required=True)
    d.add_argument("--m", type=int, required=True)
    d.add_argument("--window", type=int, default=None)
    d.add_argument("--format", choices=["json", "csv"], default="json")

    j = sub.add_parser("jpow", help="delta^0 and delta^1 on powers of j")
    j.add_argument("--k-max", type=int, default=4)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("--suite", choices=list(SUITES) + ["all"], default="all")
    v.add_argument("--seed", type=int, default=0)

    g = sub.add_parser("greek", help="Greek-letter candidate report")
    g.add_argument("--family", required=True)
    g.add_argument("--max-i", type=int, required=True)
    g.add_argument("--format", choices=["text", "json"], default="text")
    return p


def _emit(text: str, out: str | None):
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_e2(args) -> str:
    cfg = RunConfig(args.t_min, args.t_max, args.s_max, args.window, args.modulus_slack, args.format, args.ext_data)
    cfg.validate()
    ext = None
    if cfg.ext_data_path:
        try:
            ext = ExtData.load(cfg.ext_data_path)
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot read Ext data: {exc}") from exc
    entries = assemble_E2(cfg.t_min, cfg.t_max, cfg.s_max, cfg.window_columns, ext)
    if cfg.format == "json":
        return json_chart(entries, t_min=cfg.t_min, t_max=cfg.t_max, s_max=cfg.s_max)
    return text_chart(entries)


def cmd_delta(args) -> str:
    if args.eps not in (0, 1):
        raise ConfigError("--eps must be 0 or 1")
    if args.eps == 0 and args.m == 0:
        raise ConfigError("W_{0,0} is the degree-zero part; use the jpow command")
    if args.window is not None and args.window < 1:
        raise ConfigError("--window must be positive")
    try:
        blk = build_block(args.eps, args.m, args.window)
    except InvalidIndex as exc:
        raise ConfigError(str(exc)) from exc
    rep = analyze_block(args.eps, args.m, args.window)
    if args.format == "csv":
        return blk.to_csv()
    doc = {
        "schema": SCHEMA,
        "block": blk.to_json(),
        "kernel": rep.kernel.to_json(),
        "cokernel": rep.cokernel.to_json(),
        "stable": rep.stable,
        "provenance": rep.provenance,
        "notes": rep.notes,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def cmd_jpow(args) -> str:
    if args.k_max < 0:
        raise ConfigError("--k-max must be non-negative")
    rows = []
    for k in range(args.k_max + 1):
        rows.append(
            {
                "k": k,
                "delta0": [str(c) for c in delta0_column(k)],
                "delta1": [str(c) for c in delta1_on_jpow(k)],
            }
        )
    return json.dumps({"schema": SCHEMA, "jpow": rows}, indent=2) + "\n"


def cmd_greek(args) -> str:
    if args.family not in ("alpha", "beta"):
        raise ConfigError("--family must be alpha or beta")
    if args.max_i < 0:
        raise ConfigError("--max-i must be non-negative")
    rows = greek_report(args.max_i, (args.family,))
    if args.format == "json":
        return json.dumps({"schema": SCHEMA, "rows": rows}, indent=2, sort_keys=True) + "\n"
    return greek_text(rows)


def cmd_verify(args):
    results = run_suite(args.suite, seed=args.seed)
    doc = {"schema": SCHEMA, "seed": args.seed, "suites": [r.to_json() for r in results]}
    ok = all(r.passed for r in results)
    return json.dumps(doc, indent=2) + "\n", ok


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        if args.command == "verify":
            text, ok = cmd_verify(args)
            _emit(text, args.out)
            return 0 if ok else 1
        handler = {"e2": cmd_e2, "delta": cmd_delta, "jpow": cmd_jpow, "greek": cmd_greek}[args.command]
        _emit(handler(args), args.out)
        return 0
    except ConfigError as exc:
        print(f"anss-q2: error: {exc}", file=sys.stderr)
        return 2
    except (FormulaMismatch, LiftFailure) as exc:
        print(f"anss-q2: internal consistency failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
