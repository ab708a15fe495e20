"""Command line entry point.

    allen-cahn-mp check-potential CONFIG
    allen-cahn-mp run CONFIG
    allen-cahn-mp sweep CONFIG --h-list 0.0625 0.03125 ...
    allen-cahn-mp competitor FIELD.csv --a 1,0 --r 0.08 --potential triple_well_2d

Exit status is 0 whenever the run completes, whatever its pass/fail flags,
and 2 on config or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from .competitor import verify_competitor
from .errors import ConfigError, InvalidArgumentError
from .grid import read_field_csv
from .harness import (ExperimentConfig, _jsonable, check_potential_config, run_experiment,
                      run_sweep, sweep_summary)
from .potential import get_potential


def _floats(text):
    return [float(v) for v in text.split(",") if v.strip()]


def _emit(obj, path=None):
    text = json.dumps(_jsonable(obj), indent=2, sort_keys=True)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def build_parser():
    p = argparse.ArgumentParser(prog="allen-cahn-mp", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("check-potential", help="run the potential hypothesis checks")
    c.add_argument("config")

    c = sub.add_parser("run", help="run one experiment and write its report")
    c.add_argument("config")

    c = sub.add_parser("sweep", help="repeat an experiment over grid spacings")
    c.add_argument("config")
    c.add_argument("--h-list", type=float, nargs="+", required=True)

    c = sub.add_parser("competitor", help="competitor report for a field CSV")
    c.add_argument("field")
    c.add_argument("--a", type=_floats, required=True, help="comma-separated well point")
    c.add_argument("--r", type=float, required=True)
    c.add_argument("--potential", required=True)
    c.add_argument("--r0", type=float, default=None)
    c.add_argument("--out", default=None)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        if args.command == "check-potential":
            cfg = ExperimentConfig.load(args.config)
            _emit(check_potential_config(cfg))
        elif args.command == "run":
            cfg = ExperimentConfig.load(args.config)
            rep = run_experiment(cfg)
            if not cfg.output.get("report"):
                print(rep.to_json())
            else:
                print(json.dumps(_jsonable({"max_principle": rep.data["max_principle"],
                                            "report": cfg.path(cfg.output["report"])}),
                                 sort_keys=True))
        elif args.command == "sweep":
            cfg = ExperimentConfig.load(args.config)
            reps = run_sweep(cfg, args.h_list)
            out = {"summary": sweep_summary(reps), "reports": [r.data for r in reps]}
            _emit(out, cfg.path(cfg.output["report"]) if cfg.output.get("report") else None)
            if cfg.output.get("report"):
                _emit(sweep_summary(reps))
        elif args.command == "competitor":
            u = read_field_csv(args.field)
            params = {}
            if args.r0 is not None:
                params["r0"] = args.r0
            if args.potential == "triple_well_2d":
                params["validate"] = False
            W = get_potential(args.potential, **params)
            if len(args.a) != W.m or u.m != W.m:
                raise InvalidArgumentError("a, field and potential dimensions disagree")
            _emit(verify_competitor(u, args.a, args.r, W).to_dict(), args.out)
    except (ConfigError, InvalidArgumentError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
