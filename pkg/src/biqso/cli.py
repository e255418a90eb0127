"""Command-line interface.

Exit status: 0 on success, 1 on a domain error (invalid model or state,
dimension mismatch, unreadable file), 2 on a usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import catalog, contraction, dynamics
from .errors import LengthMismatch, QSOError
from .model import BisexualModel, PopulationState, load_model, validate_state
from .render import (
    FORMATS,
    TrajectoryWriter,
    render_classification,
    render_lipschitz,
    render_report,
    state_text,
)

SEED_ENV = "QSO_SEED"


def parse_state_literal(text: str, n: int, nu: int) -> PopulationState:
    """Parse ``x1,..,xn:y1,..,ynu``.

    With exactly one ``:`` the two parts are taken as written. Otherwise all
    numbers are read in order and split after the first ``n`` (so
    ``0:1:0.3,0.7`` is accepted for a 2x2 model).
    """
    try:
        if text.count(":") == 1:
            fx, fy = text.split(":")
            x = [float(v) for v in fx.split(",") if v.strip()]
            y = [float(v) for v in fy.split(",") if v.strip()]
        else:
            vals = [float(v) for v in text.replace(":", ",").split(",") if v.strip()]
            if len(vals) != n + nu:
                raise LengthMismatch(f"state literal has {len(vals)} numbers, expected {n + nu}")
            x, y = vals[:n], vals[n:]
    except ValueError as exc:
        if isinstance(exc, QSOError):
            raise
        raise LengthMismatch(f"malformed state literal {text!r}") from None
    return validate_state(x, y, n, nu)


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    return int(raw) if raw else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biqso",
        description="Bisexual-population quadratic operators: contraction bounds and dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help):
        p = sub.add_parser(name, help=help)
        src = p.add_mutually_exclusive_group()
        src.add_argument("--model", metavar="FILE", help="model file")
        src.add_argument(
            "--builtin",
            metavar="NAME",
            help="example1, example2, example3 or uniform:n,nu",
        )
        p.add_argument("--format", choices=FORMATS, default="table")
        p.add_argument("--output", metavar="PATH", help="write here instead of stdout")
        return p

    add("validate", "check a model")
    add("analyze", "contraction report")

    p = add("simulate", "print a trajectory")
    p.add_argument("--state", required=True, help="x1,..,xn:y1,..,ynu")
    p.add_argument("--steps", type=int, default=20)

    p = add("classify", "converged / periodic / undecided")
    p.add_argument("--state", required=True)
    p.add_argument("--max-steps", type=int, default=dynamics.DEFAULT_MAX_STEPS)
    p.add_argument("--tol", type=float, default=dynamics.DEFAULT_TOL)
    p.add_argument("--max-period", type=int, default=dynamics.DEFAULT_MAX_PERIOD)

    p = add("fixed-points", "multi-start fixed point search")
    p.add_argument("--starts", type=int, default=20)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=dynamics.DEFAULT_MAX_STEPS)
    p.add_argument("--tol", type=float, default=dynamics.DEFAULT_TOL)

    p = add("lipschitz", "sampled Lipschitz lower bound next to zeta")
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("examples", help="list the built-in models")
    p.add_argument("--dump", metavar="NAME", help="print the bundled model file")
    p.add_argument("--output", metavar="PATH")
    return parser


def _load(args, parser) -> BisexualModel:
    if args.model:
        return load_model(args.model)
    if args.builtin:
        return catalog.builtin_model(args.builtin)
    parser.error(f"{args.command}: one of --model or --builtin is required")


def _run(args, parser, out) -> None:
    if args.command == "examples":
        if args.dump:
            out.write(catalog.bundled_model_text(args.dump))
            return
        for name in ("example1", "example2", "example3"):
            m = catalog.builtin_model(name)
            z = contraction.zeta(m).value
            out.write(f"{name:<10} n={m.n} nu={m.nu} zeta={z:.6g}\n")
        out.write("uniform:n,nu  constant operator with uniform rows\n")
        return

    model = _load(args, parser)
    fmt = args.format

    if args.command == "validate":
        out.write(f"valid model n={model.n} nu={model.nu}\n")
    elif args.command == "analyze":
        out.write(render_report(contraction.analyze(model), fmt))
    elif args.command == "simulate":
        if args.steps < 0:
            parser.error("--steps must be >= 0")
        z = parse_state_literal(args.state, model.n, model.nu)
        writer = TrajectoryWriter(out, model.n, model.nu, fmt)
        x, y = z.x, z.y
        writer.write(0, x, y)
        for t in range(1, args.steps + 1):
            x, y = dynamics.step(model, x, y)
            writer.write(t, x, y)
    elif args.command == "classify":
        z = parse_state_literal(args.state, model.n, model.nu)
        c = dynamics.classify(model, z, args.max_steps, args.tol, args.max_period)
        out.write(render_classification(c, fmt))
    elif args.command == "fixed-points":
        seed = _default_seed() if args.seed is None else args.seed
        rng = np.random.default_rng(seed)
        starts = dynamics.sample_states(model.n, model.nu, args.starts, rng)
        found = dynamics.find_fixed_points(model, starts, args.max_steps, args.tol)
        if fmt == "table":
            out.write(f"{len(found)} fixed point(s) from {args.starts} starts\n")
            for f in found:
                out.write(state_text(f) + "\n")
        else:
            writer = TrajectoryWriter(out, model.n, model.nu, fmt)
            for idx, f in enumerate(found):
                writer.write(idx, f.x, f.y)
    elif args.command == "lipschitz":
        seed = _default_seed() if args.seed is None else args.seed
        est = dynamics.empirical_lipschitz(model, args.samples, seed, args.workers)
        jac = dynamics.jacobian_lipschitz(model, args.samples, seed, args.workers)
        out.write(render_lipschitz(est, jac, contraction.zeta(model).value, fmt))


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = sys.stdout
    try:
        if getattr(args, "output", None):
            out = open(args.output, "w", encoding="utf-8")
        _run(args, parser, out)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (QSOError, OSError) as exc:
        print(f"biqso: error: {exc}", file=sys.stderr)
        return 1
    finally:
        if out is not sys.stdout:
            out.close()
        else:
            out.flush()
    return 0


if __name__ == "__main__":
    sys.exit(main())
