"""Command-line front end: verification suites, flow and orbit sampling,
operator application on serialized elements, and pairing evaluation.

Exit codes: 0 success (and every check passed for `verify`), 1 check
failure, 2 usage or parse error, 3 domain error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import hopf as hp
from . import reps as rp
from .flow import (
    FlowParams,
    Point2,
    casimir_value,
    classify_orbit,
    flow,
    flow_domain,
    invariant_h,
)
from .scalars import CKParams, DomainError, Jet, parse_rational
from .suites import run_suite

__all__ = ["RunConfig", "main"]

FLOW_COLUMNS = ("t", "alpha1", "alpha2", "h", "C")


@dataclass(frozen=True)
class RunConfig:
    omega: Fraction
    lam: Fraction
    trunc: int = 8
    jet_order: int = 8
    output: str = "json"
    seed: int = 0

    def __post_init__(self):
        if self.trunc < 2:
            raise ValueError("--trunc must be >= 2")
        if self.jet_order < 2:
            raise ValueError("--jet-order must be >= 2")
        if self.output not in ("json", "csv"):
            raise ValueError("--output must be json or csv")

    def ck(self) -> CKParams:
        return CKParams(self.omega, self.lam)

    def flow_params(self) -> FlowParams:
        return FlowParams(float(self.omega), float(self.lam))


def _add_common(parser):
    parser.add_argument("--omega", default="1", help="rational, e.g. 1, -1, 1/2")
    parser.add_argument("--lambda", dest="lam", default="1/2", help="rational deformation")
    parser.add_argument("--trunc", type=int, default=8)
    parser.add_argument("--jet-order", type=int, default=8)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output", choices=("json", "csv"), default="json")


def _config(args) -> RunConfig:
    return RunConfig(
        omega=parse_rational(args.omega),
        lam=parse_rational(args.lam),
        trunc=args.trunc,
        jet_order=args.jet_order,
        output=args.output,
        seed=args.seed,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qiso2")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run a verification suite")
    _add_common(p)
    p.add_argument("--suite", choices=("hopf", "pairing", "flow", "reps", "all"), required=True)

    p = sub.add_parser("flow", help="evaluate the closed-form flow")
    _add_common(p)
    p.add_argument("t", type=float)
    p.add_argument("alpha1", type=float)
    p.add_argument("alpha2", type=float)
    p.add_argument("--trajectory", type=int, default=None, metavar="N")

    p = sub.add_parser("act", help="apply a generator word in a representation")
    _add_common(p)
    p.add_argument("rep", choices=("cospace", "local", "induced", "coregL", "coregR"))
    p.add_argument("gen", help="generator word, e.g. J or P2*J")
    p.add_argument("operand", help="path of the operand JSON file")
    p.add_argument("--c", default="0", help="rotation character for local (rational)")
    p.add_argument("--out", default=None, help="write the result here instead of stdout")

    p = sub.add_parser("pair", help="pairing of a U element with an F element")
    _add_common(p)
    p.add_argument("u_file")
    p.add_argument("f_file")

    p = sub.add_parser("orbit", help="classify the orbit through a point")
    _add_common(p)
    p.add_argument("alpha1", type=float)
    p.add_argument("alpha2", type=float)
    p.add_argument("--points", type=int, default=None, metavar="N")
    return parser


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def _emit_rows(rows, output):
    if output == "csv":
        print(",".join(FLOW_COLUMNS))
        for row in rows:
            print(",".join(repr(v) for v in row))
    else:
        print(
            json.dumps(
                [dict(zip(FLOW_COLUMNS, row)) for row in rows], separators=(",", ":")
            )
        )


def _flow_row(t, p, params):
    q = flow(t, p, params)
    return (
        t,
        q.alpha1,
        q.alpha2,
        invariant_h(q, params),
        casimir_value(q, params),
    )


def cmd_verify(config: RunConfig, suite: str) -> int:
    checks = run_suite(
        suite,
        config.omega,
        config.lam,
        trunc=config.trunc,
        jet_order=config.jet_order,
        seed=config.seed,
    )
    passed = all(c.passed for c in checks)
    if config.output == "csv":
        print("check,tolerance,observed,passed")
        for c in checks:
            print(f"{c.name},{c.tolerance!r},{c.observed!r},{str(c.passed).lower()}")
    else:
        print(
            json.dumps(
                {
                    "suite": suite,
                    "omega": str(config.omega),
                    "lambda": str(config.lam),
                    "trunc": config.trunc,
                    "jet_order": config.jet_order,
                    "seed": config.seed,
                    "checks": [
                        {
                            "name": c.name,
                            "tolerance": c.tolerance,
                            "observed": c.observed,
                            "passed": c.passed,
                        }
                        for c in checks
                    ],
                    "passed": passed,
                },
                separators=(",", ":"),
            )
        )
    return 0 if passed else 1


def cmd_flow(config: RunConfig, t: float, alpha1: float, alpha2: float, trajectory=None) -> int:
    params = config.flow_params()
    p = Point2(alpha1, alpha2)
    lo, hi = flow_domain(p, params)
    if not (lo < t < hi):
        print(f"t={t!r} outside the maximal flow interval ({lo!r}, {hi!r})", file=sys.stderr)
        return 3
    if trajectory is None:
        _emit_rows([_flow_row(t, p, params)], config.output)
    else:
        if trajectory < 2:
            raise ValueError("--trajectory needs N >= 2")
        rows = [_flow_row(t * i / (trajectory - 1), p, params) for i in range(trajectory)]
        _emit_rows(rows, config.output)
    return 0


def _load(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _word(text: str) -> list[str]:
    return [g.strip() for g in text.split("*") if g.strip()]


def cmd_act(config: RunConfig, rep: str, gen: str, operand_path: str, c="0", out_path=None) -> int:
    word = _word(gen)
    if not word:
        raise ValueError("empty generator word")
    text = _load(operand_path)
    if rep in ("cospace", "local"):
        psi = rp.poly_from_json(text)
        # left actions: the rightmost factor acts first
        for g in reversed(word):
            if rep == "cospace":
                psi = rp.cospace_act(g, psi, config.ck())
            else:
                psi = rp.local_act(g, psi, parse_rational(c), config.ck())
        result = rp.poly_to_json(psi)
    elif rep in ("coregL", "coregR"):
        system = hp.RewriteSystem(config.ck(), config.trunc)
        f = hp.element_from_json(system, text)
        if f.alg != "F":
            raise ValueError("coregular actions apply to F elements")
        if rep == "coregL":
            for g in reversed(word):
                f = rp.coregular_left(system.generator("U", g), f)
        else:
            for g in word:  # right action: leftmost factor acts first
                f = rp.coregular_right(f, system.generator("U", g))
        result = hp.element_to_json(f)
    else:
        data = json.loads(text)
        jet = Jet(data["jet"]["base"], data["jet"]["coefs"])
        a1, a2 = data["character"]
        state = rp.InducedState(jet, float(a1), float(a2), config.ck())
        for g in word:  # right action
            state = rp.induced_act(g, state)
        result = json.dumps(
            {
                "jet": {"base": state.jet.base, "coefs": list(state.jet.coeffs)},
                "character": [state.alpha1, state.alpha2],
            },
            separators=(",", ":"),
        )
    if out_path:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(result + "\n")
    else:
        print(result)
    return 0


def cmd_pair(config: RunConfig, u_path: str, f_path: str) -> int:
    system = hp.RewriteSystem(config.ck(), config.trunc)
    u = hp.element_from_json(system, _load(u_path))
    f = hp.element_from_json(system, _load(f_path))
    if u.alg != "U" or f.alg != "F":
        raise ValueError("pair expects a U element file and an F element file")
    print(str(hp.pairing(u, f)))
    return 0


def _orbit_window(p, params) -> float:
    if params.omega > 0:
        return 2 * math.pi / math.sqrt(params.omega)
    lo, hi = flow_domain(p, params)
    span = 4.0
    if math.isfinite(hi):
        span = min(span, 0.95 * hi)
    if math.isfinite(lo):
        span = min(span, 0.95 * abs(lo))
    return span


def cmd_orbit(config: RunConfig, alpha1: float, alpha2: float, points=None) -> int:
    params = config.flow_params()
    p = Point2(alpha1, alpha2)
    stratum = classify_orbit(p, params)
    if config.output == "csv":
        print("stratum,conserved_value")
        print(f"{stratum.tag.value},{stratum.conserved_value!r}")
    else:
        print(
            json.dumps(
                {
                    "stratum": stratum.tag.value,
                    "conserved_value": stratum.conserved_value,
                },
                separators=(",", ":"),
            )
        )
    if points:
        span = _orbit_window(p, params)
        if params.omega > 0:
            ts = [span * i / points for i in range(points)]
        else:
            ts = [-span + 2 * span * i / (points - 1) for i in range(points)] if points > 1 else [0.0]
        _emit_rows([_flow_row(t, p, params) for t in ts], config.output)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _config(args)
        if args.command == "verify":
            return cmd_verify(config, args.suite)
        if args.command == "flow":
            return cmd_flow(config, args.t, args.alpha1, args.alpha2, args.trajectory)
        if args.command == "act":
            return cmd_act(config, args.rep, args.gen, args.operand, args.c, args.out)
        if args.command == "pair":
            return cmd_pair(config, args.u_file, args.f_file)
        if args.command == "orbit":
            return cmd_orbit(config, args.alpha1, args.alpha2, args.points)
        parser.error(f"unknown command {args.command!r}")
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
