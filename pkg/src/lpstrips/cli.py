"""Command-line front end.

Exit codes: 0 success, 2 input or parse error, 3 precondition violated,
4 a verification suite reported a failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import List, Optional

from . import asymptotics, heis, strips, structure, verify
from .core import ContractError, DomainError, EigProfile, WeightConfig, parse_rat, rat_str
from .render import strip_figure, to_markdown
from .straight import canonicalize, quasi_isometric

EXIT_OK, EXIT_INPUT, EXIT_CONTRACT, EXIT_VERIFY = 0, 2, 3, 4


class InputError(Exception):
    pass


def _load_config(path: str) -> WeightConfig:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    return WeightConfig.from_json(data)


def _rat_list(text: str) -> List[Fraction]:
    return [parse_rat(part) for part in text.split(",") if part.strip()]


def _emit(args, kind: str, payload) -> None:
    if args.format == "md":
        text = to_markdown(kind, payload) + "\n"
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_strips(args, reports, title: str) -> None:
    payload = {"title": title, "reports": [r.to_json() for r in reports]}
    if getattr(args, "figure", None):
        strip_figure(payload["reports"], args.figure, title)
    _emit(args, "strips", payload)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    cfg = _load_config(args.weights)
    payload = structure.analyze(cfg).to_json()
    payload["zero_in_convex_hull"] = structure.zero_in_convex_hull(cfg)
    _emit(args, "analyze", payload)
    return EXIT_OK


def cmd_palpha(args) -> int:
    _emit(args, "palpha", canonicalize(_load_config(args.weights)).to_json())
    return EXIT_OK


def cmd_qi(args) -> int:
    a, b = _load_config(args.first), _load_config(args.second)
    payload = {"quasi_isometric": quasi_isometric(a, b),
               "p_alpha": [rat_str(canonicalize(a).p_alpha), rat_str(canonicalize(b).p_alpha)]}
    _emit(args, "qi", payload)
    return EXIT_OK


def cmd_strips(args) -> int:
    profile = EigProfile(tuple(_rat_list(args.lambdas)))
    degrees = [args.degree] if args.degree is not None else range(1, profile.n + 1)
    reports = [strips.strip_report(profile, k, args.abelian) for k in degrees]
    _emit_strips(args, reports, f"profile ({args.lambdas})")
    return EXIT_OK


def _need(value, flag: str, kind: str):
    if value is None:
        raise InputError(f"table {kind} needs {flag}")
    return value


def cmd_table(args) -> int:
    kind = args.kind
    if kind == "real":
        n = _need(args.n, "--n", kind)
        degrees = [args.degree] if args.degree is not None else range(1, n + 1)
        reports = [strips.real_hyperbolic_table(n, k) for k in degrees]
        title = f"real hyperbolic, n = {n}"
    elif kind == "complex":
        m = _need(args.m, "--m", kind)
        degrees = [args.degree] if args.degree is not None else range(1, 2 * m)
        reports = [strips.complex_hyperbolic_table(m, k) for k in degrees]
        title = f"complex hyperbolic, m = {m}"
    elif kind == "sl3":
        _only_degree_2(args.degree)
        reports, title = [strips.sl3_degree2()], "SL(3,R)/SO(3,R)"
    else:
        _only_degree_2(args.degree)
        cfg = _load_config(_need(args.weights, "a weights file", kind))
        reports, title = [strips.s_alpha_degree2(cfg)], "straight S_alpha"
    _emit_strips(args, reports, title)
    return EXIT_OK


def _only_degree_2(degree: Optional[int]) -> None:
    if degree is not None and degree != 2:
        raise DomainError("this table is only known in degree 2")


def cmd_heis(args) -> int:
    m = args.m
    if args.action == "lefschetz":
        rows = []
        for k in range(0, 2 * (m - 1) + 1):
            dim, ker, img = heis.lefschetz_rank(m, k)
            rows.append({"k": k, "dim_domain": dim, "dim_kernel": ker, "dim_image": img})
        _emit(args, "lefschetz", {"m": m, "ranks": rows})
        return EXIT_OK
    if args.action in ("d", "obstruction", "vertical"):
        if not args.form:
            raise InputError(f"heis {args.action} needs --form")
        form = heis.parse_form(m, args.form)
        if args.action == "d":
            result = heis.differentiate(form)
        elif args.action == "obstruction":
            result = heis.nullclass_middle(m, form)
        else:
            result = heis.vertical_construct(m, form)
        _emit(args, args.action, {"m": m, "input": form.to_json(), "degree": result.degree,
                                  "result": result.to_json()})
        return EXIT_OK
    return _run_verify(args, ["heis"])


def cmd_budget(args) -> int:
    canon = canonicalize(_load_config(args.weights))
    payload = asymptotics.budget_nonvanishing(canon).to_json()
    payload["p_alpha"] = rat_str(canon.p_alpha)
    _emit(args, "budget", payload)
    return EXIT_OK


def cmd_lemma_num(args) -> int:
    res = asymptotics.lemma_num_min(args.a, args.b, args.A, args.B)
    payload = {"t_min": float(res.t_min), "f_min": float(res.f_min), "t_min_exact": res.t_expr,
               "a": rat_str(args.a), "b": rat_str(args.b), "A": args.A, "B": args.B}
    if args.numeric_check:
        import math

        numeric = math.exp(verify.numeric_log_min(float(args.a), float(args.b),
                                                  math.log(float(args.A)), math.log(float(args.B))))
        payload["numeric_f_min"] = numeric
        payload["relative_error"] = abs(numeric - float(res.f_min)) / float(res.f_min)
    _emit(args, "lemma-num", payload)
    return EXIT_OK


def cmd_sl3_decay(args) -> int:
    cert = asymptotics.sl3_decay(args.pattern, args.p, args.direction)
    payload = {"pattern": args.pattern, "p": rat_str(args.p), "direction": args.direction,
               "certified": cert is not None}
    if cert is not None:
        payload.update(cert.to_json())
    _emit(args, "sl3-decay", payload)
    return EXIT_OK


def _run_verify(args, suites: List[str]) -> int:
    ms = (args.m,) if getattr(args, "m", None) else (2, 3)
    reports = [verify.run_suite(name, args.seed, args.trials, ms) for name in suites]
    payload = {"seed": args.seed, "trials": args.trials, "passed": all(r.passed for r in reports),
               "suites": [r.to_json() for r in reports]}
    checks = getattr(args, "checks", None)
    if checks:
        wanted = set(checks.split(","))
        for suite in payload["suites"]:
            suite["checks"] = [c for c in suite["checks"] if c["name"] in wanted]
            suite["passed"] = all(c["passed"] for c in suite["checks"])
        payload["passed"] = all(s["passed"] for s in payload["suites"])
    _emit(args, "verify", payload)
    return EXIT_OK if payload["passed"] else EXIT_VERIFY


def cmd_verify(args) -> int:
    suites = list(verify.SUITES) if args.suite == "all" else [args.suite]
    return _run_verify(args, suites)


# ---------------------------------------------------------------------------
# parser


def _rat_arg(text: str) -> Fraction:
    try:
        return parse_rat(text)
    except DomainError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _positive_real(text: str) -> str:
    try:
        if float(text) <= 0:
            raise ValueError
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a positive real, got {text!r}") from exc
    return text


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "md"), default="json")
    common.add_argument("--out", help="write the report here instead of stdout")
    seeded = argparse.ArgumentParser(add_help=False)
    seeded.add_argument("--seed", type=int, default=0)
    seeded.add_argument("--trials", type=int, default=100)
    figure = argparse.ArgumentParser(add_help=False)
    figure.add_argument("--figure", help="also draw the strip diagram to this image file")

    parser = argparse.ArgumentParser(prog="lpstrips", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="structural report of a weight configuration")
    p.add_argument("weights")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("palpha", parents=[common], help="canonical mu and critical exponent")
    p.add_argument("weights")
    p.set_defaults(func=cmd_palpha)

    p = sub.add_parser("qi", parents=[common], help="compare two straight configurations")
    p.add_argument("first")
    p.add_argument("second")
    p.set_defaults(func=cmd_qi)

    p = sub.add_parser("strips", parents=[common, figure], help="strip report from an eigenvalue profile")
    p.add_argument("--lambdas", required=True, help="comma-separated eigenvalues of -delta")
    p.add_argument("--degree", type=int)
    p.add_argument("--abelian", action="store_true", help="the nilradical is abelian")
    p.set_defaults(func=cmd_strips)

    p = sub.add_parser("table", parents=[common, figure], help="closed-form cohomology tables")
    p.add_argument("kind", choices=("real", "complex", "sl3", "salpha"))
    p.add_argument("weights", nargs="?")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int)
    p.add_argument("--degree", type=int)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("heis", parents=[common, seeded], help="Heisenberg group calculus")
    p.add_argument("action", choices=("lefschetz", "d", "obstruction", "vertical", "verify"))
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--form", help='e.g. "(y1^2) dx1 - (z) dy1^tau"')
    p.add_argument("--checks", help="comma-separated check names to keep")
    p.set_defaults(func=cmd_heis)

    p = sub.add_parser("budget", parents=[common], help="integrability budget of a straight configuration")
    p.add_argument("weights")
    p.set_defaults(func=cmd_budget)

    p = sub.add_parser("lemma-num", parents=[common], help="closed-form minimum of e^-at A + e^bt B")
    p.add_argument("--a", type=_rat_arg, required=True)
    p.add_argument("--b", type=_rat_arg, required=True)
    p.add_argument("--A", type=_positive_real, required=True)
    p.add_argument("--B", type=_positive_real, required=True)
    p.add_argument("--numeric-check", action="store_true")
    p.set_defaults(func=cmd_lemma_num)

    p = sub.add_parser("sl3-decay", parents=[common], help="decay certificate for the pair construction")
    p.add_argument("--p", type=_rat_arg, required=True)
    p.add_argument("--pattern", choices=("f dx", "g dy"), required=True)
    p.add_argument("--direction", choices=("+", "-"), required=True)
    p.set_defaults(func=cmd_sl3_decay)

    p = sub.add_parser("verify", parents=[common, seeded], help="randomized invariant suites")
    p.add_argument("suite", choices=verify.SUITES + ("all",))
    p.add_argument("--m", type=int, help="restrict Heisenberg checks to this m")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ContractError as exc:
        print(f"error: precondition violated: {exc}", file=sys.stderr)
        return EXIT_CONTRACT
    except (DomainError, InputError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
