"""Command-line frontend.

Subcommands: check-cr, solve, realize, derive, verify, perturb, reduce.
Exit codes: 0 success / affirmative verdict, 1 negative verdict, 2 usage or
parse error.  Every input path accepts "-" for stdin.

System files are JSON with rational-string coefficients, which keeps the
structure checks exact::

    {
      "variables": ["x", "y"],
      "equations": [
        [{"coeff": "1", "exponents": [0, 0]}, {"coeff": "-1", "exponents": [2, 0]}],
        [{"coeff": "1", "exponents": [0, 0]}]
      ],
      "initial": ["2", "1"]
    }

Float coefficients are accepted only together with ``--inexact``, which
routes the structure check through the tolerance-based variant.

Homogeneous pair files for ``reduce`` hold complex coefficients as [re, im]
pairs::

    {"dz1": {"z1^2": [1, 0], "z1z2": [0, 0], "z2^2": [0, 0]},
     "dz2": {"z1^2": [0, 0], "z1z2": [0, 0], "z2^2": [1, 0]},
     "initial": [[1, 0], [2, 0]]}
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from .cauchy_riemann import check_cr_2var, check_cr_multivar
from .closed_form import (
    ClosedFormSolution,
    ImplicitSolution,
    UnsupportedDegreeError,
    eval_solution,
    solve,
)
from .complexify import complexify_2var
from .expressions import to_dict as expr_to_dict
from .homogeneous import (
    FirstIntegral,
    HomogeneousPair,
    UnsupportedDegeneracyError,
    reduce_homogeneous,
)
from .integrate import (
    perturbation_experiment,
    verify_solution,
    write_difference_csv,
)
from .kinetics import canonic_realization, check_kinetic, induced_ode, realization_stats
from .polynomials import RealPoly, RealPolySystem
from .reaction_io import ReactionSyntaxError, emit_fhj_dot, format_reactions, parse_reactions

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_USAGE = 2


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_USAGE):
        super().__init__(message)
        self.code = code


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}")


def _coeff_fraction(value, inexact: bool) -> Fraction:
    if isinstance(value, str) or isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not inexact:
            raise CliError("float coefficients need --inexact (or write them as rational strings)")
        return Fraction(value)
    raise CliError(f"bad coefficient {value!r}")


def load_system(path: str, inexact: bool = False) -> tuple[RealPolySystem, list[Fraction] | None]:
    """Parse a system file; returns the system and its optional initial values."""
    try:
        data = json.loads(_read_text(path))
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}: invalid JSON: {exc}")
    try:
        variables = tuple(str(v) for v in data["variables"])
        raw_equations = data["equations"]
    except (KeyError, TypeError):
        raise CliError(f"{path}: a system file needs 'variables' and 'equations'")
    if len(raw_equations) != len(variables):
        raise CliError(f"{path}: {len(raw_equations)} equations for {len(variables)} variables")
    equations = []
    for raw in raw_equations:
        terms = []
        for item in raw:
            try:
                coeff = _coeff_fraction(item["coeff"], inexact)
                exponents = tuple(int(e) for e in item["exponents"])
            except (KeyError, TypeError, ValueError) as exc:
                raise CliError(f"{path}: bad term {item!r}: {exc}")
            terms.append((exponents, coeff))
        try:
            equations.append(RealPoly.from_terms(len(variables), terms))
        except ValueError as exc:
            raise CliError(f"{path}: {exc}")
    system = RealPolySystem(variables, tuple(equations))
    initial = None
    if data.get("initial") is not None:
        initial = [_coeff_fraction(v, True) for v in data["initial"]]
        if len(initial) != len(variables):
            raise CliError(f"{path}: initial values must match the variable count")
    return system, initial


def dump_system(system: RealPolySystem, initial=None) -> dict:
    return {
        "variables": list(system.variables),
        "equations": [
            [{"coeff": str(c), "exponents": list(e)} for e, c in eq]
            for eq in system.equations
        ],
        **({"initial": [str(v) for v in initial]} if initial is not None else {}),
    }


def _parse_pairing(text: str) -> tuple[tuple[int, int], ...]:
    try:
        return tuple(
            (int(a), int(b))
            for a, b in (pair.split(":") for pair in text.split(","))
        )
    except ValueError:
        raise CliError(f"bad pairing {text!r}; expected like '0:1,2:3'")


def _bound(value: float) -> object:
    if value == float("inf"):
        return "inf"
    if value == float("-inf"):
        return "-inf"
    return value


def solution_to_dict(solution) -> dict:
    if isinstance(solution, ClosedFormSolution):
        meta = dict(solution.metadata)
        return {
            "kind": "explicit",
            "validity": [_bound(solution.validity[0]), _bound(solution.validity[1])],
            "mode": meta.get("mode"),
            "roots": [[z.real, z.imag] for z in meta.get("roots", ())],
            "expr": expr_to_dict(solution.expr),
        }
    if isinstance(solution, ImplicitSolution):
        return {
            "kind": "implicit",
            "validity": [_bound(solution.validity[0]), _bound(solution.validity[1])],
            "mode": solution.metadata.get("mode"),
            "roots": [[z.real, z.imag] for z in solution.roots],
            "log_weights": [[w.real, w.imag] for w in solution.log_weights],
            "pole_weights": [[w.real, w.imag] for w in solution.pole_weights],
            "z0": [solution.z0.real, solution.z0.imag],
        }
    raise TypeError(f"not a solution: {solution!r}")


def _write_out(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        Path(out).write_text(text)


def _require_initial(initial, override_x, override_y):
    if override_x is not None and override_y is not None:
        return Fraction(override_x), Fraction(override_y)
    if initial is None:
        raise CliError("the system file has no initial values; pass --x0 and --y0")
    return initial[0], initial[1]


# ---------------------------------------------------------------------------
# subcommands


def _cmd_check_cr(args) -> int:
    system, _ = load_system(args.input, args.inexact)
    tolerance = args.tol if args.inexact else None
    if args.pairing:
        report = check_cr_multivar(system, _parse_pairing(args.pairing), tolerance)
    else:
        if system.nvars != 2:
            raise CliError("a multivariate system needs --pairing")
        report = check_cr_2var(system, tolerance)
    if args.format == "json":
        payload = {
            "satisfied": report.satisfied,
            "degree": report.degree,
            "violations": [
                {"relation": v.relation, "left": str(v.left), "right": str(v.right)}
                for v in report.violations
            ],
        }
        if report.parameters is not None:
            p = report.parameters
            payload["parameters"] = {
                "const_x": str(p.const_x),
                "const_y": str(p.const_y),
                "pairs": {str(r): [str(a), str(b)] for r, (a, b) in enumerate(p.pairs, start=1)},
            }
        print(json.dumps(payload, indent=2))
    else:
        if report.satisfied:
            print(f"Cauchy-Riemann structure: satisfied (degree {report.degree})")
            if report.parameters is not None:
                p = report.parameters
                print(f"  constants: {p.const_x}, {p.const_y}")
                for r, (a, b) in enumerate(p.pairs, start=1):
                    print(f"  degree {r}: ({a}, {b})")
        else:
            print(f"Cauchy-Riemann structure: violated ({len(report.violations)} relations)")
            for v in report.violations:
                print(f"  {v.relation}: {v.left} != {v.right}")
    return EXIT_OK if report.satisfied else EXIT_NEGATIVE


def _cmd_solve(args) -> int:
    system, initial = load_system(args.input, args.inexact)
    x0, y0 = _require_initial(initial, args.x0, args.y0)
    report = check_cr_2var(system)
    if not report.satisfied:
        print("the system does not satisfy the Cauchy-Riemann structure; cannot collapse", file=sys.stderr)
        return EXIT_NEGATIVE
    ode = complexify_2var(system, report, x0, y0)
    solution = solve(ode)
    _write_out(json.dumps(solution_to_dict(solution), indent=2), args.out)
    if args.t_samples:
        lo, hi = solution.validity
        t_end = args.t_end
        if not lo < t_end < hi and t_end != 0.0:
            raise CliError(f"--t-end {t_end} outside the validity interval ({lo}, {hi})")
        rows = []
        for k in range(args.t_samples):
            t = t_end * k / max(args.t_samples - 1, 1)
            z = eval_solution(solution, t)
            rows.append(f"{t!r},{z.real!r},{z.imag!r}")
        header = "t," + ",".join(system.variables)
        _write_out("\n".join([header, *rows]) + "\n", args.samples_out)
    return EXIT_OK


def _cmd_realize(args) -> int:
    system, _ = load_system(args.input, args.inexact)
    report = check_kinetic(system)
    if not report.kinetic:
        print("the system is not kinetic; negative cross-effects:", file=sys.stderr)
        for off in report.offenders:
            print(f"  equation {off.equation}, exponents {off.exponents}: {off.coefficient}", file=sys.stderr)
        return EXIT_NEGATIVE
    network = canonic_realization(system, report)
    _write_out(format_reactions(network), args.out)
    stats = realization_stats(network)
    print(
        f"# complexes: {stats['complexes']}, reactions: {stats['reactions']}",
        file=sys.stderr,
    )
    if args.dot:
        Path(args.dot).write_text(emit_fhj_dot(network))
    return EXIT_OK


def _cmd_derive(args) -> int:
    try:
        network = parse_reactions(_read_text(args.input))
    except ReactionSyntaxError as exc:
        raise CliError(f"{args.input}: {exc}")
    system = induced_ode(network)
    _write_out(json.dumps(dump_system(system), indent=2), args.out)
    return EXIT_OK


def _cmd_verify(args) -> int:
    system, initial = load_system(args.input, args.inexact)
    x0, y0 = _require_initial(initial, args.x0, args.y0)
    report = check_cr_2var(system)
    if not report.satisfied:
        print("not a Cauchy-Riemann system; nothing to verify", file=sys.stderr)
        return EXIT_NEGATIVE
    solution = solve(complexify_2var(system, report, x0, y0))
    lo, hi = (0.0, args.horizon) if args.horizon >= 0 else (args.horizon, 0.0)
    v_lo, v_hi = solution.validity
    margin = 1e-9
    lo = max(lo, v_lo + margin * max(1.0, abs(v_lo)) if v_lo != float("-inf") else lo)
    hi = min(hi, v_hi - margin * max(1.0, abs(v_hi)) if v_hi != float("inf") else hi)
    outcome = verify_solution(
        solution, system, [float(x0), float(y0)], (lo, hi), args.tol, n_samples=args.samples
    )
    print(f"horizon: [{outcome.horizon[0]}, {outcome.horizon[1]}]")
    print(f"max deviation: {outcome.max_deviation:.3e} (tolerance {args.tol:.1e})")
    print("verdict: PASS" if outcome.passed else "verdict: FAIL")
    return EXIT_OK if outcome.passed else EXIT_NEGATIVE


def _cmd_perturb(args) -> int:
    system, initial = load_system(args.input, args.inexact)
    x0, y0 = _require_initial(initial, args.x0, args.y0)
    try:
        eps_list = [float(e) for e in args.eps.split(",")]
    except ValueError:
        raise CliError(f"bad --eps list {args.eps!r}")
    exponents = tuple(int(e) for e in args.exponents.split(","))
    result = perturbation_experiment(
        system,
        [float(x0), float(y0)],
        (args.equation, exponents, Fraction(args.coeff)),
        eps_list,
        args.horizon,
        n_samples=args.samples,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    for curve in result.curves:
        path = out_dir / f"diff_eps_{curve.epsilon:g}.csv"
        write_difference_csv(path, curve, result.var_names)
        print(f"epsilon {curve.epsilon:g}: sup |difference| = {curve.sup_norm:.6e} ({curve.status}) -> {path}")
    return EXIT_OK


def _complex_from_json(value) -> complex:
    if isinstance(value, (int, float)):
        return complex(float(value), 0.0)
    if isinstance(value, list) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise CliError(f"bad complex value {value!r}; expected [re, im]")


def _cmd_reduce(args) -> int:
    try:
        data = json.loads(_read_text(args.input))
    except json.JSONDecodeError as exc:
        raise CliError(f"{args.input}: invalid JSON: {exc}")
    try:
        rows = []
        for key in ("dz1", "dz2"):
            entry = data[key]
            rows.append(tuple(_complex_from_json(entry[k]) for k in ("z1^2", "z1z2", "z2^2")))
        initial = tuple(_complex_from_json(v) for v in data["initial"])
    except (KeyError, TypeError):
        raise CliError(f"{args.input}: a pair file needs dz1, dz2 (z1^2, z1z2, z2^2) and initial")
    pair = HomogeneousPair(rows[0], rows[1])
    try:
        integral = reduce_homogeneous(pair, initial, seed_horizon=(-args.horizon, args.horizon))
    except UnsupportedDegeneracyError as exc:
        print(f"unsupported degeneracy: {exc}", file=sys.stderr)
        return EXIT_NEGATIVE
    payload = {
        "kind": integral.kind,
        "denominator_roots": [[u.real, u.imag] for u in integral.roots],
        "residues": [[g.real, g.imag] for g in integral.residues],
        "polynomial_part": [[c.real, c.imag] for c in integral.poly_part],
        "anchor": [[integral.z1_0.real, integral.z1_0.imag], [integral.z2_0.real, integral.z2_0.imag]],
    }
    _write_out(json.dumps(payload, indent=2), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="erugin",
        description="Detect Cauchy-Riemann structure in polynomial ODEs, solve, realize, verify.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("input", help="input file ('-' for stdin)")
        p.add_argument("--inexact", action="store_true", help="accept float coefficients")

    p = sub.add_parser("check-cr", help="check the Cauchy-Riemann structure")
    add_common(p)
    p.add_argument("--pairing", help="variable pairing for 2n-variable systems, e.g. '0:1,2:3'")
    p.add_argument("--tol", type=float, default=1e-9, help="residual tolerance with --inexact")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=_cmd_check_cr)

    p = sub.add_parser("solve", help="collapse to a complex ODE and solve symbolically")
    add_common(p)
    p.add_argument("--x0", help="initial x (overrides the file)")
    p.add_argument("--y0", help="initial y (overrides the file)")
    p.add_argument("--out", help="solution JSON output path (default stdout)")
    p.add_argument("--t-samples", type=int, default=0, help="sample count for a CSV of z(t)")
    p.add_argument("--t-end", type=float, default=1.0, help="last sample time")
    p.add_argument("--samples-out", help="CSV output path (default stdout)")
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("realize", help="canonic mass-action realization of a kinetic system")
    add_common(p)
    p.add_argument("--out", help="reaction list output path (default stdout)")
    p.add_argument("--dot", help="also write the complex graph in DOT form here")
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("derive", help="induced ODE of a reaction network file")
    p.add_argument("input", help="reaction text file ('-' for stdin)")
    p.add_argument("--out", help="system JSON output path (default stdout)")
    p.set_defaults(func=_cmd_derive)

    p = sub.add_parser("verify", help="check the symbolic solution against the integrator")
    add_common(p)
    p.add_argument("--x0", help="initial x (overrides the file)")
    p.add_argument("--y0", help="initial y (overrides the file)")
    p.add_argument("--horizon", type=float, default=1.0, help="verification horizon T (window [0, T])")
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("perturb", help="difference curves between perturbed and base solutions")
    add_common(p)
    p.add_argument("--x0", help="initial x (overrides the file)")
    p.add_argument("--y0", help="initial y (overrides the file)")
    p.add_argument("--eps", default="1,0.5,0.25,0.125,0", help="comma-separated epsilon list")
    p.add_argument("--equation", type=int, default=0, help="index of the perturbed equation")
    p.add_argument("--exponents", default="2,0", help="perturbing monomial exponents")
    p.add_argument("--coeff", default="-1", help="perturbing coefficient (rational)")
    p.add_argument("--horizon", type=float, default=1.0)
    p.add_argument("--samples", type=int, default=201)
    p.add_argument("--out-dir", default="perturbation", help="directory for the CSV files")
    p.set_defaults(func=_cmd_perturb)

    p = sub.add_parser("reduce", help="first integral of a homogeneous quadratic pair")
    p.add_argument("input", help="pair JSON file ('-' for stdin)")
    p.add_argument("--horizon", type=float, default=2.0, help="seed horizon half-width")
    p.add_argument("--out", help="report output path (default stdout)")
    p.set_defaults(func=_cmd_reduce)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except UnsupportedDegreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def entry() -> None:  # console-script hook
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
