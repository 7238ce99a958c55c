"""Command-line front end.

Exit codes: 0 success, 1 I/O or parse error, 2 hypothesis violation,
3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .drazin import drazin
from .scalar import domain_named
from .tensor import DimensionError, EinsteinTensor, load_tensor, save_tensor, tensor_to_dict

EXIT_OK, EXIT_IO, EXIT_HYPOTHESIS, EXIT_VERIFY = 0, 1, 2, 3


class VerificationError(RuntimeError):
    pass


def _load(path: str, domain) -> EinsteinTensor:
    return load_tensor(path).astype(domain)


def _emit(args, text_lines: list[str], record: dict):
    if args.report == "structured":
        print(json.dumps(record, indent=1, default=str))
    else:
        print("\n".join(text_lines))


def _check_axioms(S: EinsteinTensor, X: EinsteinTensor, k: int):
    from .verify import drazin_residuals
    res = drazin_residuals(S, X, max(1, k))
    if S.domain.exact:
        ok = res.exact_zero
    else:
        scale = max(1.0, S.max_abs()) ** (max(1, k) + 1) * max(1.0, X.max_abs()) ** 2
        ok = res.max() <= 1e-9 * scale
    if not ok:
        raise VerificationError(f"result fails the Drazin equations: r = {res.r1:.3e}, {res.r2:.3e}, {res.r3:.3e}")
    return res


def _write(T: EinsteinTensor, out: str | None) -> str | None:
    if out:
        save_tensor(T, out)
    return out


def cmd_drazin(args) -> int:
    domain = domain_named(args.domain)
    A = _load(args.input, domain)
    res = drazin(A)
    resid = _check_axioms(A, res.drazin, res.index)
    _write(res.drazin, args.out)
    lines = [f"index: {res.index}",
             f"residuals ({resid.norm_kind}): r1={resid.r1:.3e} r2={resid.r2:.3e} r3={resid.r3:.3e}"]
    if args.out:
        lines.append(f"wrote {args.out}")
    else:
        lines.append(json.dumps(tensor_to_dict(res.drazin)))
    _emit(args, lines, {"command": "drazin", "input": args.input, "index": res.index,
                        "residuals": vars(resid), "output": args.out,
                        "drazin": None if args.out else tensor_to_dict(res.drazin)})
    return EXIT_OK


def _problem(args):
    from .modified.problem import ModifiedProblem
    domain = domain_named(args.domain)
    return ModifiedProblem(*(_load(p, domain) for p in (args.A, args.B, args.C, args.D)))


def cmd_modified(args) -> int:
    from .modified.conditions import check_conditions
    from .modified.formulas import DUALS, auto_formula, evaluate_formula
    from .modified.problem import derive

    q = derive(_problem(args))
    report = check_conditions(q)
    notice = None
    if args.formula == "auto":
        name, X = auto_formula(q)
        if name == "direct":
            notice = "no formula applies; fell back to the direct Drazin inverse"
    else:
        name, X = args.formula, evaluate_formula(q, args.formula)
    target, k = (q.Z, q.index_Z) if name in DUALS else (q.S, None)
    if k is None:
        from .drazin import index_of
        k = index_of(target)
    resid = _check_axioms(target, X, k)
    _write(X, args.out)
    lines = [f"formula: {name}" + (" (computes Z^D)" if name in DUALS else "")]
    if notice:
        lines.append(f"notice: {notice}")
    lines += ["conditions:"] + ["  " + l for l in report.lines()]
    lines.append(f"residuals ({resid.norm_kind}): r1={resid.r1:.3e} r2={resid.r2:.3e} r3={resid.r3:.3e}")
    lines.append(f"wrote {args.out}" if args.out else json.dumps(tensor_to_dict(X)))
    _emit(args, lines, {"command": "modified", "formula": name, "notice": notice,
                        "conditions": report.as_dict(), "residuals": vars(resid),
                        "output": args.out, "result": None if args.out else tensor_to_dict(X)})
    return EXIT_OK


def cmd_check(args) -> int:
    from .modified.conditions import check_conditions
    from .modified.formulas import AUTO_PRIORITY, DUALS, applicable_formulas
    from .modified.problem import derive

    q = derive(_problem(args))
    report = check_conditions(q)
    names = list(AUTO_PRIORITY) + [n for n in ("thm31a_alt1", "thm31a_alt2", "cor35a_alt",
                                               "di1b_alt", "di2b_alt", "z11b_alt")] + list(DUALS)
    usable = applicable_formulas(q, names) + ["direct"]
    lines = report.lines() + ["applicable: " + ", ".join(usable)]
    _emit(args, lines, {"command": "check", "conditions": report.as_dict(), "applicable": usable})
    return EXIT_OK


def _diff(name: str, got: EinsteinTensor, want: EinsteinTensor):
    import numpy as np
    mismatches = []
    for idx in np.ndindex(*want.shape.full):
        if got.data[idx] != want.data[idx]:
            mismatches.append((name, tuple(i + 1 for i in idx), got.data[idx], want.data[idx]))
    return want.data.size, mismatches


def cmd_example(args) -> int:
    from .example import PRINTED_NORMS, example_problem, expected
    from .modified.formulas import evaluate_formula
    from .modified.problem import derive
    from .verify import perturbation_bound_check, tensor_norm

    q = derive(example_problem())
    computed = {"AD": q.AD, "DD": q.DD, "ZD": q.ZD, "SD": evaluate_formula(q, "thm33a")}
    counts, mismatches = [], []
    for name, X in computed.items():
        n, mm = _diff(name, X, expected(name))
        counts.append(n)
        mismatches += mm
    lines = [f"{' + '.join(map(str, counts))} entries verified, {len(mismatches)} mismatches"]
    for name, idx, got, want in mismatches:
        lines.append(f"  {name}{list(idx)}: computed {got}, printed {want}")
    norms = {
        "SD_minus_AD": tensor_norm(computed["SD"] - q.AD, args.norm),
        "AD": tensor_norm(q.AD, args.norm),
        "AD_Y": tensor_norm(q.AD @ q.Y, args.norm),
    }
    norm_ok = True
    for key, val in norms.items():
        printed = float(PRINTED_NORMS[key])
        ok = abs(val - printed) <= 1e-3 * printed
        norm_ok &= ok
        lines.append(f"||{key}|| ({args.norm}) = {val:.6f}  printed {PRINTED_NORMS[key]} = {printed:.6f}  "
                     f"{'ok' if ok else 'MISMATCH'}")
    bound = perturbation_bound_check(q, args.norm)
    lines.append(f"bound: lhs={bound.lhs:.6f} rhs={bound.rhs:.6f} holds={bound.holds}")
    lines.append(f"identity S^D - A^D = -S^D E A^D = -A^D E S^D (E = S - A): {bound.identity_holds}")
    lines.append(f"same identity with E replaced by Y: {bound.literal_minus_Y_holds}")
    _emit(args, lines, {
        "command": "example", "entries": counts,
        "mismatches": [{"tensor": n, "index": list(i), "computed": str(g), "printed": str(w)}
                       for n, i, g, w in mismatches],
        "norms": norms, "bound": vars(bound)})
    if mismatches:
        n, idx, _, _ = mismatches[0]
        print(f"first mismatch: {n}{list(idx)}", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK if norm_ok and bound.holds else EXIT_VERIFY


def cmd_perturb(args) -> int:
    from .verify import run_perturbation_experiment
    result = run_perturbation_experiment(epsilons=args.epsilons, trials=args.trials, seed=args.seed)
    if args.out:
        Path(args.out).write_text(result.to_csv())
    if args.report == "structured":
        print(json.dumps(result.as_dict(), indent=1, default=str))
    else:
        print(result.to_text("max"))
        print()
        print(result.to_text("mean"))
    return EXIT_OK


def _epsilons(text: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad epsilon list {text!r}") from exc
    if not vals or any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("epsilons must be positive")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tensordrazin",
                                description="Drazin inverses of tensors and of modified tensors.")
    p.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", choices=("text", "structured"), default="text")
    dom = argparse.ArgumentParser(add_help=False)
    dom.add_argument("--domain", choices=("rational", "float64"), default="rational")
    dom.add_argument("--out", help="write the result tensor to this file")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("drazin", parents=[common, dom], help="Drazin inverse of one tensor")
    d.add_argument("input")
    d.set_defaults(func=cmd_drazin)

    for name, fn, hlp in (("modified", cmd_modified, "S^D (or Z^D) by a named formula"),
                          ("check", cmd_check, "report every hypothesis")):
        s = sub.add_parser(name, parents=[common, dom], help=hlp)
        for t in "ABCD":
            s.add_argument(t)
        if name == "modified":
            s.add_argument("--formula", default="auto")
        s.set_defaults(func=fn)

    e = sub.add_parser("example", parents=[common], help="recompute the embedded worked example")
    e.add_argument("--norm", choices=("frobenius", "spectral"), default="frobenius")
    e.set_defaults(func=cmd_example)

    r = sub.add_parser("perturb", parents=[common], help="random perturbation experiment")
    r.add_argument("--epsilons", type=_epsilons, default=[10.0, 1e-1, 1e-3, 1e-5])
    r.add_argument("--trials", type=int, default=32)
    r.add_argument("--seed", type=int, default=42)
    r.add_argument("--out", help="write the table as CSV")
    r.set_defaults(func=cmd_perturb)
    return p


def main(argv=None) -> int:
    from .modified.conditions import HypothesisError
    from .modified.formulas import UnknownFormulaError

    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    except UnknownFormulaError as exc:
        print(f"error: unknown formula {exc.args[0]!r}", file=sys.stderr)
        return EXIT_IO
    except VerificationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VERIFY
    except (OSError, ValueError, DimensionError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
