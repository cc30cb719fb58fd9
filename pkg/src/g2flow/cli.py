"""Command-line interface: ``g2flow <command> [flags]``.

Exit status is 0 when every check the command performs passes, 1 when a
check fails and 2 for invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import coframe as cf
from . import flows
from .exterior import KForm, unit_star
from .g2warp import (G2Torsion, PreconditionError, WarpedG2Structure, build_phi, check_class_conditions,
                     classify_g2, g2_torsion_direct, g2_torsion_warped, unit_circle)
from .notation import NotationError
from .scalars import TimeScalar, render_rational, ts_eval
from .su3 import SU3Structure, TorsionInconsistency, classify_su3, torsion


class UsageError(ValueError):
    pass


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip().lstrip("+"))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not an exact rational: {text!r}") from exc


def _assignments(items) -> dict:
    out = {}
    for item in items or []:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"expected name=value, got {item!r}")
        out[name.strip()] = _rational(value)
    return out


def render(x) -> str:
    if isinstance(x, KForm):
        return x.render()
    if isinstance(x, Fraction):
        return render_rational(x)
    if isinstance(x, int):
        return str(x)
    return x.render() if hasattr(x, "render") else str(x)


# Input resolution ------------------------------------------------------------

def load_frame(args) -> cf.Coframe:
    params = _assignments(getattr(args, "param", None))
    unknown = set(params) - {"a"}
    if unknown:
        raise UsageError(f"unknown parameter(s): {', '.join(sorted(unknown))}; only a (for A5,17) is accepted")
    if getattr(args, "file", None):
        if args.algebra:
            raise UsageError("use either --algebra or --file, not both")
        path = Path(args.file)
        frame = cf.parse_structure_equations(path.read_text(), 6, path.stem)
    elif args.algebra:
        frame = cf.get(args.algebra, params.get("a", 1))
    else:
        raise UsageError("an algebra is required (--algebra NAME or --file PATH)")
    report = cf.validate(frame)
    if not report.ok:
        bad = ", ".join(f"d(dh^{i}) = {r.render()}" for i, r in report.failures())
        raise UsageError(f"structure equations of {frame.name} violate d^2 = 0: {bad}")
    return frame


def orientation(args) -> tuple:
    alpha = _rational(args.alpha) if args.alpha is not None else Fraction(0)
    beta = _rational(args.beta) if args.beta is not None else Fraction(1)
    try:
        unit_circle(alpha, beta)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return alpha, beta


def warp_constant(args) -> Fraction:
    c = _rational(args.c) if args.c is not None else Fraction(1)
    if c <= 0:
        raise UsageError("the warp constant c must be positive")
    return c


def sample_times(args) -> list:
    if not getattr(args, "sample_t", None):
        return []
    return [_rational(t) for t in args.sample_t.split(",") if t.strip()]


# Commands --------------------------------------------------------------------

def cmd_catalog(args) -> tuple:
    names = cf.catalog_names()
    if args.name:
        frame = cf.get(args.name, _assignments(args.param).get("a", 1))
        names = [frame.name]
    entries = []
    for name in names:
        frame = cf.get(name, _assignments(args.param).get("a", 1))
        label, _ = classify_su3(torsion(SU3Structure(frame)))
        entries.append({"name": frame.name, "structure_equations": frame.render(), "class": label})
    text = "\n".join(f"{e['name']:<10} {e['structure_equations']}  {e['class']}" for e in entries)
    return {"algebras": entries}, text, True


def su3_report(frame: cf.Coframe) -> dict:
    tor = torsion(SU3Structure(frame))
    label, _ = classify_su3(tor)
    out = {"algebra": frame.name}
    out.update({name: render(getattr(tor, name)) for name in tor.FIELDS})
    out["class"] = label
    return out


def cmd_torsion(args) -> tuple:
    rep = su3_report(load_frame(args))
    text = "\n".join(f"{k}: {v}" for k, v in rep.items())
    return rep, text, True


def g2_report(frame: cf.Coframe, alpha, beta, c) -> tuple:
    s = SU3Structure(frame)
    w = WarpedG2Structure(s, alpha, beta, TimeScalar.const(c))
    direct = g2_torsion_direct(w)
    warped = g2_torsion_warped(torsion(s), w)
    agree = direct == warped
    rep = {"algebra": frame.name, "alpha": render(w.alpha), "beta": render(w.beta)}
    rep.update({name: render(getattr(direct, name)) for name in G2Torsion.FIELDS})
    rep["g2_class"] = classify_g2(direct)
    rep["theorem23_agree"] = agree
    return rep, w


def cmd_warp(args) -> tuple:
    frame = load_frame(args)
    alpha, beta = orientation(args)
    rep, _ = g2_report(frame, alpha, beta, warp_constant(args))
    text = "\n".join(f"{k}: {v}" for k, v in rep.items())
    return rep, text, rep["theorem23_agree"]


def cmd_classify(args) -> tuple:
    frame = load_frame(args)
    alpha, beta = orientation(args)
    s = SU3Structure(frame)
    su3_label, nonzero = classify_su3(torsion(s))
    w = WarpedG2Structure(s, alpha, beta, TimeScalar.const(warp_constant(args)))
    cond = check_class_conditions(w)
    rep = {
        "algebra": frame.name,
        "su3_class": su3_label,
        "su3_nonzero": list(nonzero),
        "alpha": render(w.alpha),
        "beta": render(w.beta),
        "g2_class": cond["direct_class"],
        "predicted_g2_class": cond["predicted_class"],
        "conditions": {k: v for k, v in cond["conditions"].items()},
        "agree": cond["agree"],
    }
    text = "\n".join([
        f"algebra: {frame.name}",
        f"SU(3) class: {su3_label}",
        f"G2 class ({rep['alpha']}, {rep['beta']}): {rep['g2_class']}",
        "conditions: " + " ".join(f"{k}={'yes' if v else 'no'}" for k, v in rep["conditions"].items()),
        f"conditions agree with direct torsion: {cond['agree']}",
    ])
    return rep, text, cond["agree"]


def cmd_laplacian(args) -> tuple:
    frame = load_frame(args)
    alpha, beta = orientation(args)
    w = WarpedG2Structure(SU3Structure(frame), alpha, beta, TimeScalar.const(warp_constant(args)))
    p, sp = build_phi(w)
    lap_phi = flows.laplacian7(p, w)
    lap_star = flows.laplacian7(sp, w)
    commutes = lap_star == unit_star(lap_phi)
    rep = {"algebra": frame.name, "alpha": render(w.alpha), "beta": render(w.beta),
           "laplacian_phi": render(lap_phi), "laplacian_star_phi": render(lap_star),
           "commutes_with_star": commutes, "closed_formula": None, "coclosed_formula": None}
    ok = commutes
    for key, fn in (("closed_formula", flows.laplacian_closed_formula),
                    ("coclosed_formula", flows.laplacian_coclosed_formula)):
        try:
            rep[key] = render(fn(w))
        except PreconditionError:
            pass
        except ArithmeticError as exc:
            rep[key] = f"MISMATCH: {exc}"
            ok = False
    text = "\n".join(f"{k}: {v}" for k, v in rep.items())
    return rep, text, ok


def _case_solution(args) -> flows.FlowSolution:
    c = warp_constant(args)
    if args.case == "nk-s3s3":
        return flows.nk_solution(-2, c)
    if args.case == "e11e11":
        return flows.e11_solution(c)
    frame = load_frame(args)
    cls = args.su3class or _default_class(frame)
    rep = flows.solve_potential_ansatz(frame, cls, c=c)
    if not rep.solutions:
        raise UsageError(f"the ansatz has no solution on {frame.name}: {'; '.join(rep.diagnostics)}")
    return rep.solutions[0]


def _default_class(frame: cf.Coframe) -> str:
    label, _ = classify_su3(torsion(SU3Structure(frame)))
    return label


def _samples(res: flows.CoflowResidual, times: list, validity: tuple) -> list:
    lo, hi = validity
    out = []
    for t in times:
        if (lo is not None and t <= lo) or (hi is not None and t >= hi):
            out.append({"t": render_rational(t), "error": "outside the validity interval"})
            continue
        try:
            worst = max((abs(ts_eval(c, t)) for c in res.frame.terms.values()), default=0.0)
            out.append({"t": render_rational(t), "max_abs_residual": worst})
        except ValueError as exc:
            out.append({"t": render_rational(t), "error": str(exc)})
    return out


def cmd_verify(args) -> tuple:
    if args.case is None and not (args.algebra or args.file):
        raise UsageError("verify needs --case nk-s3s3|e11e11 or an algebra")
    sol = _case_solution(args)
    for name, delta in _assignments(args.perturb).items():
        try:
            sol = sol.perturbed(name, delta)
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    rec = flows.solution_record(sol)
    res = flows.coflow_residual(sol)
    rec["reduced_system_agrees"] = res.agree
    rec["coclosed_along_family"] = res.coclosed
    rec["offending_monomials"] = [
        {"monomial": "x^" + "".join(map(str, idx)), "coefficient": render(c)} for idx, c in res.offending()]
    rec["samples"] = _samples(res, sample_times(args), sol.validity)
    text = [f"{k}: {v}" for k, v in rec.items() if k not in ("offending_monomials", "samples")]
    text += [f"  {m['monomial']}: {m['coefficient']}" for m in rec["offending_monomials"]]
    text += [f"  t={s['t']}: {s.get('max_abs_residual', s.get('error'))}" for s in rec["samples"]]
    return rec, "\n".join(text), rec["residual_zero"] and res.agree


def cmd_solve(args) -> tuple:
    frame = load_frame(args)
    cls = args.su3class or _default_class(frame)
    cls = flows.CLASS_ALIASES.get(cls, cls)
    label = _default_class(frame)
    if label != cls:
        raise UsageError(f"{frame.name} is {label}, not {cls}")
    if cls not in (flows.SHF, flows.BALANCED):
        raise UsageError("solve handles shf and balanced bases; use verify --case nk-s3s3 for nearly Kahler")
    rep = flows.solve_potential_ansatz(frame, cls, c=warp_constant(args))
    records = [flows.solution_record(s) for s in rep.solutions]
    out = {"algebra": frame.name, "class": cls, "solutions": records, "diagnostics": rep.diagnostics,
           "stationary": len(rep.stationary)}
    lines = [f"{frame.name} ({cls}): {len(records)} solution(s)"]
    for r in records:
        lines.append(f"  alphas=({', '.join(r['alphas'])}) beta_or_rate={r['beta_or_rate']} k={r['k']} "
                     f"warp={r['warp']} validity={r['validity']} residual_zero={r['residual_zero']}")
        lines.append(f"  column: {r['torsion_column']}")
    lines += [f"  note: {d}" for d in rep.diagnostics]
    ok = bool(records) and all(r["residual_zero"] for r in records)
    return out, "\n".join(lines), ok


def cmd_tables(args) -> tuple:
    results = flows.reproduce_tables(args.which)
    rows = []
    for r in results:
        e = r.expected
        got = r.matched
        rows.append({
            "algebra": e.algebra if e.algebra != "A5,17" else f"A5,17(a={render_rational(e.a)})",
            "class": e.su3class,
            "alphas": [render_rational(x) for x in (got.alphas if got else e.alphas)],
            "beta": render_rational(got.beta if got else e.beta),
            "k": render_rational(got.k if got else e.k),
            "torsion_column": r.column,
            "residual_zero": r.residual_zero,
            "status": "PASS" if r.ok else "FAIL",
        })
    header = f"{'algebra':<14}{'alpha_1..alpha_6':<42}{'beta':<7}{'k':<7}status"
    lines = [header]
    for row in rows:
        lines.append(f"{row['algebra']:<14}{'(' + ','.join(row['alphas']) + ')':<42}{row['beta']:<7}{row['k']:<7}"
                     f"{row['status']}")
        lines.append(f"{'':<14}{row['torsion_column']}")
    ok = all(row["status"] == "PASS" for row in rows)
    failures = [row["algebra"] for row in rows if row["status"] != "PASS"]
    return {"rows": rows, "failures": failures}, "\n".join(lines), ok


COMMANDS = {
    "catalog": cmd_catalog,
    "torsion": cmd_torsion,
    "classify": cmd_classify,
    "warp": cmd_warp,
    "laplacian": cmd_laplacian,
    "verify": cmd_verify,
    "solve": cmd_solve,
    "tables": cmd_tables,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--algebra", help="catalog name, e.g. h3 or su2+su2")
    common.add_argument("--file", help="structure equations in Salamon notation")
    common.add_argument("--param", action="append", metavar="NAME=VALUE", help="algebra parameter, e.g. a=2")
    common.add_argument("--alpha", help="orientation alpha as p/q (default 0)")
    common.add_argument("--beta", help="orientation beta as p/q (default 1)")
    common.add_argument("--c", help="warp constant (default 1)")
    common.add_argument("--sample-t", dest="sample_t", help="comma-separated times for numeric spot checks")

    parser = argparse.ArgumentParser(prog="g2flow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("catalog", parents=[common], help="list catalog algebras")
    p.add_argument("--name")
    sub.add_parser("torsion", parents=[common], help="SU(3) torsion forms")
    sub.add_parser("classify", parents=[common], help="SU(3) and warped G2 classes")
    sub.add_parser("warp", parents=[common], help="G2 torsion of the warped structure")
    sub.add_parser("laplacian", parents=[common], help="Hodge Laplacian of phi and *phi")
    p = sub.add_parser("verify", parents=[common], help="coflow residual of a solution")
    p.add_argument("--case", choices=("nk-s3s3", "e11e11"))
    p.add_argument("--class", dest="su3class", choices=("shf", "balanced"))
    p.add_argument("--perturb", action="append", metavar="NAME=DELTA")
    p = sub.add_parser("solve", parents=[common], help="solve the potential ansatz")
    p.add_argument("--class", dest="su3class", choices=("shf", "balanced"))
    p = sub.add_parser("tables", parents=[common], help="reproduce the solution tables")
    p.add_argument("--which", choices=("shf", "balanced", "both"), default="both")
    return parser


def emit(report: dict, fmt: str, text: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True)
    return text


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report, text, ok = COMMANDS[args.command](args)
    except (UsageError, NotationError, cf.UnknownAlgebra, PreconditionError, FileNotFoundError) as exc:
        message = str(exc)
        if args.format == "json":
            print(json.dumps({"error": message, "failures": [message]}, indent=2, sort_keys=True))
        else:
            print(f"error: {message}", file=sys.stderr)
        return 2
    except TorsionInconsistency as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(emit(report, args.format, text))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
