"""
Command line front end.

Every verb is a thin wrapper around one library call; the numbers in a
report's JSON block are exactly the library objects' ``to_dict`` output.
Wall-clock timing is printed in the human text only, so the JSON block is
deterministic for fixed inputs and version.

Exit codes: 0 pass, 1 verdict fail, 2 input error, 3 budget refusal.
"""
import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field

from . import __version__
from .counting import count_sequence
from .errors import BudgetExceeded, InputError, ZetaforgeError
from .gallery import builtin_gallery, gallery_get
from .mckay import mckay_check
from .padic import PadicContext, canonical_measure, tube_measure, weil_measure
from .schemes import (TRIVIAL_CANONICAL, BirationalPairSpec, ChartAtlas, VarietySpec,
                      load_spec, validate_spec)
from .zeta import (auto_reconstruct, compare_zeta, pade_reconstruct, weight_split,
                   zeta_series)

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class BudgetRefusal(ZetaforgeError):
    """A count table came back truncated."""


@dataclass
class RunReport:
    command: str
    inputs: dict
    results: dict = field(default_factory=dict)
    verdict: object = None  # True, False, or None when the verb makes no claim
    notes: list = field(default_factory=list)
    timing: float = 0.0

    @property
    def exit_code(self):
        return EXIT_FAIL if self.verdict is False else EXIT_PASS

    def to_dict(self):
        v = None if self.verdict is None else ("PASS" if self.verdict else "FAIL")
        return {"command": self.command, "version": __version__, "inputs": self.inputs,
                "results": self.results, "verdict": v, "notes": list(self.notes)}

    def to_json(self):
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def render(self, text):
        head = f"zetaforge {self.command}  ({self.timing:.3f} s)"
        verdict = self.to_dict()["verdict"]
        tail = f"verdict: {verdict}\n" if verdict else ""
        return f"{head}\n{text.rstrip()}\n{tail}--- json ---\n{self.to_json()}\n"


def resolve(ref):
    """A gallery name (with or without 'gallery:') or a JSON spec file."""
    if ref.startswith("gallery:") or (not os.path.exists(ref) and ref in builtin_gallery()):
        return gallery_get(ref)
    if not os.path.exists(ref):
        raise InputError(f"{ref}: no such file or gallery entry")
    return load_spec(ref)


def _ints(text):
    """'3,5,7' or '1-4' -> list of ints."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        else:
            out.append(int(part))
    if not out:
        raise InputError(f"empty integer list {text!r}")
    return out


def _table(spec, p, rmax, args):
    table = count_sequence(spec, p, rmax, args.budget, args.workers)
    if table.truncated:
        raise BudgetRefusal(
            f"{spec.name} at p = {p}: budget {args.budget or 'default'} stopped the table "
            f"after r = {table.R}; r = {table.R + 1} needs {table.required_budget} evaluations")
    return table


# -- verbs ----------------------------------------------------------------------

def cmd_count(args):
    spec = resolve(args.spec)
    report = RunReport("count", {"spec": spec.name, "p": args.p, "rmax": args.rmax})
    table = count_sequence(spec, args.p, args.rmax, args.budget, args.workers)
    report.results["table"] = table.to_dict()
    if table.truncated:
        report.notes.append(f"budget refused r = {table.R + 1} "
                            f"(needs {table.required_budget} evaluations)")
    return report, table.to_text(), table.truncated


def cmd_zeta(args):
    spec = resolve(args.spec)
    report = RunReport("zeta", {"spec": spec.name, "p": args.p, "rmax": args.rmax,
                                "degrees": "auto" if args.auto or args.deg_num is None
                                else [args.deg_num, args.deg_den]})
    table = _table(spec, args.p, args.rmax, args)
    series = zeta_series(table)
    if args.deg_num is None or args.auto:
        z = auto_reconstruct(series)
    else:
        if args.deg_den is None:
            raise InputError("--deg-num needs --deg-den")
        z = pade_reconstruct(series, args.deg_num, args.deg_den)
    report.results.update(table=table.to_dict(), series=series.coefficients, zeta=z.to_dict())
    lines = [table.to_text(), f"Z(t) = {z}"]
    if getattr(spec, "is_proper", False):
        split = weight_split(z, args.p, spec.dimension)
        report.results["weights"] = split.to_dict()
        report.verdict = True
        lines.append(split.to_text())
    else:
        report.notes.append("open variety: no weight split attempted")
    return report, "\n".join(lines), False


def _pair(args):
    if len(args.specs) == 1:
        pair = resolve(args.specs[0])
        if not isinstance(pair, BirationalPairSpec):
            raise InputError(f"{args.specs[0]} is not a birational pair; pass two specs instead")
        return pair
    if len(args.specs) != 2:
        raise InputError("compare takes one pair or two specs")
    left, right = (resolve(s) for s in args.specs)
    return BirationalPairSpec(f"{left.name}~{right.name}", left, right, TRIVIAL_CANONICAL,
                              "ad hoc pair from the command line")


def cmd_compare(args):
    pair = _pair(args)
    primes = _ints(args.primes)
    report = RunReport("compare", {"pair": pair.name, "primes": primes, "rmax": args.rmax})
    lines, ok = [], True
    for p in primes:
        cmp = compare_zeta(pair, p, args.rmax, args.budget, args.workers)
        report.results[str(p)] = cmp.to_dict()
        ok &= cmp.verdict
        where = "" if cmp.first_mismatch is None else f", first mismatch r = {cmp.first_mismatch}"
        lines.append(f"p = {p}: {pair.left.name} {cmp.left.counts} | "
                     f"{pair.right.name} {cmp.right.counts} [{cmp.mode}{where}]")
        if cmp.left.truncated or cmp.right.truncated:
            raise BudgetRefusal(f"budget truncated the tables at p = {p}")
    report.verdict = ok
    return report, "\n".join(lines), False


def cmd_measure(args):
    spec = resolve(args.spec)
    report = RunReport("measure", {"spec": spec.name, "p": args.p, "mode": args.mode})
    if args.mode == "tube":
        if not isinstance(spec, VarietySpec):
            raise InputError("tube mode needs an affine variety spec")
        levels = _ints(args.m) if args.m else [args.k]
        report.inputs["m"] = levels
        values = {}
        for m in levels:
            v = tube_measure(spec, spec.ambient.dim, PadicContext(args.p, m), m,
                             args.budget, args.workers)
            values[str(m)] = f"{v.numerator}/{v.denominator}"
        report.results["tube"] = values
        return report, "\n".join(f"m = {m}: {v}" for m, v in values.items()), False
    report.inputs["k"] = args.k
    ctx = PadicContext(args.p, args.k)
    if args.mode == "weil":
        res = weil_measure(spec, ctx, budget=args.budget, workers=args.workers)
    else:
        if not isinstance(spec, ChartAtlas):
            raise InputError("canonical mode needs a chart atlas")
        res = canonical_measure(spec, ctx, budget=args.budget, workers=args.workers)
    report.results["measure"] = res.to_dict()
    report.verdict = res.stabilized
    text = (f"{args.mode} measure of {spec.name} at p = {args.p}, k = {args.k}: {res.value}"
            f" ({'stable' if res.stabilized else 'NOT stable'} at k + 1, {res.disk_count} disks)")
    return report, text, False


def cmd_mckay(args):
    ns, primes = _ints(args.n), _ints(args.primes)
    report = RunReport("mckay", {"n": ns, "primes": primes, "rmax": args.rmax})
    lines, ok = [], True
    for n in ns:
        rep = mckay_check(n, primes, args.rmax, args.budget, args.workers)
        if any(t.truncated for t in rep.tables + rep.singular_tables):
            raise BudgetRefusal(f"budget truncated a count table for A_{n}")
        report.results[str(n)] = rep.to_dict()
        ok &= rep.verdict
        lines.append(f"A_{n}: C(q) coefficients {rep.fitted}, C(1) = {rep.c_at_one}, "
                     f"classes = {rep.conjugacy_classes}"
                     + (f", excluded {sorted(rep.excluded)}" if rep.excluded else ""))
    report.verdict = ok
    return report, "\n".join(lines), False


def cmd_gallery(args):
    entries = {name: type(spec).__name__ for name, spec in builtin_gallery().items()}
    report = RunReport("gallery", {})
    report.results["entries"] = entries
    return report, "\n".join(f"{k:24s} {v}" for k, v in entries.items()), False


def cmd_validate(args):
    spec = resolve(args.spec)
    val = validate_spec(spec)
    report = RunReport("validate", {"spec": spec.name})
    report.results["violations"] = list(val.violations)
    report.verdict = val.ok
    return report, "\n".join(val.violations) or "no violations", False


# -- entry point -------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="zetaforge", description=__doc__.split("\n\n")[0].strip())
    parser.add_argument("--version", action="version", version=__version__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget", type=int, default=None,
                        help="evaluation cap (default: $ZETAFORGE_BUDGET or 1e9)")
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--json", action="store_true", help="print only the JSON block")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("count", parents=[common], help="point counts N_1..N_R")
    p.add_argument("spec")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--rmax", type=int, default=3)
    p.set_defaults(run=cmd_count)

    p = sub.add_parser("zeta", parents=[common], help="zeta function and Betti numbers")
    p.add_argument("spec")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--rmax", type=int, default=6)
    p.add_argument("--deg-num", type=int)
    p.add_argument("--deg-den", type=int)
    p.add_argument("--auto", action="store_true")
    p.set_defaults(run=cmd_zeta)

    p = sub.add_parser("compare", parents=[common], help="compare the two sides of a pair")
    p.add_argument("specs", nargs="+")
    p.add_argument("--primes", default="3,5,7")
    p.add_argument("--rmax", type=int, default=2)
    p.set_defaults(run=cmd_compare)

    p = sub.add_parser("measure", parents=[common], help="p-adic measures")
    p.add_argument("spec")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--mode", choices=("weil", "canonical", "tube"), default="weil")
    p.add_argument("--m", help="tube levels, e.g. 1-4 or 1,2")
    p.set_defaults(run=cmd_measure)

    p = sub.add_parser("mckay", parents=[common], help="cyclic McKay check")
    p.add_argument("--n", default="1,2,4")
    p.add_argument("--primes", default="5,7,11,13")
    p.add_argument("--rmax", type=int, default=2)
    p.set_defaults(run=cmd_mckay)

    p = sub.add_parser("gallery", parents=[common], help="list built-in specs")
    p.set_defaults(run=cmd_gallery)

    p = sub.add_parser("validate", parents=[common], help="check a spec for consistency")
    p.add_argument("spec")
    p.set_defaults(run=cmd_validate)
    return parser


def run(argv=None):
    """Parse and execute; returns (exit code, RunReport or None, message)."""
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        report, text, refused = args.run(args)
    except BudgetRefusal as exc:
        return EXIT_BUDGET, None, f"budget refusal: {exc}"
    except BudgetExceeded as exc:
        return EXIT_BUDGET, None, f"budget refusal: {exc}"
    except (InputError, OSError, json.JSONDecodeError, KeyError, TypeError) as exc:
        return EXIT_INPUT, None, f"input error: {exc}"
    except ZetaforgeError as exc:
        return EXIT_FAIL, None, f"failed: {type(exc).__name__}: {exc}"
    report.timing = time.perf_counter() - start
    code = EXIT_BUDGET if refused else report.exit_code
    out = report.to_json() + "\n" if args.json else report.render(text)
    return code, report, out


def main(argv=None):
    code, _, out = run(argv)
    stream = sys.stdout if code in (EXIT_PASS, EXIT_FAIL) else sys.stderr
    stream.write(out if out.endswith("\n") else out + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
