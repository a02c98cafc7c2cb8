"""Command-line interface.

Exit codes: 0 pass, 1 checked and failed, 2 inconclusive, 3 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .diagram import DiagramError
from .families import dim2_conjugate, dim2_family, dim2_samples, manifold_gallery
from .kirby import (
    DEFAULT_SIZE_CAP,
    SizeCapExceeded,
    certify_invariance,
    compat_kernel,
    fr_defect,
)
from .parsing import ParseError, parse_braid, parse_link, parse_sequence, parse_tangle
from .rep import SMatrix, certify_smatrix, evaluate, link_invariant
from .scalars import Engine, format_scalar
from .skein import BetaSequence, skein_relation, verify_skein
from .smatrix_io import SMatrixFormatError, read_smatrix

__all__ = ["main", "build_parser", "UsageError"]

EXIT_PASS, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _global_flags(parser: argparse.ArgumentParser, suppress: bool) -> None:
    def default(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--engine", choices=("float", "exact"), default=default(None),
                        help="scalar field (default: the engine recorded in the S-matrix file)")
    parser.add_argument("--epsilon", type=float, default=default(None),
                        help="entrywise tolerance in float mode")
    parser.add_argument("--size-cap", type=int, default=default(DEFAULT_SIZE_CAP),
                        help="largest number of unknowns in a linear solve")
    parser.add_argument("--json", metavar="PATH", default=default(None),
                        help="also write the report as JSON")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="kirbyrep", description="Tangle representations from S-matrices.")
    _global_flags(parser, suppress=False)
    common = _Parser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = command("certify", "check the S-matrix conditions")
    p.add_argument("smatrix")

    p = command("eval", "evaluate a tangle")
    p.add_argument("smatrix")
    p.add_argument("tangle")
    p.add_argument("--unchecked", action="store_true", help="skip S-matrix certification")

    p = command("invariant", "evaluate a framed link")
    p.add_argument("smatrix")
    p.add_argument("link")
    p.add_argument("--unchecked", action="store_true", help="skip S-matrix certification")

    p = command("kirby", "run an invariance certificate")
    p.add_argument("smatrix")
    p.add_argument("--strategy", choices=("zentral", "sym", "symmetric", "irreducible"),
                   default="zentral")
    p.add_argument("--nmax", type=int, default=2)

    p = command("compat", "kernel of the S-compatibility system")
    p.add_argument("smatrix")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--symmetric", action="store_true")

    p = command("skein", "skein relation of a braid")
    p.add_argument("smatrix")
    p.add_argument("--braid", required=True, help="generator list such as '1 -2 1'")
    p.add_argument("--strands", type=int, default=None)
    p.add_argument("--verify", metavar="SEQUENCE", default=None,
                   help="sequence file to check the relation on")

    p = command("scan-dim2", "certify sampled members of the two-dimensional family")
    p.add_argument("--samples", type=int, default=25)
    p.add_argument("--off-variety", type=int, default=0,
                   help="also scan this many samples with k^2 p q != 1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--conjugated", action="store_true",
                   help="scan the basis-changed family indexed by k instead")

    p = command("gallery", "values on simple surgery presentations")
    p.add_argument("smatrix")
    p.add_argument("--nmax", type=int, default=3)
    p.add_argument("--unchecked", action="store_true", help="skip S-matrix certification")
    return parser


def _engine(args, file_engine: Engine | None = None) -> Engine:
    kind = args.engine or (file_engine.kind if file_engine else "exact")
    if args.epsilon is not None and args.epsilon < 0:
        raise UsageError("--epsilon must be nonnegative")
    if kind == "exact":
        return Engine("exact", 0.0)
    eps = args.epsilon
    if eps is None:
        eps = file_engine.epsilon if file_engine and not file_engine.exact else 1e-9
    return Engine("float", eps)


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load(args):
    f = read_smatrix(args.smatrix)
    engine = _engine(args, f.engine)
    v = f.S.v
    if args.size_cap < v**4:
        raise UsageError(f"--size-cap must be at least v^4 = {v**4}")
    return f.S.with_engine(engine), engine


def _smatrix(args, out):
    """Certified S-matrix, or ``None`` after printing the failed report."""
    S, engine = _load(args)
    if getattr(args, "unchecked", False):
        return SMatrix.unchecked(S, engine)
    sm, report = certify_smatrix(S, engine)
    if sm is None:
        out.append(report.format())
        out.append("not an S-matrix; pass --unchecked to evaluate anyway")
    return sm


def _format_map(m) -> str:
    if m.dom == 0 and m.cod == 0:
        return format_scalar(m.scalar_value())
    rows = [[format_scalar(x) for x in row] for row in m.data]
    width = max(len(x) for row in rows for x in row)
    head = f"map V^{m.dom} -> V^{m.cod} ({m.data.shape[0]}x{m.data.shape[1]})"
    return "\n".join([head] + ["  " + " ".join(x.rjust(width) for x in row) for row in rows])


# --------------------------------------------------------------------------
# subcommands, each returning (exit code, text lines, json payload)

def _cmd_certify(args):
    S, engine = _load(args)
    _, report = certify_smatrix(S, engine)
    return (EXIT_PASS if report.passed else EXIT_FAIL), [report.format()], report.to_dict()


def _cmd_eval(args):
    out = []
    sm = _smatrix(args, out)
    if sm is None:
        return EXIT_FAIL, out, {"pass": False}
    word = parse_tangle(_read_text(args.tangle))
    m = evaluate(word, sm)
    payload = {"dom": m.dom, "cod": m.cod,
               "entries": [[format_scalar(x) for x in row] for row in m.data]}
    return EXIT_PASS, [_format_map(m)], payload


def _cmd_invariant(args):
    out = []
    sm = _smatrix(args, out)
    if sm is None:
        return EXIT_FAIL, out, {"pass": False}
    link = parse_link(_read_text(args.link))
    value = format_scalar(link_invariant(link, sm))
    return EXIT_PASS, [value], {"value": value}


def _cmd_kirby(args):
    S, engine = _load(args)
    if args.nmax < 0:
        raise UsageError("--nmax must be nonnegative")
    sm = SMatrix.unchecked(S, engine)
    cert = certify_invariance(sm, args.strategy, args.nmax, size_cap=args.size_cap)
    code = {"pass": EXIT_PASS, "fail": EXIT_FAIL}.get(cert.status, EXIT_INCONCLUSIVE)
    return code, [cert.format()], cert.to_dict()


def _cmd_compat(args):
    out = []
    sm = _smatrix(args, out)
    if sm is None:
        return EXIT_FAIL, out, {"pass": False}
    if args.n < 0:
        raise UsageError("--n must be nonnegative")
    try:
        report = compat_kernel(sm, args.n, "symmetric" if args.symmetric else "plain",
                               size_cap=args.size_cap)
    except SizeCapExceeded as e:
        return EXIT_INCONCLUSIVE, [f"INCONCLUSIVE: {e}"], {"status": "inconclusive",
                                                           "reason": str(e)}
    return EXIT_PASS, [report.format()], report.to_dict()


def _cmd_skein(args):
    out = []
    sm = _smatrix(args, out)
    if sm is None:
        return EXIT_FAIL, out, {"pass": False}
    try:
        braid = parse_braid(args.braid)
    except ParseError as e:
        raise UsageError(f"--braid: {e}") from None
    rel = skein_relation(sm, braid, args.strands)
    out = [f"X = rho({args.braid.strip()}) on {rel.strands} strands", rel.format()]
    payload = {"braid": list(rel.braid), "strands": rel.strands,
               "coefficients": [format_scalar(c) for c in rel.coeffs]}
    if args.verify is None:
        return EXIT_PASS, out, payload
    spec = parse_sequence(_read_text(args.verify))
    seq = BetaSequence.from_spec(spec, braid, rel.strands)
    low = min(seq.powers)
    residual = verify_skein(sm, rel.shifted(low), seq)
    ok = sm.engine.passes(residual)
    out.append(f"{'PASS' if ok else 'FAIL'}: sequence residual {residual:.3g} "
               f"(powers {low}..{low + rel.degree})")
    payload.update({"verify_residual": residual, "pass": ok})
    return (EXIT_PASS if ok else EXIT_FAIL), out, payload


def _cmd_scan_dim2(args):
    if args.samples < 0 or args.off_variety < 0:
        raise UsageError("sample counts must be nonnegative")
    engine = _engine(args)
    rows = []
    if args.conjugated:
        ks = [Fraction(j + 2, 1 + j % 3) for j in range(args.samples)]
        members = [(f"k={format_scalar(k)}", True, dim2_conjugate(k, engine.exact)) for k in ks]
    else:
        members = []
        for on, count in ((True, args.samples), (False, args.off_variety)):
            for p in dim2_samples(count, on_variety=on, seed=args.seed):
                label = "k={} p={} q={}".format(*map(format_scalar, p.as_tuple()))
                members.append((label, on, dim2_family(p, engine.exact)))
    lines = []
    agree = True
    for label, on, S in members:
        _, report = certify_smatrix(S, engine)
        sm = SMatrix.unchecked(S, engine)
        a0 = format_scalar(fr_defect(0, 1, sm).scalar_value())
        b0 = format_scalar(fr_defect(0, -1, sm).scalar_value())
        status = "PASS" if report.passed else f"FAIL at {report.first_failure.name}"
        agree = agree and report.passed == on
        variety = "on " if on else "off"
        lines.append(f"{label:<28} {variety}  A_0={a0:<8} B_0={b0:<8} {status}")
        rows.append({"sample": label, "on_variety": on, "pass": report.passed,
                     "failed": report.failed_keys(), "A0": a0, "B0": b0})
    lines.append("certification matches k^2 p q = 1 on every sample" if agree
                 else "certification disagrees with k^2 p q = 1 on some samples")
    return (EXIT_PASS if agree else EXIT_FAIL), lines, {"samples": rows, "consistent": agree}


def _cmd_gallery(args):
    out = []
    sm = _smatrix(args, out)
    if sm is None:
        return EXIT_FAIL, out, {"pass": False}
    if args.nmax < 1:
        raise UsageError("--nmax must be positive")
    cert = certify_invariance(sm, "zentral", 2, size_cap=args.size_cap)
    gallery = manifold_gallery(sm, args.nmax, invariant=cert.passed)
    return EXIT_PASS, [gallery.format()], gallery.to_dict()


COMMANDS = {
    "certify": _cmd_certify,
    "eval": _cmd_eval,
    "invariant": _cmd_invariant,
    "kirby": _cmd_kirby,
    "compat": _cmd_compat,
    "skein": _cmd_skein,
    "scan-dim2": _cmd_scan_dim2,
    "gallery": _cmd_gallery,
}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        code, lines, payload = COMMANDS[args.command](args)
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                json.dump({"command": args.command, "exit_code": code, **payload}, fh,
                          indent=2, ensure_ascii=False)
                fh.write("\n")
    except UsageError as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    except (OSError, ParseError, SMatrixFormatError, DiagramError, ValueError) as e:
        print(f"error: {e}", file=stderr)
        return EXIT_USAGE
    for line in lines:
        print(line, file=stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
