"""Command-line interface: ``subdiag <command> SPEC [options]``.

Exit codes: 0 success, 2 parse error, 3 precondition failure, 4 cap exceeded.
"""
from __future__ import annotations

import argparse
import sys

from . import balance as bal
from . import density as dens
from . import geometry, render, selfsim
from .core import (SubstitutionError, SubstitutionSyntaxError, fixed_point_prefix, is_continuous,
                   is_primitive, parse_substitution)
from .exact import ComplexSpectrumError, classify, letter_frequencies, pf_weight_vector, substitution_matrix
from .product import diagonal_sequence, diagonal_substitution, product_patch
from .report import Report

EXIT_PARSE, EXIT_PRECONDITION, EXIT_CAP = 2, 3, 4


class CapExceeded(Exception):
    pass


def _pair(text: str) -> tuple[str, str]:
    t = text.strip().strip("()")
    parts = [p.strip() for p in t.split(",")]
    if len(parts) != 2 or not all(len(p) == 1 for p in parts):
        raise argparse.ArgumentTypeError(f"expected a pair like (0,1), got {text!r}")
    return parts[0], parts[1]


def _caps(text: str) -> bal.Caps:
    try:
        a, b = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("caps must look like 64,10000") from None
    return bal.Caps(a, b)


def _emit(rep: Report, args) -> None:
    sys.stdout.write(rep.to_json() + "\n" if args.json else rep.to_text())


def _header(command: str, spec: str) -> Report:
    rep = Report()
    rep.add("command", command)
    rep.add("spec", spec)
    return rep


def cmd_info(args) -> Report:
    s = parse_substitution(args.spec)
    rep = _header("info", str(s))
    m = substitution_matrix(s)
    rep.add("matrix", ";".join(",".join(map(str, row)) for row in m.rows))
    rep.add("primitive", is_primitive(s))
    rep.add("continuous", is_continuous(s))
    spec = classify(s)
    rep.add("lambda", spec.lambda_)
    rep.add("lambda_o", spec.lambda_o)
    rep.add("classification", spec.kind)
    if is_primitive(s):
        w = pf_weight_vector(s)
        rep.add("weights", f"{w.w0},{w.w1}")
        rep.add("frequencies", ",".join(str(f) for f in letter_frequencies(s)))
    return rep


def cmd_fixpoint(args) -> None:
    s = parse_substitution(args.spec)
    sys.stdout.write(fixed_point_prefix(s, args.seed, args.n) + "\n")


def cmd_diagonal(args) -> Report:
    s = parse_substitution(args.spec)
    rep = _header("diagonal", str(s))
    rep.add("seed", f"({args.seed[0]},{args.seed[1]})")
    if args.as_substitution:
        d = diagonal_substitution(s, [args.seed])
        rep.add("diagonal_substitution", d.substitution)
        rep.update("legend.", dict(zip(d.substitution.alphabet, d.substitution.names)))
    rep.add("n", args.n)
    rep.add("sequence", " ".join(f"({x},{y})" for x, y in diagonal_sequence(s, args.seed, args.n)))
    return rep


def cmd_balance(args) -> Report:
    s = parse_substitution(args.spec)
    mode = bal.BALANCED if args.weights == "balanced" else bal.WEIGHTED
    rep = _header("balance", str(s))
    rep.add("mode", mode)
    w = None if mode == bal.BALANCED else pf_weight_vector(s)
    if w is not None:
        rep.add("weights", f"{w.w0},{w.w1}")
    blocks = bal.decompose(s, w, args.n, mode)
    rep.add("decomposition", " ".join(str(b) for b in blocks))
    out = bal.induced_substitution(s, w, args.caps, mode, track_slopes=not args.word_pairs)
    if out.status == bal.CAP_EXCEEDED:
        b = out.offending
        raise CapExceeded(f"{out.reason}; offending block has lengths "
                          f"{len(b.top)}/{len(b.bottom)} and slope {b.left_slope}")
    rep.add("status", out.status)
    rep.add("observed_max_block_length", out.observed_max_block_length)
    rep.add("slope_growth_detected", out.slope_growth_detected)
    rep.add("squared", out.squared)
    if out.status == bal.EMPTY:
        rep.add("reason", out.reason)
        return rep
    ind = out.induced
    rep.add("letters", len(ind))
    rep.add("induced", ind.to_substitution())
    rep.update("legend.", ind.legend())
    return rep


def _series(text: str):
    kind, _, rest = text.partition(":")
    if kind == "plain":
        return dens.PlainCheckpoints()
    if kind == "anchor":
        top, bottom, slope = rest.split("/")
        return dens.AnchoredWindows(bal.Block(top, bottom, int(slope)))
    if kind == "powers":
        parts = rest.split(":")
        base, kmax = int(parts[0]), int(parts[1])
        factor = int(parts[2]) if len(parts) > 2 else 1
        letter = parts[3] if len(parts) > 3 else None
        seed = parts[4] if len(parts) > 4 else "0"
        return dens.FixedPositions(dens.powers(base, kmax, factor), letter, seed,
                                   f"{factor}*{base}^k")
    raise argparse.ArgumentTypeError(f"unknown series rule {text!r}")


def _verdict(rep: Report, prefix: str, v: dens.Verdict) -> None:
    rep.add(f"{prefix}.kind", v.kind)
    if v.value is not None:
        rep.add(f"{prefix}.value", v.value)
    if v.note:
        rep.add(f"{prefix}.note", v.note)
    for k, val in v.evidence.items():
        if isinstance(val, tuple):
            val = ",".join(map(str, val))
        rep.add(f"{prefix}.evidence.{k}", val)
    for n, w in enumerate(v.witnesses):
        rep.add(f"{prefix}.witness.{n}.tag", w.subsequence_tag)
        rep.add(f"{prefix}.witness.{n}.final", w.final)
        rep.add(f"{prefix}.witness.{n}.final_float", f"{float(w.final):.6f}")


def cmd_density(args) -> Report:
    s = parse_substitution(args.spec)
    rep = _header("density", str(s))
    binary = s.alphabet == ("0", "1")
    if not binary and not (args.series and getattr(args.series, "letter", None)):
        raise SubstitutionError("non-binary substitutions support only letter series")
    if binary:
        d = dens.coincidence_prefix_density(s, args.n)
        rep.add("n", args.n)
        rep.add("prefix_density", d)
        rep.add("prefix_density_float", f"{float(d):.6f}")
        if is_primitive(s):
            rep.add("generic_overlap", dens.generic_overlap(s))
    if args.series:
        ser = dens.density_series(s, args.series)
        rep.add("series.tag", ser.subsequence_tag)
        rep.add("series.checkpoints", ",".join(map(str, ser.checkpoints)))
        rep.add("series.ratios", ",".join(f"{float(r):.6f}" for r in ser.ratios))
    if not binary:
        return rep
    _verdict(rep, "theorem", dens.theorem_main_check(s))
    try:
        _verdict(rep, "induced", dens.coincidence_density_via_induced(s))
    except dens.PreconditionError as exc:
        rep.add("induced.kind", dens.INCONCLUSIVE)
        rep.add("induced.note", str(exc))
    return rep


def cmd_selfsim(args) -> Report:
    s = parse_substitution(args.spec)
    r = selfsim.refine(s)
    rep = _header("selfsim", str(s))
    rep.add("lambda", r.lambda_)
    rep.add("eigenvector", f"{r.p},{r.q}")
    rep.update("refined.", dict(zip(r.refined_alphabet, r.names)))
    rep.add("dot", selfsim.dot_substitution(r, s))
    d = selfsim.selfsim_diagonal(r, s, args.seed)
    rep.add("diagonal", d.substitution)
    rep.add("diagonal.letters", len(d))
    rep.update("legend.", dict(zip(d.substitution.alphabet, d.substitution.names)))
    if args.expect:
        phi = selfsim.is_isomorphic(d.substitution, parse_substitution(args.expect))
        rep.add("isomorphic", phi is not None)
        if phi:
            rep.add("isomorphism", ",".join(f"{a}>{b}" for a, b in sorted(phi.items())))
    f = selfsim.diagonal_frequencies(r, s, args.seed, kmax=args.kmax, tile_cells=args.cells)
    rep.add("checkpoints", ",".join(map(str, f.checkpoints)))
    rep.add("final_step", f"{f.steps()[-1]:.3e}" if len(f.checkpoints) > 1 else "nan")
    for name, vals in f.empirical.items():
        rep.add(f"freq.empirical.{name}", f"{float(vals[-1]):.6f}")
    for name, val in (f.exact or {}).items():
        rep.add(f"freq.exact.{name}", val)
    rep.add("tiles.cells", f.tile_cells)
    for name, val in f.tile_counts.items():
        rep.add(f"tiles.count.{name}", f"{float(val):.6f}")
    for name, val in (f.tile_exact or {}).items():
        rep.add(f"tiles.exact.{name}", val)
    return rep


def cmd_curves(args) -> Report:
    s = parse_substitution(args.spec)
    lines, labels = [], []
    for i in "01":
        for n in range(args.order + 1):
            lines.append(geometry.curve_approximant(s, i, n))
            labels.append(f"K{n}({i})")
    svg = render.render_curves(lines, labels=labels)
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    rep = _header("curves", str(s))
    rep.add("order", args.order)
    rep.add("out", args.out)
    rep.add("distances", ",".join(f"{x:.6f}" for x in geometry.approximant_distances(s, "0", args.order)))
    return rep


def cmd_tiling(args) -> Report:
    s = parse_substitution(args.spec)
    if args.selfsimilar:
        svg = render.render_selfsim(s, pf_weight_vector(s), args.iter, seed=args.seed)
    else:
        svg = render.render_patch(product_patch(s, args.seed, args.iter))
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(svg)
    rep = _header("tiling", str(s))
    rep.add("iter", args.iter)
    rep.add("selfsimilar", args.selfsimilar)
    rep.add("out", args.out)
    return rep


def cmd_survey(args) -> Report:
    m = [[args.matrix[0], args.matrix[1]], [args.matrix[2], args.matrix[3]]]
    rows = dens.survey(m, jobs=args.jobs, n=args.n)
    rep = Report()
    rep.add("command", "survey")
    rep.add("matrix", ",".join(map(str, args.matrix)))
    rep.add("rows", len(rows))
    for k, r in enumerate(rows):
        rep.add(f"row.{k}.spec", r.spec)
        rep.add(f"row.{k}.classification", r.classification)
        rep.add(f"row.{k}.verdict", r.verdict.kind)
        if r.verdict.value is not None:
            rep.add(f"row.{k}.value", r.verdict.value)
        rep.add(f"row.{k}.empirical", f"{float(r.empirical):.6f}")
        rep.add(f"row.{k}.empirical_n", r.empirical_n)
        for n, w in enumerate(r.verdict.witnesses):
            rep.add(f"row.{k}.witness.{n}", f"{w.subsequence_tag}={float(w.final):.6f}")
        if r.verdict.note:
            rep.add(f"row.{k}.note", r.verdict.note)
    rep.update("tally.", dens.tally(rows))
    return rep


def _matrix(text: str) -> list[int]:
    try:
        vals = [int(x) for x in text.split(",")]
    except ValueError:
        vals = []
    if len(vals) != 4:
        raise argparse.ArgumentTypeError("matrix must look like 2,1,2,3")
    return vals


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="subdiag", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, spec=True, help=""):
        q = sub.add_parser(name, help=help)
        if spec:
            q.add_argument("spec", help='substitution such as "0->010;1->11010"')
        q.add_argument("--json", action="store_true", help="structured output")
        q.set_defaults(func=func)
        return q

    add("info", cmd_info, help="matrix, eigenvalues, classification")
    q = add("fixpoint", cmd_fixpoint, help="fixed point prefix")
    q.add_argument("--seed", default="0")
    q.add_argument("--n", type=int, default=100)
    q = add("diagonal", cmd_diagonal, help="diagonal pair sequence")
    q.add_argument("--seed", type=_pair, default=("0", "1"))
    q.add_argument("--n", type=int, default=20)
    q.add_argument("--as-substitution", action="store_true")
    q = add("balance", cmd_balance, help="block decomposition and induced substitution")
    q.add_argument("--weights", choices=("auto", "balanced"), default="auto")
    q.add_argument("--caps", type=_caps, default=bal.Caps())
    q.add_argument("--n", type=int, default=30, help="prefix length shown decomposed")
    q.add_argument("--word-pairs", action="store_true", help="ignore slopes in block identity")
    q = add("density", cmd_density, help="coincidence density and verdicts")
    q.add_argument("--n", type=int, default=100_000)
    q.add_argument("--series", type=_series)
    q = add("selfsim", cmd_selfsim, help="self-similar refinement and diagonal frequencies")
    q.add_argument("--seed", type=_pair, default=("0", "1"))
    q.add_argument("--expect")
    q.add_argument("--kmax", type=int, default=16)
    q.add_argument("--cells", type=int, default=10 ** 6)
    q = add("curves", cmd_curves, help="SVG of curve approximants")
    q.add_argument("--order", type=int, default=2)
    q.add_argument("--out", required=True)
    q = add("tiling", cmd_tiling, help="SVG of a product patch")
    q.add_argument("--iter", type=int, default=3)
    q.add_argument("--seed", type=_pair, default=("0", "1"))
    q.add_argument("--selfsimilar", action="store_true")
    q.add_argument("--out", required=True)
    q = add("survey", cmd_survey, spec=False, help="verdicts for all substitutions with a matrix")
    q.add_argument("--matrix", type=_matrix, required=True)
    q.add_argument("--jobs", type=int, default=1)
    q.add_argument("--n", type=int, default=1_000_000)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        rep = args.func(args)
    except SubstitutionSyntaxError as exc:
        print(f"subdiag: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as exc:
        print(f"subdiag: cap exceeded: {exc}", file=sys.stderr)
        return EXIT_CAP
    except (SubstitutionError, ComplexSpectrumError, dens.PreconditionError, ValueError) as exc:
        print(f"subdiag: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    if rep is not None:
        _emit(rep, args)
    return 0


if __name__ == "__main__":
    sys.exit(main())
