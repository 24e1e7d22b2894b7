"""Command line interface: ``steenrodz <subcommand> ...``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import roth
from .acceptance import CHECKS, default_workers, run_all
from .algtmf import apply_known_differentials, assemble_e1, assemble_e1_self, dual_generators, max_j_needed
from .brown_gitler import MAX_J, bg_module
from .charts import parse_tsv, render, rows_from_ext, rows_from_page
from .eq2ext import decompose, ext_chart_from_decomp
from .modules import dual, load_module, restrict, sample_module_z, suspend, tensor, validate, write_bruner
from .resolve import ext_chart, ext_self
from .steenrod.profile import Profile
from .toda import criterion_one_chart, realization_count, toda_criterion_one, toda_criterion_two


def _profile(text: str | None) -> Profile | None:
    return Profile.parse(text) if text else None


def _module(path: str, profile: str | None = None):
    if path == "Z":
        m = sample_module_z()
    else:
        m = load_module(path, _profile(profile) or Profile.full())
    return m


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _companion_tsv(args) -> bool:
    # the TSV written beside the SVG must not clobber the -o output
    return not args.output or Path(args.svg).with_suffix(".tsv").resolve() != Path(args.output).resolve()


def _header(args) -> str:
    def fmt(v):
        return " ".join(map(str, v)) if isinstance(v, list) else str(v)

    flags = " ".join(f"--{k.replace('_', '-')}={fmt(v)}" for k, v in sorted(vars(args).items())
                     if k not in ("func", "command") and v is not None)
    return f"# steenrodz {args.command} {flags}\n"


def cmd_validate(args) -> int:
    m = _module(args.module, args.profile)
    bad = validate(m, _profile(args.profile))
    for line in bad:
        print(line)
    print(f"{args.module}: dim {m.dim}, {len(bad)} violations")
    return 1 if bad else 0


def cmd_ext(args) -> int:
    m = _module(args.module, args.profile)
    prof = _profile(args.over) or m.profile
    if args.self:
        chart = ext_self(m, args.s_max, args.t_max, prof, method=args.method, t_min=args.t_min)
    else:
        chart = ext_chart(m, args.s_max, args.t_max, prof)
    _emit(chart.to_tsv(), args.output)
    if args.svg:
        render(rows_from_ext(chart), args.svg, title=f"Ext {args.module}", tsv=_companion_tsv(args))
    return 0


def cmd_tensor(args) -> int:
    _emit(write_bruner(tensor(_module(args.a, args.profile), _module(args.b, args.profile))), args.output)
    return 0


def cmd_dual(args) -> int:
    _emit(write_bruner(dual(_module(args.module, args.profile))), args.output)
    return 0


def cmd_suspend(args) -> int:
    _emit(write_bruner(suspend(_module(args.module, args.profile), args.by)), args.output)
    return 0


def cmd_eq2(args) -> int:
    m = _module(args.module, args.profile)
    if m.profile.kind != "E(Qn)":
        m = restrict(m, Profile.e(2))
    d = decompose(m)
    print(d)
    for x in d.summands:
        print(f"{x.kind}\t{x.shift}\t{x.label}")
    if args.ext is not None:
        sys.stdout.write(ext_chart_from_decomp(d, args.ext).to_tsv())
    return 0


def cmd_bg(args) -> int:
    if not 0 <= args.j <= MAX_J:
        print(f"j must lie in 0..{MAX_J}", file=sys.stderr)
        return 2
    m = bg_module(args.j)
    _emit(write_bruner(m), args.output)
    if args.decompose:
        print(decompose(m), file=sys.stderr)
    return 0


def cmd_algtmf(args) -> int:
    if args.max_stem is None:
        args.max_stem = 16 if args.self else 25
    extra = max(d for _, d in dual_generators()) if args.self else 0
    need = max_j_needed(args.max_stem, extra)
    if need > MAX_J:
        top = max(m for m in range(args.max_stem) if max_j_needed(m, extra) <= MAX_J)
        print(f"error: stems up to {args.max_stem} need N_1({need}); N_1(j) is available for j <= {MAX_J},"
              f" so use --max-stem {top} or less", file=sys.stderr)
        return 2
    if args.self:
        page = assemble_e1_self(args.max_stem, args.max_s, max_j=max(need, 1),
                                min_stem=args.min_stem if args.min_stem is not None else -16, workers=args.workers)
    else:
        page = assemble_e1(args.max_stem, args.max_s, max_j=max(need, 1),
                           min_stem=args.min_stem if args.min_stem is not None else -2, workers=args.workers)
    page = apply_known_differentials(page)
    _emit(page.to_tsv(), args.output)
    if args.svg:
        render(rows_from_page(page), args.svg, stems=(page.min_stem, page.max_stem), s_max=page.max_s,
               tsv=_companion_tsv(args))
    return 0


def cmd_roth(args) -> int:
    if args.action == "count":
        print(len(roth.enumerate_valid(args.workers)))
        return 0
    if args.action == "emit":
        out = Path(args.out_dir)
        out.mkdir(parents=True, exist_ok=True)
        valid = roth.enumerate_valid(args.workers)
        n_cond = 0
        for e in roth.emit_all(valid, args.workers):
            if args.require_cond_a and not e.condition:
                continue
            (out / f"A2_{e.smap}.mod").write_text(write_bruner(e.a2))
            if e.b2 is not None:
                n_cond += 1
                (out / f"B2_{e.smap}.mod").write_text(write_bruner(e.b2))
        print(f"{len(valid)} valid s-maps, {n_cond} with Q2 Sq8 Q2 = 0")
        return 0
    s = roth.SMap.parse(args.bits)
    try:
        a2 = roth.module_from_smap(s)
    except roth.CriterionError as e:
        print(e, file=sys.stderr)
        return 1
    Path(args.output).write_text(write_bruner(a2))
    if args.b2:
        try:
            Path(args.b2).write_text(write_bruner(roth.b2_from_a2(a2)))
        except roth.CriterionError as e:
            print(e, file=sys.stderr)
            return 1
    return 0


def cmd_toda(args) -> int:
    m = _module(args.module, args.profile)
    reports = []
    if args.criterion in (None, 1):
        reports.append(toda_criterion_one(m, criterion_one_chart(m, args.s_cap), args.s_cap))
    if args.criterion in (None, 2):
        reports.append(toda_criterion_two(m, args.s_cap))
    for r in reports:
        print(r)
    return 0 if all(r.verdict for r in reports) else 1


def cmd_uniq(args) -> int:
    print(realization_count(_module(args.module, args.profile), args.s_cap))
    return 0


def cmd_chart(args) -> int:
    rows = parse_tsv(Path(args.input).read_text())
    stems = tuple(args.stems) if args.stems else None
    render(rows, args.output, title=args.title or "", stems=stems, s_max=args.s_max, tsv=False)
    return 0


def emit_figures(out: Path, workers: int):
    out.mkdir(parents=True, exist_ok=True)
    z = sample_module_z()
    chart = ext_chart(z, 10, 32)
    render([r for r in rows_from_ext(chart) if 0 <= r.stem <= 22], out / "Z_1.svg",
           title="Ext_A(Z, F2)", stems=(0, 22), s_max=10)
    self_chart = ext_self(z, 8, 23, t_min=-23)
    render(rows_from_ext(self_chart), out / "ZDZ_1.svg", title="Ext_A(Z, Z)", stems=(-7, 15), s_max=8)
    b2 = apply_known_differentials(assemble_e1(25, 8, workers=workers))
    render(rows_from_page(b2), out / "e1_B2.svg", title="E1, B2", stems=(-2, 25), s_max=8)
    small = apply_known_differentials(assemble_e1_self(2, 3, workers=workers))
    render(rows_from_page(small), out / "e1_DB2_B2_small.svg", title="E1, DB2 (x) B2",
           stems=(-2, 2), s_max=3)
    big = apply_known_differentials(assemble_e1_self(15, 8, min_stem=-7, workers=workers))
    render(rows_from_page(big), out / "e1_DZ_Z.svg", title="E1, DZ Z", stems=(-7, 15), s_max=8)


def cmd_reproduce(args) -> int:
    sys.stdout.write(_header(args))
    results = run_all(args.only, args.workers)
    for r in results:
        print(r.line(), flush=True)
    if args.emit_figures:
        emit_figures(Path(args.emit_figures), args.workers)
        print(f"figures written to {args.emit_figures}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        print("failed: " + ", ".join(failed))
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="steenrodz", description="Modules over the mod 2 Steenrod algebra.")
    sub = p.add_subparsers(dest="command", required=True)

    def module_args(q, name="module"):
        q.add_argument(name, help="Bruner module file, or Z for the bundled sample")
        q.add_argument("--profile", help="algebra the file is over: A, A(n), E(Qn) (default A)")

    q = sub.add_parser("validate", help="check the relations of a module")
    module_args(q)
    q.set_defaults(func=cmd_validate)

    q = sub.add_parser("ext", help="Ext chart by minimal resolution")
    module_args(q)
    q.add_argument("--s-max", type=int, default=8)
    q.add_argument("--t-max", type=int, default=30)
    q.add_argument("--t-min", type=int)
    q.add_argument("--over", help="resolve over this subalgebra")
    q.add_argument("--self", action="store_true", help="Ext(M, M) instead of Ext(M, F2)")
    q.add_argument("--method", choices=("hom", "tensor"), default="hom")
    q.add_argument("-o", "--output")
    q.add_argument("--svg")
    q.set_defaults(func=cmd_ext)

    q = sub.add_parser("tensor", help="tensor product of two modules")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--profile")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_tensor)

    q = sub.add_parser("dual", help="Spanier-Whitehead dual")
    module_args(q)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_dual)

    q = sub.add_parser("suspend", help="shift degrees")
    module_args(q)
    q.add_argument("--by", type=int, required=True)
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_suspend)

    q = sub.add_parser("eq2", help="decomposition into free and trivial E(Q2)-modules")
    module_args(q)
    q.add_argument("--ext", type=int, metavar="S_MAX", help="also print Ext over E(Q2)")
    q.set_defaults(func=cmd_eq2)

    q = sub.add_parser("bg", help="Brown-Gitler module N1(j)")
    q.add_argument("j", type=int)
    q.add_argument("--decompose", action="store_true")
    q.add_argument("-o", "--output")
    q.set_defaults(func=cmd_bg)

    q = sub.add_parser("algtmf", help="E1-page of the algebraic tmf spectral sequence")
    q.add_argument("--max-stem", type=int, help="default 25, or 16 with --self")
    q.add_argument("--min-stem", type=int)
    q.add_argument("--max-s", type=int, default=8)
    q.add_argument("--self", action="store_true", help="the page for D(B2) (x) B2")
    q.add_argument("--workers", type=int, default=1)
    q.add_argument("-o", "--output")
    q.add_argument("--svg")
    q.set_defaults(func=cmd_algtmf)

    q = sub.add_parser("roth", help="s-maps and A-module structures on A(2)")
    rsub = q.add_subparsers(dest="action", required=True)
    r = rsub.add_parser("count")
    r.add_argument("--workers", type=int, default=default_workers())
    r = rsub.add_parser("emit")
    r.add_argument("--out-dir", required=True)
    r.add_argument("--require-cond-a", action="store_true")
    r.add_argument("--workers", type=int, default=default_workers())
    r = rsub.add_parser("build")
    r.add_argument("--bits", required=True, help=f"{roth.NSLOTS} characters of 0/1")
    r.add_argument("-o", "--output", required=True)
    r.add_argument("--b2")
    q.set_defaults(func=cmd_roth)

    q = sub.add_parser("toda", help="Toda realization criteria")
    tsub = q.add_subparsers(dest="action", required=True)
    r = tsub.add_parser("check")
    r.add_argument("--module", required=True)
    r.add_argument("--profile")
    r.add_argument("--criterion", type=int, choices=(1, 2))
    r.add_argument("--s-cap", type=int, default=10)
    q.set_defaults(func=cmd_toda)

    q = sub.add_parser("uniq-count", help="number of realizations, 2^dim Ext^{2,1}(M,M)")
    q.add_argument("--module", required=True)
    q.add_argument("--profile")
    q.add_argument("--s-cap", type=int, default=8)
    q.set_defaults(func=cmd_uniq)

    q = sub.add_parser("chart", help="render a chart TSV as SVG")
    q.add_argument("input")
    q.add_argument("-o", "--output", required=True)
    q.add_argument("--stems", type=int, nargs=2, metavar=("LO", "HI"))
    q.add_argument("--s-max", type=int)
    q.add_argument("--title")
    q.set_defaults(func=cmd_chart)

    q = sub.add_parser("reproduce", help="run every check")
    q.add_argument("--only", nargs="*", choices=[name for _, name, _ in CHECKS] + [str(n) for n, _, _ in CHECKS])
    q.add_argument("--emit-figures", metavar="DIR")
    q.add_argument("--workers", type=int, default=default_workers())
    q.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
