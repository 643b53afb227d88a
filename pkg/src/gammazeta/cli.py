"""Command-line driver.

Every report starts with ``gamma-zeta-lab <version> seed=<seed>``.  Exit
status is 0 on success, 1 on a domain error (its class name goes to stderr)
and 2 on a usage error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, errors
from . import deltaction, graphcore, holonomy, interface_gamma, leafgeom, strata, zeta


@dataclass(frozen=True)
class RunConfig:
    command: str
    seed: int
    out: Path | None

    @property
    def header(self) -> str:
        return f"gamma-zeta-lab {__version__} seed={self.seed}"


def _positive(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _positive_int(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return v


def _plane(text: str) -> int:
    t = text.lower().lstrip("x")
    if t not in ("1", "2", "3"):
        raise argparse.ArgumentTypeError(f"plane must be x1, x2 or x3, got {text}")
    return int(t)


def _read_graph(path: str) -> graphcore.Multigraph:
    return graphcore.parse_graph(Path(path).read_text())


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gamma-zeta-lab", description=__doc__.splitlines()[0])
    p.add_argument("--seed", type=int, default=0, help="seed for randomized checks (default 0)")
    p.add_argument("--out", help="write the report here instead of stdout")
    top = p.add_subparsers(dest="group", required=True)

    leaf = top.add_parser("leaf").add_subparsers(dest="action", required=True)
    s = leaf.add_parser("solve")
    s.add_argument("--tol", type=_positive, default=1e-8)
    s = leaf.add_parser("profile")
    s.add_argument("--b", type=_positive, required=True)
    s.add_argument("--n", type=_positive_int, default=256)

    gamma = top.add_parser("gamma").add_subparsers(dest="action", required=True)
    s = gamma.add_parser("build")
    s.add_argument("--b", type=_positive, default=None, help="curvature; solved when omitted")
    s.add_argument("--grid", type=_positive_int, default=interface_gamma.DEFAULT_GRID)
    s = gamma.add_parser("octant")

    zg = top.add_parser("zeta").add_subparsers(dest="action", required=True)
    for name in ("series", "det", "poles"):
        s = zg.add_parser(name)
        s.add_argument("--in", dest="inp", required=True)
        s.add_argument("--max-length", type=_positive_int, default=12)
        s.add_argument("--tol", type=_positive, default=1e-10)

    dg = top.add_parser("delta").add_subparsers(dest="action", required=True)
    s = dg.add_parser("apply")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--plane", type=_plane, default=1)
    s.add_argument("--angle", type=int, choices=(0, 90, 180, 270), default=90)
    s.add_argument("--eps", type=_positive, default=deltaction.EPS_GLUE)
    s = dg.add_parser("check")
    s.add_argument("--a", required=True)
    s.add_argument("--b", required=True)

    hg = top.add_parser("holonomy").add_subparsers(dest="action", required=True)
    s = hg.add_parser("classify")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--max-length", type=_positive_int, default=8)
    s = hg.add_parser("sphere")
    s.add_argument("--loops", choices=("octant",), default="octant")
    s = hg.add_parser("duality")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--tol", type=_positive, default=1e-10)

    sg = top.add_parser("strata").add_subparsers(dest="action", required=True)
    s = sg.add_parser("cohomology")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--ring", choices=("int", "rat"), default="int")
    s.add_argument("--degree", type=int, default=None)
    s = sg.add_parser("twisted")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--ring", choices=("int", "rat"), default="int")
    s = sg.add_parser("invariant")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--degree", type=int, required=True)
    for sub in (leaf, gamma, zg, dg, hg, sg):
        for action in sub.choices.values():
            action.add_argument("--out", dest="sub_out", help="write the report here")
    return p


def _leaf(args, rng: np.random.Generator) -> list[str]:
    if args.action == "solve":
        b = leafgeom.solve_b(tol=args.tol)
        prof = leafgeom.profile_curve(b)
        k = leafgeom.curvature_report(b, rng)
        lines = leafgeom.leaf_report(b, prof)
        lines = [ln for ln in lines if not ln.startswith("sample ")]
        lines[-1] = f"K {k:.17g}"
        lines.append(f"residual {prof.arc_length - leafgeom.SQRT3:.3e}")
        lines.append(f"xi_slope0 {leafgeom.cone_slope(b):.12f}")
        return lines
    prof = leafgeom.profile_curve(args.b, args.n)
    return leafgeom.leaf_report(args.b, prof)


def _gamma(args) -> list[str]:
    if args.action == "octant":
        g, _ = interface_gamma.octant_graph()
        return graphcore.serialize_graph(g).splitlines()
    b = args.b if args.b is not None else leafgeom.solve_b()
    g, curves = interface_gamma.build_gamma(b, grid=args.grid)
    rep = graphcore.validate(g)
    return ([f"# b {b:.17g} loops {interface_gamma.distinct_loops(curves)} "
             f"vertices {rep.n_vertices} edges {rep.n_edges}"]
            + graphcore.serialize_graph(g).splitlines())


def _zeta(args) -> list[str]:
    g = _read_graph(args.inp)
    if args.action == "series":
        return [zeta.format_series(zeta.zeta_series(g, args.max_length))]
    zr = zeta.zeta_reciprocal(g)
    if args.action == "det":
        return [zeta.format_poly(zr.poly)]
    return zeta.format_poles(zeta.zeta_poles(zr, args.tol))


def _delta(args) -> list[str]:
    if args.action == "apply":
        g = _read_graph(args.inp)
        g2, rep = deltaction.apply_delta(g, deltaction.DeltaSpec(args.plane, args.angle, args.eps))
        return ([f"# cuts {rep.cut_points} matched {rep.matched} max_mismatch {rep.max_mismatch:.3e}"]
                + graphcore.serialize_graph(g2).splitlines())
    ga, gb = _read_graph(args.a), _read_graph(args.b)
    inv = deltaction.check_zeta_invariance(ga, gb)
    return ([f"structurally_equal {str(deltaction.structurally_equal(ga, gb)).lower()}"]
            + inv.lines())


def _holonomy(args) -> list[str]:
    if args.action == "classify":
        g = _read_graph(args.inp)
        arcs = graphcore.build_arc_system(g)
        classes = zeta.enumerate_cycles(g, args.max_length, arcs=arcs)
        return ["holonomy v1"] + holonomy.sign_report(classes, arcs.labels)
    if args.action == "sphere":
        return ["holonomy v1"] + holonomy.transport_report(holonomy.octant_holonomies())
    g = _read_graph(args.inp)
    return holonomy.duality_report(g, holonomy.octant_holonomies(), args.tol).lines()


def _strata(args) -> list[str]:
    sc = strata.parse_strata(Path(args.inp).read_text())
    if args.action == "cohomology":
        return strata.report(sc, "cohomology", args.ring, args.degree)
    if args.action == "twisted":
        return strata.report(sc, "twisted", args.ring)
    return strata.report(sc, "invariant", degree=args.degree)


_HANDLERS = {"gamma": _gamma, "zeta": _zeta, "delta": _delta,
             "holonomy": _holonomy, "strata": _strata}


def run(argv: Sequence[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = getattr(args, "sub_out", None) or args.out
    cfg = RunConfig(f"{args.group} {args.action}", args.seed, Path(out) if out else None)
    rng = np.random.default_rng(cfg.seed)
    try:
        if args.group == "leaf":
            body = _leaf(args, rng)
        else:
            body = _HANDLERS[args.group](args)
    except errors.LabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 1
    except OSError as exc:
        print(f"{type(exc).__name__}: {exc}", file=stderr)
        return 1
    text = "\n".join([cfg.header, *body]) + "\n"
    if cfg.out is not None:
        cfg.out.write_text(text)
    else:
        stdout.write(text)
    return 0


def main() -> int:
    return run()


if __name__ == "__main__":
    sys.exit(main())
