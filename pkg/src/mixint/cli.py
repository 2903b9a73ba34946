"""Command-line front end.

Exit status: 0 on success or a passing campaign, 1 when an inequality is
violated beyond tolerance, 2 on bad input or an unmet precondition.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from . import __version__
from . import alpha_core as ac
from . import convex_body as cb
from . import layercake as lc
from . import mixed_integral as mi
from . import oracle
from . import rearrange as ra

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    """Bad input file or precondition; reported on stderr with exit status 2."""


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _parse(path: str, where: str, data, build):
    try:
        return build(data)
    except KeyError as exc:
        raise InputError(f"{path}: {where}: missing field {exc.args[0]!r}") from None
    except (TypeError, ValueError, IndexError) as exc:
        raise InputError(f"{path}: {where}: {exc}") from None


def _items(path: str, data, key: str) -> list:
    if isinstance(data, dict) and key in data:
        data = data[key]
    if not isinstance(data, list) or not data:
        raise InputError(f"{path}: expected a non-empty list or an object with a {key!r} list")
    return data


def load_bodies(path: str) -> list:
    data = _items(path, _read_json(path), "bodies")
    return [_parse(path, f"bodies[{i}]", d, cb.Polytope.from_dict) for i, d in enumerate(data)]


def load_cakes(path: str) -> list:
    data = _items(path, _read_json(path), "cakes")
    return [_parse(path, f"cakes[{i}]", d, lc.LayerCake.from_dict) for i, d in enumerate(data)]


def load_cake(path: str) -> lc.LayerCake:
    return _parse(path, "cake", _read_json(path), lc.LayerCake.from_dict)


def load_profile(path: str) -> ac.RadialAlphaProfile:
    return _parse(path, "profile", _read_json(path), ac.RadialAlphaProfile.from_dict)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _number(x: float) -> str:
    return f"{x:.15g}"


def _cmd_mixed_volume(args) -> int:
    bodies = load_bodies(args.bodies)
    if len({b.dim for b in bodies}) != 1 or len(bodies) != bodies[0].dim:
        raise InputError(f"{args.bodies}: need exactly n bodies of one dimension n")
    print(_number(cb.mixed_volume(bodies)))
    return EXIT_OK


def _cmd_mixed_integral(args) -> int:
    cakes = load_cakes(args.cakes)
    print(_number(mi.mixed_integral(cakes, method=args.method).value))
    return EXIT_OK


def _cmd_steiner(args) -> int:
    f = load_cake(args.cake)
    eps = args.eps_grid if args.eps_grid else mi.DEFAULT_EPS
    res = mi.steiner_expand(f, eps, args.ball_facets)
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "W_fit", "W_direct"])
        for k, (a, b) in enumerate(zip(res.coefficients, res.direct)):
            w.writerow([k, repr(float(a)), repr(float(b))])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_dump(res.to_dict()), args.out)
    return EXIT_OK


def _cmd_rearrange(args) -> int:
    f = load_cake(args.cake)
    _emit(_dump(ra.rearrange(f, args.ball_facets).to_dict()), args.out)
    return EXIT_OK


def _cmd_alpha_sum(args) -> int:
    f, g = load_profile(args.p1), load_profile(args.p2)
    alpha = f.alpha if args.alpha is None else args.alpha
    if f.n != g.n:
        raise InputError(f"profiles live in different dimensions ({f.n} and {g.n})")
    if f.alpha != alpha:
        f = ac.rebase(f, alpha)
    if g.alpha != alpha:
        g = ac.rebase(g, alpha)
    _emit(_dump(ac.alpha_sum(f, g).to_dict()), args.out)
    return EXIT_OK


def _campaign(args):
    name = args.name
    tol = args.tol
    trials = args.trials
    kw = {"seed": args.seed, "tolerance": tol}
    if trials is not None:
        kw["trials"] = trials
    if name == "polynomiality":
        return mi.verify_polynomiality(**kw)
    if name == "v_properties":
        return mi.verify_v_properties(**kw)
    if name == "isoperimetric":
        return ra.verify_isoperimetric(m_facets=args.ball_facets, dim=args.dim, **kw)
    if name == "brunn_minkowski":
        return ra.verify_bm(m_facets=args.ball_facets, dim=args.dim, **kw)
    if name == "af_corollary":
        return ra.verify_af_corollary(m_facets=args.ball_facets, dim=args.dim, **kw)
    alpha = 0.0 if args.alpha is None else args.alpha
    if name == "alexandrov":
        n = 3 if args.n is None else args.n
        k = 1 if args.k is None else args.k
        m = 2 if args.m is None else args.m
        if not 0 <= k < m < n:
            raise InputError(f"need 0 <= k < m < n, got k={k}, m={m}, n={n}")
        return ac.verify_alexandrov(alpha=alpha, n=n, k=k, m=m, **kw)
    if name == "moment_lemma":
        k = 0 if args.k is None else args.k
        m = 1 if args.m is None else args.m
        if not 0 <= k < m:
            raise InputError(f"need 0 <= k < m, got k={k}, m={m}")
        if alpha < 0 and not m < -1.0 / alpha - 1.0:
            raise InputError(f"moment lemma needs m < -1/alpha - 1 = {-1.0 / alpha - 1.0:g}, got m={m}")
        return ac.verify_moment_lemma(alpha=alpha, k=k, m=m, **kw)
    if name == "closure":
        return ac.verify_closure(alpha=alpha, **kw)
    kw.pop("tolerance")
    return oracle.verify_oracle(samples=args.samples, **kw)


def _cmd_verify(args) -> int:
    if args.dim not in (2, 3):
        raise InputError("--dim must be 2 or 3")
    report = _campaign(args)
    if report.status == "vacuous":
        d = report.details
        raise InputError(
            f"alexandrov is vacuous for alpha={d['alpha']:g}, n={d['n']}, k={d['k']}: "
            f"W_k(g_alpha) is finite only if k > n + 1/alpha = {d['n'] + 1.0 / d['alpha']:g}; "
            "for k = 1, n = 3 this means alpha > -1/2"
        )
    report.details.setdefault("ball_facets", cb.ball_approx(args.dim, args.ball_facets).m)
    _emit(report.to_csv() if args.format == "csv" else report.to_json() + "\n", args.out)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _cmd_demo(args) -> int:
    seq = ra.shrinking_surface_sequence(args.kmax, args.ball_facets)
    rows = [{"k": k, "integral": a, "surface_area": s} for k, (a, s) in enumerate(seq, start=1)]
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "integral", "surface_area"])
        for r in rows:
            w.writerow([r["k"], repr(r["integral"]), repr(r["surface_area"])])
        _emit(buf.getvalue(), args.out)
    else:
        _emit(_dump({"sequence": rows, "ball_facets": cb.ball_approx(2, args.ball_facets).m}), args.out)
    return EXIT_OK


CAMPAIGNS = (
    "polynomiality", "v_properties", "isoperimetric", "brunn_minkowski",
    "af_corollary", "alexandrov", "moment_lemma", "closure", "oracle",
)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--dim", type=int, default=2, help="ambient dimension for random campaigns")
    common.add_argument("--ball-facets", type=int, default=None, help="ball approximation size (64 in 2D, 320 in 3D)")
    common.add_argument("--tol", type=float, default=1e-6)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int, default=10**6, help="Monte Carlo samples for the oracle campaign")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="mixint", description="Mixed integrals of quasi-concave functions.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("mixed-volume", parents=[common], help="V(K_1, ..., K_n) of polytopes")
    s.add_argument("bodies")
    s.set_defaults(func=_cmd_mixed_volume)

    s = sub.add_parser("mixed-integral", parents=[common], help="V(f_1, ..., f_n) of layer cakes")
    s.add_argument("cakes")
    s.add_argument("--method", choices=mi.METHODS, default="representation_formula")
    s.set_defaults(func=_cmd_mixed_integral)

    s = sub.add_parser("steiner", parents=[common], help="quermassintegrals from the Steiner polynomial")
    s.add_argument("cake")
    s.add_argument("--eps-grid", type=float, nargs="+", default=None)
    s.set_defaults(func=_cmd_steiner)

    s = sub.add_parser("rearrange", parents=[common], help="symmetric decreasing rearrangement")
    s.add_argument("cake")
    s.set_defaults(func=_cmd_rearrange)

    s = sub.add_parser("alpha-sum", parents=[common], help="alpha-sum of two radial profiles")
    s.add_argument("p1")
    s.add_argument("p2")
    s.add_argument("--alpha", type=float, default=None)
    s.set_defaults(func=_cmd_alpha_sum)

    s = sub.add_parser("verify", parents=[common], help="run a randomized inequality campaign")
    s.add_argument("name", choices=CAMPAIGNS)
    s.add_argument("--trials", type=int, default=None)
    s.add_argument("--alpha", type=float, default=None)
    s.add_argument("--n", type=int, default=None)
    s.add_argument("--k", type=int, default=None)
    s.add_argument("--m", type=int, default=None)
    s.set_defaults(func=_cmd_verify)

    s = sub.add_parser("demo", parents=[common], help="worked examples")
    s.add_argument("which", choices=("shrinking-surface",))
    s.add_argument("--kmax", type=int, default=10)
    s.set_defaults(func=_cmd_demo)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        with np.errstate(all="ignore"):
            return args.func(args)
    except InputError as exc:
        print(f"mixint: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (ValueError, cb.DimensionError) as exc:
        print(f"mixint: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())
