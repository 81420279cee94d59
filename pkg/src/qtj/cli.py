"""``qtj`` command line.

Every subcommand builds one payload, wraps it in a report envelope with a
run manifest, validates it and writes JSON (default) or CSV.  Exit status
is 0 on success, 2 for input problems and 3 for numeric degeneracies.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

from . import dioph, eisenstein, foliation, modular, weierstrass
from .errors import InputError, IoFailure, NumericError, QTJError
from .foliation import INFINITY, FoliationPoint
from .numerics import MIN_PRECISION, QuadIrr, embed_exact, is_exact
from .parsing import (
    parse_int_list,
    parse_matrix,
    parse_modulus,
    parse_set,
    parse_stages,
    parse_theta,
    parse_z,
)
from .report import ReportEnvelope, RunManifest, cnum, emit, num
from .schemes import ClassicalCone, QuantumTheta, describe

DEFAULT_PRECISION = 128
BOOL_KEYS = {"exact", "no_extrapolate"}


def _default_precision() -> int:
    env = os.environ.get("QTJ_PRECISION")
    if env is None:
        return DEFAULT_PRECISION
    try:
        return int(env)
    except ValueError:
        raise InputError(f"QTJ_PRECISION must be an integer, got {env!r}") from None


def load_config(path: str) -> dict:
    """key = value lines; '#' starts a comment; keys use - or _."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc}") from None
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InputError(f"{path}:{lineno}: expected key = value")
        value = value.strip().strip('"').strip("'")
        out[key.strip().replace("-", "_")] = value
    return out


# ---------------------------------------------------------------------------
# subcommands


def cmd_cf(args) -> dict:
    theta = parse_theta(args.theta, args.precision)
    cf = dioph.cf_expand(theta, args.terms)
    count = min(args.terms, len(cf.partial_quotients)) if cf.period is None else args.terms
    convs = dioph.convergents(cf, count)
    return {
        "theta": args.theta,
        "quotients": [cf.quotient(j) for j in range(count)],
        "period": list(cf.period) if cf.period else None,
        "terminating": cf.terminating,
        "heuristic": cf.heuristic,
        "convergents": [{"m": c.m, "n": c.n, "err": num(c.err, args.precision)} for c in convs],
        "precision": args.precision,
    }


def _mode(args) -> str:
    return "exact" if args.exact else "float"


def cmd_eisenstein(args) -> dict:
    mu = parse_modulus(args.mu)
    theta = parse_theta(args.theta, args.precision) if args.theta else None
    d = parse_set(args.set, theta)
    ps = eisenstein.partial_G(mu, args.k, d, args.precision, _mode(args), args.workers)
    value = cnum(ps.value)
    return {
        "mu": args.mu, "k": args.k, "set": describe(d),
        "value_re": value["re"], "value_im": value["im"],
        "term_count": ps.term_count, "mode": ps.mode, "precision": args.precision,
        "error_bound": num(ps.error_bound) if ps.error_bound is not None else None,
        "weight": ps.weight,
        "flags": ["shape-dependent: G_1 partial sums have no exhaustion-independent limit"] if args.k == 1 else [],
    }


def _abs_text(z, prec: int) -> str:
    if is_exact(z):
        if z == 0:
            return "0"
        z = embed_exact(z, prec)
    return num(abs(z), prec)


def cmd_automorphy(args) -> dict:
    mu = parse_modulus(args.mu)
    theta = parse_theta(args.theta, args.precision) if args.theta else None
    d = parse_set(args.set, theta)
    A = parse_matrix(args.matrix)
    res = eisenstein.automorphy_residual(A, mu, args.k, d, args.precision, _mode(args), args.workers)
    return {
        "mu": args.mu, "k": args.k, "set": describe(d), "matrix": list(A.entries), "det": A.det,
        "residual": cnum(res), "residual_abs": _abs_text(res, args.precision),
        "mode": _mode(args), "precision": args.precision,
    }


def cmd_jclass(args) -> dict:
    mu = parse_modulus(args.mu)
    r = modular.j_classical(mu, args.box_max, args.precision, not args.no_extrapolate,
                            workers=args.workers, extrapolation_order=args.order)
    return {
        "mu": args.mu, "reduced_mu": cnum(r.reduced_mu.mu), "reducer": list(r.reducer.entries),
        "box_max": args.box_max, "extrapolation_order": r.extrapolation_order,
        "j": cnum(r.value), "error_bound": num(r.error_bound), "g2": cnum(r.g2), "g3": cnum(r.g3),
        "flags": list(r.flags), "precision": args.precision,
    }


def cmd_jquant(args) -> dict:
    mu = parse_modulus(args.mu)
    theta = parse_theta(args.theta, args.precision)
    if not isinstance(theta, QuadIrr):
        raise InputError("jquant needs theta as quad:a:b:c:d")
    rep = modular.j_quantum(mu, theta, parse_stages(args.stages), args.window, args.precision, args.workers)
    rows = [{"stage": s, "q": q, "j": cnum(j) if j is not None else None,
             "im_fraction": num(f, args.precision) if f is not None else None, "class": c}
            for (s, j, f, c), q in zip(rep.rows, rep.q)]
    classes = [{"class": c.cls, "stages": list(c.stages),
                "median": cnum(c.median) if c.median is not None else None,
                "diameter": num(c.diameter, args.precision)} for c in rep.summaries]
    return {
        "mu": args.mu, "theta": args.theta, "window": args.window,
        "period": list(rep.period) if rep.period else None,
        "reality_expected": rep.reality_expected, "rows": rows, "classes": classes,
        "flags": [f"stage {s}: {msg}" for s, msg in rep.flags], "precision": args.precision,
    }


def _parse_scheme(text: str, prec: int):
    kind, _, body = text.partition(":")
    if kind == "classical":
        return ClassicalCone(parse_int_list(body)), None
    if kind == "quantum":
        theta_text, _, L = body.rpartition(":")
        theta = parse_theta(theta_text, prec)
        if not isinstance(theta, QuadIrr):
            raise InputError("quantum schemes need theta as quad:a:b:c:d")
        try:
            L = int(L)
        except ValueError:
            raise InputError(f"window length must be an integer, got {L!r}") from None
        return None, (theta, L)
    raise InputError(f"scheme must be classical:<radii> or quantum:<theta>:<L>, got {text!r}")


def cmd_weier_residual(args) -> dict:
    mu = parse_modulus(args.mu)
    cone, quantum = _parse_scheme(args.scheme, args.precision)
    stages = parse_stages(args.stages) if args.stages else None
    if quantum is not None:
        theta, L = quantum
        if stages is None:
            raise InputError("quantum schemes need --stages")
        scheme = QuantumTheta(theta, L, stages)
    else:
        theta = parse_theta(args.theta, args.precision) if args.theta else None
        scheme = cone
    kind, value = parse_z(args.z)
    if kind == "slope":
        if theta is None:
            raise InputError("z = t=<real> needs a slope theta (--theta or a quantum scheme)")
        z = weierstrass.slope_point(value, mu, theta, args.precision)
    else:
        z = value
    series = weierstrass.residual_series(z, mu, scheme, stages, args.precision)
    norm = series.normalized or [None] * len(series.stages)
    rows = [{"stage": s, "size": n, "residual": num(r, args.precision),
             "normalized": num(q, args.precision) if q is not None else None}
            for s, n, r, q in zip(series.stages, series.sizes, series.residuals, norm)]
    return {
        "mu": args.mu, "z": cnum(z), "scheme": args.scheme, "rows": rows,
        "decay_exponent": series.decay_exponent, "precision": args.precision,
    }


def _slope_text(t, prec: int) -> str:
    if t is INFINITY:
        return "inf"
    return num(t, prec)


def cmd_orbit(args) -> dict:
    mu = parse_modulus(args.mu)
    theta = parse_theta(args.theta, args.precision) if args.theta else None
    image_mu = image_theta = None
    A = None
    if args.matrix:
        A = parse_matrix(args.matrix)
        if theta is not None:
            p = foliation.act(A, FoliationPoint(mu, theta))
            image_mu, image_theta = p.modulus.mu, _slope_text(p.theta, args.precision)
        else:
            image_mu = A.moebius(mu.mu)
    reduced, M = foliation.reduce_modulus(mu)
    return {
        "mu": cnum(mu.mu), "theta": args.theta, "matrix": list(A.entries) if A else None,
        "image_mu": cnum(image_mu) if image_mu is not None else None, "image_theta": image_theta,
        "reduced_mu": cnum(reduced.mu), "reducer": list(M.entries), "precision": args.precision,
    }


COMMANDS = {
    "cf": cmd_cf,
    "eisenstein": cmd_eisenstein,
    "automorphy": cmd_automorphy,
    "jclass": cmd_jclass,
    "jquant": cmd_jquant,
    "weier-residual": cmd_weier_residual,
    "orbit": cmd_orbit,
}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, help="working precision in bits (env QTJ_PRECISION)")
    common.add_argument("--workers", type=int, default=1, help="worker processes for lattice sums")
    common.add_argument("--config", help="key = value defaults file; argv overrides")
    common.add_argument("--out", choices=("json", "csv"), default="json")
    common.add_argument("--output", help="write to this path instead of stdout")

    p = argparse.ArgumentParser(prog="qtj", description="Finite-stage invariants of quantum tori.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    s = sub.add_parser("cf", parents=[common], help="continued fraction and convergents")
    s.add_argument("--theta", required=True, help="quad:a:b:c:d | rat:p:q | decimal")
    s.add_argument("--terms", type=int, default=20)

    for name, helptext in (("eisenstein", "partial Eisenstein sum G_k over a set"),
                           ("automorphy", "finite-set automorphy residual")):
        s = sub.add_parser(name, parents=[common], help=helptext)
        s.add_argument("--mu", required=True)
        s.add_argument("--k", type=int, required=True)
        s.add_argument("--set", required=True, help="box:N | qwin:s:L | explicit:... with T[..]:/shift[..]:")
        s.add_argument("--theta", help="slope for qwin sets")
        s.add_argument("--exact", action="store_true")
        if name == "automorphy":
            s.add_argument("--matrix", required=True, help="a,b,c,d")

    s = sub.add_parser("jclass", parents=[common], help="classical j from box limits")
    s.add_argument("--mu", required=True)
    s.add_argument("--box-max", type=int, required=True)
    s.add_argument("--order", type=int, default=2, help="Richardson order")
    s.add_argument("--no-extrapolate", action="store_true")

    s = sub.add_parser("jquant", parents=[common], help="quantum j over convergent windows")
    s.add_argument("--theta", required=True)
    s.add_argument("--mu", required=True)
    s.add_argument("--stages", required=True, help="lo..hi or a,b,c")
    s.add_argument("--window", type=int, required=True)

    s = sub.add_parser("weier-residual", parents=[common], help="Weierstrass residual per stage")
    s.add_argument("--mu", required=True)
    s.add_argument("--z", required=True, help="complex literal or t=<real>")
    s.add_argument("--scheme", required=True, help="classical:N1,N2,... | quantum:<theta>:<L>")
    s.add_argument("--stages")
    s.add_argument("--theta", help="slope for t=<real> with classical schemes")

    s = sub.add_parser("orbit", parents=[common], help="GL(2,Z) action and reduction")
    s.add_argument("--mu", required=True)
    s.add_argument("--theta")
    s.add_argument("--matrix")
    return p


def _apply_config(parser: argparse.ArgumentParser, argv: list[str]) -> dict:
    """Install config-file values as defaults of the chosen subparser."""
    path = None
    for j, tok in enumerate(argv):
        if tok == "--config" and j + 1 < len(argv):
            path = argv[j + 1]
        elif tok.startswith("--config="):
            path = tok.split("=", 1)[1]
    if path is None:
        return {}
    config = load_config(path)
    cmd = next((t for t in argv if t in COMMANDS), None)
    if cmd is None:
        return config
    sub = parser._subparsers._group_actions[0].choices[cmd]
    known = {a.dest for a in sub._actions}
    defaults = {}
    for key, value in config.items():
        if key not in known or key in ("config", "help"):
            raise InputError(f"config key {key!r} is not an option of {cmd}")
        if key in BOOL_KEYS:
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            defaults[key] = value
    sub.set_defaults(**defaults)
    return config


def _snapshot(args) -> dict:
    return {k: v for k, v in sorted(vars(args).items()) if k not in ("config", "output")}


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        config = _apply_config(parser, argv)
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:
            return int(exc.code or 0)
        if args.command is None:
            parser.print_help(sys.stderr)
            return 2
        for key in ("precision", "workers", "terms", "k", "box_max", "order", "window"):
            v = getattr(args, key, None)
            if isinstance(v, str):
                try:
                    setattr(args, key, int(v))
                except ValueError:
                    raise InputError(f"{key} must be an integer, got {v!r}") from None
        if args.precision is None:
            args.precision = _default_precision()
        if args.precision < MIN_PRECISION:
            raise InputError(f"precision must be >= {MIN_PRECISION} bits")
        if args.workers < 1:
            raise InputError("workers must be >= 1")
        t0 = time.perf_counter()
        payload = COMMANDS[args.command](args)
        manifest = RunManifest(list(argv), {"file": config, "effective": _snapshot(args)}, args.precision)
        manifest.wall_time_s = round(time.perf_counter() - t0, 6)
        emit(ReportEnvelope(args.command, payload, manifest), args.out, args.output)
        return 0
    except (InputError, IoFailure) as exc:
        print(f"qtj: error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"qtj: numeric error: {exc}", file=sys.stderr)
        return 3
    except QTJError as exc:
        print(f"qtj: error: {exc}", file=sys.stderr)
        return 2


def main(argv: list[str] | None = None) -> int:
    return run(list(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    sys.exit(main())
