"""Command-line front end: parsing, dispatch, JSON/text reports.

Reports are emitted on stdout; with ``--format json`` the serialization
is byte-identical across runs of the same configuration (timings go to
stderr, and the ``wall_ms`` field stays null unless ``--timings`` is
given).  Exit codes: 0 when every check passes, 1 for domain errors or
failed checks, 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import coeffield, implicit, normalization, weierstrass
from .errors import AlgebraError
from .fields import GF, PerfClosure
from .parsing import parse_series, parse_tower_poly, scan_nvars
from .rand import (
    random_distinguished,
    random_implicit_problem,
    random_series,
    random_tower_element,
    stream,
)
from .series import EXACT, TruncSeries, taylor_pairs


def _check(name, ok, **extra):
    entry = {"name": name, "pass": bool(ok)}
    entry.update(extra)
    return entry


def _emit(report, fmt, timings, wall_ms):
    report["wall_ms"] = wall_ms if timings else None
    if fmt == "json":
        print(json.dumps(report, sort_keys=True, indent=2, default=str))
    else:
        print(f"== {report['subcommand']} ==")
        for key, val in sorted(report.get("inputs", {}).items()):
            print(f"  {key}: {val}")
        for key, val in sorted(report.get("results", {}).items()):
            print(f"  {key} = {val}")
        for chk in report.get("checks", []):
            mark = "PASS" if chk["pass"] else "FAIL"
            extra = {k: v for k, v in chk.items() if k not in ("name", "pass")}
            tail = f"  {extra}" if extra else ""
            print(f"  [{mark}] {chk['name']}{tail}")
        if timings:
            print(f"  wall_ms: {wall_ms}")
    print(f"elapsed: {wall_ms} ms", file=sys.stderr)


def _parse_alpha(text):
    return tuple(int(x) for x in text.split(","))


# -- subcommand handlers -------------------------------------------------------


def _cmd_delta(args):
    ring = GF(args.p)
    f = parse_series(args.series, ring, prec=args.prec)
    alpha = _parse_alpha(args.alpha)
    out = f.delta(alpha)
    return {
        "inputs": {"series": args.series, "alpha": list(alpha), "p": args.p},
        "results": {"delta": str(out), "prec": out.prec if not out.is_exact() else "exact"},
        "checks": [],
    }


def _cmd_leibniz_check(args):
    ring = GF(args.p)
    rng = stream(args.seed, f"leibniz:{args.p}:{args.nvars}")
    checks = []
    alphas = [a for a in _alphas_upto(args.nvars, args.max_alpha)]
    ok_all = True
    for trial in range(args.count):
        f = random_series(rng, ring, args.nvars, args.prec)
        g = random_series(rng, ring, args.nvars, args.prec)
        fg = f * g
        df = {a: f.delta(a) for a in alphas}
        dg = {a: g.delta(a) for a in alphas}
        for alpha in alphas:
            lhs = fg.delta(alpha)
            rhs = TruncSeries.zero(ring, args.nvars, args.prec)
            for beta, sig in taylor_pairs(alpha):
                rhs = rhs + df[beta] * dg[sig]
            cd = max(1, args.prec - sum(alpha))
            if not (lhs.truncate(cd) == rhs.truncate(cd)):
                ok_all = False
    checks.append(_check("leibniz-product-rule", ok_all,
                         trials=args.count, max_alpha=args.max_alpha))
    return {
        "inputs": {"p": args.p, "nvars": args.nvars, "prec": args.prec,
                   "count": args.count, "seed": args.seed},
        "results": {},
        "checks": checks,
    }


def _alphas_upto(nvars, bound):
    out = []

    def rec(prefix, left):
        if len(prefix) == nvars:
            out.append(tuple(prefix))
            return
        for v in range(left + 1):
            rec(prefix + [v], left - v)

    rec([], bound)
    return [a for a in out if sum(a) >= 1]


def _cmd_distinguish(args):
    ring = GF(args.p)
    f = parse_series(args.series, ring, prec=args.prec).truncate(args.prec)
    g, choice = weierstrass.distinguish(f, p_multiples=args.p_multiples)
    q = g.origin_order_last()
    return {
        "inputs": {"series": args.series, "p": args.p, "prec": args.prec,
                   "p_multiples": args.p_multiples},
        "results": {"sigma": list(choice.sigma), "order": q, "result": str(g)},
        "checks": [_check("distinguished-order-certified", q < args.prec, order=q)],
    }


def _cmd_wprep(args):
    ring = GF(args.p)
    f = parse_series(args.series, ring, prec=args.prec).truncate(args.prec)
    g, choice = weierstrass.distinguish(f, p_multiples=args.p_multiples)
    fact = weierstrass.weierstrass_prepare(g)
    recon = fact.unit * fact.poly_series() == g
    return {
        "inputs": {"series": args.series, "p": args.p, "prec": args.prec},
        "results": {
            "sigma": list(choice.sigma),
            "q": fact.q,
            "H": str(fact.poly_series()),
            "unit": str(fact.unit),
        },
        "checks": [_check("preparation-reconstructs", recon)],
    }


def _cmd_normalize(args):
    ring = GF(args.p)
    nv = max([scan_nvars(g) for g in args.gens] + [1])
    gens = [parse_series(g, ring, nvars=nv, prec=None) for g in args.gens]
    if len(gens) == 1:
        res = normalization.normalize_principal(
            gens[0], ensure_separable=args.ensure_separable, prec=args.prec)
    else:
        res = normalization.normalize_ideal(gens, prec=args.prec)
    layers = []
    for layer in res.change.layers:
        layers.append({
            "nvars": layer.nvars,
            "perm": [i + 1 for i in layer.perm],
            "shifts": {f"X{j + 1}": list(alpha)
                       for j, alpha in layer.shift_polynomials().items()},
        })
    shift_ok = all(s % args.p == 0 for s in res.shift_exponent_sets())
    checks = [
        _check("shift-exponents-p-multiples", shift_ok),
        _check("witnesses-monic-distinguished", True,
               degrees=[w.q for w in res.witnesses]),
        _check("separable", res.separable),
    ]
    return {
        "inputs": {"gens": list(args.gens), "p": args.p, "prec": args.prec,
                   "ensure_separable": args.ensure_separable},
        "results": {
            "e": res.e,
            "layers": layers,
            "witnesses": [str(w.poly_series()) for w in res.witnesses],
            "certificates": [str(c) if c is not None else None
                             for c in res.certificates],
        },
        "checks": checks,
    }


def _build_iso(args):
    ring = GF(args.p)
    coeffs = parse_tower_poly(args.mu, ring)
    gen = coeffield.effective_generator(coeffs, norm_prec=4 * args.prec)
    M = args.level if args.level is not None else gen.level + 2
    iso = coeffield.build_cohen(gen, M=M, N=args.prec)
    return gen, iso


def _cmd_cohen(args):
    gen, iso = _build_iso(args)
    s_var = TruncSeries.variable(iso.field, 1, 0, prec=iso.prec)
    checks = [
        _check("generator-image-is-s", iso.image(gen.tower_poly()) == s_var),
        _check("shift-order-one", iso.shift.order() == 1),
    ]
    results = {
        "effective_level": gen.level,
        "effective_generator": gen.tower_poly().render(),
        "working_level": iso.field.level,
        "field_degree": iso.field.degree,
        "shift": str(iso.shift),
    }
    if args.cohen_cmd == "verify":
        wanted = set(args.checks.split(","))
        rng = stream(args.seed, f"cohen-verify:{args.p}")
        if "relation2" in wanted:
            samples = [parse_series("X", GF(args.p)),
                       parse_series("X^2", GF(args.p))]
            for _ in range(2):
                samples.append(random_series(rng, GF(args.p), 1, EXACT,
                                             terms=5, max_exp=7))
            ok = True
            for a in samples:
                ok = ok and iso.check_commutation(a, args.imax)["pass"]
            checks.append(_check("relation2", ok, orders=f"1..{args.imax - 1}"))
        if "flatness" in wanted:
            k = iso.check_flat_kernel()
            checks.append(_check("flatness-kernel-constants", k["pass"],
                                 certified_degree=k["certified_degree"]))
        if "residue" in wanted:
            samples = [iso.field.one(), iso.field.x(),
                       iso.field.theta_level(gen.level)]
            rep = iso.check_coefficient_field(samples)
            checks.append(_check("residue-and-closure", rep["pass"]))
    return {
        "inputs": {"mu": args.mu, "p": args.p, "prec": args.prec,
                   "level": args.level, "seed": args.seed},
        "results": results,
        "checks": checks,
    }


def _cmd_counterexample(args):
    if args.lock_level:
        # propagate the expected failure as a domain error (exit 1)
        coeffield.effective_generator(
            coeffield.counterexample_mu(args.p), lock_level=True)
        raise AlgebraError("unexpected success")  # pragma: no cover
    rep = coeffield.counterexample_report(args.p, N=args.prec)
    checks = [
        _check("locked-all-pth-powers",
               rep["locked"]["error"] == "AllCoefficientsPthPowers"),
        _check("level0-derivative-vanishes",
               rep["level0_derivative"]["error"] == "DerivativeVanishes"),
        _check("unlocked-pipeline-completes",
               rep["unlocked"]["generator_image_is_s"]
               and rep["unlocked"]["effective_level"] == 1),
    ]
    return {
        "inputs": {"p": args.p, "prec": args.prec, "lock_level": False},
        "results": rep,
        "checks": checks,
    }


def _cmd_selftest(args):
    checks = []
    checks.append(_selftest_fields(args.seed))
    checks.extend(_selftest_series(args.seed))
    checks.extend(_selftest_weierstrass(args.seed))
    checks.append(_selftest_implicit(args.seed))
    checks.extend(_selftest_pipeline(args.seed))
    return {
        "inputs": {"seed": args.seed},
        "results": {},
        "checks": sorted(checks, key=lambda c: c["name"]),
    }


def _selftest_fields(seed):
    ok = True
    for p in (2, 3, 5):
        pc = PerfClosure(p)
        rng = stream(seed, f"selftest-fields:{p}")
        for _ in range(150):
            a = random_tower_element(rng, pc)
            if pc.pth_root(pc.frobenius(a)) != a or pc.frobenius(pc.pth_root(a)) != a:
                ok = False
    return _check("fields-pth-root-roundtrip", ok)


def _selftest_series(seed):
    out = []
    ok = True
    for p in (2, 3):
        ring = GF(p)
        for n in (1, 2):
            rng = stream(seed, f"selftest-leibniz:{p}:{n}")
            alphas = _alphas_upto(n, 3)
            for _ in range(10):
                f = random_series(rng, ring, n, 8)
                g = random_series(rng, ring, n, 8)
                fg = f * g
                for alpha in alphas:
                    rhs = TruncSeries.zero(ring, n, 8)
                    for beta, sig in taylor_pairs(alpha):
                        rhs = rhs + f.delta(beta) * g.delta(sig)
                    cd = max(1, 8 - sum(alpha))
                    if not (fg.delta(alpha).truncate(cd) == rhs.truncate(cd)):
                        ok = False
    out.append(_check("series-leibniz", ok))
    ok = True
    for p in (3, 5):
        ring = GF(p)
        rng = stream(seed, f"selftest-factorial:{p}")
        for _ in range(10):
            f = random_series(rng, ring, 2, 7)
            for a1 in range(p):
                for a2 in range(p):
                    if a1 + a2 == 0:
                        continue
                    fact = 1
                    for v in range(1, a1 + 1):
                        fact = fact * v % p
                    for v in range(1, a2 + 1):
                        fact = fact * v % p
                    lhs = f.delta((a1, a2)).scale_int(fact)
                    rhs = f
                    for _ in range(a1):
                        rhs = _formal_partial(rhs, 0)
                    for _ in range(a2):
                        rhs = _formal_partial(rhs, 1)
                    if not (lhs == rhs):
                        ok = False
    out.append(_check("series-factorial-identity", ok))
    return out


def _formal_partial(f, j):
    ring = f.ring
    out = {}
    for alpha, c in f.terms.items():
        if alpha[j] == 0:
            continue
        v = ring.mul(ring.from_int(alpha[j]), c)
        if not ring.is_zero(v):
            key = list(alpha)
            key[j] -= 1
            out[tuple(key)] = v
    return TruncSeries(ring, f.nvars, f.prec, out)


def _selftest_weierstrass(seed):
    out = []
    ok_div, ok_ord = True, True
    for p in (2, 3):
        ring = GF(p)
        rng = stream(seed, f"selftest-weier:{p}")
        for _ in range(10):
            g, q = random_distinguished(rng, ring, 2, 10)
            f = random_series(rng, ring, 2, 10)
            quot, rem = weierstrass.weierstrass_divide(f, g)
            if not (quot * g + rem == f) or rem.last_degree() >= q:
                ok_div = False
        for n in (2, 3):
            rng2 = stream(seed, f"selftest-order:{p}:{n}")
            for _ in range(10):
                f = random_series(rng2, ring, n, EXACT, terms=5,
                                  min_order=1, max_exp=6)
                if f.is_zero():
                    continue
                pts = weierstrass.newton_min_set(f)
                sig = weierstrass.select_sigma(pts, n, p, p_multiples=True)
                g, choice = weierstrass.distinguish(f, p_multiples=True, sigma=sig)
                expect = min(choice.value(a) for a in pts)
                if g.origin_order_last() != expect:
                    ok_ord = False
    out.append(_check("weierstrass-division-reconstruction", ok_div))
    out.append(_check("distinguish-order-law", ok_ord))
    return out


def _selftest_implicit(seed):
    ok = True
    for p in (2, 5):
        ring = GF(p)
        rng = stream(seed, f"selftest-implicit:{p}")
        for _ in range(10):
            G = random_implicit_problem(rng, ring, 16)
            xi = implicit.implicit_solve(G, 16)
            if not implicit.eval_bivariate(G, xi, 16).is_zero():
                ok = False
            if not ring.is_zero(xi.coeff((0,))):
                ok = False
    return _check("implicit-residual-zero", ok)


def _selftest_pipeline(seed):
    ring = GF(2)
    gen = coeffield.effective_generator(parse_tower_poly("t + X", ring))
    iso = coeffield.build_cohen(gen, N=8)
    s_var = TruncSeries.variable(iso.field, 1, 0, prec=8)
    ok_mu = iso.image(gen.tower_poly()) == s_var
    rng = stream(seed, "selftest-pipeline")
    a = random_series(rng, ring, 1, EXACT, terms=5, max_exp=7)
    ok_rel = iso.check_commutation(a, 5)["pass"]
    ok_kernel = iso.check_flat_kernel()["pass"]
    rep = coeffield.counterexample_report(2, N=6)
    ok_cex = (rep["locked"]["error"] == "AllCoefficientsPthPowers"
              and rep["unlocked"]["generator_image_is_s"])
    cusp = parse_series("X1^2 + X2^3", ring).truncate(10)
    res = normalization.normalize_principal(cusp)
    ok_norm = res.e == 1 and res.separable
    return [
        _check("pipeline-generator-image", ok_mu),
        _check("pipeline-relation2", ok_rel),
        _check("pipeline-flat-kernel", ok_kernel),
        _check("pipeline-counterexample", ok_cex),
        _check("pipeline-normalization", ok_norm),
    ]


# -- argument wiring --------------------------------------------------------------


def _add_common(sp, prec_default=12):
    sp.add_argument("--p", type=int, default=2, help="characteristic (prime)")
    sp.add_argument("--prec", type=int, default=prec_default,
                    help="working precision")
    sp.add_argument("--seed", type=int, default=0, help="PRNG seed")
    sp.add_argument("--format", choices=("json", "text"), default="json")
    sp.add_argument("--timings", action="store_true",
                    help="include wall time in the report")


def build_parser():
    ap = argparse.ArgumentParser(
        prog="cohenfields",
        description="Exact coefficient-field machinery for power series in "
                    "positive characteristic")
    sub = ap.add_subparsers(dest="subcommand", required=True)

    sp = sub.add_parser("delta", help="apply a Taylor coefficient map")
    _add_common(sp)
    sp.add_argument("--alpha", required=True, help="comma-separated multi-index")
    sp.add_argument("series")
    sp.set_defaults(fn=_cmd_delta)

    sp = sub.add_parser("leibniz-check", help="seeded product-rule property run")
    _add_common(sp, prec_default=8)
    sp.add_argument("--nvars", type=int, default=2)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--max-alpha", type=int, default=4, dest="max_alpha")
    sp.set_defaults(fn=_cmd_leibniz_check)

    sp = sub.add_parser("distinguish", help="last-variable distinguishing change")
    _add_common(sp)
    sp.add_argument("--p-multiples", action="store_true", dest="p_multiples")
    sp.add_argument("series")
    sp.set_defaults(fn=_cmd_distinguish)

    sp = sub.add_parser("wprep", help="Weierstrass preparation")
    _add_common(sp)
    sp.add_argument("--p-multiples", action="store_true", dest="p_multiples")
    sp.add_argument("series")
    sp.set_defaults(fn=_cmd_wprep)

    sp = sub.add_parser("normalize", help="normalize a polynomial ideal")
    _add_common(sp)
    sp.add_argument("--ensure-separable", action="store_true",
                    dest="ensure_separable")
    sp.add_argument("gens", nargs="+")
    sp.set_defaults(fn=_cmd_normalize)

    sp = sub.add_parser("cohen", help="structure isomorphism pipeline")
    cohen_sub = sp.add_subparsers(dest="cohen_cmd", required=True)
    for name in ("build", "verify"):
        cp = cohen_sub.add_parser(name)
        _add_common(cp, prec_default=8)
        cp.add_argument("--mu", required=True, help="generator, e.g. 't + X'")
        cp.add_argument("--level", type=int, default=None,
                        help="working tower level (default: effective + 2)")
        if name == "verify":
            cp.add_argument("--checks", default="relation2,flatness,residue")
            cp.add_argument("--imax", type=int, default=9)
        cp.set_defaults(fn=_cmd_cohen)

    sp = sub.add_parser("counterexample", help="locked-level failure demo")
    _add_common(sp, prec_default=8)
    sp.add_argument("--lock-level", action="store_true", dest="lock_level")
    sp.set_defaults(fn=_cmd_counterexample)

    sp = sub.add_parser("selftest", help="seeded property suite")
    _add_common(sp)
    sp.set_defaults(fn=_cmd_selftest)

    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    started = time.perf_counter()
    try:
        report = args.fn(args)
    except AlgebraError as exc:
        wall = int((time.perf_counter() - started) * 1000)
        payload = {
            "subcommand": args.subcommand,
            "error": {"type": type(exc).__name__, "message": str(exc)},
        }
        if args.format == "json":
            print(json.dumps(payload, sort_keys=True, indent=2))
        else:
            print(f"error [{type(exc).__name__}]: {exc}")
        print(f"elapsed: {wall} ms", file=sys.stderr)
        return 1
    wall = int((time.perf_counter() - started) * 1000)
    report["subcommand"] = args.subcommand
    report["checks"] = sorted(report.get("checks", []), key=lambda c: c["name"])
    _emit(report, args.format, args.timings, wall)
    return 0 if all(c["pass"] for c in report["checks"]) else 1


if __name__ == "__main__":
    raise SystemExit(main())
