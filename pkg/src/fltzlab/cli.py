"""Command-line surface tying the pipeline together.

Subcommands: ``fan-info``, ``skeleton``, ``hom``, ``verify`` and
``quiver``.  Exit codes: 0 on success, 1 on verification failure, 2 on
input errors.  All file writes are atomic (temp file + rename), and
every randomized check takes a ``--seed`` with a fixed default.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from fractions import Fraction
from math import comb

from . import cohside, conside, fans, picsym, skeleton
from .zlin import IntMatrix

DEFAULT_SEED = 20240814


class InputError(ValueError):
    pass


def _read_fan(spec):
    """Load a fan from a file path or an inline JSON object string."""
    if spec.lstrip().startswith("{"):
        text, origin = spec, "<inline>"
    else:
        try:
            with open(spec, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {spec}: {exc}") from exc
        origin = spec
    try:
        return fans.fan_from_json(text)
    except json.JSONDecodeError as exc:
        raise InputError(
            f"{origin}: invalid JSON: {exc.msg} at line {exc.lineno} "
            f"column {exc.colno}") from exc
    except fans.FanError as exc:
        raise InputError(f"{origin}: {exc}") from exc


def _write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(text, path=None):
    if path:
        _write_atomic(path, text)
    else:
        print(text)


def _parse_pic(spec_text, n):
    if not spec_text:
        return [picsym.PicMonomial.unit(n) for _ in range(n)], None
    names = [s.strip() for s in spec_text.split(",")]
    if len(names) != n:
        raise InputError(f"--pic needs exactly {n} comma-separated names")
    gens = [picsym.PicMonomial.generator(i, n) for i in range(n)]
    return gens, names


# ---------------------------------------------------------------------------
# subcommands


def cmd_fan_info(args):
    obj = _read_fan(args.fan)
    fan = obj.fan_hat if isinstance(obj, fans.StackyFan) else obj
    maxc = fan.maximal_cones()
    smooth = all(fans.is_smooth_cone(c) for c in maxc)
    nerve = fans.cech_nerve(fan) if maxc else None
    report = {
        "rank": fan.rank,
        "n_cones": len(fan),
        "n_rays": len(fan.rays()),
        "max_cones": len(maxc),
        "smooth": smooth,
        "nerve": nerve.count_by_dim() if nerve else {},
    }
    if isinstance(obj, fans.StackyFan):
        report["stacky_valid"] = fans.validate_stacky(obj)
    if args.json:
        _emit(json.dumps(report, sort_keys=True, default=str), args.output)
    else:
        nerve_text = ", ".join(f"{v} of dim {k}"
                               for k, v in sorted(report["nerve"].items()))
        lines = [
            f"fan of rank {report['rank']}: {report['n_cones']} cones, "
            f"{report['n_rays']} rays, {report['max_cones']} maximal",
            f"smooth: {'yes' if smooth else 'no'}",
            f"nerve: {nerve_text or 'empty'}",
        ]
        if "stacky_valid" in report:
            lines.append(f"stacky data valid: "
                         f"{'yes' if report['stacky_valid'] else 'no'}")
        _emit("\n".join(lines), args.output)
    return 0


def cmd_skeleton(args):
    obj = _read_fan(args.fan)
    comps = skeleton.fltz_components(obj)
    if args.svg is not None:
        fan = obj.fan if isinstance(obj, fans.StackyFan) else obj
        p2 = fans.standard_fan("Pn", n=2) if fan.rank == 2 else None
        if p2 is not None and fan == p2:
            drawing = skeleton.emit_svg(skeleton.chamber_quiver(2))
        else:
            drawing = skeleton.emit_svg(comps)
        _emit(drawing, args.svg)
        return 0
    data = {
        "rank": comps[0].cone.ambient_rank if comps else 0,
        "components": [
            {
                "fiber_cone": [list(g) for g in c.cone.rays],
                "character": [str(x) for x in c.character],
                "base_dim": c.base_dim,
            }
            for c in comps
        ],
    }
    _emit(json.dumps(data, sort_keys=True), args.json_out)
    return 0


def cmd_hom(args):
    bound = args.bound
    if bound < 0:
        raise InputError("--bound must be nonnegative")
    if args.side == "coh":
        if args.stack:
            obj = _read_fan(args.stack)
            if not isinstance(obj, fans.StackyFan):
                obj = fans.StackyFan.nonstacky(obj)
            G = cohside.gamma_category(obj)
            chars = G.group.characters()
            try:
                chi = chars[args.src]
                chi2 = chars[args.dst]
            except IndexError as exc:
                raise InputError("character index out of range") from exc
            dims = cohside.hom_graded(G, chi, chi2, bound)
            _emit(_dims_table(f"hom({args.src} -> {args.dst})", dims),
                  args.output)
        else:
            n = args.n
            if n is None:
                raise InputError("--side coh needs --pn N or --stack FILE")
            coh = cohside.pn_line_bundle_cohomology(n, args.dst - args.src)
            _emit(f"hom(O({args.src}), O({args.dst})) on P{n}: "
                  f"dim = {coh[0]} (H = {list(coh)})", args.output)
    else:
        n = args.n
        if n is None:
            raise InputError("--side con needs --pn N")
        if not (1 <= args.src <= n + 1 and 1 <= args.dst <= n + 1):
            raise InputError("generator indices must lie in 1..n+1")
        cat = conside.ChamberCategory(n)
        M = conside.beilinson_rep(n, args.src, cat)
        N = conside.beilinson_rep(n, args.dst, cat)
        ext = conside.rep_hom(M, N)
        _emit(f"hom(gen {args.src}, gen {args.dst}) on the P{n} chamber "
              f"category: dim = {ext[0]} (Ext = {ext})", args.output)
    return 0


def _dims_table(title, dims):
    lines = [title, "degree  dim"]
    for d, v in enumerate(dims.dims):
        lines.append(f"{d:6d}  {v}")
    return "\n".join(lines)


def cmd_quiver(args):
    n = args.n
    pic, names = _parse_pic(None if args.untwisted else args.pic, n)
    q = skeleton.chamber_quiver(n, pic)
    dot = conside.quiver_to_dot(q, names)
    _emit(dot, args.dot)
    return 0


# ---------------------------------------------------------------------------
# verification suites


def _check(name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] {name}" + (f": {detail}" if detail and not ok else ""))
    return bool(ok)


def verify_ccc(n):
    ok = True
    for e in range(0, 5):
        coh = cohside.pn_line_bundle_cohomology(n, e)
        ok &= _check(f"P{n} H0(O({e})) = C({n + e},{n})",
                     coh[0] == comb(n + e, n), f"{coh}")
        ok &= _check(f"P{n} middle cohomology of O({e}) vanishes",
                     all(x == 0 for x in coh[1:]), f"{coh}")
    for d in range(-n - 1, -n - 5, -1):
        coh = cohside.pn_line_bundle_cohomology(n, d)
        ok &= _check(f"P{n} Hn(O({d})) = C({-d - 1},{n})",
                     coh[n] == comb(-d - 1, n) and
                     all(x == 0 for x in coh[:n]), f"{coh}")
    for e in range(-4, 5):
        expected = _binomial_continuation(n, e)
        got = cohside.euler_pairing_coherent(n, 0, e)
        ok &= _check(f"P{n} euler pairing O -> O({e}) = {expected}",
                     got == expected, f"got {got}")
    if n <= 3:
        cat = conside.ChamberCategory(n)
        gens = [conside.beilinson_rep(n, k, cat) for k in range(1, n + 2)]
        gram = [[conside.euler_form(cat, a.dim_vector(), b.dim_vector())
                 for b in gens] for a in gens]
        coh_gram = [[cohside.euler_pairing_coherent(n, i, j)
                     for j in range(n + 1)] for i in range(n + 1)]
        ok &= _check(f"P{n} euler Gram matches coherent Gram",
                     gram == coh_gram, f"{gram} vs {coh_gram}")
    if n <= 2:
        cat = conside.ChamberCategory(n)
        gens = [conside.beilinson_rep(n, k, cat) for k in range(1, n + 2)]
        for i in range(n + 1):
            for j in range(n + 1):
                ext = conside.rep_hom(gens[i], gens[j])
                coh = cohside.pn_line_bundle_cohomology(n, j - i)
                ok &= _check(
                    f"P{n} rep hom gen{i + 1} -> gen{j + 1} = coherent H0",
                    ext[0] == coh[0] and all(x == 0 for x in ext[1:]),
                    f"{ext} vs {coh}")
    return ok


def _binomial_continuation(n, e):
    num = 1
    for i in range(1, n + 1):
        num *= e + i
    den = 1
    for i in range(1, n + 1):
        den *= i
    return num // den


def verify_chambers(n):
    ok = True
    chambers = skeleton.enumerate_chambers(n)
    counts = skeleton.chamber_step_counts(n)
    by_step = [0] * (n + 1)
    for c in chambers:
        by_step[c.step] += 1
    ok &= _check(f"n={n} geometric counts match the closed formula",
                 by_step == counts, f"{by_step} vs {counts}")
    eps2 = Fraction(1, 4 * n + 4)
    ok &= _check(f"n={n} chamber set is stable under a finer epsilon",
                 skeleton.enumerate_chambers(n, eps2) == chambers)
    if n == 2:
        ok &= _check("n=2 total chamber count is 7", len(chambers) == 7)
    return ok


def verify_kappa(n):
    ok = True
    stack = fans.StackyFan(
        IntMatrix([[n]]),
        fans.fan_from_max_cones([fans.Cone([(1,)], ambient_rank=1)]))
    G = cohside.gamma_category(stack)
    ray = fans.Cone([(1,)], ambient_rank=1)
    for i in range(n):
        chi = (Fraction(i, n),)
        iso = cohside.isotypic_component(G.monoid, chi, 10)
        stalk = cohside.costandard_stalk(ray, chi, 10, denominator=n)
        ok &= _check(f"kappa on the order-{n} cyclic chart, character {i}",
                     iso.dims == stalk.dims, f"{iso.dims} vs {stalk.dims}")
    for m in range(1, 4):
        for k in range(1, m + 1):
            cone = fans.Cone([tuple(int(i == j) for j in range(m))
                              for i in range(k)], ambient_rank=m)
            monoid = cohside.AffineMonoid(
                k, [tuple(int(i == j) for j in range(k)) for i in range(k)])
            iso = cohside.isotypic_component(monoid, (0,) * k, 10)
            stalk = cohside.costandard_stalk(cone, (0,) * m, 10)
            ok &= _check(f"kappa on cone(e1..e{k}) in Z^{m}",
                         iso.dims == stalk.dims,
                         f"{iso.dims} vs {stalk.dims}")
    return ok


def verify_monodromy(n):
    ok = True
    pic = [picsym.PicMonomial.generator(i, n) for i in range(n)]
    q = skeleton.chamber_quiver(n, pic)
    mono = picsym.monodromy(
        IntMatrix.identity(n),
        picsym.Ikari(IntMatrix([[-x for x in row]
                                for row in IntMatrix.identity(n).entries])))
    for v in q.vertices:
        a, _ = v.region()
        disp = tuple(x - y for x, y in
                     zip(a, skeleton._canonical_avec(n, v.step)))
        ok &= _check(
            f"label of {v.chamber.flag_string()},{v.chamber.slant} matches "
            "monodromy transport",
            v.label == mono.transport(disp))
    if n == 2:
        expected = sorted([(0, 0), (0, 1), (0, 0), (-1, 1), (0, 1),
                           (1, 0), (0, 0)])
        got = sorted(v.label.exponents for v in q.vertices)
        ok &= _check("n=2 twisted label multiset matches the comparison "
                     "picture", got == expected, f"{got}")
    from itertools import product as iproduct
    homomorphic = all(
        mono.transport(v1) * mono.transport(v2) ==
        mono.transport(tuple(a + b for a, b in zip(v1, v2)))
        for v1 in iproduct(range(-2, 3), repeat=n)
        for v2 in iproduct(range(-2, 3), repeat=n))
    ok &= _check("transport is path independent (composite = direct on all "
                 "translation pairs)", homomorphic)
    return ok


def verify_generation(n, seed):
    ok = True
    rng = random.Random(seed)
    failures = 0
    for _ in range(100):
        d = [rng.randint(-5, 5) for _ in range(n + 1)]
        try:
            trace = conside.reduce_dimension_vector(n, d)
            good = (len(trace) == n + 1 and
                    all(x == 0 for x in trace[-1].remainder))
        except conside.GenerationFailure:
            good = False
        if not good:
            failures += 1
    ok &= _check(f"100 seeded random reductions reach zero in {n + 1} steps",
                 failures == 0, f"{failures} failures")
    cat = conside.ChamberCategory(n)
    gens = [conside.beilinson_rep(n, k, cat) for k in range(1, n + 2)]
    gram = [[conside.euler_form(cat, a.dim_vector(), b.dim_vector())
             for b in gens] for a in gens]
    tri = all(gram[i][j] == 0 for i in range(n + 1) for j in range(i))
    uni = all(gram[i][i] == 1 for i in range(n + 1))
    ok &= _check(f"n={n} generator Gram is unimodular triangular",
                 tri and uni, f"{gram}")
    return ok


def cmd_verify(args):
    suites = {
        "ccc": lambda: verify_ccc(args.n),
        "chambers": lambda: verify_chambers(args.n),
        "kappa": lambda: verify_kappa(args.n),
        "monodromy": lambda: verify_monodromy(args.n),
        "generation": lambda: verify_generation(args.n, args.seed),
    }
    ok = suites[args.what]()
    print("all checks passed" if ok else "verification FAILED")
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def build_parser():
    parser = argparse.ArgumentParser(
        prog="fltzlab",
        description="desk-scale toric skeleton and lattice-hom computations")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fan-info", help="report cones, smoothness, nerve")
    p.add_argument("fan", help="path to a fan JSON file")
    p.add_argument("--json", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_fan_info)

    p = sub.add_parser("skeleton", help="skeleton components or drawing")
    p.add_argument("fan", help="path to a fan JSON file")
    p.add_argument("--svg", nargs="?", const="", metavar="OUT")
    p.add_argument("--json", dest="json_out", nargs="?", const=None,
                   metavar="OUT")
    p.set_defaults(func=cmd_skeleton)

    p = sub.add_parser("hom", help="graded hom dimensions")
    p.add_argument("--side", choices=("coh", "con"), required=True)
    p.add_argument("--pn", dest="n", type=int)
    p.add_argument("--stack", help="stacky fan JSON (coh side)")
    p.add_argument("--from", dest="src", type=int, required=True)
    p.add_argument("--to", dest="dst", type=int, required=True)
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--what", required=True,
                   choices=("ccc", "kappa", "chambers", "monodromy",
                            "generation"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("quiver", help="DOT export of the chamber quiver")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--pic", help="comma-separated generator names, e.g. L,M")
    p.add_argument("--untwisted", action="store_true")
    p.add_argument("--dot", metavar="OUT")
    p.set_defaults(func=cmd_quiver)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (fans.FanError, skeleton.SkeletonError, cohside.CohError,
            conside.ConError, picsym.PicError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
