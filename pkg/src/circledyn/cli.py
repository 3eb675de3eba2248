"""Command-line front end: build, verify, scan and export.

Exit codes: 0 when every check in the requested report is green, 2 when a
check is red, 1 on usage errors or computational failures.  All reports are
emitted with sorted keys and sorted rows, so repeated runs are byte-stable.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .arith import rat_str
from .errors import CircledynError
from .families import FAMILIES, make, mts1_scan, verify
from .graphext import CombGraph, extend, verify_extension
from .minentropy import beta
from .oracle import periods_up_to
from .periods import m_set


def _emit(data, out_path=None):
    text = json.dumps(data, sort_keys=True, indent=2, default=str)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_periods(args) -> int:
    c, d = Fraction(args.c), Fraction(args.d)
    ms = m_set(c, d)
    _emit(ms.to_json(), args.out)
    return 0


def _cmd_family(args) -> int:
    inst = make(args.family, args.n)
    if not args.verify:
        _emit(
            {
                "family": inst.name,
                "n": inst.n,
                "classes": inst.markov.size,
                "lifting": inst.lifting.to_json(),
                "markov": inst.markov.to_json(),
            },
            args.out,
        )
        return 0
    rep = verify(inst, tol=Fraction(1, 10 ** args.digits))
    _emit(rep.to_json(), args.out)
    green = rep.strict_green if args.strict else rep.all_green
    return 0 if green else 2


def _cmd_scan(args) -> int:
    res = mts1_scan(args.family, args.start, args.end, tol=Fraction(1, 10 ** args.digits))
    if args.json:
        _emit(res.to_json(), args.out)
        return 0 if res.all_green else 2
    rows = res.rows
    lines = ["n,rot_c,rot_d,len_rot,entropy_lo,entropy_hi,sbc,bc,flags"]
    for r in rows:
        flags = ";".join(f"{k}={v}" for k, v in sorted(r.flags.items()))
        lines.append(
            ",".join(
                [
                    str(r.n),
                    rat_str(r.rot.c),
                    rat_str(r.rot.d),
                    rat_str(r.len_rot),
                    rat_str(r.entropy.lower),
                    rat_str(r.entropy.upper),
                    str(r.sbc),
                    str(r.bc) if r.bc is not None else "",
                    flags,
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if args.svg:
        _write_svg(args.svg, rows)
    return 0 if res.all_green else 2


def _write_svg(path: str, rows) -> None:
    """Minimal polyline chart: entropy midpoint and bc against n."""
    if not rows:
        return
    W, H, pad = 640, 360, 40
    ns = [r.n for r in rows]
    ents = [float(r.entropy.midpoint()) for r in rows]
    bcs = [float(r.bc if r.bc is not None else 0) for r in rows]

    def scale(vals, lo_out, hi_out):
        lo, hi = min(vals), max(vals)
        span = (hi - lo) or 1.0
        return [lo_out + (v - lo) / span * (hi_out - lo_out) for v in vals]

    xs = scale(ns, pad, W - pad)
    y_ent = scale(ents, H - pad, pad)
    y_bc = scale(bcs, H - pad, pad)

    def polyline(xs, ys, color):
        pts = " ".join(f"{x:.1f},{y:.1f}" for x, y in zip(xs, ys))
        return f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>'

    svg = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}">',
        f'<rect width="{W}" height="{H}" fill="white"/>',
        polyline(xs, y_ent, "#b22"),
        polyline(xs, y_bc, "#22b"),
        f'<text x="{pad}" y="{pad - 20}" font-size="12" fill="#b22">sigma(n)</text>',
        f'<text x="{pad + 80}" y="{pad - 20}" font-size="12" fill="#22b">bc(n)</text>',
        "</svg>",
    ]
    with open(path, "w") as fh:
        fh.write("\n".join(svg) + "\n")


def _cmd_beta(args) -> int:
    res = beta(Fraction(args.c), Fraction(args.d), tol=Fraction(args.tol))
    _emit(res.to_json(), args.out)
    return 0 if res.method_agreement else 2


def _cmd_extend(args) -> int:
    inst = make(args.family, args.n)
    with open(args.graph) as fh:
        raw = json.load(fh)
    G = CombGraph.from_json(raw)
    E = extend(inst, G, edge_index=CombGraph.excise_hint_from_json(raw))
    rep = verify_extension(E)
    data = {
        "family": E.name,
        "n": E.n,
        "m": E.m,
        "u_count": E.u_count,
        "size": E.size,
    }
    green = True
    for k, v in rep.items():
        if k in ("ext_entropy", "base_entropy"):
            data[k] = v.to_json()
        else:
            data[k] = v
            if isinstance(v, bool) and k not in ("permutation",):
                green = green and v
    _emit(data, args.out)
    return 0 if green else 2


def _cmd_oracle(args) -> int:
    inst = make(args.family, args.n)
    res = periods_up_to(inst.lifting, inst.markov, args.max_period, loop_cap=args.loop_cap)
    expected = inst.expected_per.up_to(args.max_period)
    data = res.to_json()
    data["expected_periods"] = sorted(expected)
    data["matches_closed_form"] = res.periods() == expected
    _emit(data, args.out)
    return 0 if data["matches_closed_form"] else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="circledyn", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("periods", help="M(c,d) with its cofinite tail threshold")
    p.add_argument("--c", required=True, help='left endpoint, e.g. "1/2"')
    p.add_argument("--d", required=True, help='right endpoint, e.g. "7/10"')
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_periods)

    p = sub.add_parser("family", help="build one family instance, optionally verify")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--verify", action="store_true")
    p.add_argument("--digits", type=int, default=12, help="bracket tolerance 10^-digits")
    p.add_argument(
        "--strict",
        action="store_true",
        help="treat the documented small-n theorem-bound failures as red",
    )
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_family)

    p = sub.add_parser("scan", help="main-theorem desk scan over an n range")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--from", dest="start", type=int, required=True)
    p.add_argument("--to", dest="end", type=int, required=True)
    p.add_argument("--digits", type=int, default=9)
    p.add_argument("--json", action="store_true", help="emit the JSON report instead of CSV")
    p.add_argument("--out")
    p.add_argument("--svg")
    p.set_defaults(fn=_cmd_scan)

    p = sub.add_parser("beta", help="minimum entropy exponent for a rotation interval")
    p.add_argument("--c", required=True)
    p.add_argument("--d", required=True)
    p.add_argument("--tol", default="1/1000000000")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_beta)

    p = sub.add_parser("extend", help="extend a family instance over a graph")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--graph", required=True, help="CombGraph JSON file")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_extend)

    p = sub.add_parser("oracle", help="brute-force periods of a family instance")
    p.add_argument("family", choices=sorted(FAMILIES))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-period", type=int, required=True)
    p.add_argument("--loop-cap", type=int, default=10**6, help="loop enumeration budget")
    p.add_argument("--out")
    p.set_defaults(fn=_cmd_oracle)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return 1 if e.code not in (0, None) else 0
    try:
        return args.fn(args)
    except CircledynError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
