"""mlab: batch verification and construction tool.

Exit codes: 0 success, 2 parse error, 3 precondition failure,
4 verification failure, 5 resource cap exceeded.
"""

import argparse
import sys

from . import construct, io as mio
from .arcs import band_sum
from .complexes import build_subcomplex, export_dot, link
from .errors import (
    MlabError,
    ParseError,
    PreconditionError,
    ResourceCapExceeded,
    VerificationFailure,
)
from .handlebody import classify, delta
from .model import build_model
from .surface import standard_family, std_curve
from .verify import SUITES, run_suite


def _load_curves(path):
    with open(path, "r", encoding="utf-8") as fh:
        return mio.parse_curves(fh.read())


def _resolve_curve(model, named, ref):
    """A curve reference: a name from the file or kind:index shorthand."""
    if ref in named:
        return named[ref]
    if ":" in ref:
        kind, idx = ref.split(":", 1)
        return std_curve(model, kind, int(idx))
    raise ParseError(f"unknown curve reference {ref!r}")


def cmd_classify(args):
    model, named = _load_and_model(args)
    c = _resolve_curve(model, named, args.curve)
    info = classify(c)
    if not info.is_meridian:
        print("non-meridian")
    elif info.separating:
        print(f"meridian separating {info.genus_type}")
    else:
        print("meridian non-separating")
    return 0


def _load_and_model(args):
    if args.curves:
        return _load_curves(args.curves)
    if args.genus:
        return build_model(args.genus), {}
    raise ParseError("need --curves or --genus")


def _emit_curves(model, named, out):
    text = mio.serialize_curves(model, named)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_delta(args):
    model, named = _load_and_model(args)
    c = _resolve_curve(model, named, args.curve)
    d = delta(c)
    _emit_curves(model, {"delta": d}, args.out)
    return 0


def cmd_join(args):
    model, named = _load_and_model(args)
    c1 = _resolve_curve(model, named, args.curve)
    c2 = _resolve_curve(model, named, args.curve2)
    avoid = [_resolve_curve(model, named, r) for r in args.avoid or []]
    must = [_resolve_curve(model, named, r) for r in args.must_hit or []]
    joined, _arc = band_sum(model, c1, c2, avoid=avoid, must_hit=must)
    _emit_curves(model, {"join": joined}, args.out)
    return 0


def cmd_twist(args):
    model, named = _load_and_model(args)
    with open(args.map, "r", encoding="utf-8") as fh:
        mp, _entries = mio.parse_map(fh.read(), named)
    c = _resolve_curve(model, named, args.curve)
    from .mcg import apply_map

    out = apply_map(mp, c)
    _emit_curves(model, {"image": out}, args.out)
    return 0


def cmd_verify(args):
    rep = run_suite(
        args.suite,
        args.genus,
        seed=args.seed,
        samples=args.samples,
        depth=args.depth,
    )
    sys.stdout.write(mio.serialize_report(rep))
    print(f"# elapsed {rep.elapsed:.1f}s", file=sys.stderr)
    if rep.failures:
        return 4
    return 0


def cmd_export_dot(args):
    model, named = _load_and_model(args)
    if not named:
        named = standard_family(model)
    fc = build_subcomplex(named)
    if args.link_of:
        fc = link(fc, args.link_of)
    text = export_dot(fc, model.g)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def make_parser():
    p = argparse.ArgumentParser(
        prog="mlab",
        description="combinatorial engine for curves on a handlebody boundary",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--genus", type=int, default=0)
        sp.add_argument("--curves", help="curve file")
        sp.add_argument("--out", help="output file (default stdout)")

    sp = sub.add_parser("classify", help="classify a curve")
    common(sp)
    sp.add_argument("curve")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("delta", help="unique non-separating meridian of a (1,g-1)-meridian")
    common(sp)
    sp.add_argument("curve")
    sp.set_defaults(fn=cmd_delta)

    sp = sub.add_parser("join", help="band sum of two disjoint curves")
    common(sp)
    sp.add_argument("curve")
    sp.add_argument("curve2")
    sp.add_argument("--avoid", nargs="*", help="curves the arc must avoid")
    sp.add_argument("--must-hit", nargs="*", dest="must_hit")
    sp.set_defaults(fn=cmd_join)

    sp = sub.add_parser("twist", help="apply a twist-map file to a curve")
    common(sp)
    sp.add_argument("--map", required=True)
    sp.add_argument("curve")
    sp.set_defaults(fn=cmd_twist)

    sp = sub.add_parser("verify", help="run a verification suite")
    sp.add_argument("suite", choices=sorted(SUITES))
    sp.add_argument("--genus", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--samples", type=int, default=0)
    sp.add_argument("--depth", type=int, default=0)
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("export-dot", help="DOT of a subcomplex 1-skeleton")
    common(sp)
    sp.add_argument("--link-of", dest="link_of")
    sp.set_defaults(fn=cmd_export_dot)
    return p


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except ResourceCapExceeded as exc:
        print(f"resource cap: {exc}", file=sys.stderr)
        return 5
    except VerificationFailure as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 4
    except (PreconditionError, MlabError) as exc:
        print(f"precondition failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
