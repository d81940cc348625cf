"""Line-oriented file formats: curve files, twist-map files, reports.

Curve file:      `genus <g>` header, then `curve <name> : w1 ... w_{6g-3}`
Map file:        `twist <curve-name> <exponent>` per line
Report file:     `report <suite>` header followed by key/value lines and
                 one `failure ...` line per failure.

Comments start with '#'; serialization is bit-exact for fixed inputs (the
elapsed time of a report is carried in memory but not serialized, keeping
outputs byte-identical across runs).
"""

from .curves import CurveClass
from .errors import ParseError
from .mcg import MCGMap
from .model import build_model


def serialize_curves(model, named):
    lines = [f"genus {model.g}"]
    for name in named:
        ws = " ".join(str(w) for w in named[name].weights)
        lines.append(f"curve {name} : {ws}")
    return "\n".join(lines) + "\n"


def parse_curves(text):
    model = None
    named = {}
    order = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "genus":
            if model is not None:
                raise ParseError(f"line {ln}: duplicate genus header")
            try:
                model = build_model(int(parts[1]))
            except (IndexError, ValueError) as exc:
                raise ParseError(f"line {ln}: bad genus header") from exc
            continue
        if parts[0] == "curve":
            if model is None:
                raise ParseError(f"line {ln}: curve before genus header")
            if len(parts) < 4 or parts[2] != ":":
                raise ParseError(f"line {ln}: malformed curve line")
            name = parts[1]
            if name in named:
                raise ParseError(f"line {ln}: duplicate curve {name}")
            try:
                weights = tuple(int(x) for x in parts[3:])
            except ValueError as exc:
                raise ParseError(f"line {ln}: bad weight") from exc
            if len(weights) != model.n_edges:
                raise ParseError(
                    f"line {ln}: expected {model.n_edges} weights"
                )
            named[name] = CurveClass.from_weights(model, weights)
            order.append(name)
            continue
        raise ParseError(f"line {ln}: unknown directive {parts[0]!r}")
    if model is None:
        raise ParseError("missing genus header")
    return model, {name: named[name] for name in order}


def serialize_map(map_entries):
    """map_entries: list of (curve-name, exponent)."""
    return "".join(f"twist {name} {n}\n" for name, n in map_entries)


def parse_map(text, named_curves, handlebody_mode=False):
    word = []
    entries = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "twist" or len(parts) != 3:
            raise ParseError(f"line {ln}: malformed twist line")
        name = parts[1]
        if name not in named_curves:
            raise ParseError(f"line {ln}: unknown curve {name!r}")
        try:
            n = int(parts[2])
        except ValueError as exc:
            raise ParseError(f"line {ln}: bad exponent") from exc
        if n == 0:
            raise ParseError(f"line {ln}: zero exponent")
        word.append((named_curves[name], n))
        entries.append((name, n))
    return MCGMap(word, handlebody_mode=handlebody_mode), entries


def serialize_report(report):
    lines = [
        f"report {report.suite}",
        f"genus {report.genus}",
        f"seed {report.seed}",
        f"samples {report.samples}",
        f"instances {report.instances}",
        f"failures {len(report.failures)}",
    ]
    for fid, expected, got in report.failures:
        lines.append(f"failure {fid} expected {expected} got {got}")
    return "\n".join(lines) + "\n"


def parse_report(text):
    from .verify import VerificationReport

    fields = {}
    failures = []
    suite = None
    for ln, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "report":
            suite = parts[1]
        elif parts[0] == "failure":
            try:
                e_at = parts.index("expected")
                g_at = parts.index("got")
            except ValueError as exc:
                raise ParseError(f"line {ln}: malformed failure") from exc
            failures.append(
                (
                    " ".join(parts[1:e_at]),
                    " ".join(parts[e_at + 1 : g_at]),
                    " ".join(parts[g_at + 1 :]),
                )
            )
        elif parts[0] in ("genus", "seed", "samples", "instances", "failures"):
            fields[parts[0]] = int(parts[1])
        else:
            raise ParseError(f"line {ln}: unknown directive {parts[0]!r}")
    if suite is None:
        raise ParseError("missing report header")
    rep = VerificationReport(
        suite,
        genus=fields.get("genus", 0),
        seed=fields.get("seed", 0),
        samples=fields.get("samples", 0),
    )
    rep.instances = fields.get("instances", 0)
    rep.failures = failures
    return rep
