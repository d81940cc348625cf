"""Curve constructions driven by overlay crossings.

All constructions assemble a chord cycle for the new curve by splicing
traversals of existing owners at their crossing points, then canonicalize
through CurveClass.from_cycle.  Junction chords merge a partial chord of
one owner with a partial chord of another inside the crossing triangle.
"""

from .arrange import (
    Arrangement,
    _arrive_slot,
    _depart_slot,
    _partial_path,
    _smoothing_cycle,
    _within_chord,
    overlay,
)
from .curves import CurveClass
from .errors import MlabError, PreconditionError

_INTERSECT_CACHE = {}


def intersection_number(c1, c2):
    """Geometric intersection number of two curve classes."""
    if c1.model.g != c2.model.g:
        raise PreconditionError("curves on different models")
    if c1.weights == c2.weights:
        return 0
    key = (c1.model.g, min(c1.weights, c2.weights), max(c1.weights, c2.weights))
    hit = _INTERSECT_CACHE.get(key)
    if hit is not None:
        return hit
    arr = overlay(c1.model, {"x": c1, "y": c2})
    n = arr.crossing_count("x", "y")
    _INTERSECT_CACHE[key] = n
    return n


def _full_loop(owner, k, flip=False):
    """Chords of the owner's cycle strictly after chord k, in order (or the
    reversed flipped chords when flip is set)."""
    n = len(owner.chords)
    idxs = [(k + 1 + i) % n for i in range(n - 1)]
    if not flip:
        return [owner.chords[i] for i in idxs]
    return [(t, y, x) for (t, x, y) in reversed([owner.chords[i] for i in idxs])]


def band_double(c, sigma):
    """Boundary of a neighbourhood of c union sigma when they cross once.

    For a non-separating meridian c this is the standard genus-1
    separating meridian with delta equal to c.
    """
    model = c.model
    arr = overlay(model, {"c": c, "s": sigma})
    crossings = [x for x in arr.crossings() if {x.a, x.b} == {"c", "s"}]
    if len(crossings) != 1:
        raise PreconditionError(
            f"band_double needs intersection number 1, got {len(crossings)}"
        )
    q = crossings[0]
    oc, os = arr.owners["c"], arr.owners["s"]
    kc, ks = q.chord_of("c"), q.chord_of("s")
    t = q.tri
    _, a, b_ = oc.chords[kc]
    _, cs, ds = os.chords[ks]
    cyc = (
        _full_loop(oc, kc)
        + [(t, a, ds)]
        + _full_loop(os, ks)
        + [(t, cs, a)]
        + _full_loop(oc, kc, flip=True)
        + [(t, b_, cs)]
        + _full_loop(os, ks, flip=True)
        + [(t, ds, b_)]
    )
    return CurveClass.from_cycle(model, cyc)


def _smoothing(arr, name_x, name_d, q1, q2, fwd_x, fwd_d):
    """Closed chord cycle: x-arc q1->q2 then d-arc q2->q1."""
    return _smoothing_cycle(arr, name_x, name_d, q1, q2, fwd_x, fwd_d)


def surgery_along_arc(x_curve, d_curve):
    """The four smoothings of two separating meridians crossing twice."""
    model = x_curve.model
    arr = overlay(model, {"x": x_curve, "d": d_curve})
    crs = [c for c in arr.crossings() if {c.a, c.b} == {"x", "d"}]
    if len(crs) != 2:
        raise PreconditionError(
            f"surgery needs intersection number 2, got {len(crs)}"
        )
    q1, q2 = crs
    out = []
    for fwd_x, fwd_d, q_first, q_second in (
        (True, True, q1, q2),
        (True, False, q1, q2),
        (False, True, q1, q2),
        (False, False, q1, q2),
    ):
        cyc = _smoothing(arr, "x", "d", q_first, q_second, fwd_x, fwd_d)
        out.append(CurveClass.from_cycle(model, cyc))
    return out


def twist(t_curve, c_curve, n):
    """Class of the n-th Dehn twist of c about t."""
    if n == 0:
        raise PreconditionError("twist exponent must be nonzero")
    model = t_curve.model
    if t_curve.weights == c_curve.weights:
        return c_curve
    arr = overlay(model, {"t": t_curve, "c": c_curve})
    ot, oc = arr.owners["t"], arr.owners["c"]
    crs = [x for x in arr.crossings() if {x.a, x.b} == {"t", "c"}]
    if not crs:
        return c_curve
    per_chord = {}
    for x in crs:
        per_chord.setdefault(x.chord_of("c"), []).append(x)
    L = len(ot.chords)
    out = []
    for k, chord in enumerate(oc.chords):
        hits = sorted(per_chord.get(k, []), key=lambda x: x.param_of("c"))
        if not hits:
            out.append(chord)
            continue
        tri, xin, xout = chord
        prev_in = xin
        for cr in hits:
            kt = cr.chord_of("t")
            _, u, v = ot.chords[kt]
            sign_ct = cr.sign if cr.a == "c" else -cr.sign
            d = (1 if n > 0 else -1) * sign_ct
            wind = abs(n) * L - 1
            if d > 0:
                out.append((tri, prev_in, v))
                i = (kt + 1) % L
                for _ in range(wind):
                    out.append(ot.chords[i])
                    i = (i + 1) % L
                prev_in = u
            else:
                out.append((tri, prev_in, u))
                i = (kt - 1) % L
                for _ in range(wind):
                    tt, a, b = ot.chords[i]
                    out.append((tt, b, a))
                    i = (i - 1) % L
                prev_in = v
        out.append((tri, prev_in, xout))
    return CurveClass.from_cycle(model, out)
