"""Geometric automorphisms: Dehn twist words acting on curve classes.

Twist words in handlebody mode are restricted to meridian twist curves,
which is the subgroup extending over the handlebody; general surface
twists are allowed outside that mode.
"""

from . import construct
from .curves import CurveClass
from .errors import PreconditionError, ResourceCapExceeded, VerificationFailure
from .handlebody import CutSystem, SepCutSystem, delta, dual_curve, is_meridian
from .handlebody import validate_cut_system, validate_sep_cut_system

twist = construct.twist


class MCGMap:
    """A word of Dehn twists (curve, exponent), applied left to right."""

    def __init__(self, word, handlebody_mode=False):
        self.word = []
        for t, n in word:
            if not isinstance(t, CurveClass):
                raise PreconditionError("twist curve must be a CurveClass")
            if n == 0:
                raise PreconditionError("twist exponent must be nonzero")
            if handlebody_mode and not is_meridian(t):
                raise PreconditionError(
                    "handlebody-mode twists need meridian twist curves"
                )
            self.word.append((t, int(n)))
        self.handlebody_mode = handlebody_mode

    def inverse(self):
        return MCGMap(
            [(t, -n) for t, n in reversed(self.word)],
            handlebody_mode=self.handlebody_mode,
        )

    def __len__(self):
        return len(self.word)

    def __repr__(self):
        return f"MCGMap({len(self.word)} twists)"


def apply_map(m, c):
    """Image of a curve class under the twist word."""
    cur = c
    for t, n in m.word:
        cur = twist(t, cur, n)
    return cur


def apply_map_to_system(m, system):
    curves = [apply_map(m, c) for c in system.curves]
    if isinstance(system, CutSystem):
        return validate_cut_system(curves)
    if isinstance(system, SepCutSystem):
        return validate_sep_cut_system(curves)
    raise PreconditionError("unknown system type")


def _dual_for(d, variant=0):
    """Deterministic dual curve crossing d exactly once.

    Scheme-curve candidates are tried lowest index first; when none works
    the generic region search provides a dual.
    """
    from .surface import std_curve

    model = d.model
    cands = []
    for i in range(1, model.g + 1):
        cands.append(std_curve(model, "a", i))
        cands.append(std_curve(model, "b", i))
    found = 0
    for cand in cands:
        if construct.intersection_number(cand, d) == 1:
            if found == variant:
                return cand
            found += 1
    return dual_curve(d, variant=variant - found)


def phi_m(m, d, variant=0):
    """Extension of the twist word to non-separating meridians through the
    delta correspondence: pick Z with delta(Z) = d and return
    delta(m(Z))."""
    if d.is_separating() or not is_meridian(d):
        raise PreconditionError("phi_m needs a non-separating meridian")
    sigma = _dual_for(d, variant=variant)
    z = construct.band_double(d, sigma)
    if delta(z) != d:
        raise VerificationFailure("band double lost its core meridian")
    return delta(apply_map(m, z))


def enumerate_meridians(seeds, gens, depth, filt=None, cap=20000):
    """Deduplicated filter-passing images of seeds under generator words
    of length at most depth, in deterministic order."""
    out = {}
    frontier = {}
    for s in seeds:
        frontier[s.key()] = s
    for s in sorted(frontier):
        c = frontier[s]
        if filt is None or filt(c):
            out[c.key()] = c
    seen = set(frontier)
    for _ in range(depth):
        nxt = {}
        for key in sorted(frontier):
            c = frontier[key]
            for gmap in gens:
                img = apply_map(gmap, c)
                k = img.key()
                if k in seen:
                    continue
                seen.add(k)
                if len(seen) > cap:
                    raise ResourceCapExceeded("meridian enumeration cap hit")
                nxt[k] = img
                if filt is None or filt(img):
                    out[k] = img
        frontier = nxt
        if not frontier:
            break
    return [out[k] for k in sorted(out)]
