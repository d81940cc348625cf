"""Handlebody structure: meridian detection, classification, delta,
cut systems.

The handlebody is modeled by the quotient of the surface group killing
the B-generators; a simple closed curve bounds a disk in the handlebody
iff its image word is trivial (the disk-criterion is taken as the
definition, which is Dehn's lemma at the modeling level).
"""

from . import construct, cycles, words
from .arcs import connect_arc, join
from .arrange import overlay as _overlay
from .curves import CurveClass
from .errors import (
    MlabError,
    NotMeridianError,
    PreconditionError,
    VerificationFailure,
    WrongMeridianTypeError,
)
from .regions import RegionDecomposition
from .surface import cut_along, std_curve


def hb_word(c):
    """Handlebody image of the curve's word, canonical representative."""
    return c.hb_word()


def is_meridian(c):
    return len(c.hb_word()) == 0


class MeridianInfo:
    def __init__(self, is_meridian_, separating, genus_type=None):
        self.is_meridian = is_meridian_
        self.separating = separating
        self.genus_type = genus_type

    def __repr__(self):
        gt = f" {self.genus_type}" if self.genus_type else ""
        kind = "meridian" if self.is_meridian else "non-meridian"
        sep = "separating" if self.separating else "non-separating"
        return f"<{kind} {sep}{gt}>"

    def __eq__(self, other):
        return (
            isinstance(other, MeridianInfo)
            and (self.is_meridian, self.separating, self.genus_type)
            == (other.is_meridian, other.separating, other.genus_type)
        )


def classify(c):
    """Meridian status, separating status, and the unordered genus type."""
    sep = c.is_separating()
    genus_type = None
    if sep:
        pieces = cut_along(c.model, {"c": c})
        if len(pieces) != 2:
            raise MlabError("separating curve does not give two pieces")
        gs = sorted(p.genus for p in pieces)
        if sum(gs) != c.model.g:
            raise MlabError("piece genera do not sum to g")
        genus_type = (gs[0], gs[1])
    return MeridianInfo(is_meridian(c), sep, genus_type)


def _symplectic(h1, h2):
    out = 0
    for i in range(0, len(h1), 2):
        out += h1[i] * h2[i + 1] - h1[i + 1] * h2[i]
    return out


def _a_part(h):
    return tuple(h[i] for i in range(0, len(h), 2))


def delta(x):
    """The unique non-separating meridian in the genus-1 piece of a
    (1, g-1)-meridian, built from the piece's homology and a Euclidean
    sequence of twists, then verified."""
    model = x.model
    info = classify(x)
    if not (info.is_meridian and info.separating):
        raise NotMeridianError("delta needs a separating meridian")
    if model.g == 2:
        raise WrongMeridianTypeError(
            "delta is ambiguous for (1,1)-meridians at genus 2"
        )
    if info.genus_type != (1, model.g - 1):
        raise WrongMeridianTypeError(
            f"delta needs a (1,g-1)-meridian, got {info.genus_type}"
        )
    arr = _overlay(model, {"x": x})
    rd = RegionDecomposition(arr, ["x"])
    t1 = None
    for region in rd.regions:
        if rd.region_stats(region)["genus"] == 1:
            t1 = region
            break
    if t1 is None:
        raise MlabError("no genus-1 region found")
    raw_cycles = rd.region_cycles(t1)
    homs = [cycles.homology_of_cycle(model, cyc) for cyc in raw_cycles]
    # pick a basis pair with unimodular pairing
    basis = None
    for i in range(len(raw_cycles)):
        for j in range(i + 1, len(raw_cycles)):
            if abs(_symplectic(homs[i], homs[j])) == 1:
                basis = (i, j)
                break
        if basis:
            break
    if basis is None:
        raise MlabError("no unimodular basis in genus-1 piece")
    iu, iw = basis
    u = CurveClass.from_cycle(model, raw_cycles[iu])
    w = CurveClass.from_cycle(model, raw_cycles[iw])
    hu, hw = homs[iu], homs[iw]
    eps = _symplectic(hu, hw)
    au, aw = _a_part(hu), _a_part(hw)
    # meridian slope: p*au + q*aw = 0, (p, q) primitive
    jx = next(
        (k for k in range(len(au)) if au[k] != 0 or aw[k] != 0), None
    )
    if jx is None:
        raise MlabError("genus-1 piece has trivial handlebody image")
    import math

    p, q = aw[jx], -au[jx]
    d = math.gcd(abs(p), abs(q))
    if d:
        p, q = p // d, q // d
    if any(p * au[k] + q * aw[k] != 0 for k in range(len(au))):
        raise MlabError("piece homology is not rank one over the kernel")
    cur = _realize_slope(u, w, hu, hw, eps, p, q)
    _verify_delta(x, cur)
    return cur


def _coords_in_basis(c, hu, hw, eps):
    """Coordinates of the curve's class in the (hu, hw) basis.

    The curve is unoriented, so the result is defined up to global sign.
    """
    h = words.abelianize(
        cycles.surface_word(c.model, c.cycle), c.model.g
    )
    alpha = _symplectic(h, hw) // eps
    beta = _symplectic(hu, h) // eps
    check = tuple(alpha * a + beta * b for a, b in zip(hu, hw))
    if check != h and check != tuple(-v for v in h):
        raise MlabError("curve class left the piece lattice")
    return alpha, beta


def _realize_slope(u, w, hu, hw, eps, p, q):
    """Curve in the span of u, w whose class is +-(p*hu + q*hw).

    Geometric shear signs of the two twists are measured once, then an
    integer Euclidean sequence is applied.
    """
    if q == 0:
        return u
    if p == 0:
        return w
    su = _coords_in_basis(construct.twist(u, w, 1), hu, hw, eps)
    sw = _coords_in_basis(construct.twist(w, u, 1), hu, hw, eps)
    # T_u fixes u and sends w to w + s_u * u; allow a global sign flip
    if abs(su[1]) != 1 or abs(sw[0]) != 1:
        raise MlabError("twist shears are not unimodular")
    s_u = su[0] * su[1]
    s_w = sw[1] * sw[0]
    ops = []
    a, b = p, q
    guard = 0
    while a != 0 and b != 0:
        guard += 1
        if guard > 128:
            raise MlabError("euclidean reduction stalled")
        if abs(a) >= abs(b):
            # final move would be T_u^k applied to something with coords
            # (a - k*s_u*b, b); choose k shrinking a
            k = round(a / (s_u * b))
            if k == 0:
                k = 1 if a * s_u * b > 0 else -1
            a -= k * s_u * b
            ops.append(("u", k))
        else:
            k = round(b / (s_w * a))
            if k == 0:
                k = 1 if b * s_w * a > 0 else -1
            b -= k * s_w * a
            ops.append(("w", k))
    cur = u if b == 0 else w
    for which, k in reversed(ops):
        t_curve = u if which == "u" else w
        cur = construct.twist(t_curve, cur, k)
    alpha, beta = _coords_in_basis(cur, hu, hw, eps)
    if (alpha, beta) not in ((p, q), (-p, -q)):
        raise MlabError(
            f"slope realization drifted: got {(alpha, beta)}, want {(p, q)}"
        )
    return cur


def _verify_delta(x, cand):
    model = x.model
    if len(cand.hb_word()) != 0:
        raise VerificationFailure("delta candidate is not a meridian")
    if cand.is_separating():
        raise VerificationFailure("delta candidate separates")
    if construct.intersection_number(cand, x) != 0:
        raise VerificationFailure("delta candidate meets the meridian")
    pieces = cut_along(model, {"x": x}, tracked={"d": cand})
    side = next(p for p in pieces if "d" in p.content)
    if side.genus != 1:
        raise VerificationFailure("delta candidate not in the genus-1 piece")


class CutSystem:
    def __init__(self, curves):
        self.curves = list(curves)

    def key(self):
        return tuple(sorted(c.weights for c in self.curves))

    def __eq__(self, other):
        return isinstance(other, CutSystem) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())


class SepCutSystem:
    def __init__(self, curves):
        self.curves = list(curves)


def validate_cut_system(curve_list):
    """Check the cut-system invariants and return the validated value."""
    g = curve_list[0].model.g if curve_list else 0
    if len(curve_list) != g:
        raise PreconditionError(f"cut system needs {g} curves")
    keys = {c.weights for c in curve_list}
    if len(keys) != len(curve_list):
        raise PreconditionError("cut system has duplicate classes")
    for c in curve_list:
        if c.is_separating():
            raise PreconditionError("cut system member separates")
        if not is_meridian(c):
            raise PreconditionError("cut system member is not a meridian")
    model = curve_list[0].model
    named = {f"c{i}": c for i, c in enumerate(curve_list)}
    pieces = cut_along(model, named)
    if len(pieces) != 1:
        raise PreconditionError("cut system complement is disconnected")
    if pieces[0].genus != 0 or pieces[0].boundary_count != 2 * g:
        raise PreconditionError(
            "cut system complement is not a sphere with 2g holes"
        )
    return CutSystem(curve_list)


def validate_sep_cut_system(curve_list):
    g = curve_list[0].model.g if curve_list else 0
    if len(curve_list) != g:
        raise PreconditionError(f"separating cut system needs {g} curves")
    model = curve_list[0].model
    for c in curve_list:
        info = classify(c)
        if not (info.is_meridian and info.separating):
            raise PreconditionError("member is not a separating meridian")
        if info.genus_type != (1, g - 1):
            raise PreconditionError(
                f"member has type {info.genus_type}, needs (1, g-1)"
            )
    named = {f"z{i}": c for i, c in enumerate(curve_list)}
    pieces = cut_along(model, named)
    central = [
        p
        for p in pieces
        if p.genus == 0 and p.boundary_count == g
    ]
    if len(central) != 1:
        raise PreconditionError(
            "no distinguished genus-0 piece with one boundary per member"
        )
    owners = set()
    for circle in central[0].boundary_owners:
        owners.update(circle)
    if owners != set(named):
        raise PreconditionError("central piece does not meet every member")
    return SepCutSystem(curve_list)


def dual_curve(c, avoid_curves=(), variant=0):
    """A simple closed curve crossing c exactly once, avoiding the given
    disjoint curves; deterministic, with `variant` selecting alternates."""
    model = c.model
    named = {"c": c}
    avoid_names = []
    for i, a in enumerate(avoid_curves):
        nm = f"av{i}"
        named[nm] = a
        avoid_names.append(nm)
    arr = _overlay(model, named)
    rd = RegionDecomposition(arr, sorted(arr.owners))
    o = arr.owners["c"]
    host = o.points[0]
    from .arcs import _anchor_sites, _bfs_arc

    sites = _anchor_sites(arr, rd, "c")
    starts = [s for s in sites if s[1] is host and not s[2][0]]
    goals = [s for s in sites if s[1] is host and s[2][0]]
    blocked = set(avoid_names) | {"c"}
    for t_side in (0, 1):
        t0 = model.edge_tris[host.edge][t_side][0]
        st = [s for s in starts if s[2][1] == t0]
        gl = [s for s in goals if s[2][1] == t0]
        arc = _bfs_arc(
            arr, rd, st, gl, blocked, (), 64, name="sigma", skip=variant
        )
        if arc is None:
            continue
        tau = arc.owner
        bounce_tri = model.other_side(host.edge, t0)[0]
        slot = next(
            s for s in range(3) if model.tri_edge(bounce_tri, s) == host.edge
        )
        cyc = list(tau.chords) + [(bounce_tri, slot, slot)]
        sigma = CurveClass.from_cycle(model, cyc)
        if construct.intersection_number(sigma, c) != 1:
            raise VerificationFailure("dual curve does not cross once")
        ok = all(
            construct.intersection_number(sigma, a) == 0 for a in avoid_curves
        )
        if not ok:
            raise VerificationFailure("dual curve meets an avoided curve")
        return sigma
    raise PreconditionError("no dual curve found")


def induced_sep_cut_system(cut_system):
    """Separating cut system with delta(Z_i) equal to the i-th member."""
    curve_list = cut_system.curves
    model = curve_list[0].model
    zs = []
    for i, ci in enumerate(curve_list):
        avoid = [c for j, c in enumerate(curve_list) if j != i] + zs
        sigma = dual_curve(ci, avoid)
        z = construct.band_double(ci, sigma)
        zs.append(z)
    sep = validate_sep_cut_system(zs)
    for ci, zi in zip(curve_list, zs):
        if delta(zi) != ci:
            raise VerificationFailure("induced system delta mismatch")
    return sep
