"""Explicit overlays: several curves/arcs embedded in the triangulation.

An Arrangement keeps, per edge, the ordered crossing points of all owners,
and per owner its chord cycle (or chord path for arcs).  Chords are drawn
as straight segments in a rational model triangle, which makes crossing
detection, crossing order along a strand, and crossing signs exact.

Curve-curve minimal position is reached by innermost-bigon elimination: a
bigon is a pair of crossings adjacent along both owners (so the disk is
empty) whose boundary loop is nullhomotopic, decided by Dehn's algorithm.
Disks containing the vertex are removed like any others, which is what
closed-surface intersection numbers require.
"""

from fractions import Fraction

from . import words
from .curves import trace
from .errors import MlabError, ResourceCapExceeded


class Point:
    """A crossing point of one owner strand on one edge."""

    __slots__ = ("edge", "owner")

    def __init__(self, edge, owner):
        self.edge = edge
        self.owner = owner

    def __repr__(self):
        return f"Pt(e{self.edge},{self.owner})"


class Owner:
    """One curve (closed) or arc (open) in an arrangement.

    points[k] is the crossing point after chord k.  For arcs the final
    entry of points is the free end, and `start` is the free start, so
    len(points) == len(chords) - 1 plus the two ends held separately.
    """

    def __init__(self, name, kind, chords, points, start=None, end=None):
        self.name = name
        self.kind = kind
        self.chords = chords
        self.points = points
        self.start = start
        self.end = end
        self.anchor_start = None
        self.anchor_end = None

    @property
    def closed(self):
        return self.kind == "curve"

    def chord_endpoints(self, k):
        n = len(self.chords)
        if self.closed:
            return self.points[(k - 1) % n], self.points[k]
        entry = self.start if k == 0 else self.points[k - 1]
        exit_ = self.end if k == n - 1 else self.points[k]
        return entry, exit_

    def all_points(self):
        pts = list(self.points)
        if not self.closed:
            pts = [self.start] + pts + [self.end]
        return pts


def _tri_coords(slot, t, scale=1):
    """Point at boundary parameter t on a model-triangle side; with an
    integer `scale` the triangle is (0,0), (scale,0), (0,scale) and t is
    given in the same scale, keeping the arithmetic integral."""
    if slot == 0:
        return (t, 0 * t)
    if slot == 1:
        return (scale - t, t)
    return (0 * t, scale - t)


def _orient(a, b, c):
    return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])


def _seg_cross(p1, p2, q1, q2):
    """(param along p, param along q, sign) for a proper crossing, else None."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if d1 == d2 or d3 == d4:
        return None
    if (d1 > 0) == (d2 > 0) or (d3 > 0) == (d4 > 0):
        return None
    tp = Fraction(d1, d1 - d2)
    tq = Fraction(d3, d3 - d4)
    sign = 1 if d4 > d3 else -1
    return tp, tq, sign


class Crossing:
    __slots__ = ("tri", "a", "ka", "b", "kb", "ta", "tb", "sign")

    def __init__(self, tri, a, ka, b, kb, ta, tb, sign):
        self.tri = tri
        self.a, self.ka, self.b, self.kb = a, ka, b, kb
        self.ta, self.tb = ta, tb
        self.sign = sign

    def involves(self, name):
        return self.a == name or self.b == name

    def other(self, name):
        return self.b if self.a == name else self.a

    def chord_of(self, name):
        return self.ka if self.a == name else self.kb

    def param_of(self, name):
        return self.ta if self.a == name else self.tb

    def __repr__(self):
        return f"X({self.a}#{self.ka},{self.b}#{self.kb}@t{self.tri})"


class Arrangement:
    def __init__(self, model):
        self.model = model
        self.owners = {}
        self.edge_points = {e: [] for e in range(model.n_edges)}
        self._crossings = None
        self.minimal = False

    # -- basic queries ------------------------------------------------------

    def pos(self, point):
        return self.edge_points[point.edge].index(point)

    def point_ccw(self, point, tri, slot):
        e, sign = self.model.tris[tri][slot]
        if e != point.edge:
            raise MlabError("point not on this side")
        w = len(self.edge_points[e])
        p = self.pos(point)
        return p if sign > 0 else w - 1 - p

    def tri_scale(self, t):
        """Common integer denominator for exact coordinates in triangle t."""
        d = 1
        for s in range(3):
            e = self.model.tri_edge(t, s)
            d *= len(self.edge_points[e]) + 1
        return d

    def chord_geometry(self, name, k, scale=None):
        o = self.owners[name]
        t, x, y = o.chords[k]
        if scale is None:
            scale = self.tri_scale(t)
        entry, exit_ = o.chord_endpoints(k)
        out = []
        for slot, pt in ((x, entry), (y, exit_)):
            e = self.model.tri_edge(t, slot)
            w = len(self.edge_points[e])
            ccw = self.point_ccw(pt, t, slot)
            out.append(_tri_coords(slot, (ccw + 1) * (scale // (w + 1)), scale))
        return out[0], out[1]

    def invalidate(self):
        self._crossings = None
        self.minimal = False

    def crossings(self):
        if self._crossings is not None:
            return self._crossings
        by_tri = {}
        for name, o in self.owners.items():
            for k, (t, _x, _y) in enumerate(o.chords):
                by_tri.setdefault(t, []).append((name, k))
        out = []
        for t in sorted(by_tri):
            chs = by_tri[t]
            scale = self.tri_scale(t)
            geom = {c: self.chord_geometry(*c, scale=scale) for c in chs}
            for i in range(len(chs)):
                for j in range(i + 1, len(chs)):
                    a, ka = chs[i]
                    b, kb = chs[j]
                    if a == b:
                        continue
                    hit = _seg_cross(*geom[(a, ka)], *geom[(b, kb)])
                    if hit is None:
                        continue
                    ta, tb, sign = hit
                    out.append(Crossing(t, a, ka, b, kb, ta, tb, sign))
        self._crossings = out
        return out

    def crossing_count(self, a, b):
        return sum(1 for c in self.crossings() if {c.a, c.b} == {a, b})

    def crossing_seq(self, name, with_owner=None):
        """Crossings involving `name` in traversal order."""
        per_chord = {}
        for c in self.crossings():
            if not c.involves(name):
                continue
            if with_owner is not None and c.other(name) != with_owner:
                continue
            per_chord.setdefault(c.chord_of(name), []).append(
                (c.param_of(name), c)
            )
        seq = []
        for k in range(len(self.owners[name].chords)):
            for _t, c in sorted(per_chord.get(k, []), key=lambda x: x[0]):
                seq.append(c)
        return seq

    def weights_of(self, name):
        w = [0] * self.model.n_edges
        for p in self.owners[name].all_points():
            w[p.edge] += 1
        return tuple(w)

    # -- placement ------------------------------------------------------------

    def add_curve(self, name, curve_class):
        if name in self.owners:
            raise MlabError(f"duplicate owner {name}")
        traced = trace(self.model, curve_class.weights)
        cyc = traced.components[0]
        pts = [None] * len(cyc)
        own_order = {}
        for e in range(self.model.n_edges):
            lst = []
            for idx in range(curve_class.weights[e]):
                step = traced.point_step[e][idx]
                p = Point(e, name)
                pts[step] = p
                lst.append(p)
            own_order[e] = lst
        o = Owner(name, "curve", list(cyc), pts)
        self.owners[name] = o
        for e in range(self.model.n_edges):
            lst = self.edge_points[e]
            for p in own_order[e]:
                idx = len(lst)
                for i, q in enumerate(lst):
                    if q.owner == name:
                        continue
                    if self._compare_points(p, q) < 0:
                        idx = i
                        break
                lst.insert(idx, p)
        self.invalidate()
        return o

    # -- ray comparator ---------------------------------------------------------

    def _ray_chords(self, point, into_tri, cap):
        """Chords of the strand through `point` walking into `into_tri`."""
        o = self.owners[point.owner]
        try:
            k = o.points.index(point)
        except ValueError:
            return []
        n = len(o.chords)
        out = []
        if o.closed or k + 1 < n:
            nxt = o.chords[(k + 1) % n]
        else:
            nxt = None
        if nxt is not None and nxt[0] == into_tri:
            i = (k + 1) % n
            while len(out) < cap:
                out.append(o.chords[i])
                if not o.closed and i == n - 1:
                    break
                i = (i + 1) % n
        else:
            i = k
            while len(out) < cap:
                t, x, y = o.chords[i]
                out.append((t, y, x))
                if not o.closed and i == 0:
                    break
                i = (i - 1) % n
        return out

    def _compare_points(self, p, q):
        """-1 if p sits before q along the edge's orientation."""
        cap = 4 * max(len(o.chords) for o in self.owners.values()) + 16
        e = p.edge
        for side in (0, 1):
            t0, s0, _sign = self.model.edge_tris[e][side]
            r1 = self._ray_chords(p, t0, cap)
            r2 = self._ray_chords(q, t0, cap)
            res = self._ray_compare(r1, r2, s0)
            if res != 0:
                return res if side == 0 else -res
        return -1 if p.owner <= q.owner else 1

    def _ray_compare(self, r1, r2, entry_slot):
        x = entry_slot
        for c1, c2 in zip(r1, r2):
            t1, x1, y1 = c1
            t2, x2, y2 = c2
            if t1 != t2 or x1 != x or x2 != x:
                raise MlabError("ray desynchronized")
            if y1 != y2:
                return 1 if y1 == (x + 1) % 3 else -1
            e = self.model.tri_edge(t1, y1)
            _t_next, s_next = self.model.other_side(e, t1)
            x = s_next
        return 0

    # -- bigon elimination --------------------------------------------------------

    def _subarc_word(self, name, c1, c2):
        """Scheme word of the forward subarc of `name` from crossing c1 to
        crossing c2.

        When both crossings sit on the same chord the subarc is either the
        crossing-free piece inside the chord (empty word) or the full loop
        around the cycle, decided by the parameter order.
        """
        o = self.owners[name]
        n = len(o.chords)
        k1, k2 = c1.chord_of(name), c2.chord_of(name)
        if k1 == k2:
            if c1.param_of(name) < c2.param_of(name):
                return ()
            steps = n
        else:
            steps = (k2 - k1) % n
        out = []
        k = k1
        for _ in range(steps):
            t, x, y = o.chords[k]
            k_next = (k + 1) % n
            t2, x2, y2 = o.chords[k_next]
            e = self.model.tri_edge(t, y)
            _, end_out = self.model.chord_end(t, x, y, y)
            _, end_in = self.model.chord_end(t2, x2, y2, x2)
            if end_out != end_in:
                out.append((e + 1) if (end_out, end_in) == (0, 1) else -(e + 1))
            k = k_next
        word = []
        for v in out:
            e = abs(v) - 1
            if e < self.model.n_scheme:
                word.append(v)
            else:
                w = self.model.diag_words[e]
                word.extend(w if v > 0 else words.inverse(w))
        return tuple(word)

    def _adjacent_pairs(self, name):
        seq = self.crossing_seq(name)
        n = len(seq)
        if n < 2:
            return []
        o = self.owners[name]
        rng = range(n) if o.closed else range(n - 1)
        return [(seq[i], seq[(i + 1) % n]) for i in rng]

    def smoothing_cycle(self, name_x, name_d, q1, q2, fwd_x, fwd_d):
        """Closed chord cycle: x-arc q1->q2 (direction fwd_x) followed by
        d-arc q2->q1 (direction fwd_d), junction-merged at both crossings."""
        return _smoothing_cycle(self, name_x, name_d, q1, q2, fwd_x, fwd_d)

    def _find_bigon(self):
        names = sorted(n for n, o in self.owners.items() if o.closed)
        adj = {name: self._adjacent_pairs(name) for name in names}
        for name in names:
            for c1, c2 in adj[name]:
                other = c1.other(name)
                if other == name or not c2.involves(other):
                    continue
                if c2.other(name) != other or other not in adj:
                    continue
                for d1, d2 in adj[other]:
                    if d1 is c1 and d2 is c2:
                        fwd = True
                    elif d1 is c2 and d2 is c1:
                        fwd = False
                    else:
                        continue
                    # the candidate bigon boundary as a junction-merged
                    # cycle: along `name` from c1 to c2, back along the
                    # short side of `other`
                    from . import cycles as _cycles

                    loop_cycle = _smoothing_cycle(
                        self, name, other, c1, c2, True, not fwd
                    )
                    loop = _cycles.surface_word(self.model, loop_cycle)
                    if len(loop) == 0:
                        return name, other, c1, c2, fwd
        return None

    def _slot_in_tri(self, tri, edge):
        for s in range(3):
            if self.model.tri_edge(tri, s) == edge:
                return s
        raise MlabError("edge not on triangle")

    def _point_coords(self, tri, slot, point, scale=None):
        if scale is None:
            scale = self.tri_scale(tri)
        e = self.model.tri_edge(tri, slot)
        w = len(self.edge_points[e])
        ccw = self.point_ccw(point, tri, slot)
        return _tri_coords(slot, (ccw + 1) * (scale // (w + 1)), scale)

    def _segments_cross(self, tri, s1, p1, s2, p2, s3, p3, s4, p4):
        scale = self.tri_scale(tri)
        a = self._point_coords(tri, s1, p1, scale)
        b = self._point_coords(tri, s2, p2, scale)
        c = self._point_coords(tri, s3, p3, scale)
        d = self._point_coords(tri, s4, p4, scale)
        return _seg_cross(a, b, c, d) is not None

    def _splice(self, name, other, c1, c2, fwd):
        """Isotope `name` across the empty bigon with corners c1, c2."""
        o = self.owners[name]
        b = self.owners[other]
        nA, nB = len(o.chords), len(b.chords)
        ka1, ka2 = c1.chord_of(name), c2.chord_of(name)
        kb1, kb2 = c1.chord_of(other), c2.chord_of(other)
        # shadow data: B's points passed from c1 to c2 on the clean side,
        # the B chord indices between them, and reversal flag
        shadow_pts = []
        shadow_idx = []
        if fwd:
            k = kb1
            while k != kb2:
                shadow_pts.append(b.points[k])
                k = (k + 1) % nB
                if k != kb2:
                    shadow_idx.append(k)
        else:
            k = kb1
            while k != kb2:
                entry, _ = b.chord_endpoints(k)
                shadow_pts.append(entry)
                k = (k - 1) % nB
                if k != kb2:
                    shadow_idx.append(k)
        shadow_chords = []
        for k in shadow_idx:
            t, x, y = b.chords[k]
            shadow_chords.append((t, x, y) if fwd else (t, y, x))
        wrap = ka1 == ka2 and not (
            c1.param_of(name) < c2.param_of(name)
        )
        # remove A's crossing points strictly between c1 and c2
        if wrap:
            removed = list(o.points)
        else:
            removed = []
            k = ka1
            while k != ka2:
                removed.append(o.points[k])
                k = (k + 1) % nA
        for p in removed:
            self.edge_points[p.edge].remove(p)
        # place new points next to the shadowed B points, consistently on
        # the side where the rerouted strand does not cross B
        new_pts = []
        prev = None
        t_first = o.chords[ka1][0]
        entry_pt = None if wrap else o.chord_endpoints(ka1)[0]
        for i, bp in enumerate(shadow_pts):
            np = Point(bp.edge, name)
            lst = self.edge_points[bp.edge]
            j = lst.index(bp)
            lst.insert(j + 1, np)
            if i == 0:
                if entry_pt is not None:
                    s_in = o.chords[ka1][1]
                    s_np = self._slot_in_tri(t_first, np.edge)
                    tb, xb, yb = b.chords[kb1]
                    ep1, ep2 = b.chord_endpoints(kb1)
                    if self._segments_cross(
                        t_first, s_in, entry_pt, s_np, np, xb, ep1, yb, ep2
                    ):
                        lst.remove(np)
                        lst.insert(j, np)
            else:
                t, x, y = shadow_chords[i - 1]
                kb = shadow_idx[i - 1]
                ep1, ep2 = b.chord_endpoints(kb)
                xb, yb = b.chords[kb][1], b.chords[kb][2]
                if self._segments_cross(
                    t, x, prev, y, np, xb, ep1, yb, ep2
                ):
                    lst.remove(np)
                    lst.insert(j, np)
            new_pts.append(np)
            prev = np
        # rebuild A's chords and points
        if wrap:
            if not shadow_pts:
                raise MlabError("wrapped bigon with empty shadow")
            first_slot = self._slot_in_tri(t_first, shadow_pts[0].edge)
            last_slot = self._slot_in_tri(t_first, shadow_pts[-1].edge)
            chords = [(t_first, last_slot, first_slot)] + shadow_chords
            pts = list(new_pts)
            # points: exit of the junction chord is new_pts[0], of shadow
            # chord i is new_pts[i+1]; the last shadow chord's exit closes
            # into the junction chord's entry new_pts[-1]
            pts = [new_pts[0]] + new_pts[1:]
        else:
            t_last = o.chords[ka2][0]
            if shadow_pts:
                first_slot = self._slot_in_tri(t_first, shadow_pts[0].edge)
                last_slot = self._slot_in_tri(t_last, shadow_pts[-1].edge)
                new_chords = (
                    [(t_first, o.chords[ka1][1], first_slot)]
                    + shadow_chords
                    + [(t_last, last_slot, o.chords[ka2][2])]
                )
            else:
                if t_first != t_last:
                    raise MlabError("empty bigon shadow across triangles")
                new_chords = [(t_first, o.chords[ka1][1], o.chords[ka2][2])]
            chords = list(new_chords)
            pts = list(new_pts) + [o.points[ka2]]
            k = (ka2 + 1) % nA
            while k != ka1:
                chords.append(o.chords[k])
                pts.append(o.points[k])
                k = (k + 1) % nA
        if len(chords) != len(pts):
            raise MlabError("splice bookkeeping error")
        o.chords = chords
        o.points = pts
        self.invalidate()

    def minimize(self, max_rounds=200000):
        """Remove curve-curve bigons until every pair is minimal."""
        if any(not o.closed for o in self.owners.values()):
            raise MlabError("minimize with open arcs present is unsupported")
        rounds = 0
        while True:
            rounds += 1
            if rounds > max_rounds:
                raise ResourceCapExceeded("bigon elimination did not terminate")
            hit = self._find_bigon()
            if hit is None:
                break
            self._splice(*hit)
        self.minimal = True
        return self

    def has_bigon(self):
        return self._find_bigon() is not None


def overlay(model, named_curves):
    """Arrangement of the given {name: CurveClass} in minimal position."""
    arr = Arrangement(model)
    for name in sorted(named_curves):
        arr.add_curve(name, named_curves[name])
    arr.minimize()
    return arr


# -- junction-merged subarc cycles ----------------------------------------------


def _partial_path(owner, k_from, k_to, forward):
    """Full chords strictly between two crossings along an owner."""
    n = len(owner.chords)
    out = []
    if forward:
        k = (k_from + 1) % n
        while k != k_to:
            out.append(owner.chords[k])
            k = (k + 1) % n
    else:
        k = (k_from - 1) % n
        while k != k_to:
            t, x, y = owner.chords[k]
            out.append((t, y, x))
            k = (k - 1) % n
    return out


def _arrive_slot(owner, k, forward):
    _t, x, y = owner.chords[k]
    return x if forward else y


def _depart_slot(owner, k, forward):
    _t, x, y = owner.chords[k]
    return y if forward else x


def _within_chord(cr_from, cr_to, name, forward):
    k1 = cr_from.chord_of(name)
    k2 = cr_to.chord_of(name)
    if k1 != k2:
        return False
    t1 = cr_from.param_of(name)
    t2 = cr_to.param_of(name)
    return t1 < t2 if forward else t2 < t1


def _smoothing_cycle(arr, name_x, name_d, q1, q2, fwd_x, fwd_d):
    ox, od = arr.owners[name_x], arr.owners[name_d]
    kx1, kx2 = q1.chord_of(name_x), q2.chord_of(name_x)
    kd1, kd2 = q1.chord_of(name_d), q2.chord_of(name_d)
    x_inside = _within_chord(q1, q2, name_x, fwd_x)
    d_inside = _within_chord(q2, q1, name_d, fwd_d)
    if x_inside and d_inside:
        raise MlabError("degenerate smoothing: both arcs inside one chord")
    if x_inside:
        merged = (
            q1.tri,
            _arrive_slot(od, kd1, fwd_d),
            _depart_slot(od, kd2, fwd_d),
        )
        return [merged] + _partial_path(od, kd2, kd1, fwd_d)
    if d_inside:
        merged = (
            q2.tri,
            _arrive_slot(ox, kx2, fwd_x),
            _depart_slot(ox, kx1, fwd_x),
        )
        return [merged] + _partial_path(ox, kx1, kx2, fwd_x)
    cyc = [(q2.tri, _arrive_slot(ox, kx2, fwd_x), _depart_slot(od, kd2, fwd_d))]
    cyc.extend(_partial_path(od, kd2, kd1, fwd_d))
    cyc.append((q1.tri, _arrive_slot(od, kd1, fwd_d), _depart_slot(ox, kx1, fwd_x)))
    cyc.extend(_partial_path(ox, kx1, kx2, fwd_x))
    return cyc
