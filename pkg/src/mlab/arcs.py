"""Embedded arcs between curves, and band sums along them.

Arcs are concrete embeddings found by breadth-first search over the faces
of the arrangement cut along all owners: moves pass through edge segments
freely and may cross chords of owners that are not protected.  Only
disjointness and crossing counts are contractual for arcs; they are never
canonicalized.
"""

from .arrange import Arrangement, Point, Owner, overlay
from .curves import CurveClass
from .errors import MlabError, PreconditionError
from .regions import RegionDecomposition

DEFAULT_ARC_DEPTH = 32


class ArcEmbedding:
    """An embedded arc in an arrangement, anchored next to two host points."""

    def __init__(self, arr, name, host_from, host_to):
        self.arr = arr
        self.name = name
        self.host_from = host_from
        self.host_to = host_to

    @property
    def owner(self):
        return self.arr.owners[self.name]

    def crossings_with(self, other_name):
        return self.arr.crossing_count(self.name, other_name)


def connect_arc(
    arr,
    frm,
    to,
    avoid=(),
    must_hit=(),
    depth=DEFAULT_ARC_DEPTH,
    name="arc",
    skip=0,
):
    """Embedded arc from owner `frm` to owner `to` in the arrangement.

    The interior avoids `frm`, `to` and every owner in `avoid`, and crosses
    each owner in `must_hit` at least once.  Returns None if no arc exists
    within `depth` region transitions.  `skip` discards that many found
    paths first, which yields deterministic alternative arcs.
    """
    blocked = set(avoid) | {frm, to}
    musts = tuple(sorted(set(must_hit)))
    rd = RegionDecomposition(arr, sorted(arr.owners))
    starts = _anchor_sites(arr, rd, frm)
    goals = _anchor_sites(arr, rd, to)
    return _bfs_arc(arr, rd, starts, goals, blocked, musts, depth, name, skip)


def _bfs_arc(arr, rd, starts, goals, blocked, musts, depth, name="arc", skip=0):
    goal_by_face = {}
    for face, p, side in goals:
        goal_by_face.setdefault(face, []).append((p, side))
    frontier = []
    seen = set()
    for face, p, side in starts:
        state = (face, frozenset())
        frontier.append((state, [("start", p, side, face)]))
    results_skipped = 0
    while frontier:
        next_frontier = []
        for state, path in frontier:
            face, hits = state
            if len(path) > depth:
                continue
            if set(musts) <= hits and face in goal_by_face:
                p, side = goal_by_face[face][0]
                if results_skipped < skip:
                    results_skipped += 1
                else:
                    return _realize_arc(arr, rd, name, path, p, side, face)
            if state in seen:
                continue
            seen.add(state)
            for move in _moves(arr, rd, face, blocked, musts):
                kind, data, nface, hit = move
                nh = hits | {hit} if hit else hits
                nstate = (nface, nh)
                if nstate in seen:
                    continue
                next_frontier.append(
                    (nstate, path + [(kind, data, None, nface)])
                )
        frontier = sorted(next_frontier, key=lambda sp: str(sp[0]))
    return None


def _anchor_sites(arr, rd, owner_name):
    """(face, host point, insert-after flag) sites along an owner."""
    sites = []
    o = arr.owners[owner_name]
    for p in o.all_points():
        e = p.edge
        lst = arr.edge_points[e]
        idx = lst.index(p)
        before = sum(1 for q in lst[:idx] if q.owner in rd.cutting)
        for seg, after in ((before, False), (before + 1, True)):
            for t_side in (0, 1):
                t, s, _sg = arr.model.edge_tris[e][t_side]
                fid = rd._side_face_of(t, s, e, seg)
                sites.append((fid, p, (after, t)))
    # deterministic order
    sites.sort(key=lambda z: (str(z[0]), str(z[2])))
    return sites


def _moves(arr, rd, face, blocked, musts):
    """Available transitions out of a face."""
    out = []
    t, _i = face
    g = rd.graphs[t]
    for (a, b) in rd.face_lookup[face]:
        info = g.edge_info[(a, b)]
        if info[0] == "side":
            _tag, s, j = info
            e = arr.model.tri_edge(t, s)
            w = len(rd._cut_points(e))
            sign = arr.model.tri_sign(t, s)
            seg = j if sign > 0 else w - j
            ot, os = arr.model.other_side(e, t)
            nface = rd._side_face_of(ot, os, e, seg)
            out.append(("edge", (e, seg), nface, None))
        else:
            _tag, owner, k = info
            if owner in blocked:
                continue
            nface = rd.chordseg_face.get((t, b, a))
            if nface is None or nface == face:
                continue
            hit = owner if owner in musts else None
            out.append(("chord", (owner, k), nface, hit))
    out.sort(key=lambda m: (m[0], str(m[1]), str(m[2])))
    return out


def _realize_arc(arr, rd, name, path, end_host, end_side, end_face):
    """Insert the found face path as an embedded arc owner."""
    model = arr.model
    _tag, start_host, (start_after, start_tri), start_face = path[0]
    # crossing points: one per edge move; chords grouped by triangle runs
    pts = []
    moves = path[1:]
    # start point next to the host
    sp = Point(start_host.edge, name)
    _insert_next_to(arr, sp, start_host, start_after)
    # walk: current triangle of travel
    cur_tri = start_tri
    entry_pt = sp
    chords = []
    inner_pts = []
    for kind, data, _x, nface in moves:
        if kind == "chord":
            if nface[0] != cur_tri:
                raise MlabError("chord move changed triangle")
            continue
        e, seg = data
        p = Point(e, name)
        _insert_in_segment(arr, rd, p, e, seg)
        s_in = _slot_of(model, cur_tri, entry_pt.edge)
        s_out = _slot_of(model, cur_tri, e)
        chords.append((cur_tri, s_in, s_out))
        inner_pts.append(p)
        cur_tri = nface[0]
        entry_pt = p
    ep = Point(end_host.edge, name)
    end_after, _end_tri = end_side
    _insert_next_to(arr, ep, end_host, end_after)
    s_in = _slot_of(model, cur_tri, entry_pt.edge)
    s_out = _slot_of(model, cur_tri, ep.edge)
    chords.append((cur_tri, s_in, s_out))
    o = Owner(name, "arc", chords, inner_pts, start=sp, end=ep)
    o.anchor_start = (start_host, start_after, start_tri)
    o.anchor_end = (end_host, end_after, cur_tri)
    arr.owners[name] = o
    arr.invalidate()
    _check_arc_embedded(arr, name)
    return ArcEmbedding(arr, name, start_host, end_host)


def _slot_of(model, tri, edge):
    for s in range(3):
        if model.tri_edge(tri, s) == edge:
            return s
    raise MlabError("edge not on triangle")


def _insert_next_to(arr, new_pt, host, after):
    lst = arr.edge_points[host.edge]
    i = lst.index(host)
    lst.insert(i + 1 if after else i, new_pt)


def _insert_in_segment(arr, rd, new_pt, e, seg):
    lst = arr.edge_points[e]
    count = 0
    pos = len(lst)
    for i, q in enumerate(lst):
        if q.owner in rd.cutting:
            count += 1
            if count > seg:
                pos = i
                break
    lst.insert(pos, new_pt)


def _check_arc_embedded(arr, name):
    from .arrange import _seg_cross

    o = arr.owners[name]
    by_tri = {}
    for k, (t, _x, _y) in enumerate(o.chords):
        by_tri.setdefault(t, []).append(k)
    for t, ks in by_tri.items():
        for i in range(len(ks)):
            for j in range(i + 1, len(ks)):
                g1 = arr.chord_geometry(name, ks[i])
                g2 = arr.chord_geometry(name, ks[j])
                if _seg_cross(*g1, *g2) is not None:
                    raise MlabError("realized arc is not embedded")


def join(d1, d2, arc):
    """Band sum of two disjoint curves along an embedded arc.

    The arc must have been built with connect_arc from d1 to d2 inside an
    arrangement containing them under the names given in `arc`.
    """
    arr = arc.arr
    model = arr.model
    tau = arc.owner
    name_from = arc.host_from.owner
    name_to = arc.host_to.owner
    o1, o2 = arr.owners[name_from], arr.owners[name_to]
    t_start = tau.chords[0][0]
    t_end = tau.chords[-1][0]
    cyc1 = _loop_with_entry_in(o1, arc.host_from, t_start)
    cyc2 = _loop_with_entry_in(o2, arc.host_to, t_end)
    # cyc = [X1 .. before E1] [M1] tau[1:] [X2 .. before E2] [M2] rev(tau)[1:]
    d1_loop, e1_chord = cyc1
    d2_loop, e2_chord = cyc2
    m1 = (t_start, e1_chord[1], tau.chords[0][2])
    m2 = (t_end, e2_chord[1], tau.chords[-1][1])
    rev_tau = [(t, y, x) for (t, x, y) in reversed(tau.chords)]
    cyc = (
        d1_loop
        + [m1]
        + tau.chords[1:]
        + d2_loop
        + [m2]
        + rev_tau[1:]
    )
    return CurveClass.from_cycle(model, cyc)


def band_sum(model, d1, d2, avoid=(), must_hit=(), depth=DEFAULT_ARC_DEPTH,
             max_variants=24, extra=None):
    """Join d1 and d2 along a deterministically chosen embedded arc.

    Tries successive connect_arc variants until the band sum template is
    embeddable (the template's traversal directions are forced by the
    arc's approach side, so roughly half the variants realize each of the
    two band sums; the first embeddable one is returned).
    Returns (curve, arc).
    """
    from .errors import NonSimpleCurveError

    named = {"d1": d1, "d2": d2}
    avoid_names = []
    for i, c in enumerate(avoid):
        nm = f"av{i}"
        named[nm] = c
        avoid_names.append(nm)
    must_names = []
    for i, c in enumerate(must_hit):
        nm = f"mh{i}"
        named[nm] = c
        must_names.append(nm)
    if extra:
        named.update(extra)
    arr = overlay(model, named)
    for variant in range(max_variants):
        arc = connect_arc(
            arr,
            "d1",
            "d2",
            avoid=avoid_names,
            must_hit=must_names,
            depth=depth,
            name="tau",
            skip=variant,
        )
        if arc is None:
            break
        try:
            out = join(d1, d2, arc)
        except NonSimpleCurveError:
            for p in arc.owner.all_points():
                arr.edge_points[p.edge].remove(p)
            del arr.owners["tau"]
            arr.invalidate()
            continue
        return out, arc
    raise PreconditionError("no embeddable band sum found")


def _loop_with_entry_in(owner, host_pt, tri):
    """Owner's chords from the exit chord at host_pt all the way round to
    (excluding) the entry chord, oriented so the entry chord lies in `tri`.

    Returns (loop chords, entry chord)."""
    n = len(owner.chords)
    k = owner.points.index(host_pt)
    # entry chord ends at host_pt: chord k; exit chord starts there: k+1
    entry = owner.chords[k]
    if entry[0] == tri:
        loop = [owner.chords[(k + 1 + i) % n] for i in range(n - 1)]
        return loop, entry
    # reverse traversal: entry chord becomes k+1 reversed
    ent = owner.chords[(k + 1) % n]
    if ent[0] != tri:
        raise MlabError("arc anchor triangle matches neither side")
    entry_rev = (ent[0], ent[2], ent[1])
    loop = []
    for i in range(n - 1):
        t, x, y = owner.chords[(k - i) % n]
        loop.append((t, y, x))
    return loop, entry_rev
