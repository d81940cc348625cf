"""Stripes and stripe elimination, intersection reduction, and re-exports
of the arc/band constructions.

A stripe of a separating meridian E relative to a (1,g-1)-meridian Z
(with E disjoint from delta(Z)) is a subarc of E inside the genus-1 piece
that, together with a subarc of Z, cuts off an annulus around one copy of
delta(Z); equivalently the subarc loop is freely homotopic to delta(Z).
Eliminating a stripe reroutes the subarc along a crossing-free subarc of
Z on the far side, dropping the intersection number by exactly two while
staying a meridian of the same type; the construction is a smoothing of
the two stripe crossings.
"""

from . import construct, words
from .arcs import ArcEmbedding, band_sum, connect_arc, join
from .arrange import overlay as _overlay
from .construct import _smoothing, _within_chord, band_double, surgery_along_arc
from .curves import CurveClass
from .errors import (
    MlabError,
    PreconditionError,
    VerificationFailure,
)
from .handlebody import classify, delta, is_meridian
from .regions import RegionDecomposition


class StripeArc:
    def __init__(self, q_start, q_end, boundary_parallel, clean_sides):
        self.q_start = q_start
        self.q_end = q_end
        self.boundary_parallel = boundary_parallel
        self.clean_sides = clean_sides  # subset of {True(fwd), False(bwd)}

    def __repr__(self):
        return (
            f"StripeArc(parallel={self.boundary_parallel}, "
            f"clean={sorted(self.clean_sides)})"
        )


class StripeReport:
    def __init__(self, arcs, all_stripes):
        self.arcs = arcs
        self.all_stripes = all_stripes

    def __repr__(self):
        return f"StripeReport({len(self.arcs)} arcs, all={self.all_stripes})"


def _subarc_word_param(arr, name, c1, c2):
    """Word of the forward subarc of `name` from c1 to c2, wrap-aware."""
    return arr._subarc_word(name, c1, c2)


def _replace_arcs(arr, xname, zname, crossings, replacements):
    """Chord cycle for X with some crossing-to-crossing subarcs replaced
    by subarcs of Z.

    `crossings` is the full X-Z crossing sequence along X; `replacements`
    maps subarc index i (running from crossings[i] to crossings[i+1]) to
    the direction along Z used for the rerouting.
    """
    from .construct import _arrive_slot, _depart_slot, _partial_path

    ox, oz = arr.owners[xname], arr.owners[zname]
    n = len(crossings)
    if len(replacements) >= n:
        raise MlabError("cannot replace every subarc")
    segs = []
    for i in range(n):
        c1, c2 = crossings[i], crossings[(i + 1) % n]
        if i in replacements:
            fwd = replacements[i]
            owner, name, direc = oz, zname, fwd
        else:
            owner, name, direc = ox, xname, True
        k1, k2 = c1.chord_of(name), c2.chord_of(name)
        inside = _within_chord(c1, c2, name, direc)
        interior = [] if inside else _partial_path(owner, k1, k2, direc)
        segs.append(
            {
                "c1": c1,
                "c2": c2,
                "name": name,
                "owner": owner,
                "fwd": direc,
                "inside": inside,
                "interior": interior,
            }
        )
    # emit junction + interior per segment, then collapse inside-chords
    items = []
    for i, seg in enumerate(segs):
        prev = segs[(i - 1) % n]
        c = seg["c1"]
        t = c.tri
        arrive = _arrive_slot(prev["owner"], c.chord_of(prev["name"]), prev["fwd"])
        depart = _depart_slot(seg["owner"], c.chord_of(seg["name"]), seg["fwd"])
        items.append(("junction", t, arrive, depart))
        for ch in seg["interior"]:
            items.append(("chord",) + ch)
        if seg["inside"]:
            items.append(("collapse",))
    # collapse: a junction followed (after zero chords) by `collapse` then the
    # next junction merges the two junctions into one chord
    out = []
    # rotate so items[0] is a junction not preceded by a pending collapse
    start = None
    for i, it in enumerate(items):
        if it[0] == "junction" and items[i - 1][0] != "collapse":
            start = i
            break
    if start is None:
        raise MlabError("all subarcs collapse")
    order = items[start:] + items[:start]
    i = 0
    while i < len(order):
        it = order[i]
        if it[0] == "chord":
            out.append(it[1:])
            i += 1
            continue
        if it[0] != "junction":
            raise MlabError("unexpected collapse placement")
        # gather chained junctions through collapses
        t, arrive, depart = it[1], it[2], it[3]
        j = i + 1
        while j < len(order) and order[j][0] == "collapse":
            nxt = order[(j + 1) % len(order)]
            if nxt[0] != "junction":
                raise MlabError("collapse not followed by junction")
            if nxt[1] != t:
                raise MlabError("collapse across distinct triangles")
            depart = nxt[3]
            j += 2
        out.append((t, arrive, depart))
        i = j
    return out


def _z_side_clean(z_seq, c_from, c_to, fwd):
    """No other crossing strictly between c_from and c_to along z."""
    n = len(z_seq)
    i = z_seq.index(c_from)
    j = z_seq.index(c_to)
    step = 1 if fwd else -1
    return (i + step) % n == j


def _arc_regions(arr, rd, e_name, z_name, crossings):
    """Region of each subarc of e between consecutive z-crossings."""
    if not crossings:
        return []
    # seed: locate the exit point of the chord carrying the first crossing
    regions = [None] * len(crossings)
    # toggle map: crossing -> its chord's two side regions
    def sides(c):
        kz = c.chord_of(z_name)
        o = arr.owners[z_name]
        t = o.chords[kz][0]
        entry, exit_ = o.chord_endpoints(kz)
        na = ("p", id(entry), z_name)
        nb = ("p", id(exit_), z_name)
        f1 = rd.chordseg_face.get((t, na, nb))
        f2 = rd.chordseg_face.get((t, nb, na))
        if f1 is None or f2 is None:
            raise MlabError("z chord faces not found")
        return rd.region_of[f1], rd.region_of[f2]

    # subarc i runs from crossings[i] to crossings[i+1]; locate one subarc
    # directly through an interior point, then propagate by toggling
    o = arr.owners[e_name]
    n = len(crossings)
    seed = None
    for i in range(n):
        c1, c2 = crossings[i], crossings[(i + 1) % n]
        k1, k2 = c1.chord_of(e_name), c2.chord_of(e_name)
        if k1 == k2 and c1.param_of(e_name) < c2.param_of(e_name):
            continue
        seed = (i, rd.locate_point(o.points[k1]))
        break
    if seed is None:
        raise MlabError("no locatable subarc")
    i0, reg = seed
    regions[i0] = reg
    for step in range(1, n):
        i = (i0 + step) % n
        prev = regions[(i - 1) % n]
        r1, r2 = sides(crossings[i])
        regions[i] = r2 if prev == r1 else (r1 if prev == r2 else prev)
    return regions


def find_stripes(e_curve, z_curve):
    """Classify the subarcs of E inside the genus-1 piece of Z."""
    model = e_curve.model
    info_z = classify(z_curve)
    if not (info_z.is_meridian and info_z.genus_type == (1, model.g - 1)):
        raise PreconditionError("find_stripes needs a (1,g-1)-meridian")
    info_e = classify(e_curve)
    if not (info_e.is_meridian and info_e.separating):
        raise PreconditionError("find_stripes needs a separating meridian")
    d = delta(z_curve)
    if construct.intersection_number(e_curve, d) != 0:
        raise PreconditionError("E must be disjoint from delta(Z)")
    arr = _overlay(model, {"z": z_curve, "e": e_curve, "d": d})
    rd = RegionDecomposition(arr, ["z"], tracked=["d"])
    t1 = rd.tracked_region["d"]
    if rd.region_stats(t1)["genus"] != 1:
        raise MlabError("delta is not in a genus-1 region")
    crossings = arr.crossing_seq("e", with_owner="z")
    if not crossings:
        return StripeReport([], True), arr
    regions = _arc_regions(arr, rd, "e", "z", crossings)
    z_seq = arr.crossing_seq("z", with_owner="e")
    d_word = d.word
    arcs = []
    n = len(crossings)
    for i in range(n):
        if regions[i] != t1:
            continue
        c1, c2 = crossings[i], crossings[(i + 1) % n]
        parallel = False
        cleans = set()
        for fwd in (True, False):
            from . import cycles as _cycles
            from .arrange import _smoothing_cycle

            loop_cycle = _smoothing_cycle(arr, "e", "z", c1, c2, True, fwd)
            loop = _cycles.surface_word(model, loop_cycle)
            if len(loop) == 0:
                raise MlabError("stripe subarc bounds a bigon: not minimal")
            if words.conjugate_words(loop, d_word, model.g) or words.conjugate_words(
                loop, words.inverse(d_word), model.g
            ):
                parallel = True
            if _z_side_clean(z_seq, c1, c2, fwd):
                cleans.add(fwd)
        arcs.append(StripeArc(c1, c2, parallel, cleans))
    return StripeReport(arcs, all(a.boundary_parallel for a in arcs)), arr


def _z_side_clean_except(z_seq, c_from, c_to, fwd, ignore):
    """No crossing outside `ignore` strictly between c_from and c_to."""
    n = len(z_seq)
    i = z_seq.index(c_from)
    j = z_seq.index(c_to)
    step = 1 if fwd else -1
    k = (i + step) % n
    while k != j:
        if z_seq[k] not in ignore:
            return False
        k = (k + step) % n
    return True


def _elimination_candidates(arr, xname, zname, arc_idx, crossings, z_seq):
    """Replacement dicts removing one arc or one arc pair, cleanly."""
    n = len(crossings)
    singles = []
    pairs = []
    for i in arc_idx:
        c1, c2 = crossings[i], crossings[(i + 1) % n]
        ignore = {c1, c2}
        for fwd in (True, False):
            if _z_side_clean_except(z_seq, c1, c2, fwd, ignore):
                singles.append({i: fwd})
    for ai in range(len(arc_idx)):
        for bi in range(ai + 1, len(arc_idx)):
            i, j = arc_idx[ai], arc_idx[bi]
            ci1, ci2 = crossings[i], crossings[(i + 1) % n]
            cj1, cj2 = crossings[j], crossings[(j + 1) % n]
            ignore = {ci1, ci2, cj1, cj2}
            fi_opts = [
                f
                for f in (True, False)
                if _z_side_clean_except(z_seq, ci1, ci2, f, ignore)
            ]
            fj_opts = [
                f
                for f in (True, False)
                if _z_side_clean_except(z_seq, cj1, cj2, f, ignore)
            ]
            for fi in fi_opts:
                for fj in fj_opts:
                    pairs.append({i: fi, j: fj})
    return singles + pairs


def eliminate_stripe(e_curve, z_curve):
    """Eliminate the outermost stripe of E relative to Z.

    Candidate reroutes replace one boundary arc or one arc pair of E by
    crossing-free subarcs of Z; the first candidate that is a meridian of
    the original type with smaller intersection number and unchanged delta
    (in the (1,g-1) case) is returned.  A full stripe of the paper is a
    band whose shadow is an arc pair, so the drop is 2 per removed arc.
    """
    report, arr = find_stripes(e_curve, z_curve)
    if not any(a.boundary_parallel for a in report.arcs):
        raise PreconditionError("no stripe present")
    crossings = arr.crossing_seq("e", with_owner="z")
    z_seq = arr.crossing_seq("z", with_owner="e")
    pos = {id(a.q_start): i for i, a in enumerate(report.arcs)}
    arc_idx = [
        i
        for i, a in enumerate(report.arcs)
        if a.boundary_parallel
    ]
    # indices of report arcs within the full crossing sequence
    idx_map = []
    for a in report.arcs:
        idx_map.append(crossings.index(a.q_start))
    stripe_positions = [idx_map[i] for i in arc_idx]
    before = construct.intersection_number(e_curve, z_curve)
    base_info = classify(e_curve)
    g = e_curve.model.g
    d_e = delta(e_curve) if base_info.genus_type == (1, g - 1) else None
    best = None
    for repl in _elimination_candidates(arr, "e", "z", stripe_positions, crossings, z_seq):
        try:
            cyc = _replace_arcs(arr, "e", "z", crossings, repl)
            out = CurveClass.from_cycle(e_curve.model, cyc)
            if out == e_curve:
                continue
            after = construct.intersection_number(out, z_curve)
            if after > before - 2 * len(repl):
                continue
            info_out = classify(out)
            if not info_out.is_meridian:
                continue
            if info_out.genus_type != base_info.genus_type:
                continue
            if d_e is not None and delta(out) != d_e:
                continue
        except (MlabError, PreconditionError, VerificationFailure):
            continue
        if after == before - 2 * len(repl):
            return out
        if best is None or after > construct.intersection_number(best, z_curve):
            best = out
    if best is not None:
        return best
    raise VerificationFailure("no stripe elimination candidate verified")


def reduce_intersection(x_curve, z_curve):
    """One step of far-side stripe reduction: i(X, Z) drops by two and
    delta(X) is preserved; X is returned unchanged when disjoint."""
    model = x_curve.model
    if construct.intersection_number(x_curve, z_curve) == 0:
        return x_curve
    for c, nm in ((x_curve, "X"), (z_curve, "Z")):
        info = classify(c)
        if not (info.is_meridian and info.genus_type == (1, model.g - 1)):
            raise PreconditionError(f"{nm} must be a (1,g-1)-meridian")
    d_z = delta(z_curve)
    if construct.intersection_number(x_curve, d_z) != 0:
        raise PreconditionError("X must be disjoint from delta(Z)")
    arr = _overlay(model, {"z": z_curve, "x": x_curve, "d": d_z})
    rd = RegionDecomposition(arr, ["z"], tracked=["d"])
    t1 = rd.tracked_region["d"]
    crossings = arr.crossing_seq("x", with_owner="z")
    regions = _arc_regions(arr, rd, "x", "z", crossings)
    # far-side arcs and their flanking genus data
    rd2 = RegionDecomposition(arr, ["x", "z"])
    z_seq = arr.crossing_seq("z", with_owner="x")
    n = len(crossings)
    far_arcs = []
    for i in range(n):
        if regions[i] == t1:
            continue
        c1, c2 = crossings[i], crossings[(i + 1) % n]
        flank = _flank_genera(arr, rd2, "x", c1)
        cleans = {
            fwd
            for fwd in (True, False)
            if _z_side_clean(z_seq, c1, c2, fwd)
        }
        far_arcs.append((c1, c2, flank, cleans))
    if not far_arcs:
        raise PreconditionError("no far-side arcs to reduce")
    for c1, c2, flank, _cl in far_arcs:
        if 0 not in flank:
            raise PreconditionError("non-stripe intersection pattern")
    before = construct.intersection_number(x_curve, z_curve)
    d_x = delta(x_curve)
    far_positions = [crossings.index(c1) for c1, _c2, _f, _cl in far_arcs]
    best = None
    for repl in _elimination_candidates(
        arr, "x", "z", far_positions, crossings, z_seq
    ):
        try:
            cyc = _replace_arcs(arr, "x", "z", crossings, repl)
            out = CurveClass.from_cycle(model, cyc)
            if out == x_curve:
                continue
            after = construct.intersection_number(out, z_curve)
            if after > before - 2 * len(repl):
                continue
            info_out = classify(out)
            if info_out.genus_type != (1, model.g - 1) or not info_out.is_meridian:
                continue
            if delta(out) != d_x:
                continue
        except (MlabError, PreconditionError, VerificationFailure):
            continue
        if after == before - 2 * len(repl):
            return out
        if best is None or after > construct.intersection_number(best, z_curve):
            best = out
    if best is not None:
        return best
    raise VerificationFailure("no far-side reroute reduced the intersection")


def _flank_genera(arr, rd2, name, crossing):
    """Genera of the regions flanking the chord segment just after the
    crossing along `name` (in the cut along both curves)."""
    k = crossing.chord_of(name)
    o = arr.owners[name]
    t = o.chords[k][0]
    out = set()
    for (tt, a, b), fid in rd2.chordseg_face.items():
        if tt != t:
            continue
        info = rd2.graphs[tt].edge_info[(a, b)]
        if info[0] == "chord" and info[1] == name and info[2] == k:
            reg = rd2.region_of[fid]
            out.add(rd2.region_stats(reg)["genus"])
    if not out:
        raise MlabError("no flanking regions found")
    return out
