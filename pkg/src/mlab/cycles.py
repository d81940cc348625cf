"""Chord cycles: the free-homotopy-level representation of closed curves.

A chord cycle is a cyclic sequence of chords (tri, slot_in, slot_out); the
curve enters the triangle through slot_in's edge and leaves through
slot_out's.  Consecutive chords live in the two triangles of the shared
edge.  Cycles may be immersed; `tauten` pulls a cycle tight (removing
backtracks across edges and flipping subarcs across the vertex) so its
per-edge crossing counts are the normal coordinates of the isotopy class
on the closed surface.  `weights_of_cycle`, `surface_word`, and
`cycle_from_word` convert between the representations.
"""

from . import words
from .errors import (
    InessentialCurveError,
    MlabError,
    PreconditionError,
    ResourceCapExceeded,
)

WEIGHT_CAP = 10 ** 6
PLATEAU_CAP = 512


def validate_cycle(model, cycle):
    n = len(cycle)
    if n == 0:
        raise PreconditionError("empty cycle")
    for i, (t, x, y) in enumerate(cycle):
        if not (0 <= t < model.n_tris and 0 <= x < 3 and 0 <= y < 3):
            raise MlabError(f"bad chord {cycle[i]}")
        t2, x2, _ = cycle[(i + 1) % n]
        e = model.tri_edge(t, y)
        ot, oslot = model.other_side(e, t)
        if (t2, x2) != (ot, oslot):
            raise MlabError(
                f"chords {i}->{(i + 1) % n} do not match across edge {e}"
            )


def weights_of_cycle(model, cycle):
    w = [0] * model.n_edges
    for (t, _x, y) in cycle:
        w[model.tri_edge(t, y)] += 1
    return tuple(w)


def reverse_cycle(cycle):
    return [(t, y, x) for (t, x, y) in reversed(cycle)]


def cycle_key(cycle):
    """Canonical key of a cycle up to rotation and reversal."""
    best = None
    for cyc in (tuple(cycle), tuple(reverse_cycle(cycle))):
        n = len(cyc)
        for i in range(n):
            rot = cyc[i:] + cyc[:i]
            if best is None or rot < best:
                best = rot
    return best


# -- pi1 ---------------------------------------------------------------------


def raw_edge_word(model, cycle):
    """Word of the cycle over *all* edge loops (diagonals included).

    At each crossing, the two adjacent chords are pushed into the vertex
    corners they cut; when they route to opposite ends of the shared edge
    the curve picks up that edge loop, read tail-to-head as positive.
    """
    n = len(cycle)
    out = []
    for i, (t, x, y) in enumerate(cycle):
        t2, x2, y2 = cycle[(i + 1) % n]
        e = model.tri_edge(t, y)
        _, end_out = model.chord_end(t, x, y, y)
        _, end_in = model.chord_end(t2, x2, y2, x2)
        if end_out != end_in:
            out.append((e + 1) if (end_out, end_in) == (0, 1) else -(e + 1))
    return tuple(out)


def surface_word(model, cycle):
    """Dehn-reduced cyclic word of the cycle in the scheme letters.

    Empty iff the cycle is nullhomotopic on the closed surface.
    """
    out = []
    for x in raw_edge_word(model, cycle):
        e = abs(x) - 1
        if e < model.n_scheme:
            out.append(x)
        else:
            w = model.diag_words[e]
            out.extend(w if x > 0 else words.inverse(w))
    return words.dehn_reduce_cyclic(tuple(out), model.g)


def homology_of_cycle(model, cycle):
    return words.abelianize(surface_word(model, cycle), model.g)


def letter_probe_cycle(model, letter):
    """An embedded chord cycle whose class is the single scheme letter.

    The curve crosses the letter's window once and closes up through the
    polygon, so it is the standard pushoff realizing that generator.
    """
    j = model.letter_window[letter]
    cyc = model.fan_path(model.window_partner(j), j)
    validate_cycle(model, cyc)
    return cyc


# -- tautening ----------------------------------------------------------------


def _remove_backtracks(model, cycle):
    """Remove chords entering and leaving through the same slot."""
    cur = list(cycle)
    changed = True
    while changed:
        changed = False
        i = 0
        while i < len(cur):
            t, x, y = cur[i]
            if x == y and len(cur) > 1:
                n = len(cur)
                j = (i - 1) % n
                k = (i + 1) % n
                tp, xp, _yp = cur[j]
                _tk, _xk, yk = cur[k]
                if j == k:
                    # two chords: backtrack against a single partner
                    cur = [(tp, xp, yk)]
                else:
                    merged = (tp, xp, yk)
                    idxs = sorted((i, k), reverse=True)
                    cur[j] = merged
                    for idx in idxs:
                        cur.pop(idx)
                changed = True
                i = 0
                continue
            i += 1
        if len(cur) == 1:
            t, x, y = cur[0]
            if x == y:
                raise InessentialCurveError("cycle is nullhomotopic")
    return cur


def _runs(model, cycle):
    """Maximal vertex-hugging runs as (start, length, direction) triples.

    Consecutive chords whose cut corners flank the same end of the shared
    edge fellow-travel the vertex link; direction is the step in link
    position.  Raises if the whole cycle wraps the vertex.
    """
    n = len(cycle)
    adj = []
    for i in range(n):
        t, x, y = cycle[i]
        t2, x2, y2 = cycle[(i + 1) % n]
        if x == y or x2 == y2:
            adj.append(False)
            continue
        adj.append(
            model.chord_end(t, x, y, y) == model.chord_end(t2, x2, y2, x2)
        )
    if all(adj):
        raise InessentialCurveError("cycle wraps the vertex (vertex-linking)")
    runs = []
    i = 0
    # start scanning at a break
    start0 = next(idx for idx in range(n) if not adj[idx])
    i = (start0 + 1) % n
    count = 0
    run_start = i
    while count < n:
        if adj[i]:
            i = (i + 1) % n
            count += 1
            continue
        # run is run_start .. i inclusive
        length = (i - run_start) % n + 1
        runs.append((run_start, length))
        i = (i + 1) % n
        run_start = i
        count += 1
    out = []
    for start, length in runs:
        if length < 2:
            out.append((start, length, 0))
            continue
        t, x, y = cycle[start]
        c1 = model.corner_for_slots(x, y)
        t2, x2, y2 = cycle[(start + 1) % n]
        c2 = model.corner_for_slots(x2, y2)
        p1 = model.link_pos[(t, c1)]
        p2 = model.link_pos[(t2, c2)]
        if (p1 + 1) % model.link_len == p2:
            d = +1
        elif (p1 - 1) % model.link_len == p2:
            d = -1
        else:
            raise MlabError("run corners not link-adjacent")
        out.append((start, length, d))
    return out


def _comp_chords(model, comp):
    """Chords cutting the complementary corners, chained in visit order.

    comp[0] flanks the absorbed entry crossing, comp[-1] the exit one; the
    first chord's entry slot and the last chord's exit slot are the ones
    later overwritten by the merges into the neighbouring chords.
    """
    out = []
    prev_end = None
    for idx, (t, c) in enumerate(comp):
        s_a, s_b = c, (c + 1) % 3
        end_a = model.corner_end(t, c, s_a)
        end_b = model.corner_end(t, c, s_b)
        if idx == 0:
            if len(comp) == 1:
                out.append((t, s_a, s_b))
                break
            nt, nc = comp[1]
            nxt_ends = {
                model.corner_end(nt, nc, nc),
                model.corner_end(nt, nc, (nc + 1) % 3),
            }
            if end_a in nxt_ends:
                out.append((t, s_b, s_a))
                prev_end = end_a
            else:
                out.append((t, s_a, s_b))
                prev_end = end_b
        else:
            if end_a == prev_end:
                out.append((t, s_a, s_b))
                prev_end = end_b
            elif end_b == prev_end:
                out.append((t, s_b, s_a))
                prev_end = end_a
            else:
                raise MlabError("complementary corners not chained")
    return out


def _flip_run(model, cycle, start, length, direction):
    """Push the run of `length` chords starting at `start` across the vertex.

    The two crossings flanking the run are absorbed into the neighbouring
    chords, so the weight changes by N - 2*length - 2.
    """
    n = len(cycle)
    N = model.link_len
    k = length
    t0, x0, y0 = cycle[start]
    m = model.link_pos[(t0, model.corner_for_slots(x0, y0))]
    d = direction if direction != 0 else +1
    comp = [model.link_cycle[(m - d * s) % N] for s in range(1, N - k + 1)]
    new_chords = _comp_chords(model, comp)
    pred_i = (start - 1) % n
    succ_i = (start + k) % n
    tp, xp, yp = cycle[pred_i]
    if pred_i == succ_i:
        # run covers all but one chord: both merges hit the same chord
        if len(new_chords) < 2:
            raise InessentialCurveError("degenerate vertex flip")
        first, last = new_chords[0], new_chords[-1]
        if first[0] != tp or last[0] != tp:
            raise MlabError("flip merge triangles mismatch")
        merged = (tp, last[1], first[2])
        return _remove_backtracks(model, [merged] + new_chords[1:-1])
    ts, xs, ys = cycle[succ_i]
    if len(new_chords) == 1:
        if tp != ts or new_chords[0][0] != tp:
            raise MlabError("single-corner flip mismatch")
        body = [(tp, xp, ys)]
    else:
        first, last = new_chords[0], new_chords[-1]
        if first[0] != tp or last[0] != ts:
            raise MlabError("flip merge triangles mismatch")
        body = [(tp, xp, first[2])] + new_chords[1:-1] + [(ts, last[1], ys)]
    keep = []
    idx = (succ_i + 1) % n
    while idx != pred_i:
        keep.append(cycle[idx])
        idx = (idx + 1) % n
    return _remove_backtracks(model, body + keep)


def _reduce_once(model, cycle):
    """One pass: returns (cycle, changed) after backtracks and any
    weight-reducing vertex flip."""
    cur = _remove_backtracks(model, cycle)
    N = model.link_len
    runs = _runs(model, cur)
    for start, length, d in sorted(runs, key=lambda r: (-r[1], r[0])):
        if 2 * length >= N:
            return _flip_run(model, cur, start, length, d), True
    return cur, False


def tauten(model, cycle):
    """Pull a cycle tight on the closed surface; canonical representative.

    Returns (weights, cycle).  Among the weight-equal positions reachable
    by plateau flips the lexicographically least weight vector is chosen.
    """
    validate_cycle(model, cycle)
    cur = list(cycle)
    while True:
        cur, changed = _reduce_once(model, cur)
        if not changed:
            break
    N = model.link_len
    # plateau exploration: flips of runs with 2*length == N - 2
    best = (weights_of_cycle(model, cur), cur)
    seen = {cycle_key(cur)}
    frontier = [cur]
    while frontier:
        if len(seen) > PLATEAU_CAP:
            raise ResourceCapExceeded("plateau exploration exceeded cap")
        state = frontier.pop()
        for start, length, d in _runs(model, state):
            if 2 * length != N - 2:
                continue
            nxt = _flip_run(model, state, start, length, d)
            reduced = False
            while True:
                nxt, changed = _reduce_once(model, nxt)
                if not changed:
                    break
                reduced = True
            if reduced:
                # found a strictly lighter basin: restart from it
                return tauten(model, nxt)
            key = cycle_key(nxt)
            if key in seen:
                continue
            seen.add(key)
            frontier.append(nxt)
            wts = weights_of_cycle(model, nxt)
            if wts < best[0]:
                best = (wts, nxt)
    wts, cyc = best
    if any(w > WEIGHT_CAP for w in wts):
        raise ResourceCapExceeded("edge weight exceeds cap")
    return wts, list(cyc)
