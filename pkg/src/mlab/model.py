"""Fixed combinatorial model of the closed genus-g surface.

The surface is the 4g-gon with side word a1 b1 a1' b1' ... ag bg ag' bg'
(primes are inverses), fan-triangulated from the corner P0.  After the
identification there is a single vertex.  Edge order, which fixes the
normal-coordinate layout and the file format, is:

    edges 0 .. 2g-1   scheme edges a1, b1, a2, b2, ..., ag, bg
    edges 2g .. 6g-4  fan diagonals d_2, d_3, ..., d_{4g-2}

Triangle k (0-based index k-1) is (P0, Pk, Pk+1) for k = 1 .. 4g-2, with
counterclockwise slot order (P0->Pk, Pk->Pk+1, Pk+1->P0).  Each slot
carries a sign: +1 when the ccw traversal agrees with the edge's canonical
orientation.  Every edge borders exactly two distinct triangles, and the
one-vertex link is a single cycle of 12g-6 corners; both facts are checked
at build time.
"""

from functools import lru_cache

from . import words
from .errors import UnsupportedGenusError, MlabError


def _side_info(g, j):
    """Polygon side j -> (edge index, sign of forward traversal)."""
    handle, r = divmod(j, 4)
    if r == 0:
        return 2 * handle, +1        # a_{handle+1} forward
    if r == 1:
        return 2 * handle + 1, +1    # b forward
    if r == 2:
        return 2 * handle, -1        # a backward
    return 2 * handle + 1, -1        # b backward


class SurfaceModel:
    """Immutable triangulated model of the closed genus-g surface."""

    def __init__(self, g):
        if g < 2:
            raise UnsupportedGenusError(f"genus must be >= 2, got {g}")
        self.g = g
        self.n_edges = 6 * g - 3
        self.n_tris = 4 * g - 2
        self.n_scheme = 2 * g
        self._build_triangles()
        self._build_incidences()
        self._build_link()
        self._build_diag_words()
        self._calibrate_windows()
        self._check()

    # -- construction -----------------------------------------------------

    def _diag_edge(self, k):
        # diagonal d_k = (P0, Pk), k in 2 .. 4g-2
        return self.n_scheme + (k - 2)

    def _build_triangles(self):
        g = self.g
        tris = []
        last = 4 * g - 2
        for k in range(1, last + 1):
            if k == 1:
                s0 = _side_info(g, 0)              # P0 -> P1
            else:
                s0 = (self._diag_edge(k), +1)       # P0 -> Pk
            s1 = _side_info(g, k)                   # Pk -> Pk+1
            if k == last:
                s2 = _side_info(g, 4 * g - 1)       # P_{4g-1} -> P0 window
            else:
                s2 = (self._diag_edge(k + 1), -1)   # Pk+1 -> P0
            tris.append((s0, s1, s2))
        self.tris = tuple(tris)

    def _build_incidences(self):
        inc = [[] for _ in range(self.n_edges)]
        for t, slots in enumerate(self.tris):
            for s, (e, sign) in enumerate(slots):
                inc[e].append((t, s, sign))
        for e, pair in enumerate(inc):
            if len(pair) != 2 or {p[2] for p in pair} != {+1, -1}:
                raise MlabError(f"edge {e} has bad incidences {pair}")
            if pair[0][0] == pair[1][0]:
                raise MlabError(f"edge {e} borders one triangle twice")
        # store with the +1 (left) incidence first
        self.edge_tris = tuple(
            tuple(sorted(pair, key=lambda p: -p[2])) for pair in inc
        )

    def tri_edge(self, t, s):
        return self.tris[t][s][0]

    def tri_sign(self, t, s):
        return self.tris[t][s][1]

    def other_side(self, e, t):
        """The (tri, slot) incidence of edge e not in triangle t."""
        (t1, s1, _), (t2, s2, _) = self.edge_tris[e]
        return (t2, s2) if t1 == t else (t1, s1)

    # -- vertex link -------------------------------------------------------

    def corner_end(self, t, c, s):
        """End (edge, 0|1) of corner c of triangle t on its slot s.

        Corner c sits between slots c and c+1; on slot c it is at the head
        of the ccw traversal, on slot c+1 at the tail.
        """
        e, sign = self.tris[t][s]
        if s == c:
            return (e, 1 if sign > 0 else 0)
        if s == (c + 1) % 3:
            return (e, 0 if sign > 0 else 1)
        raise MlabError("slot not adjacent to corner")

    @staticmethod
    def corner_for_slots(x, y):
        """Corner index of the corner between distinct slots x, y."""
        return x if y == (x + 1) % 3 else y

    def chord_end(self, t, x, y, side):
        """Corner end of the chord (t, x -> y) on slot `side` (x or y).

        Returning chords (x == y) route both endpoints to end 0, which
        keeps word extraction exact for non-normal intermediate cycles.
        """
        if x == y:
            return (self.tris[t][side][0], 0)
        c = self.corner_for_slots(x, y)
        return self.corner_end(t, c, side)

    def _build_link(self):
        end_corners = {}
        for t in range(self.n_tris):
            for c in range(3):
                for s in (c, (c + 1) % 3):
                    end = self.corner_end(t, c, s)
                    end_corners.setdefault(end, []).append((t, c))
        for end, cs in end_corners.items():
            if len(cs) != 2:
                raise MlabError(f"end {end} flanked by {len(cs)} corners")
        # walk the link: alternating corner, end
        start = (0, 0)
        cycle = []
        corner = start
        prev_end = None
        while True:
            cycle.append(corner)
            t, c = corner
            ends = {self.corner_end(t, c, c), self.corner_end(t, c, (c + 1) % 3)}
            nxt_end = (ends - {prev_end}).pop() if prev_end in ends else max(ends)
            a, b = end_corners[nxt_end]
            corner = b if a == corner else a
            prev_end = nxt_end
            if corner == start:
                break
        if len(cycle) != 3 * self.n_tris:
            raise MlabError("vertex link is not a single cycle")
        self.link_cycle = tuple(cycle)
        self.link_pos = {c: i for i, c in enumerate(cycle)}
        self.link_len = len(cycle)
        self.end_corners = end_corners

    def link_end_between(self, pos):
        """The end shared by link corners at positions pos and pos+1."""
        c1 = self.link_cycle[pos % self.link_len]
        c2 = self.link_cycle[(pos + 1) % self.link_len]
        t1, cc1 = c1
        e1 = {self.corner_end(t1, cc1, cc1), self.corner_end(t1, cc1, (cc1 + 1) % 3)}
        t2, cc2 = c2
        e2 = {self.corner_end(t2, cc2, cc2), self.corner_end(t2, cc2, (cc2 + 1) % 3)}
        shared = e1 & e2
        if len(shared) != 1:
            raise MlabError("link corners do not share a unique end")
        return shared.pop()

    # -- pi1 bookkeeping ---------------------------------------------------

    def _build_diag_words(self):
        """Express each diagonal edge loop as a word in scheme letters."""
        w = {}
        for e in range(self.n_scheme):
            w[e] = (e + 1,)
        for t in range(self.n_tris - 1):
            (e0, s0), (e1, s1), (e2, s2) = self.tris[t]
            # ccw boundary is nullhomotopic: w0^s0 w1^s1 w2^s2 = 1
            if s2 != -1 or e2 < self.n_scheme:
                raise MlabError("unexpected triangle layout")
            part0 = w[e0] if s0 > 0 else words.inverse(w[e0])
            part1 = w[e1] if s1 > 0 else words.inverse(w[e1])
            w[e2] = words.free_reduce(part0 + part1)
        # last triangle must give the surface relator
        (e0, s0), (e1, s1), (e2, s2) = self.tris[self.n_tris - 1]
        rel = w[e0] if s0 > 0 else words.inverse(w[e0])
        rel += w[e1] if s1 > 0 else words.inverse(w[e1])
        rel += w[e2] if s2 > 0 else words.inverse(w[e2])
        if not words.is_trivial_surface_word(rel, self.g):
            raise MlabError("triangle relations do not close up to the relator")
        self.diag_words = w

    # -- windows and letter calibration -------------------------------------

    def window_tri_slot(self, j):
        """Polygon window j -> (triangle, slot) carrying that side."""
        if j == 0:
            return (0, 0)
        if j == 4 * self.g - 1:
            return (self.n_tris - 1, 2)
        return (j - 1, 1)

    @staticmethod
    def window_partner(j):
        handle, r = divmod(j, 4)
        return 4 * handle + (r + 2) % 4

    def fan_path(self, r, w):
        """Chords of a polygon path from window r to window w.

        The path enters through window r's side and leaves through window
        w's side, crossing exactly the fan diagonals between them.
        """
        tp, sp = self.window_tri_slot(r)
        tq, sq = self.window_tri_slot(w)
        if tp == tq:
            if sp == sq:
                raise MlabError("degenerate window path")
            return [(tp, sp, sq)]
        chords = []
        if tp < tq:
            chords.append((tp, sp, 2))
            for t in range(tp + 1, tq):
                chords.append((t, 0, 2))
            chords.append((tq, 0, sq))
        else:
            chords.append((tp, sp, 0))
            for t in range(tp - 1, tq, -1):
                chords.append((t, 2, 0))
            chords.append((tq, 2, sq))
        return chords

    def _calibrate_windows(self):
        """Map each pi1 letter to the window whose crossing realizes it."""
        from .cycles import surface_word  # local import to avoid a cycle

        self.window_letter = {}
        letter_window = {}
        for j in range(4 * self.g):
            r = self.window_partner(j)
            cyc = self.fan_path(r, j)
            word = surface_word(self, cyc)
            if len(word) != 1:
                raise MlabError(f"window probe {j} gave word {word}")
            self.window_letter[j] = word[0]
            letter_window[word[0]] = j
        expect = set(range(1, self.n_scheme + 1)) | {
            -x for x in range(1, self.n_scheme + 1)
        }
        if set(letter_window) != expect:
            raise MlabError("window calibration incomplete")
        self.letter_window = letter_window

    # -- sanity -------------------------------------------------------------

    def _check(self):
        chi = 1 - self.n_edges + self.n_tris
        if chi != 2 - 2 * self.g:
            raise MlabError("Euler characteristic mismatch")

    def __repr__(self):
        return f"SurfaceModel(g={self.g})"


@lru_cache(maxsize=None)
def build_model(g):
    """Deterministic model of the genus-g surface (g >= 2)."""
    return SurfaceModel(g)
