"""Canonical isotopy classes of curves as normal coordinates.

A CurveClass stores the tautened per-edge crossing counts of an essential
simple closed curve; two classes are equal iff their weight vectors are
equal.  `trace` rebuilds the embedded normal multicurve from a weight
vector; construction from a chord cycle tautens, validates realizability
(parity and triangle inequalities), re-traces, and checks that the traced
curve has one component with the same word, which guards against
non-simple input classes.
"""

from . import cycles, words
from .errors import (
    InessentialCurveError,
    InvalidCoordinatesError,
    NonSimpleCurveError,
)
from .model import build_model


def validate_normal(model, weights):
    if len(weights) != model.n_edges:
        raise InvalidCoordinatesError(
            f"expected {model.n_edges} weights, got {len(weights)}"
        )
    if any(w < 0 for w in weights):
        raise InvalidCoordinatesError("negative weight")
    for t in range(model.n_tris):
        ws = [weights[model.tri_edge(t, s)] for s in range(3)]
        if sum(ws) % 2:
            raise InvalidCoordinatesError(f"odd weight sum in triangle {t}")
        for s in range(3):
            if ws[s] > ws[(s + 1) % 3] + ws[(s + 2) % 3]:
                raise InvalidCoordinatesError(
                    f"triangle inequality fails in triangle {t}"
                )


def corner_counts(model, weights, t):
    """Arcs cutting each corner of triangle t: index c is corner (c, c+1)."""
    ws = [weights[model.tri_edge(t, s)] for s in range(3)]
    return [
        (ws[c] + ws[(c + 1) % 3] - ws[(c + 2) % 3]) // 2 for c in range(3)
    ]


class TracedCurve:
    """Embedded normal multicurve reconstructed from a weight vector.

    components: list of chord cycles.
    point_comp: per edge, the component index of each point in edge order.
    point_step: per edge, the step index of that crossing along its cycle
        (the crossing between chord k and k+1 of the component).
    """

    def __init__(self, model, weights, components, point_comp, point_step):
        self.model = model
        self.weights = tuple(weights)
        self.components = components
        self.point_comp = point_comp
        self.point_step = point_step


def trace(model, weights):
    """Reconstruct the normal multicurve with the given edge weights."""
    validate_normal(model, weights)
    # link[t][(slot, ccw_pos)] = (other_slot, other_ccw_pos)
    link = [dict() for _ in range(model.n_tris)]
    for t in range(model.n_tris):
        ns = corner_counts(model, weights, t)
        ws = [weights[model.tri_edge(t, s)] for s in range(3)]
        for c in range(3):
            s1, s2 = c, (c + 1) % 3
            for j in range(ns[c]):
                a = (s1, ws[s1] - 1 - j)
                b = (s2, j)
                link[t][a] = b
                link[t][b] = a

    def edge_pos(t, s, ccw):
        e, sign = model.tris[t][s]
        return ccw if sign > 0 else weights[e] - 1 - ccw

    def ccw_pos(t, s, epos):
        e, sign = model.tris[t][s]
        return epos if sign > 0 else weights[e] - 1 - epos

    visited = set()
    components = []
    point_comp = {e: [None] * weights[e] for e in range(model.n_edges)}
    point_step = {e: [None] * weights[e] for e in range(model.n_edges)}
    for e0 in range(model.n_edges):
        for p0 in range(weights[e0]):
            if point_comp[e0][p0] is not None:
                continue
            t0, s0, _ = model.edge_tris[e0][0]
            state = (t0, s0, ccw_pos(t0, s0, p0))
            if state in visited:
                continue
            comp_idx = len(components)
            chords = []
            crossings = []  # (edge, edge position) after each chord
            t, s_in, ccw = state
            while True:
                visited.add((t, s_in, ccw))
                s_out, ccw_out = link[t][(s_in, ccw)]
                chords.append((t, s_in, s_out))
                e = model.tri_edge(t, s_out)
                ep = edge_pos(t, s_out, ccw_out)
                crossings.append((e, ep))
                t2, s2 = model.other_side(e, t)
                t, s_in, ccw = t2, s2, ccw_pos(t2, s2, ep)
                if (t, s_in, ccw) == state:
                    break
            for step, (e, ep) in enumerate(crossings):
                point_comp[e][ep] = comp_idx
                point_step[e][ep] = step
            components.append(chords)
    return TracedCurve(model, weights, components, point_comp, point_step)


class CurveClass:
    """Isotopy class of an essential simple closed curve."""

    def __init__(self, model, weights, _cycle=None):
        self.model = model
        self.weights = tuple(weights)
        self._cycle = _cycle
        self._word = None
        self._hb = None

    @staticmethod
    def from_cycle(model, cycle):
        wts, taut = cycles.tauten(model, cycle)
        validate_normal(model, wts)
        traced = trace(model, wts)
        if len(traced.components) != 1:
            raise NonSimpleCurveError(
                f"class traces to {len(traced.components)} components"
            )
        w_taut = cycles.surface_word(model, taut)
        if not w_taut:
            raise InessentialCurveError("curve is nullhomotopic")
        w_tr = cycles.surface_word(model, traced.components[0])
        if not (
            words.conjugate_words(w_taut, w_tr, model.g)
            or words.conjugate_words(w_taut, words.inverse(w_tr), model.g)
        ):
            raise NonSimpleCurveError(
                "tautened class does not match its traced reconstruction"
            )
        return CurveClass(model, wts, _cycle=traced.components[0])

    @staticmethod
    def from_weights(model, weights):
        traced = trace(model, weights)
        if len(traced.components) != 1:
            raise NonSimpleCurveError(
                f"weights trace to {len(traced.components)} components"
            )
        return CurveClass.from_cycle(model, traced.components[0])

    @property
    def cycle(self):
        if self._cycle is None:
            self._cycle = trace(self.model, self.weights).components[0]
        return self._cycle

    @property
    def word(self):
        """Surface word (Dehn-reduced conjugacy representative)."""
        if self._word is None:
            self._word = cycles.surface_word(self.model, self.cycle)
        return self._word

    @property
    def genus(self):
        return self.model.g

    def hb_word(self):
        """Image in the handlebody group, least-rotation representative.

        The curve is unoriented; the orientation whose homology class is
        sign-normalized is used, with a lexicographic fallback when the
        class is zero.
        """
        if self._hb is None:
            w = self.word
            h = words.abelianize(w, self.model.g)
            pick = None
            for x in h:
                if x > 0:
                    pick = w
                    break
                if x < 0:
                    pick = words.inverse(w)
                    break
            if pick is None:
                pick = min(
                    words.word_canonical(w),
                    words.word_canonical(words.inverse(w)),
                )
            self._hb = words.word_canonical(words.handlebody_word(pick))
        return self._hb

    def homology(self):
        """Class in Z^{2g}, sign-normalized (first nonzero positive)."""
        h = words.abelianize(self.word, self.model.g)
        for x in h:
            if x > 0:
                return h
            if x < 0:
                return tuple(-y for y in h)
        return h

    def is_separating(self):
        return all(x == 0 for x in self.homology())

    def key(self):
        return (self.model.g, self.weights)

    def __eq__(self, other):
        return (
            isinstance(other, CurveClass)
            and self.model.g == other.model.g
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        return f"CurveClass(g={self.model.g}, w={self.weights})"


def curve_from_letter(model, letter):
    """The standard curve realizing a single scheme letter."""
    return CurveClass.from_cycle(model, cycles.letter_probe_cycle(model, letter))
