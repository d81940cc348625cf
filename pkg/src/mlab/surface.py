"""Public surface-level operations: standard curves, overlays, cutting.

Standard curves, one per handle index:
    A(i), B(i)  dual non-separating pair of handle i (B(i) bounds a disk
                in the handlebody, A(i) does not);
    Petal(i)    genus-1 separating curve around handle i;
    Group(k)    separating curve around handles 1..k (2 <= k <= g-1).
"""

from . import construct, cycles
from .arcs import connect_arc, join
from .arrange import Arrangement, overlay as _overlay
from .curves import CurveClass, curve_from_letter, trace, validate_normal
from .errors import NotDisjointError, PreconditionError
from .model import build_model
from .regions import RegionDecomposition

intersection_number = construct.intersection_number

_STD_CACHE = {}


def std_curve(model, kind, index):
    """A(i), B(i), Petal(i) or Group(k) on the given model."""
    kind = kind.lower()
    key = (model.g, kind, index)
    hit = _STD_CACHE.get(key)
    if hit is not None:
        return hit
    g = model.g
    if kind in ("a", "b"):
        if not 1 <= index <= g:
            raise PreconditionError(f"handle index {index} out of range")
        letter = 2 * index - 1 if kind == "a" else 2 * index
        out = curve_from_letter(model, letter)
    elif kind == "petal":
        if not 1 <= index <= g:
            raise PreconditionError(f"handle index {index} out of range")
        out = construct.band_double(
            std_curve(model, "b", index), std_curve(model, "a", index)
        )
    elif kind == "group":
        if not 2 <= index <= g - 1:
            raise PreconditionError(f"group index {index} out of range")
        out = _build_group(model, index)
    else:
        raise PreconditionError(f"unknown standard curve kind {kind!r}")
    _STD_CACHE[key] = out
    return out


def _build_group(model, k):
    from .arcs import band_sum

    g = model.g
    cur = std_curve(model, "petal", 1)
    for j in range(2, k + 1):
        pj = std_curve(model, "petal", j)
        avoid = [
            std_curve(model, "petal", i)
            for i in range(1, g + 1)
            if i != j and std_curve(model, "petal", i).weights != cur.weights
        ]
        cur, _arc = band_sum(model, cur, pj, avoid=avoid)
    return cur


def standard_family(model):
    """The 2g-3 disjoint separating meridians Petal(1..g), Group(2..g-2)."""
    g = model.g
    fam = [("petal", i) for i in range(1, g + 1)]
    fam += [("group", k) for k in range(2, g - 1)]
    return {f"{kind}{idx}": std_curve(model, kind, idx) for kind, idx in fam}


def overlay(model, named_curves):
    """Minimal-position arrangement of named curve classes."""
    return _overlay(model, named_curves)


def canonicalize(arr, owner):
    """Isotopy class of a traced owner in an arrangement."""
    return CurveClass.from_cycle(arr.model, arr.owners[owner].chords)


def is_essential(arr, owner):
    return len(cycles.surface_word(arr.model, arr.owners[owner].chords)) > 0


def homology_class(c):
    return c.homology()


class SurfacePiece:
    """One complementary piece of a cut, at the boundary-surface level."""

    def __init__(self, genus, boundary_count, content, boundary_owners, chi):
        self.genus = genus
        self.boundary_count = boundary_count
        self.content = content
        self.boundary_owners = boundary_owners
        self.chi = chi

    def __repr__(self):
        return (
            f"SurfacePiece(genus={self.genus}, b={self.boundary_count}, "
            f"content={sorted(self.content)})"
        )


def cut_along(model, cutting, tracked=None, arr=None):
    """Pieces of the surface cut along pairwise disjoint curve classes.

    `cutting` and `tracked` are {name: CurveClass}; tracked owners are
    located inside a piece and reported in its content.
    """
    tracked = tracked or {}
    if arr is None:
        named = dict(cutting)
        named.update(tracked)
        arr = _overlay(model, named)
    names = sorted(cutting)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            if arr.crossing_count(a, b) != 0:
                raise NotDisjointError(f"cutting curves {a}, {b} intersect")
    rd = RegionDecomposition(arr, names, tracked=sorted(tracked))
    pieces = []
    total_chi = 0
    for region in sorted(rd.regions, key=str):
        st = rd.region_stats(region)
        content = {
            nm for nm, reg in rd.tracked_region.items() if reg == region
        }
        if region == rd.vertex_region:
            content.add("@vertex")
        pieces.append(
            SurfacePiece(
                st["genus"],
                st["boundary_count"],
                content,
                st["boundary_owners"],
                st["chi"],
            )
        )
        total_chi += st["chi"]
    if total_chi != 2 - 2 * model.g:
        raise PreconditionError("Euler characteristic not conserved by cut")
    return pieces
