"""Finite induced disjointness complexes, join splittings, and the
cut-system graph.

Vertices are curve classes; adjacency is disjointness.  Simplices are the
cliques (flag property), so the complex is the adjacency matrix.  A flag
complex splits as a join K (+) L exactly when the complement graph is
disconnected, with parts unions of complement components.
"""

import hashlib

from . import construct
from .errors import MlabError, PreconditionError, ResourceCapExceeded
from .handlebody import CutSystem, classify, validate_cut_system
from .mcg import apply_map, enumerate_meridians

CLIQUE_VERTEX_CAP = 40


class FlagComplex:
    def __init__(self, names, curves, adjacency):
        self.names = list(names)
        self.curves = dict(curves)
        self.adj = {n: set(adjacency[n]) for n in names}

    def vertices(self):
        return list(self.names)

    def adjacent(self, a, b):
        return b in self.adj[a]

    def edge_count(self):
        return sum(len(v) for v in self.adj.values()) // 2

    def induced(self, subset):
        subset = [n for n in self.names if n in set(subset)]
        return FlagComplex(
            subset,
            {n: self.curves[n] for n in subset},
            {n: self.adj[n] & set(subset) for n in subset},
        )


def build_subcomplex(curves, restrict="all"):
    """Induced disjointness complex on named curve classes.

    `curves` is {name: CurveClass}; duplicates (same class) are removed,
    keeping the lexicographically first name.  restrict="separating-
    meridians-only" filters vertices through classify.
    """
    seen = {}
    for name in sorted(curves):
        c = curves[name]
        if restrict == "separating-meridians-only":
            info = classify(c)
            if not (info.is_meridian and info.separating):
                continue
        elif restrict != "all":
            raise PreconditionError(f"unknown restriction {restrict!r}")
        if c.weights not in seen:
            seen[c.weights] = name
    names = sorted(seen.values())
    kept = {n: curves[n] for n in names}
    adjacency = {n: set() for n in names}
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            if construct.intersection_number(kept[a], kept[b]) == 0:
                adjacency[a].add(b)
                adjacency[b].add(a)
    return FlagComplex(names, kept, adjacency)


def link(fc, v):
    if v not in fc.adj:
        raise PreconditionError(f"vertex {v!r} not in complex")
    return fc.induced(sorted(fc.adj[v]))


class SplitResult:
    def __init__(self, parts, parts_split_further, degenerate=False):
        self.parts = parts
        self.parts_split_further = parts_split_further
        self.degenerate = degenerate

    @property
    def splits(self):
        return self.parts is not None

    def __repr__(self):
        if not self.splits:
            return "<no split>"
        return f"<split {sorted(self.parts[0])} | {sorted(self.parts[1])}>"


def _complement_components(fc, subset=None):
    names = list(fc.names if subset is None else subset)
    name_set = set(names)
    seen = set()
    comps = []
    for n in names:
        if n in seen:
            continue
        comp = []
        stack = [n]
        seen.add(n)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in names:
                if y in seen or y == x:
                    continue
                if y not in fc.adj[x] and y in name_set:
                    seen.add(y)
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def split_join(fc, side_of=None):
    """Join decomposition via complement-graph connectivity.

    Returns a SplitResult; when `side_of` (a predicate name -> 0/1) is
    given, complement components are grouped to match it, otherwise the
    first component forms K and the rest L.
    """
    if len(fc.names) < 2:
        raise PreconditionError("split needs at least two vertices")
    comps = _complement_components(fc)
    if len(comps) == 1:
        return SplitResult(None, None)
    degenerate = all(len(c) == 1 for c in comps)
    if side_of is not None:
        k_part, l_part = [], []
        for comp in comps:
            sides = {side_of(n) for n in comp}
            if len(sides) != 1:
                return SplitResult(None, None)
            (k_part if sides.pop() == 0 else l_part).extend(comp)
        if not k_part or not l_part:
            parts = (sorted(comps[0]), sorted(sum(comps[1:], [])))
        else:
            parts = (sorted(k_part), sorted(l_part))
    else:
        parts = (sorted(comps[0]), sorted(sum(comps[1:], [])))
    further = []
    for part in parts:
        if len(part) < 2:
            further.append(False)
        else:
            sub = fc.induced(part)
            further.append(len(_complement_components(sub)) > 1)
    return SplitResult(parts, tuple(further), degenerate=degenerate)


def max_clique(fc):
    """Exact maximum clique by branch and bound with greedy colouring."""
    names = list(fc.names)
    if len(names) > CLIQUE_VERTEX_CAP:
        raise ResourceCapExceeded(
            f"max clique capped at {CLIQUE_VERTEX_CAP} vertices"
        )
    adj = {n: fc.adj[n] for n in names}
    best = []

    def colour_order(cands):
        order = []
        bounds = []
        uncoloured = sorted(cands)
        colour_classes = []
        for v in uncoloured:
            placed = False
            for cls in colour_classes:
                if all(v not in adj[u] for u in cls):
                    cls.append(v)
                    placed = True
                    break
            if not placed:
                colour_classes.append([v])
        for ci, cls in enumerate(colour_classes, start=1):
            for v in cls:
                order.append(v)
                bounds.append(ci)
        return order, bounds

    def expand(clique, cands):
        nonlocal best
        order, bounds = colour_order(cands)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(best):
                return
            v = order[i]
            new_cands = [u for u in order[:i] if u in adj[v]]
            clique.append(v)
            if not new_cands:
                if len(clique) > len(best):
                    best = list(clique)
            else:
                expand(clique, new_cands)
            clique.pop()

    expand([], names)
    return best


def complex_dim(fc):
    """Dimension: size of a maximum clique minus one."""
    if not fc.names:
        return -1
    return len(max_clique(fc)) - 1


# -- cut-system graph ----------------------------------------------------------


def cutsys_neighbors(system, pool):
    """Cut systems one edge away, replacing one member by a pool meridian
    disjoint from everything (including the replaced member)."""
    out = []
    curves = system.curves
    for i, old in enumerate(curves):
        rest = curves[:i] + curves[i + 1 :]
        for cand in pool:
            if cand.weights == old.weights:
                continue
            if any(cand.weights == c.weights for c in rest):
                continue
            if construct.intersection_number(cand, old) != 0:
                continue
            if any(
                construct.intersection_number(cand, c) != 0 for c in rest
            ):
                continue
            try:
                new = validate_cut_system(rest[:i] + [cand] + rest[i:])
            except PreconditionError:
                continue
            out.append(new)
    dedup = {}
    for s in out:
        dedup.setdefault(s.key(), s)
    return [dedup[k] for k in sorted(dedup)]


def is_cutsys_edge(s1, s2):
    """Edge rule: g-1 members in common, the other two disjoint."""
    k1 = {c.weights for c in s1.curves}
    k2 = {c.weights for c in s2.curves}
    if len(k1 & k2) != len(k1) - 1:
        return False
    (a,) = [c for c in s1.curves if c.weights not in k2]
    (b,) = [c for c in s2.curves if c.weights not in k1]
    return construct.intersection_number(a, b) == 0


def cutsys_path(s1, s2, pool, bound=8):
    """Breadth-first path between cut systems within the candidate pool;
    every edge is re-validated.  None if not found within the bound."""
    start, goal = s1.key(), s2.key()
    if start == goal:
        return [s1]
    frontier = [s1]
    parents = {start: None}
    store = {start: s1}
    for _ in range(bound):
        nxt = []
        for sys_ in frontier:
            for nb in cutsys_neighbors(sys_, pool):
                k = nb.key()
                if k in parents:
                    continue
                if not is_cutsys_edge(sys_, nb):
                    raise MlabError("neighbor violates the edge rule")
                parents[k] = sys_.key()
                store[k] = nb
                if k == goal:
                    path = [nb]
                    cur = sys_.key()
                    while cur is not None:
                        path.append(store[cur])
                        cur = parents[cur]
                    return list(reversed(path))
                nxt.append(nb)
        frontier = nxt
        if not frontier:
            break
    return None


# -- DOT export ------------------------------------------------------------------


def _coords_hash(weights):
    data = ",".join(str(w) for w in weights).encode()
    return hashlib.sha1(data).hexdigest()[:10]


def export_dot(fc, genus):
    """Deterministic DOT text of the complex's 1-skeleton."""
    lines = [f'graph complex {{', f'  graph [genus={genus}];']
    node_id = {}
    for k, name in enumerate(fc.names):
        nid = f"v{k}_{_coords_hash(fc.curves[name].weights)}"
        node_id[name] = nid
        lines.append(f'  {nid} [label="{name}"];')
    for i, a in enumerate(fc.names):
        for b in fc.names[i + 1 :]:
            if fc.adjacent(a, b):
                lines.append(f"  {node_id[a]} -- {node_id[b]};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot_cutsys_graph(systems, edges, genus):
    lines = [f'graph cutsystems {{', f'  graph [genus={genus}];']
    ids = {}
    for k, s in enumerate(systems):
        h = hashlib.sha1(str(s.key()).encode()).hexdigest()[:10]
        ids[s.key()] = f"v{k}_{h}"
        lines.append(f'  {ids[s.key()]};')
    for a, b in edges:
        lines.append(f"  {ids[a.key()]} -- {ids[b.key()]};")
    lines.append("}")
    return "\n".join(lines) + "\n"
