"""Complementary regions of a family of disjointly-or-transversally drawn
cutting curves inside an arrangement.

Faces are computed per triangle from the exact rational drawing (cutting
chords as straight segments, split at their crossings) and glued across
the edge segments between consecutive cutting points.  For a region R the
Euler characteristic is F - G + [v in R], where F counts faces, G glued
segments, and v is the triangulation vertex; boundary circles are traced
through the face cycles, jumping across glued segments.
"""

from fractions import Fraction

from .arrange import _seg_cross, _tri_coords
from .errors import MlabError, NotDisjointError

def _corners(scale):
    return {0: (0, 0), 1: (scale, 0), 2: (0, scale)}


def _angle_key(d):
    dx, dy = d
    upper = (dy, dx) > (0, 0) if dy != 0 else dx > 0
    half = 0 if (dy > 0 or (dy == 0 and dx > 0)) else 1
    return half


def _dir_less(d1, d2):
    """Counterclockwise angular order starting from direction (1, 0)."""
    h1, h2 = _angle_key(d1), _angle_key(d2)
    if h1 != h2:
        return h1 < h2
    cross = d1[0] * d2[1] - d1[1] * d2[0]
    return cross > 0


class _TriGraph:
    """Planar subdivision of one triangle by cutting chords."""

    def __init__(self):
        self.nodes = {}      # node id -> coords
        self.adj = {}        # node id -> list of neighbor ids
        self.edge_info = {}  # frozen directed pair -> ("side", slot, segidx)
                             # or ("chord", owner, chord idx)

    def add_node(self, nid, xy):
        if nid not in self.nodes:
            self.nodes[nid] = xy
            self.adj[nid] = []

    def add_edge(self, a, b, info):
        self.adj[a].append(b)
        self.adj[b].append(a)
        self.edge_info[(a, b)] = info
        self.edge_info[(b, a)] = info

    def sort_adj(self):
        for v, nbrs in self.adj.items():
            vx, vy = self.nodes[v]
            keyed = []
            for u in nbrs:
                ux, uy = self.nodes[u]
                keyed.append(((ux - vx, uy - vy), u))
            # insertion sort with _dir_less (few neighbours per node)
            out = []
            for d, u in keyed:
                i = 0
                while i < len(out) and _dir_less(out[i][0], d):
                    i += 1
                out.insert(i, (d, u))
            self.adj[v] = [u for _d, u in out]

    def faces(self):
        """Counterclockwise interior faces as lists of directed edges."""
        nxt = {}
        for v, nbrs in self.adj.items():
            k = len(nbrs)
            for i, u in enumerate(nbrs):
                # successor of directed edge (u -> v): turn clockwise from
                # the reversed edge, i.e. previous neighbour in ccw order
                nxt[(u, v)] = (v, nbrs[(i - 1) % k])
        out = []
        seen = set()
        for start in nxt:
            if start in seen:
                continue
            cyc = []
            h = start
            while True:
                seen.add(h)
                cyc.append(h)
                h = nxt[h]
                if h == start:
                    break
            # drop the outer face (clockwise => negative signed area)
            area = Fraction(0)
            for (a, b) in cyc:
                ax, ay = self.nodes[a]
                bx, by = self.nodes[b]
                area += ax * by - bx * ay
            if area > 0:
                out.append(cyc)
        return out


class RegionDecomposition:
    def __init__(self, arr, cutting, tracked=()):
        self.arr = arr
        self.model = arr.model
        self.cutting = list(cutting)
        self._build()
        self._glue()
        self._boundaries()
        self.tracked_region = {
            name: self.locate_owner(name) for name in tracked
        }

    # -- per-triangle subdivisions -----------------------------------------

    def _cut_points(self, e):
        return [p for p in self.arr.edge_points[e] if p.owner in self.cutting]

    def _build(self):
        arr, model = self.arr, self.model
        crossings = [
            c
            for c in arr.crossings()
            if c.a in self.cutting and c.b in self.cutting
        ]
        self.graphs = {}
        self.face_ids = []
        self.face_lookup = {}
        for t in range(model.n_tris):
            g = _TriGraph()
            scale = arr.tri_scale(t)
            corners = _corners(scale)
            for c in range(3):
                g.add_node(("v", c), corners[c])
            # boundary points and side segments
            side_pts = {}
            for s in range(3):
                e = model.tri_edge(t, s)
                pts = self._cut_points(e)
                w = len(pts)
                seq = []
                for i, p in enumerate(pts):
                    sign = model.tri_sign(t, s)
                    ccw = i if sign > 0 else w - 1 - i
                    seq.append((ccw, p))
                seq.sort()
                side_pts[s] = [p for _c, p in seq]
                prev = ("v", s)
                full = len(self.arr.edge_points[e])
                for j, p in enumerate(seq):
                    ccw_full = self._ccw_full(t, s, p[1])
                    nid = ("p", id(p[1]), p[1].owner)
                    g.add_node(
                        nid,
                        _tri_coords(
                            s, (ccw_full + 1) * (scale // (full + 1)), scale
                        ),
                    )
                    segidx = j if model.tri_sign(t, s) > 0 else w - j
                    g.add_edge(prev, nid, ("side", s, j))
                    prev = nid
                g.add_edge(prev, ("v", (s + 1) % 3), ("side", s, w))
            # chords, split at crossings
            chord_items = {}
            for name in self.cutting:
                o = arr.owners[name]
                for k, (tt, _x, _y) in enumerate(o.chords):
                    if tt == t:
                        chord_items[(name, k)] = []
            for cr in crossings:
                if cr.tri != t:
                    continue
                nid = ("x", id(cr))
                ga = arr.chord_geometry(cr.a, cr.ka, scale=scale)
                gb = arr.chord_geometry(cr.b, cr.kb, scale=scale)
                hit = _seg_cross(*ga, *gb)
                tp = hit[0]
                xy = (
                    ga[0][0] + tp * (ga[1][0] - ga[0][0]),
                    ga[0][1] + tp * (ga[1][1] - ga[0][1]),
                )
                g.add_node(nid, xy)
                chord_items[(cr.a, cr.ka)].append((cr.ta, nid))
                chord_items[(cr.b, cr.kb)].append((cr.tb, nid))
            for (name, k), xs in chord_items.items():
                o = arr.owners[name]
                tt, sx, sy = o.chords[k]
                entry, exit_ = o.chord_endpoints(k)
                a = ("p", id(entry), name)
                b = ("p", id(exit_), name)
                ga = self._pt_node(g, t, sx, entry, name)
                gb = self._pt_node(g, t, sy, exit_, name)
                items = [ga] + [nid for _tp, nid in sorted(xs, key=lambda z: z[0])] + [gb]
                for i in range(len(items) - 1):
                    g.add_edge(items[i], items[i + 1], ("chord", name, k))
            g.sort_adj()
            self.graphs[t] = g
            for i, f in enumerate(g.faces()):
                fid = (t, i)
                self.face_ids.append(fid)
                self.face_lookup[fid] = f

    def _ccw_full(self, t, s, point):
        return self.arr.point_ccw(point, t, s)

    def _pt_node(self, g, t, s, point, owner):
        nid = ("p", id(point), owner)
        if nid not in g.nodes:
            e = self.model.tri_edge(t, s)
            full = len(self.arr.edge_points[e])
            ccw = self.arr.point_ccw(point, t, s)
            scale = self.arr.tri_scale(t)
            g.add_node(
                nid,
                _tri_coords(s, (ccw + 1) * (scale // (full + 1)), scale),
            )
        return nid

    # -- gluing ---------------------------------------------------------------

    def _glue(self):
        parent = {fid: fid for fid in self.face_ids}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb

        # face of each (tri, side-seg) and (tri, directed chord seg)
        self.side_face = {}
        self.chordseg_face = {}
        for fid in self.face_ids:
            t, _i = fid
            g = self.graphs[t]
            for (a, b) in self.face_lookup[fid]:
                info = g.edge_info[(a, b)]
                if info[0] == "side":
                    _tag, s, j = info
                    self.side_face[(t, s, j, self._dirflag(g, a, b))] = fid
                else:
                    self.chordseg_face[(t, a, b)] = fid
        # each undirected side segment borders exactly one face (inside the
        # triangle); glue it to the matching segment of the other triangle
        self.seg_faces = {}
        glued = 0
        self.region_glued = {}
        pairs = []
        for e in range(self.model.n_edges):
            w = len(self._cut_points(e))
            (t1, s1, _), (t2, s2, _) = self.model.edge_tris[e]
            for seg in range(w + 1):
                f1 = self._side_face_of(t1, s1, e, seg)
                f2 = self._side_face_of(t2, s2, e, seg)
                union(f1, f2)
                pairs.append((f1, f2, e, seg))
        self.region_of = {fid: find(fid) for fid in self.face_ids}
        self.glue_pairs = pairs
        regions = {}
        for fid in self.face_ids:
            regions.setdefault(self.region_of[fid], []).append(fid)
        self.regions = regions
        self.glued_count = {}
        for f1, _f2, _e, _seg in pairs:
            r = self.region_of[f1]
            self.glued_count[r] = self.glued_count.get(r, 0) + 1
        # locate the vertex region: any face whose cycle touches ("v", c)
        vreg = None
        for fid in self.face_ids:
            t, _ = fid
            for (a, b) in self.face_lookup[fid]:
                if a[0] == "v":
                    vreg = self.region_of[fid]
                    break
            if vreg:
                break
        self.vertex_region = vreg

    @staticmethod
    def _dirflag(g, a, b):
        return 0

    def _side_face_of(self, t, s, e, seg):
        """Face adjacent to global segment `seg` of edge e inside (t, s)."""
        w = len(self._cut_points(e))
        sign = self.model.tri_sign(t, s)
        j = seg if sign > 0 else w - seg
        fid = self.side_face.get((t, s, j, 0))
        if fid is None:
            raise MlabError("side segment without a face")
        return fid

    # -- invariants ------------------------------------------------------------

    def chi(self, region):
        f = len(self.regions[region])
        glued = self.glued_count.get(region, 0)
        return f - glued + (1 if region == self.vertex_region else 0)

    def _boundaries(self):
        """Boundary circles per region: cyclic lists of (owner, tri, a, b)."""
        # directed chord segments with their face
        succ = {}
        for fid in self.face_ids:
            t, _ = fid
            g = self.graphs[t]
            cyc = self.face_lookup[fid]
            n = len(cyc)
            for i, (a, b) in enumerate(cyc):
                info = g.edge_info[(a, b)]
                if info[0] != "chord":
                    continue
                # walk forward to the next chord segment of the region bdry
                j = (i + 1) % n
                cur_fid = fid
                cur_cyc = cyc
                guard = 0
                while True:
                    guard += 1
                    if guard > 10 ** 6:
                        raise MlabError("boundary walk stuck")
                    a2, b2 = cur_cyc[j % len(cur_cyc)]
                    info2 = self.graphs[cur_fid[0]].edge_info[(a2, b2)]
                    if info2[0] == "chord":
                        succ[(fid, a, b)] = (cur_fid, a2, b2)
                        break
                    # glued side segment: jump across
                    t2, s2, j2 = cur_fid[0], info2[1], info2[2]
                    e = self.model.tri_edge(t2, s2)
                    w = len(self._cut_points(e))
                    sign = self.model.tri_sign(t2, s2)
                    seg = j2 if sign > 0 else w - j2
                    ot, os = self.model.other_side(e, t2)
                    nfid = self._side_face_of(ot, os, e, seg)
                    ng = self.graphs[ot]
                    # find the directed copy of this segment in the new face
                    ncyc = self.face_lookup[nfid]
                    pos = None
                    for ii, (x, y) in enumerate(ncyc):
                        info3 = ng.edge_info[(x, y)]
                        if info3[0] == "side" and info3[1] == os:
                            wn = len(self._cut_points(e))
                            sgn = self.model.tri_sign(ot, os)
                            seg2 = info3[2] if sgn > 0 else wn - info3[2]
                            if seg2 == seg:
                                pos = ii
                                break
                    if pos is None:
                        raise MlabError("glued segment not found across edge")
                    cur_fid = nfid
                    cur_cyc = ncyc
                    j = pos + 1
        circles = []
        used = set()
        for key in succ:
            if key in used:
                continue
            circle = []
            cur = key
            while True:
                used.add(cur)
                circle.append(cur)
                nfid, a2, b2 = succ[cur]
                cur = (nfid, a2, b2)
                if cur == key:
                    break
            circles.append(circle)
        self.boundary_circles = circles

    def region_boundaries(self, region):
        out = []
        for circle in self.boundary_circles:
            fid = circle[0][0]
            if self.region_of[fid] == region:
                out.append(circle)
        return out

    def circle_owners(self, circle):
        owners = set()
        for fid, a, b in circle:
            t = fid[0]
            info = self.graphs[t].edge_info[(a, b)]
            owners.add(info[1])
        return owners

    def region_stats(self, region):
        chi = self.chi(region)
        bdry = self.region_boundaries(region)
        b = len(bdry)
        genus2 = 2 - chi - b
        if genus2 % 2:
            raise MlabError("half-integral genus: region bookkeeping bug")
        return {
            "chi": chi,
            "boundary_count": b,
            "genus": genus2 // 2,
            "boundary_owners": [sorted(self.circle_owners(c)) for c in bdry],
        }

    # -- locating non-cutting owners --------------------------------------------

    def segment_region(self, e, seg):
        (t1, s1, _), _ = self.model.edge_tris[e]
        return self.region_of[self._side_face_of(t1, s1, e, seg)]

    def point_segment(self, point):
        e = point.edge
        lst = self.arr.edge_points[e]
        idx = lst.index(point)
        seg = sum(
            1 for p in lst[:idx] if p.owner in self.cutting
        )
        return e, seg

    def locate_owner(self, name):
        regions = set()
        for p in self.arr.owners[name].all_points():
            e, seg = self.point_segment(p)
            regions.add(self.segment_region(e, seg))
        if len(regions) != 1:
            raise NotDisjointError(
                f"owner {name} meets several regions: not disjoint from cuts"
            )
        return regions.pop()

    def locate_point(self, point):
        e, seg = self.point_segment(point)
        return self.segment_region(e, seg)

    # -- region spine cycles -------------------------------------------------------

    def region_cycles(self, region):
        """Fundamental cycles of the region's face graph as chord cycles."""
        faces = self.regions[region]
        adj = {}
        for f1, f2, e, seg in self.glue_pairs:
            if self.region_of[f1] != region:
                continue
            adj.setdefault(f1, []).append((f2, e, seg))
            adj.setdefault(f2, []).append((f1, e, seg))
        root = min(faces)
        tree = {root: None}
        order = [root]
        queue = [root]
        tree_edges = set()
        while queue:
            f = queue.pop(0)
            for f2, e, seg in sorted(adj.get(f, []), key=lambda z: (z[0], z[1], z[2])):
                if f2 not in tree:
                    tree[f2] = (f, e, seg)
                    tree_edges.add(frozenset(((f, e, seg), (f2, e, seg))))
                    queue.append(f2)
        seen_links = set()
        cycles_out = []
        for f1, f2, e, seg in self.glue_pairs:
            if self.region_of[f1] != region:
                continue
            link = (min(f1, f2), max(f1, f2), e, seg)
            if link in seen_links:
                continue
            seen_links.add(link)
            if tree.get(f2) == (f1, e, seg) or tree.get(f1) == (f2, e, seg):
                continue
            # path f1 -> root, f2 -> root; join through common ancestor
            def path_to_root(f):
                out = [f]
                while tree[out[-1]] is not None:
                    out.append(tree[out[-1]][0])
                return out

            p1 = path_to_root(f1)
            p2 = path_to_root(f2)
            set1 = {f: i for i, f in enumerate(p1)}
            k = next(i for i, f in enumerate(p2) if f in set1)
            meet = p2[k]
            # cycle: f1 -> f2 (the link), f2 -> meet (tree), meet -> f1 (tree)
            tail2 = p2[1 : k + 1]
            if tail2 and tail2[-1] == f1:
                tail2 = tail2[:-1]
            seq_faces = [f1, f2] + tail2 + list(reversed(p1[1 : set1[meet]]))
            # crossing edges between consecutive faces: step 0 is the link,
            # all later steps are tree edges
            segs = [(e, seg)]
            for i in range(1, len(seq_faces)):
                fa = seq_faces[i]
                fb = seq_faces[(i + 1) % len(seq_faces)]
                te = tree.get(fa)
                if te is not None and te[0] == fb:
                    segs.append((te[1], te[2]))
                    continue
                te = tree.get(fb)
                if te is not None and te[0] == fa:
                    segs.append((te[1], te[2]))
                    continue
                raise MlabError("face cycle step is not an edge of the walk")
            chords = []
            for i in range(len(seq_faces)):
                t = seq_faces[i][0]
                e_in = segs[i - 1][0]
                e_out = segs[i][0]
                s_in = next(s for s in range(3) if self.model.tri_edge(t, s) == e_in)
                s_out = next(s for s in range(3) if self.model.tri_edge(t, s) == e_out)
                chords.append((t, s_in, s_out))
            cycles_out.append(chords)
        return cycles_out
