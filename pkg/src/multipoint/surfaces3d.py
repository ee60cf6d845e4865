"""Triangulated closed surfaces mapped into the flat 3-torus.

A mesh is a soup of nondegenerate triangles with exact rational vertices in
R^3, read modulo the integer lattice.  The source surface is defined
implicitly: two triangle edges are the same source edge exactly when they
coincide in the 3-torus, i.e. when they agree after an integer translation.
Every edge must be shared by exactly two edge slots (a closed surface) and
every vertex link must be a single cycle (a manifold).  Note the flavor of
gluing this supports: edge identifications are always pointwise-by-position,
so creases, folds and self-intersections are expressed by the geometry of
the soup itself.

The map to the 3-torus is the quotient of the inclusion.  Its double locus
is computed by intersecting all pairs of triangle lifts over the relevant
lattice translates; pairs that are adjacent in the source (sharing an edge
or a vertex) are allowed to meet exactly along the shared feature and
nothing more.  General-position certification reports violations by name:

``coplanar-overlap``
    two triangle lifts lie in one plane with overlapping interiors.
``vertex-contact``
    two lifts sharing a source vertex meet beyond the shared point.
``tangency``
    any other non-transverse contact: touching lifts, an intersection arc
    ending at a vertex or on the boundary of both triangles at once, or
    double arcs meeting a chart boundary or each other non-transversally.
``double-curve-branching``
    the endpoint matching of double arcs does not pair up two by two.
``quadruple-point``
    a point of the 3-torus where the witness count is not the exact three
    produced by a transverse triple point.

On a certified mesh the double locus is a disjoint union of circles.  Each
circle carries its mod-2 homology class in the 3-torus and its preimage:
either two circles on the source surface or one circle covering it twice.
Preimage circles record the orientation transport of the surface along
them (the ``w1`` bit), which is also the normal transport since the
3-torus is parallelizable.  Triple points carry their three source
preimage points.  These are the ingredients of the degree-2 double-point
identity: for a generic translate of the surface,

    crossings(double circles, translated surface)
        == #(triple points) + sum of w1 bits            (mod 2)

and of the degree-1 identity along a cycle C drawn on the source surface:

    crossings(C in the 3-torus, translated surface)
        == crossings(C, preimage circles on the surface)
           + orientation transport along C              (mod 2).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .rational import ONE, ZERO, parse_rational, rat, rceil, rfloor
from .exactgeom import (
    DEGENERATE,
    _clip_line_to_tri,
    _dominant_axis,
    _project_drop,
    coplanar_tri_relation,
    cross2,
    cross3,
    dist2_point_seg,
    seg_intersect,
    segment_triangle_hit,
    tri_normal,
    tri_tri_intersect,
    vadd,
    vdot,
    vscale,
    vsub,
)


class MeshBuildError(ValueError):
    """The triangle soup does not describe a closed surface."""


class GeneralPositionError(ValueError):
    """The mesh violates general position; see the attached certificate."""

    def __init__(self, cert):
        names = sorted({name for name, _ in cert.violations})
        super().__init__("general position violations: " + ", ".join(names))
        self.cert = cert


class GenericityError(RuntimeError):
    """A genericity retry budget was exhausted."""


class CycleError(ValueError):
    """A cycle drawn on the source surface is malformed or non-generic."""


# ---------------------------------------------------------------------------
# small exact-vector helpers


def _as_rat(x):
    if isinstance(x, str):
        return parse_rational(x)
    return rat(x)


def _point3(p):
    x, y, z = p
    return (_as_rat(x), _as_rat(y), _as_rat(z))


def _floor_vec(p):
    return (rfloor(p[0]), rfloor(p[1]), rfloor(p[2]))


def _frac_vec(p):
    f = _floor_vec(p)
    return (p[0] - f[0], p[1] - f[1], p[2] - f[2])


def _iadd(u, v):
    return (u[0] + v[0], u[1] + v[1], u[2] + v[2])


def _isub(u, v):
    return (u[0] - v[0], u[1] - v[1], u[2] - v[2])


def _ineg(u):
    return (-u[0], -u[1], -u[2])


def _shift_tri(tri, v):
    return (vadd(tri[0], v), vadd(tri[1], v), vadd(tri[2], v))


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


# ---------------------------------------------------------------------------
# structural records


@dataclass(frozen=True)
class EdgeMatch:
    """One source edge: a matched pair of triangle edge slots.

    ``slot_a``/``slot_b`` are ``(triangle, edge)`` with edge ``i`` running
    from vertex ``i`` to vertex ``i+1``.  The lift of ``slot_b``'s triangle
    translated by ``rel_shift`` shares the edge with ``slot_a``'s lift.
    ``flip`` is 1 when the two boundary cycles traverse the shared edge in
    the same direction, i.e. when the triangle orientations disagree
    across this edge.
    """

    slot_a: tuple
    slot_b: tuple
    rel_shift: tuple
    flip: int


@dataclass(frozen=True)
class DoubleSegment:
    """A straight piece of the double locus.

    Coordinates live in the frame of triangle ``tri_a``; the second sheet
    is the lift of ``tri_b`` translated by ``shift``.  ``p < q``
    lexicographically, and each tag ``("a"|"b", edge)`` names the triangle
    edge on which that endpoint lies.
    """

    tri_a: int
    tri_b: int
    shift: tuple
    p: tuple
    q: tuple
    tag_p: tuple
    tag_q: tuple


@dataclass(frozen=True)
class GeneralPositionCert3:
    ok: bool
    violations: tuple
    n_double_segments: int

    @property
    def violation_names(self):
        return sorted({name for name, _ in self.violations})


@dataclass(frozen=True)
class PreimageCircle:
    """One component of the double-locus preimage on the source surface.

    ``arcs`` is a cyclic tuple of ``(triangle, start, end)`` straight arcs
    in triangle-lift coordinates.  ``w1`` is the orientation transport of
    the surface around the circle (the XOR of the flips of the source
    edges it crosses) and ``doubled`` says whether this one circle covers
    its image circle twice.
    """

    arcs: tuple
    w1: int
    doubled: bool


@dataclass(frozen=True)
class DoubleCurve:
    """A circle of the double locus in the 3-torus.

    ``path`` lists ``(segment_index, forward)`` in traversal order,
    ``canonical`` is a translation-normalized frozenset of its segments
    used for exact comparisons, ``h1`` its mod-2 class in the homology of
    the 3-torus, and ``preimages`` the one or two circles lying over it
    on the source surface.
    """

    path: tuple
    canonical: frozenset
    h1: tuple
    preimages: tuple


@dataclass(frozen=True)
class TriplePoint:
    """A transverse triple point of the mapped surface.

    ``target`` is the point of the 3-torus (coordinates in [0, 1)),
    ``preimages`` the three ``(triangle, point)`` source points over it,
    and ``sheets`` the three local sheets ``(triangle, translate)`` in the
    frame of the target representative.
    """

    target: tuple
    preimages: tuple
    sheets: frozenset

    def ordered_triples(self):
        """All six orderings of the three preimage points."""
        return tuple(itertools.permutations(self.preimages))


@dataclass(frozen=True)
class TriplePointSet:
    points: tuple

    def __len__(self):
        return len(self.points)

    def ordered_triples(self):
        return tuple(t for p in self.points for t in p.ordered_triples())

    def mu3_points(self):
        """All source preimage points, three per triple point."""
        return tuple(m for p in self.points for m in p.preimages)


def _canon_segment(p, q):
    s = _floor_vec(min(p, q))
    return (vsub(p, s), vsub(q, s)) if p <= q else (vsub(q, s), vsub(p, s))


def vertex_adjacent_contact(ta, tb, w):
    """Classify the contact of two triangle lifts sharing the source vertex w.

    Returns None when they meet exactly in the point ``w``, otherwise the
    violation name (``"coplanar-overlap"`` or ``"vertex-contact"``).
    """
    na, nb = tri_normal(ta), tri_normal(tb)
    if cross3(na, nb) == (ZERO, ZERO, ZERO) and vdot(na, vsub(tb[0], ta[0])) == ZERO:
        rel = coplanar_tri_relation(ta, tb)
        if rel == "overlap":
            return "coplanar-overlap"
        axis = _dominant_axis(na)
        w2 = _project_drop(w, axis)
        pa = [_project_drop(p, axis) for p in ta]
        pb = [_project_drop(p, axis) for p in tb]
        for ea in range(3):
            for eb in range(3):
                sa = (pa[ea], pa[(ea + 1) % 3])
                sb = (pb[eb], pb[(eb + 1) % 3])
                if not Mesh3._contact_only_at(sa, sb, w2):
                    return "vertex-contact"
        return None
    u = cross3(na, nb)
    ra = _clip_line_to_tri(w, u, ta, "a")
    rb = _clip_line_to_tri(w, u, tb, "b")
    if ra[0] != "interval" or rb[0] != "interval":
        return "vertex-contact"
    lo = max(ra[1], rb[1])
    hi = min(ra[4], rb[4])
    if lo != hi:
        return "vertex-contact"
    return None


# ---------------------------------------------------------------------------
# the mesh


class Mesh3:
    """A closed triangulated surface mapped into the flat 3-torus."""

    def __init__(self, triangles):
        tris = []
        for k, tri in enumerate(triangles):
            t = tuple(_point3(p) for p in tri)
            try:
                tri_normal(t)
            except ValueError:
                raise MeshBuildError(f"degenerate-triangle: triangle {k}")
            tris.append(t)
        if not tris:
            raise MeshBuildError("edge-matching: empty mesh")
        self.triangles = tuple(tris)
        self._normals = tuple(tri_normal(t) for t in self.triangles)
        self._bbox = tuple(
            (
                tuple(min(p[k] for p in t) for k in range(3)),
                tuple(max(p[k] for p in t) for k in range(3)),
            )
            for t in self.triangles
        )
        self._build_matching()
        self._check_vertex_links()
        self._build_adjacency()
        self._cert = None
        self._segments = None
        self._end_links = None
        self._witnesses = None
        self._curves = None
        self._triples = None

    # -- structure ---------------------------------------------------------

    def _edge_points(self, t, e):
        tri = self.triangles[t]
        return tri[e], tri[(e + 1) % 3]

    def _build_matching(self):
        slots = {}
        for t in range(len(self.triangles)):
            for e in range(3):
                p, q = self._edge_points(t, e)
                a, b = (p, q) if p <= q else (q, p)
                s = _floor_vec(a)
                key = (vsub(a, s), vsub(b, s))
                slots.setdefault(key, []).append((t, e, s, 0 if p <= q else 1))
        matches = []
        slot_of = {}
        for key, entries in sorted(slots.items()):
            if len(entries) != 2:
                where = ", ".join(f"triangle {t} edge {e}" for t, e, _, _ in entries)
                raise MeshBuildError(
                    f"edge-matching: edge shared by {len(entries)} slots ({where})"
                )
            (t1, e1, s1, o1), (t2, e2, s2, o2) = entries
            m = EdgeMatch(
                slot_a=(t1, e1),
                slot_b=(t2, e2),
                rel_shift=_isub(s1, s2),
                flip=0 if o1 != o2 else 1,
            )
            slot_of[(t1, e1)] = (len(matches), 0)
            slot_of[(t2, e2)] = (len(matches), 1)
            matches.append(m)
        self.matches = tuple(matches)
        self._slot_of = slot_of

        # vertex classes via corner identifications induced by the matching
        n = len(self.triangles)
        uf = _UnionFind(3 * n)
        for m in self.matches:
            (t1, e1), (t2, e2) = m.slot_a, m.slot_b
            c1 = (e1, (e1 + 1) % 3)
            c2 = (e2, (e2 + 1) % 3)
            if m.flip:  # same traversal direction: start matches start
                pairs = ((c1[0], c2[0]), (c1[1], c2[1]))
            else:
                pairs = ((c1[0], c2[1]), (c1[1], c2[0]))
            for ca, cb in pairs:
                uf.union(3 * t1 + ca, 3 * t2 + cb)
        classes = {}
        for t in range(n):
            for c in range(3):
                classes.setdefault(uf.find(3 * t + c), []).append((t, c))
        self._vertex_classes = tuple(tuple(v) for _, v in sorted(classes.items()))
        self.num_vertices = len(self._vertex_classes)
        self.euler = self.num_vertices - len(self.matches) + len(self.triangles)

        # orientation: the flip bits must form a coboundary
        colors = [None] * n
        orientable = True
        for start in range(n):
            if colors[start] is not None:
                continue
            colors[start] = 0
            stack = [start]
            while stack:
                t = stack.pop()
                for e in range(3):
                    mi, side = self._slot_of[(t, e)]
                    m = self.matches[mi]
                    other = m.slot_b[0] if side == 0 else m.slot_a[0]
                    want = colors[t] ^ m.flip
                    if colors[other] is None:
                        colors[other] = want
                        stack.append(other)
                    elif colors[other] != want:
                        orientable = False
        self.orientable = orientable
        comp = _UnionFind(n)
        for m in self.matches:
            comp.union(m.slot_a[0], m.slot_b[0])
        self.num_components = len({comp.find(t) for t in range(n)})

    def _corner_position(self, t, c):
        return self.triangles[t][c]

    def _link_step(self, t, c, e_in):
        # leave corner (t, c) through its edge other than e_in; corner c
        # belongs to edges c and c-1
        edges = (c, (c + 2) % 3)
        e_out = edges[0] if edges[0] != e_in else edges[1]
        mi, side = self._slot_of[(t, e_out)]
        m = self.matches[mi]
        (t2, e2) = m.slot_b if side == 0 else m.slot_a
        ends1 = (e_out, (e_out + 1) % 3)
        ends2 = (e2, (e2 + 1) % 3)
        pos = ends1.index(c)
        c2 = ends2[pos] if m.flip else ends2[1 - pos]
        return t2, c2, e2

    def _check_vertex_links(self):
        # around every vertex class the corner-to-corner walk must visit
        # each corner exactly once before closing up
        for cls in self._vertex_classes:
            members = set(cls)
            t0, c0 = cls[0]
            state = (t0, c0, c0)
            seen = []
            while True:
                seen.append(state[:2])
                state = self._link_step(*state)
                if state == (t0, c0, c0):
                    break
                if len(seen) > 2 * len(members):
                    break
            if len(seen) != len(members) or set(seen) != members:
                raise MeshBuildError(
                    "vertex-link: vertex neighborhood is not a single disk "
                    f"(corners {sorted(members)})"
                )

    def _build_adjacency(self):
        edge_adj = {}
        for mi, m in enumerate(self.matches):
            (t1, _), (t2, _) = m.slot_a, m.slot_b
            edge_adj.setdefault((t1, t2), {}).setdefault(m.rel_shift, []).append(mi)
            edge_adj.setdefault((t2, t1), {}).setdefault(
                _ineg(m.rel_shift), []
            ).append(mi)
        self._edge_adj = edge_adj
        vertex_adj = {}
        for cls in self._vertex_classes:
            for (t1, c1) in cls:
                for (t2, c2) in cls:
                    if (t1, c1) == (t2, c2):
                        continue
                    d = vsub(self._corner_position(t1, c1), self._corner_position(t2, c2))
                    v = _floor_vec(d)
                    if vsub(d, v) != (ZERO, ZERO, ZERO):
                        raise MeshBuildError(
                            "edge-matching: identified vertices differ by a "
                            "non-integer translation"
                        )
                    if t1 == t2 and v == (0, 0, 0):
                        continue
                    vertex_adj.setdefault((t1, t2), {}).setdefault(v, []).append(
                        (c1, c2)
                    )
        self._vertex_adj = vertex_adj

    def __eq__(self, other):
        return isinstance(other, Mesh3) and self.triangles == other.triangles

    def __hash__(self):
        return hash(self.triangles)

    # -- pair enumeration and certification ---------------------------------

    def _translate_candidates(self, i, j):
        (mins_i, maxs_i) = self._bbox[i]
        (mins_j, maxs_j) = self._bbox[j]
        ranges = []
        for k in range(3):
            lo = rceil(mins_i[k] - maxs_j[k])
            hi = rfloor(maxs_i[k] - mins_j[k])
            if lo > hi:
                return
            ranges.append(range(lo, hi + 1))
        for v in itertools.product(*ranges):
            yield v

    def _coplanar(self, i, ta, j, tb):
        na, nb = self._normals[i], self._normals[j]
        if cross3(na, nb) != (ZERO, ZERO, ZERO):
            return False
        return vdot(na, vsub(tb[0], ta[0])) == ZERO

    @staticmethod
    def _contact_only_at(sa, sb, w2):
        """True when closed 2D segments meet in at most the single point w2."""
        h = seg_intersect(sa, sb)
        if h is None:
            return True
        if h is DEGENERATE:
            d = vsub(sa[1], sa[0])
            if d == (ZERO, ZERO):
                d = vsub(sb[1], sb[0])
            dd = vdot(d, d)
            fa = sorted((ZERO, vdot(d, vsub(sa[1], sa[0])) / dd))
            fb = sorted(
                (
                    vdot(d, vsub(sb[0], sa[0])) / dd,
                    vdot(d, vsub(sb[1], sa[0])) / dd,
                )
            )
            lo = max(fa[0], fb[0])
            hi = min(fa[1], fb[1])
            if lo != hi:
                return False
            return vadd(sa[0], vscale(lo, d)) == w2
        return h.point == w2

    def _enumerate_pairs(self):
        violations = []
        segments = []
        n = len(self.triangles)
        for i in range(n):
            ta = self.triangles[i]
            for j in range(i, n):
                for v in self._translate_candidates(i, j):
                    if i == j and v <= (0, 0, 0):
                        continue
                    detail = f"triangles {i} and {j} + {v}"
                    tb = _shift_tri(self.triangles[j], v)
                    if self._edge_adj.get((i, j), {}).get(v):
                        if self._coplanar(i, ta, j, tb):
                            if coplanar_tri_relation(ta, tb) == "overlap":
                                violations.append(("coplanar-overlap", detail))
                        continue
                    shared = self._vertex_adj.get((i, j), {}).get(v)
                    if shared:
                        if len(shared) != 1:
                            violations.append(("vertex-contact", detail))
                            continue
                        w = self._corner_position(i, shared[0][0])
                        verdict = vertex_adjacent_contact(ta, tb, w)
                        if verdict is not None:
                            violations.append((verdict, detail))
                        continue
                    if self._coplanar(i, ta, j, tb):
                        rel = coplanar_tri_relation(ta, tb)
                        if rel == "overlap":
                            violations.append(("coplanar-overlap", detail))
                        elif rel == "touch":
                            violations.append(("tangency", detail))
                        continue
                    res = tri_tri_intersect(ta, tb)
                    if res is None:
                        continue
                    if res is DEGENERATE:
                        violations.append(("tangency", detail))
                        continue
                    segments.append(
                        DoubleSegment(i, j, v, res.p, res.q, res.tag_p, res.tag_q)
                    )
        return violations, segments

    @staticmethod
    def _end_point(seg, end):
        return seg.p if end == 0 else seg.q

    @staticmethod
    def _end_tag(seg, end):
        return seg.tag_p if end == 0 else seg.tag_q

    @staticmethod
    def _sheets_at(seg, end):
        """Canonical local sheets at a segment end: label -> (triangle, translate)."""
        u = _floor_vec(Mesh3._end_point(seg, end))
        return {
            "a": (seg.tri_a, _ineg(u)),
            "b": (seg.tri_b, _isub(seg.shift, u)),
        }

    def _match_ends(self, segments, violations):
        groups = {}
        for si, seg in enumerate(segments):
            for end in (0, 1):
                key = _frac_vec(self._end_point(seg, end))
                groups.setdefault(key, []).append((si, end))
        links = {}
        for key, g in sorted(groups.items()):
            if len(g) != 2:
                violations.append(
                    (
                        "double-curve-branching",
                        f"{len(g)} arc ends meet at {key}",
                    )
                )
                continue
            (s1, e1), (s2, e2) = g
            sh1 = set(self._sheets_at(segments[s1], e1).values())
            sh2 = set(self._sheets_at(segments[s2], e2).values())
            if len(sh1 & sh2) != 1:
                violations.append(
                    (
                        "double-curve-branching",
                        f"sheet mismatch where arcs meet at {key}",
                    )
                )
                continue
            links[(s1, e1)] = (s2, e2)
            links[(s2, e2)] = (s1, e1)
        return links

    def _collect_witnesses(self, segments, links, violations):
        hosts = {}
        for si, seg in enumerate(segments):
            hosts.setdefault(seg.tri_a, []).append(
                (seg.p, seg.q, (seg.tri_b, seg.shift), si)
            )
            hosts.setdefault(seg.tri_b, []).append(
                (
                    vsub(seg.p, seg.shift),
                    vsub(seg.q, seg.shift),
                    (seg.tri_a, _ineg(seg.shift)),
                    si,
                )
            )
        witnesses = {}
        for t, entries in sorted(hosts.items()):
            axis = _dominant_axis(self._normals[t])
            for x in range(len(entries)):
                for y in range(x + 1, len(entries)):
                    px, qx, ox, sx = entries[x]
                    py, qy, oy, sy = entries[y]
                    if ox == oy:
                        continue
                    sa = (_project_drop(px, axis), _project_drop(qx, axis))
                    sb = (_project_drop(py, axis), _project_drop(qy, axis))
                    h = seg_intersect(sa, sb)
                    if h is None:
                        continue
                    detail = f"double arcs in triangle {t}"
                    # consecutive pieces of one double curve share an end
                    # inside this chart when the other sheet crosses its
                    # own chart boundary there; that contact is legitimate
                    shared = [e for e in (px, qx) if e in (py, qy)]
                    if len(shared) == 1:
                        s3 = shared[0]
                        ea = 0 if px == s3 else 1
                        eb = 0 if py == s3 else 1
                        if links.get((sx, ea)) == (sy, eb):
                            if not self._contact_only_at(
                                sa, sb, _project_drop(s3, axis)
                            ):
                                violations.append(
                                    ("tangency", detail + " double back")
                                )
                            continue
                    if h is DEGENERATE:
                        violations.append(("tangency", detail + " overlap"))
                        continue
                    if not (0 < h.ta < 1 and 0 < h.tb < 1):
                        violations.append(
                            ("tangency", detail + " meet at a chart boundary")
                        )
                        continue
                    y3 = vadd(px, vscale(h.ta, vsub(qx, px)))
                    u = _floor_vec(y3)
                    sheets = frozenset(
                        {
                            (t, _ineg(u)),
                            (ox[0], _isub(ox[1], u)),
                            (oy[0], _isub(oy[1], u)),
                        }
                    )
                    witnesses.setdefault(_frac_vec(y3), []).append((t, y3, sheets))
        for key, ws in sorted(witnesses.items()):
            if len(ws) != 3 or len({sh for _, _, sh in ws}) != 1:
                violations.append(
                    (
                        "quadruple-point",
                        f"{len(ws)} crossing witnesses at {key}",
                    )
                )
        return witnesses

    def certify(self):
        if self._cert is not None:
            return self._cert
        violations, segments = self._enumerate_pairs()
        if violations:
            self._cert = GeneralPositionCert3(False, tuple(violations), len(segments))
            return self._cert
        links = self._match_ends(segments, violations)
        witnesses = self._collect_witnesses(segments, links, violations)
        ok = not violations
        self._cert = GeneralPositionCert3(ok, tuple(violations), len(segments))
        if ok:
            self._segments = tuple(segments)
            self._end_links = links
            self._witnesses = witnesses
        return self._cert

    # -- extraction ----------------------------------------------------------

    def double_segments(self):
        require_general_position(self)
        return self._segments

    def _trace_target_circles(self):
        segments = self._segments
        links = self._end_links
        circles = []
        entered = set()
        for s0 in range(len(segments)):
            if (s0, 0) in entered or (s0, 1) in entered:
                continue
            path = []
            cur, ent = s0, 0
            while True:
                path.append((cur, ent == 0))
                entered.add((cur, ent))
                cur, ent = links[(cur, 1 - ent)]
                if (cur, ent) == (s0, 0):
                    break
            circles.append(tuple(path))
        return circles

    def _circle_h1(self, path):
        segments = self._segments
        offset = (ZERO, ZERO, ZERO)
        start = None
        end = None
        for si, forward in path:
            seg = segments[si]
            a, b = (seg.p, seg.q) if forward else (seg.q, seg.p)
            if start is None:
                start = a
                offset = (ZERO, ZERO, ZERO)
            else:
                offset = vsub(end, a)
            end = vadd(b, offset)
        period = vsub(end, start)
        if any(c != rfloor(c) for c in period):
            raise AssertionError("double circle closes with non-integer period")
        return tuple(rfloor(c) % 2 for c in period)

    def _walk_preimage(self, path, start_label):
        segments = self._segments
        links = self._end_links
        arcs = []
        w1 = 0
        label = start_label
        laps = 0
        while True:
            for (si, forward) in path:
                seg = segments[si]
                a, b = (seg.p, seg.q) if forward else (seg.q, seg.p)
                if label == "a":
                    arcs.append((seg.tri_a, a, b))
                else:
                    arcs.append(
                        (seg.tri_b, vsub(a, seg.shift), vsub(b, seg.shift))
                    )
                exit_end = 1 if forward else 0
                nxt_si, nxt_end = links[(si, exit_end)]
                here = self._sheets_at(seg, exit_end)
                there = self._sheets_at(segments[nxt_si], nxt_end)
                common = set(here.values()) & set(there.values())
                mine = here[label]
                inv_there = {v: k for k, v in there.items()}
                if mine in common:
                    label = inv_there[mine]
                else:
                    owner, edge = self._end_tag(seg, exit_end)
                    if owner != label:
                        raise AssertionError(
                            "transitioning sheet does not own the boundary tag"
                        )
                    tri = seg.tri_a if owner == "a" else seg.tri_b
                    mi, _ = self._slot_of[(tri, edge)]
                    w1 ^= self.matches[mi].flip
                    other = next(v for v in there.values() if v not in common)
                    label = inv_there[other]
            laps += 1
            if label == start_label:
                return PreimageCircle(tuple(arcs), w1, laps == 2), laps
            if laps == 2:
                raise AssertionError("preimage walk did not close in two laps")

    def double_curves(self):
        require_general_position(self)
        if self._curves is not None:
            return self._curves
        curves = []
        for path in self._trace_target_circles():
            canonical = frozenset(
                _canon_segment(self._segments[si].p, self._segments[si].q)
                for si, _ in path
            )
            h1 = self._circle_h1(path)
            first, laps = self._walk_preimage(path, "a")
            if laps == 1:
                second, _ = self._walk_preimage(path, "b")
                preimages = (first, second)
            else:
                preimages = (first,)
            curves.append(DoubleCurve(tuple(path), canonical, h1, preimages))
        self._curves = tuple(curves)
        return self._curves

    def triple_points(self):
        require_general_position(self)
        if self._triples is not None:
            return self._triples
        points = []
        for key, ws in sorted(self._witnesses.items()):
            preimages = tuple(sorted((t, y) for t, y, _ in ws))
            points.append(TriplePoint(key, preimages, ws[0][2]))
        self._triples = TriplePointSet(tuple(points))
        return self._triples


def require_general_position(mesh):
    cert = mesh.certify()
    if not cert.ok:
        raise GeneralPositionError(cert)
    return cert


# ---------------------------------------------------------------------------
# homology of the image


_PROBE_PARAMS = (
    (rat(3, 7), rat(5, 11)),
    (rat(7, 13), rat(9, 17)),
    (rat(11, 19), rat(13, 23)),
    (rat(15, 29), rat(17, 31)),
    (rat(19, 37), rat(21, 41)),
    (rat(23, 43), rat(25, 47)),
    (rat(27, 53), rat(29, 59)),
    (rat(31, 61), rat(33, 67)),
)


def _point_in_tri_2d(pt, tri):
    """1 strictly inside, 0 strictly outside, None on the boundary."""
    side = 0
    for i in range(3):
        c = cross2(vsub(tri[(i + 1) % 3], tri[i]), vsub(pt, tri[i]))
        if c == 0:
            return None
        s = 1 if c > 0 else -1
        if side == 0:
            side = s
        elif side != s:
            return 0
    return 1


def _axis_crossings(mesh, axis, probe):
    total = 0
    for t, tri in enumerate(mesh.triangles):
        flat = [_project_drop(p, axis) for p in tri]
        area2 = cross2(vsub(flat[1], flat[0]), vsub(flat[2], flat[0]))
        mins = tuple(min(p[k] for p in flat) for k in range(2))
        maxs = tuple(max(p[k] for p in flat) for k in range(2))
        ranges = [
            range(rceil(mins[k] - probe[k]), rfloor(maxs[k] - probe[k]) + 1)
            for k in range(2)
        ]
        for u in itertools.product(*ranges):
            pt = vadd(probe, u)
            if area2 == 0:
                # the triangle contains the probe direction; the probe
                # line must stay clear of its projected image
                for i in range(3):
                    if dist2_point_seg(pt, (flat[i], flat[(i + 1) % 3])) == 0:
                        return None
                continue
            inside = _point_in_tri_2d(pt, flat)
            if inside is None:
                return None
            total += inside
    return total


def ambient_class_h2(mesh):
    """Mod-2 class of the mapped surface in the homology of the 3-torus.

    Component ``k`` is the parity of crossings with a generic line
    parallel to axis ``k``.
    """
    bits = []
    for axis in range(3):
        for probe in _PROBE_PARAMS:
            res = _axis_crossings(mesh, axis, probe)
            if res is not None:
                bits.append(res % 2)
                break
        else:
            raise GenericityError(
                f"no generic probe line found for axis {axis}"
            )
    return tuple(bits)


# ---------------------------------------------------------------------------
# crossing counts against a translated copy of the mesh


def _segment_bbox(p, q):
    return (
        tuple(min(p[k], q[k]) for k in range(3)),
        tuple(max(p[k], q[k]) for k in range(3)),
    )


def _crossings_with_translate(mesh, segs, w):
    """Strict crossings of 3-space segments with the mesh translated by w.

    Returns None as soon as any contact is non-transverse.
    """
    total = 0
    for (p, q) in segs:
        smin, smax = _segment_bbox(p, q)
        for t, tri in enumerate(mesh.triangles):
            tmin, tmax = mesh._bbox[t]
            ranges = []
            empty = False
            for k in range(3):
                lo = rceil(smin[k] - tmax[k] - w[k])
                hi = rfloor(smax[k] - tmin[k] - w[k])
                if lo > hi:
                    empty = True
                    break
                ranges.append(range(lo, hi + 1))
            if empty:
                continue
            base = _shift_tri(tri, w)
            for v in itertools.product(*ranges):
                h = segment_triangle_hit(p, q, _shift_tri(base, v))
                if h is DEGENERATE:
                    return None
                if h is not None:
                    total += 1
    return total


def crossings_mod2_with_generic_translate(mesh, segs, retry_budget=16):
    """Parity of crossings of closed curves (given as segments) with a
    generically translated copy of the mesh.

    The translate starts at (d, d^2, d^3) with d = 1/8 and halves d until
    every contact is strictly transverse.
    """
    d = rat(1, 8)
    for _ in range(retry_budget):
        w = (d, d * d, d * d * d)
        c = _crossings_with_translate(mesh, segs, w)
        if c is not None:
            return c % 2
        d = d / 2
    raise GenericityError(
        "translate retry budget exhausted while counting crossings"
    )


def mesh_segment_hits(mesh, segs):
    """Strict hits of 3-space segments on the mesh itself (no translate).

    Returns ``(triangle, point)`` pairs with the point written in the
    triangle's own lift frame.  Raises :class:`GenericityError` on any
    non-transverse contact.
    """
    hits = []
    for (p, q) in segs:
        smin, smax = _segment_bbox(p, q)
        for t, tri in enumerate(mesh.triangles):
            tmin, tmax = mesh._bbox[t]
            ranges = []
            empty = False
            for k in range(3):
                lo = rceil(smin[k] - tmax[k])
                hi = rfloor(smax[k] - tmin[k])
                if lo > hi:
                    empty = True
                    break
                ranges.append(range(lo, hi + 1))
            if empty:
                continue
            for v in itertools.product(*ranges):
                h = segment_triangle_hit(p, q, _shift_tri(tri, v))
                if h is DEGENERATE:
                    raise GenericityError(
                        f"non-transverse contact with triangle {t} + {v}"
                    )
                if h is not None:
                    hits.append((t, vsub(h.point, v)))
    return hits


# ---------------------------------------------------------------------------
# the degree-2 identity


def herbert_lhs_r2(mesh, retry_budget=16):
    """Parity of crossings of the double circles with a generic translate
    of the mapped surface."""
    require_general_position(mesh)
    segs = [(s.p, s.q) for s in mesh.double_segments()]
    return crossings_mod2_with_generic_translate(mesh, segs, retry_budget)


def herbert_rhs_r2_parts(mesh):
    """(triple-point parity, orientation-transport parity over the
    double-locus preimage circles)."""
    triples = mesh.triple_points()
    curves = mesh.double_curves()
    w1_sum = sum(pc.w1 for dc in curves for pc in dc.preimages)
    return (len(triples) % 2, w1_sum % 2)


def herbert_rhs_r2(mesh):
    mu, eul = herbert_rhs_r2_parts(mesh)
    return (mu + eul) % 2


# ---------------------------------------------------------------------------
# cycles on the source surface and the degree-1 identity along them


class MeshCycle:
    """A closed polygonal cycle drawn on the source surface.

    The cycle is a list of marks ``(triangle, a, b)`` with barycentric
    reading ``(1 - a - b) V0 + a V1 + b V2``.  Interior marks have all
    three weights positive.  A crossing into the next chart is written as
    a mark with exactly one zero weight, placed on the edge being crossed
    and expressed in the chart being exited; the entry point in the next
    chart is implied by the edge identification.  The first mark must be
    interior, and consecutive marks must share a chart or be linked by an
    edge crossing.
    """

    def __init__(self, mesh, marks):
        if not marks:
            raise CycleError("a cycle needs at least one mark")
        self.mesh = mesh
        self.marks = tuple(
            (int(t), _as_rat(a), _as_rat(b)) for t, a, b in marks
        )
        for t, a, b in self.marks:
            if not 0 <= t < len(mesh.triangles):
                raise CycleError(f"mark names missing triangle {t}")
        if self._zero_count(self.marks[0]) != 0:
            raise CycleError("a cycle must start at an interior mark")
        self._assemble()

    @staticmethod
    def _weights(mark):
        _, a, b = mark
        return (ONE - a - b, a, b)

    @classmethod
    def _zero_count(cls, mark):
        w = cls._weights(mark)
        if any(c < 0 for c in w):
            raise CycleError(f"mark weights out of range: {mark}")
        return sum(1 for c in w if c == 0)

    def _mark_point(self, mark):
        t = mark[0]
        w = self._weights(mark)
        tri = self.mesh.triangles[t]
        return vadd(
            vadd(vscale(w[0], tri[0]), vscale(w[1], tri[1])),
            vscale(w[2], tri[2]),
        )

    def _assemble(self):
        mesh = self.mesh
        segments = []
        crossed = []
        cur_tri = self.marks[0][0]
        cur_pt = self._mark_point(self.marks[0])
        for mark in self.marks[1:] + (self.marks[0],):
            zeros = self._zero_count(mark)
            if zeros > 1:
                raise CycleError(f"mark passes through a vertex: {mark}")
            if mark[0] != cur_tri:
                raise CycleError(
                    f"mark {mark} is not in the current chart {cur_tri}"
                )
            x = self._mark_point(mark)
            if x == cur_pt:
                raise CycleError("repeated cycle point")
            segments.append((cur_tri, cur_pt, x))
            if zeros == 0:
                cur_pt = x
                continue
            w = self._weights(mark)
            zero_at = w.index(ZERO)
            edge = (zero_at + 1) % 3
            mi, side = mesh._slot_of[(cur_tri, edge)]
            m = mesh.matches[mi]
            if side == 0:
                cur_tri = m.slot_b[0]
                cur_pt = vsub(x, m.rel_shift)
            else:
                cur_tri = m.slot_a[0]
                cur_pt = vadd(x, m.rel_shift)
            crossed.append(m)
        if cur_pt != self._mark_point(self.marks[0]) or cur_tri != self.marks[0][0]:
            raise CycleError("cycle does not close up")
        self.segments = tuple(segments)
        self.crossed = tuple(crossed)
        self._validate_containment()

    def _validate_containment(self):
        for (t, p, q) in self.segments:
            tri = self.mesh.triangles[t]
            axis = _dominant_axis(self.mesh._normals[t])
            p2, q2 = _project_drop(p, axis), _project_drop(q, axis)
            flat = [_project_drop(v, axis) for v in tri]
            for i in range(3):
                edge = (flat[i], flat[(i + 1) % 3])
                h = seg_intersect((p2, q2), edge)
                if h is None:
                    continue
                if h is DEGENERATE:
                    raise CycleError("cycle rides a chart boundary")
                if 0 < h.ta < 1:
                    raise CycleError("cycle leaves its chart between marks")

    def transport_bit(self):
        """Orientation transport of the surface along the cycle."""
        bit = 0
        for m in self.crossed:
            bit ^= m.flip
        return bit


def herbert_lhs_r1_cycle(mesh, cycle, retry_budget=16):
    """Parity of crossings of the mapped cycle with a generic translate of
    the mapped surface."""
    require_general_position(mesh)
    segs = [(p, q) for (_, p, q) in cycle.segments]
    return crossings_mod2_with_generic_translate(mesh, segs, retry_budget)


def herbert_rhs_r1_cycle_parts(mesh, cycle):
    """(parity of crossings with the double-locus preimage, orientation
    transport along the cycle)."""
    curves = mesh.double_curves()
    count = 0
    for (t, p, q) in cycle.segments:
        axis = _dominant_axis(mesh._normals[t])
        p2, q2 = _project_drop(p, axis), _project_drop(q, axis)
        for dc in curves:
            for pc in dc.preimages:
                for (at, ap, aq) in pc.arcs:
                    if at != t:
                        continue
                    h = seg_intersect(
                        (p2, q2),
                        (_project_drop(ap, axis), _project_drop(aq, axis)),
                    )
                    if h is None:
                        continue
                    if h is DEGENERATE or not (0 < h.ta < 1 and 0 < h.tb < 1):
                        raise CycleError(
                            "cycle-tangency: cycle meets the double-locus "
                            "preimage non-transversally"
                        )
                    count += 1
    return (count % 2, cycle.transport_bit())


def herbert_rhs_r1_cycle(mesh, cycle):
    mu, eul = herbert_rhs_r1_cycle_parts(mesh, cycle)
    return (mu + eul) % 2


# ---------------------------------------------------------------------------
# builders


def parallelogram_torus(p0, u, v):
    """Two triangles tiling the parallelogram torus spanned by integer
    vectors ``u`` and ``v`` based at ``p0``, split along the diagonal
    from ``p0 + u`` to ``p0 + v``."""
    p0 = _point3(p0)
    a = vadd(p0, u)
    c = vadd(a, v)
    d = vadd(p0, v)
    return ((p0, a, d), (a, c, d))


def coordinate_torus(axis, level, offset=0):
    """The flat torus of all points with coordinate ``axis`` equal to
    ``level``, triangulated over a unit square starting at ``offset`` in
    both remaining coordinates."""
    axis = {"x": 0, "y": 1, "z": 2}.get(axis, axis)
    level = _as_rat(level)
    o = _as_rat(offset)
    if axis == 2:
        p0, u, v = (o, o, level), (1, 0, 0), (0, 1, 0)
    elif axis == 1:
        p0, u, v = (o, level, o), (1, 0, 0), (0, 0, 1)
    elif axis == 0:
        p0, u, v = (level, o, o), (0, 1, 0), (0, 0, 1)
    else:
        raise ValueError(f"axis must be 0, 1 or 2, not {axis!r}")
    return parallelogram_torus(p0, u, v)


def subdivide_mesh(mesh):
    """Midpoint quadrisection of every triangle; the result maps to the
    same surface of the 3-torus."""
    half = rat(1, 2)
    out = []
    for (a, b, c) in mesh.triangles:
        ab = vscale(half, vadd(a, b))
        bc = vscale(half, vadd(b, c))
        ca = vscale(half, vadd(c, a))
        out.extend([(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)])
    return Mesh3(out)


__all__ = [
    "MeshBuildError",
    "GeneralPositionError",
    "GenericityError",
    "CycleError",
    "EdgeMatch",
    "DoubleSegment",
    "GeneralPositionCert3",
    "PreimageCircle",
    "DoubleCurve",
    "TriplePoint",
    "TriplePointSet",
    "Mesh3",
    "vertex_adjacent_contact",
    "require_general_position",
    "ambient_class_h2",
    "crossings_mod2_with_generic_translate",
    "mesh_segment_hits",
    "herbert_lhs_r2",
    "herbert_rhs_r2_parts",
    "herbert_rhs_r2",
    "MeshCycle",
    "herbert_lhs_r1_cycle",
    "herbert_rhs_r1_cycle_parts",
    "herbert_rhs_r1_cycle",
    "parallelogram_torus",
    "coordinate_torus",
    "subdivide_mesh",
]
