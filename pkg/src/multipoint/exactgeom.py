"""Exact geometric primitives over the rationals.

Points are plain tuples of rationals (length 2 or 3).  Predicates never
approximate: every routine returns an exact answer, and configurations that
are not in general position are reported as such (the ``DEGENERATE``
sentinel) rather than resolved arbitrarily.  Degeneracy is an ordinary
outcome here; callers decide whether it is a violation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .rational import rat, ZERO, ONE


# ---------------------------------------------------------------------------
# vector helpers


def vsub(p, q):
    return tuple(a - b for a, b in zip(p, q))


def vadd(p, q):
    return tuple(a + b for a, b in zip(p, q))


def vscale(s, p):
    return tuple(s * a for a in p)


def vdot(p, q):
    return sum((a * b for a, b in zip(p, q)), ZERO)


def cross2(p, q):
    return p[0] * q[1] - p[1] * q[0]


def cross3(p, q):
    return (
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    )


def dist2(p, q):
    """Squared distance between two points of equal dimension."""
    d = vsub(p, q)
    return vdot(d, d)


def perp_left(d):
    """Rotate a 2D vector a quarter turn counterclockwise."""
    return (-d[1], d[0])


def l1norm(d):
    return sum((a if a >= 0 else -a for a in d), ZERO)


# ---------------------------------------------------------------------------
# degeneracy sentinel


class _Degenerate:
    """Contact exists but is not a single transverse interior crossing."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "DEGENERATE"

    def __bool__(self):
        raise TypeError("compare against DEGENERATE by identity, not truthiness")


DEGENERATE = _Degenerate()


# ---------------------------------------------------------------------------
# 2D segment intersection


@dataclass(frozen=True)
class SegmentHit:
    """A single intersection point with parameters along each input."""

    point: tuple
    ta: object
    tb: Optional[object] = None


def seg_intersect(a, b):
    """Intersect closed 2D segments ``a = (p0, p1)`` and ``b = (q0, q1)``.

    Returns None (disjoint), a :class:`SegmentHit` (single intersection
    point, with parameters in [0, 1] for each segment), or ``DEGENERATE``
    for collinear overlap, including a single-point collinear touch.
    Endpoint-to-interior contacts are reported as ordinary hits with a
    parameter of 0 or 1; callers classify them.
    """
    p, p1 = a
    q, q1 = b
    r = vsub(p1, p)
    s = vsub(q1, q)
    qp = vsub(q, p)
    denom = cross2(r, s)
    if denom == 0:
        if cross2(qp, r) != 0 or cross2(qp, s) != 0:
            return None  # parallel, distinct supporting lines
        # collinear: compare parameter intervals along a common direction
        d = r if r != (ZERO, ZERO) else s
        if d == (ZERO, ZERO):  # both degenerate points
            return DEGENERATE if p == q else None
        dd = vdot(d, d)
        ta0, ta1 = ZERO, vdot(r, d) / dd
        tb0, tb1 = vdot(qp, d) / dd, vdot(vsub(q1, p), d) / dd
        lo_a, hi_a = min(ta0, ta1), max(ta0, ta1)
        lo_b, hi_b = min(tb0, tb1), max(tb0, tb1)
        if hi_a < lo_b or hi_b < lo_a:
            return None
        return DEGENERATE
    t = cross2(qp, s) / denom
    u = cross2(qp, r) / denom
    if 0 <= t <= 1 and 0 <= u <= 1:
        return SegmentHit(vadd(p, vscale(t, r)), t, u)
    return None


# ---------------------------------------------------------------------------
# minimum separation


def dist2_point_seg(p, seg):
    """Squared distance from a point to a closed segment (any dimension)."""
    a, b = seg
    d = vsub(b, a)
    dd = vdot(d, d)
    if dd == 0:
        return dist2(p, a)
    t = vdot(vsub(p, a), d) / dd
    if t < 0:
        t = ZERO
    elif t > 1:
        t = ONE
    return dist2(p, vadd(a, vscale(t, d)))


_dist2_point_seg = dist2_point_seg


def _dist2_seg_seg_2d(s1, s2):
    hit = seg_intersect(s1, s2)
    if hit is not None:
        return ZERO
    return min(
        _dist2_point_seg(s1[0], s2),
        _dist2_point_seg(s1[1], s2),
        _dist2_point_seg(s2[0], s1),
        _dist2_point_seg(s2[1], s1),
    )


def _dist2_seg_seg_3d(s1, s2):
    p0, p1 = s1
    q0, q1 = s2
    u = vsub(p1, p0)
    v = vsub(q1, q0)
    w0 = vsub(p0, q0)
    a = vdot(u, u)
    c = vdot(v, v)
    if a == 0:
        return _dist2_point_seg(p0, s2) if c != 0 else dist2(p0, q0)
    if c == 0:
        return _dist2_point_seg(q0, s1)
    b = vdot(u, v)
    d = vdot(u, w0)
    e = vdot(v, w0)
    den = a * c - b * b
    if den != 0:
        s = (b * e - c * d) / den
        t = (a * e - b * d) / den
        if 0 <= s <= 1 and 0 <= t <= 1:
            return dist2(vadd(p0, vscale(s, u)), vadd(q0, vscale(t, v)))
    return min(
        _dist2_point_seg(p0, s2),
        _dist2_point_seg(p1, s2),
        _dist2_point_seg(q0, s1),
        _dist2_point_seg(q1, s1),
    )


def _feature_parts(f):
    """Classify a feature as a point or segment; return (kind, endpoints)."""
    if isinstance(f[0], tuple):
        return "seg", (f[0], f[1])
    return "pt", (f,)


def min_separation(features):
    """Minimum squared distance over non-incident pairs of features.

    Features are points (tuples of 2 or 3 rationals) or segments (pairs of
    such points), all of one dimension.  Pairs sharing an exact endpoint
    are skipped, as are self-pairs.  A result of zero means two
    non-incident features touch.  Raises ValueError when every pair is
    incident (callers fall back to a default scale).
    """
    parsed = [_feature_parts(f) for f in features]
    dims = {len(p) for _, eps in parsed for p in eps}
    if len(dims) > 1:
        raise ValueError(f"mixed feature dimensions {sorted(dims)}")
    best = None
    for i in range(len(parsed)):
        ki, epi = parsed[i]
        for j in range(i + 1, len(parsed)):
            kj, epj = parsed[j]
            if set(epi) & set(epj):
                continue
            if ki == "pt" and kj == "pt":
                d = dist2(epi[0], epj[0])
            elif ki == "pt":
                d = _dist2_point_seg(epi[0], epj)
            elif kj == "pt":
                d = _dist2_point_seg(epj[0], epi)
            else:
                dim = len(epi[0])
                if dim == 2:
                    d = _dist2_seg_seg_2d(epi, epj)
                else:
                    d = _dist2_seg_seg_3d(epi, epj)
            if best is None or d < best:
                best = d
                if best == 0:
                    return best
    if best is None:
        raise ValueError("no non-incident feature pairs")
    return best


# ---------------------------------------------------------------------------
# triangle-triangle intersection in 3-space


def tri_normal(tri):
    n = cross3(vsub(tri[1], tri[0]), vsub(tri[2], tri[0]))
    if n == (ZERO, ZERO, ZERO):
        raise ValueError("degenerate triangle")
    return n


def _dominant_axis(n):
    absn = [a if a >= 0 else -a for a in n]
    m = max(absn)
    return absn.index(m)


def _project_drop(p, axis):
    return tuple(c for k, c in enumerate(p) if k != axis)


def coplanar_tri_relation(a, b):
    """Relation of two coplanar triangles: 'disjoint', 'touch' or 'overlap'.

    'touch' means the closed triangles meet but their interiors do not;
    'overlap' means the interiors intersect.
    """
    n = tri_normal(a)
    axis = _dominant_axis(n)
    pa = [_project_drop(p, axis) for p in a]
    pb = [_project_drop(p, axis) for p in b]
    touched = False
    for poly in (pa, pb):
        for i in range(3):
            axis2 = perp_left(vsub(poly[(i + 1) % 3], poly[i]))
            ia = sorted(vdot(axis2, p) for p in pa)
            ib = sorted(vdot(axis2, p) for p in pb)
            if ia[2] < ib[0] or ib[2] < ia[0]:
                return "disjoint"
            if ia[2] == ib[0] or ib[2] == ia[0]:
                touched = True
    return "touch" if touched else "overlap"


@dataclass(frozen=True)
class TriTriHit:
    """Open intersection arc of two triangles, with tagged endpoints.

    ``p`` and ``q`` are the segment endpoints in lexicographic order; each
    tag is ``(owner, edge_index)`` naming the triangle edge on which that
    endpoint lies (owner 'a' or 'b', edges ``(v_i, v_{i+1})``).
    """

    p: tuple
    q: tuple
    tag_p: tuple
    tag_q: tuple


def _clip_line_to_tri(p0, u, tri, owner):
    """Clip line ``p0 + t u`` (lying in the triangle's plane) to a triangle.

    Returns ('miss',), ('degenerate', why), or
    ('interval', lo, lo_tag, lo_tie, hi, hi_tag, hi_tie).
    """
    n = tri_normal(tri)
    lo = hi = None
    lo_tag = hi_tag = None
    lo_tie = hi_tie = False
    for i in range(3):
        vi = tri[i]
        m = cross3(n, vsub(tri[(i + 1) % 3], vi))
        if vdot(m, vsub(tri[(i + 2) % 3], vi)) < 0:
            m = vscale(rat(-1), m)
        c0 = vdot(m, vsub(p0, vi))
        c1 = vdot(m, u)
        if c1 == 0:
            if c0 < 0:
                return ("miss",)
            if c0 == 0:
                return ("degenerate", "line-on-edge")
            continue
        t = -c0 / c1
        if c1 > 0:
            if lo is None or t > lo:
                lo, lo_tag, lo_tie = t, (owner, i), False
            elif t == lo:
                lo_tie = True
        else:
            if hi is None or t < hi:
                hi, hi_tag, hi_tie = t, (owner, i), False
            elif t == hi:
                hi_tie = True
    if lo is None or hi is None:
        return ("miss",)
    if lo > hi:
        return ("miss",)
    return ("interval", lo, lo_tag, lo_tie, hi, hi_tag, hi_tie)


def tri_tri_intersect(a, b):
    """Intersect two triangles in 3-space.

    Returns None (disjoint), a :class:`TriTriHit` (a transverse crossing
    along an open arc), or ``DEGENERATE`` for every non-generic contact:
    coplanar touch or overlap, single-point contact, an arc endpoint at a
    triangle vertex, an arc along an edge, or an arc endpoint on the
    boundary of both triangles at once.
    """
    na = tri_normal(a)
    nb = tri_normal(b)
    db = [vdot(nb, vsub(p, b[0])) for p in a]
    if all(d > 0 for d in db) or all(d < 0 for d in db):
        return None
    da = [vdot(na, vsub(p, a[0])) for p in b]
    if all(d > 0 for d in da) or all(d < 0 for d in da):
        return None
    if all(d == 0 for d in db):
        rel = coplanar_tri_relation(a, b)
        return None if rel == "disjoint" else DEGENERATE
    u = cross3(na, nb)
    # non-coplanar with both sign tests inconclusive: planes meet in a line
    naa = vdot(na, na)
    nbb = vdot(nb, nb)
    nab = vdot(na, nb)
    wa = vdot(na, a[0])
    wb = vdot(nb, b[0])
    den = naa * nbb - nab * nab  # == |u|^2 > 0
    alpha = (wa * nbb - wb * nab) / den
    beta = (wb * naa - wa * nab) / den
    p0 = vadd(vscale(alpha, na), vscale(beta, nb))
    ra = _clip_line_to_tri(p0, u, a, "a")
    rb = _clip_line_to_tri(p0, u, b, "b")
    for r in (ra, rb):
        if r[0] == "miss":
            return None
        if r[0] == "degenerate":
            return DEGENERATE
    _, lo_a, lo_tag_a, lo_tie_a, hi_a, hi_tag_a, hi_tie_a = ra
    _, lo_b, lo_tag_b, lo_tie_b, hi_b, hi_tag_b, hi_tie_b = rb
    if lo_a == lo_b or hi_a == hi_b:
        return DEGENERATE  # arc endpoint on the boundary of both triangles
    if lo_a > lo_b:
        flo, flo_tag, flo_tie = lo_a, lo_tag_a, lo_tie_a
    else:
        flo, flo_tag, flo_tie = lo_b, lo_tag_b, lo_tie_b
    if hi_a < hi_b:
        fhi, fhi_tag, fhi_tie = hi_a, hi_tag_a, hi_tie_a
    else:
        fhi, fhi_tag, fhi_tie = hi_b, hi_tag_b, hi_tie_b
    if flo > fhi:
        return None
    if flo == fhi:
        return DEGENERATE
    if flo_tie or fhi_tie:
        return DEGENERATE  # arc endpoint at a triangle vertex
    p = vadd(p0, vscale(flo, u))
    q = vadd(p0, vscale(fhi, u))
    if p <= q:
        return TriTriHit(p, q, flo_tag, fhi_tag)
    return TriTriHit(q, p, fhi_tag, flo_tag)


def segment_triangle_hit(p, q, tri):
    """Strict transverse crossing of an open segment through a triangle interior.

    Returns a :class:`SegmentHit` (point and parameter along pq) for a
    crossing strictly interior to both the segment and the triangle, None
    when there is no contact, and ``DEGENERATE`` for everything else
    (endpoint on the plane, coplanar segment, crossing on an edge or
    vertex, zero-length segment).
    """
    if p == q:
        return DEGENERATE
    n = tri_normal(tri)
    d0 = vdot(n, vsub(p, tri[0]))
    d1 = vdot(n, vsub(q, tri[0]))
    if d0 == 0 or d1 == 0:
        return DEGENERATE
    if (d0 > 0) == (d1 > 0):
        return None
    t = d0 / (d0 - d1)
    x = vadd(p, vscale(t, vsub(q, p)))
    for i in range(3):
        vi = tri[i]
        m = cross3(n, vsub(tri[(i + 1) % 3], vi))
        if vdot(m, vsub(tri[(i + 2) % 3], vi)) < 0:
            m = vscale(rat(-1), m)
        s = vdot(m, vsub(x, vi))
        if s < 0:
            return None
        if s == 0:
            return DEGENERATE
    return SegmentHit(x, t)


# ---------------------------------------------------------------------------
# affine charts


@dataclass(frozen=True)
class Transform2:
    """Affine map of the plane: (x, y) -> (a x + b y + e, c x + d y + f)."""

    a: object
    b: object
    c: object
    d: object
    e: object
    f: object

    @classmethod
    def identity(cls):
        return cls(ONE, ZERO, ZERO, ONE, ZERO, ZERO)

    @classmethod
    def translation(cls, tx, ty):
        return cls(ONE, ZERO, ZERO, ONE, tx, ty)

    def apply(self, p):
        x, y = p
        return (self.a * x + self.b * y + self.e, self.c * x + self.d * y + self.f)

    def linear(self, v):
        x, y = v
        return (self.a * x + self.b * y, self.c * x + self.d * y)

    def det(self):
        return self.a * self.d - self.b * self.c

    def inverse(self):
        det = self.det()
        if det == 0:
            raise ValueError("singular transform")
        ia = self.d / det
        ib = -self.b / det
        ic = -self.c / det
        id_ = self.a / det
        return Transform2(
            ia, ib, ic, id_, -(ia * self.e + ib * self.f), -(ic * self.e + id_ * self.f)
        )

    def compose(self, other):
        """self after other: (self.compose(other)).apply(p) == self.apply(other.apply(p))."""
        return Transform2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
            self.a * other.e + self.b * other.f + self.e,
            self.c * other.e + self.d * other.f + self.f,
        )


# ---------------------------------------------------------------------------
# normal pushoff of a closed chain in unit-square charts

# Each chart is the closed unit square; an edge name gives the supporting
# line of the chart boundary through which a wrap link exits.
_EDGE_AXIS = {"E": (0, ONE), "W": (0, ZERO), "N": (1, ONE), "S": (1, ZERO)}


@dataclass(frozen=True)
class ChainPiece:
    """Straight sub-segment of a closed curve within one chart."""

    chart: object
    start: tuple
    end: tuple


@dataclass(frozen=True)
class ChainLink:
    """Joint between consecutive chain pieces.

    kind 'corner': both pieces share an endpoint in one chart.
    kind 'wrap': the first piece ends on the chart boundary edge
    ``out_edge`` and continues in the next chart under ``transform``;
    ``sign`` is 1 when the transform reverses orientation.
    """

    kind: str
    transform: Optional[Transform2] = None
    sign: int = 0
    out_edge: Optional[str] = None


@dataclass(frozen=True)
class ClosedChain:
    """Closed curve as pieces joined cyclically; links[i] joins piece i to i+1."""

    pieces: tuple
    links: tuple


@dataclass(frozen=True)
class PushoffResult:
    """Offset copy of a chain: pieces, plus a closing jump when one-sided."""

    pieces: tuple
    reconnected: bool
    jump: Optional[ChainPiece]


class PushoffCollision(Exception):
    """The offset curve failed validation at this epsilon; retry smaller."""


def _strictly_inside(p):
    return ZERO < p[0] < ONE and ZERO < p[1] < ONE


def _offset_vector(piece, side_mult, epsilon):
    d = vsub(piece.end, piece.start)
    norm = l1norm(d)
    if norm == 0:
        raise PushoffCollision("pushoff-collision: zero-length piece")
    return vscale(side_mult * epsilon / norm, perp_left(d))


def _miter(prev_piece, prev_off, next_piece, next_off):
    """Intersection of the two offset supporting lines at a corner."""
    d1 = vsub(prev_piece.end, prev_piece.start)
    d2 = vsub(next_piece.end, next_piece.start)
    a1 = vadd(prev_piece.start, prev_off)
    a2 = vadd(next_piece.start, next_off)
    den = cross2(d1, d2)
    if den == 0:
        if vdot(d1, d2) < 0:
            raise PushoffCollision("pushoff-collision: hairpin corner")
        return vadd(prev_piece.end, prev_off)  # collinear continuation
    t = cross2(vsub(a2, a1), d2) / den
    return vadd(a1, vscale(t, d1))


def _edge_crossing(piece, off, link):
    """Exit point of an offset line through the link's boundary edge."""
    axis, value = _EDGE_AXIS[link.out_edge]
    d = vsub(piece.end, piece.start)
    if d[axis] == 0:
        raise PushoffCollision("pushoff-collision: offset parallel to exit edge")
    a = vadd(piece.start, off)
    t = (value - a[axis]) / d[axis]
    z = vadd(a, vscale(t, d))
    other = z[1 - axis]
    if not (ZERO < other < ONE):
        raise PushoffCollision("pushoff-collision: exit point left the open edge")
    return z


def _chain_side_product(chain):
    mult = 1
    for link in chain.links:
        if link.kind == "wrap" and link.sign:
            mult = -mult
    return mult


def _validate_chain(chain):
    n = len(chain.pieces)
    if n != len(chain.links):
        raise ValueError("chain needs one link per piece")
    if n == 0:
        raise ValueError("empty chain")
    for i, link in enumerate(chain.links):
        cur = chain.pieces[i]
        nxt = chain.pieces[(i + 1) % n]
        if link.kind == "corner":
            if cur.chart != nxt.chart or cur.end != nxt.start:
                raise ValueError(f"chain discontinuity at corner link {i}")
        elif link.kind == "wrap":
            axis, value = _EDGE_AXIS[link.out_edge]
            if cur.end[axis] != value:
                raise ValueError(f"wrap link {i} does not end on edge {link.out_edge}")
            if link.transform.apply(cur.end) != nxt.start:
                raise ValueError(f"chain discontinuity at wrap link {i}")
        else:
            raise ValueError(f"unknown link kind {link.kind!r}")


def _offset_run(pieces, links, side_mults, epsilon):
    """Offset an open run of pieces; returns offset pieces (ends unresolved).

    ``links`` has one entry per adjacent pair.  The first offset piece
    starts at start+off and the last ends at end+off; interior joints are
    mitered or wrapped.
    """
    offs = [_offset_vector(p, m, epsilon) for p, m in zip(pieces, side_mults)]
    starts = [None] * len(pieces)
    ends = [None] * len(pieces)
    starts[0] = vadd(pieces[0].start, offs[0])
    ends[-1] = vadd(pieces[-1].end, offs[-1])
    for i, link in enumerate(links):
        if link.kind == "corner":
            m = _miter(pieces[i], offs[i], pieces[i + 1], offs[i + 1])
            if not _strictly_inside(m):
                raise PushoffCollision("pushoff-collision: miter left the chart")
            ends[i] = m
            starts[i + 1] = m
        else:
            z = _edge_crossing(pieces[i], offs[i], link)
            ends[i] = z
            starts[i + 1] = link.transform.apply(z)
    out = []
    for piece, s, e in zip(pieces, starts, ends):
        d = vsub(piece.end, piece.start)
        if vdot(vsub(e, s), d) <= 0:
            raise PushoffCollision("pushoff-collision: offset piece reversed")
        out.append(ChainPiece(piece.chart, s, e))
    return out


def pushoff_polyline(chain, side="left", epsilon=None, min_sep_sq=None):
    """Push a closed chain off itself by ``epsilon`` on the given side.

    The offset of each piece is epsilon times the L1-normalized left (or
    right) perpendicular of its direction, with the side flipping across
    orientation-reversing wrap links.  When the side flips an odd number
    of times around the chain the curve is one-sided: the result is an
    open offset arc anchored at the midpoint of the longest piece plus a
    closing ``jump`` across the curve at the anchor.

    Shrinking the offset linearly to zero keeps every construction step
    valid, so the result is always freely homotopic -- in particular
    homologous -- to the input chain.  A self-crossing chain's offset
    necessarily crosses the chain near each double point; such crossings
    are legitimate and are NOT rejected here.  Callers that intersect the
    offset with other curves must check transversality of those contacts
    themselves.

    Raises :class:`PushoffCollision` whenever a construction step fails
    at this epsilon (a smaller epsilon eventually succeeds on curves in
    general position).
    """
    if epsilon is None or epsilon <= 0:
        raise ValueError("epsilon must be a positive rational")
    if min_sep_sq is not None and not (3 * epsilon < min_sep_sq):
        raise ValueError("pushoff epsilon too large for the separation bound")
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    _validate_chain(chain)
    base = ONE if side == "left" else -ONE
    n = len(chain.pieces)
    reconnected = _chain_side_product(chain) < 0

    if not reconnected:
        mults = []
        m = base
        for i in range(n):
            mults.append(m)
            link = chain.links[i]
            if link.kind == "wrap" and link.sign:
                m = -m
        # resolve the closing link by rotating the run so it becomes interior
        pieces = list(chain.pieces) + [chain.pieces[0]]
        links = list(chain.links)
        mults = mults + [mults[0]]
        run = _offset_run(pieces, links, mults, epsilon)
        closed = run[:-1]
        closed[0] = ChainPiece(closed[0].chart, run[-1].start, closed[0].end)
        return PushoffResult(tuple(closed), False, None)

    # one-sided: anchor at the midpoint of the longest piece
    lengths = [l1norm(vsub(p.end, p.start)) for p in chain.pieces]
    k = max(range(n), key=lambda i: (lengths[i], -i))
    anchor = chain.pieces[k]
    w = vscale(rat(1, 2), vadd(anchor.start, anchor.end))
    first = ChainPiece(anchor.chart, w, anchor.end)
    last = ChainPiece(anchor.chart, anchor.start, w)
    pieces = [first] + [chain.pieces[(k + i) % n] for i in range(1, n)] + [last]
    links = [chain.links[(k + i) % n] for i in range(n)]
    mults = []
    m = base
    for i in range(n + 1):
        mults.append(m)
        if i < n:
            link = links[i]
            if link.kind == "wrap" and link.sign:
                m = -m
    run = _offset_run(pieces, links, mults, epsilon)
    jump = ChainPiece(anchor.chart, run[-1].end, run[0].start)
    return PushoffResult(tuple(run), True, jump)


__all__ = [
    "vsub",
    "vadd",
    "vscale",
    "vdot",
    "cross2",
    "cross3",
    "dist2",
    "perp_left",
    "l1norm",
    "DEGENERATE",
    "SegmentHit",
    "seg_intersect",
    "min_separation",
    "dist2_point_seg",
    "tri_normal",
    "coplanar_tri_relation",
    "TriTriHit",
    "tri_tri_intersect",
    "segment_triangle_hit",
    "Transform2",
    "ChainPiece",
    "ChainLink",
    "ClosedChain",
    "PushoffResult",
    "PushoffCollision",
    "pushoff_polyline",
]
