"""Independent oracles used to cross-check library results.

Everything here is deliberately implemented by a different method than the
library code: segment relations via orientation predicates instead of
parameter solves, triangle membership via barycentric coordinates instead
of edge clipping, homology pairings via closed-form intersection matrices
instead of pushoffs.  Tests compare library output against these.
"""

from fractions import Fraction

from multipoint.rational import rat, ZERO
from multipoint.exactgeom import DEGENERATE, seg_intersect, vsub, vdot, cross2, cross3, dist2


def orient(p, q, r):
    """Sign of the signed area of the 2D triangle pqr."""
    v = cross2(vsub(q, p), vsub(r, p))
    return (v > 0) - (v < 0)


def point_on_segment_2d(p, seg):
    a, b = seg
    if orient(a, b, p) != 0:
        return False
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def seg_relation_oracle(a, b):
    """Classify closed 2D segments by orientation predicates alone.

    Returns one of 'disjoint', 'point' (exactly one common point, either a
    proper crossing or an endpoint touch), 'collinear-point' (single common
    point lying on a shared supporting line), or 'overlap' (a common
    sub-segment of positive length).
    """
    a0, a1 = a
    b0, b1 = b
    d1 = orient(b0, b1, a0)
    d2 = orient(b0, b1, a1)
    d3 = orient(a0, a1, b0)
    d4 = orient(a0, a1, b1)
    if d1 == d2 == d3 == d4 == 0:
        # collinear (or one segment is a point on the other's line)
        axis = 0 if max(a0[0], a1[0], b0[0], b1[0]) != min(a0[0], a1[0], b0[0], b1[0]) else 1
        lo_a, hi_a = sorted((a0[axis], a1[axis]))
        lo_b, hi_b = sorted((b0[axis], b1[axis]))
        lo, hi = max(lo_a, lo_b), min(hi_a, hi_b)
        if lo > hi:
            return "disjoint"
        if lo == hi:
            return "collinear-point"
        return "overlap"
    if d1 * d2 < 0 and d3 * d4 < 0:
        return "point"
    for p, seg in ((a0, b), (a1, b), (b0, a), (b1, a)):
        if point_on_segment_2d(p, seg):
            return "point"
    return "disjoint"


def barycentric(x, tri):
    """Solve x = v0 + s (v1 - v0) + t (v2 - v0) for a point in the triangle plane.

    Returns (s, t) or None when x is off the plane.  Works in 2D and 3D.
    """
    v0, v1, v2 = tri
    u = vsub(v1, v0)
    v = vsub(v2, v0)
    w = vsub(x, v0)
    uu, uv, vv = vdot(u, u), vdot(u, v), vdot(v, v)
    wu, wv = vdot(w, u), vdot(w, v)
    den = uu * vv - uv * uv
    if den == 0:
        raise ValueError("degenerate triangle")
    s = (wu * vv - wv * uv) / den
    t = (wv * uu - wu * uv) / den
    # confirm x really is in the plane (exact reconstruction)
    recon = tuple(v0[k] + s * u[k] + t * v[k] for k in range(len(v0)))
    if recon != tuple(x):
        return None
    return s, t


def point_in_triangle(x, tri, strict=False):
    """Barycentric membership test, closed by default."""
    st = barycentric(x, tri)
    if st is None:
        return False
    s, t = st
    if strict:
        return s > 0 and t > 0 and s + t < 1
    return s >= 0 and t >= 0 and s + t <= 1


def on_plane(x, tri):
    n = cross3(vsub(tri[1], tri[0]), vsub(tri[2], tri[0]))
    return vdot(n, vsub(x, tri[0])) == 0


def sample_params(denoms=(1, 2, 3, 4, 5)):
    """All rationals p/q in [0, 1] with q in denoms."""
    vals = set()
    for q in denoms:
        for p in range(q + 1):
            vals.add(Fraction(p, q))
    return sorted(vals)


def feature_points(f, params):
    """Sample points of a point-or-segment feature at the given parameters."""
    if isinstance(f[0], tuple):
        a, b = f
        d = vsub(b, a)
        return [tuple(a[k] + rat(t.numerator, t.denominator) * d[k] for k in range(len(a))) for t in params]
    return [f]


def sampled_min_dist2(features, params=None):
    """Minimum squared distance over sampled point pairs of non-incident features.

    An upper bound for the true minimum separation, tight when the closest
    approach happens at a sampled parameter.
    """
    if params is None:
        params = sample_params()
    endpoint_sets = []
    for f in features:
        if isinstance(f[0], tuple):
            endpoint_sets.append({f[0], f[1]})
        else:
            endpoint_sets.append({f})
    best = None
    for i in range(len(features)):
        for j in range(i + 1, len(features)):
            if endpoint_sets[i] & endpoint_sets[j]:
                continue
            for p in feature_points(features[i], params):
                for q in feature_points(features[j], params):
                    d = dist2(p, q)
                    if best is None or d < best:
                        best = d
    return best


# ---------------------------------------------------------------------------
# homology pairing oracles for the torus and Klein bottle (added to as the
# corresponding modules appear)


def torus_pairing_matrix():
    """Mod-2 intersection matrix of the torus in the (horizontal, vertical) basis."""
    return ((0, 1), (1, 0))


def klein_pairing_matrix():
    """Mod-2 intersection matrix of the Klein bottle.

    Basis: a = the horizontal one-transit loop (orientation-reversing),
    b = the vertical loop.  a.a = 1, a.b = 1, b.b = 0.
    """
    return ((1, 1), (1, 0))


def pair_with_matrix(coords_c, coords_d, matrix):
    total = 0
    for i in range(2):
        for j in range(2):
            total ^= (coords_c[i] & coords_d[j] & matrix[i][j])
    return total


def direct_crossing_parity(curve_a, curve_b):
    """Parity of transverse crossings between two multicurves, counted
    piece by piece with no pushoff.  Returns None when any contact is not
    a strict interior crossing (the caller should pick other
    representatives and retry)."""
    ta = curve_a.pieces_by_square()
    tb = curve_b.pieces_by_square()
    count = 0
    for sq, ea in ta.items():
        for _, _, pa in ea:
            for _, _, pb in tb.get(sq, []):
                res = seg_intersect((pa.p0, pa.p1), (pb.p0, pb.p1))
                if res is None:
                    continue
                if res is DEGENERATE or not (0 < res.ta < 1 and 0 < res.tb < 1):
                    return None
                count += 1
    return count % 2


_PROBE_PARAMS = [rat(3, 7), rat(5, 11), rat(7, 13), rat(9, 17), rat(11, 19), rat(13, 23), rat(15, 29), rat(17, 31)]


def _vertical_loop(cx, c):
    from multipoint.curves2d import MultiCurve

    return MultiCurve.build(cx, [[(0, (c, rat(1, 4))), (0, (c, rat(5, 4)))]])


def _horizontal_loop(cx, c):
    from multipoint.curves2d import MultiCurve

    return MultiCurve.build(cx, [[(0, (rat(1, 4), c)), (0, (rat(5, 4), c))]])


def _klein_transit_loop(cx, x0, eta):
    from multipoint.curves2d import MultiCurve

    start = (x0, rat(1, 2) + eta)
    end = (x0 + 1, rat(1, 2) - eta)
    return MultiCurve.build(cx, [[(0, start), (0, end)]])


def torus_coords(curve, cx):
    """Mod-2 homology coordinates on the torus in the basis (horizontal
    loop, vertical loop), found by counting crossings with probe loops."""
    x1 = x2 = None
    for c in _PROBE_PARAMS:
        if x1 is None:
            x1 = direct_crossing_parity(curve, _vertical_loop(cx, c))
        if x2 is None:
            x2 = direct_crossing_parity(curve, _horizontal_loop(cx, c))
        if x1 is not None and x2 is not None:
            return (x1, x2)
    raise RuntimeError("no probe loop transverse to the curve")


def torus_pairing_oracle(curve_c, curve_d, cx):
    return pair_with_matrix(torus_coords(curve_c, cx), torus_coords(curve_d, cx), ((0, 1), (1, 0)))


def klein_coords(curve, cx):
    """Mod-2 homology coordinates on the Klein bottle in the basis
    (one-sided transit loop a, vertical loop b): (C.b, C.a + C.b)."""
    cb = ca = None
    etas = [rat(1, 19), rat(1, 23), rat(1, 29), rat(1, 31)]
    for i, c in enumerate(_PROBE_PARAMS):
        if cb is None:
            cb = direct_crossing_parity(curve, _vertical_loop(cx, c))
        if ca is None:
            ca = direct_crossing_parity(
                curve, _klein_transit_loop(cx, c, etas[i % len(etas)])
            )
        if cb is not None and ca is not None:
            return (cb, (ca + cb) % 2)
    raise RuntimeError("no probe loop transverse to the curve")


def klein_pairing_oracle(curve_c, curve_d, cx):
    xa, xb = klein_coords(curve_c, cx)
    ya, yb = klein_coords(curve_d, cx)
    return (xa & ya) ^ (xa & yb) ^ (xb & ya)


# --- closed chains in 3-space ---------------------------------------------


def develop_closed_chain(steps):
    """Connect consecutive 3-space segments into one path in the universal
    cover of the 3-torus.

    ``steps`` is a list of (start, end) pairs, each given in its own unit
    translate; consecutive points must agree modulo Z^3.  Returns the list
    of developed points (one more than steps); the first and last differ
    by the integer closure vector.
    """
    from multipoint.rational import rfloor

    dev = [steps[0][0]]
    for (p, q) in steps:
        off = tuple(a - b for a, b in zip(dev[-1], p))
        if any(c != rfloor(c) for c in off):
            raise AssertionError("chain steps do not connect modulo Z^3")
        dev.append(tuple(b + o for b, o in zip(q, off)))
    closure = tuple(a - b for a, b in zip(dev[-1], dev[0]))
    if any(c != rfloor(c) for c in closure):
        raise AssertionError("chain does not close modulo Z^3")
    return dev


def level_crossing_parity_3d(developed, axis):
    """Parity of crossings of a developed closed chain with the family of
    planes {x_axis = c + n}, for a generic probe level c."""
    from multipoint.rational import rfloor

    for c in _PROBE_PARAMS:
        count = 0
        ok = True
        for p, q in zip(developed, developed[1:]):
            lo, hi = sorted((p[axis] - c, q[axis] - c))
            if lo == rfloor(lo) or hi == rfloor(hi):
                ok = False
                break
            count += rfloor(hi) - rfloor(lo)
        if ok:
            return count % 2
    raise RuntimeError("no probe level transverse to the chain")


def _int_cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def plane_torus_is_primitive(u, v):
    """Whether integer vectors u, v span the full lattice of their plane."""
    import math

    n = _int_cross(u, v)
    return math.gcd(math.gcd(abs(n[0]), abs(n[1])), abs(n[2])) == 1


def plane_torus_h2(u, v):
    """Mod-2 homology class of the flat torus spanned by u and v: the
    parity of crossings with an axis line equals the matching component
    of the integer normal vector."""
    n = _int_cross(u, v)
    return tuple(abs(c) % 2 for c in n)
