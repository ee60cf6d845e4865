"""Immersed multicurves on square complexes.

A component is entered as a cyclic list of points.  A point inside the
closed unit square is a vertex of the polygonal curve in the current
square.  A point strictly outside the square means the segment from the
previous vertex leaves the square: it must cross exactly one glued edge,
and the point's image under the gluing becomes the next vertex, in the
glued square.  A component closes up either with an explicit final wrap
landing on the first vertex, by repeating the first vertex, or with an
implicit straight closing segment.

Vertices are expected strictly inside squares and all crossings must be
generic; `certify` reports every violation by name instead of guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .rational import rat, ZERO, ONE, format_rational
from .exactgeom import (
    DEGENERATE,
    ChainLink,
    ChainPiece,
    ClosedChain,
    PushoffCollision,
    dist2_point_seg,
    pushoff_polyline,
    seg_intersect,
    vadd,
    vdot,
    vscale,
    vsub,
)
from .surface2d import SquareComplex


class CurveBuildError(Exception):
    """The raw point list does not describe a curve on this complex."""


class GeneralPositionError(Exception):
    """The configuration has certified violations; results are undefined."""


@dataclass(frozen=True)
class Crossing:
    """A segment's passage through a glued edge."""

    edge: str
    t: object  # parameter along the segment, in [0, 1)
    exit_point: tuple
    entry_square: int
    entry_point: tuple
    sign: int


@dataclass(frozen=True)
class Piece:
    """Maximal straight run of one segment within a single square."""

    square: int
    p0: tuple
    p1: tuple
    seg: int
    t0: object
    t1: object


@dataclass(frozen=True)
class Component:
    """A closed immersed curve: vertices, per-segment crossings, pieces.

    ``vertices[i]`` is (square, point); segment i runs from vertex i to
    vertex i+1 (mod n); ``crossings[i]`` is the segment's edge crossing or
    None; ``pieces`` lists each segment's one or two chart pieces in order.
    """

    vertices: tuple
    crossings: tuple
    pieces: tuple

    def two_sidedness(self) -> int:
        """1 when a neighborhood of the curve is a Moebius band."""
        bit = 0
        for c in self.crossings:
            if c is not None:
                bit ^= c.sign
        return bit


def _in_closed_square(p) -> bool:
    return 0 <= p[0] <= 1 and 0 <= p[1] <= 1


_EXITS = (("E", 0, ONE, 1), ("W", 0, ZERO, -1), ("N", 1, ONE, 1), ("S", 1, ZERO, -1))


def _resolve_wrap(cx: SquareComplex, square: int, v, q):
    """First crossing of segment v->q out of the closed unit square."""
    d = vsub(q, v)
    best = None
    for edge, axis, value, direction in _EXITS:
        if direction * d[axis] <= 0:
            continue
        t = (value - v[axis]) / d[axis]
        if 0 <= t <= 1 and (best is None or t < best[0]):
            best = (t, edge, axis, value)
    if best is None:
        raise CurveBuildError("segment endpoint is outside its square but never exits")
    t, edge, axis, value = best
    z = vadd(v, vscale(t, d))
    if not (0 < z[1 - axis] < 1):
        raise CurveBuildError(
            f"corner-crossing: segment exits square {square} through a corner"
        )
    other_sq, _, _, transform, sign = cx.glued(square, edge)
    return (
        Crossing(edge, t, z, other_sq, transform.apply(z), sign),
        other_sq,
        transform.apply(q),
    )


def _build_component(cx: SquareComplex, raw) -> Component:
    entries = [(sq, (rat(p[0]), rat(p[1]))) for sq, p in raw]
    if not entries:
        raise CurveBuildError("empty component")
    sq0, p0 = entries[0]
    if not _in_closed_square(p0):
        raise CurveBuildError("first point of a component must lie inside its square")
    vertices = [(sq0, p0)]
    crossings_by_seg = {}
    cur_sq = sq0
    for sq, q in entries[1:]:
        if sq != cur_sq:
            raise CurveBuildError(
                f"point is tagged with square {sq} but the curve is in square {cur_sq}"
            )
        v = vertices[-1][1]
        if _in_closed_square(q):
            vertices.append((cur_sq, q))
            continue
        crossing, new_sq, q_img = _resolve_wrap(cx, cur_sq, v, q)
        if not _in_closed_square(q_img):
            raise CurveBuildError("segment crosses more than one gluing")
        crossings_by_seg[len(vertices) - 1] = crossing
        vertices.append((new_sq, q_img))
        cur_sq = new_sq
    # closure: a final point that reproduces the first vertex is dropped (its
    # segment, wrapped or not, becomes the closing segment); otherwise an
    # implicit straight closing segment is added in the starting square
    if len(vertices) > 1 and vertices[-1] == vertices[0]:
        vertices.pop()
    elif cur_sq != sq0:
        raise CurveBuildError(
            f"component ends in square {cur_sq} but began in square {sq0}"
        )
    n = len(vertices)
    pieces = []
    crossings = []
    for i in range(n):
        sq_i, vi = vertices[i]
        sq_j, vj = vertices[(i + 1) % n]
        crossing = crossings_by_seg.get(i)
        crossings.append(crossing)
        if crossing is None:
            if sq_j != sq_i:
                raise CurveBuildError("segment endpoints lie in different squares")
            pieces.append(Piece(sq_i, vi, vj, i, ZERO, ONE))
        else:
            pieces.append(Piece(sq_i, vi, crossing.exit_point, i, ZERO, crossing.t))
            pieces.append(
                Piece(crossing.entry_square, crossing.entry_point, vj, i, crossing.t, ONE)
            )
    return Component(tuple(vertices), tuple(crossings), tuple(pieces))


@dataclass(frozen=True)
class DoublePoint:
    """A transverse self-intersection of the multicurve.

    ``branches`` holds the two preimage parameters as (component, segment,
    t) triples in ascending order.
    """

    square: int
    point: tuple
    branches: tuple


@dataclass(frozen=True)
class GeneralPositionCert2:
    ok: bool
    violations: tuple  # (name, detail) pairs
    min_sep_sq: Optional[object]
    double_points: tuple

    @property
    def violation_names(self):
        return tuple(v[0] for v in self.violations)


class MultiCurve:
    """An immersed multicurve on a square complex."""

    def __init__(self, complex_: SquareComplex, components):
        self.complex = complex_
        self.components = tuple(components)
        self._cert = None

    @classmethod
    def build(cls, complex_: SquareComplex, raw_components):
        report = complex_.validate()
        if not report.ok:
            raise CurveBuildError(f"invalid complex: {report.violations}")
        return cls(complex_, [_build_component(complex_, raw) for raw in raw_components])

    def union(self, other: "MultiCurve") -> "MultiCurve":
        if self.complex != other.complex:
            raise ValueError("curves live on different complexes")
        return MultiCurve(self.complex, self.components + other.components)

    def pieces_by_square(self):
        table = {}
        for ci, comp in enumerate(self.components):
            for pi, piece in enumerate(comp.pieces):
                table.setdefault(piece.square, []).append((ci, pi, piece))
        return table

    def certify(self) -> GeneralPositionCert2:
        if self._cert is None:
            self._cert = _certify(self)
        return self._cert


def _fmt_point(p):
    return "(" + ", ".join(format_rational(c) for c in p) + ")"


def _adjacent(comp: Component, pa: Piece, pb: Piece) -> bool:
    """Do these pieces of one component meet at a shared curve vertex?"""
    n = len(comp.vertices)
    for first, second in ((pa, pb), (pb, pa)):
        if (first.seg + 1) % n == second.seg and first.t1 == 1 and second.t0 == 0:
            return True
    return False


def degeneracy_scale_sq(segments):
    """Squared distance of a segment family from its nearest degeneracy.

    Pairs sharing an endpoint are skipped.  A pair that crosses
    transversally contributes the smallest distance from either segment's
    endpoints to the other segment (how far the crossing is from becoming
    an endpoint contact); any other pair contributes its plain distance.
    Returns None when every pair shares an endpoint; returns 0 exactly for
    non-generic contact.
    """
    best = None
    for i in range(len(segments)):
        a = segments[i]
        for j in range(i + 1, len(segments)):
            b = segments[j]
            if set(a) & set(b):
                continue
            res = seg_intersect(a, b)
            if res is DEGENERATE:
                d = ZERO
            else:
                d = min(
                    dist2_point_seg(a[0], b),
                    dist2_point_seg(a[1], b),
                    dist2_point_seg(b[0], a),
                    dist2_point_seg(b[1], a),
                )
            if best is None or d < best:
                best = d
                if best == 0:
                    return best
    return best


def _interval_overlap_positive(a, b):
    """Do collinear segments a and b share more than a point?"""
    d = vsub(a[1], a[0])
    if d == (ZERO, ZERO):
        d = vsub(b[1], b[0])
        if d == (ZERO, ZERO):
            return False
    pa = sorted((vdot(a[0], d), vdot(a[1], d)))
    pb = sorted((vdot(b[0], d), vdot(b[1], d)))
    return min(pa[1], pb[1]) > max(pa[0], pb[0])


def _certify(curve: MultiCurve) -> GeneralPositionCert2:
    violations = []
    for ci, comp in enumerate(curve.components):
        for si, (sq, v) in enumerate(comp.vertices):
            if v[0] in (ZERO, ONE) or v[1] in (ZERO, ONE):
                violations.append(
                    ("vertex-on-edge", f"component {ci} vertex {si} at {_fmt_point(v)}")
                )
        for pi, piece in enumerate(comp.pieces):
            if piece.p0 == piece.p1:
                violations.append(
                    ("zero-length-segment", f"component {ci} segment {piece.seg}")
                )

    table = curve.pieces_by_square()
    hits = {}  # (square, point) -> list of ((comp, seg, t_global), ...)
    for square in sorted(table):
        entries = table[square]
        for x in range(len(entries)):
            ca, ia, pa = entries[x]
            for y in range(x + 1, len(entries)):
                cb, ib, pb = entries[y]
                same_comp = ca == cb
                if same_comp and ia == ib:
                    continue
                adjacent = same_comp and _adjacent(curve.components[ca], pa, pb)
                res = seg_intersect((pa.p0, pa.p1), (pb.p0, pb.p1))
                if res is None:
                    continue
                where = (
                    f"component {ca} segment {pa.seg} vs "
                    f"component {cb} segment {pb.seg} in square {square}"
                )
                if adjacent:
                    if res is DEGENERATE:
                        if _interval_overlap_positive((pa.p0, pa.p1), (pb.p0, pb.p1)):
                            violations.append(("degenerate-overlap", where))
                        continue  # collinear continuation through the vertex
                    shared = pa.p1 if pa.p1 in (pb.p0, pb.p1) else pa.p0
                    if res.point != shared:
                        violations.append(("tangency", where))
                    continue
                if res is DEGENERATE:
                    violations.append(("degenerate-overlap", where))
                    continue
                if 0 < res.ta < 1 and 0 < res.tb < 1:
                    key = (square, res.point)
                    ga = (ca, pa.seg, pa.t0 + res.ta * (pa.t1 - pa.t0))
                    gb = (cb, pb.seg, pb.t0 + res.tb * (pb.t1 - pb.t0))
                    hits.setdefault(key, []).append(tuple(sorted((ga, gb))))
                else:
                    violations.append(("tangency", where))

    doubles = []
    for (square, point) in sorted(hits):
        pairs = hits[(square, point)]
        if len(pairs) > 1:
            violations.append(
                ("triple-point", f"{len(pairs)} branch pairs meet at {_fmt_point(point)} in square {square}")
            )
            continue
        doubles.append(DoublePoint(square, point, pairs[0]))

    min_sep_sq = None
    if not violations:
        seps = []
        for square, entries in table.items():
            feats = [(p.p0, p.p1) for _, _, p in entries]
            s = degeneracy_scale_sq(feats)
            if s is not None:
                seps.append(s)
        if seps:
            min_sep_sq = min(seps)
    return GeneralPositionCert2(
        ok=not violations,
        violations=tuple(violations),
        min_sep_sq=min_sep_sq,
        double_points=tuple(doubles) if not violations else (),
    )


def require_general_position(curve: MultiCurve) -> GeneralPositionCert2:
    cert = curve.certify()
    if not cert.ok:
        raise GeneralPositionError(
            "configuration is not in general position: "
            + ", ".join(f"{n} ({d})" for n, d in cert.violations)
        )
    return cert


def double_points(curve: MultiCurve):
    """Transverse self-intersection points, sorted by (square, x, y)."""
    return require_general_position(curve).double_points


def ordered_preimages(curve: MultiCurve):
    """Both orderings of each double point's branch pair (closed under swap)."""
    out = []
    for dp in double_points(curve):
        b0, b1 = dp.branches
        out.append((dp, (b0, b1)))
        out.append((dp, (b1, b0)))
    return tuple(out)


def component_chain(curve: MultiCurve, comp_idx: int) -> ClosedChain:
    """The component as a closed chain of chart pieces for pushoffs."""
    comp = curve.components[comp_idx]
    pieces = []
    links = []
    by_seg = {}
    for p in comp.pieces:
        by_seg.setdefault(p.seg, []).append(p)
    for seg in range(len(comp.vertices)):
        crossing = comp.crossings[seg]
        seg_pieces = by_seg[seg]
        if crossing is None:
            (a,) = seg_pieces
            pieces.append(ChainPiece(a.square, a.p0, a.p1))
        else:
            a, b = seg_pieces
            _, _, _, transform, sign = curve.complex.glued(a.square, crossing.edge)
            pieces.append(ChainPiece(a.square, a.p0, a.p1))
            links.append(
                ChainLink("wrap", transform=transform, sign=sign, out_edge=crossing.edge)
            )
            pieces.append(ChainPiece(b.square, b.p0, b.p1))
        links.append(ChainLink("corner"))
    return ClosedChain(tuple(pieces), tuple(links))


def initial_epsilon(msq) -> object:
    """Starting offset scale below the separation bound (or a default)."""
    if msq is None or msq <= 0:
        return rat(1, 16)
    return min(rat(msq), ONE) / 4


def pushoff_all(curve: MultiCurve, epsilon, side="left"):
    """Offset copies of every component at one epsilon.

    Returns a list of (square, start, end) offset pieces including the
    reconnection jumps of one-sided components.  Raises
    :class:`PushoffCollision` when any component fails at this epsilon.
    """
    out = []
    for ci in range(len(curve.components)):
        res = pushoff_polyline(component_chain(curve, ci), side=side, epsilon=epsilon)
        out.extend(res.pieces)
        if res.jump is not None:
            out.append(res.jump)
    return out


def pairing_mod2(curve_a: MultiCurve, comp_a: int, curve_b: MultiCurve, retry_budget: int = 16) -> int:
    """Mod-2 intersection number of one component of ``curve_a`` with the
    whole multicurve ``curve_b``, via a small normal pushoff of ``curve_b``.

    Every contact between the component and the pushoff must be a strict
    transverse interior crossing; otherwise the offset is halved and the
    count retried.  The result is the homological pairing regardless of
    how the two original curves touch each other.
    """
    if curve_a.complex != curve_b.complex:
        raise ValueError("curves live on different complexes")
    require_general_position(curve_a)
    cert_b = require_general_position(curve_b)

    feats = {}
    for c in (curve_a, curve_b):
        for square, entries in c.pieces_by_square().items():
            feats.setdefault(square, []).extend((p.p0, p.p1) for _, _, p in entries)
    seps = []
    for square, fs in feats.items():
        s = degeneracy_scale_sq(fs)
        if s is not None:
            seps.append(s)
    msq = min(seps) if seps else cert_b.min_sep_sq
    epsilon = initial_epsilon(msq)

    comp_pieces = [p for p in curve_a.components[comp_a].pieces]
    last_error = None
    for _ in range(retry_budget):
        try:
            offsets = pushoff_all(curve_b, epsilon)
        except PushoffCollision as e:
            last_error = e
            epsilon = epsilon / 2
            continue
        count = 0
        try:
            for piece in comp_pieces:
                for off in offsets:
                    if off.chart != piece.square:
                        continue
                    res = seg_intersect((piece.p0, piece.p1), (off.start, off.end))
                    if res is None:
                        continue
                    if res is DEGENERATE or not (0 < res.ta < 1 and 0 < res.tb < 1):
                        raise PushoffCollision(
                            "pushoff-collision: non-transverse contact while counting"
                        )
                    count += 1
        except PushoffCollision as e:
            last_error = e
            epsilon = epsilon / 2
            continue
        return count % 2
    raise PushoffCollision(
        f"pushoff retry budget exhausted: {last_error}"
    )


# ---------------------------------------------------------------------------
# the r = 1 identity on curves


def mu_count_r1(curve: MultiCurve, comp_idx: int) -> int:
    """Number of ordered double-point preimages whose first branch lies on
    the given component."""
    count = 0
    for dp in double_points(curve):
        for branch in dp.branches:
            if branch[0] == comp_idx:
                count += 1
    return count


def herbert_lhs_r1(curve: MultiCurve, comp_idx: int, retry_budget: int = 16) -> int:
    """Pairing of the double-point class with one component of the curve."""
    return pairing_mod2(curve, comp_idx, curve, retry_budget)


def herbert_rhs_r1_parts(curve: MultiCurve, comp_idx: int):
    """(mu bit, euler bit): preimage count parity and one-sidedness."""
    mu_bit = mu_count_r1(curve, comp_idx) % 2
    euler_bit = curve.components[comp_idx].two_sidedness()
    return mu_bit, euler_bit


def herbert_rhs_r1(curve: MultiCurve, comp_idx: int) -> int:
    mu_bit, euler_bit = herbert_rhs_r1_parts(curve, comp_idx)
    return mu_bit ^ euler_bit


__all__ = [
    "CurveBuildError",
    "GeneralPositionError",
    "Crossing",
    "Piece",
    "Component",
    "DoublePoint",
    "GeneralPositionCert2",
    "MultiCurve",
    "degeneracy_scale_sq",
    "require_general_position",
    "double_points",
    "ordered_preimages",
    "component_chain",
    "initial_epsilon",
    "pushoff_all",
    "pairing_mod2",
    "mu_count_r1",
    "herbert_lhs_r1",
    "herbert_rhs_r1_parts",
    "herbert_rhs_r1",
]
