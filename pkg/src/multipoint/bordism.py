"""Represented intersection classes and the multiple-point operations.

A :class:`RepresentedClass` is a concrete immersion together with its
normal-transport data, tagged by the universe it lives in.  Classes are
never quotiented: disjoint union, internal products, pullbacks, and the
multiple-point operations ``psi_r`` / ``mu_r`` all act on certified
representatives, and the algebraic laws relating them (naturality, the
Cartan formula, the mu-tower) are checked as exact equalities of point and
curve sets.
"""

import itertools
from dataclasses import dataclass

from .curves2d import MultiCurve, double_points, require_general_position
from .exactgeom import (
    DEGENERATE,
    _dominant_axis,
    _project_drop,
    cross3,
    seg_intersect,
    tri_normal,
    vadd,
    vdot,
    vscale,
    vsub,
)
from .rational import rat, rceil, rfloor
from .surfaces3d import (
    Mesh3,
    _segment_bbox,
    mesh_segment_hits,
    require_general_position as require_mesh_general_position,
)

# universe tags
CURVES_IN_SURFACE = "curves-in-surface"
POINTS_IN_SURFACE = "points-in-surface"
SURFACES_IN_3TORUS = "surfaces-in-3-torus"
CURVES_IN_3TORUS = "curves-in-3-torus"
POINTS_IN_3TORUS = "points-in-3-torus"
POINTS_ON_SOURCE_CIRCLES = "points-on-source-circles"
CURVES_ON_SOURCE_MESH = "curves-on-source-mesh"
POINTS_ON_SOURCE_MESH = "points-on-source-mesh"
IDENTITY_UNIVERSE = "identity"
EMPTY_UNIVERSE = "empty"

AMBIENT_T3 = "T3"

GENERICALLY_EMPTY = "generically-empty-guaranteed"

# (class dimension, ambient dimension) per geometric universe
_DIMS = {
    CURVES_IN_SURFACE: (1, 2),
    POINTS_IN_SURFACE: (0, 2),
    SURFACES_IN_3TORUS: (2, 3),
    CURVES_IN_3TORUS: (1, 3),
    POINTS_IN_3TORUS: (0, 3),
}


class TransversalityError(ValueError):
    """Two representatives are not in general position with each other."""


@dataclass(frozen=True, eq=False)
class RepresentedClass:
    """A bordism class held as a concrete certified representative.

    ``payload`` is the geometric data (a :class:`MultiCurve`, a
    :class:`Mesh3`, or a tuple of point/circle records), ``structure`` the
    normal-transport bits carried along with it, and ``note`` an optional
    annotation (set when an operation is guaranteed empty by genericity
    rather than computed).
    """

    universe: str
    ambient: object
    payload: object
    structure: tuple = ()
    note: str = ""

    @property
    def is_empty(self):
        if self.universe == EMPTY_UNIVERSE:
            return True
        if self.universe == IDENTITY_UNIVERSE:
            return False
        p = self.payload
        if isinstance(p, MultiCurve):
            return len(p.components) == 0
        if isinstance(p, Mesh3):
            return False
        return len(p) == 0

    def __repr__(self):
        if self.universe == EMPTY_UNIVERSE:
            return "RepresentedClass(empty)"
        size = ""
        p = self.payload
        if isinstance(p, MultiCurve):
            size = f", {len(p.components)} components"
        elif isinstance(p, Mesh3):
            size = f", {len(p.triangles)} triangles"
        elif isinstance(p, tuple):
            size = f", {len(p)} items"
        return f"RepresentedClass({self.universe}{size})"


@dataclass(frozen=True)
class EvaluationFunctional:
    """A finite table of mod-2 evaluations, one bit per named cycle."""

    entries: tuple  # (name, bit) pairs

    def as_dict(self):
        return dict(self.entries)

    def __getitem__(self, name):
        for n, b in self.entries:
            if n == name:
                return b
        raise KeyError(name)

    @property
    def all_zero(self):
        return all(b == 0 for _, b in self.entries)


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one algebraic-law check on concrete representatives."""

    check: str
    ok: bool
    lhs: tuple
    rhs: tuple
    detail: str = ""


# ---------------------------------------------------------------------------
# constructors


def class_of_curve(curve):
    """Wrap a certified multicurve on a square complex."""
    require_general_position(curve)
    structure = tuple(c.two_sidedness() for c in curve.components)
    return RepresentedClass(CURVES_IN_SURFACE, curve.complex, curve, structure)


def curve_class(complex_, raw_components):
    return class_of_curve(MultiCurve.build(complex_, raw_components))


def class_of_mesh(mesh):
    """Wrap a certified closed triangulated surface in the 3-torus."""
    require_mesh_general_position(mesh)
    return RepresentedClass(SURFACES_IN_3TORUS, AMBIENT_T3, mesh)


def mesh_class(triangles):
    return class_of_mesh(Mesh3(triangles))


def empty_class(ambient=None, note=""):
    return RepresentedClass(EMPTY_UNIVERSE, ambient, (), (), note)


def identity_class(ambient=None):
    """The unit of the internal product (the identity immersion's class)."""
    return RepresentedClass(IDENTITY_UNIVERSE, ambient, ())


# ---------------------------------------------------------------------------
# exact contact test for closed polylines in the 3-torus


def _segments_touch_3d(p, q, r, s):
    """Whether the closed 3-space segments [p,q] and [r,s] share a point."""
    d1, d2 = vsub(q, p), vsub(s, r)
    w = vsub(r, p)
    n = cross3(d1, d2)
    if n == (rat(0), rat(0), rat(0)):
        if cross3(w, d1) != (rat(0), rat(0), rat(0)):
            return False
        den = vdot(d1, d1)
        t0 = vdot(w, d1) / den
        t1 = vdot(vsub(s, p), d1) / den
        lo, hi = (t0, t1) if t0 <= t1 else (t1, t0)
        return not (hi < 0 or lo > 1)
    if vdot(w, n) != 0:
        return False
    den = vdot(n, n)
    t = vdot(cross3(w, d2), n) / den
    u = vdot(cross3(w, d1), n) / den
    if not (0 <= t <= 1 and 0 <= u <= 1):
        return False
    return vadd(p, vscale(t, d1)) == vadd(r, vscale(u, d2))


def _circle_segments_disjoint(circ_a, circ_b):
    """Whether two canonical circles in the 3-torus avoid each other."""
    for (p, q) in circ_a:
        pmin, pmax = _segment_bbox(p, q)
        for (r, s) in circ_b:
            rmin, rmax = _segment_bbox(r, s)
            ranges = []
            empty = False
            for k in range(3):
                lo = rceil(pmin[k] - rmax[k])
                hi = rfloor(pmax[k] - rmin[k])
                if lo > hi:
                    empty = True
                    break
                ranges.append(range(lo, hi + 1))
            if empty:
                continue
            for v in itertools.product(*ranges):
                rs = tuple(c + d for c, d in zip(r, v))
                ss = tuple(c + d for c, d in zip(s, v))
                if _segments_touch_3d(p, q, rs, ss):
                    return False
    return True


# ---------------------------------------------------------------------------
# monoid structure


def _require_compatible(a, b):
    if a.universe != b.universe:
        raise ValueError(
            f"cannot combine universes {a.universe!r} and {b.universe!r}"
        )
    if a.ambient != b.ambient:
        raise ValueError("classes live over different ambients")


def add(a, b):
    """Disjoint union of representatives (the monoid sum of classes)."""
    if a.is_empty:
        return b
    if b.is_empty:
        return a
    _require_compatible(a, b)
    if a.universe == CURVES_IN_SURFACE:
        return class_of_curve(a.payload.union(b.payload))
    if a.universe == SURFACES_IN_3TORUS:
        return class_of_mesh(Mesh3(a.payload.triangles + b.payload.triangles))
    if a.universe in (
        POINTS_IN_SURFACE,
        POINTS_IN_3TORUS,
        POINTS_ON_SOURCE_CIRCLES,
        POINTS_ON_SOURCE_MESH,
    ):
        merged = a.payload + b.payload
        if len(set(merged)) != len(merged):
            raise TransversalityError("point sets are not disjoint")
        return RepresentedClass(
            a.universe,
            a.ambient,
            tuple(sorted(merged)),
            a.structure + b.structure,
        )
    if a.universe == CURVES_IN_3TORUS:
        for ca in a.payload:
            for cb in b.payload:
                if not _circle_segments_disjoint(ca[0], cb[0]):
                    raise TransversalityError("circles in the 3-torus touch")
        return RepresentedClass(
            a.universe,
            a.ambient,
            tuple(sorted(a.payload + b.payload)),
            a.structure + b.structure,
        )
    raise ValueError(f"add not defined on universe {a.universe!r}")


# ---------------------------------------------------------------------------
# internal product


def _mixed_double_points(curve, n_first):
    """Double points of a union multicurve split by component origin.

    Returns (first-only, second-only, mixed) tuples of
    ``(square, point, branches)`` with branches sorted.
    """
    first, second, mixed = [], [], []
    for dp in double_points(curve):
        sides = {branch[0] < n_first for branch in dp.branches}
        entry = (dp.square, dp.point, dp.branches)
        if sides == {True}:
            first.append(entry)
        elif sides == {False}:
            second.append(entry)
        else:
            mixed.append(entry)
    return tuple(first), tuple(second), tuple(mixed)


def _circle_record(dc):
    """A mesh-independent record of one double circle in the 3-torus."""
    return (tuple(sorted(dc.canonical)), dc.h1)


def _curve_sides(dc, n_first):
    """Which source sides (f/g triangles) a union double curve touches."""
    sides = set()
    for pc in dc.preimages:
        for (tri, _, _) in pc.arcs:
            sides.add(tri < n_first)
    return sides


def _split_double_curves(mesh, n_first):
    first, second, mixed = [], [], []
    for dc in mesh.double_curves():
        sides = _curve_sides(dc, n_first)
        if sides == {True}:
            first.append(dc)
        elif sides == {False}:
            second.append(dc)
        else:
            mixed.append(dc)
    return first, second, mixed


def _split_triple_points(mesh, n_first):
    """Union triple points keyed by how many preimages sit on the first part."""
    buckets = {0: [], 1: [], 2: [], 3: []}
    for tp in mesh.triple_points().points:
        k = sum(1 for (tri, _) in tp.preimages if tri < n_first)
        buckets[k].append(tp)
    return buckets


def _product_points_curves(a, b):
    union = a.payload.union(b.payload)
    require_general_position(union)
    _, _, mixed = _mixed_double_points(union, len(a.payload.components))
    n_first = len(a.payload.components)
    points = []
    structure = []
    for square, point, branches in mixed:
        points.append((square, point))
        bits = []
        for comp, _, _ in branches:
            src = a if comp < n_first else b
            idx = comp if comp < n_first else comp - n_first
            bits.append(src.structure[idx])
        structure.append(tuple(sorted(bits)))
    order = sorted(range(len(points)), key=lambda i: points[i])
    return RepresentedClass(
        POINTS_IN_SURFACE,
        a.ambient,
        tuple(points[i] for i in order),
        tuple(structure[i] for i in order),
    )


def _product_curves_meshes(a, b):
    union = Mesh3(a.payload.triangles + b.payload.triangles)
    require_mesh_general_position(union)
    _, _, mixed = _split_double_curves(union, len(a.payload.triangles))
    records = []
    structure = []
    for dc in mixed:
        records.append(_circle_record(dc))
        structure.append(tuple(sorted(pc.w1 for pc in dc.preimages)))
    order = sorted(range(len(records)), key=lambda i: records[i])
    return RepresentedClass(
        CURVES_IN_3TORUS,
        AMBIENT_T3,
        tuple(records[i] for i in order),
        tuple(structure[i] for i in order),
    )


def _product_circles_mesh(circles, mesh_cls):
    segs = [seg for (canonical, _) in circles.payload for seg in canonical]
    hits = mesh_segment_hits(mesh_cls.payload, segs)
    points = set()
    for tri, point in hits:
        points.add(tuple(c - rat(int(c // 1)) for c in point))
    return RepresentedClass(
        POINTS_IN_3TORUS, AMBIENT_T3, tuple(sorted(points))
    )


def internal_product(a, b):
    """Transverse intersection of two classes over the same ambient."""
    if a.universe == IDENTITY_UNIVERSE:
        return b
    if b.universe == IDENTITY_UNIVERSE:
        return a
    if a.is_empty or b.is_empty:
        return empty_class(a.ambient if not a.is_empty else b.ambient)
    _dims_a = _DIMS.get(a.universe)
    _dims_b = _DIMS.get(b.universe)
    if _dims_a is None or _dims_b is None:
        raise ValueError(
            f"internal product undefined on {a.universe!r} x {b.universe!r}"
        )
    if _dims_a[1] != _dims_b[1]:
        raise ValueError("classes live in ambients of different dimension")
    if a.ambient != b.ambient:
        raise ValueError("classes live over different ambients")
    if _dims_a[0] + _dims_b[0] - _dims_a[1] < 0:
        return empty_class(a.ambient, note=GENERICALLY_EMPTY)
    pair = (a.universe, b.universe)
    if pair == (CURVES_IN_SURFACE, CURVES_IN_SURFACE):
        return _product_points_curves(a, b)
    if pair == (SURFACES_IN_3TORUS, SURFACES_IN_3TORUS):
        return _product_curves_meshes(a, b)
    if pair == (CURVES_IN_3TORUS, SURFACES_IN_3TORUS):
        return _product_circles_mesh(a, b)
    if pair == (SURFACES_IN_3TORUS, CURVES_IN_3TORUS):
        return _product_circles_mesh(b, a)
    raise ValueError(
        f"internal product undefined on {a.universe!r} x {b.universe!r}"
    )


# ---------------------------------------------------------------------------
# pullback along a transverse map


def pullback_class(g, f):
    """The fiber product of f along g, immersed in g's source."""
    if f.universe == IDENTITY_UNIVERSE or g.universe == IDENTITY_UNIVERSE:
        raise ValueError("pullback needs two geometric representatives")
    if f.is_empty:
        return empty_class(g.payload)
    if g.is_empty:
        raise ValueError("cannot pull back along the empty class")
    pair = (g.universe, f.universe)
    if pair == (CURVES_IN_SURFACE, CURVES_IN_SURFACE):
        if g.ambient != f.ambient:
            raise ValueError("classes live over different ambients")
        union = g.payload.union(f.payload)
        require_general_position(union)
        _, _, mixed = _mixed_double_points(union, len(g.payload.components))
        n_first = len(g.payload.components)
        params = []
        structure = []
        for _, _, branches in mixed:
            g_branch = next(b for b in branches if b[0] < n_first)
            f_branch = next(b for b in branches if b[0] >= n_first)
            params.append(g_branch)
            structure.append(f.structure[f_branch[0] - n_first])
        order = sorted(range(len(params)), key=lambda i: params[i])
        return RepresentedClass(
            POINTS_ON_SOURCE_CIRCLES,
            g.payload,
            tuple(params[i] for i in order),
            tuple(structure[i] for i in order),
        )
    if pair == (SURFACES_IN_3TORUS, SURFACES_IN_3TORUS):
        union = Mesh3(g.payload.triangles + f.payload.triangles)
        require_mesh_general_position(union)
        _, _, mixed = _split_double_curves(union, len(g.payload.triangles))
        n_first = len(g.payload.triangles)
        records = []
        structure = []
        for dc in mixed:
            g_side = next(
                pc for pc in dc.preimages if pc.arcs[0][0] < n_first
            )
            f_side = next(
                pc for pc in dc.preimages if pc.arcs[0][0] >= n_first
            )
            records.append((g_side.arcs, g_side.w1))
            structure.append(f_side.w1)
        order = sorted(range(len(records)), key=lambda i: records[i])
        return RepresentedClass(
            CURVES_ON_SOURCE_MESH,
            g.payload,
            tuple(records[i] for i in order),
            tuple(structure[i] for i in order),
        )
    if pair == (SURFACES_IN_3TORUS, CURVES_IN_3TORUS):
        segs = [seg for (canonical, _) in f.payload for seg in canonical]
        hits = mesh_segment_hits(g.payload, segs)
        points = sorted(set(hits))
        return RepresentedClass(
            POINTS_ON_SOURCE_MESH, g.payload, tuple(points)
        )
    raise ValueError(f"pullback undefined on {pair!r}")


# ---------------------------------------------------------------------------
# the multiple-point operations


def psi_r(f, r):
    """The r-fold self-intersection class of f, in f's ambient."""
    if r < 0:
        raise ValueError("psi_r needs r >= 0")
    if r == 0:
        return identity_class(f.ambient)
    if r == 1:
        return f
    if f.is_empty or f.universe == IDENTITY_UNIVERSE:
        return empty_class(f.ambient, note=GENERICALLY_EMPTY if r > 1 else "")
    if f.universe == CURVES_IN_SURFACE:
        if r == 2:
            pts = []
            structure = []
            for dp in double_points(f.payload):
                pts.append((dp.square, dp.point))
                structure.append(
                    tuple(sorted(f.structure[b[0]] for b in dp.branches))
                )
            order = sorted(range(len(pts)), key=lambda i: pts[i])
            return RepresentedClass(
                POINTS_IN_SURFACE,
                f.ambient,
                tuple(pts[i] for i in order),
                tuple(structure[i] for i in order),
            )
        return empty_class(f.ambient, note=GENERICALLY_EMPTY)
    if f.universe == SURFACES_IN_3TORUS:
        if r == 2:
            records = []
            structure = []
            for dc in f.payload.double_curves():
                records.append(_circle_record(dc))
                structure.append(tuple(sorted(pc.w1 for pc in dc.preimages)))
            order = sorted(range(len(records)), key=lambda i: records[i])
            return RepresentedClass(
                CURVES_IN_3TORUS,
                AMBIENT_T3,
                tuple(records[i] for i in order),
                tuple(structure[i] for i in order),
            )
        if r == 3:
            targets = sorted(
                tp.target for tp in f.payload.triple_points().points
            )
            return RepresentedClass(
                POINTS_IN_3TORUS, AMBIENT_T3, tuple(targets)
            )
        return empty_class(f.ambient, note=GENERICALLY_EMPTY)
    # 0- and 1-dimensional classes in a higher-dimensional ambient never
    # self-intersect generically
    return empty_class(f.ambient, note=GENERICALLY_EMPTY)


def mu_r(f, r):
    """The r-fold class with a distinguished preimage, in f's source."""
    if r < 2:
        raise ValueError("mu_r needs r >= 2")
    if f.is_empty:
        return empty_class(None)
    if f.universe == CURVES_IN_SURFACE:
        if r == 2:
            params = []
            structure = []
            for dp in double_points(f.payload):
                for branch in dp.branches:
                    params.append(branch)
                    structure.append(f.structure[branch[0]])
            order = sorted(range(len(params)), key=lambda i: params[i])
            return RepresentedClass(
                POINTS_ON_SOURCE_CIRCLES,
                f.payload,
                tuple(params[i] for i in order),
                tuple(structure[i] for i in order),
            )
        return empty_class(f.payload, note=GENERICALLY_EMPTY)
    if f.universe == SURFACES_IN_3TORUS:
        if r == 2:
            records = []
            for dc in f.payload.double_curves():
                for pc in dc.preimages:
                    records.append((pc.arcs, pc.w1, pc.doubled))
            records.sort()
            return RepresentedClass(
                CURVES_ON_SOURCE_MESH,
                f.payload,
                tuple(records),
                tuple(rec[1] for rec in records),
            )
        if r == 3:
            points = sorted(f.payload.triple_points().mu3_points())
            return RepresentedClass(
                POINTS_ON_SOURCE_MESH, f.payload, tuple(points)
            )
        return empty_class(f.payload, note=GENERICALLY_EMPTY)
    return empty_class(getattr(f, "payload", None), note=GENERICALLY_EMPTY)


def euler_class(f, cycles=None):
    """Normal-bundle transport bits as an evaluation table.

    For curves the default cycles are the components themselves; for
    surfaces in the 3-torus they are the double-locus preimage circles
    (the cycles the r = 2 identity evaluates on).  ``cycles`` may supply
    named :class:`~multipoint.surfaces3d.MeshCycle` objects instead.
    """
    if f.is_empty:
        return EvaluationFunctional(())
    if f.universe == CURVES_IN_SURFACE:
        entries = tuple(
            (f"component[{i}]", comp.two_sidedness())
            for i, comp in enumerate(f.payload.components)
        )
        return EvaluationFunctional(entries)
    if f.universe == SURFACES_IN_3TORUS:
        if cycles is not None:
            entries = tuple(
                (name, cyc.transport_bit()) for name, cyc in cycles.items()
            )
            return EvaluationFunctional(entries)
        entries = []
        for i, dc in enumerate(f.payload.double_curves()):
            for j, pc in enumerate(dc.preimages):
                entries.append((f"mu2[{i}][{j}]", pc.w1))
        return EvaluationFunctional(tuple(entries))
    raise ValueError(f"euler_class undefined on universe {f.universe!r}")


# ---------------------------------------------------------------------------
# law checks


def check_naturality(g, f):
    """Pulling back the double-point class commutes with pulling back f.

    Both sides are computed as exact point sets on g's source: the hits of
    f's double circles on g, against the double points of the fiber
    product of f along g.
    """
    if (g.universe, f.universe) != (SURFACES_IN_3TORUS, SURFACES_IN_3TORUS):
        raise ValueError("naturality check runs on two surfaces in the 3-torus")
    union = Mesh3(g.payload.triangles + f.payload.triangles)
    require_mesh_general_position(union)
    n_first = len(g.payload.triangles)

    segs = [(s.p, s.q) for s in f.payload.double_segments()]
    lhs = sorted(set(mesh_segment_hits(g.payload, segs)))

    rhs = []
    for tp in union.triple_points().points:
        g_side = [pre for pre in tp.preimages if pre[0] < n_first]
        if len(g_side) == 1:
            rhs.append(g_side[0])
    rhs = sorted(set(rhs))

    ok = lhs == rhs
    return CheckReport(
        "naturality",
        ok,
        tuple(lhs),
        tuple(rhs),
        f"{len(lhs)} pullback points of the double locus",
    )


def check_cartan(f, g, r):
    """The r-fold points of a disjoint union split into indexed pieces."""
    if f.universe != g.universe:
        raise ValueError("Cartan check needs classes in one universe")
    if f.universe == CURVES_IN_SURFACE:
        if r != 2:
            raise ValueError("curves in a surface support r = 2 only")
        union = f.payload.union(g.payload)
        require_general_position(union)
        ff, gg, fg = _mixed_double_points(union, len(f.payload.components))
        whole = tuple(sorted((sq, pt) for sq, pt, _ in ff + gg + fg))
        piece_f = tuple(sorted((sq, pt) for sq, pt, _ in ff))
        piece_g = tuple(sorted((sq, pt) for sq, pt, _ in gg))
        piece_fg = tuple(sorted((sq, pt) for sq, pt, _ in fg))
        ok = (
            piece_f == psi_r(f, 2).payload
            and piece_g == psi_r(g, 2).payload
            and piece_fg == internal_product(f, g).payload
            and tuple(sorted(piece_f + piece_g + piece_fg)) == whole
            and len(piece_f) + len(piece_g) + len(piece_fg) == len(whole)
        )
        return CheckReport(
            "cartan",
            ok,
            whole,
            (("psi2(f)", piece_f), ("psi2(g)", piece_g), ("f.g", piece_fg)),
            f"r=2 split {len(piece_f)}+{len(piece_g)}+{len(piece_fg)}",
        )
    if f.universe == SURFACES_IN_3TORUS:
        union = Mesh3(f.payload.triangles + g.payload.triangles)
        require_mesh_general_position(union)
        n_first = len(f.payload.triangles)
        if r == 2:
            first, second, mixed = _split_double_curves(union, n_first)
            piece_f = tuple(sorted(_circle_record(dc) for dc in first))
            piece_g = tuple(sorted(_circle_record(dc) for dc in second))
            piece_fg = tuple(sorted(_circle_record(dc) for dc in mixed))
            whole = tuple(
                sorted(_circle_record(dc) for dc in union.double_curves())
            )
            ok = (
                piece_f == psi_r(f, 2).payload
                and piece_g == psi_r(g, 2).payload
                and piece_fg == internal_product(f, g).payload
                and tuple(sorted(piece_f + piece_g + piece_fg)) == whole
            )
            return CheckReport(
                "cartan",
                ok,
                whole,
                (
                    ("psi2(f)", piece_f),
                    ("psi2(g)", piece_g),
                    ("f.g", piece_fg),
                ),
                f"r=2 split {len(piece_f)}+{len(piece_g)}+{len(piece_fg)}",
            )
        if r == 3:
            buckets = _split_triple_points(union, n_first)
            pieces = {
                k: tuple(sorted(tp.target for tp in tps))
                for k, tps in buckets.items()
            }
            whole = tuple(
                sorted(tp.target for tp in union.triple_points().points)
            )
            expected = {
                3: psi_r(f, 3).payload,
                0: psi_r(g, 3).payload,
                2: internal_product(psi_r(f, 2), g).payload,
                1: internal_product(f, psi_r(g, 2)).payload,
            }
            ok = all(pieces[k] == expected[k] for k in range(4)) and tuple(
                sorted(sum((pieces[k] for k in range(4)), ()))
            ) == whole
            return CheckReport(
                "cartan",
                ok,
                whole,
                (
                    ("psi3(f)", pieces[3]),
                    ("psi2(f).g", pieces[2]),
                    ("f.psi2(g)", pieces[1]),
                    ("psi3(g)", pieces[0]),
                ),
                "r=3 split "
                + "+".join(str(len(pieces[k])) for k in (3, 2, 1, 0)),
            )
        raise ValueError("surfaces in the 3-torus support r = 2 and r = 3")
    raise ValueError(f"Cartan check undefined on universe {f.universe!r}")


def _arc_crossings_on_source(mesh, records):
    """Strict pairwise crossings of preimage arcs, grouped by source chart.

    ``records`` are ``(arcs, w1, doubled)`` circle payloads.  Consecutive
    arcs of one circle share an endpoint by construction and are skipped;
    any other non-transverse contact raises.
    """
    entries = []
    for ci, (arcs, _, _) in enumerate(records):
        n = len(arcs)
        for ai, (tri, p, q) in enumerate(arcs):
            entries.append((tri, p, q, ci, ai, n))
    by_tri = {}
    for e in entries:
        by_tri.setdefault(e[0], []).append(e)
    crossings = set()
    for tri, here in by_tri.items():
        axis = _dominant_axis(tri_normal(mesh.triangles[tri]))
        for i in range(len(here)):
            for j in range(i + 1, len(here)):
                _, p1, q1, c1, a1, n1 = here[i]
                _, p2, q2, c2, a2, n2 = here[j]
                shared = ({p1, q1} & {p2, q2})
                if shared:
                    if c1 == c2 and (a1 - a2) % n1 in (1, n1 - 1):
                        continue
                    raise TransversalityError(
                        "preimage arcs touch at an endpoint"
                    )
                s1 = (_project_drop(p1, axis), _project_drop(q1, axis))
                s2 = (_project_drop(p2, axis), _project_drop(q2, axis))
                hit = seg_intersect(s1, s2)
                if hit is None:
                    continue
                if hit is DEGENERATE or not (
                    0 < hit.ta < 1 and 0 < hit.tb < 1
                ):
                    raise TransversalityError(
                        "preimage arcs meet non-transversally"
                    )
                point = vadd(p1, vscale(hit.ta, vsub(q1, p1)))
                crossings.add((tri, point))
    return crossings


def check_mu_tower(f, r=2):
    """Double points of the source preimage arrangement match mu_3."""
    if f.universe != SURFACES_IN_3TORUS:
        raise ValueError("mu-tower check runs on surfaces in the 3-torus")
    if r != 2:
        raise ValueError("the representable tower step is r = 2")
    mu2 = mu_r(f, 2)
    if mu2.is_empty:
        lhs = ()
    else:
        lhs = tuple(
            sorted(_arc_crossings_on_source(f.payload, mu2.payload))
        )
    rhs = mu_r(f, 3).payload if not mu_r(f, 3).is_empty else ()
    ok = lhs == tuple(sorted(rhs))
    return CheckReport(
        "mu-tower",
        ok,
        lhs,
        tuple(sorted(rhs)),
        f"{len(lhs)} arrangement double points",
    )


__all__ = [
    "AMBIENT_T3",
    "CURVES_IN_3TORUS",
    "CURVES_IN_SURFACE",
    "CURVES_ON_SOURCE_MESH",
    "CheckReport",
    "EMPTY_UNIVERSE",
    "EvaluationFunctional",
    "GENERICALLY_EMPTY",
    "IDENTITY_UNIVERSE",
    "POINTS_IN_3TORUS",
    "POINTS_IN_SURFACE",
    "POINTS_ON_SOURCE_CIRCLES",
    "POINTS_ON_SOURCE_MESH",
    "RepresentedClass",
    "SURFACES_IN_3TORUS",
    "TransversalityError",
    "add",
    "check_cartan",
    "check_mu_tower",
    "check_naturality",
    "class_of_curve",
    "class_of_mesh",
    "curve_class",
    "empty_class",
    "euler_class",
    "identity_class",
    "internal_product",
    "mesh_class",
    "mu_r",
    "psi_r",
    "pullback_class",
]
