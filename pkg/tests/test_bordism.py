"""Represented classes: monoid ops, products, pullbacks, psi/mu laws."""

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from multipoint import curves2d, surfaces3d
from multipoint.bordism import (
    AMBIENT_T3,
    CURVES_IN_3TORUS,
    CURVES_IN_SURFACE,
    CURVES_ON_SOURCE_MESH,
    GENERICALLY_EMPTY,
    IDENTITY_UNIVERSE,
    POINTS_IN_3TORUS,
    POINTS_IN_SURFACE,
    POINTS_ON_SOURCE_CIRCLES,
    POINTS_ON_SOURCE_MESH,
    TransversalityError,
    add,
    check_cartan,
    check_mu_tower,
    check_naturality,
    class_of_mesh,
    curve_class,
    empty_class,
    euler_class,
    identity_class,
    internal_product,
    mesh_class,
    mu_r,
    psi_r,
    pullback_class,
)
from multipoint.rational import rat
from multipoint.surface2d import klein_complex, torus_complex
from multipoint.surfaces3d import Mesh3, MeshCycle, coordinate_torus

TORUS = torus_complex()
KLEIN = klein_complex()
Q = rat(1, 4)

FIG8 = [(0, rat(1, 4), rat(1, 4)), (0, rat(3, 4), rat(3, 4)),
        (0, rat(3, 4), rat(1, 4)), (0, rat(1, 4), rat(3, 4))]
# a second figure-eight whose two diagonals cross the first one's vertical
# strand at x = 1/4 and nothing else
SMALL8 = [(0, rat(5, 32), rat(13, 32)), (0, rat(3, 8), rat(9, 16)),
          (0, rat(3, 8), rat(13, 32)), (0, rat(5, 32), rat(9, 16))]
HORIZ = [(0, rat(1, 4), rat(1, 2)), (0, rat(5, 4), rat(1, 2))]
VERT = [(0, rat(1, 2), rat(1, 4)), (0, rat(1, 2), rat(5, 4))]


def mk(cx, *comps):
    return curve_class(cx, [[(sq, (x, y)) for sq, x, y in c] for c in comps])


def z_torus(offset=0):
    return coordinate_torus(2, Q, offset)


def y_torus(offset=rat(-1, 8)):
    return coordinate_torus(1, Q, offset)


def x_torus(offset=rat(-3, 16)):
    return coordinate_torus(0, Q, offset)


# --- construction and the monoid --------------------------------------------


def test_curve_class_certifies():
    f = mk(TORUS, FIG8)
    assert f.universe == CURVES_IN_SURFACE
    assert f.structure == (0,)
    with pytest.raises(curves2d.GeneralPositionError):
        mk(TORUS, FIG8, FIG8)


def test_mesh_class_certifies():
    m = mesh_class(z_torus())
    assert m.universe == "surfaces-in-3-torus"
    with pytest.raises(surfaces3d.GeneralPositionError):
        mesh_class(z_torus() + z_torus(rat(-1, 8)))


def test_add_empty_is_identity():
    f = mk(TORUS, FIG8)
    assert add(f, empty_class()) is f
    assert add(empty_class(), f) is f
    assert add(empty_class(), empty_class()).is_empty


def test_add_curves_commutes():
    a = mk(TORUS, HORIZ)
    b = mk(TORUS, VERT)
    ab, ba = add(a, b), add(b, a)
    assert ab.universe == ba.universe == CURVES_IN_SURFACE
    verts = lambda cls: {c.vertices for c in cls.payload.components}
    assert verts(ab) == verts(ba)
    assert sorted(ab.structure) == sorted(ba.structure)


def test_add_meshes():
    s = add(mesh_class(z_torus()), mesh_class(y_torus()))
    assert len(s.payload.triangles) == 4
    assert s.payload.certify().ok
    with pytest.raises(surfaces3d.GeneralPositionError):
        add(mesh_class(z_torus()), mesh_class(z_torus(rat(-1, 8))))


def test_add_universe_and_ambient_mismatch():
    f = mk(TORUS, FIG8)
    with pytest.raises(ValueError, match="universe"):
        add(f, mesh_class(z_torus()))
    with pytest.raises(ValueError, match="ambient"):
        add(f, mk(KLEIN, FIG8))


def test_add_point_sets_require_disjointness():
    p = psi_r(mk(TORUS, FIG8), 2)
    q = psi_r(mk(TORUS, SMALL8), 2)
    merged = add(p, q)
    assert merged.universe == POINTS_IN_SURFACE
    assert len(merged.payload) == 2
    with pytest.raises(TransversalityError):
        add(p, p)


def test_add_circles_in_3torus():
    # circle (t, 1/4, 1/4) and circle (1/4, t, 3/8) are disjoint;
    # circle (1/4, t, 1/4) meets the first at the point (1/4, 1/4, 1/4)
    a = internal_product(mesh_class(z_torus()), mesh_class(y_torus()))
    b = internal_product(
        mesh_class(coordinate_torus(2, rat(3, 8), rat(-1, 16))),
        mesh_class(x_torus()),
    )
    touching = internal_product(mesh_class(z_torus()), mesh_class(x_torus()))
    merged = add(a, b)
    assert merged.universe == CURVES_IN_3TORUS
    assert len(merged.payload) == 2
    with pytest.raises(TransversalityError):
        add(a, touching)


# --- psi_r -------------------------------------------------------------------


def test_psi_0_and_1():
    f = mk(TORUS, FIG8)
    assert psi_r(f, 0).universe == IDENTITY_UNIVERSE
    assert psi_r(f, 1) is f
    with pytest.raises(ValueError):
        psi_r(f, -1)


def test_psi_2_of_figure_eight():
    p = psi_r(mk(TORUS, FIG8), 2)
    assert p.universe == POINTS_IN_SURFACE
    assert p.payload == ((0, (rat(1, 2), rat(1, 2))),)
    assert p.structure == ((0, 0),)


def test_psi_2_of_embedding_is_computed_empty():
    p = psi_r(mk(TORUS, HORIZ), 2)
    assert p.is_empty
    assert p.note == ""


def test_psi_out_of_range_is_generically_empty():
    f = mk(TORUS, FIG8)
    assert psi_r(f, 3).note == GENERICALLY_EMPTY
    m = mesh_class(z_torus() + y_torus() + x_torus())
    assert psi_r(m, 4).note == GENERICALLY_EMPTY
    circles = psi_r(m, 2)
    assert psi_r(circles, 2).note == GENERICALLY_EMPTY


def test_psi_on_three_tori():
    m = mesh_class(z_torus() + y_torus() + x_torus())
    circles = psi_r(m, 2)
    assert circles.universe == CURVES_IN_3TORUS
    assert sorted(h1 for _, h1 in circles.payload) == [
        (0, 0, 1), (0, 1, 0), (1, 0, 0),
    ]
    assert circles.structure == ((0, 0),) * 3
    points = psi_r(m, 3)
    assert points.universe == POINTS_IN_3TORUS
    assert points.payload == ((Q, Q, Q),)


# --- mu_r ---------------------------------------------------------------------


def test_mu_2_of_figure_eight():
    f = mk(TORUS, FIG8)
    m = mu_r(f, 2)
    assert m.universe == POINTS_ON_SOURCE_CIRCLES
    assert m.ambient is f.payload
    assert m.payload == ((0, 0, rat(1, 2)), (0, 2, rat(1, 2)))
    with pytest.raises(ValueError):
        mu_r(f, 1)


def test_mu_of_embedding_and_out_of_range():
    f = mk(TORUS, HORIZ)
    assert mu_r(f, 2).is_empty
    assert mu_r(f, 3).note == GENERICALLY_EMPTY


def test_mu_on_three_tori():
    m = mesh_class(z_torus() + y_torus() + x_torus())
    circles = mu_r(m, 2)
    assert circles.universe == CURVES_ON_SOURCE_MESH
    assert len(circles.payload) == 6
    assert all(w1 == 0 and not doubled for _, w1, doubled in circles.payload)
    points = mu_r(m, 3)
    assert points.universe == POINTS_ON_SOURCE_MESH
    assert points.payload == (
        (0, (Q, Q, Q)), (2, (Q, Q, Q)), (4, (Q, Q, Q)),
    )


# --- internal product ----------------------------------------------------------


def test_product_identity_marker():
    f = mk(TORUS, FIG8)
    assert internal_product(identity_class(TORUS), f) is f
    assert internal_product(f, identity_class(TORUS)) is f


def test_product_of_crossing_loops():
    p = internal_product(mk(TORUS, HORIZ), mk(TORUS, VERT))
    assert p.universe == POINTS_IN_SURFACE
    assert p.payload == ((0, (rat(1, 2), rat(1, 2))),)
    assert p.structure == ((0, 0),)


def test_product_of_disjoint_loops_is_empty():
    other = [(0, rat(1, 4), rat(7, 8)), (0, rat(5, 4), rat(7, 8))]
    p = internal_product(mk(TORUS, HORIZ), mk(TORUS, other))
    assert p.is_empty


def test_product_of_two_tori_is_one_circle():
    p = internal_product(mesh_class(z_torus()), mesh_class(y_torus()))
    assert p.universe == CURVES_IN_3TORUS
    assert len(p.payload) == 1
    canonical, h1 = p.payload[0]
    assert h1 == (1, 0, 0)
    assert len(canonical) == 4
    assert p.structure == ((0, 0),)


def test_product_of_circles_with_mesh():
    f = mesh_class(x_torus() + y_torus())
    circles = psi_r(f, 2)
    pts = internal_product(circles, mesh_class(z_torus()))
    assert pts.universe == POINTS_IN_3TORUS
    assert pts.payload == ((Q, Q, Q),)
    assert internal_product(mesh_class(z_torus()), circles).payload == pts.payload


def test_product_negative_dimension_is_empty():
    pts = psi_r(mk(TORUS, FIG8), 2)
    p = internal_product(pts, mk(TORUS, HORIZ))
    assert p.is_empty and p.note == GENERICALLY_EMPTY


def test_product_ambient_mismatch():
    with pytest.raises(ValueError):
        internal_product(mk(TORUS, FIG8), mk(KLEIN, HORIZ))
    with pytest.raises(ValueError):
        internal_product(mk(TORUS, FIG8), mesh_class(z_torus()))


# --- pullback -------------------------------------------------------------------


def test_pullback_of_crossing_loops():
    g, f = mk(TORUS, HORIZ), mk(TORUS, VERT)
    pb = pullback_class(g, f)
    assert pb.universe == POINTS_ON_SOURCE_CIRCLES
    assert pb.ambient is g.payload
    assert pb.payload == ((0, 0, rat(1, 4)),)
    assert pb.structure == (0,)


def test_pullback_of_torus_along_torus():
    g = mesh_class(z_torus())
    f = mesh_class(y_torus())
    pb = pullback_class(g, f)
    assert pb.universe == CURVES_ON_SOURCE_MESH
    assert len(pb.payload) == 1
    arcs, w1 = pb.payload[0]
    assert w1 == 0
    assert len(arcs) == 4
    assert all(tri in (0, 1) for tri, _, _ in arcs)
    assert pb.structure == (0,)


def test_pullback_of_circles_along_mesh():
    g = mesh_class(z_torus())
    circles = psi_r(mesh_class(x_torus() + y_torus()), 2)
    pb = pullback_class(g, circles)
    assert pb.universe == POINTS_ON_SOURCE_MESH
    assert pb.payload == ((0, (Q, Q, Q)),)


def test_pullback_of_empty_and_along_empty():
    g = mk(TORUS, HORIZ)
    assert pullback_class(g, empty_class()).is_empty
    with pytest.raises(ValueError):
        pullback_class(empty_class(), g)


# --- euler class -----------------------------------------------------------------


def test_euler_class_of_curves():
    e = euler_class(mk(TORUS, FIG8))
    assert e.entries == (("component[0]", 0),)
    assert e.all_zero
    assert e["component[0]"] == 0
    core = mk(KLEIN, HORIZ)
    assert euler_class(core).entries == (("component[0]", 1),)
    assert not euler_class(core).all_zero


def test_euler_class_of_meshes():
    m = mesh_class(z_torus() + y_torus())
    e = euler_class(m)
    assert e.entries == (("mu2[0][0]", 0), ("mu2[0][1]", 0))
    cyc = MeshCycle(
        m.payload,
        [(0, rat(1, 16), rat(1, 16)), (0, 0, rat(1, 8)),
         (1, rat(3, 16), rat(3, 8)), (1, rat(1, 8), rat(7, 8))],
    )
    named = euler_class(m, cycles={"gamma": cyc})
    assert named.entries == (("gamma", 0),)
    assert euler_class(empty_class()).entries == ()
    with pytest.raises(ValueError):
        euler_class(psi_r(mk(TORUS, FIG8), 2))


# --- naturality --------------------------------------------------------------------


def test_naturality_anchor():
    g = mesh_class(z_torus())
    f = mesh_class(x_torus() + y_torus())
    rep = check_naturality(g, f)
    assert rep.ok
    assert rep.lhs == rep.rhs == ((0, (Q, Q, Q)),)


def test_naturality_with_embedded_f():
    g = mesh_class(z_torus())
    rep = check_naturality(g, mesh_class(x_torus()))
    assert rep.ok and rep.lhs == () and rep.rhs == ()
    rep2 = check_naturality(g, mesh_class(coordinate_torus(2, rat(3, 4))))
    assert rep2.ok and rep2.lhs == ()


def test_naturality_requires_mesh_universe():
    with pytest.raises(ValueError):
        check_naturality(mk(TORUS, HORIZ), mk(TORUS, VERT))


# --- Cartan formula ----------------------------------------------------------------


def test_cartan_two_figure_eights():
    f, g = mk(TORUS, FIG8), mk(TORUS, SMALL8)
    rep = check_cartan(f, g, 2)
    assert rep.ok
    pieces = dict(rep.rhs)
    assert len(pieces["psi2(f)"]) == 1
    assert len(pieces["psi2(g)"]) == 1
    assert pieces["f.g"] == (
        (0, (rat(1, 4), rat(53, 112))),
        (0, (rat(1, 4), rat(111, 224))),
    )
    assert len(rep.lhs) == 4


def test_cartan_disjoint_embeddings():
    other = [(0, rat(1, 4), rat(7, 8)), (0, rat(5, 4), rat(7, 8))]
    rep = check_cartan(mk(TORUS, HORIZ), mk(TORUS, other), 2)
    assert rep.ok
    assert rep.lhs == ()
    assert all(piece == () for _, piece in rep.rhs)


def test_cartan_meshes_r2():
    f = mesh_class(z_torus() + y_torus())
    g = mesh_class(x_torus())
    rep = check_cartan(f, g, 2)
    assert rep.ok
    pieces = dict(rep.rhs)
    assert len(pieces["psi2(f)"]) == 1
    assert len(pieces["psi2(g)"]) == 0
    assert len(pieces["f.g"]) == 2
    assert len(rep.lhs) == 3


def test_cartan_meshes_r3():
    f = mesh_class(z_torus() + y_torus())
    g = mesh_class(x_torus())
    rep = check_cartan(f, g, 3)
    assert rep.ok
    pieces = dict(rep.rhs)
    assert pieces["psi2(f).g"] == ((Q, Q, Q),)
    assert pieces["psi3(f)"] == ()
    assert pieces["f.psi2(g)"] == ()
    assert pieces["psi3(g)"] == ()
    assert rep.lhs == ((Q, Q, Q),)


def test_cartan_rejects_unsupported_r():
    f, g = mk(TORUS, FIG8), mk(TORUS, SMALL8)
    with pytest.raises(ValueError):
        check_cartan(f, g, 3)
    with pytest.raises(ValueError):
        check_cartan(mesh_class(z_torus()), mesh_class(x_torus()), 4)


# --- mu tower ----------------------------------------------------------------------


def test_mu_tower_three_tori():
    m = mesh_class(z_torus() + y_torus() + x_torus())
    rep = check_mu_tower(m)
    assert rep.ok
    assert rep.lhs == rep.rhs == (
        (0, (Q, Q, Q)), (2, (Q, Q, Q)), (4, (Q, Q, Q)),
    )


def test_mu_tower_embedded():
    rep = check_mu_tower(mesh_class(z_torus()))
    assert rep.ok and rep.lhs == () and rep.rhs == ()


def test_mu_tower_guards():
    m = mesh_class(z_torus())
    with pytest.raises(ValueError):
        check_mu_tower(m, r=3)
    with pytest.raises(ValueError):
        check_mu_tower(mk(TORUS, FIG8))


# --- randomized laws ----------------------------------------------------------------


@settings(max_examples=15, deadline=None)
@given(
    st.integers(-8, 8), st.integers(-8, 8),
    st.integers(-8, 8), st.integers(-8, 8),
)
def test_product_is_symmetric_on_tori(za, zb, ya, yb):
    g = mesh_class(coordinate_torus(2, Q + rat(za, 64), rat(zb, 64)))
    h = mesh_class(coordinate_torus(1, Q + rat(ya, 64), rat(yb, 64)))
    try:
        ab = internal_product(g, h)
    except surfaces3d.GeneralPositionError:
        # aligned chart offsets are certified out; resample
        assume(False)
    ba = internal_product(h, g)
    assert ab.payload == ba.payload
    assert len(ab.payload) == 1
    assert ab.payload[0][1] == (1, 0, 0)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6))
def test_cartan_on_separated_horizontals(na, nb):
    assume(na != nb)
    a = [(0, rat(1, 4), rat(na, 16)), (0, rat(5, 4), rat(na, 16))]
    b = [(0, rat(1, 8), rat(nb, 16) + rat(1, 32)),
         (0, rat(9, 8), rat(nb, 16) + rat(1, 32))]
    rep = check_cartan(mk(TORUS, a), mk(TORUS, b), 2)
    assert rep.ok and rep.lhs == ()
