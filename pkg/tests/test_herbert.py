"""The identity verifier: reports, TSV format, explanations, reproducers."""

import pytest

from multipoint.curves2d import MultiCurve
from multipoint.herbert import (
    HerbertReport,
    HerbertRow,
    explain,
    verify,
    verify_and_dump,
    write_reproducer,
)
from multipoint.rational import rat
from multipoint.surface2d import klein_complex, torus_complex
from multipoint.surfaces3d import GeneralPositionError, Mesh3, coordinate_torus
from multipoint.bordism import mesh_class

TORUS = torus_complex()
KLEIN = klein_complex()
Q = rat(1, 4)

FIG8 = [(0, rat(1, 4), rat(1, 4)), (0, rat(3, 4), rat(3, 4)),
        (0, rat(3, 4), rat(1, 4)), (0, rat(1, 4), rat(3, 4))]
HORIZ = [(0, rat(1, 4), rat(1, 2)), (0, rat(5, 4), rat(1, 2))]
VERT = [(0, rat(1, 2), rat(1, 4)), (0, rat(1, 2), rat(5, 4))]

CYCLE_MARKS = [(0, rat(1, 16), rat(1, 16)), (0, 0, rat(1, 8)),
               (1, rat(3, 16), rat(3, 8)), (1, rat(1, 8), rat(7, 8))]


def curve(*comps):
    return MultiCurve.build(TORUS, [[(sq, (x, y)) for sq, x, y in c] for c in comps])


def three_tori():
    return Mesh3(
        coordinate_torus(2, Q)
        + coordinate_torus(1, Q, rat(-1, 8))
        + coordinate_torus(0, Q, rat(-3, 16))
    )


def two_tori():
    return Mesh3(coordinate_torus(2, Q) + coordinate_torus(1, Q, rat(-1, 8)))


def test_figure_eight_report():
    rep = verify(curve(FIG8), scene_id="fig8")
    assert rep.all_pass
    assert rep.n_double == 1 and rep.n_triple == 0
    (row,) = rep.rows
    assert (row.target, row.r, row.lhs, row.mu, row.euler) == (
        "component[0]", 1, 0, 0, 0,
    )
    assert row.verdict == "PASS"


def test_two_loops_report():
    rep = verify(curve(HORIZ, VERT), scene_id="loops")
    assert rep.all_pass
    assert [(r.lhs, r.mu, r.euler) for r in rep.rows] == [(1, 1, 0), (1, 1, 0)]


def test_klein_core_report():
    core = MultiCurve.build(KLEIN, [[(sq, (x, y)) for sq, x, y in HORIZ]])
    rep = verify(core, scene_id="klein-core")
    assert rep.all_pass
    (row,) = rep.rows
    assert (row.lhs, row.mu, row.euler) == (1, 0, 1)


def test_three_tori_report_with_cycle():
    rep = verify(three_tori(), scene_id="tori3")
    assert rep.all_pass
    assert rep.n_double == 3 and rep.n_triple == 1
    (row,) = rep.rows
    assert (row.target, row.r, row.lhs, row.mu, row.euler) == ("[M]", 2, 1, 1, 0)

    rep2 = verify(two_tori(), targets={"gamma": CYCLE_MARKS}, scene_id="tori2")
    assert rep2.all_pass
    assert [(r.target, r.r, r.lhs, r.mu, r.euler) for r in rep2.rows] == [
        ("[M]", 2, 0, 0, 0),
        ("gamma", 1, 1, 1, 0),
    ]


def test_verify_accepts_represented_classes():
    rep = verify(mesh_class(coordinate_torus(2, Q)), scene_id="embedded")
    assert rep.all_pass
    (row,) = rep.rows
    assert (row.lhs, row.mu, row.euler) == (0, 0, 0)


def test_verify_rejects_uncertified_scene():
    with pytest.raises(GeneralPositionError):
        verify(Mesh3(coordinate_torus(2, Q) + coordinate_torus(2, Q, rat(-1, 8))))


def test_cycle_error_becomes_error_row():
    bad = {"gamma": [(0, rat(1, 16), rat(1, 16)), (0, 0, rat(1, 8)),
                     (1, rat(1, 8), rat(3, 8)), (1, rat(1, 8), rat(7, 8))]}
    rep = verify(two_tori(), targets=bad, scene_id="tori2")
    by_target = {r.target: r for r in rep.rows}
    assert by_target["[M]"].verdict == "PASS"
    assert by_target["gamma"].verdict == "ERROR"
    assert "cycle-tangency" in by_target["gamma"].diagnostics
    assert not rep.all_pass


def test_tsv_format_and_determinism():
    rep1 = verify(three_tori(), scene_id="tori3")
    rep2 = verify(three_tori(), scene_id="tori3")
    assert rep1.to_tsv() == rep2.to_tsv()
    lines = rep1.to_tsv().splitlines()
    assert lines[0] == "scene\tr\ttarget\tlhs\tmu\teuler\tverdict"
    assert lines[1] == "tori3\t2\t[M]\t1\t1\t0\tPASS"
    assert rep1.elapsed_ms >= 0


def test_explain_names_the_double_point():
    scene = curve(FIG8)
    text = explain(verify(scene, scene_id="fig8"), scene)
    assert "1 double object(s)" in text
    assert "double point s0:(1/2, 1/2)" in text
    assert "(comp 0, seg 0, t=1/2)" in text
    assert "(comp 0, seg 2, t=1/2)" in text
    assert "ALL PASS" in text


def test_explain_empty_scene():
    scene = curve(HORIZ)
    text = explain(verify(scene, scene_id="loop"), scene)
    assert "no intersections" in text


def test_explain_highlights_injected_failure():
    fake = HerbertReport(
        "synthetic",
        (HerbertRow("component[0]", 1, 1, 0, 0, "FAIL"),),
        0, 0, 0.0,
    )
    text = explain(fake)
    assert "MISMATCH" in text
    assert "NOT ALL ROWS PASS" in text


def test_reproducer_file(tmp_path):
    scene = three_tori()
    fake = HerbertReport(
        "synthetic",
        (HerbertRow("[M]", 2, 1, 0, 0, "FAIL"),),
        3, 1, 0.0,
    )
    path = write_reproducer(fake, scene, str(tmp_path / "repro.txt"))
    body = open(path).read()
    assert "FAIL" in body
    assert "t0:" in body
    assert "triple point (1/4, 1/4, 1/4)" in body

    # verify_and_dump writes nothing when everything passes
    verify_and_dump(scene, scene_id="tori3", reproducer_dir=str(tmp_path))
    assert not (tmp_path / "herbert-fail-tori3.txt").exists()
