"""Closed surfaces glued from unit squares.

A complex is a set of unit squares with their boundary edges glued in
pairs by isometries.  Each edge of each square carries a frame (base
point, tangent along the edge, outward normal); the gluing transition is
the unique affine map sending one frame onto the other, reversed in the
outward direction, with an optional flip along the edge.  The linear part
is a signed permutation matrix, so transitions preserve the L1 norm, and
its determinant records whether the gluing preserves orientation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .rational import rat, ZERO, ONE
from .exactgeom import Transform2

EDGE_NAMES = ("E", "W", "N", "S")

# edge frames: base point, tangent along the edge, outward normal
_FRAMES = {
    "E": ((ONE, ZERO), (ZERO, ONE), (ONE, ZERO)),
    "W": ((ZERO, ZERO), (ZERO, ONE), (-ONE, ZERO)),
    "N": ((ZERO, ONE), (ONE, ZERO), (ZERO, ONE)),
    "S": ((ZERO, ZERO), (ONE, ZERO), (ZERO, -ONE)),
}

# square corners indexed 0..3; each is met by two edges
_CORNER_POINTS = {0: (ZERO, ZERO), 1: (ONE, ZERO), 2: (ONE, ONE), 3: (ZERO, ONE)}
_CORNER_OF_EDGE_END = {
    ("E", 0): 1, ("E", 1): 2,
    ("W", 0): 0, ("W", 1): 3,
    ("N", 0): 3, ("N", 1): 2,
    ("S", 0): 0, ("S", 1): 1,
}
_EDGES_OF_CORNER = {0: ("W", "S"), 1: ("E", "S"), 2: ("E", "N"), 3: ("W", "N")}


def edge_transition(edge_a: str, edge_b: str, flip: bool) -> Transform2:
    """Affine gluing map from the chart containing ``edge_a`` onto the
    chart containing ``edge_b``."""
    base_a, tan_a, out_a = _FRAMES[edge_a]
    base_b, tan_b, out_b = _FRAMES[edge_b]
    p = (-out_b[0], -out_b[1])
    q = (-tan_b[0], -tan_b[1]) if flip else tan_b
    # linear part A with A out_a = p and A tan_a = q (frames are axis-aligned)
    a = p[0] * out_a[0] + q[0] * tan_a[0]
    b = p[0] * out_a[1] + q[0] * tan_a[1]
    c = p[1] * out_a[0] + q[1] * tan_a[0]
    d = p[1] * out_a[1] + q[1] * tan_a[1]
    bb = (base_b[0] + tan_b[0], base_b[1] + tan_b[1]) if flip else base_b
    e = bb[0] - (a * base_a[0] + b * base_a[1])
    f = bb[1] - (c * base_a[0] + d * base_a[1])
    return Transform2(rat(a), rat(b), rat(c), rat(d), rat(e), rat(f))


@dataclass(frozen=True)
class Gluing:
    """One identification of two distinct edge slots, possibly flipped."""

    square_a: int
    edge_a: str
    square_b: int
    edge_b: str
    flip: bool = False

    def normalized(self):
        if (self.square_a, self.edge_a) <= (self.square_b, self.edge_b):
            return self
        return Gluing(self.square_b, self.edge_b, self.square_a, self.edge_a, self.flip)


@dataclass(frozen=True)
class EdgeCrossing:
    """Directed passage through a glued edge, as seen from the exit side."""

    square: int
    edge: str


@dataclass(frozen=True)
class ComplexReport:
    ok: bool
    violations: tuple
    connected: bool
    vertex_count: int
    euler: Optional[int]


@dataclass(frozen=True)
class SurfaceType:
    orientable: bool
    euler: int
    genus: Optional[int] = None
    crosscaps: Optional[int] = None


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        while p != self.parent[p]:
            self.parent[p] = self.parent[self.parent[p]]
            p = self.parent[p]
        self.parent[x] = p
        return p

    def union(self, x, y):
        self.parent[self.find(x)] = self.find(y)

    def classes(self):
        groups = {}
        for x in self.parent:
            groups.setdefault(self.find(x), []).append(x)
        return list(groups.values())


class SquareComplex:
    """A closed surface built from ``num_squares`` unit squares."""

    def __init__(self, num_squares: int, gluings):
        if num_squares < 1:
            raise ValueError("a complex needs at least one square")
        self.num_squares = num_squares
        glus = []
        for g in gluings:
            if not isinstance(g, Gluing):
                g = Gluing(*g)
            for sq, ed in ((g.square_a, g.edge_a), (g.square_b, g.edge_b)):
                if not (0 <= sq < num_squares):
                    raise ValueError(f"square index {sq} out of range")
                if ed not in EDGE_NAMES:
                    raise ValueError(f"unknown edge name {ed!r}")
            glus.append(g.normalized())
        self.gluings = tuple(sorted(glus, key=lambda g: (g.square_a, g.edge_a)))
        self._by_edge = {}
        self._build_report = None
        violations = []
        for g in self.gluings:
            if (g.square_a, g.edge_a) == (g.square_b, g.edge_b):
                violations.append(f"self-glued-edge {g.square_a}.{g.edge_a}")
                continue
            t_ab = edge_transition(g.edge_a, g.edge_b, g.flip)
            sign = 1 if t_ab.det() < 0 else 0
            for (sq, ed, osq, oed, tr) in (
                (g.square_a, g.edge_a, g.square_b, g.edge_b, t_ab),
                (g.square_b, g.edge_b, g.square_a, g.edge_a, t_ab.inverse()),
            ):
                if (sq, ed) in self._by_edge:
                    violations.append(f"duplicate-edge-slot {sq}.{ed}")
                else:
                    self._by_edge[(sq, ed)] = (osq, oed, g.flip, tr, sign)
        self._construction_violations = tuple(violations)

    # -- gluing lookups ----------------------------------------------------

    def glued(self, square: int, edge: str):
        """(other_square, other_edge, flip, transform, sign) across a slot."""
        return self._by_edge[(square, edge)]

    def crossing_sign(self, square: int, edge: str) -> int:
        return self._by_edge[(square, edge)][4]

    # -- validation ----------------------------------------------------------

    def validate(self) -> ComplexReport:
        if self._build_report is not None:
            return self._build_report
        violations = list(self._construction_violations)
        for sq in range(self.num_squares):
            for ed in EDGE_NAMES:
                if (sq, ed) not in self._by_edge:
                    violations.append(f"unglued-edge {sq}.{ed}")

        comp = _UnionFind()
        for sq in range(self.num_squares):
            comp.find(sq)
        for g in self.gluings:
            comp.union(g.square_a, g.square_b)
        connected = len(comp.classes()) == 1
        if not connected:
            violations.append("disconnected")

        vertex_count = 0
        euler = None
        if not violations:
            verts = _UnionFind()
            for sq in range(self.num_squares):
                for c in range(4):
                    verts.find((sq, c))
            for g in self.gluings:
                for t in (0, 1):
                    t2 = 1 - t if g.flip else t
                    ca = _CORNER_OF_EDGE_END[(g.edge_a, t)]
                    cb = _CORNER_OF_EDGE_END[(g.edge_b, t2)]
                    verts.union((g.square_a, ca), (g.square_b, cb))
            vertex_count = len(verts.classes())
            euler = vertex_count - self.num_squares
            if self._sigma_cycle_count() != 2 * vertex_count:
                violations.append("vertex-link-mismatch")

        self._build_report = ComplexReport(
            ok=not violations,
            violations=tuple(violations),
            connected=connected,
            vertex_count=vertex_count,
            euler=euler,
        )
        return self._build_report

    def _sigma_step(self, flag):
        sq, corner, edge = flag
        osq, oed, flip, _, _ = self._by_edge[(sq, edge)]
        t = 0 if _CORNER_OF_EDGE_END[(edge, 0)] == corner else 1
        t2 = 1 - t if flip else t
        c2 = _CORNER_OF_EDGE_END[(oed, t2)]
        e2 = [e for e in _EDGES_OF_CORNER[c2] if e != oed][0]
        return (osq, c2, e2)

    def _sigma_cycle_count(self):
        """Cycles of the walk around vertices; two per vertex, one per direction."""
        todo = {
            (sq, c, e)
            for sq in range(self.num_squares)
            for c in range(4)
            for e in _EDGES_OF_CORNER[c]
        }
        cycles = 0
        while todo:
            start = todo.pop()
            cur = self._sigma_step(start)
            while cur != start:
                todo.remove(cur)
                cur = self._sigma_step(cur)
            cycles += 1
        return cycles

    # -- classification ------------------------------------------------------

    def orientable(self) -> bool:
        report = self.validate()
        if not report.ok:
            raise ValueError(f"invalid complex: {report.violations}")
        colors = {0: 0}
        stack = [0]
        adj = {}
        for (sq, ed), (osq, oed, _, _, sign) in self._by_edge.items():
            adj.setdefault(sq, []).append((osq, sign))
        while stack:
            sq = stack.pop()
            for osq, sign in adj.get(sq, ()):
                want = colors[sq] ^ sign
                if osq not in colors:
                    colors[osq] = want
                    stack.append(osq)
                elif colors[osq] != want:
                    return False
        return True

    def classify(self) -> SurfaceType:
        report = self.validate()
        if not report.ok:
            raise ValueError(f"invalid complex: {report.violations}")
        euler = report.euler
        if self.orientable():
            if euler % 2 != 0 or euler > 2:
                raise AssertionError(f"impossible euler characteristic {euler}")
            return SurfaceType(True, euler, genus=(2 - euler) // 2)
        return SurfaceType(False, euler, crosscaps=2 - euler)

    def orientation_character(self, crossings) -> int:
        """Parity of orientation reversal along a loop crossing the given
        edge slots (each an :class:`EdgeCrossing` or (square, edge) pair)."""
        bit = 0
        for c in crossings:
            sq, ed = (c.square, c.edge) if isinstance(c, EdgeCrossing) else c
            bit ^= self.crossing_sign(sq, ed)
        return bit

    # -- equality ------------------------------------------------------------

    def _key(self):
        return (self.num_squares, self.gluings)

    def __eq__(self, other):
        return isinstance(other, SquareComplex) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"SquareComplex({self.num_squares}, {list(self.gluings)})"


@dataclass(frozen=True)
class AmbientLoop:
    """A loop recorded by the squares it visits and the edges it exits.

    ``steps[i]`` is (square, exit_edge); the gluing must carry each exit
    into the square of the following step.
    """

    steps: tuple

    def character(self, complex_: SquareComplex) -> int:
        prev_target = None
        for square, edge in self.steps:
            if prev_target is not None and square != prev_target:
                raise ValueError("loop steps do not chain across gluings")
            prev_target = complex_.glued(square, edge)[0]
        if prev_target != self.steps[0][0]:
            raise ValueError("loop does not close up")
        return complex_.orientation_character(self.steps)


# -- presets ---------------------------------------------------------------


def torus_complex() -> SquareComplex:
    return SquareComplex(1, [(0, "E", 0, "W", False), (0, "N", 0, "S", False)])


def klein_complex() -> SquareComplex:
    return SquareComplex(1, [(0, "E", 0, "W", True), (0, "N", 0, "S", False)])


def projective_plane_complex() -> SquareComplex:
    return SquareComplex(1, [(0, "E", 0, "W", True), (0, "N", 0, "S", True)])


def genus2_complex() -> SquareComplex:
    """Four squares: 0,1,2 in a horizontal cycle, 3 stacked with 0.

    Squares 1 and 2 close vertically onto themselves; square 3 sits above
    square 0 and the pair closes vertically through each other, producing
    a genus-2 surface (Euler characteristic -2).
    """
    return SquareComplex(
        4,
        [
            (0, "E", 1, "W", False),
            (1, "E", 2, "W", False),
            (2, "E", 0, "W", False),
            (3, "E", 3, "W", False),
            (0, "N", 3, "S", False),
            (3, "N", 0, "S", False),
            (1, "N", 1, "S", False),
            (2, "N", 2, "S", False),
        ],
    )


def preset_complex(name: str) -> SquareComplex:
    presets = {
        "torus": torus_complex,
        "klein": klein_complex,
        "genus2": genus2_complex,
    }
    if name not in presets:
        raise ValueError(f"unknown surface preset {name!r}")
    return presets[name]()


__all__ = [
    "EDGE_NAMES",
    "edge_transition",
    "Gluing",
    "EdgeCrossing",
    "ComplexReport",
    "SurfaceType",
    "SquareComplex",
    "AmbientLoop",
    "torus_complex",
    "klein_complex",
    "projective_plane_complex",
    "genus2_complex",
    "preset_complex",
]
