"""Meander graphs and (r, 2s-1)-meander link diagrams.

Point conventions: the axis carries points 0..2s. Character j (1-based) of
the top p-string sits at point j, character j of the bottom p-string at
point j-1, and an extra axis edge joins points 0 and 2s. Crossings of the
base graph are the points 1..2s-1. With these maps a pierced circle at
position i means a top nesting at i and a bottom nesting at i+1, and the
nugatory corners are a bottom nesting at 1 or a top nesting at 2s-1.

In the cabled diagram every base vertex v becomes an r x r grid of
crossings. A crossing is addressed by (v, i, j): i is the column of the
vertical (meander) strand counted left to right, j the row of the
horizontal (axis) strand counted bottom to top, both 0-based internally and
1-based in :class:`Crossing`. The letter ``O`` means the vertical strand
passes over the horizontal one. Word ``i`` of a crossing assignment holds
the letters of column ``i`` ordered by base vertex, then by row.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import pstring as ps
from .pstring import PString

# Sides of a crossing in counterclockwise order.
EAST, NORTH, WEST, SOUTH = 0, 1, 2, 3
_DIRECTION = ((1, 0), (0, 1), (-1, 0), (0, -1))
OVER, UNDER = "O", "U"


class DiagramError(ValueError):
    pass


# ---------------------------------------------------------------------------
# meander graph


@dataclass(frozen=True)
class MeanderGraph:
    top: PString
    bottom: PString
    upper: tuple[int, ...]  # upper[p] = partner of point p via a top arc, -1 if none
    lower: tuple[int, ...]  # lower[p] = partner of point p via a bottom arc, -1 if none

    @property
    def s(self) -> int:
        return self.top.pairs

    @property
    def vertices(self) -> range:
        return range(1, 2 * self.s)

    @property
    def top_matching(self) -> list[tuple[int, int]]:
        return [(p, q) for p, q in enumerate(self.upper) if 0 <= p < q]

    @property
    def bottom_matching(self) -> list[tuple[int, int]]:
        return [(p, q) for p, q in enumerate(self.lower) if 0 <= p < q]

    @property
    def axis_edge(self) -> tuple[int, int]:
        return (0, 2 * self.s)


def build_graph(top: PString, bottom: PString) -> MeanderGraph:
    if top.pairs != bottom.pairs:
        raise DiagramError(f"length mismatch: {top.pairs} vs {bottom.pairs} pairs")
    s = top.pairs
    if s < 1:
        raise DiagramError("a meander graph needs s >= 1")
    n = 2 * s
    upper = [-1] * (n + 1)
    lower = [-1] * (n + 1)
    for j, k in enumerate(ps.matching(top)):
        upper[j + 1] = k + 1
    for j, k in enumerate(ps.matching(bottom)):
        lower[j] = k
    return MeanderGraph(top, bottom, tuple(upper), tuple(lower))


def graph_from_text(top: str, bottom: str) -> MeanderGraph:
    return build_graph(ps.parse(top), ps.parse(bottom))


def pierced_circles(g: MeanderGraph) -> list[int]:
    """Positions i with a top nesting at i and a bottom nesting at i+1."""
    bottom = set(ps.nestings(g.bottom))
    return [i for i in ps.nestings(g.top) if i + 1 in bottom]


def pierced_circles_by_arcs(g: MeanderGraph) -> list[int]:
    """Positions i whose vertices i, i+1 are joined by both an upper and a lower arc."""
    return [i for i in range(1, 2 * g.s - 1) if g.upper[i] == i + 1 and g.lower[i] == i + 1]


def extreme_nestings(g: MeanderGraph) -> int:
    """Number of nestings that produce a kink at an end of the axis (0, 1 or 2)."""
    return int(g.lower[0] == 1) + int(g.upper[2 * g.s] == 2 * g.s - 1)


@dataclass(frozen=True)
class BaseComponent:
    points: tuple[int, ...]
    is_axis: bool


def components(g: MeanderGraph) -> list[BaseComponent]:
    """Cycles of the union of both matchings and the axis edge, axis component first."""
    n = 2 * g.s
    upper = list(g.upper)
    lower = list(g.lower)
    upper[0] = n
    lower[n] = 0
    seen = [False] * (n + 1)
    out = []
    for start in range(n + 1):
        if seen[start]:
            continue
        cycle = []
        p, use_upper = start, True
        while not seen[p]:
            seen[p] = True
            cycle.append(p)
            q = upper[p] if use_upper else lower[p]
            # the axis edge joins the upper slot of 0 to the lower slot of 2s
            if {p, q} != {0, n}:
                use_upper = not use_upper
            p = q
        out.append(BaseComponent(tuple(cycle), 0 in cycle))
    return out


# ---------------------------------------------------------------------------
# crossing information


@dataclass(frozen=True)
class CrossingAssignment:
    r: int
    words: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(self.words) != self.r:
            raise DiagramError(f"expected {self.r} words, got {len(self.words)}")
        lengths = {len(w) for w in self.words}
        if len(lengths) > 1:
            raise DiagramError("crossing words have different lengths")
        if any(set(w) - {OVER, UNDER} for w in self.words):
            raise DiagramError("crossing words may only contain 'O' and 'U'")

    def complement(self) -> CrossingAssignment:
        swap = str.maketrans("OU", "UO")
        return CrossingAssignment(self.r, tuple(w.translate(swap) for w in self.words))


def sample_assignment(s: int, r: int, rng: np.random.Generator) -> CrossingAssignment:
    if s < 1 or r < 1:
        raise ValueError(f"need s, r >= 1, got s={s}, r={r}")
    bits = rng.integers(0, 2, size=(r, r * (2 * s - 1)), dtype=np.uint8)
    codes = ord(OVER) + (ord(UNDER) - ord(OVER)) * bits
    return CrossingAssignment(r, tuple(row.tobytes().decode("ascii") for row in codes))


# ---------------------------------------------------------------------------
# cabled projection


class CabledProjection:
    """The 4-valent planar map of an r-cabled meander graph, without crossing data.

    Darts are integers ``4 * crossing + side`` and leave the crossing through
    that side. ``target[d]`` is the dart by which the edge arrives, read as
    ``4 * crossing + side`` of the arrival.
    """

    def __init__(self, g: MeanderGraph, r: int):
        if r < 1:
            raise ValueError(f"r must be >= 1, got {r}")
        self.graph = g
        self.r = r
        s = g.s
        self.num_crossings = (2 * s - 1) * r * r
        self.target = self._wire()
        self._trace_strands()

    def index(self, v: int, i: int, j: int) -> int:
        return ((v - 1) * self.r + i) * self.r + j

    def address(self, c: int) -> tuple[int, int, int]:
        r = self.r
        j = c % r
        i = (c // r) % r
        v = c // (r * r) + 1
        return v, i, j

    def _wire(self) -> list[int]:
        g, r = self.graph, self.r
        last = 2 * g.s - 1
        top_end = 2 * g.s
        rr = r * r
        a, b = g.upper[top_end], g.lower[0]
        target = [0] * (4 * self.num_crossings)
        # 4 * index(v, i, j) == 4 * ((v - 1) * rr + i * r + j)
        for v in range(1, last + 1):
            up, down = g.upper[v], g.lower[v]
            base = (v - 1) * rr
            for i in range(r):
                row = base + i * r
                for j in range(r):
                    d = 4 * (row + j)
                    if i < r - 1:
                        target[d] = 4 * (row + r + j) + WEST
                    elif v < last:
                        target[d] = 4 * (base + rr + j) + WEST
                    else:
                        target[d] = 4 * ((a - 1) * rr + j * r + r - 1) + NORTH
                    if j < r - 1:
                        target[d + 1] = d + 4 + SOUTH
                    elif up == top_end:
                        target[d + 1] = 4 * ((last - 1) * rr + (r - 1) * r + i) + EAST
                    else:
                        target[d + 1] = 4 * ((up - 1) * rr + (r - 1 - i) * r + r - 1) + NORTH
                    if i > 0:
                        target[d + 2] = 4 * (row - r + j) + EAST
                    elif v > 1:
                        target[d + 2] = 4 * (base - rr + (r - 1) * r + j) + EAST
                    else:
                        target[d + 2] = 4 * ((b - 1) * rr + j * r) + SOUTH
                    if j > 0:
                        target[d + 3] = d - 4 + NORTH
                    elif down == 0:
                        target[d + 3] = 4 * i + WEST
                    else:
                        target[d + 3] = 4 * ((down - 1) * rr + (r - 1 - i) * r) + SOUTH
        return target

    def _trace_strands(self) -> None:
        n = self.num_crossings
        target = self.target
        owner = [-1] * (2 * n)  # 2c for the horizontal passage, 2c+1 for the vertical
        self.strands: list[list[tuple[int, int, int]]] = []  # (crossing, in, out)
        for c0 in range(n):
            for out0 in (EAST, NORTH):
                if owner[2 * c0 + out0] >= 0:
                    continue
                k = len(self.strands)
                passages = []
                c, out = c0, out0
                while True:
                    passages.append((c, out ^ 2, out))
                    owner[2 * c + (out & 1)] = k
                    arrive = target[4 * c + out]
                    c, out = arrive >> 2, (arrive & 3) ^ 2
                    if c == c0 and out == out0:
                        break
                self.strands.append(passages)
        self.comp_h = owner[0::2]
        self.comp_v = owner[1::2]
        self.in_side = [[-1, -1] for _ in range(n)]  # [horizontal, vertical]
        for passages in self.strands:
            for c, side_in, side_out in passages:
                self.in_side[c][side_out & 1] = side_in

    @cached_property
    def faces(self) -> list[list[int]]:
        """Faces as lists of darts, each face kept on the left of its darts."""
        target = self.target
        face_of = [-1] * len(target)
        faces = []
        for d0 in range(len(target)):
            if face_of[d0] >= 0:
                continue
            walk = []
            d = d0
            while face_of[d] < 0:
                face_of[d] = len(faces)
                walk.append(d)
                c, side = divmod(target[d], 4)
                d = 4 * c + (side + 3) % 4
            faces.append(walk)
        self._face_of = face_of
        return faces

    @cached_property
    def unbounded_face(self) -> int:
        # The edge leaving the top-left crossing westward wraps around the
        # left end of the axis; its outer side is the unbounded face.
        faces = self.faces
        corner = self.index(1, 0, self.r - 1)
        return self._face_of[self.target[4 * corner + WEST]] if faces else -1

    @property
    def axis_components(self) -> list[int]:
        return sorted(set(self.comp_h))


def alternating_assignments(g: MeanderGraph, r: int) -> tuple[CrossingAssignment, CrossingAssignment]:
    """The two crossing assignments making the diagram alternating.

    The first puts the vertical strand over at crossing (1, 1, 1); the
    second is its letterwise complement.
    """
    proj = CabledProjection(g, r)
    n = proj.num_crossings
    sense = [""] * n
    pending = [0]
    sense[0] = OVER
    done = [False] * len(proj.strands)
    while pending:
        c = pending.pop()
        for k in (proj.comp_h[c], proj.comp_v[c]):
            if done[k]:
                continue
            done[k] = True
            passages = proj.strands[k]
            horizontal = proj.comp_h[c] == k
            start = next(p for p, (cc, _, out) in enumerate(passages)
                         if cc == c and (out % 2 == 0) == horizontal)
            over0 = _passage_over(sense[c], passages[start][2])
            for step in range(len(passages)):
                cc, _, out = passages[(start + step) % len(passages)]
                over = over0 if step % 2 == 0 else not over0
                want = (OVER if over else UNDER) if out % 2 else (UNDER if over else OVER)
                if not sense[cc]:
                    sense[cc] = want
                    pending.append(cc)
                elif sense[cc] != want:
                    raise AssertionError("projection admits no alternating assignment")
    first = _assignment_from_senses(proj, sense)
    return first, first.complement()


def _passage_over(sense: str, out_side: int) -> bool:
    vertical = out_side % 2 == 1
    return (sense == OVER) == vertical


def _assignment_from_senses(proj: CabledProjection, sense: list[str]) -> CrossingAssignment:
    r = proj.r
    words = []
    for i in range(r):
        letters = []
        for v in proj.graph.vertices:
            for j in range(r):
                letters.append(sense[proj.index(v, i, j)])
        words.append("".join(letters))
    return CrossingAssignment(r, tuple(words))


# ---------------------------------------------------------------------------
# link diagrams


@dataclass(frozen=True)
class Crossing:
    base_vertex: int
    meander_copy: int
    axis_copy: int
    sense: str


@dataclass(frozen=True, eq=False)
class LinkDiagram:
    graph: MeanderGraph
    r: int
    assignment: CrossingAssignment
    projection: CabledProjection = field(repr=False)
    senses: tuple[str, ...] = field(repr=False)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinkDiagram):
            return NotImplemented
        return (self.graph, self.r, self.assignment) == (other.graph, other.r, other.assignment)

    def __hash__(self) -> int:
        return hash((self.graph, self.r, self.assignment))

    @property
    def s(self) -> int:
        return self.graph.s

    @property
    def num_crossings(self) -> int:
        return len(self.senses)

    @property
    def crossings(self) -> list[Crossing]:
        proj = self.projection
        out = []
        for c, sense in enumerate(self.senses):
            v, i, j = proj.address(c)
            out.append(Crossing(v, i + 1, j + 1, sense))
        return out

    @property
    def num_components(self) -> int:
        return len(self.projection.strands)

    @property
    def axis_components(self) -> list[int]:
        return self.projection.axis_components

    @property
    def faces(self) -> list[list[int]]:
        return self.projection.faces

    def face_sizes(self) -> list[int]:
        return [len(f) for f in self.faces]

    def passage_over(self, c: int, out_side: int) -> bool:
        return _passage_over(self.senses[c], out_side)


def assemble(g: MeanderGraph, r: int, v: CrossingAssignment) -> LinkDiagram:
    if v.r != r:
        raise DiagramError(f"assignment is for r={v.r}, diagram for r={r}")
    width = r * (2 * g.s - 1)
    if any(len(w) != width for w in v.words):
        raise DiagramError(f"each crossing word must have {width} letters for s={g.s}, r={r}")
    proj = CabledProjection(g, r)
    # letters are indexed [column, vertex, row]; crossings run vertex, column, row
    grid = np.array([list(w) for w in v.words]).reshape(r, 2 * g.s - 1, r)
    senses = grid.transpose(1, 0, 2).ravel().tolist()
    return LinkDiagram(g, r, v, proj, tuple(senses))


@dataclass(frozen=True)
class DiagramStats:
    pierced_circle_positions: list[int]
    bigons: int
    nesting_bigons: int
    monogons: int
    twists: int
    nugatory: int
    components: int


def diagram_stats(d: LinkDiagram) -> DiagramStats:
    """Face and nesting statistics.

    ``bigons`` counts bounded faces with two corners. ``twists`` is the
    crossing count minus ``nesting_bigons``, the nesting count of both
    strings; the two bigon counts agree whenever ``nugatory`` is zero.
    """
    proj = d.projection
    outer = proj.unbounded_face
    bigons = monogons = 0
    for k, face in enumerate(proj.faces):
        if k == outer:
            continue
        if len(face) == 2:
            bigons += 1
        elif len(face) == 1:
            monogons += 1
    g = d.graph
    nest = len(ps.nestings(g.top)) + len(ps.nestings(g.bottom))
    return DiagramStats(
        pierced_circle_positions=pierced_circles(g),
        bigons=bigons,
        nesting_bigons=nest,
        monogons=monogons,
        twists=d.num_crossings - nest,
        nugatory=extreme_nestings(g),
        components=d.num_components,
    )


def twist_regions_by_chains(d: LinkDiagram) -> int:
    """Count twist regions for r = 1 as groups of crossings joined by bounded bigons."""
    if d.r != 1:
        raise DiagramError("chain-based twist count is only defined for r = 1")
    proj = d.projection
    parent = list(range(d.num_crossings))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, face in enumerate(proj.faces):
        if k != proj.unbounded_face and len(face) == 2:
            a, b = (dart // 4 for dart in face)
            parent[find(a)] = find(b)
    return len({find(c) for c in range(d.num_crossings)})


def verify_alternating(d: LinkDiagram) -> bool:
    for passages in d.projection.strands:
        flags = [d.passage_over(c, out) for c, _, out in passages]
        if any(flags[k] == flags[k - 1] for k in range(len(flags))):
            return False
    return True


def circle_axis_unlinked(d: LinkDiagram, circle: int, axis_copy: int) -> bool:
    """True when both crossings of ``circle`` with axis row ``axis_copy`` share a sense.

    ``circle`` is a component index, ``axis_copy`` a 1-based row.
    """
    proj = d.projection
    if not 1 <= axis_copy <= d.r:
        raise DiagramError(f"axis copy must be in 1..{d.r}")
    if circle in proj.comp_h:
        raise DiagramError(f"component {circle} is an axis component")
    hits = [c for c in range(d.num_crossings)
            if proj.comp_v[c] == circle and c % d.r == axis_copy - 1]
    if len(hits) != 2:
        raise DiagramError(
            f"component {circle} meets axis copy {axis_copy} {len(hits)} times, not as a pierced circle")
    return senses_unlinked(d.senses[hits[0]], d.senses[hits[1]])


def senses_unlinked(first: str, second: str) -> bool:
    """A circle crossing an axis strand twice is unlinked from it iff it is over both or under both."""
    return first == second


def circle_copy_component(d: LinkDiagram, position: int, copy: int = 1) -> int:
    """Component index of one cabled copy of the pierced circle at ``position``."""
    if position not in pierced_circles(d.graph):
        raise DiagramError(f"no pierced circle at position {position}")
    return d.projection.comp_v[d.projection.index(position, copy - 1, 0)]


def unlinked_from_all(d: LinkDiagram, circle: int) -> bool:
    return all(circle_axis_unlinked(d, circle, a) for a in range(1, d.r + 1))


# ---------------------------------------------------------------------------
# exports


def pd_code(d: LinkDiagram) -> list[tuple[int, int, int, int]]:
    proj = d.projection
    slot: dict[int, int] = {}
    label = 0
    for passages in proj.strands:
        n = len(passages)
        for k, (c, _, out) in enumerate(passages):
            nxt_c, nxt_in, _ = passages[(k + 1) % n]
            slot[4 * c + out] = label + k + 1
            slot[4 * nxt_c + nxt_in] = label + k + 1
        label += n
    out = []
    for c, sense in enumerate(d.senses):
        # the horizontal strand is under when the vertical one is over
        under_in = proj.in_side[c][0 if sense == OVER else 1]
        out.append(tuple(slot[4 * c + (under_in + t) % 4] for t in range(4)))
    return out


def export_pd(d: LinkDiagram) -> str:
    return "PD[" + ",".join("X[%d,%d,%d,%d]" % x for x in pd_code(d)) + "]"


_PD_CROSSING = re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")


def parse_pd(text: str) -> list[tuple[int, int, int, int]]:
    body = re.sub(r"\s+", "", text)
    if not (body.startswith("PD[") and body.endswith("]")):
        raise ValueError("PD code must look like PD[X[a,b,c,d],...]")
    return [tuple(int(x) for x in m.groups()) for m in _PD_CROSSING.finditer(body)]


def gauss_code(d: LinkDiagram) -> list[tuple[str, int, str]]:
    """Signed Gauss code of a knot diagram; crossings numbered by first visit."""
    if d.num_components != 1:
        raise DiagramError(f"Gauss code needs one component, diagram has {d.num_components}")
    proj = d.projection
    passages = proj.strands[0]
    number: dict[int, int] = {}
    out = []
    for c, _, side_out in passages:
        number.setdefault(c, len(number) + 1)
        h_out = (proj.in_side[c][0] + 2) % 4
        v_out = (proj.in_side[c][1] + 2) % 4
        over_dir, under_dir = (v_out, h_out) if d.senses[c] == OVER else (h_out, v_out)
        ox, oy = _DIRECTION[over_dir]
        ux, uy = _DIRECTION[under_dir]
        sign = "+" if ox * uy - oy * ux > 0 else "-"
        out.append((OVER if d.passage_over(c, side_out) else UNDER, number[c], sign))
    return out


def export_gauss(d: LinkDiagram) -> str:
    return ",".join(f"{ou}{k}{sign}" for ou, k, sign in gauss_code(d))


JSON_FIELDS = ("s", "r", "top", "bottom", "crossing_info", "components",
               "axis_components", "pierced_circles", "pd")


def to_record(d: LinkDiagram) -> dict:
    return {
        "s": d.s,
        "r": d.r,
        "top": d.graph.top.word,
        "bottom": d.graph.bottom.word,
        "crossing_info": list(d.assignment.words),
        "components": d.num_components,
        "axis_components": d.axis_components,
        "pierced_circles": pierced_circles(d.graph),
        "pd": [list(x) for x in pd_code(d)],
    }


def export_json(d: LinkDiagram) -> str:
    return json.dumps(to_record(d))


def parse_json(text: str) -> LinkDiagram:
    rec = {k: v for k, v in json.loads(text).items() if k in JSON_FIELDS}
    g = graph_from_text(rec["top"], rec["bottom"])
    if g.s != rec["s"]:
        raise DiagramError(f"s={rec['s']} disagrees with the p-strings")
    d = assemble(g, rec["r"], CrossingAssignment(rec["r"], tuple(rec["crossing_info"])))
    if to_record(d) != rec:
        raise DiagramError("derived fields disagree with the diagram")
    return d
