"""Reconstruct the bridge-trisected surface as a cell complex and classify it.

The cell structure comes straight from the trisection: 0-cells are the
2b+v bridge points and the 3v page points; 1-cells are the 3(b+v) tangle
strands and the 3v boundary threads (one per page point of each spread);
2-cells are the flat patches (closed components of the pair unions, c_i in
sector i) and the 3v vertical patches (one per through component).  The
counts give Euler characteristic c_1 + c_2 + c_3 + v - b.

Classification is the standard compact-surface normal form: components via
edge incidence, orientability via face-orientation propagation, then genus
from 2 - 2g - k or crosscap number from 2 - cc - k, where k counts
boundary circles (cycles of threads).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .tangle import trace
from .triplane import TriPlaneDiagram

Vertex = tuple  # ("x", k) bridge point | ("p", i, k) page point
Edge = tuple    # ("strand", i, k) k-th strand of tangle i | ("thread", i, p)


@dataclass
class Face:
    sector: int
    flat: bool
    boundary: list[tuple[Edge, int]]  # directed edge cycle, +1 = forward


@dataclass
class SurfaceComplex:
    vertices: list[Vertex]
    edges: dict[Edge, tuple[Vertex, Vertex]]
    faces: list[Face]

    def euler_characteristic(self) -> int:
        return len(self.vertices) - len(self.edges) + len(self.faces)


@dataclass(frozen=True)
class SurfacePiece:
    orientable: bool
    genus: int            # genus if orientable, crosscap number otherwise
    boundary_circles: int

    def describe(self) -> str:
        if self.orientable:
            return f"orientable genus {self.genus}, boundary {self.boundary_circles}"
        return f"nonorientable crosscaps {self.genus}, boundary {self.boundary_circles}"


@dataclass(frozen=True)
class SurfaceType:
    pieces: tuple[SurfacePiece, ...]

    def describe(self) -> str:
        if not self.pieces:
            return "empty surface"
        return "; ".join(f"component {k}: {p.describe()}"
                         for k, p in enumerate(self.pieces, start=1))

    @property
    def boundary_circles(self) -> int:
        return sum(p.boundary_circles for p in self.pieces)

    def chi(self) -> int:
        return sum(2 - (2 * p.genus if p.orientable else p.genus) - p.boundary_circles
                   for p in self.pieces)


class ComplexError(ValueError):
    pass


def _strand_data(t: TriPlaneDiagram, i: int):
    """Strands of tangle i as (endpoint, endpoint) pairs; endpoints are
    ("x", bridge pos) or ("p", i, page pos)."""
    tr = trace(t.tangle(i))
    strands = []
    for comp in tr.components:
        if len(comp.endpoints) != 2:
            raise ComplexError(f"tangle {i} has a closed or broken strand")
        eps = []
        for side, pos in comp.endpoints:
            eps.append(("x", pos) if side == "S" else ("p", i, pos))
        strands.append(tuple(eps))
    return strands


def build_complex(t: TriPlaneDiagram) -> SurfaceComplex:
    vertices: list[Vertex] = [("x", k) for k in range(1, 2 * t.b + t.v + 1)]
    for i in (1, 2, 3):
        vertices += [("p", i, k) for k in range(1, t.v + 1)]

    edges: dict[Edge, tuple[Vertex, Vertex]] = {}
    strand_at: dict[tuple[int, Vertex], Edge] = {}
    for i in (1, 2, 3):
        for k, (a, b) in enumerate(_strand_data(t, i)):
            e = ("strand", i, k)
            edges[e] = (a, b)
            for ep in (a, b):
                strand_at[(i, ep)] = e

    faces: list[Face] = []
    used_bridge: dict[int, set[Vertex]] = {1: set(), 2: set(), 3: set()}

    def other_end(e: Edge, v: Vertex) -> Vertex:
        a, b = edges[e]
        return b if v == a else a

    for i in (1, 2, 3):
        j = i % 3 + 1  # tangle i+1
        # vertical patches: start at each page-i point, walk down tangle i,
        # alternate through bridge points, finish at a page-j point, close
        # with the thread
        for p in range(1, t.v + 1):
            start: Vertex = ("p", i, p)
            cycle: list[tuple[Edge, int]] = []
            vert = start
            tangle = i
            while True:
                e = strand_at.get((tangle, vert))
                if e is None:
                    raise ComplexError(f"no strand of tangle {tangle} at {vert}")
                a, _ = edges[e]
                cycle.append((e, 1 if vert == a else -1))
                vert = other_end(e, vert)
                if vert[0] == "p":
                    break
                used_bridge[i].add(vert)
                tangle = j if tangle == i else i
            if vert[0:2] != ("p", j):
                raise ComplexError(f"vertical patch of sector {i} ended at {vert}")
            thread: Edge = ("thread", i, p)
            edges[thread] = (vert, start)  # from page i+1 back to page i
            cycle.append((thread, 1))
            faces.append(Face(i, False, cycle))
        # flat patches: remaining alternating bridge cycles
        seen: set[Vertex] = set(used_bridge[i])
        for k in range(1, 2 * t.b + t.v + 1):
            v0: Vertex = ("x", k)
            if v0 in seen:
                continue
            cycle = []
            vert = v0
            tangle = i
            while True:
                e = strand_at.get((tangle, vert))
                if e is None or other_end(e, vert)[0] == "p":
                    raise ComplexError(
                        f"flat patch walk left the bridge arc in sector {i}")
                a, _ = edges[e]
                cycle.append((e, 1 if vert == a else -1))
                vert = other_end(e, vert)
                seen.add(vert)
                tangle = j if tangle == i else i
                if vert == v0 and tangle == i:
                    break
            faces.append(Face(i, True, cycle))
    return SurfaceComplex(vertices, edges, faces)


def orient_faces(c: SurfaceComplex) -> dict[int, int] | None:
    """Choose +1/-1 flips making every interior edge traversed once in each
    direction; None if impossible (nonorientable component present)."""
    incidences: dict[Edge, list[tuple[int, int]]] = {}
    for fi, face in enumerate(c.faces):
        for e, d in face.boundary:
            incidences.setdefault(e, []).append((fi, d))
    flips: dict[int, int] = {}
    adj: dict[int, list[tuple[int, int]]] = {}
    for e, inc in incidences.items():
        if len(inc) == 1:
            continue
        if len(inc) != 2:
            raise ComplexError(f"edge {e} lies on {len(inc)} face traversals")
        (f1, d1), (f2, d2) = inc
        rel = 1 if d1 == -d2 else -1  # same orientation class iff opposite dirs
        adj.setdefault(f1, []).append((f2, rel))
        adj.setdefault(f2, []).append((f1, rel))
    for fi in range(len(c.faces)):
        if fi in flips:
            continue
        flips[fi] = 1
        stack = [fi]
        while stack:
            u = stack.pop()
            for w, rel in adj.get(u, []):
                want = flips[u] * rel
                if w in flips:
                    if flips[w] != want:
                        return None
                else:
                    flips[w] = want
                    stack.append(w)
    return flips


def check_coherent(c: SurfaceComplex, flips: dict[int, int]) -> bool:
    """True iff, after flipping faces as specified, every interior edge is
    traversed once in each direction."""
    count: dict[Edge, int] = {}
    for fi, face in enumerate(c.faces):
        for e, d in face.boundary:
            count[e] = count.get(e, 0) + d * flips.get(fi, 1)
    return all(v == 0 for e, v in count.items() if e[0] == "strand")


def classify(c: SurfaceComplex) -> SurfaceType:
    """Connected components with orientability, genus or crosscap number,
    and boundary circle counts."""
    # component decomposition over faces via shared edges
    face_of_edge: dict[Edge, list[int]] = {}
    for fi, face in enumerate(c.faces):
        for e, _ in face.boundary:
            face_of_edge.setdefault(e, []).append(fi)
    parent = list(range(len(c.faces)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[ra] = rb

    for e, fis in face_of_edge.items():
        for other in fis[1:]:
            union(fis[0], other)

    groups: dict[int, list[int]] = {}
    for fi in range(len(c.faces)):
        groups.setdefault(find(fi), []).append(fi)

    # boundary circles: cycles of threads through page points
    thread_from: dict[Vertex, Edge] = {}
    for e, (a, b) in c.edges.items():
        if e[0] == "thread":
            thread_from[b] = e  # thread starts (as drawn) at page i+1 = a, ends at page i = b
    circles: list[set[Edge]] = []
    seen_threads: set[Edge] = set()
    for e, (a, b) in c.edges.items():
        if e[0] != "thread" or e in seen_threads:
            continue
        circle = set()
        cur = e
        while cur not in circle:
            circle.add(cur)
            seen_threads.add(cur)
            nxt_vertex = c.edges[cur][0]  # the page i+1 end
            cur = thread_from[nxt_vertex]
        circles.append(circle)

    pieces = []
    for root, fis in sorted(groups.items()):
        sub = SurfaceComplex(c.vertices, c.edges, [c.faces[k] for k in fis])
        sub_edges = {e for f in sub.faces for e, _ in f.boundary}
        sub_vertices = {v for e in sub_edges for v in c.edges[e]}
        chi = len(sub_vertices) - len(sub_edges) + len(sub.faces)
        k = sum(1 for circle in circles if circle & sub_edges)
        flips = orient_faces(sub)
        if flips is not None:
            genus2 = 2 - chi - k
            if genus2 % 2:
                raise ComplexError("odd genus defect on an orientable piece")
            pieces.append(SurfacePiece(True, genus2 // 2, k))
        else:
            pieces.append(SurfacePiece(False, 2 - chi - k, k))
    order = lambda p: (-p.boundary_circles, p.genus, p.orientable)
    return SurfaceType(tuple(sorted(pieces, key=order)))


def surface_type(t: TriPlaneDiagram) -> SurfaceType:
    return classify(build_complex(t))
