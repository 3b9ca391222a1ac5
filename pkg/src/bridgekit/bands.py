"""Bridge-braided band presentations at genus zero.

A presentation consists of the marked disk (2b+v points on the chord),
shadow strand systems for the two tangles flanking the bridge disk, a
list of cap markers designating the split-unlink components, a list of
band cores (embedded PL arcs between marked points, framed by the disk;
a twisted band carries its twist as crossings in the core's folded
projection), and the braid carried by the spread.

Conversion to a tri-plane diagram projects one tangle as drawn, projects
the other after resolving the bands (cut at the feet, route along offset
lanes of the cores), and composes the first tangle with the spread braid
at its northern boundary.  All validity conditions that are combinatorial
or geometric are checked exactly; recognizing the resolved link as an
unlink in standard position is the one bounded, tri-state check.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction

from .braid import BraidWord, markov_stabilize
from .geometry import (
    FlatStrand,
    GeometryError,
    Point,
    Strand,
    VerticalStrand,
    check_disjoint,
    compile_strands,
    pt,
    subdivide_at_chord,
    _segments,
)
from .rewrite import DEFAULT_BUDGET, recognize_split_braid_unlink, simplify
from .tangle import (
    SliceWord,
    Verdict,
    braid_slices,
    concat,
    invert,
    trace,
    validate_word,
)
from .triplane import TriPlaneDiagram


@dataclass(frozen=True)
class Band:
    """A band for the link, given by its core: an embedded arc between two
    marked points, disjoint from the other cores."""
    ends: tuple[int, int]
    waypoints: tuple[Point, ...] = ()

    def polyline(self) -> list[Point]:
        a, b = self.ends
        return [pt(a, 0), *self.waypoints, pt(b, 0)]


@dataclass(frozen=True)
class BridgeBraidedPresentation:
    m: int                                # marked points, 2b + v of them
    t1: tuple[Strand, ...]
    t3: tuple[Strand, ...]
    caps: tuple[tuple[int, int], ...]     # strand markers for the split unlink
    bands: tuple[Band, ...]
    beta3: BraidWord

    @property
    def v(self) -> int:
        return sum(1 for s in self.t3 if isinstance(s, VerticalStrand))

    @property
    def b(self) -> int:
        return (self.m - self.v) // 2

    @property
    def band_count(self) -> int:
        return len(self.bands)


class PresentationError(ValueError):
    pass


def _strand_at(strands: tuple[Strand, ...], point: int) -> Strand:
    for s in strands:
        if isinstance(s, FlatStrand) and point in s.ends:
            return s
        if isinstance(s, VerticalStrand) and s.anchor == point:
            return s
    raise PresentationError(f"no strand at marked point {point}")


def _lane(waypoints: tuple[Point, ...], factor: Fraction) -> tuple[Point, ...]:
    """A parallel lane of a core: heights scaled by the factor."""
    return tuple((x, y * factor) for x, y in waypoints)


def _approach(end: int, neighbour: Point, factor: Fraction) -> Point:
    """A junction point near marked point `end`, offset toward the
    neighbouring waypoint."""
    ex = Fraction(end)
    if neighbour[1] == 0:
        raise PresentationError("band core waypoint on the chord")
    return (ex + (neighbour[0] - ex) * factor, neighbour[1] * factor)


def resolve_bands(t3: tuple[Strand, ...], bands: tuple[Band, ...]) -> tuple[Strand, ...]:
    """Surger the tangle strands along the band cores: each band is cut at
    its feet and the strands rerouted along two parallel lanes of the core."""
    strands = list(t3)
    for band in bands:
        a, b = band.ends
        if not band.waypoints:
            raise PresentationError("band core needs at least one waypoint")
        alpha = _strand_at(tuple(strands), a)
        beta = _strand_at(tuple(strands), b)
        inner = _lane(band.waypoints, Fraction(9, 11))
        outer = _lane(band.waypoints, Fraction(13, 11))
        stub = FlatStrand((a, b), inner)
        if alpha is beta:
            # both feet on one strand: the resolution would close off a loop
            # inside the tangle
            raise PresentationError("band with both feet on one strand")
        if isinstance(alpha, VerticalStrand) and isinstance(beta, VerticalStrand):
            raise PresentationError("band joining two vertical strands")
        if isinstance(alpha, VerticalStrand):
            alpha, beta = beta, alpha
            a, b = b, a
            outer_lane = _lane(tuple(reversed(band.waypoints)), Fraction(13, 11))
        else:
            outer_lane = _lane(band.waypoints, Fraction(13, 11))
        # alpha is flat with an end at a
        a2 = alpha.ends[0] if alpha.ends[1] == a else alpha.ends[1]
        alpha_path = alpha.waypoints if alpha.ends[0] == a2 else tuple(reversed(alpha.waypoints))
        if isinstance(beta, VerticalStrand):
            tail = alpha_path + outer_lane + tuple(beta.tail)
            comp: Strand = VerticalStrand(a2, _ensure_rising(tail, b))
        else:
            b2 = beta.ends[0] if beta.ends[1] == b else beta.ends[1]
            beta_path = beta.waypoints if beta.ends[1] == b2 else tuple(reversed(beta.waypoints))
            comp = FlatStrand((a2, b2), alpha_path + outer_lane + beta_path)
        strands.remove(alpha)
        strands.remove(beta)
        strands.append(stub)
        strands.append(comp)
    return tuple(strands)


def _ensure_rising(tail: tuple[Point, ...], near: int) -> tuple[Point, ...]:
    """Append a final rising waypoint beside `near` so the strand can ascend."""
    if tail and tail[-1][1] > 0:
        last = tail[-1]
        return tail + ((last[0] + Fraction(1, 17), last[1] + Fraction(1, 3)),)
    return tail + ((Fraction(near) + Fraction(1, 17), Fraction(1, 3)),)


def to_triplane(bp: BridgeBraidedPresentation,
                budget: int = DEFAULT_BUDGET) -> TriPlaneDiagram:
    """Tri-plane diagram of the presentation: tangle 3 as drawn, tangle 2 by
    band resolution, tangle 1 composed with the spread braid at its pages."""
    p3 = compile_strands(bp.m, list(bp.t3))
    p2 = compile_strands(bp.m, list(resolve_bands(bp.t3, bp.bands)))
    p1_word = compile_strands(bp.m, list(bp.t1))
    if bp.beta3.strands != p1_word.north:
        raise PresentationError(
            f"braid on {bp.beta3.strands} strands, tangle 1 has {p1_word.north} pages")
    p1 = SliceWord(p1_word.south, p1_word.north,
                   p1_word.slices + braid_slices(bp.beta3))
    v = p3.north
    b = (bp.m - v) // 2
    return TriPlaneDiagram(b, v, p1, p2, p3)


def resolved_link_word(bp: BridgeBraidedPresentation) -> SliceWord:
    """Closed diagram of the resolved link: the union of tangle 1 (with the
    spread braid) and the mirror of the resolved tangle, closed through the
    pages."""
    t = to_triplane(bp)
    word = concat(invert(t.p2), t.p1)
    n = word.south
    cups = tuple(("U", k) for k in range(1, n + 1))
    caps = tuple(("A", n - k) for k in range(n))
    closed = SliceWord(0, 0, cups + word.slices + caps)
    validate_word(closed)
    return closed


def recognize_unlink(word: SliceWord, budget: int = DEFAULT_BUDGET) -> tuple[Verdict, int]:
    """Tri-state unlink recognition for a closed diagram; the count is the
    number of components."""
    from .rewrite import _peel_normal_circles
    from .tangle import (DELTA, CrossingCapExceeded, kauffman_bracket,
                         crossing_signs_by_component)
    n_comp = len(trace(word).components)
    peeled, circles = _peel_normal_circles(word, budget)
    if not peeled.slices and circles == n_comp:
        return Verdict.verified(), n_comp
    try:
        br = kauffman_bracket(word)
        if br != DELTA ** max(n_comp - 1, 0):
            return Verdict.refuted("bracket differs from the unlink value"), n_comp
    except CrossingCapExceeded:
        pass
    for t_, ca, cb, sgn in crossing_signs_by_component(word):
        pass
    comps = trace(word).components
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            total = sum(sgn for _, ca, cb, sgn in crossing_signs_by_component(word)
                        if {ca, cb} == {i, j})
            if total != 0:
                return Verdict.refuted(f"components {i},{j} are linked"), n_comp
    return Verdict.inconclusive("budget exhausted before unlink normal form"), n_comp


def validate_presentation(bp: BridgeBraidedPresentation,
                          budget: int = DEFAULT_BUDGET) -> Verdict:
    """Exact embeddedness checks on shadows and cores, cap consistency, and
    the bounded recognition of the resolved link as an unlink in standard
    position."""
    try:
        compile_strands(bp.m, list(bp.t1))
        compile_strands(bp.m, list(bp.t3))
    except GeometryError as e:
        return Verdict.refuted(f"shadow data: {e}")
    # band cores: embedded, pairwise disjoint, feet on distinct strands of t3
    try:
        polys = []
        for band in bp.bands:
            poly = subdivide_at_chord(band.polyline())
            segs = _segments(poly)
            for i in range(len(segs)):
                for j in range(i + 2, len(segs)):
                    from .geometry import segments_cross
                    if segments_cross(*segs[i], *segs[j]) is not None:
                        return Verdict.refuted("band core is not embedded")
            polys.append(poly)
        for i in range(len(polys)):
            for j in range(i + 1, len(polys)):
                check_disjoint(polys[i], polys[j])
    except GeometryError as e:
        return Verdict.refuted(f"band cores: {e}")
    for band in bp.bands:
        for e in band.ends:
            if not 1 <= e <= bp.m:
                return Verdict.refuted(f"band foot {e} off the disk")
    # cores must extend by tangle-3 shadows: feet at flat endpoints, at most
    # one vertical foot
    for band in bp.bands:
        vertical_feet = 0
        for e in band.ends:
            s = _strand_at(bp.t3, e)
            if isinstance(s, VerticalStrand):
                vertical_feet += 1
        if vertical_feet == 2:
            return Verdict.refuted("band joins two vertical strands")
    # caps: one tangle-3 strand marker per split-unlink component; the
    # component must be a closed polygon of the two shadow systems
    chains = _union_components(bp)
    closed_chains = [frozenset(ch) for ch, closed in chains if closed]
    marked = []
    for a, b in bp.caps:
        s = _strand_at(bp.t3, a)
        if not (isinstance(s, FlatStrand) and set(s.ends) == {a, b}):
            return Verdict.refuted(f"cap marker {(a, b)} is not a tangle-3 strand")
        home = next((ch for ch in closed_chains if a in ch), None)
        if home is None:
            return Verdict.refuted(f"cap marker {(a, b)} not on a closed polygon")
        marked.append(home)
    if len(set(marked)) != len(marked):
        return Verdict.refuted("two cap markers on one polygon")
    if len(closed_chains) != len(bp.caps):
        return Verdict.refuted(
            f"{len(closed_chains)} closed polygons but {len(bp.caps)} caps")
    try:
        word = resolved_link_word(bp)
    except (GeometryError, PresentationError) as e:
        return Verdict.refuted(f"band resolution: {e}")
    verdict, count = recognize_unlink(word, budget=budget)
    if verdict.status == "verified":
        v = bp.v
        if count < v:
            return Verdict.refuted(f"resolved link has {count} < v components")
        return Verdict.verified()
    return Verdict(verdict.status, f"resolved link: {verdict.reason}")


def _union_components(bp: BridgeBraidedPresentation):
    """Connected chains of the union of the two shadow systems: lists of
    marked points, flagged closed when the chain is a polygon."""
    adj: dict[int, list[int]] = {}
    for strands in (bp.t1, bp.t3):
        for s in strands:
            if isinstance(s, FlatStrand):
                a, b = s.ends
                adj.setdefault(a, []).append(b)
                adj.setdefault(b, []).append(a)
    seen: set[int] = set()
    out = []
    for start in sorted(adj):
        if start in seen:
            continue
        chain = {start}
        frontier = [start]
        while frontier:
            u = frontier.pop()
            seen.add(u)
            for w in adj[u]:
                if w not in chain:
                    chain.add(w)
                    frontier.append(w)
        closed = all(len(adj.get(p, [])) == 2 for p in chain)
        out.append((sorted(chain), closed))
    return out


def c_parameters(bp: BridgeBraidedPresentation,
                 budget: int = DEFAULT_BUDGET) -> tuple[int, int, int]:
    """(c1, c2, c3) read from the presentation: caps give c3, the band count
    gives c2 = b - n, and the resolved unlink gives c1."""
    _, count = recognize_unlink(resolved_link_word(bp), budget=budget)
    return count - bp.v, bp.b - bp.band_count, len(bp.caps)


# ---------------------------------------------------------------------------
# Helper bands
# ---------------------------------------------------------------------------

def add_helper_bands(bp: BridgeBraidedPresentation,
                     selection: tuple[int, ...] | None = None) -> BridgeBraidedPresentation:
    """Attach one helper band per selected vertical strand of tangle 3 (all
    of them by default): perturb the strand near the bridge disk and band it
    to the new flat strand, so the resolved component bounds a meridional
    disk."""
    if selection is None:
        selection = tuple(k + 1 for k in range(bp.v))
    verticals = sorted(s.anchor for s in bp.t3 if isinstance(s, VerticalStrand))
    out = bp
    for rank in sorted(selection, reverse=True):
        if not 1 <= rank <= len(verticals):
            raise PresentationError(f"no vertical strand of rank {rank}")
        out = _helper_at(out, verticals[rank - 1])
    return out


def _shift_point(p: int, at: int, by: int) -> int:
    return p + by if p > at else p


def _shift_strand(s: Strand, at: int, by: int) -> Strand:
    cut = Fraction(2 * at + 1, 2)
    if isinstance(s, FlatStrand):
        return FlatStrand(tuple(_shift_point(e, at, by) for e in s.ends),
                          _shift_waypoints(s.waypoints, cut, by))
    return VerticalStrand(_shift_point(s.anchor, at, by),
                          _shift_waypoints(s.tail, cut, by))


def _shift_waypoints(wps: tuple[Point, ...], cut: Fraction, by: int) -> tuple[Point, ...]:
    """Translate everything right of the cut line, subdividing segments that
    cross it so the map stays piecewise linear and exact."""
    if not wps:
        return wps
    out: list[Point] = []
    pts = list(wps)
    for k, q in enumerate(pts):
        if k > 0:
            a, b = pts[k - 1], q
            if (a[0] - cut) * (b[0] - cut) < 0:
                t = (cut - a[0]) / (b[0] - a[0])
                y = a[1] + t * (b[1] - a[1])
                out.append((cut, y))
                out.append((cut + by, y + Fraction(1, 1000003)))
        out.append((q[0] + by, q[1]) if q[0] > cut else q)
    return tuple(out)


def insert_points(bp: BridgeBraidedPresentation, at: int,
                  count: int) -> BridgeBraidedPresentation:
    """Insert new marked points immediately right of point `at`, shifting
    the geometry right of the gap."""
    return BridgeBraidedPresentation(
        bp.m + count,
        tuple(_shift_strand(s, at, count) for s in bp.t1),
        tuple(_shift_strand(s, at, count) for s in bp.t3),
        tuple(tuple(_shift_point(e, at, count) for e in cap) for cap in bp.caps),
        tuple(Band(tuple(_shift_point(e, at, count) for e in band.ends),
                   _shift_waypoints(band.waypoints, Fraction(2 * at + 1, 2), count))
              for band in bp.bands),
        bp.beta3)


def _helper_at(bp: BridgeBraidedPresentation, k: int) -> BridgeBraidedPresentation:
    """Perturb the tangle-3 vertical at marked point k and band it to the
    resulting flat strand."""
    grown = insert_points(bp, k, 2)
    p, q = k + 1, k + 2
    t1 = list(grown.t1)
    t3 = list(grown.t3)
    old3 = _strand_at(tuple(t3), k)
    if not isinstance(old3, VerticalStrand):
        raise PresentationError(f"tangle-3 strand at {k} is not vertical")
    t3.remove(old3)
    t3.append(FlatStrand((k, p), (pt(Fraction(2 * k + 1, 2), Fraction(1, 7)),)))
    t3.append(VerticalStrand(q, old3.tail))
    t1.append(FlatStrand((p, q), (pt(Fraction(2 * k + 3, 2), -Fraction(1, 7)),)))
    band = Band((p, q), (pt(Fraction(2 * k + 3, 2), Fraction(2, 7)),))
    return BridgeBraidedPresentation(grown.m, tuple(t1), tuple(t3), grown.caps,
                                     grown.bands + (band,), grown.beta3)
