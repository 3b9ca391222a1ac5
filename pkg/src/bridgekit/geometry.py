"""Exact rational PL geometry on the marked disk, and the projection
compiler from shadow data to slice words.

Marked points sit at integer positions (k, 0), k = 1..m, on the chord of a
conceptual disk.  Shadow arcs are piecewise-linear curves with rational
vertices that avoid the chord except at their marked endpoints; vertical
strands rise from their marked points, optionally after a PL tail (used by
band surgery when a resolved strand takes over a braid strand's ascent).

Projection works by folding the disk along the chord: the diagram height
of a point is |y|, so both half-disks map onto the page.  Depth order is
fixed by the convention that flat strands pushed below the chord pass
under the vertical strands while strands routed above them pass over:
upper pieces > vertical rays > lower pieces.  Crossings are exactly the
transversal intersections of a curve with the ascent line of a vertical
strand, together with intersections of one curve with the chord-mirror of
another.  All arithmetic is exact; non-generic input is rejected, never
guessed at.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .tangle import SliceWord, Slice, validate_word

Point = tuple[Fraction, Fraction]


def pt(x, y) -> Point:
    return (Fraction(x), Fraction(y))


class GeometryError(ValueError):
    pass


def orient(a: Point, b: Point, c: Point) -> int:
    d = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (d > 0) - (d < 0)


def on_segment(p: Point, a: Point, b: Point) -> bool:
    if orient(a, b, p) != 0:
        return False
    return (min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= p[1] <= max(a[1], b[1]))


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> Point | None:
    """Proper transversal intersection point of two segments, or None.
    Interior touching or collinear overlap raise GeometryError; shared
    endpoints are allowed and do not count as intersections."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 == o2 == 0:
        lo1, hi1 = sorted((a, b))
        lo2, hi2 = sorted((c, d))
        if max(lo1, lo2) < min(hi1, hi2):
            raise GeometryError("collinear overlapping segments")
        return None
    if o1 != o2 and o3 != o4:
        if 0 in (o1, o2, o3, o4):
            for p, (u, v) in ((a, (c, d)), (b, (c, d)), (c, (a, b)), (d, (a, b))):
                if on_segment(p, u, v) and p != u and p != v:
                    raise GeometryError(f"segments touch at {p}")
            return None
        den = ((b[0] - a[0]) * (d[1] - c[1]) - (b[1] - a[1]) * (d[0] - c[0]))
        s = ((c[0] - a[0]) * (d[1] - c[1]) - (c[1] - a[1]) * (d[0] - c[0])) / den
        return (a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1]))
    return None


def mirror_point(p: Point) -> Point:
    return (p[0], -p[1])


def mirror(poly: list[Point]) -> list[Point]:
    return [mirror_point(q) for q in poly]


@dataclass(frozen=True)
class FlatStrand:
    """Shadow arc between two marked points, with interior waypoints."""
    ends: tuple[int, int]
    waypoints: tuple[Point, ...] = ()

    def polyline(self) -> list[Point]:
        a, b = self.ends
        return [pt(a, 0), *self.waypoints, pt(b, 0)]


@dataclass(frozen=True)
class VerticalStrand:
    """Strand anchored at a marked point that ascends to the page, possibly
    after a PL tail ending in the upper half; the ascent line sits at the
    tail's final x (the anchor position for a plain vertical)."""
    anchor: int
    tail: tuple[Point, ...] = ()

    @property
    def ascent_x(self) -> Fraction:
        return self.tail[-1][0] if self.tail else Fraction(self.anchor)

    @property
    def ascent_base(self) -> Fraction:
        return abs(self.tail[-1][1]) if self.tail else Fraction(0)

    def polyline(self) -> list[Point]:
        return [pt(self.anchor, 0), *self.tail]


Strand = FlatStrand | VerticalStrand


def _segments(poly: list[Point]) -> list[tuple[Point, Point]]:
    out = []
    for a, b in zip(poly, poly[1:]):
        if a == b:
            raise GeometryError("degenerate segment")
        out.append((a, b))
    return out


def subdivide_at_chord(poly: list[Point]) -> list[Point]:
    """Insert a vertex wherever a segment crosses the chord (a winding arc
    bounces off the southern boundary there in the folded picture)."""
    out = [poly[0]]
    for a, b in zip(poly, poly[1:]):
        if a[1] * b[1] < 0:
            t = a[1] / (a[1] - b[1])
            out.append((a[0] + t * (b[0] - a[0]), Fraction(0)))
        out.append(b)
    return out


def _validate_polyline(poly: list[Point], forbidden_xs: set[Fraction],
                       interior: list[Point]) -> None:
    for a, b in _segments(poly):
        if abs(a[1]) == abs(b[1]):
            raise GeometryError(f"segment {a}-{b} has constant fold height")
        if a[1] * b[1] < 0:
            raise GeometryError(f"unsubdivided chord crossing in {a}-{b}")
    for q in interior:
        if q[0] in forbidden_xs:
            raise GeometryError(f"vertex {q} above a marked point")
    segs = _segments(poly)
    for i in range(len(segs)):
        for j in range(i + 2, len(segs)):
            if segments_cross(*segs[i], *segs[j]) is not None:
                raise GeometryError("self-intersecting polyline")


def check_disjoint(p1: list[Point], p2: list[Point]) -> None:
    """Exact disjointness of two polylines (shared endpoints allowed)."""
    for a, b in _segments(p1):
        for c, d in _segments(p2):
            if segments_cross(a, b, c, d) is not None:
                raise GeometryError("polylines cross")


# ---------------------------------------------------------------------------
# Projection compiler
# ---------------------------------------------------------------------------

@dataclass
class _Branch:
    """A maximal run of a strand monotone in fold height, bottom to top;
    the last run of a vertical strand continues as its ascent ray."""
    strand: int
    run: int
    seglist: list[tuple[Point, Point]]
    is_ray: bool = False
    ray_x: Fraction | None = None

    def x_at(self, h: Fraction) -> Fraction:
        if self.is_ray and (not self.seglist or h >= abs(self.seglist[-1][1][1])):
            return self.ray_x
        for a, b in self.seglist:
            h1, h2 = abs(a[1]), abs(b[1])
            if min(h1, h2) <= h <= max(h1, h2):
                t = (h - h1) / (h2 - h1)
                return a[0] + t * (b[0] - a[0])
        raise GeometryError(f"height {h} outside branch range")

    def rank_at(self, h: Fraction) -> int:
        """Depth class at height h: 2 upper, 1 ray, 0 lower."""
        if self.is_ray and (not self.seglist or h >= abs(self.seglist[-1][1][1])):
            return 1
        for a, b in self.seglist:
            h1, h2 = abs(a[1]), abs(b[1])
            if min(h1, h2) <= h <= max(h1, h2):
                y = a[1] if a[1] != 0 else b[1]
                return 2 if y > 0 else 0
        raise GeometryError(f"height {h} outside branch range")

    def top_height(self) -> Fraction | None:
        if self.is_ray:
            return None
        return abs(self.seglist[-1][1][1])

    def bottom_height(self) -> Fraction:
        if not self.seglist:
            return Fraction(0)
        return abs(self.seglist[0][0][1])


def _runs_of(poly: list[Point]):
    """Runs monotone in |y| with segment index ranges: (direction, segs,
    first segment index)."""
    runs = []
    cur: list[tuple[Point, Point]] = []
    cur_dir = 0
    start = 0
    for k, (a, b) in enumerate(_segments(poly)):
        d = 1 if abs(b[1]) > abs(a[1]) else -1
        if cur_dir == 0 or d == cur_dir:
            if not cur:
                start = k
            cur.append((a, b))
            cur_dir = d
        else:
            runs.append((cur_dir, cur, start))
            cur = [(a, b)]
            start = k
            cur_dir = d
    if cur:
        runs.append((cur_dir, cur, start))
    return runs


def compile_strands(m: int, strands: list[Strand],
                    check: bool = True) -> SliceWord:
    """Compile shadow strands over m marked points into a slice word.

    Every marked point carries exactly one strand end; vertical strands
    exit at the northern boundary ordered by ascent position.
    """
    marked_xs = {Fraction(k) for k in range(1, m + 1)}
    polys: list[list[Point]] = []
    owners: dict[int, int] = {}
    verticals: list[int] = []
    bounce_xs: list[Fraction] = []
    for si, s in enumerate(strands):
        poly = subdivide_at_chord(s.polyline())
        if isinstance(s, FlatStrand):
            ends = list(s.ends)
            interior = poly[1:-1]
        else:
            ends = [s.anchor]
            interior = poly[1:]
            verticals.append(si)
            if s.tail:
                last = s.tail[-1]
                if last[1] <= 0:
                    raise GeometryError("ascent tail must end in the upper half")
                prev = s.tail[-2] if len(s.tail) >= 2 else pt(s.anchor, 0)
                if abs(last[1]) <= abs(prev[1]):
                    raise GeometryError("ascent tail must end rising")
        bounce_xs += [q[0] for q in interior if q[1] == 0]
        for e in ends:
            if not 1 <= e <= m:
                raise GeometryError(f"strand end {e} out of range")
            if e in owners:
                raise GeometryError(f"marked point {e} carries two strand ends")
            owners[e] = si
        if check:
            _validate_polyline(poly, marked_xs - {Fraction(e) for e in ends},
                               interior)
        polys.append(poly)
    if len(set(bounce_xs)) != len(bounce_xs):
        raise GeometryError("coincident chord bounces; perturb the data")
    if len(owners) != m:
        missing = sorted(set(range(1, m + 1)) - set(owners))
        raise GeometryError(f"marked points {missing} carry no strand")
    ray_xs = [strands[si].ascent_x for si in verticals]
    if check:
        if len(set(ray_xs)) != len(ray_xs):
            raise GeometryError("two vertical strands share an ascent line")
        clashes = set(bounce_xs) & (marked_xs | set(ray_xs))
        if clashes:
            raise GeometryError(f"chord bounce over a marked point or ascent "
                                f"line at x={sorted(clashes)}")
        for i in range(len(strands)):
            for j in range(i + 1, len(strands)):
                check_disjoint(polys[i], polys[j])

    # branches --------------------------------------------------------------
    branch_runs: list[list[_Branch]] = []
    run_of_seg: list[dict[int, int]] = []
    for si, s in enumerate(strands):
        runs = _runs_of(polys[si])
        lst = []
        seg_map: dict[int, int] = {}
        for rk, (d, segs, start) in enumerate(runs):
            ordered = segs if d > 0 else [(b, a) for a, b in reversed(segs)]
            lst.append(_Branch(si, rk, ordered))
            for off in range(len(segs)):
                seg_map[start + off] = rk
        if isinstance(s, VerticalStrand):
            if lst:
                if len(runs) >= 2 and runs[-1][0] < 0:
                    raise GeometryError("ascent tail must end rising")
                lst[-1].is_ray = True
                lst[-1].ray_x = s.ascent_x
            else:
                lst = [_Branch(si, 0, [], True, s.ascent_x)]
        branch_runs.append(lst)
        run_of_seg.append(seg_map)

    # events ------------------------------------------------------------
    events: list[tuple[Fraction, int, tuple]] = []  # (height, kind rank, data)
    for si, s in enumerate(strands):
        segs = _segments(polys[si])
        # crossings with ascent rays
        for vi in verticals:
            if vi == si:
                continue
            v = strands[vi]
            vx, base = v.ascent_x, v.ascent_base
            for k, (a, b) in enumerate(segs):
                if min(a[0], b[0]) < vx < max(a[0], b[0]):
                    t = (vx - a[0]) / (b[0] - a[0])
                    y = a[1] + t * (b[1] - a[1])
                    if y == 0:
                        raise GeometryError("strand meets an ascent line on the chord")
                    if abs(y) <= base:
                        continue  # passes beneath the ray's base
                    bra = branch_runs[si][run_of_seg[si][k]]
                    brb = branch_runs[vi][-1]
                    events.append((abs(y), 0, ("x", bra, brb)))
        # fold crossings with later strands and itself
        for sj in range(si, len(strands)):
            mseg = _segments(mirror(polys[sj]))
            for ka, (a, b) in enumerate(segs):
                for kb, (c, d) in enumerate(mseg):
                    if si == sj and ka == kb:
                        continue
                    try:
                        x = segments_cross(a, b, c, d)
                    except GeometryError:
                        continue  # mirror images may touch harmlessly
                    if x is None or x[1] == 0:
                        continue
                    if si == sj and x[1] < 0:
                        continue  # count self fold crossings once
                    bra = branch_runs[si][run_of_seg[si][ka]]
                    brb = branch_runs[sj][run_of_seg[sj][kb]]
                    events.append((abs(x[1]), 0, ("x", bra, brb)))
        # extrema (chord bounces of winding arcs appear as height-zero cups)
        runs = _runs_of(polys[si])
        for rk in range(len(runs) - 1):
            d1 = runs[rk][0]
            vtx = runs[rk][1][-1][1]
            h = abs(vtx[1])
            if d1 > 0:
                events.append((h, vtx[0], ("cap", branch_runs[si][rk],
                                           branch_runs[si][rk + 1])))
            else:
                events.append((h, vtx[0], ("cup", branch_runs[si][rk],
                                           branch_runs[si][rk + 1])))

    events.sort(key=lambda e: (e[0], e[1]))
    heights = [e[0] for e in events]
    positive = [h for h in heights if h > 0]
    if len(set(positive)) != len(positive):
        raise GeometryError("coincident event heights; perturb the data")
    if any(h == 0 and data[0] != "cup" for h, _, data in events):
        raise GeometryError("non-bounce event on the chord")

    # sweep ------------------------------------------------------------
    active: list[_Branch] = []
    for k in range(1, m + 1):
        si = owners[k]
        s = strands[si]
        if isinstance(s, FlatStrand) and s.ends[1] == k and s.ends[0] != k:
            active.append(branch_runs[si][-1])
        elif isinstance(s, FlatStrand) and s.ends[0] == s.ends[1]:
            raise GeometryError("flat strand with equal endpoints")
        else:
            active.append(branch_runs[si][0])

    out: list[Slice] = []
    prev_h = Fraction(0)
    for h, _, data in events:
        sample = (prev_h + h) / 2
        order = sorted(range(len(active)), key=lambda i: active[i].x_at(sample))
        live = [active[i] for i in order]
        kind = data[0]
        if kind == "x":
            _, bra, brb = data
            ia, ib = live.index(bra), live.index(brb)
            if abs(ia - ib) != 1:
                raise GeometryError(f"crossing strands not adjacent at h={h}")
            lo = min(ia, ib)
            rank_l, rank_r = live[lo].rank_at(h), live[lo + 1].rank_at(h)
            if rank_l == rank_r:
                raise GeometryError("crossing between strands of equal depth")
            out.append(("X", lo + 1, 1 if rank_l > rank_r else -1))
            live[lo], live[lo + 1] = live[lo + 1], live[lo]
        elif kind == "cap":
            _, b1, b2 = data
            i1, i2 = live.index(b1), live.index(b2)
            if abs(i1 - i2) != 1:
                raise GeometryError(f"cap branches not adjacent at h={h}")
            out.append(("A", min(i1, i2) + 1))
            live = [br for br in live if br not in (b1, b2)]
        else:
            _, b1, b2 = data
            vtx_x = b2.seglist[0][0][0]
            pos = sum(1 for br in live if br.x_at(h) < vtx_x)
            out.append(("U", pos + 1))
            live = live[:pos] + [b1, b2] + live[pos:]
        active = live
        prev_h = h
    word = SliceWord(m, len(verticals), tuple(out))
    validate_word(word)
    return word
