"""Random generators for property suites: trivial tangle words and random
valid tri-plane diagrams (built from corpus seeds by random moves).

Everything is driven by an explicit random.Random instance so that runs are
reproducible from a seed.
"""

from __future__ import annotations

import random as _random

from .tangle import Slice, SliceWord, WordError, validate_word


def random_crossingless_tangle(rng: _random.Random, m: int) -> tuple[SliceWord, int]:
    """A crossingless (b, v)-tangle normal form on m southern points: a
    noncrossing matching whose arcs contain no vertical points, written as
    nested caps.  Returns (word, flat strand count)."""
    matching: list[tuple[int, int]] = []

    def rec(points: list[int], allow_unmatched: bool):
        if len(points) < 2:
            return
        if allow_unmatched and rng.random() < 0.35:
            rec(points[1:], True)
            return
        choices = [k for k in range(1, len(points), 2)]
        if not choices:
            rec(points[1:], allow_unmatched)
            return
        k = rng.choice(choices)
        matching.append((points[0], points[k]))
        rec(points[1:k], False)       # inside an arc: fully matched
        rec(points[k + 1:], allow_unmatched)

    rec(list(range(1, m + 1)), True)
    slices: list[Slice] = []
    live = list(range(1, m + 1))
    for a, b in sorted(matching, key=lambda ab: ab[1] - ab[0]):
        ia = live.index(a)
        if live.index(b) != ia + 1:
            raise AssertionError("matching not crossingless")
        slices.append(("A", ia + 1))
        del live[ia:ia + 2]
    return SliceWord(m, m - 2 * len(matching), tuple(slices)), len(matching)


def decorate_tangle(rng: _random.Random, w: SliceWord, rounds: int) -> SliceWord:
    """Apply random bridge braiding (south crossings), page braiding (north
    crossings) and R1/R2 insertions; the tangle stays trivial."""
    for _ in range(rounds):
        op = rng.choice(["south", "north", "r2", "r1"])
        sl = list(w.slices)
        if op == "south" and w.south >= 2:
            sl.insert(0, ("X", rng.randint(1, w.south - 1), rng.choice((1, -1))))
        elif op == "north" and w.north >= 2:
            sl.append(("X", rng.randint(1, w.north - 1), rng.choice((1, -1))))
        elif op in ("r2", "r1"):
            t = rng.randint(0, len(sl))
            arity = w.south
            for s in sl[:t]:
                arity += 2 if s[0] == "U" else (-2 if s[0] == "A" else 0)
            if op == "r2" and arity >= 2:
                i = rng.randint(1, arity - 1)
                s = rng.choice((1, -1))
                sl[t:t] = [("X", i, s), ("X", i, -s)]
            elif op == "r1" and arity >= 1:
                p = rng.randint(1, arity)
                s = rng.choice((1, -1))
                sl[t:t] = [("U", p), ("X", p, s), ("A", p + 1)]
        cand = SliceWord(w.south, w.north, tuple(sl))
        try:
            validate_word(cand)
            w = cand
        except WordError:
            pass
    return w


def random_trivial_tangle(rng: _random.Random, m: int,
                          rounds: int | None = None) -> tuple[SliceWord, int]:
    """A random trivial tangle word on m points together with its flat
    strand count."""
    w, flats = random_crossingless_tangle(rng, m)
    if rounds is None:
        rounds = rng.randint(0, 6)
    return decorate_tangle(rng, w, rounds), flats
