"""Exact braid-group engine: words, the word problem, closures, Markov moves.

Words are flat sequences of Artin generators on a fixed number of strands.
The word problem is solved exactly, never heuristically: Dehornoy handle
reduction runs first (fast in practice, and a handle-free word is empty or
sigma-definite, both conclusive); if the step cap is hit, we fall back to
the left Garside normal form, which always terminates with a definite
answer.

Text syntax: whitespace-separated tokens ``s<i>`` for sigma_i and ``S<i>``
for its inverse, e.g. ``s1 s1 s1`` is sigma_1 cubed.  The strand count is
declared separately.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

Letter = tuple[int, int]  # (generator index i, sign +1/-1), 1 <= i <= n-1


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[Letter, ...] = ()

    def __post_init__(self):
        if self.strands < 0:
            raise ValueError("strand count must be nonnegative")
        object.__setattr__(self, "letters", tuple(self.letters))
        for i, s in self.letters:
            if not 1 <= i <= self.strands - 1:
                raise ValueError(f"generator index {i} out of range for {self.strands} strands")
            if s not in (1, -1):
                raise ValueError(f"bad sign {s}")

    def __mul__(self, other: "BraidWord") -> "BraidWord":
        if other.strands != self.strands:
            raise ValueError("strand count mismatch")
        return BraidWord(self.strands, self.letters + other.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def inverse(self) -> "BraidWord":
        return BraidWord(self.strands, tuple((i, -s) for i, s in reversed(self.letters)))

    def exponent_sum(self) -> int:
        return sum(s for _, s in self.letters)

    def format(self) -> str:
        return " ".join(f"s{i}" if s > 0 else f"S{i}" for i, s in self.letters)

    @staticmethod
    def parse(strands: int, text: str) -> "BraidWord":
        letters = []
        for tok in text.split():
            if tok[0] == "s":
                sign = 1
            elif tok[0] == "S":
                sign = -1
            else:
                raise ValueError(f"bad braid token {tok!r}")
            try:
                idx = int(tok[1:])
            except ValueError:
                raise ValueError(f"bad braid token {tok!r}") from None
            letters.append((idx, sign))
        return BraidWord(strands, tuple(letters))


@dataclass(frozen=True)
class ClosureData:
    permutation: tuple[int, ...]  # 0-indexed images, bottom position -> top position
    components: int
    exponent_sum: int


def free_reduce(w: BraidWord) -> BraidWord:
    """Cancel adjacent sigma_i sigma_i^-1 pairs until none remain."""
    out: list[Letter] = []
    for let in w.letters:
        if out and out[-1][0] == let[0] and out[-1][1] == -let[1]:
            out.pop()
        else:
            out.append(let)
    return BraidWord(w.strands, tuple(out))


def closure_data(w: BraidWord) -> ClosureData:
    perm = list(range(w.strands))
    for i, _ in w.letters:
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
    # perm as built maps top slots to the bottom strand occupying them;
    # invert to get bottom -> top.
    image = [0] * w.strands
    for top, bottom in enumerate(perm):
        image[bottom] = top
    seen = [False] * w.strands
    cycles = 0
    for k in range(w.strands):
        if not seen[k]:
            cycles += 1
            j = k
            while not seen[j]:
                seen[j] = True
                j = image[j]
    return ClosureData(tuple(image), cycles, w.exponent_sum())


def markov_stabilize(w: BraidWord, sign: int = 1) -> BraidWord:
    """Append sigma_n^{sign} on n+1 strands; the closure link type is unchanged."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return BraidWord(w.strands + 1, w.letters + ((w.strands, sign),))


def markov_destabilize(w: BraidWord) -> BraidWord:
    """Inverse of markov_stabilize on a word ending in (n-1, +/-) with no other
    letter of top index; raises if the word is not in that shape."""
    n = w.strands
    if n < 2 or not w.letters or w.letters[-1][0] != n - 1:
        raise ValueError("word is not a Markov stabilization")
    if any(i == n - 1 for i, _ in w.letters[:-1]):
        raise ValueError("top generator occurs before the final letter")
    return BraidWord(n - 1, w.letters[:-1])


# ---------------------------------------------------------------------------
# Dehornoy handle reduction.
# ---------------------------------------------------------------------------

def _find_handle(letters: list[Letter]) -> tuple[int, int] | None:
    """Return (start, end) indices of the leftmost-ending handle, or None.

    A handle is a subword sigma_i^e u sigma_i^{-e} where u contains no
    sigma_j with j <= i.
    """
    # last occurrence of each generator index, with its sign
    open_pos: dict[int, int] = {}
    for k, (i, s) in enumerate(letters):
        # any earlier occurrence of a generator > i between a matching pair is fine;
        # occurrences of <= i reset those pairs
        stale = [j for j in open_pos if j > i]
        for j in stale:
            del open_pos[j]
        if i in open_pos:
            k0 = open_pos[i]
            if letters[k0][1] == -s:
                return k0, k
            open_pos[i] = k
        else:
            open_pos[i] = k
    return None


def _reduce_handle(letters: list[Letter], k0: int, k1: int) -> list[Letter]:
    i, e = letters[k0]
    body = []
    for j, d in letters[k0 + 1 : k1]:
        if j == i + 1:
            body.extend([(i + 1, -e), (i, d), (i + 1, e)])
        else:
            body.append((j, d))
    return letters[:k0] + body + letters[k1 + 1 :]


def handle_reduce(w: BraidWord, max_steps: int = 4000) -> BraidWord | None:
    """Run handle reduction; return the reduced word or None if the step cap
    was exhausted before a handle-free word was reached."""
    letters = list(free_reduce(w).letters)
    for _ in range(max_steps):
        found = _find_handle(letters)
        if found is None:
            return BraidWord(w.strands, tuple(letters))
        letters = _reduce_handle(letters, *found)
        letters = list(free_reduce(BraidWord(w.strands, tuple(letters))).letters)
    return None


# ---------------------------------------------------------------------------
# Left Garside normal form.  Simple elements are permutations, stored as
# tuples mapping bottom positions to top positions (0-indexed).
# ---------------------------------------------------------------------------

def _identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def _delta(n: int) -> tuple[int, ...]:
    return tuple(n - 1 - k for k in range(n))


def _compose(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
    """Permutation of 'a then b' as stacked braids."""
    return tuple(b[a[k]] for k in range(len(a)))


def _invert(a: tuple[int, ...]) -> tuple[int, ...]:
    out = [0] * len(a)
    for k, v in enumerate(a):
        out[v] = k
    return tuple(out)


def _starting_set(a: tuple[int, ...]) -> set[int]:
    """Generators sigma_i (1-indexed) with sigma_i a left divisor of a."""
    return {k + 1 for k in range(len(a) - 1) if a[k] > a[k + 1]}


def _finishing_set(a: tuple[int, ...]) -> set[int]:
    return _starting_set(_invert(a))


def _transposition(n: int, i: int) -> tuple[int, ...]:
    p = list(range(n))
    p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def _flip(a: tuple[int, ...]) -> tuple[int, ...]:
    """Conjugation by Delta: sigma_i -> sigma_{n-i}."""
    n = len(a)
    return tuple(n - 1 - a[n - 1 - k] for k in range(n))


def _make_left_weighted(a: tuple[int, ...], b: tuple[int, ...]):
    """Slide generators from the head of b into the tail of a until
    S(b) is contained in F(a).  Returns the new pair."""
    n = len(a)
    while True:
        moved = False
        fin = _finishing_set(a)
        for i in sorted(_starting_set(b)):
            if i not in fin:
                t = _transposition(n, i)
                a = _compose(a, t)
                b = _compose(t, b)
                moved = True
                break
        if not moved:
            return a, b


def garside_normal_form(w: BraidWord) -> tuple[int, list[tuple[int, ...]]]:
    """Left normal form Delta^p x_1 ... x_k with each x_j a proper simple
    element and each pair (x_j, x_{j+1}) left-weighted."""
    n = w.strands
    ident = _identity(n)
    delta = _delta(n)
    p = 0
    factors: list[tuple[int, ...]] = []
    for i, s in w.letters:
        if s > 0:
            factors.append(_transposition(n, i))
        else:
            # sigma_i^-1 = Delta^-1 (Delta sigma_i^-1); commute Delta^-1 left
            p -= 1
            factors = [_flip(x) for x in factors]
            factors.append(_compose(delta, _transposition(n, i)))
    # local left-weighting passes until stable
    changed = True
    while changed:
        changed = False
        k = 0
        while k < len(factors) - 1:
            a, b = _make_left_weighted(factors[k], factors[k + 1])
            if (a, b) != (factors[k], factors[k + 1]):
                factors[k], factors[k + 1] = a, b
                changed = True
                if k > 0:
                    k -= 1
                    continue
            k += 1
        factors = [x for x in factors if x != ident]
        while factors and factors[0] == delta:
            factors.pop(0)
            p += 1
            factors = [_flip(x) for x in factors]
    return p, factors


def is_trivial(w: BraidWord) -> bool:
    """Exact word-problem test: True iff w represents the identity."""
    w = free_reduce(w)
    if not w.letters:
        return True
    if w.exponent_sum() != 0 or closure_data(w).components != w.strands:
        return False
    reduced = handle_reduce(w)
    if reduced is not None:
        # a handle-free word is empty or sigma-definite, hence nontrivial
        return len(reduced) == 0
    p, factors = garside_normal_form(w)
    return p == 0 and not factors


def equal(u: BraidWord, v: BraidWord) -> bool:
    """Exact equality of braid-group elements."""
    return is_trivial(u * v.inverse())


def all_positive_words(strands: int, length: int):
    """All words of the given length in positive and negative generators;
    intended for small exhaustive checks."""
    gens = [(i, s) for i in range(1, strands) for s in (1, -1)]
    for combo in itertools.product(gens, repeat=length):
        yield BraidWord(strands, combo)
