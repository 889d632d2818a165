"""
The symmetric group S_n as a Coxeter system.

Permutations are tuples of 1-based images in one-line notation, so the
permutation p sends i to p[i-1].  The simple transposition s_i swaps the
values i and i+1 (acting on the left) or the positions i and i+1 (acting
on the right).  Words are tuples of generator indices in {1..n-1}.
Parabolic subsets are collections of generator indices.

Bruhat comparisons use the rank-matrix dominance criterion, which is
O(n^2) with early exit; the classical subword criterion is kept only as
a test oracle.
"""
from __future__ import annotations

from typing import Iterable, Iterator, Sequence

Permutation = tuple[int, ...]
Word = tuple[int, ...]


def identity(n: int) -> Permutation:
    return tuple(range(1, n + 1))


def is_permutation(seq: Sequence[int]) -> bool:
    n = len(seq)
    return sorted(seq) == list(range(1, n + 1))


def inverse(p: Permutation) -> Permutation:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v - 1] = i + 1
    return tuple(out)


def multiply(p: Permutation, q: Permutation) -> Permutation:
    """Composition (p*q)(i) = p(q(i))."""
    return tuple(p[v - 1] for v in q)


def length(p: Permutation) -> int:
    """Coxeter length = number of inversions.

    >>> length((3, 2, 1))
    3
    """
    n = len(p)
    return sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])


def apply_gen_left(i: int, p: Permutation) -> Permutation:
    """s_i * p: swap the values i and i+1 in one-line notation."""
    out = list(p)
    a = out.index(i)
    b = out.index(i + 1)
    out[a], out[b] = out[b], out[a]
    return tuple(out)


def apply_gen_right(p: Permutation, i: int) -> Permutation:
    """p * s_i: swap the entries at positions i and i+1."""
    out = list(p)
    out[i - 1], out[i] = out[i], out[i - 1]
    return tuple(out)


def has_right_descent(p: Permutation, i: int) -> bool:
    """len(p * s_i) < len(p), i.e. p(i) > p(i+1)."""
    return p[i - 1] > p[i]


def has_left_descent(p: Permutation, i: int) -> bool:
    """len(s_i * p) < len(p), i.e. i appears after i+1 in one-line notation."""
    return p.index(i) > p.index(i + 1)


def evaluate_word(word: Sequence[int], n: int) -> Permutation:
    """The product s_{i_1} ... s_{i_m}, multiplied out left to right.

    >>> evaluate_word((1, 2, 1), 3)
    (3, 2, 1)
    """
    p = list(range(1, n + 1))
    for i in word:
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} out of range for S_{n}")
        p[i - 1], p[i] = p[i], p[i - 1]
    return tuple(p)


def is_reduced(word: Sequence[int], n: int) -> bool:
    return length(evaluate_word(word, n)) == len(word)


def reduced_word(p: Permutation) -> Word:
    """A reduced word for p (lexicographically smallest descent stripped last).

    >>> reduced_word((3, 2, 1))
    (1, 2, 1)
    """
    word: list[int] = []
    q = list(p)
    n = len(q)
    while True:
        for i in range(n - 1):
            if q[i] > q[i + 1]:
                q[i], q[i + 1] = q[i + 1], q[i]
                word.append(i + 1)
                break
        else:
            break
    return tuple(reversed(word))


def all_permutations(n: int) -> Iterator[Permutation]:
    import itertools

    return itertools.permutations(range(1, n + 1))


# -- Bruhat order ------------------------------------------------------


def rank_table(p: Permutation) -> tuple[tuple[int, ...], ...]:
    """r[i][j] = #{a <= i : p(a) <= j} for i, j in 1..n (0-padded row/col)."""
    n = len(p)
    rows = [[0] * (n + 1)]
    for i in range(1, n + 1):
        prev = rows[i - 1]
        row = [0] * (n + 1)
        v = p[i - 1]
        for j in range(1, n + 1):
            row[j] = prev[j] + (1 if v <= j else 0)
        rows.append(row)
    return tuple(tuple(r) for r in rows)


def rank_table_dominates(rx, ry) -> bool:
    """True iff rx >= ry entrywise, i.e. x <= y in Bruhat order."""
    n = len(rx) - 1
    for i in range(1, n):
        rxi, ryi = rx[i], ry[i]
        for j in range(1, n):
            if rxi[j] < ryi[j]:
                return False
    return True


def bruhat_leq(x: Permutation, y: Permutation) -> bool:
    """Bruhat order on S_n via rank-matrix dominance.

    >>> bruhat_leq((1, 2, 3), (3, 2, 1))
    True
    >>> bruhat_leq((2, 1, 3), (1, 3, 2))
    False
    """
    if len(x) != len(y):
        raise ValueError("permutations of different symmetric groups")
    return rank_table_dominates(rank_table(x), rank_table(y))


# -- parabolic subgroups ----------------------------------------------


def parabolic_blocks(parabolic: Iterable[int], n: int) -> list[tuple[int, int]]:
    """Maximal runs of consecutive generators, as (first, last) index pairs."""
    gens = sorted(set(parabolic))
    for i in gens:
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} out of range for S_{n}")
    blocks = []
    k = 0
    while k < len(gens):
        start = gens[k]
        while k + 1 < len(gens) and gens[k + 1] == gens[k] + 1:
            k += 1
        blocks.append((start, gens[k]))
        k += 1
    return blocks


def longest_element(parabolic: Iterable[int], n: int) -> Permutation:
    """The longest element w_A of the standard parabolic subgroup W_A.

    Reverses each maximal consecutive block of positions.

    >>> longest_element({1, 3}, 4)
    (2, 1, 4, 3)
    """
    out = list(range(1, n + 1))
    for first, last in parabolic_blocks(parabolic, n):
        out[first - 1:last + 1] = reversed(out[first - 1:last + 1])
    return tuple(out)


def parabolic_elements(parabolic: Iterable[int], n: int) -> Iterator[Permutation]:
    """All elements of W_A (products over the blocks)."""
    import itertools

    blocks = parabolic_blocks(parabolic, n)
    span = []
    for first, last in blocks:
        positions = list(range(first - 1, last + 1))
        span.append((positions, list(itertools.permutations(positions))))
    base = list(range(1, n + 1))
    combos = itertools.product(*[perms for _, perms in span]) if span else [()]
    for combo in combos:
        out = list(base)
        for (positions, _), arrangement in zip(span, combo):
            for pos, src in zip(positions, arrangement):
                out[pos] = base[src]
        yield tuple(out)


def min_coset_rep(p: Permutation, parabolic: Iterable[int]) -> Permutation:
    """The shortest element of the coset p*W_A.

    Found by stripping right descents that lie in A; the result has no
    right descent in A.

    >>> min_coset_rep((2, 3, 1), {2})
    (2, 1, 3)
    """
    gens = sorted(set(parabolic))
    out = list(p)
    moved = True
    while moved:
        moved = False
        for i in gens:
            if out[i - 1] > out[i]:
                out[i - 1], out[i] = out[i], out[i - 1]
                moved = True
    return tuple(out)


def is_min_coset_rep(p: Permutation, parabolic: Iterable[int]) -> bool:
    return all(p[i - 1] < p[i] for i in parabolic)


def min_coset_reps(parabolic: Iterable[int], n: int) -> Iterator[Permutation]:
    A = frozenset(parabolic)
    for p in all_permutations(n):
        if is_min_coset_rep(p, A):
            yield p


# -- the U/D/S step classifier ----------------------------------------


def coset_step(u: Permutation, i: int, parabolic) -> tuple[str, Permutation]:
    """Classify left multiplication by s_i on the coset of u in W/W_A.

    u must be a minimal coset representative.  Returns ("U", s_i*u) if the
    coset goes up, ("D", s_i*u) if it goes down, ("S", u) if it is fixed.
    The classification is O(1) given the positions of the values i, i+1:
    the coset is fixed exactly when those positions are adjacent and the
    transposition swapping them lies in A (then s_i*u = u*r with r in A).
    """
    a = u.index(i)
    b = u.index(i + 1)
    if a > b:
        return "D", apply_gen_left(i, u)
    if b == a + 1 and (a + 1) in parabolic:
        return "S", u
    return "U", apply_gen_left(i, u)


def classify_step(i: int, y: Permutation, parabolic) -> str:
    """U, D or S according to how s_i moves the coset y*W_A.

    Defined on arbitrary y by comparing minimal coset representatives:
    S if min_coset_rep(s_i*y) == min_coset_rep(y), else U/D by length.

    >>> classify_step(2, (1, 2, 3), {2})
    'S'
    >>> classify_step(1, (1, 2, 3), {2})
    'U'
    >>> classify_step(1, (2, 1, 3), set())
    'D'
    """
    A = frozenset(parabolic)
    u = min_coset_rep(y, A)
    kind, _ = coset_step(u, i, A)
    return kind
