"""
Enumeration of decorated subexpressions of a word, with per-position
constraints.

A subexpression of a word (s_{i_1}, ..., s_{i_m}) is a bit sequence
e_1 ... e_m.  Suffix products y_0 = id, y_j = s_{i_{m+1-j}}^{e_{m+1-j}} y_{j-1}
determine a decoration at every position: position j is decorated U, D or S
according to whether s_{i_j} raises, lowers or fixes the coset of y_{m-j}
in W/W_A.  The parabolic defect of the subexpression is

    #{j : (d_j, e_j) = (U, 0) or (S, 1)} - #{j : (d_j, e_j) = (D, 0) or (S, 0)}.

The enumerator walks positions m down to 1 in depth-first order, branching
0 before 1 at free positions, and keeps the coset state as a minimal coset
representative updated incrementally (one value swap per U/D step).  Large
runs go through `sweep`, a tight iterative loop that aggregates
endpoint -> defect -> count without materializing per-leaf records;
`iter_subexpressions` yields full records and is the semantic reference.
Partitioned runs split on the highest free positions and merge by exact
addition, so totals are schedule-independent.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from . import coxeter
from .coxeter import Permutation, Word

SweepResult = dict[Permutation, dict[int, int]]


@dataclass(frozen=True)
class DecoratedSubexpression:
    bits: tuple[int, ...]
    decorations: tuple[str, ...]
    endpoint: Permutation  # minimal coset representative of the product coset
    defect: int


class EnumConstraint:
    """Per-position allowed bit sets: each slot is (0,), (1,) or (0, 1)."""

    __slots__ = ("slots",)

    def __init__(self, slots: Sequence[Sequence[int]]):
        cleaned = []
        for s in slots:
            t = tuple(sorted(set(s)))
            if t not in ((0,), (1,), (0, 1)):
                raise ValueError(f"invalid allowed-bit set {s!r}")
            cleaned.append(t)
        self.slots = tuple(cleaned)

    @classmethod
    def free(cls, m: int) -> "EnumConstraint":
        return cls(((0, 1),) * m)

    @classmethod
    def forced_letters(cls, word: Sequence[int], letters) -> "EnumConstraint":
        """Force e_i = 1 at every position whose letter lies in `letters`."""
        letters = frozenset(letters)
        return cls(tuple((1,) if t in letters else (0, 1) for t in word))

    def __len__(self) -> int:
        return len(self.slots)

    def __getitem__(self, k: int) -> tuple[int, ...]:
        return self.slots[k]

    def __eq__(self, other) -> bool:
        return isinstance(other, EnumConstraint) and self.slots == other.slots

    def free_positions(self) -> list[int]:
        """0-based positions with both bits allowed."""
        return [k for k, s in enumerate(self.slots) if len(s) == 2]

    def leaf_count(self) -> int:
        return 1 << len(self.free_positions())

    def split(self, k: int) -> list["EnumConstraint"]:
        """Partition into sub-constraints by fixing the k highest free positions.

        The highest positions are processed first by the right-to-left DFS,
        so each part is a contiguous subtree of the full run.  Parts are
        returned in the DFS visiting order (bit 0 before bit 1 at each
        fixed position, the rightmost position varying slowest).
        """
        free = self.free_positions()
        k = min(k, len(free))
        if k == 0:
            return [self]
        top = free[-k:]
        parts = []
        for mask in range(1 << k):
            slots = list(self.slots)
            # top[-1] is processed first: give it the most significant bit
            for j, pos in enumerate(reversed(top)):
                slots[pos] = ((mask >> (k - 1 - j)) & 1,)
            parts.append(EnumConstraint(slots))
        return parts

    def to_json(self) -> list[list[int]]:
        return [list(s) for s in self.slots]


def decorate(word: Sequence[int], bits: Sequence[int], n: int,
             parabolic) -> DecoratedSubexpression:
    """Decorate one subexpression, straight from the definitions.

    Keeps the full suffix products y_j (not just their cosets) and
    classifies each step through min_coset_rep, so it is an independent
    cross-check of the incremental coset-state rule used by the enumerator.
    """
    m = len(word)
    if len(bits) != m:
        raise ValueError(f"bit sequence length {len(bits)} != word length {m}")
    A = frozenset(parabolic)
    y = coxeter.identity(n)
    decorations = ["?"] * m
    defect = 0
    for j in range(m, 0, -1):  # y before this step is y_{m-j}
        i = word[j - 1]
        e = bits[j - 1]
        d = coxeter.classify_step(i, y, A)
        decorations[j - 1] = d
        if (d, e) in (("U", 0), ("S", 1)):
            defect += 1
        elif (d, e) in (("D", 0), ("S", 0)):
            defect -= 1
        if e:
            y = coxeter.apply_gen_left(i, y)
    endpoint = coxeter.min_coset_rep(y, A)
    return DecoratedSubexpression(tuple(bits), tuple(decorations), endpoint,
                                  defect)


def iter_subexpressions(word: Sequence[int], n: int, parabolic,
                        constraint: EnumConstraint | None = None,
                        ) -> Iterator[DecoratedSubexpression]:
    """Visit every allowed subexpression exactly once, depth first.

    Positions are processed from m down to 1 with branch 0 before branch 1,
    so e_1 varies fastest in the emitted sequence.  The coset state is a
    minimal coset representative updated in place along the DFS path.
    """
    m = len(word)
    if constraint is None:
        constraint = EnumConstraint.free(m)
    if len(constraint) != m:
        raise ValueError("constraint length != word length")
    A = frozenset(parabolic)
    u = list(range(1, n + 1))
    bits = [0] * m
    decorations = ["?"] * m
    for i in word:
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} out of range for S_{n}")

    def walk(k: int, defect: int) -> Iterator[DecoratedSubexpression]:
        if k == m:
            yield DecoratedSubexpression(tuple(bits), tuple(decorations),
                                         tuple(u), defect)
            return
        j = m - 1 - k  # word position (0-based) handled at depth k
        i = word[j]
        a = u.index(i)
        b = u.index(i + 1)
        if a > b:
            d, swap = "D", True
        elif b == a + 1 and (a + 1) in A:
            d, swap = "S", False
        else:
            d, swap = "U", True
        decorations[j] = d
        for e in constraint[j]:
            bits[j] = e
            if e == 0:
                delta = 1 if d == "U" else -1
                yield from walk(k + 1, defect + delta)
            else:
                delta = 1 if d == "S" else 0
                if swap:
                    u[a], u[b] = u[b], u[a]
                yield from walk(k + 1, defect + delta)
                if swap:
                    u[a], u[b] = u[b], u[a]
        decorations[j] = "?"

    yield from walk(0, 0)


def sweep(word: Sequence[int], n: int, parabolic,
          constraint: EnumConstraint | None = None) -> SweepResult:
    """Aggregate endpoint -> defect -> count over all allowed subexpressions.

    Iterative DFS identical in visiting order to iter_subexpressions, but
    allocation-free along the path; only leaves touch the output map.
    """
    m = len(word)
    if constraint is None:
        constraint = EnumConstraint.free(m)
    if len(constraint) != m:
        raise ValueError("constraint length != word length")
    for i in word:
        if not 1 <= i <= n - 1:
            raise ValueError(f"generator index {i} out of range for S_{n}")
    out: SweepResult = {}
    u = list(range(1, n + 1))
    if m == 0:
        out[tuple(u)] = {0: 1}
        return out
    in_a = bytearray(n + 1)
    for i in parabolic:
        in_a[i] = 1
    pos = list(range(-1, n))  # pos[value] = index of value in u
    letters = [word[m - 1 - k] for k in range(m)]  # processing order
    allowed = [constraint[m - 1 - k] for k in range(m)]
    kind = [0] * m      # 0 = U, 1 = D, 2 = S at each depth
    branch = [0] * m    # next-branch index per depth
    delta = [0] * m     # defect delta of the branch currently taken
    swapped = [False] * m
    defect = 0
    k = 0
    i = letters[0]
    a, b = pos[i], pos[i + 1]
    kind[0] = 1 if a > b else (2 if (b == a + 1 and in_a[a + 1]) else 0)
    while True:
        opts = allowed[k]
        if branch[k] < len(opts):
            e = opts[branch[k]]
            d = kind[k]
            if e == 0:
                dd = 1 if d == 0 else -1
                sw = False
            else:
                dd = 1 if d == 2 else 0
                sw = d != 2
            if sw:
                i = letters[k]
                a, b = pos[i], pos[i + 1]
                u[a], u[b] = u[b], u[a]
                pos[i], pos[i + 1] = b, a
            defect += dd
            if k + 1 == m:
                key = tuple(u)
                slot = out.get(key)
                if slot is None:
                    out[key] = {defect: 1}
                else:
                    slot[defect] = slot.get(defect, 0) + 1
                defect -= dd
                if sw:
                    i = letters[k]
                    a, b = pos[i], pos[i + 1]
                    u[a], u[b] = u[b], u[a]
                    pos[i], pos[i + 1] = b, a
                branch[k] += 1
            else:
                delta[k] = dd
                swapped[k] = sw
                k += 1
                branch[k] = 0
                i = letters[k]
                a, b = pos[i], pos[i + 1]
                kind[k] = 1 if a > b else (2 if (b == a + 1 and in_a[a + 1])
                                           else 0)
        else:
            if k == 0:
                break
            k -= 1
            defect -= delta[k]
            if swapped[k]:
                i = letters[k]
                a, b = pos[i], pos[i + 1]
                u[a], u[b] = u[b], u[a]
                pos[i], pos[i + 1] = b, a
            branch[k] += 1
    return out


def merge_sweeps(parts: Iterator[SweepResult] | Sequence[SweepResult],
                 ) -> SweepResult:
    """Exact commutative merge of partial sweeps."""
    out: SweepResult = {}
    for part in parts:
        for endpoint, hist in part.items():
            slot = out.setdefault(endpoint, {})
            for d, c in hist.items():
                slot[d] = slot.get(d, 0) + c
    return out


def _sweep_task(args) -> SweepResult:
    word, n, parabolic, slots = args
    return sweep(word, n, parabolic, EnumConstraint(slots))


def sweep_parallel(word: Sequence[int], n: int, parabolic,
                   constraint: EnumConstraint | None = None,
                   threads: int = 1) -> SweepResult:
    """Partitioned sweep over worker processes; results merge exactly."""
    m = len(word)
    if constraint is None:
        constraint = EnumConstraint.free(m)
    if threads <= 1:
        return sweep(word, n, parabolic, constraint)
    nfree = len(constraint.free_positions())
    k = 0
    while (1 << k) < 4 * threads and k < nfree and k < 10:
        k += 1
    parts = constraint.split(k)
    if len(parts) == 1:
        return sweep(word, n, parabolic, constraint)
    word = tuple(word)
    parabolic = tuple(sorted(set(parabolic)))
    jobs = [(word, n, parabolic, part.slots) for part in parts]
    try:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_sweep_task, jobs))
    except (OSError, ImportError) as exc:  # no worker processes available
        import sys

        print(f"heckekit: falling back to sequential sweep ({exc})",
              file=sys.stderr)
        results = [_sweep_task(job) for job in jobs]
    return merge_sweeps(results)


def defect_histogram(word: Sequence[int], n: int, parabolic,
                     constraint: EnumConstraint | None = None,
                     target: Permutation | None = None,
                     threads: int = 1) -> dict[int, int]:
    """Exact counts of subexpressions by parabolic defect.

    With `target` set, only subexpressions whose endpoint coset has that
    minimal representative are counted.

    >>> defect_histogram((2,), 3, {2})
    {-1: 1, 1: 1}
    """
    data = sweep_parallel(word, n, parabolic, constraint, threads)
    if target is not None:
        hist = data.get(tuple(target), {})
        return dict(sorted(hist.items()))
    out: dict[int, int] = {}
    for hist in data.values():
        for d, c in hist.items():
            out[d] = out.get(d, 0) + c
    return dict(sorted(out.items()))
