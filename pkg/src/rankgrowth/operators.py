"""Multi-index machinery and commuting operator systems.

An operator system is a tuple of m commuting self-maps of a matroid
ground set together with a partition of the maps into k consecutive
blocks.  Words are multi-indices in N^m applied through a per-run orbit
cache; graded and cumulative orbits, augmentation by the identity map,
and the sampled hypothesis checks all live here.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable, List, Sequence, Tuple

from .errors import InputError, OperatorError
from .matroid import RankOracle

MultiIndex = Tuple[int, ...]

TRIANGULAR = "triangular"
QUASI_TRIANGULAR = "quasi-triangular"


def total_degree(r: MultiIndex) -> int:
    return sum(r)


def lex_compare(r: MultiIndex, s: MultiIndex) -> int:
    """Lexicographic comparison with emphasis on the last coordinate.

    Returns -1, 0 or +1.  ``r`` is smaller iff at the highest coordinate
    where the two differ, ``r`` has the smaller entry.
    """
    if len(r) != len(s):
        raise InputError(f"length mismatch: {len(r)} vs {len(s)}")
    for a, b in zip(reversed(r), reversed(s)):
        if a != b:
            return -1 if a < b else 1
    return 0


def lex_key(r: MultiIndex) -> MultiIndex:
    """Sort key realizing the last-coordinate-emphasis lexicographic order."""
    return tuple(reversed(r))


def product_leq(r: MultiIndex, s: MultiIndex) -> bool:
    """Product (coordinatewise) order on multi-indices."""
    return all(a <= b for a, b in zip(r, s))


class Partition:
    """Consecutive grouping of m operator slots into k blocks of sizes d_i."""

    def __init__(self, part_sizes: Sequence[int]):
        sizes = tuple(int(d) for d in part_sizes)
        if not sizes or any(d < 1 for d in sizes):
            raise InputError(f"part sizes must be positive, got {sizes!r}")
        self.part_sizes = sizes
        self.k = len(sizes)
        self.m = sum(sizes)
        self.breakpoints = tuple(itertools.accumulate((0,) + sizes))  # k+1 entries

    def part_slice(self, i: int) -> slice:
        return slice(self.breakpoints[i], self.breakpoints[i + 1])

    def part_degree(self, r: MultiIndex) -> MultiIndex:
        if len(r) != self.m:
            raise InputError(f"multi-index length {len(r)} != m = {self.m}")
        return tuple(sum(r[self.part_slice(i)]) for i in range(self.k))

    def words_of_part_degree(self, s: MultiIndex) -> List[MultiIndex]:
        """All words r with part degree s, ascending in the lex order."""
        if len(s) != self.k:
            raise InputError(f"part-degree length {len(s)} != k = {self.k}")
        per_part = [
            list(compositions(s[i], self.part_sizes[i])) for i in range(self.k)
        ]
        words = [
            tuple(itertools.chain.from_iterable(combo))
            for combo in itertools.product(*per_part)
        ]
        words.sort(key=lex_key)
        return words

    def word_count(self, s: MultiIndex, mode: str = "graded") -> int:
        """Number of words of part degree s (graded) or part degree <= s (cumulative)."""
        if mode == "graded":
            return math.prod(
                math.comb(s[i] + self.part_sizes[i] - 1, self.part_sizes[i] - 1)
                for i in range(self.k)
            )
        if mode == "cumulative":
            return math.prod(
                math.comb(s[i] + self.part_sizes[i], self.part_sizes[i])
                for i in range(self.k)
            )
        raise InputError(f"unknown word-count mode {mode!r}")

    def __eq__(self, other):
        return isinstance(other, Partition) and self.part_sizes == other.part_sizes

    def __repr__(self):
        return f"Partition({list(self.part_sizes)})"


def part_degree(r: MultiIndex, p: Partition) -> MultiIndex:
    return p.part_degree(r)


def compositions(total: int, parts: int):
    """All tuples of ``parts`` naturals summing to ``total``."""
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in compositions(total - head, parts - 1):
            yield (head,) + rest


def degrees_below(cap: MultiIndex):
    """All part-degree tuples s with s <= cap in the product order."""
    return itertools.product(*(range(c + 1) for c in cap))


def identity_map(x):
    return x


class OrbitCache:
    """Memo of (seed key, word) -> element.

    The cached value at r + e_i is always the i-th map applied to the
    value at r, so a populated cache witnesses path independence.
    """

    def __init__(self):
        self.data = {}

    def __len__(self):
        return len(self.data)


class OperatorSystem:
    """m commuting self-maps of a matroid ground set plus a partition.

    ``part_flags`` records, per block, the strongest hypothesis the
    constructor is willing to declare (``triangular`` or
    ``quasi-triangular``).  Declarations are trusted by the engine but
    double-checked against tabulated evidence; see ``check_system`` for
    the sampled test.
    """

    def __init__(
        self,
        maps: Sequence[Callable],
        partition: Partition,
        backend: RankOracle,
        part_flags: Sequence[str] | None = None,
        augmented: bool = False,
    ):
        self.maps = tuple(maps)
        self.partition = partition
        self.backend = backend
        if len(self.maps) != partition.m:
            raise InputError(
                f"{len(self.maps)} maps but partition expects m = {partition.m}"
            )
        if part_flags is None:
            part_flags = (TRIANGULAR,) * partition.k
        self.part_flags = tuple(part_flags)
        if len(self.part_flags) != partition.k:
            raise InputError("one flag per part required")
        for f in self.part_flags:
            if f not in (TRIANGULAR, QUASI_TRIANGULAR):
                raise InputError(f"unknown part flag {f!r}")
        self.augmented = augmented

    @property
    def m(self) -> int:
        return self.partition.m

    @property
    def k(self) -> int:
        return self.partition.k

    def part_maps(self, i: int) -> Tuple[Callable, ...]:
        return self.maps[self.partition.part_slice(i)]

    def declared(self, flag: str) -> bool:
        """True when every part declares at least ``flag``."""
        if flag == QUASI_TRIANGULAR:
            return True  # triangular implies quasi-triangular
        return all(f == TRIANGULAR for f in self.part_flags)

    def with_flags(self, part_flags: Sequence[str]) -> "OperatorSystem":
        return OperatorSystem(
            self.maps, self.partition, self.backend, part_flags, self.augmented
        )


def apply_word(sys: OperatorSystem, a, r: MultiIndex, cache: OrbitCache | None = None):
    """Apply the word with multiplicities ``r`` to ``a``, memoized.

    Descends one coordinate at a time from the nearest cached ancestor,
    always decrementing the highest nonzero coordinate, so identical
    prefixes are shared across the whole run.
    """
    if len(r) != sys.m:
        raise InputError(f"word length {len(r)} != m = {sys.m}")
    if cache is None:
        cache = OrbitCache()
    seed = sys.backend.key(a)
    data = cache.data
    pending = []
    cur = tuple(r)
    while any(cur) and (seed, cur) not in data:
        i = max(j for j, c in enumerate(cur) if c)
        pending.append((cur, i))
        cur = cur[:i] + (cur[i] - 1,) + cur[i + 1 :]
    val = a if not any(cur) else data[(seed, cur)]
    for word, i in reversed(pending):
        try:
            val = sys.maps[i](val)
        except Exception as exc:  # noqa: BLE001 - rewrap with the word for context
            raise OperatorError(
                f"map {i + 1} failed while applying word {word}: {exc}"
            ) from exc
        data[(seed, word)] = val
    return val


def graded_orbit(
    sys: OperatorSystem, A, s: MultiIndex, cache: OrbitCache | None = None
) -> List:
    """Deduplicated set of all word images of A at part degree exactly s.

    Enumeration order is deterministic: seeds sorted by canonical key,
    words ascending in the lex order.
    """
    if cache is None:
        cache = OrbitCache()
    words = sys.partition.words_of_part_degree(s)
    out, seen = [], set()
    for a in sys.backend.sorted_elems(A):
        for r in words:
            x = apply_word(sys, a, r, cache)
            k = sys.backend.key(x)
            if k not in seen:
                seen.add(k)
                out.append(x)
    return out


def cumulative_orbit(
    sys: OperatorSystem, A, s: MultiIndex, cache: OrbitCache | None = None
) -> List:
    """Deduplicated set of all word images of A at part degree <= s."""
    if cache is None:
        cache = OrbitCache()
    out, seen = [], set()
    for t in degrees_below(tuple(s)):
        for x in graded_orbit(sys, A, t, cache):
            k = sys.backend.key(x)
            if k not in seen:
                seen.add(k)
                out.append(x)
    return out


def augment(sys: OperatorSystem) -> OperatorSystem:
    """Prepend the identity map to every part; part sizes become d_i + 1.

    Graded orbits of the augmented system coincide with cumulative orbits
    of the original, which is how the cumulative pipeline is run.
    """
    maps: List[Callable] = []
    for i in range(sys.k):
        maps.append(identity_map)
        maps.extend(sys.part_maps(i))
    partition = Partition(tuple(d + 1 for d in sys.partition.part_sizes))
    # a quasi-triangular part becomes triangular once the identity is adjoined
    flags = (TRIANGULAR,) * sys.k
    return OperatorSystem(maps, partition, sys.backend, flags, augmented=True)


@dataclass
class SystemCheckReport:
    """Outcome of the sampled commutation / triangularity checks."""

    commutation_failures: List[str] = field(default_factory=list)
    triangular_failures: List[str] = field(default_factory=list)
    quasi_failures: List[str] = field(default_factory=list)
    parts_triangular: Tuple[bool, ...] = ()
    parts_quasi_triangular: Tuple[bool, ...] = ()

    @property
    def commutation_ok(self) -> bool:
        return not self.commutation_failures

    @property
    def triangular_ok(self) -> bool:
        return all(self.parts_triangular)

    @property
    def quasi_triangular_ok(self) -> bool:
        return all(self.parts_quasi_triangular)

    def supports_declaration(self, sys: OperatorSystem) -> bool:
        """Did the sampled evidence back every declared flag?"""
        if not self.commutation_ok:
            return False
        for i, flag in enumerate(sys.part_flags):
            if flag == TRIANGULAR and not self.parts_triangular[i]:
                return False
            if flag == QUASI_TRIANGULAR and not self.parts_quasi_triangular[i]:
                return False
        return True


def _part_inequality_failures(
    backend: RankOracle, maps: Sequence[Callable], pairs, label: str
) -> List[str]:
    """Sampled rank inequality characterizing a triangular block.

    For each i, the rank of the i-th map's image of A over the images of
    A+B under the earlier maps (and of B under the i-th) must not exceed
    the rank of A over B.
    """
    failures = []
    for A, B in pairs:
        AB = list(A) + list(B)
        rhs = backend.relative_rank(A, B)
        for i, phi in enumerate(maps):
            try:
                base: List = []
                for psi in maps[:i]:
                    base.extend(psi(x) for x in AB)
                base.extend(phi(x) for x in B)
                lhs = backend.relative_rank([phi(x) for x in A], base)
            except Exception:  # noqa: BLE001 - unmappable sample points are skipped
                continue
            if lhs > rhs:
                failures.append(
                    f"{label}: map {i + 1} gives rank {lhs} > {rhs} "
                    f"on A={A!r}, B={B!r}"
                )
                break
    return failures


def check_system(
    sys: OperatorSystem, sample, depth: int = 3, pair_count: int = 40, seed: int = 0
) -> SystemCheckReport:
    """Sampled evidence for commutation and the per-part hypotheses.

    Commutation is tested pointwise on the orbit of ``sample`` up to the
    given word depth.  Each part is then tested for the triangular rank
    inequality on randomly drawn subset pairs of that orbit, and for the
    quasi-triangular variant via the same test with the identity map
    prepended.  This is evidence, not proof: the properties quantify over
    the whole (typically infinite) ground set.
    """
    if depth < 1:
        raise InputError("depth must be >= 1")
    backend = sys.backend
    rng = random.Random(seed)
    report = SystemCheckReport()

    cache = OrbitCache()
    pts = []
    seen = set()
    for a in backend.sorted_elems(sample):
        for t in range(max(1, depth - 1)):
            for r in _words_of_total_degree(sys.m, t):
                try:
                    x = apply_word(sys, a, r, cache)
                except OperatorError:
                    continue
                k = backend.key(x)
                if k not in seen:
                    seen.add(k)
                    pts.append(x)
    for x in pts:
        for i in range(sys.m):
            for j in range(i + 1, sys.m):
                try:
                    lhs = sys.maps[i](sys.maps[j](x))
                    rhs = sys.maps[j](sys.maps[i](x))
                except Exception:  # noqa: BLE001 - out-of-range points are skipped
                    continue
                if backend.key(lhs) != backend.key(rhs):
                    report.commutation_failures.append(
                        f"maps {i + 1} and {j + 1} disagree at {x!r}: "
                        f"{lhs!r} vs {rhs!r}"
                    )

    pairs = []
    for _ in range(pair_count):
        if not pts:
            break
        A = rng.sample(pts, k=min(len(pts), rng.randint(1, 3)))
        B = rng.sample(pts, k=min(len(pts), rng.randint(0, 3)))
        pairs.append((A, B))

    tri, quasi = [], []
    for i in range(sys.k):
        maps = sys.part_maps(i)
        fails = _part_inequality_failures(backend, maps, pairs, f"part {i + 1}")
        report.triangular_failures.extend(fails)
        tri.append(not fails)
        fails_q = _part_inequality_failures(
            backend, (identity_map,) + maps, pairs, f"part {i + 1} (augmented)"
        )
        report.quasi_failures.extend(fails_q)
        quasi.append(not fails_q)
    report.parts_triangular = tuple(tri)
    report.parts_quasi_triangular = tuple(quasi)
    return report


def _words_of_total_degree(m: int, t: int):
    return sorted(compositions(t, m), key=lex_key)
