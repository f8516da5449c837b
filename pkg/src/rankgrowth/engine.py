"""Growth-polynomial pipeline.

Computes the per-word marginal rank function of an operator system on a
finite box, detects staircase stabilization, extracts the generating
function numerator by finite differences, interpolates the eventual
polynomial in the binomial basis with exact rational arithmetic, and
certifies the result against direct rank evaluation.

The whole chain works because the marginal function is decreasing
whenever every part of the system is triangular: its generating function
is then rational with denominator a product of (1 - Y_i) factors, and a
rational generating function of that shape forces eventual polynomial
values.  No floating point is used anywhere.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import ContractError, HypothesisError, InputError, RankGrowthError
from .operators import (
    MultiIndex,
    OperatorSystem,
    OrbitCache,
    Partition,
    TRIANGULAR,
    augment,
    degrees_below,
    graded_orbit,
    apply_word,
    lex_key,
    product_leq,
)

WINDOW_CERTIFIED = "window-certified"
BOX_TRUNCATED = "box-truncated"
CERTIFIED = "certified"


def default_box(m: int) -> Tuple[int, ...]:
    """Per-coordinate exploration bound keeping desk-scale cost."""
    if m <= 3:
        return (8,) * m
    if m <= 5:
        return (5,) * m
    return (3,) * m


@dataclass
class StabilizationConfig:
    """Exploration box, certification window width, parallelism hint."""

    box: Optional[Tuple[int, ...]] = None
    window: int = 2
    threads: int = 1

    def __post_init__(self):
        if self.window < 1:
            raise InputError("window width must be >= 1")
        if self.box is not None:
            self.box = tuple(int(b) for b in self.box)
            if any(b < 0 for b in self.box):
                raise InputError("box bounds must be nonnegative")
        if self.threads < 1:
            raise InputError("threads must be >= 1")

    def resolved_box(self, m: int) -> Tuple[int, ...]:
        if self.box is None:
            return default_box(m)
        if len(self.box) != m:
            raise InputError(f"box has {len(self.box)} coordinates, system has {m}")
        return self.box


def word_count(p: Partition, s: MultiIndex, mode: str = "graded") -> int:
    """Number of operator words at part degree s (or below, cumulatively)."""
    return p.word_count(tuple(s), mode)


def eval_f(
    sys: OperatorSystem,
    A,
    B,
    u: MultiIndex,
    cache: OrbitCache | None = None,
    context_sys: OperatorSystem | None = None,
):
    """Marginal rank of the word ``u`` applied to A.

    The base is every lex-earlier word of the same part degree applied to
    A, together with the full graded orbit of B (taken in the context
    system when one is supplied).  Summing over a whole part-degree slice
    telescopes to the relative rank of the graded orbits.
    """
    u = tuple(int(x) for x in u)
    if len(u) != sys.m:
        raise InputError(f"word length {len(u)} != m = {sys.m}")
    if cache is None:
        cache = OrbitCache()
    backend = sys.backend
    s = sys.partition.part_degree(u)
    builder = backend.basis_builder()
    base_sys = context_sys if context_sys is not None else sys
    builder.add_all(graded_orbit(base_sys, B, s))
    A_sorted = backend.sorted_elems(A)
    for r in sys.partition.words_of_part_degree(s):
        if lex_key(r) >= lex_key(u):
            break
        for a in A_sorted:
            builder.add(apply_word(sys, a, r, cache))
    return sum(1 for a in A_sorted if builder.add(apply_word(sys, a, u, cache)))


@dataclass
class DecreasingTable:
    """Tabulated marginal ranks on a finite box, with staircase metadata.

    ``values`` holds every word whose part degree fits under the box's
    part degree (a superset of the nominal box: lex-earlier words of the
    same degree are needed for correct marginals, so they come for free).
    ``violations`` lists comparable pairs where the value increases; any
    entry contradicts a declared triangular part.
    """

    box: Tuple[int, ...]
    partition: Partition
    values: Dict[MultiIndex, int]
    violations: List[Tuple[MultiIndex, MultiIndex]]
    slice_cap: Tuple[int, ...]
    seed_size: int

    @classmethod
    def from_function(cls, f, box: Sequence[int], partition: Partition, seed_size=None):
        """Synthetic table from an explicit function on multi-indices."""
        box = tuple(int(b) for b in box)
        cap = partition.part_degree(box)
        values = {}
        for s in degrees_below(cap):
            for r in partition.words_of_part_degree(s):
                values[r] = int(f(r))
        if seed_size is None:
            seed_size = max(values.values(), default=0)
        table = cls(box, partition, values, [], cap, seed_size)
        table.violations = table._scan_violations()
        return table

    def _scan_violations(self):
        out = []
        m = self.partition.m
        for u, fu in self.values.items():
            for i in range(m):
                up = u[:i] + (u[i] + 1,) + u[i + 1 :]
                fup = self.values.get(up)
                if fup is not None and fup > fu:
                    out.append((u, up))
        out.sort(key=lambda pair: (sum(pair[0]), lex_key(pair[0])))
        return out

    @property
    def is_decreasing(self) -> bool:
        return not self.violations

    def graded_sum(self, s: MultiIndex) -> int:
        return sum(
            self.values[r] for r in self.partition.words_of_part_degree(tuple(s))
        )


def tabulate_f(
    sys: OperatorSystem,
    A,
    B,
    box: Sequence[int] | None = None,
    cfg: StabilizationConfig | None = None,
    context_sys: OperatorSystem | None = None,
) -> DecreasingTable:
    """Tabulate the marginal rank function over every slice under the box.

    Slices (part-degree classes) are independent units of work: each gets
    a fresh basis builder seeded with the orbit of B, then consumes its
    words in ascending lex order.  Worker scheduling cannot change any
    value, so the threads hint only affects wall time.
    """
    cfg = cfg or StabilizationConfig()
    box = tuple(box) if box is not None else cfg.resolved_box(sys.m)
    if len(box) != sys.m:
        raise InputError(f"box has {len(box)} coordinates, system has {sys.m}")
    backend = sys.backend
    A_sorted = backend.sorted_elems(A)
    B_list = backend.dedupe(B)
    for x in A_sorted + B_list:
        backend.validate(x)
    cap = sys.partition.part_degree(box)
    cache = OrbitCache()
    cache_b = OrbitCache()

    def slice_values(s: MultiIndex) -> Dict[MultiIndex, int]:
        builder = backend.basis_builder()
        base_sys = context_sys if context_sys is not None else sys
        builder.add_all(graded_orbit(base_sys, B_list, s, cache_b))
        vals = {}
        for r in sys.partition.words_of_part_degree(s):
            gain = 0
            for a in A_sorted:
                if builder.add(apply_word(sys, a, r, cache)):
                    gain += 1
            vals[r] = gain
        return vals

    slices = list(degrees_below(cap))
    values: Dict[MultiIndex, int] = {}
    if cfg.threads > 1:
        with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
            for vals in pool.map(slice_values, slices):
                values.update(vals)
    else:
        for s in slices:
            values.update(slice_values(s))

    table = DecreasingTable(box, sys.partition, values, [], cap, len(A_sorted))
    assert all(0 <= v <= len(A_sorted) for v in values.values())
    table.violations = table._scan_violations()
    return table


@dataclass
class StaircaseCertificate:
    """Minimal antichains of the level sets and their least upper bound.

    ``status`` is window-certified when the table is constant across the
    clamp window beyond the candidate bound, box-truncated otherwise.
    Window certification is evidence, not proof: a decreasing function
    may still drop beyond any finite box.
    """

    levels: Dict[int, Tuple[MultiIndex, ...]]
    m_bar: MultiIndex
    status: str
    window: int
    failure: Optional[str] = None

    @property
    def window_certified(self) -> bool:
        return self.status == WINDOW_CERTIFIED


def detect_stabilization(
    table: DecreasingTable, cfg: StabilizationConfig | None = None
) -> StaircaseCertificate:
    """Find the staircase of a decreasing table and try to certify it."""
    cfg = cfg or StabilizationConfig()
    if not table.is_decreasing:
        raise ContractError(
            f"table is not decreasing; first violation {table.violations[0]!r}"
        )
    m = table.partition.m
    zero = (0,) * m
    f0 = table.values.get(zero)
    if f0 is None:
        raise InputError("table does not cover the zero word")

    by_value = sorted(table.values.items(), key=lambda kv: (sum(kv[0]), lex_key(kv[0])))
    levels: Dict[int, Tuple[MultiIndex, ...]] = {}
    m_bar = list(zero)
    for n in range(f0 + 1):
        antichain: List[MultiIndex] = []
        for u, fu in by_value:
            if fu <= n and not any(product_leq(v, u) for v in antichain):
                antichain.append(u)
        levels[n] = tuple(antichain)
        for u in antichain:
            m_bar = [max(a, b) for a, b in zip(m_bar, u)]
    m_bar = tuple(m_bar)

    w = cfg.window
    band_cap = tuple(c + w for c in m_bar)
    status, failure = WINDOW_CERTIFIED, None
    if not product_leq(table.partition.part_degree(band_cap), table.slice_cap):
        status = BOX_TRUNCATED
        failure = (
            f"window {band_cap} exceeds tabulated part degrees {table.slice_cap}"
        )
    else:
        for u in itertools.product(*(range(c + 1) for c in band_cap)):
            if product_leq(u, m_bar):
                continue
            clamped = tuple(min(a, b) for a, b in zip(u, m_bar))
            if table.values[u] != table.values[clamped]:
                status = BOX_TRUNCATED
                failure = f"value changes beyond candidate bound at {u}"
                break
    return StaircaseCertificate(levels, m_bar, status, w, failure)


@dataclass
class GeneratingNumerator:
    """Numerator of the collapsed generating function.

    Integer coefficients indexed by part-degree exponents, all bounded by
    ``cap`` (the part degree of the staircase bound).  The denominator is
    implicitly the product of (1 - Y_i)^{d_i}.
    """

    coeffs: Dict[MultiIndex, int]
    cap: MultiIndex
    part_sizes: Tuple[int, ...]

    def at_ones(self) -> int:
        return sum(self.coeffs.values())


def numerator_from_table(
    table: DecreasingTable, m_bar: MultiIndex, p: Partition
) -> GeneratingNumerator:
    """Coordinatewise finite differences, then the partition substitution.

    Applying (1 - Y_i) for each of the m variables in turn leaves integer
    coefficients supported below ``m_bar``; substituting one variable per
    part collapses exponents to part degrees.
    """
    m_bar = tuple(int(x) for x in m_bar)
    if len(m_bar) != p.m:
        raise InputError("staircase bound has wrong length")
    pts = list(itertools.product(*(range(c + 1) for c in m_bar)))
    h: Dict[MultiIndex, int] = {}
    for u in pts:
        if u not in table.values:
            raise InputError(f"table does not cover {u} required by the numerator")
        h[u] = table.values[u]
    for axis in range(p.m):
        h = {
            u: h[u] - h[u[:axis] + (u[axis] - 1,) + u[axis + 1 :]] if u[axis] else h[u]
            for u in pts
        }
    coeffs: Dict[MultiIndex, int] = {}
    for u, c in h.items():
        if c:
            s = p.part_degree(u)
            coeffs[s] = coeffs.get(s, 0) + c
    coeffs = {s: c for s, c in coeffs.items() if c}
    return GeneratingNumerator(coeffs, p.part_degree(m_bar), p.part_sizes)


class GrowthPolynomial:
    """Multivariate polynomial with exact rational coefficients.

    ``threshold`` is a sound stabilization bound: the polynomial agrees
    with the tabulated growth function at every point coordinatewise
    above it (not necessarily the least such bound).
    """

    def __init__(
        self,
        coeffs: Dict[MultiIndex, Fraction],
        degree_bound: Tuple[int, ...],
        threshold: Tuple[int, ...],
        certification: str = BOX_TRUNCATED,
    ):
        self.coeffs = {
            tuple(e): Fraction(c) for e, c in coeffs.items() if c != 0
        }
        self.degree_bound = tuple(degree_bound)
        self.threshold = tuple(threshold)
        self.certification = certification
        for e in self.coeffs:
            if len(e) != len(self.degree_bound):
                raise InputError("exponent arity mismatch")
            if not product_leq(e, self.degree_bound):
                raise InputError(
                    f"exponent {e} exceeds degree bound {self.degree_bound}"
                )

    @property
    def k(self) -> int:
        return len(self.degree_bound)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def evaluate(self, s: Sequence[int]) -> Fraction:
        s = tuple(s)
        total = Fraction(0)
        for e, c in self.coeffs.items():
            term = c
            for base, exp in zip(s, e):
                term *= Fraction(base) ** exp
            total += term
        return total

    def leading_coefficient(self) -> Fraction:
        """Coefficient of the maximal monomial allowed by the degree bound."""
        return self.coeffs.get(self.degree_bound, Fraction(0))

    def degree_in(self, i: int) -> int:
        return max((e[i] for e in self.coeffs), default=0)

    def terms_sorted(self) -> List[Tuple[MultiIndex, Fraction]]:
        """Terms in descending graded-lex order on exponents."""
        return sorted(
            self.coeffs.items(), key=lambda ec: (sum(ec[0]), ec[0]), reverse=True
        )

    def subtract(self, other: "GrowthPolynomial") -> "GrowthPolynomial":
        if other.k != self.k:
            raise InputError("cannot combine polynomials of different arity")
        coeffs = dict(self.coeffs)
        for e, c in other.coeffs.items():
            coeffs[e] = coeffs.get(e, Fraction(0)) - c
        bound = tuple(
            max(a, b) for a, b in zip(self.degree_bound, other.degree_bound)
        )
        thresh = tuple(max(a, b) for a, b in zip(self.threshold, other.threshold))
        cert = (
            CERTIFIED
            if self.certification == CERTIFIED and other.certification == CERTIFIED
            else BOX_TRUNCATED
        )
        return GrowthPolynomial(coeffs, bound, thresh, cert)

    def pretty(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for e, c in self.terms_sorted():
            mono = self._monomial_str(e)
            if mono == "1":
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            parts.append((c < 0, body))
        out = ("-" if parts[0][0] else "") + parts[0][1]
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    def _monomial_str(self, e: MultiIndex) -> str:
        if not any(e):
            return "1"
        names = ["Y"] if self.k == 1 else [f"Y{i + 1}" for i in range(self.k)]
        bits = []
        for name, exp in zip(names, e):
            if exp == 1:
                bits.append(name)
            elif exp > 1:
                bits.append(f"{name}^{exp}")
        return "*".join(bits)

    def __eq__(self, other):
        return isinstance(other, GrowthPolynomial) and self.coeffs == other.coeffs

    def __repr__(self):
        return f"GrowthPolynomial({self.pretty()!r}, threshold={self.threshold})"


def _binomial_basis_coeffs(r: int, d: int) -> List[Fraction]:
    """Coefficients of the degree-(d-1) polynomial C(Y - r + d - 1, d - 1)."""
    coeffs = [Fraction(1)]
    for j in range(d - 1):
        shift = d - 1 - r - j
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i + 1] += c
            nxt[i] += c * shift
        coeffs = nxt
    denom = math.factorial(d - 1)
    return [c / denom for c in coeffs]


def interpolate(numerator: GeneratingNumerator, d: Sequence[int]) -> GrowthPolynomial:
    """Expand the rational generating function into its eventual polynomial.

    Each numerator term a * Y^r contributes a times the product of
    binomial-basis polynomials C(Y_i - r_i + d_i - 1, d_i - 1); the sum
    agrees with the growth function at every point above the numerator's
    exponent cap, and its top coefficient is the numerator evaluated at
    (1, ..., 1) divided by the product of (d_i - 1)!.
    """
    d = tuple(int(x) for x in d)
    if any(x < 1 for x in d):
        raise InputError("denominator exponents must be >= 1")
    k = len(d)
    total: Dict[MultiIndex, Fraction] = {}
    for r, a in numerator.coeffs.items():
        term: Dict[MultiIndex, Fraction] = {(): Fraction(a)}
        for i in range(k):
            basis = _binomial_basis_coeffs(r[i], d[i])
            nxt: Dict[MultiIndex, Fraction] = {}
            for e, c in term.items():
                for j, bc in enumerate(basis):
                    if bc:
                        key = e + (j,)
                        nxt[key] = nxt.get(key, Fraction(0)) + c * bc
            term = nxt
        for e, c in term.items():
            total[e] = total.get(e, Fraction(0)) + c
    bound = tuple(x - 1 for x in d)
    return GrowthPolynomial(total, bound, numerator.cap)


def dominant_terms(P: GrowthPolynomial):
    """Terms maximal under some coordinate-permutation lexicographic order."""
    if P.is_zero:
        return set()
    exps = list(P.coeffs)
    winners = set()
    for sigma in itertools.permutations(range(P.k)):
        best = max(exps, key=lambda e: lex_key(tuple(e[i] for i in sigma)))
        winners.add(best)
    return {(e, P.coeffs[e]) for e in winners}


@dataclass
class IdealLevel:
    """One downward-closed level set of the table, with its frontier."""

    n: int
    frontier: Tuple[MultiIndex, ...]
    graded_counts: Dict[MultiIndex, int]


@dataclass
class MonomialModuleRealization:
    """Level ideals whose graded counts sum back to the tabulated ranks."""

    ideals: List[IdealLevel]
    counts_ok: bool
    mismatches: List[Tuple[MultiIndex, int, int]]


def realize_monomial_module(table: DecreasingTable) -> MonomialModuleRealization:
    """Split a decreasing table into indicator ideals I_n = {u : f(u) >= n}.

    Each level is downward closed; summing the per-degree counts over all
    levels recovers the graded rank, which the report double-checks for
    every part degree in the box.
    """
    if not table.is_decreasing:
        raise ContractError(
            f"table is not decreasing; first violation {table.violations[0]!r}"
        )
    zero = (0,) * table.partition.m
    f0 = table.values[zero]
    ideals = []
    for n in range(1, f0 + 1):
        members = [u for u, fu in table.values.items() if fu >= n]
        members.sort(key=lambda u: (sum(u), lex_key(u)), reverse=True)
        frontier: List[MultiIndex] = []
        for u in members:
            if not any(product_leq(u, v) for v in frontier):
                frontier.append(u)
        counts: Dict[MultiIndex, int] = {}
        for u in members:
            s = table.partition.part_degree(u)
            counts[s] = counts.get(s, 0) + 1
        ideals.append(IdealLevel(n, tuple(sorted(frontier)), counts))
    mismatches = []
    for s in degrees_below(table.slice_cap):
        total = sum(level.graded_counts.get(s, 0) for level in ideals)
        expect = table.graded_sum(s)
        if total != expect:
            mismatches.append((s, total, expect))
    return MonomialModuleRealization(ideals, not mismatches, mismatches)


@dataclass
class VerifyReport:
    """Pointwise comparison of a polynomial against direct rank evaluation."""

    window: Tuple[MultiIndex, MultiIndex]
    points: List[Tuple[MultiIndex, int, Fraction]]
    mismatches: List[Tuple[MultiIndex, int, Fraction]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _direct_rank(
    sys: OperatorSystem,
    A,
    B,
    s: MultiIndex,
    context_sys: OperatorSystem | None = None,
    caches: Tuple[OrbitCache, OrbitCache] | None = None,
) -> int:
    cache_a, cache_b = caches if caches else (OrbitCache(), OrbitCache())
    base_sys = context_sys if context_sys is not None else sys
    builder = sys.backend.basis_builder()
    builder.add_all(graded_orbit(base_sys, B, s, cache_b))
    return builder.add_all(graded_orbit(sys, A, s, cache_a))


def verify_fit(
    P: GrowthPolynomial,
    sys: OperatorSystem,
    A,
    B,
    window: Tuple[Sequence[int], Sequence[int]],
    context_sys: OperatorSystem | None = None,
) -> VerifyReport:
    """Exact comparison of P with directly computed ranks on a window."""
    lo, hi = (tuple(window[0]), tuple(window[1]))
    if len(lo) != P.k or len(hi) != P.k:
        raise InputError("window arity mismatch")
    if not product_leq(P.threshold, lo):
        raise ContractError(
            f"window start {lo} is below the stabilization threshold {P.threshold}"
        )
    caches = (OrbitCache(), OrbitCache())
    points, mismatches = [], []
    for s in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        direct = _direct_rank(sys, A, B, s, context_sys, caches)
        val = P.evaluate(s)
        points.append((s, direct, val))
        if val != direct:
            mismatches.append((s, direct, val))
    return VerifyReport((lo, hi), points, mismatches)


@dataclass
class PipelineResult:
    """Everything the pipeline produced for one system and seed pair."""

    system: OperatorSystem
    table: DecreasingTable
    certificate: StaircaseCertificate
    numerator: GeneratingNumerator
    polynomial: GrowthPolynomial
    verification: VerifyReport
    status: str
    warnings: List[str] = field(default_factory=list)

    @property
    def phi_rank_value(self) -> Fraction:
        return Fraction(self.numerator.at_ones())


def _require_triangular(sys: OperatorSystem, what: str):
    for i, flag in enumerate(sys.part_flags):
        if flag != TRIANGULAR:
            raise HypothesisError(
                f"{what} requires every part declared triangular; "
                f"part {i + 1} is declared {flag}",
                witness=f"part {i + 1}",
            )


def _check_context(sys: OperatorSystem, context_sys: OperatorSystem):
    if context_sys.backend is not sys.backend:
        raise InputError("context system must share the backend")
    if context_sys.k != sys.k:
        raise InputError("context system must use the same number of parts")
    for i in range(sys.k):
        small, big = list(sys.part_maps(i)), list(context_sys.part_maps(i))
        it = iter(big)
        if not all(any(phi is psi for psi in it) for phi in small):
            raise InputError(
                f"part {i + 1} of the primary system is not a subtuple of the context"
            )
    _require_triangular(context_sys, "context mode")


def analyze_graded(
    sys: OperatorSystem,
    A,
    B,
    cfg: StabilizationConfig | None = None,
    context_sys: OperatorSystem | None = None,
) -> PipelineResult:
    """Full graded pipeline: tabulate, stabilize, interpolate, verify.

    Raises HypothesisError when a part lacks the triangular declaration or
    when the tabulated values contradict it (an increase along the product
    order is an explicit counterexample to the declared hypothesis).
    """
    cfg = cfg or StabilizationConfig()
    _require_triangular(sys, "the graded pipeline")
    if context_sys is not None:
        _check_context(sys, context_sys)
    table = tabulate_f(sys, A, B, None, cfg, context_sys)
    if table.violations:
        u, up = table.violations[0]
        raise HypothesisError(
            "marginal ranks increase along the product order "
            f"({u} -> {up}: {table.values[u]} -> {table.values[up]}); "
            "a declared triangular part does not satisfy the triangularity "
            "rank inequality",
            witness=(u, up),
        )
    certificate = detect_stabilization(table, cfg)
    m_bar = certificate.m_bar
    if not product_leq(sys.partition.part_degree(m_bar), table.slice_cap):
        # the joint bound outgrew the tabulated slices (certificate is
        # necessarily box-truncated then); fall back to the covered corner
        m_bar = tuple(min(a, b) for a, b in zip(m_bar, table.box))
    numerator = numerator_from_table(table, m_bar, sys.partition)
    polynomial = interpolate(numerator, sys.partition.part_sizes)
    lo = polynomial.threshold
    hi = tuple(t + cfg.window for t in lo)
    verification = verify_fit(polynomial, sys, A, B, (lo, hi), context_sys)
    warnings = []
    if not certificate.window_certified:
        warnings.append(f"staircase not certified: {certificate.failure}")
    if not verification.ok:
        warnings.append(
            f"verification found {len(verification.mismatches)} mismatching points"
        )
    status = (
        CERTIFIED
        if certificate.window_certified and verification.ok
        else BOX_TRUNCATED
    )
    polynomial.certification = status
    return PipelineResult(
        sys, table, certificate, numerator, polynomial, verification, status, warnings
    )


def dimension_polynomial(
    sys: OperatorSystem, A, B=(), cfg: StabilizationConfig | None = None
) -> GrowthPolynomial:
    """Eventual polynomial of the graded orbit ranks of A over B."""
    return analyze_graded(sys, A, B, cfg).polynomial


def cumulative_polynomial(
    sys: OperatorSystem, A, B=(), cfg: StabilizationConfig | None = None
) -> GrowthPolynomial:
    """Eventual polynomial of the cumulative orbit ranks of A over B.

    Runs the graded pipeline on the augmented system, whose graded orbits
    are exactly the cumulative orbits of the original; per-variable degree
    may reach d_i rather than d_i - 1.
    """
    return analyze_cumulative(sys, A, B, cfg).polynomial


def analyze_cumulative(
    sys: OperatorSystem, A, B=(), cfg: StabilizationConfig | None = None
) -> PipelineResult:
    cfg = cfg or StabilizationConfig()
    aug = augment(sys)
    if cfg.box is not None and len(cfg.box) == sys.m:
        cfg = StabilizationConfig(
            box=_augment_box(cfg.box, sys.partition),
            window=cfg.window,
            threads=cfg.threads,
        )
    return analyze_graded(aug, A, B, cfg)


def _augment_box(box: Tuple[int, ...], p: Partition) -> Tuple[int, ...]:
    """Insert an identity-coordinate bound per part (the max of the part)."""
    out: List[int] = []
    for i in range(p.k):
        part = box[p.part_slice(i)]
        out.append(max(part))
        out.extend(part)
    return tuple(out)


def context_dimension_polynomial(
    sys: OperatorSystem,
    context_sys: OperatorSystem,
    A,
    B=(),
    cfg: StabilizationConfig | None = None,
) -> GrowthPolynomial:
    """Graded polynomial of ranks of A-orbits over context-system orbits of B."""
    return analyze_graded(sys, A, B, cfg, context_sys=context_sys).polynomial


def phi_rank(
    sys: OperatorSystem, A, B=(), cfg: StabilizationConfig | None = None
) -> Fraction:
    """Rank of A over B in the orbit-closure matroid of the system.

    Equals the collapsed numerator evaluated at (1, ..., 1), which is the
    leading coefficient of the dimension polynomial times the product of
    (d_i - 1)!.  On an augmented system the value is additionally checked
    to be a natural number.
    """
    result = analyze_graded(sys, A, B, cfg)
    value = result.phi_rank_value
    lead = result.polynomial.leading_coefficient()
    factor = math.prod(
        math.factorial(d - 1) for d in sys.partition.part_sizes
    )
    assert lead * factor == value
    if sys.augmented and (value.denominator != 1 or value < 0):
        raise RankGrowthError(
            f"augmented-system rank must be a natural number, got {value}"
        )
    return value


@dataclass
class ClosureDecision:
    """Trichotomy for orbit-closure membership: member / non-member / inconclusive.

    ``non-member`` is only returned when the certified pipeline supports
    it (marginals identically one on the certified staircase, so the
    ratio of orbit rank to word count stays at one); it carries the same
    trust level as any certified polynomial, never more.
    """

    decision: str
    witness: Optional[MultiIndex] = None
    detail: str = ""

    @property
    def is_member(self) -> bool:
        return self.decision == "member"


def phi_closure_member(
    sys: OperatorSystem, a, B=(), cfg: StabilizationConfig | None = None
) -> ClosureDecision:
    """Search for an orbit-rank deficit of a single element over B.

    A zero marginal anywhere in the box is a concrete witness of
    membership.  With triangular parts and a certified pipeline, the
    absence of zeros certifies non-membership; otherwise the box was
    simply too small and the answer is inconclusive.
    """
    cfg = cfg or StabilizationConfig()
    table = tabulate_f(sys, [a], B, None, cfg)
    zeros = sorted(
        (u for u, v in table.values.items() if v == 0),
        key=lambda u: (sum(u), lex_key(u)),
    )
    if zeros:
        witness = sys.partition.part_degree(zeros[0])
        return ClosureDecision(
            "member",
            witness=witness,
            detail=f"orbit rank falls below the word count at part degree {witness}",
        )
    if not sys.declared(TRIANGULAR):
        return ClosureDecision(
            "inconclusive",
            detail="no witness in the box and the parts are not declared "
            "triangular, so the limit dichotomy does not apply",
        )
    try:
        result = analyze_graded(sys, [a], B, cfg)
    except HypothesisError as exc:
        return ClosureDecision("inconclusive", detail=str(exc))
    if result.status == CERTIFIED:
        return ClosureDecision(
            "non-member",
            detail="marginals are identically one on the certified staircase; "
            "orbit rank equals the word count for all part degrees",
        )
    return ClosureDecision(
        "inconclusive", detail="staircase could not be certified within the box"
    )
