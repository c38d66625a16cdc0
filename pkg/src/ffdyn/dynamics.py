"""Rational maps on P^1(F_p) and their functional graphs.

The graph of x -> phi(x) is stored as a flat successor array of length p+1
(index p is the point at infinity).  Iterated image sizes come from a single
peeling pass: repeatedly delete in-degree-0 points; the round in which a
non-periodic point dies is its forest height plus one, and

    #phi^n(P^1) = #periodic + #{x non-periodic : H(x) >= n}.

Two engines build and peel the graph: a pure-Python one for small p and a
vectorized numpy one for large p.  Tests cross-check them against each other
and against naive forward-image iteration.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence, Union
import warnings

import numpy as np

from . import fppoly
from .errors import (
    CharacteristicTooSmallWarning,
    DegenerateMapError,
    InseparableMapError,
    MapSpecError,
)
from .primefield import INFINITY, PrimeField, ProjectivePoint

# Below this modulus plain lists beat numpy call overhead.
_NUMPY_MIN_P = 1 << 12
# numpy int64 products a*b with a,b < p stay below 2^63 up to this modulus.
_NUMPY_MAX_P = 3_037_000_493
# Exhaustive critical-point scans are capped here (spec'd desk-scale limit).
_CRITICAL_SCAN_MAX_P = 10**7


@dataclass(frozen=True)
class RationalMap:
    """A rational map f/g over F_p, coefficients ascending and reduced.

    Construction enforces: the denominator is not the zero polynomial,
    gcd(f, g) = 1, and neither leading coefficient vanished during reduction
    (a silent degree drop would desynchronize every formula parameterized
    by the degree).
    """

    field: PrimeField
    num: tuple[int, ...]
    den: tuple[int, ...]

    @classmethod
    def from_coeffs(
        cls,
        field: PrimeField,
        num: Sequence[int],
        den: Sequence[int] = (1,),
    ) -> "RationalMap":
        p = field.p
        num_r = [c % p for c in num]
        den_r = [c % p for c in den]
        if not num_r or not den_r:
            raise MapSpecError("empty coefficient list")
        if num_r[-1] == 0 and len(num_r) > 1:
            raise DegenerateMapError(
                "leading numerator coefficient vanishes mod p (degree drop)"
            )
        if den_r[-1] == 0 and len(den_r) > 1:
            raise DegenerateMapError(
                "leading denominator coefficient vanishes mod p (degree drop)"
            )
        if fppoly.is_zero(fppoly.normalize(den_r, p)):
            raise DegenerateMapError("denominator is identically zero")
        if fppoly.is_zero(fppoly.normalize(num_r, p)) and len(num_r) > 1:
            raise DegenerateMapError("numerator reduced to zero")
        g = fppoly.gcd(num_r, den_r, p)
        if fppoly.degree(g) > 0:
            raise DegenerateMapError(
                "numerator and denominator share a common factor"
            )
        return cls(field, tuple(num_r), tuple(den_r))

    @classmethod
    def parse(cls, text: str) -> "RationalMap":
        """Parse the map description format `p=...; num=c0,c1,...; den=...`."""
        parts: dict[str, str] = {}
        for chunk in text.split(";"):
            chunk = chunk.strip()
            if not chunk:
                continue
            m = re.fullmatch(r"(p|num|den)\s*=\s*([-0-9,\s]+)", chunk)
            if not m:
                raise MapSpecError(f"cannot parse map component {chunk!r}")
            parts[m.group(1)] = m.group(2)
        if "p" not in parts or "num" not in parts:
            raise MapSpecError("map spec needs at least p=... and num=...")
        try:
            p = int(parts["p"])
        except ValueError as exc:
            raise MapSpecError(f"bad modulus {parts['p']!r}") from exc
        try:
            field = PrimeField(p)
        except ValueError as exc:
            raise MapSpecError(str(exc)) from exc

        def ints(s: str) -> list[int]:
            try:
                return [int(tok) for tok in s.split(",")]
            except ValueError as exc:
                raise MapSpecError(f"bad coefficient list {s!r}") from exc

        den = ints(parts["den"]) if "den" in parts else [1]
        return cls.from_coeffs(field, ints(parts["num"]), den)

    @property
    def degree(self) -> int:
        return max(len(self.num), len(self.den)) - 1

    @property
    def is_polynomial(self) -> bool:
        return len(self.den) == 1

    def describe(self) -> str:
        s = f"p={self.field.p}; num={','.join(map(str, self.num))}"
        if not self.is_polynomial or self.den != (1,):
            s += f"; den={','.join(map(str, self.den))}"
        return s


def evaluate(phi: RationalMap, point: ProjectivePoint) -> ProjectivePoint:
    """Projective evaluation, including the standard value at infinity."""
    p = phi.field.p
    if point.is_infinity:
        df = len(phi.num) - 1
        dg = len(phi.den) - 1
        if df > dg:
            return INFINITY
        if df < dg:
            return ProjectivePoint(0)
        return ProjectivePoint(phi.num[-1] * pow(phi.den[-1], -1, p) % p)
    x = point.value
    gv = fppoly.evaluate(phi.den, x, p)
    if gv == 0:
        return INFINITY
    fv = fppoly.evaluate(phi.num, x, p)
    return ProjectivePoint(fv * pow(gv, -1, p) % p)


@dataclass(frozen=True)
class FunctionalGraph:
    """Successor structure of a map on P^1(F_p) plus peel-derived statistics.

    `level[x]` is the peeling round in which point x was removed (0 for
    periodic points, which are never removed); H(x) = level[x] - 1.
    """

    field: PrimeField
    successor: Union[list, np.ndarray]
    level: Union[list, np.ndarray]
    periodic_count: int
    cycle_lengths: tuple[int, ...]  # sorted descending
    nonperiodic_per_level: tuple[int, ...]  # index r-1 holds #{x: level=r}

    @property
    def size(self) -> int:
        return self.field.p + 1

    def is_periodic(self, index: int) -> bool:
        return self.level[index] == 0


def _successors_python(phi: RationalMap) -> list[int]:
    p = phi.field.p
    num, den = phi.num, phi.den
    succ = [0] * (p + 1)
    if phi.is_polynomial:
        inv_d = pow(den[0], -1, p)
        for x in range(p):
            succ[x] = fppoly.evaluate(num, x, p) * inv_d % p
    else:
        for x in range(p):
            gv = fppoly.evaluate(den, x, p)
            if gv == 0:
                succ[x] = p
            else:
                succ[x] = fppoly.evaluate(num, x, p) * pow(gv, -1, p) % p
    succ[p] = evaluate(phi, INFINITY).index(p)
    return succ


def _horner_np(coeffs: Sequence[int], x: np.ndarray, p: int) -> np.ndarray:
    acc = np.full_like(x, coeffs[-1] % p)
    for c in reversed(coeffs[:-1]):
        acc = (acc * x + c) % p
    return acc


def _modpow_np(base: np.ndarray, e: int, p: int) -> np.ndarray:
    result = np.ones_like(base)
    b = base % p
    while e:
        if e & 1:
            result = result * b % p
        b = b * b % p
        e >>= 1
    return result


def _successors_numpy(phi: RationalMap) -> np.ndarray:
    p = phi.field.p
    x = np.arange(p, dtype=np.int64)
    fv = _horner_np(phi.num, x, p)
    succ = np.empty(p + 1, dtype=np.int64)
    if phi.is_polynomial:
        inv_d = pow(phi.den[0], -1, p)
        succ[:p] = fv * inv_d % p
    else:
        gv = _horner_np(phi.den, x, p)
        poles = gv == 0
        inv = _modpow_np(np.where(poles, 1, gv), p - 2, p)
        succ[:p] = np.where(poles, p, fv * inv % p)
    succ[p] = evaluate(phi, INFINITY).index(p)
    return succ


def _peel_python(succ: list) -> tuple[list, int, tuple, tuple]:
    n = len(succ)
    indeg = [0] * n
    for t in succ:
        indeg[t] += 1
    level = [0] * n
    frontier = [i for i in range(n) if indeg[i] == 0]
    per_level = []
    r = 0
    removed = 0
    while frontier:
        r += 1
        per_level.append(len(frontier))
        removed += len(frontier)
        nxt = []
        for v in frontier:
            level[v] = r
            t = succ[v]
            indeg[t] -= 1
            if indeg[t] == 0:
                nxt.append(t)
        frontier = nxt
    periodic_count = n - removed
    cycles = _cycle_lengths(succ, level)
    return level, periodic_count, cycles, tuple(per_level)


def _peel_numpy(succ: np.ndarray) -> tuple[np.ndarray, int, tuple, tuple]:
    n = len(succ)
    indeg = np.bincount(succ, minlength=n)
    level = np.zeros(n, dtype=np.int64)
    frontier = np.nonzero(indeg == 0)[0]
    per_level = []
    r = 0
    removed = 0
    while frontier.size:
        r += 1
        per_level.append(int(frontier.size))
        removed += int(frontier.size)
        level[frontier] = r
        targets, counts = np.unique(succ[frontier], return_counts=True)
        indeg[targets] -= counts
        frontier = targets[indeg[targets] == 0]
    periodic_count = n - removed
    cycles = _cycle_lengths(succ, level)
    return level, periodic_count, cycles, tuple(per_level)


def _cycle_lengths(succ, level) -> tuple[int, ...]:
    n = len(succ)
    visited = bytearray(n)
    lengths = []
    for s in range(n):
        if level[s] != 0 or visited[s]:
            continue
        length = 0
        x = s
        while True:
            visited[x] = 1
            length += 1
            x = int(succ[x])
            if x == s:
                break
        lengths.append(length)
    lengths.sort(reverse=True)
    return tuple(lengths)


def build_graph(phi: RationalMap, engine: str = "auto") -> FunctionalGraph:
    """Build the full functional graph of phi on P^1(F_p).

    engine: 'auto' picks pure Python below p=4096 and numpy above;
    'python' / 'numpy' force a backend (numpy requires p < ~3.04e9 so that
    int64 products cannot overflow).
    """
    p = phi.field.p
    if engine == "auto":
        engine = "python" if p < _NUMPY_MIN_P else "numpy"
    if engine == "numpy" and p > _NUMPY_MAX_P:
        raise ValueError(f"p={p} too large for the int64 numpy engine")
    if engine == "python":
        succ = _successors_python(phi)
        level, periodic, cycles, per_level = _peel_python(succ)
    elif engine == "numpy":
        succ = _successors_numpy(phi)
        level, periodic, cycles, per_level = _peel_numpy(succ)
    else:
        raise ValueError(f"unknown engine {engine!r}")
    return FunctionalGraph(
        field=phi.field,
        successor=succ,
        level=level,
        periodic_count=periodic,
        cycle_lengths=cycles,
        nonperiodic_per_level=per_level,
    )


def image_sizes(graph: FunctionalGraph, n_max: int) -> list[int]:
    """#phi^n(P^1(F_p)) for n = 1..n_max, in O(p + n_max) after peeling."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    per_level = graph.nonperiodic_per_level
    nonperiodic = sum(per_level)
    sizes = []
    shed = 0
    for n in range(1, n_max + 1):
        # points with level <= n are outside phi^n's image support
        shed += per_level[n - 1] if n - 1 < len(per_level) else 0
        sizes.append(graph.periodic_count + nonperiodic - shed)
    return sizes


def affine_image_sizes(graph: FunctionalGraph, n_max: int) -> list[int]:
    """Image sizes counting affine targets only (infinity excluded).

    Infinity lies in phi^n(P^1) iff it is periodic or has height >= n.
    """
    proj = image_sizes(graph, n_max)
    p = graph.field.p
    inf_level = int(graph.level[p])
    out = []
    for n, s in enumerate(proj, start=1):
        inf_in_image = inf_level == 0 or inf_level - 1 >= n
        out.append(s - 1 if inf_in_image else s)
    return out


def naive_image_sizes(graph: FunctionalGraph, n_max: int) -> list[int]:
    """Oracle: forward image sets computed directly, O(n_max * p)."""
    succ = graph.successor
    if isinstance(succ, np.ndarray):
        current = np.unique(succ)
        sizes = []
        for _ in range(n_max):
            sizes.append(int(current.size))
            current = np.unique(succ[current])
        return sizes
    current = set(succ)
    sizes = []
    for _ in range(n_max):
        sizes.append(len(current))
        current = {succ[x] for x in current}
    return sizes


def periodic_count(graph: FunctionalGraph) -> tuple[int, tuple[int, ...]]:
    return graph.periodic_count, graph.cycle_lengths


def max_tail_length(graph: FunctionalGraph) -> int:
    """Longest chain of non-periodic points ending on the periodic set,
    counted in edges: max H(x) + 1, or 0 when every point is periodic."""
    return len(graph.nonperiodic_per_level)


def is_bijection(graph: FunctionalGraph) -> bool:
    succ = graph.successor
    if isinstance(succ, np.ndarray):
        return int(np.unique(succ).size) == len(succ)
    return len(set(succ)) == len(succ)


@dataclass(frozen=True)
class FiberDistribution:
    """Distribution of fiber sizes #{x affine : phi^n(x) = alpha} over the
    affine targets alpha considered.  Starts mapping to infinity are counted
    separately in `infinity_hits`."""

    n: int
    proportions: dict[int, Fraction]
    targets_considered: int
    affine_starts: int
    infinity_hits: int
    mode: str

    def total_arrivals(self) -> int:
        """Sum of fiber sizes over considered targets (exhaustive mode:
        equals affine_starts - infinity_hits)."""
        return sum(
            size * int(prop * self.targets_considered)
            for size, prop in self.proportions.items()
        )


def fiber_histogram(
    phi: RationalMap,
    n: int,
    mode: str = "exhaustive",
    sample_count: int = 0,
    seed: int = 0,
    graph: Optional[FunctionalGraph] = None,
) -> FiberDistribution:
    """Histogram of n-th iterate fiber sizes over affine targets.

    Every affine start is iterated forward n steps.  In exhaustive mode all
    p affine targets enter the histogram; in sample mode `sample_count`
    distinct affine targets are drawn with the seeded generator and only
    their (exact) fiber sizes are histogrammed.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if graph is None:
        graph = build_graph(phi)
    p = phi.field.p
    succ = graph.successor
    if isinstance(succ, np.ndarray):
        arr = np.arange(p, dtype=np.int64)
        for _ in range(n):
            arr = succ[arr]
        infinity_hits = int(np.count_nonzero(arr == p))
        counts = np.bincount(arr[arr != p], minlength=p)
    else:
        arr = list(range(p))
        for _ in range(n):
            arr = [succ[x] for x in arr]
        infinity_hits = sum(1 for t in arr if t == p)
        counts = [0] * p
        for t in arr:
            if t != p:
                counts[t] += 1

    if mode == "exhaustive":
        target_counts = counts
        considered = p
    elif mode == "sample":
        if sample_count < 1 or sample_count > p:
            raise ValueError("sample_count must be in [1, p]")
        rng = random.Random(seed)
        chosen = rng.sample(range(p), sample_count)
        target_counts = [int(counts[alpha]) for alpha in chosen]
        considered = sample_count
    else:
        raise ValueError(f"unknown mode {mode!r}")

    hist: dict[int, int] = {}
    for c in target_counts:
        c = int(c)
        hist[c] = hist.get(c, 0) + 1
    proportions = {
        size: Fraction(cnt, considered) for size, cnt in sorted(hist.items())
    }
    return FiberDistribution(
        n=n,
        proportions=proportions,
        targets_considered=considered,
        affine_starts=p,
        infinity_hits=infinity_hits,
        mode=mode,
    )


@dataclass(frozen=True)
class CriticalPoints:
    """Finite critical points with Wronskian multiplicities, plus whether the
    point at infinity is critical (polynomial of degree >= 2)."""

    finite: tuple[tuple[int, int], ...]
    infinity_is_critical: bool
    characteristic_small: bool


def critical_points(phi: RationalMap) -> CriticalPoints:
    """Roots of W = f'g - fg' in F_p, with multiplicities.

    Raises InseparableMapError when W vanishes identically.  When p <= deg
    a CharacteristicTooSmallWarning advisory is emitted (derivative degrees
    are unreliable in small characteristic).
    """
    p = phi.field.p
    if p > _CRITICAL_SCAN_MAX_P:
        raise ValueError(
            f"exhaustive critical scan capped at p <= {_CRITICAL_SCAN_MAX_P}"
        )
    small = p <= phi.degree
    if small:
        warnings.warn(
            f"p={p} <= degree {phi.degree}; critical data is advisory only",
            CharacteristicTooSmallWarning,
            stacklevel=2,
        )
    f, g = list(phi.num), list(phi.den)
    fp_ = fppoly.derivative(f, p)
    gp_ = fppoly.derivative(g, p)
    wronskian = fppoly.sub(
        fppoly.mul(fp_, g, p), fppoly.mul(f, gp_, p), p
    )
    if fppoly.is_zero(wronskian):
        raise InseparableMapError("derivative vanishes identically")

    if p < _NUMPY_MIN_P:
        roots = [x for x in range(p) if fppoly.evaluate(wronskian, x, p) == 0]
    else:
        xs = np.arange(p, dtype=np.int64)
        vals = _horner_np(wronskian, xs, p)
        roots = [int(x) for x in xs[vals == 0]]
    finite = tuple(
        (r, fppoly.root_multiplicity(wronskian, r, p)) for r in roots
    )
    return CriticalPoints(
        finite=finite,
        infinity_is_critical=phi.is_polynomial and phi.degree >= 2,
        characteristic_small=small,
    )


@dataclass(frozen=True)
class OrbitReport:
    """Forward orbits of the finite critical points and the first collision
    phi^n(a) = phi^m(b) with (a, n) != (b, m), indices starting at 1
    (critical values, not the critical points themselves)."""

    critical: CriticalPoints
    n_max: int
    orbits: dict[int, tuple[ProjectivePoint, ...]]
    first_collision: Optional[tuple[int, int, int, int]]  # (a, n, b, m)
    separated: bool
    bijective: Optional[bool] = dc_field(default=None)

    @property
    def certified_up_to(self) -> int:
        """Largest N such that the separation criterion holds for all
        iterate indices <= N."""
        if self.first_collision is None:
            return self.n_max
        return max(self.first_collision[1], self.first_collision[3]) - 1


def check_orbit_separation(
    phi: RationalMap,
    n_max: int,
    graph: Optional[FunctionalGraph] = None,
) -> OrbitReport:
    """Certify the critical-orbit separation criterion up to n_max."""
    crit = critical_points(phi)
    points = [c for c, _ in crit.finite]
    orbits: dict[int, list[ProjectivePoint]] = {c: [] for c in points}
    seen: dict[ProjectivePoint, tuple[int, int]] = {}
    current = {c: ProjectivePoint(c) for c in points}
    collision = None
    for n in range(1, n_max + 1):
        for c in points:
            current[c] = evaluate(phi, current[c])
            orbits[c].append(current[c])
            if collision is None:
                prev = seen.get(current[c])
                if prev is not None:
                    collision = (c, n, prev[0], prev[1])
                else:
                    seen[current[c]] = (c, n)
    bijective = is_bijection(graph) if graph is not None else None
    return OrbitReport(
        critical=crit,
        n_max=n_max,
        orbits={c: tuple(v) for c, v in orbits.items()},
        first_collision=collision,
        separated=collision is None,
        bijective=bijective,
    )


def tameness_advisory(phi: RationalMap, crit: CriticalPoints) -> bool:
    """Heuristic sufficient condition gating theory comparisons: p > deg and
    p divides no (critical multiplicity + 1).  Tame ramification itself is a
    function-field hypothesis this artifact never verifies."""
    p = phi.field.p
    if p <= phi.degree:
        return False
    return all((m + 1) % p != 0 for _, m in crit.finite)
