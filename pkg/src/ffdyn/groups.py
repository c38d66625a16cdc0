"""Permutation sets, indicatrix polynomials and fixed-point statistics.

The indicatrix of a set of permutations is the generating polynomial of its
fixed-point-count distribution; indicatrices compose under imprimitive wreath
products, so iterating one polynomial at 0 yields the fixed-point proportion
of the iterated wreath product.  Everything here is exact rational until a
configurable bit budget is hit, after which evaluation continues in
outward-rounded interval arithmetic.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

import mpmath
from mpmath import iv

from .errors import (
    ClosureBudgetExceededError,
    CoefficientBudgetExceededError,
    DegreeMismatchError,
    DegreeTooLargeError,
    NotTransitiveError,
    ParameterOutOfRangeError,
    UnsupportedFamilyError,
)
from .intervals import (
    DEFAULT_EXACT_BITS,
    DEFAULT_PRECISION,
    certainly_leq,
    certainly_less,
    endpoints,
    interval,
    precision,
)

ENUMERATION_BUDGET = 10**6
CLOSED_FORM_MAX_DEGREE = 64

FAMILIES = ("C", "S", "A", "D")


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """A bijection of {0, ..., deg-1}, stored as its image tuple."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.images) != list(range(len(self.images))):
            raise ValueError(f"{self.images} is not a permutation")

    @staticmethod
    def identity(degree: int) -> "Permutation":
        return Permutation(tuple(range(degree)))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition: (a * b)(x) = a(b(x))."""
        if self.degree != other.degree:
            raise DegreeMismatchError("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def fixed_point_count(self) -> int:
        return sum(1 for i, j in enumerate(self.images) if i == j)

    def cycles(self) -> list[tuple[int, ...]]:
        seen = [False] * self.degree
        out = []
        for i in range(self.degree):
            if seen[i] or self.images[i] == i:
                seen[i] = True
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def cycle_string(self) -> str:
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    @staticmethod
    def from_cycles(cycles: Iterable[Sequence[int]], degree: int) -> "Permutation":
        images = list(range(degree))
        for cyc in cycles:
            for a, b in zip(cyc, cyc[1:]):
                images[a] = b
            if cyc:
                images[cyc[-1]] = cyc[0]
        return Permutation(tuple(images))


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def parse_permutation(text: str, degree: Optional[int] = None) -> Permutation:
    """Parse cycle notation `(0 1 2)(3 4)` or one-line images `1,0,2`."""
    text = text.strip()
    if not text:
        raise ValueError("empty permutation string")
    if "(" in text:
        cycles = []
        consumed = _CYCLE_RE.sub("", text).strip()
        if consumed:
            raise ValueError(f"stray text in cycle notation: {consumed!r}")
        for body in _CYCLE_RE.findall(text):
            pts = [int(tok) for tok in re.split(r"[,\s]+", body.strip()) if tok]
            if len(set(pts)) != len(pts):
                raise ValueError(f"repeated point in cycle {body!r}")
            if pts:
                cycles.append(pts)
        top = max((max(c) for c in cycles if c), default=-1)
        deg = degree if degree is not None else top + 1
        if top >= deg:
            raise ValueError(f"cycle mentions point {top} outside degree {deg}")
        return Permutation.from_cycles(cycles, max(deg, 1))
    images = [int(tok) for tok in re.split(r"[,\s]+", text) if tok]
    if degree is not None and len(images) != degree:
        raise ValueError(f"one-line form has {len(images)} images, expected {degree}")
    return Permutation(tuple(images))


@dataclass(frozen=True)
class PermutationSet:
    """A deduplicated set of permutations of common degree.

    kind is 'group' (closed under composition and inverse, contains the
    identity) or 'coset' (a translate tau*G of a group)."""

    degree: int
    elements: tuple[Permutation, ...]
    kind: str = "group"

    def __post_init__(self) -> None:
        if not self.elements:
            raise ValueError("a permutation set cannot be empty")
        if any(g.degree != self.degree for g in self.elements):
            raise DegreeMismatchError("mixed degrees in permutation set")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate elements")

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)


def family_order(family: str, d: int) -> int:
    """Order of C_d, S_d, A_d or D_d without enumerating it."""
    if family == "C":
        return d
    if family == "S":
        return math.factorial(d)
    if family == "A":
        return math.factorial(d) // 2 if d >= 2 else 1
    if family == "D":
        return 2 * d
    raise UnsupportedFamilyError(f"unknown family {family!r}")


def parse_family(spec: str) -> tuple[str, int]:
    """Parse compact family names like 'S3', 'C4', 'A5', 'D6'."""
    m = re.fullmatch(r"([CSAD])(\d+)", spec.strip())
    if not m:
        raise UnsupportedFamilyError(f"cannot parse group family {spec!r}")
    return m.group(1), int(m.group(2))


def make_group(family: str, d: int, budget: int = ENUMERATION_BUDGET) -> PermutationSet:
    """Enumerate C_d, S_d, A_d or D_d explicitly."""
    if family not in FAMILIES:
        raise UnsupportedFamilyError(f"unknown family {family!r}")
    if d < 2 or (family == "D" and d < 3):
        raise UnsupportedFamilyError(f"{family}_{d} not supported")
    if family_order(family, d) > budget:
        raise DegreeTooLargeError(
            f"{family}_{d} has {family_order(family, d)} elements, budget {budget}"
        )
    if family == "C":
        step = Permutation(tuple((i + 1) % d for i in range(d)))
        elems = [Permutation.identity(d)]
        cur = step
        while cur != elems[0]:
            elems.append(cur)
            cur = cur * step
    elif family == "S":
        elems = [Permutation(p) for p in itertools.permutations(range(d))]
    elif family == "A":
        elems = [
            Permutation(p)
            for p in itertools.permutations(range(d))
            if Permutation(p).is_even()
        ]
    else:  # D: rotations and reflections of the d-gon
        elems = []
        for k in range(d):
            elems.append(Permutation(tuple((i + k) % d for i in range(d))))
        for k in range(d):
            elems.append(Permutation(tuple((k - i) % d for i in range(d))))
        elems = list(dict.fromkeys(elems))
    return PermutationSet(degree=d, elements=tuple(elems), kind="group")


def generate_from(
    generators: Sequence[Permutation],
    degree: Optional[int] = None,
    budget: int = ENUMERATION_BUDGET,
) -> PermutationSet:
    """Close a generator list under composition (breadth-first saturation)."""
    if generators:
        deg = generators[0].degree
        if any(g.degree != deg for g in generators):
            raise DegreeMismatchError("generators act on different degrees")
    else:
        deg = degree if degree is not None else 1
    identity = Permutation.identity(deg)
    known = {identity}
    frontier = [identity]
    gens = list(dict.fromkeys(generators))
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                prod = g * h
                if prod not in known:
                    known.add(prod)
                    nxt.append(prod)
                    if len(known) > budget:
                        raise ClosureBudgetExceededError(
                            f"closure exceeded budget {budget}"
                        )
        frontier = nxt
    return PermutationSet(degree=deg, elements=tuple(sorted(known, key=lambda g: g.images)))


def make_coset(tau: Permutation, group: PermutationSet) -> PermutationSet:
    """The left coset tau*G as an explicit permutation set."""
    if group.kind != "group":
        raise ValueError("coset base must be a group")
    if tau.degree != group.degree:
        raise DegreeMismatchError(
            f"tau acts on {tau.degree} points, group on {group.degree}"
        )
    elems = tuple(dict.fromkeys(tau * g for g in group.elements))
    return PermutationSet(degree=group.degree, elements=elems, kind="coset")


def all_cosets(group: PermutationSet) -> list[PermutationSet]:
    """All distinct left cosets of G inside the full symmetric group."""
    d = group.degree
    covered: set[Permutation] = set()
    cosets = []
    for images in itertools.permutations(range(d)):
        tau = Permutation(images)
        if tau in covered:
            continue
        coset = make_coset(tau, group)
        covered.update(coset.elements)
        cosets.append(coset)
    return cosets


def is_transitive(group: PermutationSet) -> bool:
    reached = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in group.elements:
                y = g(x)
                if y not in reached:
                    reached.add(y)
                    nxt.append(y)
        frontier = nxt
    return len(reached) == group.degree


def has_fixed_point_free_element(gamma: PermutationSet) -> bool:
    return any(g.fixed_point_count() == 0 for g in gamma.elements)


# ---------------------------------------------------------------------------
# indicatrix polynomials


@dataclass(frozen=True)
class IndicatrixPolynomial:
    """Exact fixed-point-count distribution: coefficient j is the proportion
    of elements with exactly j fixed points.  Coefficients are non-negative
    rationals summing to 1."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        coeffs = self.coefficients
        if not coeffs:
            raise ValueError("empty indicatrix")
        if any(c < 0 for c in coeffs):
            raise ValueError("negative indicatrix coefficient")
        if sum(coeffs) != 1:
            raise ValueError("indicatrix coefficients must sum to 1")
        if len(coeffs) > 1 and coeffs[-1] == 0:
            raise ValueError("trailing zero coefficient (not trimmed)")

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def at_zero(self) -> Fraction:
        return self.coefficients[0]

    def evaluate(self, x: Fraction) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def evaluate_interval(self, x):
        acc = interval(0)
        for c in reversed(self.coefficients):
            acc = acc * x + interval(c)
        return acc

    def fraction_strings(self) -> list[str]:
        return [str(c) for c in self.coefficients]

    def pretty(self) -> str:
        terms = []
        for j, c in enumerate(self.coefficients):
            if c == 0:
                continue
            if j == 0:
                terms.append(str(c))
            else:
                x = "x" if j == 1 else f"x^{j}"
                terms.append(x if c == 1 else f"{c} {x}")
        return " + ".join(terms) if terms else "0"


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    out = list(coeffs)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def indicatrix(gamma: PermutationSet) -> IndicatrixPolynomial:
    """Brute-force indicatrix from the explicit element list."""
    counts = [0] * (gamma.degree + 1)
    for g in gamma.elements:
        counts[g.fixed_point_count()] += 1
    total = len(gamma.elements)
    return IndicatrixPolynomial(_trim([Fraction(c, total) for c in counts]))


def _derangement_proportion(k: int) -> Fraction:
    """Proportion of S_k with no fixed point: sum_{i<=k} (-1)^i / i!."""
    return sum((Fraction((-1) ** i, math.factorial(i)) for i in range(k + 1)), Fraction(0))


def _even_derangement_proportion(k: int) -> Fraction:
    """Proportion of A_k with no fixed point.  The k = 0 convention is 2 so
    that the top indicatrix coefficient comes out as 1/|A_d| = 2/d!."""
    if k == 0:
        return Fraction(2)
    return Fraction((-1) ** (k - 1) * (k - 1), math.factorial(k)) + _derangement_proportion(k)


def _family_indicatrix(family: str, d: int) -> tuple[Fraction, ...]:
    if family == "C":
        coeffs = [Fraction(0)] * (d + 1)
        coeffs[0] = Fraction(d - 1, d)
        coeffs[d] = Fraction(1, d)
    elif family == "S":
        if d == 0:
            return (Fraction(1),)
        if d == 1:
            return (Fraction(0), Fraction(1))
        coeffs = [
            _derangement_proportion(d - j) / math.factorial(j) for j in range(d + 1)
        ]
    elif family == "A":
        if d == 1:
            return (Fraction(0), Fraction(1))
        if d == 2:
            return (Fraction(0), Fraction(0), Fraction(1))
        coeffs = [
            _even_derangement_proportion(d - j) / math.factorial(j)
            for j in range(d + 1)
        ]
    elif family == "D":
        coeffs = [Fraction(0)] * (d + 1)
        coeffs[d] = Fraction(1, 2 * d)
        if d % 2 == 1:
            coeffs[1] = Fraction(d, 2 * d)
            coeffs[0] = Fraction(d - 1, 2 * d)
        else:
            coeffs[2] = Fraction(d, 2) / (2 * d)
            coeffs[0] = Fraction(3 * d - 2, 2) / (2 * d)
    else:
        raise UnsupportedFamilyError(f"unknown family {family!r}")
    return _trim(coeffs)


def closed_form_indicatrix(family: str, d: int) -> IndicatrixPolynomial:
    """Exact indicatrix of C_d, S_d, A_d or D_d from the closed formulas,
    no enumeration (supported up to degree 64)."""
    if family not in FAMILIES:
        raise UnsupportedFamilyError(f"unknown family {family!r}")
    if d < 2 or (family == "D" and d < 3):
        raise UnsupportedFamilyError(f"{family}_{d} outside the closed-form range")
    if d > CLOSED_FORM_MAX_DEGREE:
        raise UnsupportedFamilyError(f"closed forms capped at degree {CLOSED_FORM_MAX_DEGREE}")
    return IndicatrixPolynomial(_family_indicatrix(family, d))


def compose(
    outer: IndicatrixPolynomial,
    inner: IndicatrixPolynomial,
    bit_budget: int = DEFAULT_EXACT_BITS,
) -> IndicatrixPolynomial:
    """Exact polynomial substitution outer(inner(x)); this is the indicatrix
    of the imprimitive wreath product of the underlying sets."""
    result: list[Fraction] = [outer.coefficients[-1]]
    inner_c = inner.coefficients
    for c in reversed(outer.coefficients[:-1]):
        # result = result * inner + c
        prod = [Fraction(0)] * (len(result) + len(inner_c) - 1)
        for i, a in enumerate(result):
            if a == 0:
                continue
            for j, b in enumerate(inner_c):
                prod[i + j] += a * b
        prod[0] += c
        result = prod
        for coeff in result:
            if (
                coeff.numerator.bit_length() > bit_budget
                or coeff.denominator.bit_length() > bit_budget
            ):
                raise CoefficientBudgetExceededError(
                    f"composition coefficients exceed {bit_budget} bits"
                )
    return IndicatrixPolynomial(_trim(result))


def wreath_elements(
    g_top: PermutationSet,
    h_bottom: PermutationSet,
    budget: int = ENUMERATION_BUDGET,
) -> PermutationSet:
    """Explicit imprimitive wreath product acting on deg(G)*deg(H) points.

    The element (pi; rho_1..rho_degG) sends block point (i, j) to
    (pi(i), rho_i(j)).  Serves as the brute-force oracle for `compose`."""
    size = len(g_top) * len(h_bottom) ** g_top.degree
    if size > budget:
        raise ClosureBudgetExceededError(
            f"wreath product has {size} elements, budget {budget}"
        )
    dg, dh = g_top.degree, h_bottom.degree
    elems = []
    for pi in g_top.elements:
        for rhos in itertools.product(h_bottom.elements, repeat=dg):
            images = [0] * (dg * dh)
            for i in range(dg):
                base = pi(i) * dh
                rho = rhos[i]
                for j in range(dh):
                    images[i * dh + j] = base + rho(j)
            elems.append(Permutation(tuple(images)))
    kind = "group" if g_top.kind == "group" and h_bottom.kind == "group" else "coset"
    return PermutationSet(degree=dg * dh, elements=tuple(elems), kind=kind)


# ---------------------------------------------------------------------------
# fixed point proportions of iterated wreath products


@dataclass(frozen=True)
class FppValue:
    """A fixed-point proportion, exact while the bit budget allows, otherwise
    a rigorous interval enclosure at the stated precision."""

    exact: Optional[Fraction]
    lo: mpmath.mpf
    hi: mpmath.mpf
    precision: int
    mode: str  # 'exact' or 'interval'

    @property
    def approx(self) -> float:
        return float((self.lo + self.hi) / 2)

    def as_interval(self):
        return iv.mpf([self.lo, self.hi])

    def __str__(self) -> str:
        if self.exact is not None:
            return str(self.exact)
        return mpmath.nstr(mpmath.mpf((self.lo + self.hi) / 2), 17)


def _fraction_bits(x: Fraction) -> int:
    return max(x.numerator.bit_length(), x.denominator.bit_length())


def fpp_sequence(
    phi: IndicatrixPolynomial,
    n_max: int,
    exact_bits: int = DEFAULT_EXACT_BITS,
    prec: int = DEFAULT_PRECISION,
) -> list[FppValue]:
    """FPP_n = 1 - phi^n(0) for n = 1..n_max.

    Iteration is exact while numerator and denominator stay within the
    per-number bit budget; the first oversized value is recomputed in
    interval arithmetic and iteration continues there."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    out: list[FppValue] = []
    with precision(prec):
        value: Optional[Fraction] = Fraction(0)
        value_iv = None
        coeffs_iv = None
        for _ in range(n_max):
            if value is not None:
                nxt = phi.evaluate(value)
                if _fraction_bits(nxt) > exact_bits:
                    coeffs_iv = [interval(c) for c in phi.coefficients]
                    value_iv = _horner_iv(coeffs_iv, interval(value))
                    value = None
                else:
                    value = nxt
            else:
                value_iv = _horner_iv(coeffs_iv, value_iv)
            if value is not None:
                fpp = 1 - value
                lo, hi = endpoints(interval(fpp))
                out.append(FppValue(fpp, lo, hi, prec, "exact"))
            else:
                fpp_iv = interval(1) - value_iv
                lo, hi = endpoints(fpp_iv)
                out.append(FppValue(None, lo, hi, prec, "interval"))
    return out


def _horner_iv(coeffs_iv, x):
    acc = coeffs_iv[-1]
    for c in reversed(coeffs_iv[:-1]):
        acc = acc * x + c
    return acc


def iterate_at_zero(
    phi: IndicatrixPolynomial,
    n: int,
    exact_bits: int = DEFAULT_EXACT_BITS,
    prec: int = DEFAULT_PRECISION,
) -> FppValue:
    """FPP of the n-fold composition: 1 - phi^n(0)."""
    return fpp_sequence(phi, n, exact_bits=exact_bits, prec=prec)[-1]


def fpp_coset_iterated(
    tau: Permutation,
    group: PermutationSet,
    n: int,
    exact_bits: int = DEFAULT_EXACT_BITS,
    prec: int = DEFAULT_PRECISION,
) -> FppValue:
    """FPP of the n-fold wreath iterate of the coset tau*G.  The underlying
    group must be transitive for the coset composition rule to apply."""
    if not is_transitive(group):
        raise NotTransitiveError("coset FPP iteration requires a transitive group")
    phi = indicatrix(make_coset(tau, group))
    return iterate_at_zero(phi, n, exact_bits=exact_bits, prec=prec)


def derivative_invariants(phi: IndicatrixPolynomial) -> tuple[Fraction, Fraction]:
    """(phi'(1), phi''(1)) exactly.  For a transitive group or a coset of one,
    phi'(1) = 1 by orbit counting; phi''(1) is the asymptotic constant c."""
    d1 = sum((Fraction(j) * c for j, c in enumerate(phi.coefficients)), Fraction(0))
    d2 = sum(
        (Fraction(j * (j - 1)) * c for j, c in enumerate(phi.coefficients)),
        Fraction(0),
    )
    return d1, d2


# ---------------------------------------------------------------------------
# bound verification

BoundValue = Union[Fraction, object]  # Fraction or an iv interval


@dataclass(frozen=True)
class BoundCheckRow:
    n: int
    fpp: FppValue
    lower: Optional[str]
    upper: Optional[str]
    lower_ok: bool
    upper_ok: bool
    lower_strict: Optional[bool]
    upper_strict: Optional[bool]
    lower_equality: bool
    upper_equality: bool

    @property
    def passed(self) -> bool:
        return self.lower_ok and self.upper_ok


@dataclass(frozen=True)
class FppBoundReport:
    family: str
    d: int
    n_max: int
    rows: tuple[BoundCheckRow, ...]

    @property
    def all_pass(self) -> bool:
        return all(r.passed for r in self.rows)


def _log_bound(n: int, const: Fraction, log_sign: int, scale: Fraction) -> BoundValue:
    """2 / (scale * (n + const + log_sign*ln n)) as Fraction when ln n = 0."""
    if n == 1 or log_sign == 0:
        return Fraction(2) / (scale * (n + const))
    denom = (interval(n) + interval(const)) + log_sign * iv.log(iv.mpf(n))
    return interval(2) / (interval(scale) * denom)


def _family_bounds(family: str, d: int, n: int) -> tuple[Optional[BoundValue], Optional[BoundValue]]:
    if family == "C":
        scale = Fraction(d - 1)
        return (
            _log_bound(n, Fraction(4), +1, scale),
            Fraction(2) / (scale * (n + 1)),
        )
    if family == "S":
        return (_log_bound(n, Fraction(4), +1, Fraction(1)), Fraction(2, n + 2))
    if family == "A":
        if d == 4:
            return (Fraction(2, n + 2), _log_bound(n, Fraction(1), -1, Fraction(1)))
        return (_log_bound(n, Fraction(4), +1, Fraction(1)), Fraction(2, n + 2))
    if family == "D":
        return (None, Fraction(2, n + 2))
    raise UnsupportedFamilyError(f"unknown family {family!r}")


def _check_leq(a, b, fpp_exact_a=None, fpp_exact_b=None) -> tuple[bool, Optional[bool], bool]:
    """Outward-rounded check of a <= b.

    Returns (holds, strict, equality): `holds` is rigorous (True only when
    certified), `strict` is True/False when decidable and None when the
    intervals cannot separate, `equality` is True only for exact ties."""
    ea = fpp_exact_a if fpp_exact_a is not None else (a if isinstance(a, Fraction) else None)
    eb = fpp_exact_b if fpp_exact_b is not None else (b if isinstance(b, Fraction) else None)
    if ea is not None and eb is not None:
        if ea < eb:
            return True, True, False
        if ea == eb:
            return True, False, True
        return False, False, False
    ia = interval(a) if isinstance(a, Fraction) else a
    ib = interval(b) if isinstance(b, Fraction) else b
    if certainly_less(ia, ib):
        return True, True, False
    if certainly_leq(ia, ib):
        return True, None, False
    return False, None, False


def _bound_str(v: Optional[BoundValue]) -> Optional[str]:
    if v is None:
        return None
    if isinstance(v, Fraction):
        return str(v)
    return mpmath.nstr(mpmath.mpf(v.mid), 12)


def verify_fpp_bounds(
    family: str,
    d: int,
    n_max: int,
    exact_bits: int = DEFAULT_EXACT_BITS,
    prec: int = DEFAULT_PRECISION,
) -> FppBoundReport:
    """Check the explicit FPP bounds for [G]^n against exact/interval
    iteration of the closed-form indicatrix, n = 1..n_max.

    Inequalities are checked weakly (<=, >=) with strictness and exact
    equality recorded per row; the only equality cases are the n = 1 upper
    bounds for S_3 and D_3, where FPP = 2/3 attains 2/(n+2) exactly.  Natural
    logarithms, evaluated as intervals, make every verdict rigorous."""
    if family == "A" and d < 4:
        raise ParameterOutOfRangeError("alternating-family bounds cover d = 4 and d >= 5")
    phi = closed_form_indicatrix(family, d)
    fpps = fpp_sequence(phi, n_max, exact_bits=exact_bits, prec=prec)
    rows = []
    with precision(prec):
        for n, fpp in enumerate(fpps, start=1):
            lower, upper = _family_bounds(family, d, n)
            fpp_val = fpp.exact if fpp.exact is not None else fpp.as_interval()
            if lower is not None:
                lo_ok, lo_strict, lo_eq = _check_leq(lower, fpp_val)
            else:
                lo_ok, lo_strict, lo_eq = True, None, False
            if upper is not None:
                up_ok, up_strict, up_eq = _check_leq(fpp_val, upper)
            else:
                up_ok, up_strict, up_eq = True, None, False
            rows.append(
                BoundCheckRow(
                    n=n,
                    fpp=fpp,
                    lower=_bound_str(lower),
                    upper=_bound_str(upper),
                    lower_ok=lo_ok,
                    upper_ok=up_ok,
                    lower_strict=lo_strict,
                    upper_strict=up_strict,
                    lower_equality=lo_eq,
                    upper_equality=up_eq,
                )
            )
    return FppBoundReport(family=family, d=d, n_max=n_max, rows=tuple(rows))


# ---------------------------------------------------------------------------
# domination lemmas


@dataclass(frozen=True)
class DominationReport:
    lemma: str
    params: dict
    passed: bool
    witness: Optional[tuple[str, str, str]]  # (x, lhs, rhs) at first failure
    points_checked: int


def _family_poly_with_conventions(family: str, d: int) -> IndicatrixPolynomial:
    # degrees 0 and 1 use the declared conventions phi_0 = 1, phi_1 = x
    if d in (0, 1) and family in ("S", "A"):
        return IndicatrixPolynomial(_family_indicatrix(family, d))
    return closed_form_indicatrix(family, d)


def _grid(step: Fraction) -> list[Fraction]:
    if step <= 0 or step > 1:
        raise ParameterOutOfRangeError("grid step must lie in (0, 1]")
    pts = []
    x = Fraction(0)
    while x < 1:
        pts.append(x)
        x += step
    pts.append(Fraction(1))
    return pts


def _check_dominates(
    big: IndicatrixPolynomial,
    small: IndicatrixPolynomial,
    grid: list[Fraction],
    strict_interior: bool,
) -> tuple[bool, Optional[tuple[str, str, str]], int]:
    """Verify big(x) >= small(x) on the grid, strictly on [0,1) when asked,
    with equality at x = 1."""
    for x in grid:
        lhs = big.evaluate(x)
        rhs = small.evaluate(x)
        if x == 1:
            ok = lhs == rhs
        elif strict_interior:
            ok = lhs > rhs
        else:
            ok = lhs >= rhs
        if not ok:
            return False, (str(x), str(lhs), str(rhs)), len(grid)
    return True, None, len(grid)


def verify_domination(
    lemma: str,
    d: Optional[int] = None,
    k: Optional[int] = None,
    n: Optional[int] = None,
    phi: Optional[IndicatrixPolynomial] = None,
    psi: Optional[IndicatrixPolynomial] = None,
    grid_step: Fraction = Fraction(1, 100),
) -> DominationReport:
    """Check one of the pointwise indicatrix comparison lemmas on an exact
    rational grid over [0, 1].

    Scompare (symmetric family): phi_d <= phi_k for even k, >= for odd k.
    Acompare (alternating family): phi_d >= phi_k for even k, <= for odd k.
    Dcompare (dihedral family): phi_d >= phi_k for same-parity d > k, and
    phi_{k+1} >= phi_k for odd k.  All strict on [0,1), equal at 1.
    ncompare: given phi <= psi on [0,1], the n-fold composites satisfy
    phi^n <= psi^n (premise and conclusion both checked, weakly)."""
    grid = _grid(grid_step)
    if lemma == "ncompare":
        if phi is None or psi is None or n is None:
            raise ParameterOutOfRangeError("ncompare needs phi, psi and n")
        # premise phi <= psi, then the composite conclusion phi^n <= psi^n
        for x in grid:
            a, b = phi.evaluate(x), psi.evaluate(x)
            if a > b:
                return DominationReport(
                    lemma, {"n": n}, False, (str(x), str(a), str(b)), len(grid)
                )
        for x in grid:
            a, b = x, x
            for _ in range(n):
                a, b = phi.evaluate(a), psi.evaluate(b)
            if a > b:
                return DominationReport(
                    lemma, {"n": n}, False, (str(x), str(a), str(b)), len(grid)
                )
        return DominationReport(lemma, {"n": n}, True, None, 2 * len(grid))

    if d is None or k is None or not d > k >= 0:
        raise ParameterOutOfRangeError(f"{lemma} needs degrees d > k >= 0")
    if lemma == "Scompare":
        if k < 2:
            raise ParameterOutOfRangeError("Scompare covers k >= 2")
        big_d, small_d = (k, d) if k % 2 == 0 else (d, k)
        fam = "S"
    elif lemma == "Acompare":
        if k < 1:
            raise ParameterOutOfRangeError("Acompare covers k >= 1")
        big_d, small_d = (d, k) if k % 2 == 0 else (k, d)
        fam = "A"
    elif lemma == "Dcompare":
        if k < 3:
            raise ParameterOutOfRangeError("dihedral closed forms start at degree 3")
        if d % 2 == k % 2 or (k % 2 == 1 and d == k + 1):
            big_d, small_d = d, k
        else:
            raise ParameterOutOfRangeError(
                f"pair (d={d}, k={k}) is not covered by the dihedral lemma"
            )
        fam = "D"
    else:
        raise UnsupportedFamilyError(f"unknown comparison lemma {lemma!r}")
    big = _family_poly_with_conventions(fam, big_d)
    small = _family_poly_with_conventions(fam, small_d)
    ok, witness, checked = _check_dominates(big, small, grid, strict_interior=True)
    return DominationReport(lemma, {"d": d, "k": k}, ok, witness, checked)
