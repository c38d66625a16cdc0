"""Explicit bound calculators, reference sequences, height thresholds and the
theory-vs-experiment comparison pipeline.

Every formula here is an explicit closed form; transcendental evaluations go
through outward-rounded intervals so that bound values err on the safe side
and verdicts are rigorous.  Quantities that grow like |G|^(d^n) are kept as
exact big integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import mpmath
from mpmath import iv

from . import dynamics, groups
from .dynamics import FunctionalGraph, RationalMap
from .errors import (
    BoundVoidError,
    DomainError,
    InseparableMapError,
    NonIntegerCriticalError,
    OrbitExplosionError,
    ParameterOutOfRangeError,
)
from .groups import FppValue, IndicatrixPolynomial, Permutation, PermutationSet
from .intervals import (
    DEFAULT_EXACT_BITS,
    DEFAULT_PRECISION,
    certainly_less,
    endpoints,
    interval,
    lower_float,
    precision,
    upper_float,
)

# Divisor enumeration for integer root finding is capped here.
_ROOT_CONSTANT_CAP = 10**12
_DEFAULT_ORBIT_BITS = 10**6


# ---------------------------------------------------------------------------
# reference sequences


def quadratic_image_density(n: int) -> Fraction:
    """The exact image-density sequence for generic quadratics:
    mu_0 = 1, mu_{k+1} = mu_k - mu_k^2 / 2.  Equals FPP([S_2]^n)."""
    if n < 0:
        raise ParameterOutOfRangeError("n must be >= 0")
    mu = Fraction(1)
    for _ in range(n):
        mu = mu - mu * mu / 2
    return mu


@dataclass(frozen=True)
class TauValue:
    """Random-mapping image fraction tau_n with rigorous enclosures of
    tau_n, 1 - tau_n and n*(1 - tau_n)."""

    n: int
    precision: int
    tau_lo: mpmath.mpf
    tau_hi: mpmath.mpf
    residual_lo: mpmath.mpf
    residual_hi: mpmath.mpf
    scaled_lo: mpmath.mpf
    scaled_hi: mpmath.mpf

    @property
    def tau(self) -> float:
        return float((self.tau_lo + self.tau_hi) / 2)

    @property
    def residual(self) -> float:
        return float((self.residual_lo + self.residual_hi) / 2)


def random_map_image_density(n: int, prec: int = 128) -> TauValue:
    """tau_0 = 0, tau_{k+1} = exp(tau_k - 1), iterated in interval
    arithmetic at the requested precision."""
    if n < 0:
        raise ParameterOutOfRangeError("n must be >= 0")
    with precision(prec):
        tau = iv.mpf(0)
        one = iv.mpf(1)
        for _ in range(n):
            tau = iv.exp(tau - one)
        residual = one - tau
        scaled = residual * n
        t_lo, t_hi = endpoints(tau)
        r_lo, r_hi = endpoints(residual)
        s_lo, s_hi = endpoints(scaled)
    return TauValue(n, prec, t_lo, t_hi, r_lo, r_hi, s_lo, s_hi)


def tail_bound_iterate(q, d: int) -> int:
    """The iterate count floor(log log q / log d - d) at which the image-size
    bound O(q / log log q) kicks in; clamped at 0."""
    if d < 2:
        raise ParameterOutOfRangeError("degree must be >= 2")
    for prec in (128, 512):
        with precision(prec):
            logq = iv.log(iv.mpf(q))
            if not certainly_less(iv.mpf(0), logq):
                raise DomainError("log log q undefined for q <= 1")
            expr = iv.log(logq) / iv.log(iv.mpf(d)) - d
            lo, hi = endpoints(expr)
            f_lo, f_hi = int(mpmath.floor(lo)), int(mpmath.floor(hi))
        if f_lo == f_hi:
            return max(0, f_lo)
    return max(0, f_lo)


# ---------------------------------------------------------------------------
# Chebotarev-pipeline constants


def genus_bound(n: int, d: int, m_n: int) -> int:
    """Riemann-Hurwitz bound (m_n - 1)(nd - n - 1), floored at 0."""
    if n < 1 or d < 2 or m_n < 1:
        raise ParameterOutOfRangeError("need n >= 1, d >= 2, m_n >= 1")
    return max(0, (m_n - 1) * (n * d - n - 1))


def ramified_prime_bound(n: int, d: int) -> int:
    """At most n(2d - 2) primes of F_q(t) ramify in the n-th preimage field."""
    if n < 1 or d < 2:
        raise ParameterOutOfRangeError("need n >= 1, d >= 2")
    return n * (2 * d - 2)


def splitting_field_degree(group_order: int, d: int, n: int) -> int:
    """|G|^((d^n - 1)/(d - 1)): the degree of the n-th iterated splitting
    field under the wreath hypothesis, as an exact big integer."""
    if n < 1 or d < 2 or group_order < 1:
        raise ParameterOutOfRangeError("need n >= 1, d >= 2, |G| >= 1")
    return group_order ** ((d**n - 1) // (d - 1))


def chebotarev_error(c: int, m: int, g: int, q) -> float:
    """Explicit function-field Chebotarev error:
    (2c/m) * [(m+g) sqrt(q) + m q^(1/4) + g + m], rounded up."""
    if c < 0 or m < 1 or g < 0:
        raise ParameterOutOfRangeError("need c >= 0, m >= 1, g >= 0")
    if c == 0:
        return 0.0
    with precision(DEFAULT_PRECISION):
        qi = iv.mpf(q)
        root = iv.sqrt(qi)
        fourth = iv.sqrt(root)
        total = (
            interval(Fraction(2 * c, m))
            * ((m + g) * root + m * fourth + g + m)
        )
        return upper_float(total)


@dataclass(frozen=True)
class BoundParameters:
    """Inputs to the explicit image-size error radius."""

    d: int
    n: int
    group_order: int
    m_n: int
    genus: int
    ramified: int
    M: Fraction
    c_prime: Optional[int] = None


def bound_parameters(
    group_order: int, d: int, n: int, M: Fraction = Fraction(3), c_prime: Optional[int] = None
) -> BoundParameters:
    m_n = splitting_field_degree(group_order, d, n)
    return BoundParameters(
        d=d,
        n=n,
        group_order=group_order,
        m_n=m_n,
        genus=genus_bound(n, d, m_n),
        ramified=ramified_prime_bound(n, d),
        M=M,
        c_prime=c_prime,
    )


@dataclass(frozen=True)
class PredictedInterval:
    """Predicted image size fpp*q with explicit error radius
    fpp * 2M * m_n * n * d * sqrt(q).  `vacuous` is set when the radius is
    not certainly below q (the bound then says nothing at this scale)."""

    center: float
    center_exact: Optional[Fraction]
    radius_str: str
    radius: float  # inf when it overflows a double
    vacuous: bool


def predicted_image_interval(
    fpp: Union[FppValue, Fraction], params: BoundParameters, q
) -> PredictedInterval:
    if q < 2:
        raise ParameterOutOfRangeError("q must be >= 2")
    if isinstance(fpp, Fraction):
        fpp_exact: Optional[Fraction] = fpp
        fpp_iv = None
    else:
        fpp_exact = fpp.exact
        fpp_iv = fpp.as_interval() if fpp_exact is None else None
    with precision(DEFAULT_PRECISION):
        f = interval(fpp_exact) if fpp_exact is not None else fpp_iv
        radius = (
            f
            * interval(2 * params.M)
            * iv.mpf(params.m_n)
            * (params.n * params.d)
            * iv.sqrt(iv.mpf(q))
        )
        center_exact = fpp_exact * q if fpp_exact is not None else None
        center = (
            float(center_exact)
            if center_exact is not None
            else float((f * iv.mpf(q)).mid)
        )
        vacuous = not certainly_less(radius, iv.mpf(q))
        hi = endpoints(radius)[1]
        radius_str = mpmath.nstr(hi, 12)
        try:
            radius_float = float(hi)
        except OverflowError:
            radius_float = math.inf
    return PredictedInterval(
        center=center,
        center_exact=center_exact,
        radius_str=radius_str,
        radius=radius_float,
        vacuous=vacuous,
    )


def periodic_proportion_bound(
    q, d: int, A, degree_K: int = 1, M: Fraction = Fraction(3)
) -> float:
    """Explicit upper bound on #Per/(q+1):
    2 log d / (log(log q - K log 2) - A) + 4M q^(-1/4), rounded up.

    Raises BoundVoidError when the denominator is not certainly positive."""
    if d < 2 or degree_K < 1:
        raise ParameterOutOfRangeError("need d >= 2, degree_K >= 1")
    with precision(DEFAULT_PRECISION):
        qi = iv.mpf(q)
        inner = iv.log(qi) - degree_K * iv.log(iv.mpf(2))
        if not certainly_less(iv.mpf(0), inner):
            raise BoundVoidError("log q - K log 2 not positive")
        a_iv = A if isinstance(A, type(iv.mpf(0))) else interval(A)
        denom = iv.log(inner) - a_iv
        if not certainly_less(iv.mpf(0), denom):
            raise BoundVoidError("log(log q - K log 2) does not exceed A")
        main = 2 * iv.log(iv.mpf(d)) / denom
        tail = 4 * interval(M) / iv.sqrt(iv.sqrt(qi))
        return upper_float(main + tail)


# ---------------------------------------------------------------------------
# integer polynomial heights and critical orbits (K = Q)


def _int_eval(coeffs: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _int_derivative(coeffs: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    if n > _ROOT_CONSTANT_CAP:
        raise ParameterOutOfRangeError(
            f"constant term {n} too large for divisor enumeration"
        )
    small, large = [], []
    i = 1
    while i * i <= n:
        if n % i == 0:
            small.append(i)
            if i != n // i:
                large.append(n // i)
        i += 1
    return small + large[::-1]


def _synthetic_div_int(coeffs: list[int], r: int) -> Optional[list[int]]:
    """Divide by (x - r) over Z; None when r is not a root."""
    acc = 0
    quot = [0] * (len(coeffs) - 1)
    for i in range(len(coeffs) - 1, 0, -1):
        acc = acc * r + coeffs[i]
        quot[i - 1] = acc
    if acc * r + coeffs[0] != 0:
        return None
    return quot


def integer_critical_points(coeffs: Sequence[int]) -> list[tuple[int, int]]:
    """Critical points of an integer polynomial, verified to all be rational
    integers; returns (point, multiplicity as root of the derivative).

    Raises NonIntegerCriticalError when the derivative has any irrational or
    non-integer rational root."""
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) < 3 or coeffs[-1] == 0:
        raise ParameterOutOfRangeError("need an integer polynomial of degree >= 2")
    deriv = _int_derivative(coeffs)
    rem = list(deriv)
    roots: dict[int, int] = {}
    # strip the root at 0 first, then trial divisors of the constant term
    while rem[0] == 0:
        roots[0] = roots.get(0, 0) + 1
        rem = rem[1:]
    candidates = set()
    for div in _divisors(rem[0]):
        candidates.update((div, -div))
    for r in sorted(candidates):
        while len(rem) > 1:
            quot = _synthetic_div_int(rem, r)
            if quot is None:
                break
            roots[r] = roots.get(r, 0) + 1
            rem = quot
    if len(rem) > 1:
        raise NonIntegerCriticalError(
            "derivative does not split into integer linear factors"
        )
    return sorted(roots.items())


def _iroot_floor(x: int, k: int) -> int:
    if x < 0:
        raise ValueError("negative radicand")
    if x == 0:
        return 0
    t = 1 << -(-x.bit_length() // k)
    while True:
        nt = ((k - 1) * t + x // t ** (k - 1)) // k
        if nt >= t:
            break
        t = nt
    while t**k > x:
        t -= 1
    while (t + 1) ** k <= x:
        t += 1
    return t


def _iroot_ceil(x: int, k: int) -> int:
    f = _iroot_floor(x, k)
    return f if f**k == x else f + 1


@dataclass(frozen=True)
class HeightReport:
    """Explicit height data for an integer polynomial with integer critical
    points.  The anchors are kept exact: C = log(drift_constant),
    D = log(critical_height), B = critical_height * drift_constant^(1/(d-1)).
    """

    coeffs: tuple[int, ...]
    d: int
    critical: tuple[tuple[int, int], ...]
    drift_constant: int  # (d+1) * max |a_i|;  |phi(x)| <= drift * max(|x|,1)^d
    critical_height: int  # max over critical c of max(|c|, 1)
    degree_K: int

    @property
    def C(self) -> float:
        return upper_float(iv.log(iv.mpf(self.drift_constant)))

    @property
    def D(self) -> float:
        return upper_float(iv.log(iv.mpf(self.critical_height)))

    @property
    def B(self) -> float:
        return upper_float(self._log_B_interval(exp=True))

    def _log_B_interval(self, exp: bool = False):
        log_b = iv.log(iv.mpf(self.critical_height)) + iv.log(
            iv.mpf(self.drift_constant)
        ) / (self.d - 1)
        return iv.exp(log_b) if exp else log_b

    @property
    def A(self) -> float:
        """max(d log d, log log B^(2K)), rounded up (the safe direction for
        the periodic-proportion bound)."""
        with precision(DEFAULT_PRECISION):
            first = self.d * iv.log(iv.mpf(self.d))
            second = iv.log(2 * self.degree_K * self._log_B_interval())
            return max(upper_float(first), upper_float(second))

    def prime_threshold(self, n: int) -> int:
        """ceil(2 B^(2 d^n)) as an exact integer; primes above it keep the
        critical orbits distinct mod p through n iterates."""
        if n < 1:
            raise ParameterOutOfRangeError("n must be >= 1")
        e = 2 * self.d**n
        m = self.d - 1
        est_bits = e * (
            self.critical_height.bit_length() + self.drift_constant.bit_length()
        )
        if est_bits > 8 * _DEFAULT_ORBIT_BITS:
            raise OrbitExplosionError(f"threshold needs ~{est_bits} bits")
        base = 2 * self.critical_height**e * self.drift_constant ** (e // m)
        r = e % m
        if r == 0:
            return base
        # smallest T with T^m >= base^m * drift^r
        return _iroot_ceil(base**m * self.drift_constant**r, m)

    def iterate_threshold(self, q) -> int:
        """Largest n certified by the height bound at modulus size q:
        n < (log(log q - K log 2) - log(2 K log B)) / log d."""
        with precision(DEFAULT_PRECISION):
            inner = iv.log(iv.mpf(q)) - self.degree_K * iv.log(iv.mpf(2))
            if not certainly_less(iv.mpf(0), inner):
                return 0
            numer = iv.log(inner) - iv.log(
                2 * self.degree_K * self._log_B_interval()
            )
            expr = numer / iv.log(iv.mpf(self.d))
            lo = lower_float(expr)
        return max(0, math.ceil(lo) - 1)


def height_constants(
    coeffs: Sequence[int],
    critical_points: Optional[Sequence[int]] = None,
    degree_K: int = 1,
) -> HeightReport:
    """Assemble the explicit height constants for an integer polynomial.

    The drift recipe is elementary: for integers x,
    |phi(x)| <= (d+1) max|a_i| max(|x|,1)^d, so C = log((d+1) max|a_i|) is a
    valid one-sided height-drift constant, and only the upper drift enters
    the orbit bound."""
    coeffs = tuple(int(c) for c in coeffs)
    if len(coeffs) < 3 or coeffs[-1] == 0:
        raise ParameterOutOfRangeError("need an integer polynomial of degree >= 2")
    d = len(coeffs) - 1
    found = integer_critical_points(coeffs)
    if critical_points is not None:
        supplied = sorted(int(c) for c in critical_points)
        if supplied != [c for c, _ in found]:
            raise NonIntegerCriticalError(
                f"supplied critical points {supplied} do not match the "
                f"derivative's integer roots {[c for c, _ in found]}"
            )
    drift = (d + 1) * max(abs(c) for c in coeffs)
    crit_height = max(max(abs(c), 1) for c, _ in found)
    return HeightReport(
        coeffs=coeffs,
        d=d,
        critical=tuple(found),
        drift_constant=drift,
        critical_height=crit_height,
        degree_K=degree_K,
    )


@dataclass(frozen=True)
class OrbitDistinctness:
    """Exact integer critical orbits phi^r(c) for 1 <= r <= n_max."""

    n_max: int
    orbits: dict[int, tuple[int, ...]]
    distinct: bool
    first_collision: Optional[tuple[int, int, int, int]]  # (c, r, c', r')
    max_abs_value: int
    sharp_prime_threshold: int  # max |difference| over pairs with distinct values

    def values(self) -> list[tuple[int, int, int]]:
        return [
            (c, r, v)
            for c, orbit in sorted(self.orbits.items())
            for r, v in enumerate(orbit, start=1)
        ]


def exact_orbit_distinctness(
    coeffs: Sequence[int],
    n_max: int,
    critical_points: Optional[Sequence[int]] = None,
    bit_budget: int = _DEFAULT_ORBIT_BITS,
) -> OrbitDistinctness:
    """Iterate the critical points exactly over Z and report distinctness.

    The sharp prime threshold is the largest pairwise |difference| between
    distinct orbit values: any prime above it cannot collapse two distinct
    values mod p (an exact collision, of course, persists at every prime)."""
    coeffs = [int(c) for c in coeffs]
    if n_max < 1:
        raise ParameterOutOfRangeError("n_max must be >= 1")
    if critical_points is None:
        crits = [c for c, _ in integer_critical_points(coeffs)]
    else:
        crits = [int(c) for c in critical_points]
    orbits: dict[int, list[int]] = {c: [] for c in crits}
    for c in crits:
        x = c
        for _ in range(n_max):
            x = _int_eval(coeffs, x)
            if x.bit_length() > bit_budget:
                raise OrbitExplosionError(
                    f"orbit value exceeds {bit_budget} bits at critical point {c}"
                )
            orbits[c].append(x)
    labeled = [
        (c, r, v) for c in crits for r, v in enumerate(orbits[c], start=1)
    ]
    seen: dict[int, tuple[int, int]] = {}
    collision = None
    for c, r, v in labeled:
        if collision is None and v in seen:
            collision = (c, r, *seen[v])
        elif v not in seen:
            seen[v] = (c, r)
    max_abs = max((abs(v) for _, _, v in labeled), default=0)
    sharp = 0
    vals = [v for _, _, v in labeled]
    for i in range(len(vals)):
        for j in range(i + 1, len(vals)):
            if vals[i] != vals[j]:
                sharp = max(sharp, abs(vals[i] - vals[j]))
    return OrbitDistinctness(
        n_max=n_max,
        orbits={c: tuple(v) for c, v in orbits.items()},
        distinct=collision is None,
        first_collision=collision,
        max_abs_value=max_abs,
        sharp_prime_threshold=sharp,
    )


# ---------------------------------------------------------------------------
# example-family characteristic thresholds


@dataclass(frozen=True)
class FamilyThreshold:
    family: str
    params: dict
    n: int
    threshold: int
    congruence: Optional[tuple[int, int]]  # q = congruence[0] mod congruence[1]
    note: str


def family_map_coeffs(family: str, a: int, c: int = 0, d: int = 2) -> list[int]:
    """Integer coefficient lists for the worked example families."""
    if family == "ax_d_plus_c":
        return [c] + [0] * (d - 1) + [a]
    if family == "odoni":
        # (d-1) x^d + d a x^(d-1)
        return [0] * (d - 1) + [d * a, d - 1]
    raise ParameterOutOfRangeError(f"unknown family {family!r}")


def family_threshold(
    family: str, n: int, a: int, c: Optional[int] = None, d: Optional[int] = None
) -> FamilyThreshold:
    """Characteristic thresholds certifying the wreath Galois structure for
    the worked families a x^d + c and (d-1) x^d + d a x^(d-1)."""
    if n < 1:
        raise ParameterOutOfRangeError("n must be >= 1")
    if family == "ax_d_plus_c":
        if c is None or d is None:
            raise ParameterOutOfRangeError("ax_d_plus_c needs a, c and d")
        if a < 1 or c < 1 or d < 2:
            raise ParameterOutOfRangeError("need a >= 1, c >= 1, d >= 2")
        threshold = (a + c) ** ((d**n - 1) // (d - 1))
        return FamilyThreshold(
            family=family,
            params={"a": a, "c": c, "d": d},
            n=n,
            threshold=threshold,
            congruence=(1, d),
            note="wreath of the cyclic group once q = 1 mod d and char exceeds the threshold",
        )
    if family == "odoni":
        if d is None:
            raise ParameterOutOfRangeError("odoni needs a and d")
        if a < 2 or d < 3:
            raise ParameterOutOfRangeError("need a >= 2, d >= 3")
        threshold = (2 * d) ** ((d ** (n - 1) - 1) // (d - 1)) * a ** (d**n)
        return FamilyThreshold(
            family=family,
            params={"a": a, "d": d},
            n=n,
            threshold=threshold,
            congruence=None,
            note="wreath of the full symmetric group once char exceeds the threshold and char does not divide d",
        )
    raise ParameterOutOfRangeError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# comparison pipeline


@dataclass(frozen=True)
class ComparisonRow:
    n: int
    image_size: int
    affine_image_size: int
    ratio: float
    fpp: FppValue
    m_n_bits: int
    center: float
    radius: float
    radius_str: str
    vacuous: bool
    within_radius: bool
    deviation: float
    applicable: bool


@dataclass(frozen=True)
class ComparisonReport:
    map_description: str
    p: int
    degree: int
    hypothesis: str
    group_order: int
    coset: Optional[str]
    M: Fraction
    count_convention: str
    bijective: bool
    separable: bool
    tameness_advisory_ok: bool
    orbit_certified_up_to: int
    rows: tuple[ComparisonRow, ...]

    def to_dict(self) -> dict:
        return {
            "schema_version": 1,
            "map": self.map_description,
            "p": self.p,
            "degree": self.degree,
            "hypothesis": {
                "group": self.hypothesis,
                "order": str(self.group_order),
                "coset": self.coset,
                "geometric_case": self.coset is None,
            },
            "M": str(self.M),
            "count_convention": self.count_convention,
            "flags": {
                "bijective": self.bijective,
                "separable": self.separable,
                "tameness_advisory_ok": self.tameness_advisory_ok,
                "orbit_certified_up_to": self.orbit_certified_up_to,
            },
            "rows": [
                {
                    "n": r.n,
                    "image_size": r.image_size,
                    "affine_image_size": r.affine_image_size,
                    "ratio": r.ratio,
                    "fpp": str(r.fpp),
                    "fpp_mode": r.fpp.mode,
                    "center": r.center,
                    "radius": r.radius_str,
                    "vacuous": r.vacuous,
                    "within_radius": r.within_radius,
                    "deviation": r.deviation,
                    "m_n_bits": r.m_n_bits,
                    "applicable": r.applicable,
                }
                for r in self.rows
            ],
        }

    CSV_HEADER = (
        "n,image_size,affine_image_size,ratio,fpp,center,radius,"
        "vacuous,within_radius,deviation,applicable"
    )

    def to_csv_lines(self) -> list[str]:
        lines = [self.CSV_HEADER]
        for r in self.rows:
            lines.append(
                f"{r.n},{r.image_size},{r.affine_image_size},{r.ratio!r},"
                f"{r.fpp},{r.center!r},{r.radius_str},{r.vacuous},"
                f"{r.within_radius},{r.deviation!r},{r.applicable}"
            )
        return lines


Hypothesis = Union[str, tuple[str, int], PermutationSet]


def _resolve_hypothesis(
    hypothesis: Hypothesis, tau: Optional[Permutation]
) -> tuple[IndicatrixPolynomial, int, int, str, Optional[str]]:
    """Returns (indicatrix to iterate, group order, degree, name, coset name)."""
    if isinstance(hypothesis, PermutationSet):
        if hypothesis.kind != "group":
            raise ParameterOutOfRangeError("hypothesis set must be a group")
        group = hypothesis
        name = f"explicit[{len(group)} elements, degree {group.degree}]"
        order, degree = len(group), group.degree
    else:
        fam, d = (
            groups.parse_family(hypothesis)
            if isinstance(hypothesis, str)
            else hypothesis
        )
        order, degree = groups.family_order(fam, d), d
        name = f"{fam}{d}"
        group = None
    if tau is None:
        if group is not None:
            phi = groups.indicatrix(group)
        else:
            phi = groups.closed_form_indicatrix(fam, d)
        return phi, order, degree, name, None
    if group is None:
        group = groups.make_group(fam, d)
    if not groups.is_transitive(group):
        raise ParameterOutOfRangeError("coset hypothesis needs a transitive group")
    coset = groups.make_coset(tau, group)
    return groups.indicatrix(coset), order, degree, name, tau.cycle_string()


def compare(
    phi_map: RationalMap,
    hypothesis: Hypothesis,
    n_max: int,
    tau: Optional[Permutation] = None,
    M: Fraction = Fraction(3),
    engine: str = "auto",
    exact_bits: int = DEFAULT_EXACT_BITS,
    prec: int = DEFAULT_PRECISION,
    graph: Optional[FunctionalGraph] = None,
) -> ComparisonReport:
    """Empirical image sizes vs the wreath-hypothesis prediction.

    The report never asserts the hypothesis is the true Galois group; it
    records the hypothesis, the orbit-separation certificate depth, the
    tameness advisory and bijectivity, and marks a row applicable only when
    every hypothesis flag holds at that iterate."""
    if n_max < 1:
        raise ParameterOutOfRangeError("n_max must be >= 1")
    indic, order, hyp_degree, name, coset_name = _resolve_hypothesis(hypothesis, tau)
    d = phi_map.degree
    if hyp_degree != d:
        raise ParameterOutOfRangeError(
            f"hypothesis acts on {hyp_degree} points but the map has degree {d}"
        )
    if graph is None:
        graph = dynamics.build_graph(phi_map, engine=engine)
    p = phi_map.field.p
    sizes = dynamics.image_sizes(graph, n_max)
    affine_sizes = dynamics.affine_image_sizes(graph, n_max)
    bijective = dynamics.is_bijection(graph)
    try:
        orbit = dynamics.check_orbit_separation(phi_map, n_max, graph=graph)
        separable = True
        certified = orbit.certified_up_to
        tame_ok = dynamics.tameness_advisory(phi_map, orbit.critical)
    except InseparableMapError:
        separable = False
        certified = 0
        tame_ok = False
    fpps = groups.fpp_sequence(indic, n_max, exact_bits=exact_bits, prec=prec)
    rows = []
    for n in range(1, n_max + 1):
        fpp = fpps[n - 1]
        params = bound_parameters(order, d, n, M=M)
        pred = predicted_image_interval(fpp, params, p)
        size = sizes[n - 1]
        within = abs(size - pred.center) <= pred.radius
        ratio = size / (p + 1)
        rows.append(
            ComparisonRow(
                n=n,
                image_size=size,
                affine_image_size=affine_sizes[n - 1],
                ratio=ratio,
                fpp=fpp,
                m_n_bits=params.m_n.bit_length(),
                center=pred.center,
                radius=pred.radius,
                radius_str=pred.radius_str,
                vacuous=pred.vacuous,
                within_radius=bool(within),
                deviation=abs(ratio - fpp.approx),
                applicable=(not bijective)
                and separable
                and tame_ok
                and n <= certified,
            )
        )
    return ComparisonReport(
        map_description=phi_map.describe(),
        p=p,
        degree=d,
        hypothesis=name,
        group_order=order,
        coset=coset_name,
        M=M,
        count_convention="projective",
        bijective=bijective,
        separable=separable,
        tameness_advisory_ok=tame_ok,
        orbit_certified_up_to=certified,
        rows=tuple(rows),
    )
