"""Prime fields F_p and the projective line P^1(F_p).

Everything downstream (graph building, fiber counts, critical orbits) runs on
the points enumerated here.  Points are plain residues with a separate
infinity tag; when a flat array index is needed, index p stands for infinity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional

from .errors import EvenCharacteristicError, ZeroInverseError

# Products of two residues must fit 128-bit intermediates on any backend.
MAX_MODULUS = 1 << 61

# Deterministic Miller-Rabin witness set, valid for all n < 3.317e24 (> 2^64).
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test for word-sized n."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class PrimeField:
    """The field F_p.  The modulus is verified prime at construction."""

    p: int

    def __post_init__(self) -> None:
        if not isinstance(self.p, int) or self.p < 2:
            raise ValueError(f"modulus must be an integer >= 2, got {self.p!r}")
        if self.p >= MAX_MODULUS:
            raise ValueError(f"modulus {self.p} exceeds the 2^61 cap")
        if not is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")

    def reduce(self, a: int) -> int:
        return a % self.p


@dataclass(frozen=True)
class ProjectivePoint:
    """A point of P^1(F_p): an affine residue or the point at infinity."""

    value: Optional[int]  # residue in [0, p), or None for infinity

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def index(self, p: int) -> int:
        """Flat array index: affine points map to themselves, infinity to p."""
        return p if self.value is None else self.value

    @staticmethod
    def from_index(i: int, p: int) -> "ProjectivePoint":
        return INFINITY if i == p else ProjectivePoint(i)

    def __str__(self) -> str:
        return "oo" if self.value is None else str(self.value)


INFINITY = ProjectivePoint(None)


def affine_point(a: int, field: PrimeField) -> ProjectivePoint:
    return ProjectivePoint(a % field.p)


def fp_add(a: int, b: int, field: PrimeField) -> int:
    return (a + b) % field.p


def fp_mul(a: int, b: int, field: PrimeField) -> int:
    return (a * b) % field.p


def fp_neg(a: int, field: PrimeField) -> int:
    return (-a) % field.p


def fp_inv(a: int, field: PrimeField) -> int:
    """Multiplicative inverse mod p, via extended gcd."""
    if a % field.p == 0:
        raise ZeroInverseError(f"0 has no inverse mod {field.p}")
    return pow(a, -1, field.p)


def fp_pow(a: int, e: int, field: PrimeField) -> int:
    if e < 0:
        raise ValueError("exponent must be non-negative")
    return pow(a, e, field.p)


def is_square(a: int, field: PrimeField) -> bool:
    """Euler criterion: a is 0 or a^((p-1)/2) = 1.  Requires p odd."""
    if field.p == 2:
        raise EvenCharacteristicError("Euler criterion needs odd p")
    a %= field.p
    if a == 0:
        return True
    return pow(a, (field.p - 1) // 2, field.p) == 1


def enumerate_p1(field: PrimeField) -> Iterator[ProjectivePoint]:
    """Yield 0, 1, ..., p-1, infinity; exactly p+1 points."""
    for a in range(field.p):
        yield ProjectivePoint(a)
    yield INFINITY
