"""Polynomial arithmetic over F_p on plain coefficient lists.

Coefficients are ascending (index i holds the x^i coefficient), reduced
mod p, with trailing zeros trimmed.  The zero polynomial is the empty list.
"""

from __future__ import annotations

from typing import Sequence


def normalize(coeffs: Sequence[int], p: int) -> list[int]:
    out = [c % p for c in coeffs]
    while out and out[-1] == 0:
        out.pop()
    return out


def degree(coeffs: Sequence[int]) -> int:
    """Degree of a normalized polynomial; -1 for the zero polynomial."""
    return len(coeffs) - 1


def is_zero(coeffs: Sequence[int]) -> bool:
    return len(coeffs) == 0


def add(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def sub(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    return add(a, [(-c) % p for c in b], p)


def mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca == 0:
            continue
        for j, cb in enumerate(b):
            out[i + j] = (out[i + j] + ca * cb) % p
    while out and out[-1] == 0:
        out.pop()
    return out


def scale(a: Sequence[int], k: int, p: int) -> list[int]:
    return normalize([c * k for c in a], p)


def divmod_poly(a: Sequence[int], b: Sequence[int], p: int) -> tuple[list[int], list[int]]:
    if is_zero(b):
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(a)
    quot = [0] * max(0, len(a) - len(b) + 1)
    inv_lead = pow(b[-1], -1, p)
    while len(rem) >= len(b) and rem:
        shift = len(rem) - len(b)
        factor = rem[-1] * inv_lead % p
        quot[shift] = factor
        for i, c in enumerate(b):
            rem[shift + i] = (rem[shift + i] - factor * c) % p
        while rem and rem[-1] == 0:
            rem.pop()
    while quot and quot[-1] == 0:
        quot.pop()
    return quot, rem


def gcd(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Monic gcd via Euclid."""
    a = normalize(a, p)
    b = normalize(b, p)
    while not is_zero(b):
        _, r = divmod_poly(a, b, p)
        a, b = b, r
    if a:
        a = scale(a, pow(a[-1], -1, p), p)
    return a


def evaluate(coeffs: Sequence[int], x: int, p: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def derivative(coeffs: Sequence[int], p: int) -> list[int]:
    out = [(i * c) % p for i, c in enumerate(coeffs)][1:]
    while out and out[-1] == 0:
        out.pop()
    return out


def root_multiplicity(coeffs: Sequence[int], r: int, p: int) -> int:
    """Multiplicity of r as a root, by repeated synthetic division."""
    mult = 0
    cur = list(coeffs)
    while cur:
        # synthetic division of cur by (x - r)
        quot: list[int] = [0] * (len(cur) - 1)
        acc = 0
        for i in range(len(cur) - 1, 0, -1):
            acc = (acc * r + cur[i]) % p
            quot[i - 1] = acc
        remainder = (acc * r + cur[0]) % p
        if remainder != 0:
            break
        mult += 1
        cur = quot
        while cur and cur[-1] == 0:
            cur.pop()
    return mult
