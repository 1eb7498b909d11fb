"""Exact arithmetic in Z/p^M: residues, units, valuations and canonical lifts.

Everything here is plain integer arithmetic on canonical representatives in
[0, p^M).  Residues are immutable and operations are pure, so values can be
shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from .errors import (
    DivisibleByP,
    ModulusMismatch,
    NotARoot,
    NotASimpleRoot,
    NotAUnit,
    OrderUnavailable,
)

#: Sentinel valuation for residues divisible by p^M.  At finite precision a
#: valuation of M cannot be told apart from any larger one (or from zero), so
#: it is reported distinctly instead of as the number M.
SATURATED = None


def is_prime(n: int) -> bool:
    """Primality by trial division; moduli here have small p."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


@dataclass(frozen=True)
class Modulus:
    """The ring Z/p^M for a prime p and precision exponent M >= 1."""

    p: int
    M: int
    pM: int = field(init=False, compare=False)

    def __post_init__(self):
        if not is_prime(self.p):
            raise ValueError(f"p = {self.p} is not prime")
        if self.M < 1:
            raise ValueError(f"precision exponent must be >= 1, got {self.M}")
        object.__setattr__(self, "pM", self.p ** self.M)

    @property
    def threshold(self) -> int:
        """Precision below which distinct roots of unity can collide: 2 for p=2, else 1."""
        return 2 if self.p == 2 else 1

    def residue(self, value: int) -> "Residue":
        return Residue(value % self.pM, self)

    def __repr__(self):
        return f"Modulus({self.p}^{self.M})"


@dataclass(frozen=True)
class Residue:
    """An element of Z/p^M stored as its canonical representative."""

    value: int
    modulus: Modulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.pM:
            object.__setattr__(self, "value", self.value % self.modulus.pM)

    def _check(self, other: "Residue") -> None:
        if self.modulus != other.modulus:
            raise ModulusMismatch(f"{self.modulus} vs {other.modulus}")

    def __add__(self, other: "Residue") -> "Residue":
        self._check(other)
        return Residue((self.value + other.value) % self.modulus.pM, self.modulus)

    def __sub__(self, other: "Residue") -> "Residue":
        self._check(other)
        return Residue((self.value - other.value) % self.modulus.pM, self.modulus)

    def __mul__(self, other: "Residue") -> "Residue":
        self._check(other)
        return Residue((self.value * other.value) % self.modulus.pM, self.modulus)

    def __neg__(self) -> "Residue":
        return Residue(-self.value % self.modulus.pM, self.modulus)

    def __pow__(self, n: int) -> "Residue":
        if n < 0:
            return invert(self) ** (-n)
        return Residue(pow(self.value, n, self.modulus.pM), self.modulus)

    def reduce(self, n: int) -> "Residue":
        """Image under Z/p^M -> Z/p^n for n <= M."""
        if n > self.modulus.M:
            raise ValueError(f"cannot reduce precision {self.modulus.M} to {n}")
        m = Modulus(self.modulus.p, n)
        return Residue(self.value % m.pM, m)

    def __repr__(self):
        return f"{self.value} (mod {self.modulus.p}^{self.modulus.M})"


def valuation_int(value: int, p: int, M: int) -> Optional[int]:
    """p-adic valuation of a canonical representative, SATURATED once it reaches M."""
    if value % p ** M == 0:
        return SATURATED
    e = 0
    while value % p == 0:
        value //= p
        e += 1
    return e


def valuation(x: Residue) -> Optional[int]:
    """Largest e with p^e | x, or SATURATED when that exceeds the precision."""
    return valuation_int(x.value, x.modulus.p, x.modulus.M)


def invert(x: Residue) -> Residue:
    """Multiplicative inverse of a unit mod p^M."""
    if x.value % x.modulus.p == 0:
        raise NotAUnit(f"{x} is divisible by {x.modulus.p}")
    return Residue(pow(x.value, -1, x.modulus.pM), x.modulus)


def _poly_eval(coeffs: Sequence[int], x: int, mod: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % mod
    return acc


def _poly_deriv(coeffs: Sequence[int]) -> list[int]:
    return [i * c for i, c in enumerate(coeffs)][1:]


def hensel_lift(coeffs: Sequence[int], r0: int, base_level: int, target: Modulus) -> Residue:
    """Newton-lift a simple root of an integer polynomial to precision M.

    ``coeffs`` lists coefficients from the constant term upward.  ``r0`` must
    satisfy f(r0) = 0 mod p^base_level and f'(r0) must be a unit mod p; the
    result is then the unique root r = r0 mod p^base_level of f mod p^M.
    """
    p, M, pM = target.p, target.M, target.pM
    if base_level < 1:
        raise ValueError("base_level must be >= 1")
    if _poly_eval(coeffs, r0, p ** base_level) != 0:
        raise NotARoot(f"f({r0}) != 0 mod {p}^{base_level}")
    deriv = _poly_deriv(coeffs)
    if _poly_eval(deriv, r0, p) == 0:
        raise NotASimpleRoot(f"f'({r0}) = 0 mod {p}")
    r = r0 % pM
    # Each step at least doubles the valuation of f(r); M iterations are ample.
    for _ in range(M + 1):
        fr = _poly_eval(coeffs, r, pM)
        if fr == 0:
            break
        r = (r - fr * pow(_poly_eval(deriv, r, pM), -1, pM)) % pM
    assert _poly_eval(coeffs, r, pM) == 0
    # the base congruence is only visible up to the working precision
    assert (r - r0) % p ** min(base_level, M) == 0
    return Residue(r, target)


def teichmuller(a: int, target: Modulus) -> Residue:
    """The unique (p-1)-th root of unity congruent to a mod p.

    Computed by iterating x -> x^p, which contracts to the fixed point.
    """
    p, pM = target.p, target.pM
    if a % p == 0:
        raise DivisibleByP(f"{a} is divisible by {p}")
    t = a % pM
    while True:
        nxt = pow(t, p, pM)
        if nxt == t:
            break
        t = nxt
    return Residue(t, target)


def smallest_primitive_root(p: int) -> int:
    """Least positive generator of (Z/p)^x."""
    if p == 2:
        return 1
    factors = []
    n, d = p - 1, 2
    while d * d <= n:
        if n % d == 0:
            factors.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        factors.append(n)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise AssertionError(f"no primitive root mod {p}")


def mth_root_of_unity(m: int, target: Modulus) -> Residue:
    """A residue of exact multiplicative order m mod p^M, for m | p-1.

    Derived from the Teichmüller lift of the smallest primitive root, so the
    choice is deterministic.
    """
    p = target.p
    if m < 1 or (p - 1) % m != 0:
        raise OrderUnavailable(f"no element of order {m}: {m} does not divide {p}-1")
    if m == 1:
        return Residue(1 % target.pM, target)
    g = smallest_primitive_root(p)
    b = teichmuller(g, target) ** ((p - 1) // m)
    return b


def multiplicative_order(x: Residue, bound: int = 10 ** 6) -> int:
    """Order of a unit in (Z/p^M)^x by direct powering."""
    if x.value % x.modulus.p == 0:
        raise NotAUnit(f"{x} is not a unit")
    acc, n = x.value, 1
    while acc != 1:
        acc = acc * x.value % x.modulus.pM
        n += 1
        if n > bound:
            raise AssertionError("order exceeds bound")
    return n
