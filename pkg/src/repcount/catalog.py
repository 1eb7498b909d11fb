"""Construction of the supported reflection groups and their exponent data.

Covers the four exceptional groups over their home primes (G12 at p=3, G24
at p=2, G29 and G31 at p=5), the monomial groups G(m,s,n), and the rank-one
sphere case G(m,1,1).  The quadratic constants in the exceptional generator
matrices are realized exactly at any requested precision via Hensel lifting
and Teichmüller representatives, so a group can always be rebuilt at a
higher precision; fractional entries (1/2, 1/sqrt(-2)) become modular
inverses, which is legal because 2 is a unit at the relevant odd primes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

from .errors import NotFactorable, SpecInvalid
from .groups import FiniteMatrixGroup, close
from .linalg import SquareMatrix
from .modp import Modulus, hensel_lift, invert, is_prime, mth_root_of_unity, teichmuller

EXCEPTIONAL = {
    # kind: (prime, rank, order, exponents)
    "g12": (3, 2, 48, (5, 7)),
    "g24": (2, 3, 336, (3, 5, 13)),
    "g29": (5, 4, 7680, (3, 7, 11, 19)),
    "g31": (5, 4, 46080, (7, 11, 19, 23)),
}

#: Closed-form-only case: no generator matrices are published, so there is
#: no build path; only the polynomial evaluator handles it.
FORMULA_ONLY = {"g34"}

_ALIASES = {"x12": "g12", "x24": "g24", "x29": "g29", "x31": "g31", "x34": "g34"}


@dataclass(frozen=True)
class GroupSpec:
    """Which group to build: an exceptional case, a G(m,s,n), or a sphere."""

    kind: str
    m: Optional[int] = None
    s: Optional[int] = None
    n: Optional[int] = None
    p: Optional[int] = None

    def __post_init__(self):
        if self.kind in EXCEPTIONAL:
            object.__setattr__(self, "p", EXCEPTIONAL[self.kind][0])
            return
        if self.kind in FORMULA_ONLY:
            object.__setattr__(self, "p", 7)
            return
        if self.kind == "family2a":
            m, s, n, p = self.m, self.s, self.n, self.p
            if m is None or s is None or n is None or p is None:
                raise SpecInvalid("family2a needs m, s, n, p")
            if m <= 2:
                raise SpecInvalid(f"family2a requires m > 2, got m={m}")
            if s < 1 or m % s != 0:
                raise SpecInvalid(f"s={s} must divide m={m}")
            if n < 2:
                raise SpecInvalid(f"family2a requires n >= 2, got n={n}")
            if n == 2 and m == s:
                raise SpecInvalid("family2a excludes m = s when n = 2")
            _check_prime_congruence(p, m)
            return
        if self.kind == "sphere":
            m, p = self.m, self.p
            if m is None or p is None:
                raise SpecInvalid("sphere needs m, p")
            if m < 2:
                raise SpecInvalid(f"sphere requires m >= 2, got m={m}")
            _check_prime_congruence(p, m)
            if p == 2:
                raise SpecInvalid("sphere requires an odd prime")
            return
        raise SpecInvalid(f"unknown group kind {self.kind!r}")

    @property
    def buildable(self) -> bool:
        return self.kind not in FORMULA_ONLY

    @property
    def rank(self) -> int:
        if self.kind in EXCEPTIONAL:
            return EXCEPTIONAL[self.kind][1]
        if self.kind in FORMULA_ONLY:
            return 6
        return self.n if self.kind == "family2a" else 1

    @property
    def expected_order(self) -> int:
        if self.kind in EXCEPTIONAL:
            return EXCEPTIONAL[self.kind][2]
        if self.kind in FORMULA_ONLY:
            return 39191040
        if self.kind == "family2a":
            return self.m ** self.n * math.factorial(self.n) // self.s
        return self.m

    def min_modulus_exponent(self) -> int:
        """Smallest working precision that resolves ranks and torsion.

        Covers the faithfulness threshold, two extra digits for torsion
        separation, and enough headroom for trace-averaged ranks (p^M must
        exceed max-element-order times the rank; anything missed here is
        recovered by the on-demand lift in rank_of).
        """
        base = {"g12": 3, "g24": 6, "g29": 3, "g31": 3}.get(self.kind)
        if base is not None:
            return base
        p = self.p
        threshold = 2 if p == 2 else 1
        return max(threshold + 2, 3)

    def label(self) -> str:
        if self.kind in EXCEPTIONAL or self.kind in FORMULA_ONLY:
            return self.kind
        if self.kind == "family2a":
            return f"family2a:m={self.m},s={self.s},n={self.n},p={self.p}"
        return f"sphere:m={self.m},p={self.p}"


def _check_prime_congruence(p: int, m: int) -> None:
    if not is_prime(p):
        raise SpecInvalid(f"p={p} is not prime")
    if (p - 1) % m != 0:
        raise SpecInvalid(f"need p = 1 mod m, got p={p}, m={m}")


_SPEC_RE = re.compile(r"^(family2a|sphere):(.*)$")


def parse_spec(text: str) -> GroupSpec:
    """Parse the CLI grammar: g12|g24|g29|g31|x34|family2a:m=..,s=..,n=..,p=..|sphere:m=..,p=.."""
    t = text.strip().lower()
    t = _ALIASES.get(t, t)
    if t in EXCEPTIONAL or t in FORMULA_ONLY:
        return GroupSpec(t)
    m = _SPEC_RE.match(t)
    if not m:
        raise SpecInvalid(f"unrecognized group spec {text!r}")
    kind, rest = m.group(1), m.group(2)
    allowed = ("m", "p") if kind == "sphere" else ("m", "s", "n", "p")
    params = {}
    for item in rest.split(","):
        if "=" not in item:
            raise SpecInvalid(f"bad parameter {item!r} in {text!r}")
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in allowed:
            raise SpecInvalid(f"unknown parameter {key!r} in {text!r}")
        try:
            params[key] = int(val)
        except ValueError:
            raise SpecInvalid(f"parameter {key!r} must be an integer") from None
    return GroupSpec(kind, **params)


# -- generator matrices ----------------------------------------------------


def _g12_generators(modulus: Modulus) -> list:
    # omega is the root of (2x+1)^2 = -2 that is divisible by 3; the square
    # root of -2 is tied to it as 2*omega + 1 so the two constants agree.
    omega = hensel_lift([3, 4, 4], 0, 1, modulus)  # 4x^2 + 4x + 3
    sqrt_m2 = modulus.residue(2 * omega.value + 1)
    omega_bar = -(modulus.residue(1) + omega)
    assert omega_bar.value % 3 == 2
    half = invert(modulus.residue(2))
    inv_sqrt = invert(sqrt_m2)
    mk = lambda rows: SquareMatrix.from_rows(rows, modulus)
    return [
        mk([[0, 1], [-1, 0]]),
        mk([[-inv_sqrt.value, inv_sqrt.value], [inv_sqrt.value, inv_sqrt.value]]),
        mk([[omega.value, half.value], [-half.value, omega_bar.value]]),
        mk([[0, 1], [1, 0]]),
    ]


def _g24_generators(modulus: Modulus) -> list:
    alpha = hensel_lift([2, -1, 1], 3, 3, modulus)  # x^2 - x + 2, root = 3 mod 8
    alpha_bar = modulus.residue(1 - alpha.value)
    assert alpha_bar.value % min(8, modulus.pM) == 6 % min(8, modulus.pM)
    mk = lambda rows: SquareMatrix.from_rows(rows, modulus)
    return [
        mk([[-1, -alpha_bar.value, 1], [0, 1, 0], [0, 0, 1]]),
        mk([[1, 0, 0], [-alpha.value, -1, 1], [0, 0, 1]]),
        mk([[1, 0, 0], [0, 1, 0], [1, 1, -1]]),
    ]


def _g29_generators(modulus: Modulus) -> list:
    omega = teichmuller(2, modulus)  # order-4 unit, = 2 mod 5
    half = invert(modulus.residue(2))
    h = half.value
    w = omega.value
    mk = lambda rows: SquareMatrix.from_rows(rows, modulus)
    return [
        mk([[h, -h, -h, -h], [-h, h, -h, -h], [-h, -h, h, -h], [-h, -h, -h, h]]),
        mk([[0, -w, 0, 0], [w, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        mk([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]),
        mk([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]]),
    ]


def _g31_generators(modulus: Modulus) -> list:
    mk = lambda rows: SquareMatrix.from_rows(rows, modulus)
    return _g29_generators(modulus) + [
        mk([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, -1, 0], [0, 0, 0, 1]])
    ]


def monomial_generators(m: int, s: int, n: int, modulus: Modulus) -> list:
    """Generators of G(m,s,n) over Z/p^M, for any s | m with p = 1 mod m.

    The group of monomial matrices whose nonzero entries are m-th roots of
    unity and whose determinant is an (m/s)-th root of unity: adjacent
    transpositions, diag(b^s, 1, ...) and diag(b, b^-1, 1, ...) shifted along
    adjacent pairs, where b is the canonical element of order m.
    """
    if s < 1 or m % s != 0:
        raise SpecInvalid(f"s={s} must divide m={m}")
    if n < 1:
        raise SpecInvalid(f"need n >= 1, got n={n}")
    _check_prime_congruence(modulus.p, m)
    b = mth_root_of_unity(m, modulus)
    binv = invert(b)

    def diag(entries):
        return SquareMatrix.from_rows(
            [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)], modulus
        )

    gens = []
    for i in range(n - 1):
        perm = [[1 if (j == (i + 1 if r == i else i if r == i + 1 else r)) else 0
                 for j in range(n)] for r in range(n)]
        gens.append(SquareMatrix.from_rows(perm, modulus))
    gens.append(diag([pow(b.value, s, modulus.pM)] + [1] * (n - 1)))
    for i in range(n - 1):
        entries = [1] * n
        entries[i], entries[i + 1] = b.value, binv.value
        gens.append(diag(entries))
    return gens


def generators(spec: GroupSpec, modulus: Modulus) -> list:
    if modulus.p != spec.p:
        raise SpecInvalid(f"{spec.label()} lives at p={spec.p}, modulus has p={modulus.p}")
    if spec.kind == "g12":
        return _g12_generators(modulus)
    if spec.kind == "g24":
        return _g24_generators(modulus)
    if spec.kind == "g29":
        return _g29_generators(modulus)
    if spec.kind == "g31":
        return _g31_generators(modulus)
    if spec.kind == "family2a":
        return monomial_generators(spec.m, spec.s, spec.n, modulus)
    if spec.kind == "sphere":
        return monomial_generators(spec.m, 1, 1, modulus)
    raise SpecInvalid(f"{spec.label()} has no generator matrices")


def build(spec: GroupSpec, working_modulus: Optional[Modulus] = None,
          cap: int = 10 ** 8) -> FiniteMatrixGroup:
    """Close the group for a spec at the given (or default) precision."""
    if not spec.buildable:
        raise SpecInvalid(f"{spec.label()} has no build path (no published matrices)")
    if working_modulus is None:
        working_modulus = Modulus(spec.p, spec.min_modulus_exponent())
    elif working_modulus.M < working_modulus.threshold:
        raise SpecInvalid(
            f"working precision {working_modulus.M} is below the faithfulness "
            f"threshold {working_modulus.threshold}"
        )
    gens = generators(spec, working_modulus)
    group = close(gens, cap=cap,
                  generator_factory=lambda mod: generators(spec, mod),
                  name=spec.label())
    assert group.order == spec.expected_order, (
        f"{spec.label()} closed to {group.order}, expected {spec.expected_order}"
    )
    return group


@dataclass(frozen=True)
class ExponentList:
    """Reflection-group exponents m_i, sorted; prod(m_i + 1) is the order."""

    values: tuple

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)

    def order_product(self) -> int:
        return math.prod(m + 1 for m in self.values)


def exponents(spec: GroupSpec) -> ExponentList:
    """Catalog exponents for a spec."""
    if spec.kind in EXCEPTIONAL:
        return ExponentList(EXCEPTIONAL[spec.kind][3])
    if spec.kind in FORMULA_ONLY:
        raise SpecInvalid(f"{spec.label()} has no catalog exponents")
    if spec.kind == "family2a":
        m, s, n = spec.m, spec.s, spec.n
        vals = [i * m - 1 for i in range(1, n)] + [n * m // s - 1]
        return ExponentList(tuple(sorted(vals)))
    return ExponentList((spec.m - 1,))


def derive_exponents(group: FiniteMatrixGroup) -> ExponentList:
    """Recover exponents by factoring the rank-generating polynomial.

    Sums t^rank(w) over the group (classwise) and splits the result as
    prod(t + m_i) over non-negative integers; zero roots correspond to a
    fixed subspace and are dropped, so the trivial group yields ().
    """
    l = group.dim
    h = [0] * (l + 1)
    for rec in group.conjugacy_classes():
        h[rec.rank] += rec.class_size
    coeffs = h[:]  # coeffs[i] multiplies t^i
    roots = []
    for _ in range(l):
        deg = len(coeffs) - 1
        bound = coeffs[deg - 1] // coeffs[deg] if deg >= 1 else 0
        for m in range(0, bound + 1):
            # synthetic division of coeffs by (t + m)
            quot = [0] * deg
            carry = coeffs[deg]
            for i in range(deg - 1, -1, -1):
                quot[i] = carry
                carry = coeffs[i] - m * carry
            if carry == 0:
                roots.append(m)
                coeffs = quot
                break
        else:
            raise NotFactorable(f"rank polynomial {h} does not split over Z")
    return ExponentList(tuple(sorted(m for m in roots if m > 0)))
