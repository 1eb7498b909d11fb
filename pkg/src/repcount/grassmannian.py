"""Orbit structure on Z/p^k under a root of unity, and the monomial-group count.

For G(m,s,n) acting monomially on (Z/p^k)^n, orbits are classified by a
fundamental domain of "distinguished" tuples.  Let c be a unit of exact
order m, H = <c> and K = <c^s>.  A tuple is distinguished when its
coordinates sit in H-orbits with non-decreasing indices, every coordinate
but the last is the minimum of its H-orbit, and the last coordinate is

  * the minimum of its K-orbit when no coordinate is zero, but
  * the minimum of its H-orbit when some coordinate is zero.

The split matters: a zero coordinate absorbs any exponent, so the mod-s
constraint on the diagonal part never restricts the remaining coordinates
and the finer K-orbit classes collapse.  (Keeping the K-orbit condition in
the presence of zeros over-counts: for s = m = 3, p = 7 the tuples (0,0,1)
and (0,0,2) would both qualify, yet diag(2,2,2) maps one to the other.)
Counting the domain gives the closed form

  count = C(N+n-1, n-1) + s * C(N+n-1, n),   N = (p^k - 1)/m,

which ``enumerate_distinguished`` reproduces from the orbit tables and
which must also equal plain Burnside counting on the matrix group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Optional

from .errors import SpaceTooLarge, SpecInvalid
from .modp import Modulus, is_prime, mth_root_of_unity

#: Orbit tables are materialized only up to this many points.
MAX_TABLE_POINTS = 2 ** 20


@dataclass(frozen=True)
class HOrbit:
    """One orbit of <c> on Z/p^k with its sub-orbits under <c^s>."""

    minimum: int
    elements: tuple          # sorted ascending
    k_orbit_minima: tuple    # sorted ascending, one per <c^s>-orbit


@dataclass(frozen=True)
class OrbitStructure:
    """Partition of Z/p^k into <c>-orbits, orbit 0 being {0}."""

    p: int
    k: int
    m: int
    s: int
    c: int
    orbits: tuple  # orbits[0] = {0}; orbits[1..] sorted by minimum

    @property
    def nonzero_orbit_count(self) -> int:
        return len(self.orbits) - 1


def _validate_scalar_params(m: int, s: int, p: int, k: int) -> None:
    if not is_prime(p):
        raise SpecInvalid(f"p={p} is not prime")
    if m < 1 or (p - 1) % m != 0:
        raise SpecInvalid(f"need p = 1 mod m, got p={p}, m={m}")
    if s < 1 or m % s != 0:
        raise SpecInvalid(f"s={s} must divide m={m}")
    if k < 1:
        raise SpecInvalid(f"k must be >= 1, got {k}")


def build_orbits(m: int, s: int, p: int, k: int, root: Optional[int] = None) -> OrbitStructure:
    """Full orbit tables of <c> and <c^s> on Z/p^k, with per-orbit minima.

    ``root`` overrides the canonical order-m unit; any unit of exact order m
    yields the same orbit counts (though different minima).
    """
    _validate_scalar_params(m, s, p, k)
    pk = p ** k
    if pk > MAX_TABLE_POINTS:
        raise SpaceTooLarge(f"orbit table with {pk} points exceeds {MAX_TABLE_POINTS}")
    if root is None:
        c = mth_root_of_unity(m, Modulus(p, k)).value
    else:
        c = root % pk
        if _order_mod(c, pk, m) != m:
            raise SpecInvalid(f"root {root} does not have exact order {m} mod {p}^{k}")
    cs = pow(c, s, pk)
    seen = bytearray(pk)
    zero_orbit = HOrbit(minimum=0, elements=(0,), k_orbit_minima=(0,))
    seen[0] = 1
    nonzero = []
    for x in range(1, pk):
        if seen[x]:
            continue
        elems = []
        y = x
        while not seen[y]:
            seen[y] = 1
            elems.append(y)
            y = y * c % pk
        elems.sort()
        assert len(elems) == m
        k_minima = []
        sub_seen = set()
        for e in elems:
            if e in sub_seen:
                continue
            sub = []
            y = e
            while y not in sub_seen:
                sub_seen.add(y)
                sub.append(y)
                y = y * cs % pk
            k_minima.append(min(sub))
        k_minima.sort()
        assert len(k_minima) == s
        nonzero.append(HOrbit(minimum=elems[0], elements=tuple(elems),
                              k_orbit_minima=tuple(k_minima)))
    nonzero.sort(key=lambda o: o.minimum)
    assert len(nonzero) == (pk - 1) // m
    return OrbitStructure(p=p, k=k, m=m, s=s, c=c, orbits=(zero_orbit, *nonzero))


def _order_mod(c: int, pk: int, bound: int) -> int:
    acc, n = c % pk, 1
    while acc != 1:
        acc = acc * c % pk
        n += 1
        if n > bound:
            return n
    return n


def _validate_family(m: int, s: int, n: int, p: int, k: int) -> None:
    _validate_scalar_params(m, s, p, k)
    if n < 1:
        raise SpecInvalid(f"n must be >= 1, got {n}")
    if n == 1:
        if s != 1:
            raise SpecInvalid("rank-one case requires s = 1")
        return
    if m <= 2:
        raise SpecInvalid(f"need m > 2, got m={m}")
    if n == 2 and m == s:
        raise SpecInvalid("m = s is excluded when n = 2")


def enumerate_distinguished(
    m: int, s: int, n: int, p: int, k: int,
    materialize: bool = False,
    root: Optional[int] = None,
):
    """Count (and optionally list) the distinguished tuples in (Z/p^k)^n.

    Iterates over multisets of nonzero-orbit indices (equivalently weak
    compositions of the tuple length over the orbits) and reads coordinate
    choices off the orbit table, so the cost is proportional to the answer
    rather than to p^(kn): a multiset of size t < n fills the remaining
    n - t coordinates with zeros and contributes one tuple of orbit minima;
    a multiset of size n has no zeros, so the last coordinate additionally
    ranges over the s sub-orbit minima of its orbit.
    """
    _validate_family(m, s, n, p, k)
    table = build_orbits(m, s, p, k, root=root)
    nz = table.nonzero_orbit_count
    tuples = [] if materialize else None
    count = 0
    for t in range(n):
        for multiset in combinations_with_replacement(range(1, nz + 1), t):
            count += 1
            if materialize:
                tuples.append(
                    (0,) * (n - t) + tuple(table.orbits[i].minimum for i in multiset)
                )
    for multiset in combinations_with_replacement(range(1, nz + 1), n):
        last = table.orbits[multiset[-1]]
        count += len(last.k_orbit_minima)
        if materialize:
            prefix = tuple(table.orbits[i].minimum for i in multiset[:-1])
            tuples.extend(prefix + (b,) for b in last.k_orbit_minima)
    return count, tuples


def theorem_b(m: int, s: int, n: int, p: int, k: int) -> int:
    """Closed-form size of the fundamental domain for G(m,s,n) on (Z/p^k)^n.

    Multisets of size up to n-1 (padded with zeros) telescope to a single
    binomial coefficient; the zero-free multisets of size n carry the
    factor s.
    """
    _validate_family(m, s, n, p, k)
    nz = (p ** k - 1) // m
    return math.comb(nz + n - 1, n - 1) + s * math.comb(nz + n - 1, n)


def sphere_count(m: int, p: int, k: int) -> int:
    """Orbit count for the rank-one case G(m,1,1): 1 + (p^k - 1)/m."""
    _validate_family(m, 1, 1, p, k)
    return 1 + (p ** k - 1) // m
