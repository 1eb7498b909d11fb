"""Finite matrix groups over Z/p^M: closure, conjugacy classes, ranks.

Groups are closed once and then immutable.  Elements live in a single dense
store (a numpy int64 array when entry products cannot overflow, otherwise
plain Python integers) indexed by canonical byte keys; every element also
carries a word in the generators, which is what allows re-evaluating a given
element at a higher precision without re-closing the whole group.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import (
    CapExceeded,
    NonIntegralRank,
    PrecisionTooLow,
    UnfaithfulReduction,
)
from .linalg import (
    SmithValuations,
    SquareMatrix,
    mat_mul_raw,
    smith_valuations_raw,
)
from .modp import Modulus

DEFAULT_CLOSURE_CAP = 10 ** 8

#: Generators at a requested precision, for re-evaluating element words.
GeneratorFactory = Callable[[Modulus], list]


def _numpy_safe(modulus: Modulus, dim: int) -> bool:
    # Entry products accumulate to at most dim * (p^M - 1)^2 in a matmul.
    return dim * (modulus.pM - 1) ** 2 < 2 ** 63


@dataclass
class ConjugacyClassRecord:
    """One conjugacy class with its fixed-space data.

    ``torsion_vals`` holds the valuations of the finite part of the cokernel
    of (w - I); it is None while the group's own precision cannot separate
    those valuations from the free part, in which case the counting layer
    re-resolves at higher precision.
    """

    rep_index: int
    representative: SquareMatrix
    class_size: int
    centralizer_order: int
    element_order: int
    rank: int
    smith_vals: SmithValuations
    torsion_vals: Optional[tuple]

    def torsion_order(self) -> Optional[int]:
        if self.torsion_vals is None:
            return None
        p = self.representative.modulus.p
        return p ** sum(self.torsion_vals)


class FiniteMatrixGroup:
    """A finite group of invertible l x l matrices over Z/p^M."""

    def __init__(self, modulus, dim, generators, rows, words, keys,
                 generator_factory=None, name=None):
        self.modulus = modulus
        self.dim = dim
        self.generators = tuple(generators)
        self._rows = rows          # list of tuple-of-tuples (python path) or None
        self._arr = None           # numpy (N, l, l) store (numpy path) or None
        if isinstance(rows, np.ndarray):
            self._arr = rows
            self._rows = None
        self._words = words        # words[i] = (parent index, generator index)
        self._keys = keys          # canonical byte key -> element index
        self._key_list = list(keys.keys())
        self.generator_factory = generator_factory
        self.name = name
        self._classes: Optional[list] = None
        self._class_of: Optional[list] = None

    # -- basic queries ----------------------------------------------------

    @property
    def order(self) -> int:
        return len(self._key_list)

    def __len__(self) -> int:
        return self.order

    def element_rows(self, i: int) -> tuple:
        if self._arr is not None:
            return tuple(tuple(int(x) for x in row) for row in self._arr[i])
        return self._rows[i]

    def element(self, i: int) -> SquareMatrix:
        return SquareMatrix(self.element_rows(i), self.modulus)

    def elements(self):
        """All elements in insertion order."""
        return (self.element(i) for i in range(self.order))

    def _encode_rows(self, rows) -> bytes:
        if self._arr is not None:
            return np.asarray(rows, dtype=np.int64).astype(">u8").tobytes()
        width = ((self.modulus.pM - 1).bit_length() + 7) // 8
        return b"".join(int(x).to_bytes(width, "big") for r in rows for x in r)

    def find(self, mat: SquareMatrix) -> int:
        """Index of a matrix in the element store; KeyError if absent."""
        return self._keys[self._encode_rows(mat.rows)]

    def __contains__(self, mat: SquareMatrix) -> bool:
        return self._encode_rows(mat.rows) in self._keys

    def key_of(self, i: int) -> bytes:
        return self._key_list[i]

    def word(self, i: int) -> list:
        """Generator indices whose left-to-right product is element i."""
        out = []
        while i != 0:
            parent, gi = self._words[i]
            out.append(gi)
            i = parent
        out.reverse()
        return out

    # -- precision changes -------------------------------------------------

    def element_rows_at(self, i: int, target_M: int) -> tuple:
        """Element i re-expressed mod p^target_M.

        Reduction is entrywise; raising precision re-evaluates the element's
        generator word, which requires a generator factory.
        """
        p = self.modulus.p
        if target_M <= self.modulus.M:
            pn = p ** target_M
            return tuple(tuple(x % pn for x in row) for row in self.element_rows(i))
        if self.generator_factory is None:
            raise PrecisionTooLow(
                f"group built at {self.modulus} has no generator factory to reach M={target_M}"
            )
        target = Modulus(p, target_M)
        gens = [g.rows for g in self.generator_factory(target)]
        acc = SquareMatrix.identity(self.dim, target).rows
        for gi in self.word(i):
            acc = mat_mul_raw(acc, gens[gi], target.pM)
        return acc

    def reduce_modulus(self, n: int) -> "FiniteMatrixGroup":
        """Entrywise reduction mod p^n; the element count must survive."""
        if n > self.modulus.M:
            raise PrecisionTooLow(f"cannot reduce {self.modulus} to exponent {n}")
        if n == self.modulus.M:
            return self
        target = Modulus(self.modulus.p, n)
        gens = [SquareMatrix.from_rows(g.rows, target) for g in self.generators]
        if self._arr is not None:
            arr = self._arr % target.pM
            keys = {}
            for i in range(arr.shape[0]):
                k = arr[i].astype(">u8").tobytes()
                if k in keys:
                    raise UnfaithfulReduction(
                        f"elements collide mod {target.p}^{n} (order would drop)"
                    )
                keys[k] = i
            store = arr
        else:
            width = ((target.pM - 1).bit_length() + 7) // 8
            store = []
            keys = {}
            for i in range(self.order):
                rows = tuple(tuple(x % target.pM for x in r) for r in self._rows[i])
                k = b"".join(x.to_bytes(width, "big") for r in rows for x in r)
                if k in keys:
                    raise UnfaithfulReduction(
                        f"elements collide mod {target.p}^{n} (order would drop)"
                    )
                keys[k] = i
                store.append(rows)
        return FiniteMatrixGroup(
            target, self.dim, gens, store, self._words, keys,
            generator_factory=self.generator_factory, name=self.name,
        )

    # -- orders, ranks, classes ---------------------------------------------

    def element_order(self, i: int) -> int:
        return self._order_and_trace_sum(i)[0]

    def _order_and_trace_sum(self, i: int):
        """Order d of element i and sum of traces of its first d powers mod p^M."""
        pM = self.modulus.pM
        ident = SquareMatrix.identity(self.dim, self.modulus).rows
        base = self.element_rows(i)
        acc = base
        trace_sum = self.dim  # trace of w^0
        d = 1
        while acc != ident:
            trace_sum += sum(acc[j][j] for j in range(self.dim))
            acc = mat_mul_raw(acc, base, pM)
            d += 1
            if d > self.order:
                raise AssertionError("element order exceeds group order")
        return d, trace_sum % pM

    def rank_of(self, i: int) -> int:
        """Fixed-space rank of element i, lifting precision when needed."""
        d, trace_sum = self._order_and_trace_sum(i)
        p, M = self.modulus.p, self.modulus.M
        if p ** M > d * self.dim:
            return _rank_from_trace_sum(trace_sum, d, self.dim, p ** M)
        lift_M = M
        while p ** lift_M <= d * self.dim:
            lift_M += 1
        rows = self.element_rows_at(i, lift_M)
        return rank_fixed_space(SquareMatrix(rows, Modulus(p, lift_M)), d)

    def conjugacy_classes(self) -> list:
        """Partition into conjugacy classes with fixed-space annotations.

        Orbit BFS under conjugation by the generators; the representative is
        the byte-lexicographically smallest member.  Cached after first call.
        """
        if self._classes is not None:
            return self._classes
        if self._arr is not None:
            members_per_class, class_of = self._classes_numpy()
        else:
            members_per_class, class_of = self._classes_python()
        records = []
        ident_rows = SquareMatrix.identity(self.dim, self.modulus).rows
        pM = self.modulus.pM
        for members in members_per_class:
            rep = min(members, key=lambda j: self._key_list[j])
            size = len(members)
            if self.order % size != 0:
                raise AssertionError("class size does not divide group order")
            d, _ = self._order_and_trace_sum(rep)
            rank = self.rank_of(rep)
            diff = tuple(
                tuple((x - y) % pM for x, y in zip(r1, r2))
                for r1, r2 in zip(self.element_rows(rep), ident_rows)
            )
            vals = smith_valuations_raw(diff, self.modulus.p, self.modulus.M)
            sv = SmithValuations(tuple(vals), self.modulus)
            torsion = sv.finite_positive() if sv.saturated_count() == rank else None
            records.append(
                ConjugacyClassRecord(
                    rep_index=rep,
                    representative=self.element(rep),
                    class_size=size,
                    centralizer_order=self.order // size,
                    element_order=d,
                    rank=rank,
                    smith_vals=sv,
                    torsion_vals=torsion,
                )
            )
        assert sum(r.class_size for r in records) == self.order
        self._classes = records
        self._class_of = class_of
        return records

    def class_of(self, i: int) -> int:
        """Index into conjugacy_classes() of the class containing element i."""
        self.conjugacy_classes()
        return self._class_of[i]

    def _conjugation_pairs(self):
        """(g, g^-1) for each generator; inverses by powering to order-1."""
        pairs = []
        for g in self.generators:
            d = 1
            acc = g
            while not acc.is_identity():
                acc = acc @ g
                d += 1
            ginv = SquareMatrix.identity(self.dim, self.modulus) if d == 1 else g ** (d - 1)
            pairs.append((g, ginv))
        return pairs

    def _classes_numpy(self):
        pM = self.modulus.pM
        arr = self._arr
        pairs = [
            (np.array(g.rows, dtype=np.int64), np.array(gi.rows, dtype=np.int64))
            for g, gi in self._conjugation_pairs()
        ]
        n = self.order
        class_of = [-1] * n
        classes = []
        for start in range(n):
            if class_of[start] >= 0:
                continue
            cid = len(classes)
            members = [start]
            class_of[start] = cid
            frontier = [start]
            while frontier:
                batch = arr[frontier]
                nxt = []
                for g, ginv in pairs:
                    conj = (ginv @ batch % pM) @ g % pM
                    blob = conj.astype(">u8").tobytes()
                    w = 8 * self.dim * self.dim
                    for t in range(len(frontier)):
                        j = self._keys[blob[t * w:(t + 1) * w]]
                        if class_of[j] < 0:
                            class_of[j] = cid
                            members.append(j)
                            nxt.append(j)
                frontier = nxt
            classes.append(members)
        return classes, class_of

    def _classes_python(self):
        pM = self.modulus.pM
        pairs = [(g.rows, gi.rows) for g, gi in self._conjugation_pairs()]
        n = self.order
        class_of = [-1] * n
        classes = []
        for start in range(n):
            if class_of[start] >= 0:
                continue
            cid = len(classes)
            members = [start]
            class_of[start] = cid
            frontier = [start]
            while frontier:
                nxt = []
                for i in frontier:
                    x = self._rows[i]
                    for g, ginv in pairs:
                        conj = mat_mul_raw(mat_mul_raw(ginv, x, pM), g, pM)
                        j = self._keys[self._encode_rows(conj)]
                        if class_of[j] < 0:
                            class_of[j] = cid
                            members.append(j)
                            nxt.append(j)
                frontier = nxt
            classes.append(members)
        return classes, class_of


def _rank_from_trace_sum(trace_sum: int, d: int, dim: int, pM: int) -> int:
    # trace_sum is d * rank as an element of Z/p^M; with p^M > d*dim the
    # canonical representative recovers the integer exactly.
    if trace_sum > d * dim or trace_sum % d != 0:
        raise NonIntegralRank(
            f"trace sum {trace_sum} has no representative in [0, {d * dim}] divisible by {d}"
        )
    return trace_sum // d


def rank_fixed_space(w: SquareMatrix, d: int) -> int:
    """Rank of the fixed sublattice of w, from the trace average over <w>.

    The sum of traces of w^j for j = 0..d-1 equals d times the fixed-space
    rank, so the rank is read off the canonical representative.  Requires
    p^M > d*l so that the integer is recoverable.
    """
    pM = w.modulus.pM
    if pM <= d * w.dim:
        raise PrecisionTooLow(f"need p^M > {d * w.dim}, have {pM}")
    acc = SquareMatrix.identity(w.dim, w.modulus)
    trace_sum = 0
    for _ in range(d):
        trace_sum = (trace_sum + acc.trace()) % pM
        acc = acc @ w
    if not acc.is_identity():
        raise ValueError(f"element order does not divide d={d}")
    return _rank_from_trace_sum(trace_sum, d, w.dim, pM)


def close(
    generators: Sequence[SquareMatrix],
    cap: int = DEFAULT_CLOSURE_CAP,
    generator_factory: Optional[GeneratorFactory] = None,
    name: Optional[str] = None,
) -> FiniteMatrixGroup:
    """Breadth-first closure of a generator list under multiplication.

    Elements are discovered by right-multiplying the frontier by each
    generator in the listed order, which fixes a deterministic insertion
    order.  Raises CapExceeded once more than ``cap`` elements appear.
    """
    if not generators:
        raise ValueError("at least one generator is required")
    modulus = generators[0].modulus
    dim = generators[0].dim
    for g in generators:
        if g.modulus != modulus or g.dim != dim:
            raise ValueError("generators must share a modulus and dimension")
    if _numpy_safe(modulus, dim):
        return _close_numpy(generators, modulus, dim, cap, generator_factory, name)
    return _close_python(generators, modulus, dim, cap, generator_factory, name)


def _close_numpy(generators, modulus, dim, cap, factory, name):
    pM = modulus.pM
    gen_arrs = [np.array(g.rows, dtype=np.int64) for g in generators]
    ident = np.eye(dim, dtype=np.int64)
    rows = [ident]
    keys = {ident.astype(">u8").tobytes(): 0}
    words = [(-1, -1)]
    frontier = [0]
    w = 8 * dim * dim
    while frontier:
        batch = np.stack([rows[i] for i in frontier])
        nxt = []
        for gi, g in enumerate(gen_arrs):
            prod = batch @ g % pM
            blob = prod.astype(">u8").tobytes()
            for t, src in enumerate(frontier):
                k = blob[t * w:(t + 1) * w]
                if k not in keys:
                    keys[k] = len(rows)
                    words.append((src, gi))
                    rows.append(prod[t])
                    nxt.append(len(rows) - 1)
                    if len(rows) > cap:
                        raise CapExceeded(f"closure exceeded cap {cap}")
        frontier = nxt
    arr = np.stack(rows)
    gens = [SquareMatrix.from_rows([[int(x) for x in r] for r in g], modulus) for g in gen_arrs]
    return FiniteMatrixGroup(modulus, dim, gens, arr, words, keys,
                             generator_factory=factory, name=name)


def _close_python(generators, modulus, dim, cap, factory, name):
    pM = modulus.pM
    width = ((pM - 1).bit_length() + 7) // 8

    def key(rows):
        return b"".join(x.to_bytes(width, "big") for r in rows for x in r)

    gen_rows = [g.rows for g in generators]
    ident = SquareMatrix.identity(dim, modulus).rows
    rows = [ident]
    keys = {key(ident): 0}
    words = [(-1, -1)]
    frontier = [0]
    while frontier:
        nxt = []
        for i in frontier:
            for gi, g in enumerate(gen_rows):
                prod = mat_mul_raw(rows[i], g, pM)
                k = key(prod)
                if k not in keys:
                    keys[k] = len(rows)
                    words.append((i, gi))
                    rows.append(prod)
                    nxt.append(len(rows) - 1)
                    if len(rows) > cap:
                        raise CapExceeded(f"closure exceeded cap {cap}")
        frontier = nxt
    return FiniteMatrixGroup(modulus, dim, list(generators), rows, words, keys,
                             generator_factory=factory, name=name)
