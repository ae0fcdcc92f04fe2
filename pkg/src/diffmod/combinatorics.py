"""Multisets, permutations, formal permutation sums, and set partitions.

These are the exact, enumerable structures everything else is built on:
multisets double as monomial exponent vectors and as elements of the
multiset comonad on Rel; permutations and their formal sums carry the
unshuffle combinatorics; set partitions (with blocks sorted by maximum)
drive the Faa di Bruno expansion.

All values are immutable and hashable; all operations are pure.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Any, Iterable, Iterator


def skey(x: Any) -> tuple:
    """Total order key for basis-element values.

    Values appearing inside one container are homogeneous in practice, but
    the key is tagged by type so mixed comparisons never raise.
    """
    if isinstance(x, Multiset):
        return (2, tuple((skey(l), c) for l, c in x.pairs))
    if isinstance(x, tuple):
        return (3, tuple(skey(e) for e in x))
    if isinstance(x, str):
        return (0, x)
    if isinstance(x, int):
        return (1, x)
    if isinstance(x, frozenset):
        return (4, tuple(sorted(skey(e) for e in x)))
    return (5, repr(x))


# ---------------------------------------------------------------------------
# Multisets
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Multiset:
    """Finitely supported count map in canonical form.

    ``pairs`` holds (label, count) with strictly positive counts, sorted by
    ``skey`` of the label, so equality and hashing are structural.
    """

    pairs: tuple[tuple[Any, int], ...] = ()

    def __post_init__(self):
        for _, c in self.pairs:
            if c <= 0:
                raise ValueError("multiset counts must be positive")

    @staticmethod
    def from_counts(counts: dict[Any, int]) -> "Multiset":
        items = [(l, c) for l, c in counts.items() if c != 0]
        for _, c in items:
            if c < 0:
                raise ValueError("multiset counts must be nonnegative")
        items.sort(key=lambda p: skey(p[0]))
        return Multiset(tuple(items))

    @staticmethod
    def from_elems(elems: Iterable[Any]) -> "Multiset":
        counts: dict[Any, int] = {}
        for e in elems:
            counts[e] = counts.get(e, 0) + 1
        return Multiset.from_counts(counts)

    @property
    def size(self) -> int:
        return sum(c for _, c in self.pairs)

    def count(self, label: Any) -> int:
        for l, c in self.pairs:
            if l == label:
                return c
        return 0

    def support(self) -> tuple[Any, ...]:
        return tuple(l for l, _ in self.pairs)

    def elements(self) -> Iterator[Any]:
        for l, c in self.pairs:
            for _ in range(c):
                yield l

    def is_empty(self) -> bool:
        return not self.pairs

    def __add__(self, other: "Multiset") -> "Multiset":
        counts = dict(self.pairs)
        for l, c in other.pairs:
            counts[l] = counts.get(l, 0) + c
        return Multiset.from_counts(counts)

    def minus(self, other: "Multiset") -> "Multiset":
        if not other.leq(self):
            raise ValueError("multiset difference requires other <= self")
        counts = dict(self.pairs)
        for l, c in other.pairs:
            counts[l] -= c
        return Multiset.from_counts(counts)

    def leq(self, other: "Multiset") -> bool:
        return all(c <= other.count(l) for l, c in self.pairs)

    def add_one(self, label: Any) -> "Multiset":
        return self + Multiset(((label, 1),))

    def remove_one(self, label: Any) -> "Multiset":
        return self.minus(Multiset(((label, 1),)))

    def scale(self, k: int) -> "Multiset":
        if k < 0:
            raise ValueError("multiset scaling factor must be nonnegative")
        return Multiset.from_counts({l: c * k for l, c in self.pairs})

    def __repr__(self) -> str:
        return "[" + ",".join(repr(e) for e in self.elements()) + "]"


EMPTY = Multiset()


def mset(*elems: Any) -> Multiset:
    return Multiset.from_elems(elems)


def msum(nested: Multiset) -> Multiset:
    """Flatten a multiset of multisets: (sum N)(i) = sum of N(M) * M(i)."""
    total = EMPTY
    for inner, count in nested.pairs:
        if not isinstance(inner, Multiset):
            raise ValueError("msum needs a multiset of multisets")
        total = total + inner.scale(count)
    return total


def mfact(alpha: Multiset) -> int:
    """alpha! = product of factorials of the counts."""
    out = 1
    for _, c in alpha.pairs:
        out *= math.factorial(c)
    return out


def falling(beta: Multiset, alpha: Multiset) -> int:
    """Falling factorial: product over i of beta(i)(beta(i)-1)...(beta(i)-alpha(i)+1).

    Requires alpha <= beta pointwise; the result is strictly positive.
    """
    if not alpha.leq(beta):
        raise ValueError("falling factorial requires alpha <= beta")
    out = 1
    for l, a in alpha.pairs:
        b = beta.count(l)
        for j in range(a):
            out *= b - j
    return out


# ---------------------------------------------------------------------------
# Permutations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """Element of S_n; ``images[k-1]`` is the image of k (1-based)."""

    images: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValueError(f"not a permutation of 1..{n}: {self.images}")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def then(self, other: "Permutation") -> "Permutation":
        """Diagrammatic composite (self;other)(k) = other(self(k))."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch in permutation composition")
        return Permutation(tuple(other(self(k)) for k in range(1, self.degree + 1)))

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for k, v in enumerate(self.images, 1):
            inv[v - 1] = k
        return Permutation(tuple(inv))

    def tensor(self, other: "Permutation") -> "Permutation":
        """Block sum: acts as self on 1..n and as other shifted on n+1..n+p."""
        n = self.degree
        return Permutation(self.images + tuple(v + n for v in other.images))

    def __repr__(self) -> str:
        return f"perm{list(self.images)}"


def identity_perm(n: int) -> Permutation:
    return Permutation(tuple(range(1, n + 1)))


def transposition(n: int, i: int, j: int) -> Permutation:
    imgs = list(range(1, n + 1))
    imgs[i - 1], imgs[j - 1] = j, i
    return Permutation(tuple(imgs))


def perm_compose(sigma: Permutation, tau: Permutation) -> Permutation:
    """Diagrammatic order: (sigma;tau)(k) = tau(sigma(k))."""
    return sigma.then(tau)


def perm_invert(sigma: Permutation) -> Permutation:
    return sigma.inverse()


def perm_tensor(sigma: Permutation, tau: Permutation) -> Permutation:
    return sigma.tensor(tau)


def gamma_block(n: int, p: int) -> Permutation:
    """Block swap in S_{n+p}: k -> k+p for k <= n, k -> k-n otherwise."""
    imgs = [k + p for k in range(1, n + 1)] + [k - n for k in range(n + 1, n + p + 1)]
    return Permutation(tuple(imgs))


def all_permutations(n: int) -> list[Permutation]:
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


# ---------------------------------------------------------------------------
# The rig N[S_n] of formal sums of permutations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FormalPermSum:
    """Formal N-linear combination of permutations of one degree.

    Terms carry multiplicities (a multiset, not a set): the unshuffle
    recursion is false if duplicate terms were collapsed.
    """

    degree: int
    terms: Multiset = EMPTY

    def __post_init__(self):
        for p, _ in self.terms.pairs:
            if not isinstance(p, Permutation) or p.degree != self.degree:
                raise ValueError("all terms must be permutations of the stated degree")

    @staticmethod
    def of(*perms: Permutation) -> "FormalPermSum":
        if not perms:
            raise ValueError("use FormalPermSum(n) for the zero of N[S_n]")
        return FormalPermSum(perms[0].degree, Multiset.from_elems(perms))

    def __add__(self, other: "FormalPermSum") -> "FormalPermSum":
        if self.degree != other.degree:
            raise ValueError("degree mismatch in N[S_n] addition")
        return FormalPermSum(self.degree, self.terms + other.terms)

    def __mul__(self, other: "FormalPermSum") -> "FormalPermSum":
        """Rig product: sum over pairs of the function composites sigma o tau."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch in N[S_n] multiplication")
        counts: dict[Any, int] = {}
        for s, cs in self.terms.pairs:
            for t, ct in other.terms.pairs:
                prod = t.then(s)  # (s o t)(k) = s(t(k))
                counts[prod] = counts.get(prod, 0) + cs * ct
        return FormalPermSum(self.degree, Multiset.from_counts(counts))

    def then(self, other: "FormalPermSum") -> "FormalPermSum":
        """Diagrammatic composite self;other = other * self."""
        return other * self

    def tensor(self, other: "FormalPermSum") -> "FormalPermSum":
        counts: dict[Any, int] = {}
        for s, cs in self.terms.pairs:
            for t, ct in other.terms.pairs:
                st = s.tensor(t)
                counts[st] = counts.get(st, 0) + cs * ct
        return FormalPermSum(self.degree + other.degree, Multiset.from_counts(counts))

    def __repr__(self) -> str:
        if self.terms.is_empty():
            return f"0[S{self.degree}]"
        return " + ".join(
            (f"{c}*" if c > 1 else "") + repr(p) for p, c in self.terms.pairs
        )


def formal_add(a: FormalPermSum, b: FormalPermSum) -> FormalPermSum:
    return a + b


def formal_product(a: FormalPermSum, b: FormalPermSum) -> FormalPermSum:
    return a * b


def formal_unit(n: int) -> FormalPermSum:
    return FormalPermSum.of(identity_perm(n))


def formal_zero(n: int) -> FormalPermSum:
    return FormalPermSum(n)


# ---------------------------------------------------------------------------
# Unshuffles
# ---------------------------------------------------------------------------


def unshuffles(n: int, k: int) -> list[Permutation]:
    """All sigma in S_n whose inverse is increasing on 1..k and on k+1..n.

    Built directly from k-subsets (the positions the inverse sends 1..k to),
    so the count is C(n, k) by construction.
    """
    if not 0 <= k <= n:
        raise ValueError("unshuffles requires 0 <= k <= n")
    out = []
    universe = range(1, n + 1)
    for chosen in itertools.combinations(universe, k):
        rest = [x for x in universe if x not in chosen]
        inv = list(chosen) + rest  # sigma^{-1}(j) for j = 1..n
        sigma = Permutation(tuple(inv)).inverse()
        out.append(sigma)
    return out


def unsh_sum(n: int, k: int) -> FormalPermSum:
    """unsh(n, k) as an element of N[S_n]."""
    perms = unshuffles(n, k)
    return FormalPermSum(n, Multiset.from_elems(perms))


# ---------------------------------------------------------------------------
# Set partitions of {1..n}
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SetPartition:
    """Partition of {1..n} with blocks sorted ascending by block maximum."""

    n: int
    blocks: tuple[frozenset[int], ...]

    def __post_init__(self):
        seen: set[int] = set()
        for b in self.blocks:
            if not b:
                raise ValueError("partition blocks must be nonempty")
            if b & seen:
                raise ValueError("partition blocks must be disjoint")
            seen |= b
        if seen != set(range(1, self.n + 1)):
            raise ValueError(f"blocks must cover 1..{self.n}")
        maxima = [max(b) for b in self.blocks]
        if maxima != sorted(maxima):
            raise ValueError("blocks must be sorted by maximum")

    @staticmethod
    def make(n: int, blocks: Iterable[Iterable[int]]) -> "SetPartition":
        bl = sorted((frozenset(b) for b in blocks), key=max)
        return SetPartition(n, tuple(bl))

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    def block_sizes(self) -> tuple[int, ...]:
        return tuple(len(b) for b in self.blocks)

    def sort_key(self) -> tuple:
        return tuple(tuple(sorted(b)) for b in self.blocks)

    def __repr__(self) -> str:
        return "{" + ",".join("{" + ",".join(map(str, sorted(b))) + "}" for b in self.blocks) + "}"


def partitions(n: int) -> list[SetPartition]:
    """All set partitions of {1..n}, canonically ordered. partitions(0) = [empty]."""
    if n == 0:
        return [SetPartition(0, ())]
    out: list[SetPartition] = []
    for prev in partitions(n - 1):
        blocks = [set(b) for b in prev.blocks]
        out.append(SetPartition.make(n, blocks + [{n}]))
        for i in range(len(blocks)):
            grown = [set(b) for b in prev.blocks]
            grown[i].add(n)
            out.append(SetPartition.make(n, grown))
    out.sort(key=SetPartition.sort_key)
    return out


def tau_pi(pi: SetPartition) -> Permutation:
    """The permutation in S_{|pi|+n} grouping each block head before its block.

    Position i <= |pi| (a head slot) goes to 1 + sum of (1+|s_j|) over j < i;
    position |pi| + k, where k is the j-th smallest element of block s_i,
    goes just after that head.
    """
    k = pi.num_blocks
    n = pi.n
    images = [0] * (k + n)
    acc = 0
    for i, block in enumerate(pi.blocks, 1):
        images[i - 1] = acc + 1
        for j, elem in enumerate(sorted(block), 1):
            images[k + elem - 1] = acc + 1 + j
        acc += 1 + len(block)
    return Permutation(tuple(images))


def rho(pi: SetPartition, i: int) -> SetPartition:
    """Insert 1 into the shifted partition: new singleton if i = 1, else
    prepend 1 to shifted block s_{i-1}."""
    if not 1 <= i <= pi.num_blocks + 1:
        raise ValueError("rho index out of range")
    shifted = [frozenset(t + 1 for t in b) for b in pi.blocks]
    if i == 1:
        blocks = shifted + [frozenset({1})]
    else:
        target = shifted[i - 2]
        blocks = [b for j, b in enumerate(shifted) if j != i - 2]
        blocks.append(target | {1})
    return SetPartition.make(pi.n + 1, blocks)


def chi(theta: SetPartition) -> tuple[SetPartition, int]:
    """Two-sided inverse of rho: remove 1, shift down, report where it sat."""
    if theta.n < 1:
        raise ValueError("chi requires a partition of {1..n+1} with n >= 0")
    j = next(idx for idx, b in enumerate(theta.blocks, 1) if 1 in b)
    block = theta.blocks[j - 1]
    if len(block) >= 2:
        reduced = [b for b in theta.blocks if b != block] + [block - {1}]
        i = j + 1
    else:
        reduced = [b for b in theta.blocks if b != block]
        i = 1
    down = [frozenset(t - 1 for t in b) for b in reduced]
    return SetPartition.make(theta.n - 1, down), i


# ---------------------------------------------------------------------------
# Position maps (index-level action of sigma-bar on tensor factors)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PositionMap:
    """Index-level form of the coherence isomorphism attached to sigma.

    Output slot j reads input slot sigma^{-1}(j); by Mac Lane coherence this
    is all the data the transposition decomposition of sigma determines.
    """

    perm: Permutation

    @property
    def arity(self) -> int:
        return self.perm.degree

    def apply(self, values: tuple) -> tuple:
        """Reorder a tuple: result[j-1] = values[sigma^{-1}(j)-1]."""
        if len(values) != self.arity:
            raise ValueError("arity mismatch in position map application")
        inv = self.perm.inverse()
        return tuple(values[inv(j) - 1] for j in range(1, self.arity + 1))

    def unapply(self, values: tuple) -> tuple:
        """Inverse reorder: result[i-1] = values[sigma(i)-1]."""
        if len(values) != self.arity:
            raise ValueError("arity mismatch in position map application")
        return tuple(values[self.perm(i) - 1] for i in range(1, self.arity + 1))

    def then(self, other: "PositionMap") -> "PositionMap":
        return PositionMap(self.perm.then(other.perm))

    def tensor(self, other: "PositionMap") -> "PositionMap":
        return PositionMap(self.perm.tensor(other.perm))


def position_map(sigma: Permutation, n: int) -> PositionMap:
    if sigma.degree != n:
        raise ValueError("permutation degree does not match arity")
    return PositionMap(sigma)
