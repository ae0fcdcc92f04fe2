"""Exact dense-logic linear algebra over commutative semirings.

Scalars are Boolean (relations), arbitrary-precision rationals, or prime
fields; there is no floating point anywhere. Matrices are stored as maps
from (row, column) index pairs to nonzero scalars over explicitly ordered
bases, so every identity asserted downstream is an exact comparison of
fully materialized matrices.

Composition follows the diagrammatic column-vector convention fixed once:
``mat_compose(f, g)`` is f;g, i.e. Mat(g) . Mat(f).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Hashable, Iterable, Sequence

from .combinatorics import PositionMap


class LinalgError(Exception):
    pass


class UnsupportedDomainError(LinalgError):
    pass


class FactorizationError(LinalgError):
    """Raised when a map fails to factor; carries a witness basis element."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


# ---------------------------------------------------------------------------
# Scalar domains
# ---------------------------------------------------------------------------


class ScalarDomain:
    """Common protocol: a commutative semiring with optional field structure."""

    name: str
    is_field = False

    def zero(self):
        raise NotImplementedError

    def one(self):
        raise NotImplementedError

    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def is_zero(self, a) -> bool:
        return a == self.zero()

    def coerce(self, n: int):
        raise NotImplementedError

    def neg(self, a):
        raise UnsupportedDomainError(f"{self.name} has no subtraction")

    def inv(self, a):
        raise UnsupportedDomainError(f"{self.name} has no division")

    def __repr__(self):
        return self.name


class _Boolean(ScalarDomain):
    name = "bool"

    def zero(self):
        return False

    def one(self):
        return True

    def add(self, a, b):
        return a or b

    def mul(self, a, b):
        return a and b

    def coerce(self, n: int):
        return n != 0


class _Rationals(ScalarDomain):
    name = "QQ"
    is_field = True

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return Fraction(1) / a

    def coerce(self, n: int):
        return Fraction(n)


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class PrimeField(ScalarDomain):
    is_field = True

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p
        self.name = f"GF({p})"

    def zero(self):
        return 0

    def one(self):
        return 1

    def add(self, a, b):
        return (a + b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def coerce(self, n: int):
        return n % self.p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))


BOOL = _Boolean()
QQ = _Rationals()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


# ---------------------------------------------------------------------------
# Ordered bases
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class OrderedBasis:
    """Deterministically ordered sequence of distinct labeled basis elements,
    each carrying a natural-number degree."""

    elements: tuple[Hashable, ...]
    degrees: tuple[int, ...]
    _index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if len(self.elements) != len(self.degrees):
            raise ValueError("elements and degrees must align")
        idx = {e: i for i, e in enumerate(self.elements)}
        if len(idx) != len(self.elements):
            raise ValueError("basis labels must be distinct")
        object.__setattr__(self, "_index", idx)

    @staticmethod
    def make(pairs: Iterable[tuple[Hashable, int]]) -> "OrderedBasis":
        pairs = tuple(pairs)
        return OrderedBasis(tuple(e for e, _ in pairs), tuple(d for _, d in pairs))

    def index(self, elem) -> int:
        return self._index[elem]

    def __contains__(self, elem) -> bool:
        return elem in self._index

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def degree(self, elem) -> int:
        return self.degrees[self._index[elem]]


def tensor_basis(*bases: OrderedBasis) -> OrderedBasis:
    """Lexicographic pairing in factor order; elements are flat concatenated
    tuples, degrees add."""
    elems = [()]
    degs = [0]
    for b in bases:
        elems = [e + (x if isinstance(x, tuple) else (x,)) for e in elems for x in b.elements]
        degs = [d + dx for d in degs for dx in b.degrees]
    return OrderedBasis(tuple(elems), tuple(degs))


# ---------------------------------------------------------------------------
# Matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GradedMatrix:
    """Exact matrix between ordered bases.

    ``entries`` maps (row, col) = (codomain index, domain index) to a nonzero
    scalar. Absent keys are zero. Equality is structural, which is exactly
    matrix equality because zeros are never stored.
    """

    domain: OrderedBasis
    codomain: OrderedBasis
    scalars: ScalarDomain
    entries: dict[tuple[int, int], Any]

    @staticmethod
    def from_entries(domain, codomain, scalars, entries) -> "GradedMatrix":
        clean = {k: v for k, v in entries.items() if not scalars.is_zero(v)}
        return GradedMatrix(domain, codomain, scalars, clean)

    def entry(self, cod_elem, dom_elem):
        key = (self.codomain.index(cod_elem), self.domain.index(dom_elem))
        return self.entries.get(key, self.scalars.zero())

    def column(self, dom_elem) -> dict:
        c = self.domain.index(dom_elem)
        return {
            self.codomain.elements[r]: v
            for (r, cc), v in self.entries.items()
            if cc == c
        }

    def is_zero(self) -> bool:
        return not self.entries

    def __eq__(self, other):
        return (
            isinstance(other, GradedMatrix)
            and self.domain.elements == other.domain.elements
            and self.codomain.elements == other.codomain.elements
            and self.scalars.name == other.scalars.name
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.domain.elements, self.codomain.elements, self.scalars.name))

    def is_degree_preserving(self) -> bool:
        return all(
            self.codomain.degrees[r] == self.domain.degrees[c]
            for (r, c) in self.entries
        )

    def flip_entry(self, cod_elem, dom_elem) -> "GradedMatrix":
        """Boolean matrices only: toggle one entry (mutation-testing hook)."""
        if self.scalars is not BOOL:
            raise UnsupportedDomainError("flip_entry is a Boolean operation")
        key = (self.codomain.index(cod_elem), self.domain.index(dom_elem))
        entries = dict(self.entries)
        if key in entries:
            del entries[key]
        else:
            entries[key] = True
        return GradedMatrix(self.domain, self.codomain, self.scalars, entries)


def mat_zero(domain: OrderedBasis, codomain: OrderedBasis, scalars: ScalarDomain) -> GradedMatrix:
    return GradedMatrix(domain, codomain, scalars, {})


def mat_identity(basis: OrderedBasis, scalars: ScalarDomain) -> GradedMatrix:
    one = scalars.one()
    return GradedMatrix(basis, basis, scalars, {(i, i): one for i in range(len(basis))})


def mat_add(f: GradedMatrix, g: GradedMatrix) -> GradedMatrix:
    if f.domain.elements != g.domain.elements or f.codomain.elements != g.codomain.elements:
        raise ValueError("basis mismatch in matrix addition")
    s = f.scalars
    out = dict(f.entries)
    for k, v in g.entries.items():
        w = s.add(out.get(k, s.zero()), v)
        if s.is_zero(w):
            out.pop(k, None)
        else:
            out[k] = w
    return GradedMatrix(f.domain, f.codomain, s, out)


def mat_compose(f: GradedMatrix, g: GradedMatrix) -> GradedMatrix:
    """Diagrammatic composite f;g (apply f first)."""
    if f.codomain.elements != g.domain.elements:
        raise ValueError("basis mismatch in composition: cod(f) != dom(g)")
    s = f.scalars
    # index g's entries by column (= f's codomain row) for the middle sum
    g_by_col: dict[int, list[tuple[int, Any]]] = {}
    for (r, c), v in g.entries.items():
        g_by_col.setdefault(c, []).append((r, v))
    out: dict[tuple[int, int], Any] = {}
    for (m, c), v in f.entries.items():
        for r, w in g_by_col.get(m, ()):
            key = (r, c)
            acc = s.add(out.get(key, s.zero()), s.mul(v, w))
            if s.is_zero(acc):
                out.pop(key, None)
            else:
                out[key] = acc
    return GradedMatrix(f.domain, g.codomain, s, out)


def mat_kron(f: GradedMatrix, g: GradedMatrix) -> GradedMatrix:
    """Kronecker product realizing the tensor of morphisms."""
    s = f.scalars
    dom = tensor_basis(f.domain, g.domain)
    cod = tensor_basis(f.codomain, g.codomain)
    nd, ng = len(g.domain), len(g.codomain)
    out = {}
    for (rf, cf), v in f.entries.items():
        for (rg, cg), w in g.entries.items():
            out[(rf * ng + rg, cf * nd + cg)] = s.mul(v, w)
    return GradedMatrix(dom, cod, s, out)


def perm_matrix(pm: PositionMap, factors: Sequence[OrderedBasis], scalars: ScalarDomain) -> GradedMatrix:
    """Permutation matrix of the coherence map attached to ``pm``.

    Sends the basis tuple (b_1,..,b_n) to the slot holding the tuple read
    off through the inverse permutation.
    """
    if pm.arity != len(factors):
        raise ValueError("position map arity does not match factor count")
    dom = tensor_basis(*factors)
    widths = [1] * len(factors)
    # elements of composite bases are flat tuples; record per-factor widths
    for i, b in enumerate(factors):
        sample = b.elements[0] if len(b) else None
        widths[i] = len(sample) if isinstance(sample, tuple) else 1
    cod_factors = pm.apply(tuple(factors))
    cod = tensor_basis(*cod_factors)
    one = scalars.one()
    out = {}
    for c, elem in enumerate(dom.elements):
        # split the flat tuple into per-factor chunks, permute, re-flatten
        chunks = []
        pos = 0
        for w in widths:
            chunks.append(elem[pos : pos + w])
            pos += w
        permuted = pm.apply(tuple(chunks))
        flat = tuple(x for chunk in permuted for x in chunk)
        out[(cod.index(flat), c)] = one
    return GradedMatrix(dom, cod, scalars, out)


# ---------------------------------------------------------------------------
# Kernels, cokernels, factorization
# ---------------------------------------------------------------------------


def rref(rows: list[list[Any]], scalars: ScalarDomain) -> tuple[list[list[Any]], list[int]]:
    """Reduced row echelon form with leftmost-pivot order; returns (rows, pivot columns)."""
    if not scalars.is_field:
        raise UnsupportedDomainError("row reduction needs a field")
    rows = [list(r) for r in rows]
    nrows = len(rows)
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, nrows) if not scalars.is_zero(rows[i][c])), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = scalars.inv(rows[r][c])
        rows[r] = [scalars.mul(inv, x) for x in rows[r]]
        for i in range(nrows):
            if i != r and not scalars.is_zero(rows[i][c]):
                factor = rows[i][c]
                rows[i] = [
                    scalars.add(rows[i][j], scalars.neg(scalars.mul(factor, rows[r][j])))
                    for j in range(ncols)
                ]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def kernel_basis(f: GradedMatrix) -> list[dict[Hashable, Any]]:
    """Basis of the null space of Mat(f), reduced echelon, deterministic order.

    Each vector is a map from domain basis elements to nonzero coefficients,
    normalized with coefficient 1 at its free column.
    """
    s = f.scalars
    if not s.is_field:
        raise UnsupportedDomainError("kernel_basis requires a field domain")
    n = len(f.domain)
    rows = [[s.zero()] * n for _ in range(len(f.codomain))]
    for (r, c), v in f.entries.items():
        rows[r][c] = v
    reduced, pivots = rref(rows, s) if rows else ([], [])
    pivot_set = set(pivots)
    free_cols = [c for c in range(n) if c not in pivot_set]
    basis = []
    for fc in free_cols:
        vec = {f.domain.elements[fc]: s.one()}
        for i, pc in enumerate(pivots):
            coeff = reduced[i][fc]
            if not s.is_zero(coeff):
                vec[f.domain.elements[pc]] = s.neg(coeff)
        basis.append(vec)
    return basis


def bool_cokernel(f: GradedMatrix) -> tuple[GradedMatrix, OrderedBasis]:
    """Cokernel of a Boolean matrix: the partial identity onto the rows
    missed by the image. Returns (selector, kept basis)."""
    if f.scalars is not BOOL:
        raise UnsupportedDomainError("bool_cokernel requires the Boolean domain")
    hit = {r for (r, _) in f.entries}
    kept_pairs = [
        (e, d)
        for i, (e, d) in enumerate(zip(f.codomain.elements, f.codomain.degrees))
        if i not in hit
    ]
    kept = OrderedBasis.make(kept_pairs)
    sel = {
        (kept.index(e), f.codomain.index(e)): True
        for e in kept.elements
    }
    selector = GradedMatrix(f.codomain, kept, BOOL, sel)
    return selector, kept


def is_partial_identity_selector(s: GradedMatrix) -> bool:
    """True when s keeps a subset of its domain basis, identically."""
    if len(s.entries) != len(s.codomain):
        return False
    for (r, c), v in s.entries.items():
        if s.codomain.elements[r] != s.domain.elements[c]:
            return False
        if not v:
            return False
    return True


def factor_through(s: GradedMatrix, f: GradedMatrix) -> GradedMatrix:
    """Unique g with s;g = f, for a partial-identity selector s (epi case).

    s and f share their domain; f must vanish on the complement of the kept
    subset, otherwise a FactorizationError carries the witness element.
    """
    if s.domain.elements != f.domain.elements:
        raise ValueError("selector and map must share their domain basis")
    if not is_partial_identity_selector(s):
        raise ValueError("factor_through needs a partial-identity selector")
    kept = s.codomain
    out = {}
    for (r, c), v in f.entries.items():
        dom_elem = f.domain.elements[c]
        if dom_elem not in kept:
            raise FactorizationError(
                f"map does not vanish on dropped element {dom_elem!r}", witness=dom_elem
            )
        out[(r, kept.index(dom_elem))] = v
    return GradedMatrix(kept, f.codomain, f.scalars, out)


def factor_through_kernel(kernel: list[dict[Hashable, Any]], f: GradedMatrix) -> GradedMatrix:
    """Express the columns of f exactly in a kernel basis (mono case).

    ``kernel`` is a list of independent vectors over f's codomain basis
    elements (as produced by kernel_basis); returns the unique g with
    g;incl = f, where incl maps the i-th kernel vector into the ambient
    space. Raises FactorizationError (with the offending domain element)
    when a column of f is not in the span.
    """
    s = f.scalars
    if not s.is_field:
        raise UnsupportedDomainError("kernel factorization requires a field")
    k = len(kernel)
    ambient = f.codomain.elements
    ncols = k + len(f.domain)
    aug = [[s.zero()] * ncols for _ in ambient]
    for i, vec in enumerate(kernel):
        for e, v in vec.items():
            aug[f.codomain.index(e)][i] = v
    for (r, c), v in f.entries.items():
        aug[r][k + c] = v
    reduced, pivots = rref(aug, s) if aug else ([], [])
    # a pivot beyond the kernel block marks an inconsistent column
    for p in pivots:
        if p >= k:
            witness = f.domain.elements[p - k]
            raise FactorizationError(
                f"column at {witness!r} is not in the kernel span", witness=witness
            )
    kb = OrderedBasis.make([(("k", i), 0) for i in range(k)])
    out = {}
    for i, p in enumerate(pivots):
        for c in range(len(f.domain)):
            v = reduced[i][k + c]
            if not s.is_zero(v):
                out[(p, c)] = v
    return GradedMatrix(f.domain, kb, s, out)
