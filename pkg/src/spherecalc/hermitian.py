"""Hermitian forms over cyclic group rings and the Laurent ring.

Covers construction from equivariant integer data, augmentation back to
integer forms, nonsingularity, pointed classes, and a bounded congruence
search with sound invariant refutations.  A witness P reported by the
search always satisfies ``P * A0 * conj(P)^T == A1`` exactly and is
invertible over the ring; witnesses are re-verified before being
returned.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

from . import intlattice
from .errors import DimensionMismatch, NotFreeBasis, RingMismatch
from .groupring import (
    CyclicRing,
    GroupRingElem,
    LaurentRing,
    Ring,
    element_from_json,
    element_to_json,
    ring_from_json,
    ring_to_json,
)
from .intlattice import Matrix, freeze_matrix, integer_det, mat_vec

#: Default node budget of the congruence search.
DEFAULT_BUDGET = 10**6

#: Default growth limits pruning the search space (entries of candidate
#: matrices): max absolute coefficient, and max |exponent| in the Laurent case.
DEFAULT_COEFF_LIMIT = 16
DEFAULT_EXP_LIMIT = 8


# ---------------------------------------------------------------------------
# matrix helpers over a ring


def _ring_matrix(ring: Ring, rows):
    out = tuple(tuple(ring.coerce(v) for v in row) for row in rows)
    for row in out:
        if len(row) != len(out):
            raise DimensionMismatch("matrix over the ring is not square")
    return out


def ring_identity(ring: Ring, m: int):
    one, zero = ring.one(), ring.zero()
    return tuple(tuple(one if i == j else zero for j in range(m)) for i in range(m))


def conj_transpose(rows):
    m = len(rows)
    return tuple(tuple(rows[j][i].conjugate() for j in range(m)) for i in range(m))


def ring_mat_mul(a, b, ring: Ring):
    m = len(a)
    out = []
    for i in range(m):
        row = []
        for j in range(m):
            acc = ring.zero()
            for k in range(m):
                acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def ring_mat_vec(a, v, ring: Ring):
    m = len(a)
    out = []
    for i in range(m):
        acc = ring.zero()
        for k in range(m):
            acc = acc + a[i][k] * v[k]
        out.append(acc)
    return tuple(out)


def ring_det(rows, ring: Ring):
    """Determinant over an arbitrary commutative ring.

    Laplace expansion evaluated by dynamic programming over column
    subsets: division-free, so it is valid even when the ring has zero
    divisors (the cyclic group rings do).  Costs about m * 2^m ring
    multiplications, which is fine at the sizes that occur here.
    """
    m = len(rows)
    if m == 0:
        return ring.one()
    prev = {0: ring.one()}
    for r in range(m):
        cur: dict[int, object] = {}
        for mask, val in prev.items():
            for j in range(m):
                bit = 1 << j
                if mask & bit:
                    continue
                entry = rows[r][j]
                if not entry:
                    continue
                sign = -1 if bin(mask >> (j + 1)).count("1") % 2 else 1
                contrib = val * entry if sign > 0 else -(val * entry)
                new = mask | bit
                cur[new] = cur[new] + contrib if new in cur else contrib
        prev = {k: v for k, v in cur.items() if v} or {0: ring.zero()}
    full = (1 << m) - 1
    return prev.get(full, ring.zero())


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class HermitianForm:
    """Square matrix over a group ring equal to its own conjugate-transpose."""

    ring: Ring
    matrix: tuple

    def __post_init__(self):
        rows = _ring_matrix(self.ring, self.matrix)
        if rows != conj_transpose(rows):
            raise ValueError("matrix is not hermitian (conjugate-transpose differs)")
        object.__setattr__(self, "matrix", rows)

    @property
    def size(self) -> int:
        return len(self.matrix)

    @cached_property
    def det(self):
        return ring_det(self.matrix, self.ring)

    def display(self) -> list[list[str]]:
        return [[str(v) for v in row] for row in self.matrix]

    def to_json_dict(self) -> dict:
        return {
            "ring": ring_to_json(self.ring),
            "size": self.size,
            "entries": [[element_to_json(v) for v in row] for row in self.matrix],
        }

    @classmethod
    def from_json_dict(cls, data) -> "HermitianForm":
        ring = ring_from_json(data["ring"])
        rows = tuple(
            tuple(element_from_json(ring, v) for v in row) for row in data["entries"]
        )
        return cls(ring, rows)


@dataclass(frozen=True)
class PointedHermitianForm:
    """Hermitian form together with a distinguished class z.

    Primitivity of z (gcd-1 augmentation vector) is exposed as a property
    rather than enforced, so that incompatible pointed pairs can still be
    fed to the search and refuted there.
    """

    form: HermitianForm
    z: tuple

    def __post_init__(self):
        vec = tuple(self.form.ring.coerce(v) for v in self.z)
        if len(vec) != self.form.size:
            raise DimensionMismatch("pointed class length differs from the form size")
        object.__setattr__(self, "z", vec)

    @property
    def primitive(self) -> bool:
        return gcd(*(v.augment() for v in self.z)) == 1 if self.z else False

    @property
    def augmented_divisibility(self) -> int:
        return gcd(*(v.augment() for v in self.z)) if self.z else 0


@dataclass(frozen=True)
class EquivariantIntegerForm:
    """Symmetric integer form together with a finite-order symmetry preserving it."""

    q: Matrix
    t_action: Matrix
    order: int = field(init=False, repr=False, compare=False)

    _MAX_ORDER = 4096

    def __post_init__(self):
        q = freeze_matrix(self.q)
        t = freeze_matrix(self.t_action)
        if len(q) != len(t):
            raise DimensionMismatch("form and action have different sizes")
        if not intlattice.is_symmetric(q):
            raise ValueError("equivariant data requires a symmetric form")
        if intlattice.mat_mul(intlattice.mat_mul(intlattice.transpose(t), q), t) != q:
            raise ValueError("the action does not preserve the form")
        ident = intlattice.identity_matrix(len(t))
        power = t
        order = 1
        while power != ident:
            power = intlattice.mat_mul(power, t)
            order += 1
            if order > self._MAX_ORDER:
                raise ValueError(
                    f"action has no order up to {self._MAX_ORDER}; not a finite symmetry"
                )
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "t_action", t)
        object.__setattr__(self, "order", order)


# ---------------------------------------------------------------------------
# construction and augmentation


def build_equivariant_form(equiv: EquivariantIntegerForm, basis) -> HermitianForm:
    """Assemble the hermitian form of an order-d symmetry on free orbits.

    ``basis`` lists m integer vectors whose orbit under the action must
    span Z^N freely (so m * d = N and the d*m translates are linearly
    independent); entry (i, j) collects Q(b_i, T^k b_j) as the coefficient
    of T^(-k).
    """
    d = equiv.order
    n = len(equiv.q)
    vectors = [intlattice.freeze_vector(b) for b in basis]
    m = len(vectors)
    for v in vectors:
        if len(v) != n:
            raise DimensionMismatch("basis vector length differs from the form size")
    if m * d != n:
        raise NotFreeBasis(
            f"{m} orbit representatives of order {d} cannot span rank {n} freely"
        )
    translates = []
    for v in vectors:
        orbit = [v]
        for _ in range(d - 1):
            orbit.append(mat_vec(equiv.t_action, orbit[-1]))
        translates.append(orbit)
    span = tuple(zip(*[translates[i][k] for i in range(m) for k in range(d)]))
    if integer_det(span) == 0:
        raise NotFreeBasis("orbit translates of the basis are linearly dependent")
    ring = CyclicRing(d)
    q_rows = [list(row) for row in equiv.q]
    rows = []
    for i in range(m):
        qb = [sum(vectors[i][r] * q_rows[r][c] for r in range(n)) for c in range(n)]
        row = []
        for j in range(m):
            coeffs = [0] * d
            for k in range(d):
                coeffs[(-k) % d] = sum(q * w for q, w in zip(qb, translates[j][k]))
            row.append(GroupRingElem(d, tuple(coeffs)))
        rows.append(tuple(row))
    return HermitianForm(ring, tuple(rows))


def augment_form(form: HermitianForm) -> Matrix:
    """Entrywise T -> 1; a symmetric integer matrix, not necessarily unimodular."""
    return tuple(tuple(v.augment() for v in row) for row in form.matrix)


def is_nonsingular(form: HermitianForm) -> bool:
    """True iff the determinant over the ring is a unit."""
    return form.det.is_unit()


def extend_integer_form(q, ring: Ring) -> HermitianForm:
    """Read a symmetric integer matrix as a constant-entry hermitian form."""
    rows = q.matrix if isinstance(q, intlattice.IntersectionForm) else freeze_matrix(q)
    if not intlattice.is_symmetric(rows):
        raise ValueError("only symmetric matrices extend to hermitian forms")
    return HermitianForm(ring, tuple(tuple(ring.from_int(v) for v in row) for row in rows))


def augmented_isometry(p) -> Matrix:
    """Entrywise augmentation of a matrix over the ring; tests F(1) = id."""
    return tuple(tuple(v.augment() for v in row) for row in p)


# ---------------------------------------------------------------------------
# congruence search

SEARCH_FOUND = "found"
SEARCH_NOT_FOUND = "not_found_within_budget"
SEARCH_DISPROVEN = "disproven"


@dataclass(frozen=True)
class CongruenceOutcome:
    status: str
    witness: tuple | None = None
    reason: str | None = None
    nodes_explored: int = 0


def verify_congruence(p, form0: HermitianForm, form1: HermitianForm) -> bool:
    """Exact check that P A0 conj(P)^T = A1 and that P is invertible."""
    ring = form0.ring
    product = ring_mat_mul(ring_mat_mul(p, form0.matrix, ring), conj_transpose(p), ring)
    return product == form1.matrix and ring_det(p, ring).is_unit()


def _augmentation_refutation(form0: HermitianForm, form1: HermitianForm) -> str | None:
    """Compare augmented integer forms; None when they cannot refute.

    A witness augments to a unimodular integer congruence, so determinant,
    signature and evenness of the augmented forms must agree exactly.
    When both augmentations are unimodular the full integer isometry
    decision runs as well.
    """
    a0, a1 = augment_form(form0), augment_form(form1)
    d0, d1 = integer_det(a0), integer_det(a1)
    if d0 != d1:
        return f"augmented forms are not isometric over Z: determinant {d0} != {d1}"
    s0, s1 = intlattice.signature(a0), intlattice.signature(a1)
    if s0 != s1:
        return f"augmented forms are not isometric over Z: signature {s0} != {s1}"
    even0 = all(a0[i][i] % 2 == 0 for i in range(len(a0)))
    even1 = all(a1[i][i] % 2 == 0 for i in range(len(a1)))
    if even0 != even1:
        return "augmented forms are not isometric over Z: parity differs"
    if d0 in (1, -1):
        result = intlattice.is_isometric(a0, a1)
        if result.verdict == intlattice.ISO_NO:
            return f"augmented forms are not isometric over Z: {result.reason}"
    return None


def _determinant_refutation(form0: HermitianForm, form1: HermitianForm) -> str | None:
    """Determinant class comparison, applied only where it is sound.

    A congruence multiplies the determinant by u * conj(u) for a unit u.
    Over the Laurent ring, and over cyclic rings of order 1, 2, 3, 4 or 6,
    every unit is +-(monomial), hence u * conj(u) = 1 and the determinant
    must match exactly.  Other cyclic orders have units of infinite order,
    so no bounded check is conclusive and the refutation is skipped.
    """
    if not form0.ring.units_fully_known:
        return None
    if form0.det != form1.det:
        return (
            "determinant class mismatch: "
            f"{form0.det} vs {form1.det} cannot differ by u*conj(u) for a unit u"
        )
    return None


def _generators(ring: Ring, m: int):
    """Fixed-order generator list: monomial scalings, swaps, transvections."""
    if isinstance(ring, CyclicRing):
        unit_params = [(k, c) for k in range(ring.d) for c in (1, -1)]
        monomial_exps = range(ring.d)
    else:
        unit_params = [(k, c) for k in range(-2, 3) for c in (1, -1)]
        monomial_exps = range(-2, 3)
    gens = []
    for i in range(m):
        for k, c in unit_params:
            if k == 0 and c == 1:
                continue
            gens.append(("scale", i, ring.monomial(k, c)))
    for i in range(m):
        for j in range(i + 1, m):
            gens.append(("swap", i, j))
    for i in range(m):
        for j in range(m):
            if i == j:
                continue
            for c in (1, -1, 2, -2):
                for k in monomial_exps:
                    gens.append(("add", i, j, ring.monomial(k, c)))
    return gens


def _apply_generator(gen, p):
    kind = gen[0]
    if kind == "scale":
        _, i, u = gen
        return tuple(
            tuple(u * v for v in row) if r == i else row for r, row in enumerate(p)
        )
    if kind == "swap":
        _, i, j = gen
        rows = list(p)
        rows[i], rows[j] = rows[j], rows[i]
        return tuple(rows)
    _, i, j, w = gen
    return tuple(
        tuple(v + w * u for v, u in zip(row, p[j])) if r == i else row
        for r, row in enumerate(p)
    )


def _within_limits(p, coeff_limit: int, exp_limit: int) -> bool:
    for row in p:
        for v in row:
            if hasattr(v, "coeffs"):
                if any(abs(c) > coeff_limit for c in v.coeffs):
                    return False
            else:
                for e, c in v.terms:
                    if abs(c) > coeff_limit or abs(e) > exp_limit:
                        return False
    return True


def _congruence_bfs(
    form0: HermitianForm,
    form1: HermitianForm,
    budget: int,
    coeff_limit: int,
    exp_limit: int,
    point=None,
) -> CongruenceOutcome:
    ring = form0.ring
    m = form0.size
    a0, a1 = form0.matrix, form1.matrix
    gens = _generators(ring, m)
    start = ring_identity(ring, m)
    queue = deque([start])
    seen = {start}
    nodes = 0
    while queue:
        if nodes >= budget:
            return CongruenceOutcome(
                SEARCH_NOT_FOUND, reason="node budget exhausted", nodes_explored=nodes
            )
        p = queue.popleft()
        nodes += 1
        if point is None or ring_mat_vec(p, point[0], ring) == point[1]:
            if ring_mat_mul(ring_mat_mul(p, a0, ring), conj_transpose(p), ring) == a1:
                assert verify_congruence(p, form0, form1)
                return CongruenceOutcome(SEARCH_FOUND, witness=p, nodes_explored=nodes)
        for gen in gens:
            child = _apply_generator(gen, p)
            if child in seen:
                continue
            if not _within_limits(child, coeff_limit, exp_limit):
                continue
            seen.add(child)
            queue.append(child)
    return CongruenceOutcome(
        SEARCH_NOT_FOUND,
        reason="generator orbit exhausted within the entry-growth limits",
        nodes_explored=nodes,
    )


def _check_compatible(form0: HermitianForm, form1: HermitianForm) -> None:
    if form0.ring != form1.ring:
        raise RingMismatch(f"forms live over different rings: {form0.ring} vs {form1.ring}")
    if form0.size != form1.size:
        raise DimensionMismatch(
            f"forms have different sizes: {form0.size} vs {form1.size}"
        )


def congruence_search(
    form0: HermitianForm,
    form1: HermitianForm,
    budget: int = DEFAULT_BUDGET,
    *,
    coeff_limit: int = DEFAULT_COEFF_LIMIT,
    exp_limit: int = DEFAULT_EXP_LIMIT,
) -> CongruenceOutcome:
    """Decide congruence of two hermitian forms, within a node budget.

    Runs the sound refutations first (augmented integer forms, then the
    determinant class where the unit group is fully known), then a
    breadth-first search over products of monomial scalings, swaps and
    bounded transvections.  Deterministic for a fixed budget.
    """
    _check_compatible(form0, form1)
    for refute in (_augmentation_refutation, _determinant_refutation):
        reason = refute(form0, form1)
        if reason is not None:
            return CongruenceOutcome(SEARCH_DISPROVEN, reason=reason)
    return _congruence_bfs(form0, form1, budget, coeff_limit, exp_limit)


def pointed_congruence_search(
    pointed0: PointedHermitianForm,
    pointed1: PointedHermitianForm,
    budget: int = DEFAULT_BUDGET,
    *,
    coeff_limit: int = DEFAULT_COEFF_LIMIT,
    exp_limit: int = DEFAULT_EXP_LIMIT,
) -> CongruenceOutcome:
    """As :func:`congruence_search`, requiring additionally P z0 = z1.

    The image of a class under an invertible matrix keeps the gcd of its
    augmentation vector, so pointed pairs whose augmented divisibilities
    differ are disproven outright.
    """
    form0, form1 = pointed0.form, pointed1.form
    _check_compatible(form0, form1)
    g0 = pointed0.augmented_divisibility
    g1 = pointed1.augmented_divisibility
    if g0 != g1:
        return CongruenceOutcome(
            SEARCH_DISPROVEN,
            reason=(
                "pointed classes have different divisibility after augmentation: "
                f"{g0} vs {g1} (a primitive class must map to a primitive class)"
            ),
        )
    for refute in (_augmentation_refutation, _determinant_refutation):
        reason = refute(form0, form1)
        if reason is not None:
            return CongruenceOutcome(SEARCH_DISPROVEN, reason=reason)
    return _congruence_bfs(
        form0, form1, budget, coeff_limit, exp_limit, point=(pointed0.z, pointed1.z)
    )
