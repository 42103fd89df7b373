import itertools
import random

import pytest

from spherecalc import hermitian, intlattice
from spherecalc.errors import DimensionMismatch, NotFreeBasis, RingMismatch
from spherecalc.groupring import CyclicRing, GroupRingElem, LaurentElem, LaurentRing
from spherecalc.hermitian import (
    EquivariantIntegerForm,
    HermitianForm,
    PointedHermitianForm,
    augment_form,
    augmented_isometry,
    build_equivariant_form,
    congruence_search,
    conj_transpose,
    extend_integer_form,
    is_nonsingular,
    pointed_congruence_search,
    ring_det,
    ring_identity,
    ring_mat_mul,
    verify_congruence,
)
from spherecalc.intlattice import H_MATRIX, block_diag

Z2 = CyclicRing(2)
L = LaurentRing()
HH = block_diag(H_MATRIX, H_MATRIX)

FORM_1 = HermitianForm(Z2, ((1,),))
FORM_T = HermitianForm(Z2, ((GroupRingElem.monomial(2, 1),),))


def laurent(terms):
    return LaurentElem.from_terms(terms)


# ---------------------------------------------------------------------------
# construction and validation


def test_hermitian_constructor_rejects_nonhermitian():
    t = LaurentElem.monomial(1)
    with pytest.raises(ValueError, match="hermitian"):
        HermitianForm(L, ((LaurentElem.zero(), t), (t, LaurentElem.zero())))


def test_hermitian_allows_conjugate_pairs():
    t, tinv = LaurentElem.monomial(1), LaurentElem.monomial(-1)
    form = HermitianForm(L, ((LaurentElem.zero(), t), (tinv, LaurentElem.zero())))
    assert form.size == 2


def test_pointed_form_primitivity_is_reported_not_enforced():
    p = PointedHermitianForm(FORM_T, (GroupRingElem.from_int(2, 2),))
    assert p.primitive is False
    assert p.augmented_divisibility == 2
    assert PointedHermitianForm(FORM_T, (GroupRingElem.one(2),)).primitive is True


def test_pointed_form_length_check():
    with pytest.raises(DimensionMismatch):
        PointedHermitianForm(FORM_T, (GroupRingElem.one(2), GroupRingElem.one(2)))


# ---------------------------------------------------------------------------
# determinants over the rings


def _permutation_det(rows, ring):
    m = len(rows)
    total = ring.zero()
    for perm in itertools.permutations(range(m)):
        inversions = sum(
            1 for i in range(m) for j in range(i + 1, m) if perm[i] > perm[j]
        )
        prod = ring.one()
        for i in range(m):
            prod = prod * rows[i][perm[i]]
        total = total + (prod if inversions % 2 == 0 else -prod)
    return total


def test_ring_det_matches_permutation_expansion():
    rng = random.Random(23)
    z4 = CyclicRing(4)  # has zero divisors; division-based algorithms would break
    for _ in range(15):
        m = rng.randint(1, 4)
        rows = tuple(
            tuple(
                GroupRingElem(4, tuple(rng.randint(-2, 2) for _ in range(4)))
                for _ in range(m)
            )
            for _ in range(m)
        )
        assert ring_det(rows, z4) == _permutation_det(rows, z4)
    for _ in range(10):
        m = rng.randint(1, 3)
        rows = tuple(
            tuple(
                laurent({rng.randint(-2, 2): rng.randint(-2, 2)}) for _ in range(m)
            )
            for _ in range(m)
        )
        assert ring_det(rows, L) == _permutation_det(rows, L)


def test_ring_det_empty_is_one():
    assert ring_det((), L) == LaurentElem.one()


# ---------------------------------------------------------------------------
# equivariant construction


def test_conic_cover_form_is_T():
    eq = EquivariantIntegerForm(H_MATRIX, ((0, 1), (1, 0)))
    assert eq.order == 2
    lam = build_equivariant_form(eq, [(1, 0)])
    assert lam.matrix == ((GroupRingElem.monomial(2, 1),),)
    assert augment_form(lam) == ((1,),)


def test_trivial_action_recovers_the_form():
    eq = EquivariantIntegerForm(H_MATRIX, ((1, 0), (0, 1)))
    lam = build_equivariant_form(eq, [(1, 0), (0, 1)])
    assert lam.ring == CyclicRing(1)
    assert augment_form(lam) == H_MATRIX


def test_block_swap_on_two_hyperbolics():
    swap_blocks = ((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0))
    eq = EquivariantIntegerForm(HH, swap_blocks)
    lam = build_equivariant_form(eq, [(1, 0, 0, 0), (0, 1, 0, 0)])
    zero, one = GroupRingElem.zero(2), GroupRingElem.one(2)
    assert lam.matrix == ((zero, one), (one, zero))


def test_build_rejects_wrong_rank():
    eq = EquivariantIntegerForm(H_MATRIX, ((0, 1), (1, 0)))
    with pytest.raises(NotFreeBasis):
        build_equivariant_form(eq, [(1, 0), (0, 1)])


def test_build_rejects_dependent_orbits():
    swap_blocks = ((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0))
    eq = EquivariantIntegerForm(HH, swap_blocks)
    with pytest.raises(NotFreeBasis):
        build_equivariant_form(eq, [(1, 0, 0, 0), (0, 0, 1, 0)])  # same orbit


def test_equivariant_data_validation():
    with pytest.raises(ValueError, match="preserve"):
        EquivariantIntegerForm(((1, 0), (0, -1)), ((0, 1), (1, 0)))
    with pytest.raises(ValueError, match="symmetric"):
        EquivariantIntegerForm(((0, 1), (2, 0)), ((1, 0), (0, 1)))


def _random_free_equivariant(rng, m, d):
    """Cyclic shift on m blocks of size d with an invariant symmetric form."""
    n = m * d
    t = tuple(
        tuple(
            1 if (j // d == i // d and j % d == (i % d + 1) % d) else 0
            for j in range(n)
        )
        for i in range(n)
    )
    a = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            a[i][j] = a[j][i] = rng.randint(-2, 2)
    q = [[0] * n for _ in range(n)]
    power = intlattice.identity_matrix(n)
    for _ in range(d):
        conj = intlattice.mat_mul(intlattice.mat_mul(intlattice.transpose(power), a), power)
        for i in range(n):
            for j in range(n):
                q[i][j] += conj[i][j]
        power = intlattice.mat_mul(power, t)
    return EquivariantIntegerForm(q, t), [
        tuple(1 if c == i * d else 0 for c in range(n)) for i in range(m)
    ]


def test_randomized_equivariant_builds_are_hermitian_and_augment_correctly():
    rng = random.Random(31)
    for _ in range(12):
        m, d = rng.randint(1, 2), rng.randint(1, 4)
        eq, basis = _random_free_equivariant(rng, m, d)
        lam = build_equivariant_form(eq, basis)  # constructor asserts hermitian
        n = m * d
        pairings = {}  # (i, j, k) -> Q(b_i, T^k b_j), by direct summation
        power = intlattice.identity_matrix(n)
        for k in range(d):
            for i in range(m):
                for j in range(m):
                    tb = intlattice.mat_vec(power, basis[j])
                    pairings[i, j, k] = sum(
                        basis[i][r] * eq.q[r][c] * tb[c]
                        for r in range(n)
                        for c in range(n)
                    )
            power = intlattice.mat_mul(power, eq.t_action)
        for i in range(m):
            for j in range(m):
                entry = lam.matrix[i][j]
                for k in range(d):
                    assert entry.coeffs[(-k) % d] == pairings[i, j, k]
        aug = augment_form(lam)
        for i in range(m):
            for j in range(m):
                assert aug[i][j] == sum(pairings[i, j, k] for k in range(d))


# ---------------------------------------------------------------------------
# augmentation, extension, nonsingularity


def test_augment_examples():
    assert augment_form(FORM_T) == ((1,),)
    assert augment_form(extend_integer_form(HH, L)) == HH
    assert augment_form(HermitianForm(L, ((laurent({1: 1, -1: 1}),),))) == ((2,),)


def test_extend_examples():
    assert extend_integer_form([[1]], L).matrix == ((LaurentElem.one(),),)
    assert augment_form(extend_integer_form(HH, L)) == HH
    assert extend_integer_form([[1]], Z2).matrix == ((GroupRingElem.one(2),),)
    with pytest.raises(ValueError):
        extend_integer_form([[0, 1], [2, 0]], L)


def test_nonsingular_examples():
    assert is_nonsingular(FORM_T) is True
    one_plus_t = GroupRingElem.one(2) + GroupRingElem.monomial(2, 1)
    assert is_nonsingular(HermitianForm(Z2, ((one_plus_t,),))) is False
    assert is_nonsingular(extend_integer_form(H_MATRIX, L)) is True


# ---------------------------------------------------------------------------
# congruence search


def test_search_disproves_1_vs_T():
    out = congruence_search(FORM_1, FORM_T)
    assert out.status == hermitian.SEARCH_DISPROVEN
    assert "determinant" in out.reason


def test_search_finds_identity_on_equal_forms():
    form = extend_integer_form(HH, L)
    out = congruence_search(form, form)
    assert out.status == hermitian.SEARCH_FOUND
    assert out.witness == ring_identity(L, 4)


def test_search_finds_monomial_twist():
    form_h = extend_integer_form(H_MATRIX, L)
    twisted = HermitianForm(
        L,
        (
            (LaurentElem.zero(), LaurentElem.monomial(1)),
            (LaurentElem.monomial(-1), LaurentElem.zero()),
        ),
    )
    out = congruence_search(form_h, twisted)
    assert out.status == hermitian.SEARCH_FOUND
    assert verify_congruence(out.witness, form_h, twisted)
    # the hand witness diag(t, 1) also certifies the congruence
    hand = (
        (LaurentElem.monomial(1), LaurentElem.zero()),
        (LaurentElem.zero(), LaurentElem.one()),
    )
    assert verify_congruence(hand, form_h, twisted)


def test_search_monomial_twist_of_two_hyperbolics():
    form = extend_integer_form(HH, L)
    p = tuple(
        tuple(
            LaurentElem.monomial(1) if (i == j == 0)
            else LaurentElem.monomial(-1) if (i == j == 2)
            else LaurentElem.one() if i == j
            else LaurentElem.zero()
            for j in range(4)
        )
        for i in range(4)
    )
    target = HermitianForm(L, ring_mat_mul(ring_mat_mul(p, form.matrix, L), conj_transpose(p), L))
    out = congruence_search(form, target, budget=50_000)
    assert out.status == hermitian.SEARCH_FOUND
    assert verify_congruence(out.witness, form, target)


def test_search_budget_exhaustion_is_reported():
    form = extend_integer_form(HH, L)
    twisted = HermitianForm(
        L,
        tuple(
            tuple(
                LaurentElem.monomial(2) if (i, j) == (0, 1)
                else LaurentElem.monomial(-2) if (i, j) == (1, 0)
                else form.matrix[i][j]
                for j in range(4)
            )
            for i in range(4)
        ),
    )
    out = congruence_search(form, twisted, budget=3)
    assert out.status == hermitian.SEARCH_NOT_FOUND
    assert "budget" in out.reason


def test_search_orbit_exhaustion_without_determinant_refutation():
    # order 5 has units beyond +-T^k, so the determinant refutation is
    # skipped and the 1x1 search exhausts the monomial orbit honestly
    z5 = CyclicRing(5)
    lam0 = HermitianForm(z5, ((1,),))
    lam1 = HermitianForm(
        z5, ((GroupRingElem(5, (-1, 0, 1, 1, 0)),),)
    )
    assert lam1.matrix[0][0].conjugate() == lam1.matrix[0][0]
    out = congruence_search(lam0, lam1)
    assert out.status == hermitian.SEARCH_NOT_FOUND
    assert "orbit exhausted" in out.reason


def test_search_disproven_by_augmentation_matches_integer_isometry():
    lam0 = extend_integer_form(((1, 0), (0, 1)), Z2)
    lam1 = extend_integer_form(H_MATRIX, Z2)
    out = congruence_search(lam0, lam1)
    assert out.status == hermitian.SEARCH_DISPROVEN
    assert "augmented" in out.reason
    integer_verdict = intlattice.is_isometric(((1, 0), (0, 1)), H_MATRIX)
    assert integer_verdict.verdict == intlattice.ISO_NO


def test_search_ring_and_size_preconditions():
    with pytest.raises(RingMismatch):
        congruence_search(FORM_1, extend_integer_form([[1]], L))
    with pytest.raises(DimensionMismatch):
        congruence_search(extend_integer_form(HH, L), extend_integer_form(H_MATRIX, L))


def test_found_witnesses_preserve_determinant_class():
    rng = random.Random(41)
    cases = []
    for ring, base in [(Z2, H_MATRIX), (CyclicRing(3), ((1, 0), (0, -1))), (L, H_MATRIX)]:
        form0 = extend_integer_form(base, ring)
        gens = hermitian._generators(ring, 2)
        p = ring_identity(ring, 2)
        for _ in range(2):
            p = hermitian._apply_generator(rng.choice(gens), p)
        form1 = HermitianForm(
            ring, ring_mat_mul(ring_mat_mul(p, form0.matrix, ring), conj_transpose(p), ring)
        )
        out = congruence_search(form0, form1, budget=100_000)
        assert out.status == hermitian.SEARCH_FOUND
        assert verify_congruence(out.witness, form0, form1)
        cases.append((form0, form1, out))
    for form0, form1, out in cases:
        if form0.ring.units_fully_known:
            assert form0.det == form1.det


def test_search_is_deterministic():
    form = extend_integer_form(HH, L)
    p = tuple(
        tuple(
            LaurentElem.monomial(1) if i == j == 0
            else LaurentElem.one() if i == j
            else LaurentElem.zero()
            for j in range(4)
        )
        for i in range(4)
    )
    target = HermitianForm(L, ring_mat_mul(ring_mat_mul(p, form.matrix, L), conj_transpose(p), L))
    first = congruence_search(form, target, budget=20_000)
    second = congruence_search(form, target, budget=20_000)
    assert first == second
    assert first.status == hermitian.SEARCH_FOUND


def test_search_finds_depth_three_witness():
    rng = random.Random(61)
    ring = CyclicRing(2)
    form0 = extend_integer_form(H_MATRIX, ring)
    gens = hermitian._generators(ring, 2)
    p = ring_identity(ring, 2)
    for _ in range(3):
        p = hermitian._apply_generator(rng.choice(gens), p)
    form1 = HermitianForm(
        ring, ring_mat_mul(ring_mat_mul(p, form0.matrix, ring), conj_transpose(p), ring)
    )
    out = congruence_search(form0, form1, budget=300_000)
    assert out.status == hermitian.SEARCH_FOUND
    assert verify_congruence(out.witness, form0, form1)


# ---------------------------------------------------------------------------
# pointed searches


def test_pointed_identity():
    p0 = PointedHermitianForm(FORM_T, (GroupRingElem.one(2),))
    out = pointed_congruence_search(p0, p0)
    assert out.status == hermitian.SEARCH_FOUND
    assert out.witness == ring_identity(Z2, 1)


def test_pointed_monomial_shift():
    p0 = PointedHermitianForm(FORM_T, (GroupRingElem.one(2),))
    p1 = PointedHermitianForm(FORM_T, (GroupRingElem.monomial(2, 1),))
    out = pointed_congruence_search(p0, p1)
    assert out.status == hermitian.SEARCH_FOUND
    assert out.witness == ((GroupRingElem.monomial(2, 1),),)


def test_pointed_primitivity_refutation():
    p0 = PointedHermitianForm(FORM_T, (GroupRingElem.one(2),))
    p1 = PointedHermitianForm(FORM_T, (GroupRingElem.from_int(2, 2),))
    out = pointed_congruence_search(p0, p1)
    assert out.status == hermitian.SEARCH_DISPROVEN
    assert "divisibility" in out.reason


def test_search_finds_signed_permutation_witness():
    z3 = CyclicRing(3)
    lam0 = extend_integer_form(((1, 0), (0, -1)), z3)
    lam1 = extend_integer_form(((-1, 0), (0, 1)), z3)
    out = congruence_search(lam0, lam1)
    assert out.status == hermitian.SEARCH_FOUND
    assert verify_congruence(out.witness, lam0, lam1)


def test_nonsingularity_is_congruence_invariant():
    rng = random.Random(67)
    for ring in (Z2, CyclicRing(3), L):
        for base in (H_MATRIX, ((1, 0), (0, 1)), ((1, 1), (1, 0))):
            form0 = extend_integer_form(base, ring)
            gens = hermitian._generators(ring, 2)
            p = ring_identity(ring, 2)
            for _ in range(2):
                p = hermitian._apply_generator(rng.choice(gens), p)
            form1 = HermitianForm(
                ring,
                ring_mat_mul(ring_mat_mul(p, form0.matrix, ring), conj_transpose(p), ring),
            )
            assert is_nonsingular(form0) == is_nonsingular(form1)


def test_pointed_witness_with_identity_augmentation():
    # the isotopy-upgrade condition: a pointed witness whose augmentation
    # is the identity matrix
    p0 = PointedHermitianForm(FORM_T, (GroupRingElem.one(2),))
    p1 = PointedHermitianForm(FORM_T, (GroupRingElem.monomial(2, 1),))
    out = pointed_congruence_search(p0, p1)
    assert out.status == hermitian.SEARCH_FOUND
    assert augmented_isometry(out.witness) == ((1,),)


def test_pointed_nonunit_class_is_honestly_not_found():
    # z = 2 - T is primitive under the augmentation proxy, but no unit can
    # carry 1 to it; the bounded search exhausts the unit orbit and says so
    z = GroupRingElem(2, (2, -1))
    p0 = PointedHermitianForm(FORM_T, (GroupRingElem.one(2),))
    p1 = PointedHermitianForm(FORM_T, (z,))
    assert p1.primitive
    out = pointed_congruence_search(p0, p1)
    assert out.status == hermitian.SEARCH_NOT_FOUND


def test_pointed_constraint_filters_witnesses():
    form = extend_integer_form(((1, 0), (0, 1)), Z2)
    e1 = (GroupRingElem.one(2), GroupRingElem.zero(2))
    e2 = (GroupRingElem.zero(2), GroupRingElem.one(2))
    out = pointed_congruence_search(
        PointedHermitianForm(form, e1), PointedHermitianForm(form, e2)
    )
    assert out.status == hermitian.SEARCH_FOUND
    assert hermitian.ring_mat_vec(out.witness, e1, Z2) == e2


# ---------------------------------------------------------------------------
# augmented isometry


def test_augmented_isometry_examples():
    assert augmented_isometry(ring_identity(Z2, 2)) == ((1, 0), (0, 1))
    assert augmented_isometry(((GroupRingElem.monomial(2, 1),),)) == ((1,),)
    p = ((LaurentElem.monomial(1), LaurentElem.zero()), (LaurentElem.zero(), LaurentElem.one()))
    assert augmented_isometry(p) == ((1, 0), (0, 1))


# ---------------------------------------------------------------------------
# serialization


def test_json_round_trip():
    for form in (FORM_T, extend_integer_form(HH, L),
                 HermitianForm(L, ((laurent({1: 1, -1: 1}),),))):
        data = form.to_json_dict()
        assert HermitianForm.from_json_dict(data) == form
    assert FORM_T.to_json_dict()["ring"] == {"kind": "cyclic", "d": 2}
    assert FORM_T.to_json_dict()["entries"] == [[[0, 1]]]
