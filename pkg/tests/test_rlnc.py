from fractions import Fraction
from itertools import product
from random import Random

import pytest

from conftest import make_params
from regencost.errors import (
    InsufficientHelpersError,
    NonIntegerDownloadError,
    NonPositiveError,
    UnknownNodeError,
)
from regencost.rlnc import (
    GF256,
    ByteField,
    PrimeField,
    can_reconstruct,
    encode_initial,
    make_field,
    matrix_rank,
    repair,
    run_trial,
)

F = Fraction


# ---------------------------------------------------------------------------
# field arithmetic


def test_bytefield_known_products():
    assert GF256.mul(2, 128) == 29  # wraps through the reduction polynomial
    assert GF256.mul(0, 77) == 0
    assert GF256.add(0xA5, 0xA5) == 0  # characteristic two


def test_bytefield_inverses_exhaustive():
    for a in range(1, 256):
        assert GF256.mul(a, GF256.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        GF256.inv(0)


def test_bytefield_generator_covers_all_nonzero_values():
    table = ByteField()
    value = 1
    values = set()
    for _ in range(255):
        values.add(value)
        value = table.mul(value, 2)
    assert value == 1  # multiplicative order of the generator is 255
    assert values == set(range(1, 256))


def test_bytefield_axioms_sampled():
    rng = Random(0)
    for _ in range(300):
        a, b, c = (rng.randrange(256) for _ in range(3))
        assert GF256.mul(a, b) == GF256.mul(b, a)
        assert GF256.add(a, b) == GF256.add(b, a)
        assert GF256.mul(a, GF256.mul(b, c)) == GF256.mul(GF256.mul(a, b), c)
        assert GF256.mul(a, GF256.add(b, c)) == GF256.add(GF256.mul(a, b), GF256.mul(a, c))
        assert GF256.sub(GF256.add(a, b), b) == a
        if b:
            assert GF256.div(GF256.mul(a, b), b) == a


def test_primefield_axioms_sampled():
    field = PrimeField(257)
    rng = Random(1)
    for _ in range(300):
        a, b, c = (rng.randrange(257) for _ in range(3))
        assert field.mul(a, b) == field.mul(b, a)
        assert field.mul(a, field.mul(b, c)) == field.mul(field.mul(a, b), c)
        assert field.mul(a, field.add(b, c)) == field.add(field.mul(a, b), field.mul(a, c))
        assert field.sub(field.add(a, b), b) == a
        if b % 257:
            assert field.div(field.mul(a, b), b) == a


def test_primefield_inverses_small_exhaustive():
    field = PrimeField(7)
    for a in range(1, 7):
        assert field.mul(a, field.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        field.inv(0)
    with pytest.raises(ZeroDivisionError):
        PrimeField(257).inv(514)  # congruent to zero


def test_primefield_rejects_composite_order():
    for order in (0, 1, 6, 9, 255):
        with pytest.raises(ValueError):
            PrimeField(order)


def test_make_field():
    assert make_field("gf256") is GF256
    assert make_field("p257").order == 257
    assert make_field("p2").order == 2
    for name in ("gf16", "257", "p", "p2.5", ""):
        with pytest.raises(ValueError):
            make_field(name)


# ---------------------------------------------------------------------------
# rank


def test_matrix_rank_basic():
    assert matrix_rank([], GF256) == 0
    assert matrix_rank([[0, 0], [0, 0]], GF256) == 0
    assert matrix_rank([[1, 0, 0], [0, 1, 0], [0, 0, 1]], GF256) == 3
    assert matrix_rank([[1, 2, 3], [2, 4, 6]], PrimeField(257)) == 1  # scalar multiple
    assert matrix_rank([[3, 1], [3, 2], [0, 1]], GF256) == 2  # more rows than columns


def test_matrix_rank_gf2_exhaustive_2x2():
    gf2 = PrimeField(2)
    full = sum(
        matrix_rank([[a, b], [c, d]], gf2) == 2
        for a, b, c, d in product(range(2), repeat=4)
    )
    assert full == 6  # (2^2-1)(2^2-2) ordered independent pairs


def test_matrix_rank_gf2_exhaustive_2x4():
    gf2 = PrimeField(2)
    rows = list(product(range(2), repeat=4))
    full = sum(matrix_rank([top, bottom], gf2) == 2 for top in rows for bottom in rows)
    assert full == 210  # (2^4-1)(2^4-2)


def test_matrix_rank_field_sensitivity():
    rows = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert matrix_rank(rows, PrimeField(2)) == 2  # rows sum to zero mod 2
    assert matrix_rank(rows, PrimeField(257)) == 3


# ---------------------------------------------------------------------------
# storage state


def test_encode_initial_shape_and_determinism():
    state = encode_initial(4, 3, 2, GF256, seed=5)
    assert len(state.nodes) == 3
    assert all(len(node.rows) == 2 for node in state.nodes)
    assert all(len(row) == 4 for node in state.nodes for row in node.rows)
    assert all(0 <= v < 256 for node in state.nodes for row in node.rows for v in row)
    assert all(node.tier == "cheap" for node in state.nodes)
    assert state == encode_initial(4, 3, 2, GF256, seed=5)
    assert state != encode_initial(4, 3, 2, GF256, seed=6)


def test_encode_initial_tier_assignment():
    state = encode_initial(2, 3, 1, GF256, seed=0, tiers=("cheap", "expensive", "expensive"))
    assert [node.tier for node in state.nodes] == ["cheap", "expensive", "expensive"]


def test_encode_initial_validation():
    with pytest.raises(NonPositiveError):
        encode_initial(0, 3, 1, GF256, seed=0)
    with pytest.raises(NonIntegerDownloadError):
        encode_initial(F(1, 2), 3, 1, GF256, seed=0)
    with pytest.raises(NonIntegerDownloadError):
        encode_initial(True, 3, 1, GF256, seed=0)
    with pytest.raises(InsufficientHelpersError):
        encode_initial(2, 3, 1, GF256, seed=0, tiers=("cheap", "cheap"))
    with pytest.raises(InsufficientHelpersError):
        encode_initial(2, 2, 1, GF256, seed=0, tiers=("cheap", "slow"))


def _two_tier_state(seed=0):
    return encode_initial(4, 4, 2, GF256, seed=seed, tiers=("cheap", "cheap", "expensive", "expensive"))


def test_repair_replaces_only_the_failed_node():
    state = _two_tier_state()
    repaired = repair(state, 2, [0, 1], [3], beta1_sym=2, beta2_sym=1, rng=Random(9))
    assert repaired.nodes[2].tier == "expensive"  # tier inherited
    assert repaired.nodes[2].rows != state.nodes[2].rows
    assert len(repaired.nodes[2].rows) == state.alpha_sym
    for i in (0, 1, 3):
        assert repaired.nodes[i] == state.nodes[i]
    assert repair(state, 2, [0, 1], [3], beta1_sym=2, beta2_sym=1, rng=Random(9)) == repaired


def test_repair_validates_helpers():
    state = _two_tier_state()
    with pytest.raises(UnknownNodeError):
        repair(state, 9, [0, 1], [3], 2, 1, Random(0))
    with pytest.raises(UnknownNodeError):
        repair(state, 2, [0, -1], [3], 2, 1, Random(0))
    with pytest.raises(InsufficientHelpersError):
        repair(state, 2, [0, 0], [3], 2, 1, Random(0))  # duplicate helper
    with pytest.raises(InsufficientHelpersError):
        repair(state, 2, [0, 1], [2], 2, 1, Random(0))  # helps itself
    with pytest.raises(InsufficientHelpersError):
        repair(state, 2, [0, 3], [1], 2, 1, Random(0))  # tiers swapped
    with pytest.raises(NonIntegerDownloadError):
        repair(state, 2, [0, 1], [3], F(1, 2), 1, Random(0))
    with pytest.raises(NonIntegerDownloadError):
        repair(state, 2, [0, 1], [3], 2, True, Random(0))
    with pytest.raises(NonPositiveError):
        repair(state, 2, [0, 1], [3], 2, -1, Random(0))


def test_reconstruction_is_rank_limited():
    # two nodes holding one row each can never span a three-symbol file
    state = encode_initial(3, 5, 1, GF256, seed=2)
    assert not can_reconstruct(state, [0, 1])
    with pytest.raises(UnknownNodeError):
        can_reconstruct(state, [0, 7])


def test_single_symbol_success_rate_matches_nonzero_fraction():
    # with one coefficient per node, reconstruction succeeds exactly when
    # the coefficient is nonzero, so the rate estimates 255/256
    state = encode_initial(1, 2000, 1, GF256, seed=11)
    nonzero = sum(1 for node in state.nodes if node.rows[0][0] != 0)
    successes = sum(1 for i in range(2000) if can_reconstruct(state, [i]))
    assert successes == nonzero
    assert successes / 2000 >= 0.95


# ---------------------------------------------------------------------------
# trials


GMBR_PARAMS = make_params(2, 2, 1, kprime=2, n=4, file_size=8)


def test_run_trial_is_deterministic():
    first = run_trial(GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=3, seed=42)
    second = run_trial(GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=3, seed=42)
    assert first == second
    assert first.repairs_performed == 3
    assert len(first.checks) == 6  # all 2-subsets of 4 nodes
    assert first != run_trial(GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=3, seed=43)


def test_run_trial_at_the_tradeoff_point_mostly_succeeds():
    total = successes = 0
    for seed in range(20):
        result = run_trial(
            GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=1 + seed % 3, seed=seed
        )
        total += len(result.checks)
        successes += result.successes
    assert successes / total >= 0.95


def test_run_trial_below_the_rank_bound_always_fails():
    # k*alpha = 6 < 8 file symbols, so no collector can ever reconstruct
    for seed in range(5):
        result = run_trial(GMBR_PARAMS, alpha_sym=3, beta2_sym=1, num_failures=2, seed=seed)
        assert result.successes == 0
        assert result.success_rate == 0


def test_run_trial_success_rate_is_exact():
    result = run_trial(GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=2, seed=0)
    assert result.success_rate == F(result.successes, 6)


def test_run_trial_supports_prime_field_and_worst_case_helpers():
    for field_name in ("gf256", "p257"):
        result = run_trial(
            GMBR_PARAMS,
            alpha_sym=5,
            beta2_sym=1,
            num_failures=4,
            seed=3,
            field=make_field(field_name),
            helper_mode="worst-case",
        )
        assert result.repairs_performed == 4
        assert result.success_rate >= F(4, 6)


def test_run_trial_without_failures_checks_the_initial_code():
    result = run_trial(GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=0, seed=1)
    assert result.repairs_performed == 0
    assert result.success_rate == 1


def test_run_trial_subset_sampling():
    params = make_params(4, 5, 3, kprime=1, n=9, file_size=4)
    sampled = run_trial(params, alpha_sym=1, beta2_sym=1, num_failures=0, seed=0, max_subsets=100)
    assert len(sampled.checks) == 100
    subsets = [check.nodes for check in sampled.checks]
    assert len(set(subsets)) == 100
    assert all(len(set(s)) == 4 and all(0 <= i < 9 for i in s) for s in subsets)
    assert subsets == sorted(subsets)
    exhaustive = run_trial(
        params, alpha_sym=1, beta2_sym=1, num_failures=0, seed=0, max_subsets=200
    )
    assert len(exhaustive.checks) == 126  # comb(9, 4)


def test_run_trial_validation():
    with pytest.raises(NonIntegerDownloadError):
        run_trial(
            make_params(2, 2, 1, kprime="3/2", n=4, file_size=8),
            alpha_sym=5,
            beta2_sym=2,
            num_failures=1,
            seed=0,
        )
    with pytest.raises(NonIntegerDownloadError):
        run_trial(
            make_params(2, 2, 1, kprime=2, n=4, file_size="17/2"),
            alpha_sym=5,
            beta2_sym=1,
            num_failures=1,
            seed=0,
        )
    with pytest.raises(NonIntegerDownloadError):
        run_trial(GMBR_PARAMS, alpha_sym=F(5, 2), beta2_sym=1, num_failures=1, seed=0)
    with pytest.raises(InsufficientHelpersError):
        run_trial(GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=1, seed=0, n_cheap=1)
    with pytest.raises(InsufficientHelpersError):
        run_trial(GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=1, seed=0, n_cheap=4)
    with pytest.raises(ValueError):
        run_trial(GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=1, seed=0, helper_mode="greedy")
    with pytest.raises(NonPositiveError):
        run_trial(GMBR_PARAMS, alpha_sym=5, beta2_sym=1, num_failures=-1, seed=0)
