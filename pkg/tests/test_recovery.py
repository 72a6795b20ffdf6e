import itertools
import random

import pytest

from conftest import random_rational_matrix
from worked_example import A_EXPECTED, G_INPUT, G_S1, G_S2_DOUBLE_PRIME, G_S2_PRIME, H_S1, H_S2
from sigrecover.gauss import Diag, General, Lower, Perm, Upper, apply, apply_all
from sigrecover.matrix import Matrix, det, identity, random_invertible
from sigrecover.recovery import (
    NotInOrbit,
    RecoveryConfig,
    final_scale,
    format_trace,
    lower_diag_step,
    recover,
    up_three,
    up_two,
)
from sigrecover.tensor import (
    Tensor3,
    check_lower_ready,
    check_orbit_conditions,
    congruence_act,
    core_tensor,
)

SNAP = RecoveryConfig(record_snapshots=True)


def orbit_point(a):
    a = a if isinstance(a, Matrix) else Matrix(a)
    return congruence_act(a, core_tensor(a.nrows))


def permutation_matrix(perm):
    d = len(perm)
    return Matrix([[int(perm[i] == j) for j in range(d)] for i in range(d)])


# -- the worked example -----------------------------------------------------------


def test_worked_example_recovers_expected_matrix():
    a, trace = recover(G_INPUT, SNAP)
    assert a == A_EXPECTED
    assert trace.snapshots[(1, "upper")] == H_S1
    assert trace.snapshots[(1, "lower")] == G_S1
    assert trace.snapshots[(2, "upper")] == H_S2
    assert trace.total_retries() == 0
    assert trace.ops_at(1, "upper") == [Upper(1, [1, 0, 0])]
    assert trace.ops_at(3, "lower") == [Lower(3, [1])]
    assert trace.ops_at(3, "diag") == [Diag(3, -1)]


def test_worked_example_three_dimensional_step():
    step = up_three(G_S1, RecoveryConfig(), random.Random(0))
    assert step.retries == 0
    assert [type(op) for op in step.ops] == [Upper, Upper, Upper]
    partial = [apply_all(step.ops[:n], G_S1) for n in (1, 2, 3)]
    assert partial == [G_S2_PRIME, G_S2_DOUBLE_PRIME, H_S2]
    assert step.tensor == H_S2


def test_worked_example_lower_step():
    lower, diag = lower_diag_step(H_S1, 1)
    assert apply(diag, apply(lower, H_S1)) == G_S1
    assert check_orbit_conditions(G_S1, 1)


def test_trace_reproduces_transform():
    a, trace = recover(G_INPUT)
    q = trace.transform()
    assert congruence_act(q, G_INPUT) == core_tensor(4)
    assert trace.replay(G_INPUT) == core_tensor(4)
    assert q @ a == identity(4)


@pytest.mark.parametrize("d", range(1, 8))
def test_core_tensor_recovers_identity(d):
    a, _ = recover(core_tensor(d))
    assert a == identity(d)


def test_one_dimensional():
    assert recover(Tensor3.from_flat(1, [8]))[0] == Matrix([[2]])
    assert recover(Tensor3.from_flat(1, ["-1/27"]))[0] == Matrix([["-1/3"]])
    with pytest.raises(NotInOrbit):
        recover(Tensor3.from_flat(1, [2]))


# -- the branches ---------------------------------------------------------------


def test_up_two_regular_and_swap_branches():
    g = orbit_point([[1, 2], [3, 4]])
    assert isinstance(up_two(g), Upper)
    g = orbit_point([[1, 2], [3, 0]])
    assert g[1, 2, 2] == g[2, 1, 2]
    assert up_two(g) == Perm(1, 2)


@pytest.mark.parametrize("a", [[[1, 2], [3, 0]], [[0, 1], [1, 0]], [[5, -2], [1, 0]], [["1/2", 3], [-1, 0]]])
def test_second_entry_zero_uses_swap(a):
    got, trace = recover(orbit_point(a))
    assert got == Matrix(a)
    assert Perm(1, 2) in trace.ops_at(1, "upper")


@pytest.mark.parametrize("d", range(2, 7))
def test_permutation_instances(d):
    perms = list(itertools.permutations(range(d)))
    if d == 6:
        perms = perms[::7]  # every permutation is covered by the acceptance suite
    for perm in perms:
        p = permutation_matrix(perm)
        assert recover(orbit_point(p))[0] == p


def test_three_dimensional_step_retries_on_zero_denominator():
    seen = 0
    for perm in itertools.permutations(range(3)):
        p = permutation_matrix(perm)
        g = orbit_point(p)
        a, trace = recover(g)
        assert a == p
        if g[2, 3, 3] == g[3, 2, 3]:
            seen += 1
            assert trace.retries[1] >= 1
            assert any(isinstance(op, General) for op in trace.ops_at(1, "random"))
    assert seen >= 1


def test_general_step_retries_recorded():
    a = Matrix([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    got, trace = recover(orbit_point(a))
    assert got == a
    assert trace.retries[1] >= 1
    assert trace.ops_at(1, "random")


def test_deterministic_pivot_tries_cycles_first():
    g = core_tensor(5)
    a, trace = recover(g, RecoveryConfig(deterministic_pivot=True))
    assert a == identity(5)
    assert all(isinstance(op, (Perm, General)) for op in trace.ops_at(1, "random"))
    assert trace.ops_at(1, "random")


def test_shear_needs_no_retry():
    d = 6
    a = identity(d) + Matrix([[int(i == d - 1 and j == 0) for j in range(d)] for i in range(d)])
    got, trace = recover(orbit_point(a))
    assert got == a
    assert trace.retries[1] == 0


# -- determinism and failures -----------------------------------------------------


def test_same_seed_same_trace():
    g = orbit_point(random_invertible(6, 1, 3, 11))
    t1, t2 = recover(g, RecoveryConfig(rng_seed=5))[1], recover(g, RecoveryConfig(rng_seed=5))[1]
    assert t1.steps == t2.steps
    assert t1.mul_count == t2.mul_count


def test_different_seeds_same_answer():
    a = random_invertible(5, 1, 3, 12)
    g = orbit_point(a)
    assert all(recover(g, RecoveryConfig(rng_seed=s))[0] == a for s in range(5))


def test_corrupted_entry_is_rejected():
    g = orbit_point(A_EXPECTED).array
    g[1, 2, 3] += 1
    with pytest.raises(NotInOrbit) as exc:
        recover(Tensor3._wrap(g))
    assert exc.value.step


def test_non_cube_scaling_is_rejected():
    with pytest.raises(NotInOrbit) as exc:
        recover(core_tensor(3) * 2)
    assert "cube" in str(exc.value)


def test_real_but_irrational_orbit_point_is_rejected():
    # A = 2^(1/3) I is real but not rational: G = 2 C is outside the rational orbit
    with pytest.raises(NotInOrbit):
        recover(core_tensor(5) * 2)


def test_lower_step_refuses_unready_tensor():
    with pytest.raises(NotInOrbit):
        lower_diag_step(G_INPUT, 1)


def test_final_scale():
    assert final_scale(apply(Diag(3, 2), core_tensor(3))) == Diag(3, "1/2")
    assert final_scale(core_tensor(3)) == Diag(3, 1)
    with pytest.raises(NotInOrbit):
        final_scale(core_tensor(3) * 3)


def test_zero_tensor():
    with pytest.raises(NotInOrbit):
        recover(Tensor3.zeros(4))


def test_config_validation():
    with pytest.raises(ValueError):
        RecoveryConfig(max_retries=0)
    with pytest.raises(ValueError):
        RecoveryConfig(random_entry_bound=0)


# -- invariants -----------------------------------------------------------------


@pytest.mark.parametrize("seed", range(25))
def test_round_trip_and_loop_invariants(seed):
    rng = random.Random(seed)
    d = rng.randint(2, 9)
    a = random_rational_matrix(rng, d)
    while det(a) == 0:
        a = random_rational_matrix(rng, d)
    got, trace = recover(orbit_point(a), SNAP)
    assert got == a
    for s in range(1, d):
        assert check_lower_ready(trace.snapshots[(s, "upper")], s)
        assert check_orbit_conditions(trace.snapshots[(s, "lower")], s)


def test_format_trace_lists_every_step():
    _, trace = recover(G_INPUT)
    text = format_trace(trace)
    assert len(text.splitlines()) == len(trace.steps) + 1
    assert text.startswith("d=4 ")
