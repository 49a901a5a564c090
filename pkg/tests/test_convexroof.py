import math

import numpy as np
import pytest

from entmono import (
    DensityOperator,
    Family,
    HKind,
    MeasureSpec,
    ReducedFunctionSpec,
    StateError,
    convex_roof,
    decomposition_from_unitary,
    eigenvalues,
    partial_trace,
    projector,
    random_density_operator,
    wootters_concurrence,
)
from entmono.verify import make_omega, make_w_state
from conftest import ket

CONC = MeasureSpec(Family.MAX, ReducedFunctionSpec(HKind.CONCURRENCE))
TANGLE = MeasureSpec(Family.MAX, ReducedFunctionSpec(HKind.TANGLE))

SEPARABLE = DensityOperator(("A", "B"), (2, 2), np.diag([0.5, 0, 0, 0.5]).astype(complex))


# --- the closed-form oracle ------------------------------------------------------

def test_wootters_bell(bell):
    assert abs(wootters_concurrence(projector(bell)) - 1.0) < 1e-9


def test_wootters_separable():
    assert wootters_concurrence(SEPARABLE) == 0.0


def test_wootters_w3_pair_marginal():
    st = make_w_state(3)
    op = partial_trace(st, ["A", "B"])
    assert abs(wootters_concurrence(op) - 2 / 3) < 1e-9


def test_wootters_omega_pair_marginal():
    # corner-supported state: concurrence equals twice the off-diagonal, 2*sqrt(7)/9
    op = partial_trace(make_omega("i"), ["A", "B"])
    assert abs(wootters_concurrence(op) - 2 * math.sqrt(7) / 9) < 1e-9


def test_wootters_dimension_guard(bell):
    with pytest.raises(StateError):
        wootters_concurrence(random_density_operator((3, 2), seed=0))


# --- decompositions -----------------------------------------------------------------

def test_identity_isometry_reproduces_eigendecomposition():
    op = random_density_operator((2, 2), seed=4, rank=3)
    dec = decomposition_from_unitary(op, np.eye(3))
    w = eigenvalues(op).eigenvalues
    got = sorted((wt for wt, _ in dec.members), reverse=True)
    assert np.allclose(got, w[:3], atol=1e-10)


def test_rank_one_decomposition(bell):
    dec = decomposition_from_unitary(projector(bell), np.eye(1))
    assert dec.cardinality == 1
    assert abs(dec.members[0][0] - 1.0) < 1e-12


def test_random_isometry_reconstructs():
    rng = np.random.default_rng(8)
    op = random_density_operator((2, 2), seed=8)  # rank 4
    g = rng.standard_normal((8, 4)) + 1j * rng.standard_normal((8, 4))
    q, _ = np.linalg.qr(g)
    dec = decomposition_from_unitary(op, q)
    assert np.abs(dec.average_operator() - op.matrix).max() < 1e-8
    assert abs(math.fsum(w for w, _ in dec.members) - 1.0) < 1e-10


def test_non_isometry_rejected():
    op = random_density_operator((2, 2), seed=9)
    with pytest.raises(StateError):
        decomposition_from_unitary(op, np.ones((4, 4)))


# --- roof optimization ------------------------------------------------------------

def test_pure_input_short_circuits(bell):
    res = convex_roof(CONC, projector(bell))
    assert res.restarts_used == 0
    assert res.converged
    assert abs(res.value - 1.0) < 1e-9


def test_separable_roof_vanishes():
    res = convex_roof(CONC, SEPARABLE, seed=1)
    assert res.value <= 1e-6


def test_roof_tracks_wootters_on_seeded_batch():
    rng = np.random.default_rng(424242)
    for i in range(12):
        rank = int(rng.integers(2, 5))
        op = random_density_operator((2, 2), int(rng.integers(0, 2 ** 62)), rank=rank)
        w = wootters_concurrence(op)
        res = convex_roof(CONC, op, m=max(2, eigenvalues(op).effective_rank),
                          restarts=2, seed=i, max_iters=5)
        assert res.value >= w - 1e-9
        assert res.value <= w + 1e-3


def test_roof_value_matches_its_own_decomposition():
    from entmono.measures import measure_pure

    op = random_density_operator((2, 2), seed=21, rank=2)
    res = convex_roof(CONC, op, restarts=2, seed=2)
    avg = math.fsum(w * measure_pure(CONC, psi) for w, psi in res.decomposition.members)
    assert abs(avg - res.value) < 1e-10
    assert np.abs(res.decomposition.average_operator() - op.matrix).max() < 1e-8


def test_roof_monotone_in_cardinality():
    op = random_density_operator((2, 2), seed=31, rank=2)
    big = convex_roof(CONC, op, restarts=3, seed=5)          # default m = r^2
    small = convex_roof(CONC, op, m=2, restarts=3, seed=5)
    assert big.value <= small.value + 1e-9


def test_roof_convexity_sanity():
    spec = TANGLE
    rng = np.random.default_rng(77)
    for i in range(3):
        r1 = random_density_operator((2, 2), int(rng.integers(0, 2 ** 62)), rank=2)
        r2 = random_density_operator((2, 2), int(rng.integers(0, 2 ** 62)), rank=2)
        lam = float(rng.uniform(0.2, 0.8))
        mix = DensityOperator(r1.labels, r1.dims, lam * r1.matrix + (1 - lam) * r2.matrix)
        v_mix = convex_roof(spec, mix, restarts=2, seed=i, max_iters=4).value
        v1 = convex_roof(spec, r1, restarts=2, seed=i, max_iters=4).value
        v2 = convex_roof(spec, r2, restarts=2, seed=i, max_iters=4).value
        assert v_mix <= lam * v1 + (1 - lam) * v2 + 2e-3


def test_roof_on_three_block_partition():
    # zero target on a product of a Bell pair with a mixed spectator
    bell = ket("AB", (2, 2), {(0, 0): 1 / math.sqrt(2), (1, 1): 1 / math.sqrt(2)})
    rho_c = random_density_operator(
        (2,), seed=3, labels=["C"]
    )
    op = DensityOperator(("A", "B", "C"), (2, 2, 2), np.kron(projector(bell).matrix, rho_c.matrix))
    spec = MeasureSpec(Family.SUM, ReducedFunctionSpec(HKind.TANGLE))
    res = convex_roof(spec, op, restarts=2, seed=4, max_iters=4)
    # members factor as Bell x pure, so the sum collects only the Bell tangle
    assert abs(res.value - 1.0) < 5e-6


def test_guard_rejects_large_operators():
    from entmono.errors import GuardError

    op = random_density_operator((2,) * 7, seed=1, rank=2)
    with pytest.raises(GuardError):
        convex_roof(CONC, op)
