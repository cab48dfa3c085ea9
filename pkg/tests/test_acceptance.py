"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` to see the summary lines; they are
printed with output capture disabled so they also show up in plain runs.
"""
import math
import time

import numpy as np
import pytest

from ecstates import (
    Direction,
    Mode,
    SetKind,
    complementary_channel,
    convexity_transfer_check,
    dephasing_channel,
    depolarizing_channel,
    energy,
    enorm,
    enorm_mixed_oracle,
    enorm_primal_oracle,
    equal_energy_decomposition,
    extreme_oracle,
    finite_rank_approximation,
    gibbs_state,
    identity_channel,
    min_output_entropy,
    oscillator_observable,
    random_channel,
    random_density,
    random_observable,
    random_pure,
    von_neumann_entropy,
)
from ecstates.constrained_opt.transfer import sample_bounded_state


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return emit


def _trace_norm(X):
    return float(np.sum(np.abs(np.linalg.eigvalsh(0.5 * (X + X.conj().T)))))


def _extremality_suite(n, seed):
    """Seeded (rho, H, E) triples with d <= 6, half of them energy-active."""
    rng = np.random.default_rng(seed)
    for i in range(n):
        d = int(rng.integers(1, 7))
        H = random_observable(d, rng)
        rank = 1 if i % 3 == 0 else int(rng.integers(1, d + 1))
        rho = random_density(d, rank, rng)
        e = energy(rho, H)
        E = e if i % 2 == 0 else e + float(rng.uniform(0.01, 1.0))
        yield rho, H, E, rng


def test_criterion_1_extremality_theorem(verdict):
    t0 = time.perf_counter()
    n = disagree = active = 0
    for rho, H, E, _ in _extremality_suite(1000, 1):
        rep = extreme_oracle(rho, H, E)
        n += 1
        active += rep.energy_active
        disagree += rep.is_extreme != (rho.rank() == 1)
    dt = time.perf_counter() - t0
    ok = n >= 1000 and disagree == 0 and 0 < active < n and dt <= 60
    verdict(1, ok, f"{n} instances ({active} energy-active), {disagree} disagreements, {dt:.1f} s")


def test_criterion_2_subnormalized_rank(verdict):
    n = violations = extreme = 0
    for rho, H, E, rng in _extremality_suite(1000, 2):
        t = (1.0, float(rng.uniform(0.05, 0.95)), 0.0)[n % 3]
        T = t * rho.mat
        E = energy(T, H) + (0.0 if n % 2 == 0 else float(rng.uniform(0.01, 1.0)))
        rep = extreme_oracle(T, H, E, SetKind.SUBNORMALIZED)
        n += 1
        if rep.is_extreme:
            extreme += 1
            violations += rep.rank > 1
    verdict(2, n >= 1000 and violations == 0, f"{n} instances, {extreme} extreme, {violations} of rank > 1")


def test_criterion_3_exact_energy_decomposition(verdict):
    rng = np.random.default_rng(3)
    t0 = time.perf_counter()
    worst_rec = worst_e = 0.0
    bad_count = bad_merge = 0
    n = 500
    for _ in range(n):
        d = int(rng.integers(1, 9))
        H = random_observable(d, rng)
        rho = random_density(d, int(rng.integers(1, d + 1)), rng)
        cert = equal_energy_decomposition(rho, H)
        V, p = cert.ensemble.vectors, cert.ensemble.weights  # vectors are columns
        worst_rec = max(worst_rec, _trace_norm((V * p) @ V.conj().T - rho.mat))
        e0 = energy(rho, H)
        comp_e = np.real(np.einsum("ik,ij,jk->k", V.conj(), H.mat, V))
        worst_e = max(worst_e, float(np.max(np.abs(comp_e - e0))))
        r = rho.rank()
        bad_count += len(cert.ensemble) > 2 * r
        bad_merge += cert.merges > r - 1
    dt = time.perf_counter() - t0
    ok = worst_rec <= 1e-9 and worst_e <= 1e-8 and bad_count == 0 and bad_merge == 0 and dt <= 60
    verdict(3, ok, f"{n} decompositions, max trace distance {worst_rec:.2e}, max energy deviation {worst_e:.2e}, "
                   f"count violations {bad_count}, merge violations {bad_merge}, {dt:.1f} s")


def test_criterion_4_enorm_duality(verdict):
    rng = np.random.default_rng(4)
    worst_rel = worst_feas = worst_mixed = -math.inf
    n = 200
    for i in range(n):
        d = int(rng.integers(2, 9))
        H = random_observable(d, rng)
        A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        E = float(rng.uniform(H.ground_energy, H.max_energy))
        res = enorm(A, H, E)
        primal, _ = enorm_primal_oracle(A, H, E, n_starts=6, seed=i)
        worst_rel = max(worst_rel, abs(res.value - primal) / max(1.0, res.value))
        worst_feas = max(worst_feas, H.expectation(res.witness) - E)
        worst_mixed = max(worst_mixed, enorm_mixed_oracle(A, H, E, n_samples=30, seed=i) - res.value)
    fixture = enorm(np.diag([1.0, 2.0]), np.diag([0.0, 1.0]), 0.5).value
    fix_err = abs(fixture - math.sqrt(2.5))
    ok = worst_rel <= 1e-6 and worst_feas <= 1e-9 and worst_mixed <= 1e-6 and fix_err <= 1e-9
    verdict(4, ok, f"{n} instances, max relative dual/primal gap {worst_rel:.2e}, worst witness excess "
                   f"{worst_feas:.2e}, mixed excess {worst_mixed:.2e}, fixture error {fix_err:.1e}")


def test_criterion_5_enorm_curve(verdict):
    rng = np.random.default_rng(5)
    worst_mono = worst_conc = worst_top = 0.0
    n = 50
    for _ in range(n):
        d = int(rng.integers(2, 9))
        H = random_observable(d, rng)
        A = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        grid = np.linspace(H.ground_energy, H.max_energy, 11)
        v = np.array([enorm(A, H, float(E)).value for E in grid])
        worst_mono = max(worst_mono, float(np.max(-np.diff(v))))
        worst_conc = max(worst_conc, float(np.max(0.5 * (v[:-2] + v[2:]) - v[1:-1])))
        op = np.linalg.norm(A, 2)
        for E in (H.max_energy, H.max_energy + 0.5):
            worst_top = max(worst_top, abs(enorm(A, H, E).value - op))
    ok = worst_mono <= 1e-8 and worst_conc <= 1e-8 and worst_top <= 1e-9
    verdict(5, ok, f"{n} curves, max decrease {worst_mono:.1e}, max concavity defect {worst_conc:.1e}, "
                   f"top error {worst_top:.1e}")


def test_criterion_6_min_output_entropy(verdict):
    H2 = np.diag([0.0, 1.0])
    ident = min_output_entropy(identity_channel(2), H2, 0.3, n_starts=8).value
    dep = max(abs(min_output_entropy(depolarizing_channel(d), np.diag(np.arange(d, dtype=float)), 0.5,
                                     n_starts=4).value - math.log(d)) for d in (2, 3, 4))
    h = -0.2 * math.log(0.2) - 0.8 * math.log(0.8)
    deph = abs(min_output_entropy(dephasing_channel(), H2, 0.2, Mode.EXACT).value - h)

    rng = np.random.default_rng(6)
    worst = -math.inf
    for _ in range(10):
        d = int(rng.integers(2, 5))
        Phi = random_channel(d, d, 2, rng)
        H = random_observable(d, rng)
        E = float(rng.uniform(H.ground_energy, H.max_energy))
        best = min_output_entropy(Phi, H, E, n_starts=16, seed=1).value
        for _ in range(50):
            worst = max(worst, best - von_neumann_entropy(Phi(sample_bounded_state(H, E, rng))))
    ok = abs(ident) <= 1e-9 and dep <= 1e-9 and deph <= 1e-6 and worst <= 1e-6
    verdict(6, ok, f"identity {ident:.1e}, depolarizing error {dep:.1e}, dephasing error {deph:.1e}, "
                   f"largest mixed-state improvement {worst:.1e}")


def test_criterion_7_complementary_identity(verdict):
    rng = np.random.default_rng(7)
    worst = 0.0
    n = 0
    while n < 200:
        d, dout, k = (int(x) for x in rng.integers(1, 7, size=3))
        if dout * k < d:
            continue
        Phi = random_channel(d, dout, k, rng)
        psi = random_pure(d, rng)
        worst = max(worst, abs(von_neumann_entropy(Phi(psi)) - von_neumann_entropy(complementary_channel(Phi)(psi))))
        n += 1
    verdict(7, worst <= 1e-9, f"{n} pairs, max entropy difference {worst:.1e}")


def test_criterion_8_finite_rank_truncation(verdict):
    t0 = time.perf_counter()
    H = oscillator_observable(64)
    rho = gibbs_state(H, 1.0)
    comps = list(zip(rho.eigenvalues, rho.eigenvectors.T))
    e0 = energy(rho, H)
    rows = []
    for n in (2, 4, 8, 16, 32):
        rho_n, rep = finite_rank_approximation(comps, H, n)
        dist = _trace_norm(rho_n.mat - rho.mat)  # recomputed independently of the report
        rows.append((n, dist, rep.tail_mass, energy(rho_n, H)))
    dt = time.perf_counter() - t0
    dists = [r[1] for r in rows]
    decreasing = all(a > b for a, b in zip(dists, dists[1:]))
    bounded = all(dd <= 2 * tail + 1e-12 for _, dd, tail, _ in rows)
    energies = all(en <= e0 + 1e-12 for *_, en in rows)
    ok = decreasing and bounded and energies and dt <= 5
    table = ", ".join(f"n={n}: {dd:.3e}" for n, dd, *_ in rows)
    verdict(8, ok, f"{table}; decreasing={decreasing}, within 2*tail={bounded}, energy ok={energies}, {dt:.2f} s")


def test_criterion_9_convexity_transfer(verdict):
    rng = np.random.default_rng(9)
    failures = 0
    n = 20
    for i in range(n):
        d = int(rng.integers(2, 6))
        H = random_observable(d, rng)
        E = float(rng.uniform(H.ground_energy, H.max_energy))
        M = rng.standard_normal((d, d))
        M = M + M.T
        linear = lambda r, M=M: float(np.real(np.trace(M @ r.mat)))  # noqa: E731
        Phi = random_channel(d, d, 2, rng)
        concave = lambda r, Phi=Phi: von_neumann_entropy(Phi(r))  # noqa: E731
        reports = [
            convexity_transfer_check(linear, Direction.SUP_CONVEX, H, E, 50, 50, i),
            convexity_transfer_check(linear, Direction.INF_CONCAVE, H, E, 50, 50, i),
            convexity_transfer_check(concave, Direction.INF_CONCAVE, H, E, 50, 50, i),
        ]
        failures += sum(not r.passed for r in reports)
    verdict(9, failures == 0, f"{n} instances x 3 checks, {failures} failures")
