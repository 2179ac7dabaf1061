"""Coherence, concurrence, mixedness, teleportation and CHSH quantifiers."""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

from helpers import random_density, random_xstate
from qcorr import states
from qcorr.errors import DimensionMismatch, NotXState
from qcorr.measures import (
    chsh_m,
    concurrence,
    concurrence_xstate,
    correlation_tensor,
    full_report,
    l1_coherence,
    linear_entropy,
    ppt_check,
    relative_entropy_coherence,
    teleportation_fidelity,
)
from qcorr.states import (
    BELL,
    COMPUTATIONAL,
    StateFamily,
    bell_state,
    class1_state,
    class2_state,
    density_matrix,
    express_in_basis,
    family_state,
    werner_state,
)

MAX_MIXED = density_matrix(np.eye(4) / 4)


def grid(n=21):
    return [float(p) for p in np.linspace(0.0, 1.0, n)]


class TestL1Coherence:
    def test_class1_computational_equals_parameter(self):
        for p in grid():
            assert abs(l1_coherence(class1_state("phi+", "00", p)) - p) < 1e-12

    def test_class1_entangled_basis_flips(self):
        rho = class1_state("phi+", "00", 0.3)
        assert abs(l1_coherence(rho, BELL) - 0.7) < 1e-12

    def test_maximally_mixed_is_incoherent_in_any_basis(self):
        for basis in (COMPUTATIONAL, BELL):
            assert l1_coherence(MAX_MIXED, basis) < 1e-14

    def test_wwtilde_reduction(self):
        rho = family_state(StateFamily("wwtilde-reduced"))
        assert abs(l1_coherence(rho) - 2.0) < 1e-12


class TestRelativeEntropyCoherence:
    def test_bell_state_is_one_bit(self):
        assert abs(relative_entropy_coherence(bell_state("phi+")) - 1.0) < 1e-12

    def test_diagonal_state_is_zero(self):
        rho = density_matrix(np.diag([0.4, 0.3, 0.2, 0.1]))
        assert relative_entropy_coherence(rho) == 0.0

    def test_class1_midpoint_against_eigenvalue_oracle(self):
        rho = class1_state("phi+", "00", 0.5)

        def entropy(mat):
            w = np.clip(np.linalg.eigvalsh(mat), 0.0, None)
            w = w[w > 0]
            return float(-(w * np.log2(w)).sum())

        oracle = entropy(np.diag(np.diag(rho.matrix))) - entropy(rho.matrix)
        assert abs(relative_entropy_coherence(rho) - oracle) < 1e-10

    def test_nonnegative_on_randoms(self):
        rng = np.random.default_rng(300)
        for _ in range(100):
            rho = density_matrix(random_density(rng, 4))
            assert relative_entropy_coherence(rho) >= 0.0
            assert relative_entropy_coherence(rho, BELL) >= 0.0

    def test_positive_for_nondiagonal_states(self):
        rng = np.random.default_rng(303)
        for _ in range(50):
            rho = density_matrix(random_density(rng, 4))
            off = np.abs(rho.matrix).sum() - np.abs(np.diag(rho.matrix)).sum()
            if off > 1e-6:
                assert relative_entropy_coherence(rho) > 0.0


class TestConcurrence:
    @pytest.mark.parametrize("kind", states.BELL_KINDS)
    def test_bell_states_maximal(self, kind):
        assert abs(concurrence(bell_state(kind)) - 1.0) < 1e-12

    def test_class_families_linear(self):
        for p in grid():
            assert abs(concurrence(class1_state("phi-", "11", p)) - p) < 1e-11
            assert abs(concurrence(class2_state("psi+", "11", p)) - p) < 1e-11

    def test_mix_ghz_w_against_xstate_closed_form(self):
        p = 0.1
        oracle = 2 * ((1 - p) / 3 - math.sqrt((p + 2) / 6 * p / 2))
        value = concurrence(family_state(StateFamily("mix-ghz-w", p)))
        assert abs(value - oracle) < 1e-12
        assert abs(value - 0.3354248688935409) < 1e-12

    def test_ghz_reduction_unentangled(self):
        assert concurrence(family_state(StateFamily("ghz-reduced"))) < 1e-12

    def test_wwtilde_reduction(self):
        value = concurrence(family_state(StateFamily("wwtilde-reduced")))
        assert abs(value - 1 / 3) < 1e-12

    def test_star_cuts(self):
        central = family_state(StateFamily("star-reduced", cut="central"))
        peripheral = family_state(StateFamily("star-reduced", cut="peripheral"))
        assert concurrence(central) < 1e-12
        assert abs(concurrence(peripheral) - 0.5) < 1e-12

    def test_rejects_three_qubit_states(self):
        with pytest.raises(DimensionMismatch):
            concurrence(states.tripartite_state("ghz"))


class TestXStateFastPath:
    def test_class2_values(self):
        for p in grid():
            rho = class2_state("phi+", "01", p)
            assert abs(concurrence_xstate(rho) - p) < 1e-12

    def test_w_reduction(self):
        rho = family_state(StateFamily("w-reduced"))
        assert abs(concurrence_xstate(rho) - 2 / 3) < 1e-14

    def test_diagonal_state_is_zero(self):
        assert concurrence_xstate(MAX_MIXED) == 0.0

    def test_rejects_off_x_support(self):
        with pytest.raises(NotXState):
            concurrence_xstate(family_state(StateFamily("wwtilde-reduced")))

    def test_agrees_with_general_route_on_randoms(self):
        rng = np.random.default_rng(301)
        worst = 0.0
        for _ in range(500):
            rho = density_matrix(random_xstate(rng))
            worst = max(worst, abs(concurrence_xstate(rho) - concurrence(rho)))
        assert worst <= 1e-9


class TestLinearEntropy:
    def test_class_midpoints(self):
        assert abs(linear_entropy(class1_state("phi+", "00", 0.5)) - 1 / 3) < 1e-12
        assert abs(linear_entropy(class2_state("phi+", "01", 0.5)) - 2 / 3) < 1e-12

    def test_pure_states_have_zero(self):
        assert linear_entropy(bell_state("psi+")) < 1e-12

    def test_w_reduction(self):
        assert abs(linear_entropy(family_state(StateFamily("w-reduced"))) - 16 / 27) < 1e-12

    def test_maximally_mixed_is_one(self):
        assert abs(linear_entropy(MAX_MIXED) - 1.0) < 1e-15


class TestCorrelationTensor:
    def test_class1_eigenvalues_by_direct_trace(self):
        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
        sz = np.array([[1, 0], [0, -1]], dtype=complex)
        for p in (0.2, 0.7):
            rho = class1_state("phi+", "00", p)
            t_oracle = np.array(
                [
                    [np.trace(rho.matrix @ np.kron(a, b)).real for b in (sx, sy, sz)]
                    for a in (sx, sy, sz)
                ]
            )
            ct = correlation_tensor(rho)
            assert_allclose(ct.t, t_oracle, atol=1e-12)
            assert_allclose(sorted(ct.u_eigs, reverse=True), [1.0, p * p, p * p], atol=1e-12)

    def test_class2_eigenvalues(self):
        for p in (0.1, 0.6, 0.9):
            ct = correlation_tensor(class2_state("phi+", "01", p))
            expected = sorted([p * p, p * p, (2 * p - 1) ** 2], reverse=True)
            assert_allclose(ct.u_eigs, expected, atol=1e-12)

    def test_maximally_mixed_has_no_correlations(self):
        ct = correlation_tensor(MAX_MIXED)
        assert np.max(np.abs(ct.t)) < 1e-14
        assert np.max(ct.u_eigs) < 1e-14


class TestTeleportationFidelity:
    def test_class1_formula(self):
        for p in grid():
            n, f, useful = teleportation_fidelity(class1_state("phi+", "11", p))
            assert abs(f - (2 + p) / 3) < 1e-12
            assert useful == (p > 0)

    def test_class2_piecewise(self):
        for p in grid():
            n, f, useful = teleportation_fidelity(class2_state("psi-", "00", p))
            if p >= 0.5:
                assert abs(f - (1 + 2 * p) / 3) < 1e-12
            else:
                assert abs(f - 2 / 3) < 1e-12
            assert useful == (p > 0.5)

    def test_w_reduction(self):
        _, f, useful = teleportation_fidelity(family_state(StateFamily("w-reduced")))
        assert abs(f - 7 / 9) < 1e-12
        assert useful

    def test_ghz_reduction_not_useful(self):
        n, f, useful = teleportation_fidelity(family_state(StateFamily("ghz-reduced")))
        assert abs(n - 1.0) < 1e-12
        assert abs(f - 2 / 3) < 1e-12
        assert not useful

    def test_star_peripheral_from_frozen_oracle(self):
        # independent oracle: reference-library spectrum of T^T T for the
        # frozen peripheral-cut matrix
        from test_states import STAR_PERIPHERAL

        sx = np.array([[0, 1], [1, 0]], dtype=complex)
        sy = np.array([[0, -1j], [1j, 0]], dtype=complex)
        sz = np.array([[1, 0], [0, -1]], dtype=complex)
        t = np.array(
            [
                [np.trace(STAR_PERIPHERAL @ np.kron(a, b)).real for b in (sx, sy, sz)]
                for a in (sx, sy, sz)
            ]
        )
        u = np.clip(np.linalg.eigvalsh(t.T @ t), 0.0, None)
        n_oracle = float(np.sqrt(u).sum())
        f_oracle = 0.5 * (1 + n_oracle / 3)

        rho = family_state(StateFamily("star-reduced", cut="peripheral"))
        n, f, useful = teleportation_fidelity(rho)
        assert abs(n - n_oracle) < 1e-12
        assert abs(f - f_oracle) < 1e-12
        # closed forms of the oracle values
        assert abs(n - (0.5 + math.sqrt(2.0))) < 1e-12
        assert abs(f - (7 + 2 * math.sqrt(2.0)) / 12) < 1e-12
        assert useful

    def test_star_central_not_useful(self):
        n, f, useful = teleportation_fidelity(
            family_state(StateFamily("star-reduced", cut="central"))
        )
        assert abs(n - 1.0) < 1e-12
        assert not useful

    def test_mix_ghz_w_formula_below_quarter(self):
        for p in (0.0, 0.1, 0.2, 0.24):
            _, f, useful = teleportation_fidelity(family_state(StateFamily("mix-ghz-w", p)))
            assert abs(f - (7 - 4 * p) / 9) < 1e-12
            assert useful
        _, f, useful = teleportation_fidelity(family_state(StateFamily("mix-ghz-w", 0.5)))
        assert abs(f - 2 / 3) < 1e-12
        assert not useful


class TestChsh:
    def test_class1_violates_everywhere_inside(self):
        for p in grid():
            m, violates = chsh_m(class1_state("psi+", "10", p))
            assert abs(m - (1 + p * p)) < 1e-12
            assert violates == (p > 0)

    def test_class2_piecewise_max(self):
        for p in grid():
            m, violates = chsh_m(class2_state("phi-", "01", p))
            expected = max(2 * p * p, 5 * p * p - 4 * p + 1)
            assert abs(m - expected) < 1e-12
            assert violates == (p > 1 / math.sqrt(2))

    def test_wwtilde_reduction_satisfies(self):
        m, violates = chsh_m(family_state(StateFamily("wwtilde-reduced")))
        assert abs(m - 8 / 9) < 1e-12
        assert not violates

    @pytest.mark.parametrize("kind", states.BELL_KINDS)
    def test_bell_states_maximal(self, kind):
        m, violates = chsh_m(bell_state(kind))
        assert abs(m - 2.0) < 1e-12
        assert violates

    def test_star_peripheral_sits_on_the_boundary(self):
        m, violates = chsh_m(family_state(StateFamily("star-reduced", cut="peripheral")))
        assert m == 1.0
        assert not violates


class TestPPT:
    def test_bell_state_partial_transpose_spectrum(self):
        min_eig, entangled = ppt_check(bell_state("phi+"))
        assert abs(min_eig + 0.5) < 1e-12
        assert entangled

    def test_maximally_mixed(self):
        min_eig, entangled = ppt_check(MAX_MIXED)
        assert abs(min_eig - 0.25) < 1e-12
        assert not entangled

    def test_class1_boundary(self):
        _, ent = ppt_check(class1_state("phi+", "00", 0.0))
        assert not ent
        _, ent = ppt_check(class1_state("phi+", "00", 0.5))
        assert ent


class TestWernerFamily:
    def test_useful_iff_fraction_above_half(self):
        for fw in np.linspace(0.0, 1.0, 21):
            fw = float(fw)
            n, f, useful = teleportation_fidelity(werner_state(fw))
            assert abs(n - abs(4 * fw - 1)) < 1e-11
            assert useful == (fw > 0.5)

    def test_teleports_without_nonlocality_window(self):
        # entangled, useful for teleportation, no CHSH violation
        rho = werner_state(0.6)
        report = full_report(rho)
        assert report.useful_for_teleportation
        assert not report.violates_chsh
        assert not report.is_ppt_separable_candidate

    def test_chsh_threshold(self):
        threshold = (3 + math.sqrt(2)) / (4 * math.sqrt(2))
        _, violates = chsh_m(werner_state(threshold + 0.01))
        assert violates
        _, violates = chsh_m(werner_state(threshold - 0.01))
        assert not violates


class TestFullReport:
    def test_pure_bell_endpoint(self):
        report = full_report(class1_state("phi+", "00", 1.0))
        assert abs(report.c_l1 - 1) < 1e-12
        assert abs(report.concurrence - 1) < 1e-12
        assert report.linear_entropy < 1e-12
        assert abs(report.teleport_fidelity - 1) < 1e-12
        assert abs(report.chsh_m - 2) < 1e-12

    def test_w_reduction_row(self):
        report = full_report(family_state(StateFamily("w-reduced")))
        assert abs(report.c_l1 - 2 / 3) < 1e-12
        assert abs(report.concurrence - 2 / 3) < 1e-12
        assert abs(report.linear_entropy - 16 / 27) < 1e-12
        assert abs(report.teleport_fidelity - 7 / 9) < 1e-12

    def test_mix_w_wtilde_closed_forms(self):
        for p in grid(11):
            report = full_report(family_state(StateFamily("mix-w-wtilde", p)))
            assert abs(report.c_l1 - 2 / 3) < 1e-12
            assert abs(report.concurrence - (2 / 3 - 2 * math.sqrt(p * (1 - p)) / 3)) < 1e-11
            assert abs(report.linear_entropy - 8 / 27 * (2 + p - p * p)) < 1e-12
            assert abs(report.teleport_fidelity - 7 / 9) < 1e-12

    def test_fidelity_identity_holds_exactly(self):
        rng = np.random.default_rng(302)
        for _ in range(50):
            report = full_report(density_matrix(random_density(rng, 4)))
            assert report.teleport_fidelity == 0.5 * (1 + report.n_value / 3)
            if report.violates_chsh:
                assert report.useful_for_teleportation

    def test_fidelity_and_chsh_ranges(self):
        rng = np.random.default_rng(304)
        for _ in range(200):
            report = full_report(density_matrix(random_density(rng, 4)))
            assert 0.5 - 1e-12 <= report.teleport_fidelity <= 1.0 + 1e-12
            assert -1e-12 <= report.chsh_m <= 2.0 + 1e-12

    def test_bell_basis_report_keeps_invariant_measures(self):
        rho = class2_state("phi+", "10", 0.4)
        direct = full_report(rho)
        rotated = full_report(express_in_basis(rho, BELL), BELL)
        assert abs(rotated.concurrence - direct.concurrence) < 1e-9
        assert abs(rotated.linear_entropy - direct.linear_entropy) < 1e-9
        assert abs(rotated.chsh_m - direct.chsh_m) < 1e-9
        assert abs(rotated.c_l1 - 0.6) < 1e-9
