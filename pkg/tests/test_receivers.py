"""Tests for SINR evaluation and the port-selection receivers."""

import numpy as np
import pytest

from multiport_fama.core.linalg import generalized_eigvalsh
from multiport_fama.core.oracle import exhaustive_best_subset
from multiport_fama.core.receivers import (
    build_pair,
    design_dc,
    design_geport,
    design_mrc,
    design_slow_fama,
    dominant_eigenvalue,
    drop_report,
    drop_reports,
    per_port_sinr,
    per_port_sinrs,
    sinr_drop_bound,
    sinr_drop_exact,
    sinr_of_combiner,
    sinr_of_design,
    solve_combiner,
    spectral_efficiency,
)
from multiport_fama.core.verification import random_complex, random_fama_pair, random_full_rank_pair
from multiport_fama.models import ChannelRealization, DropReport, GeportOptions, ReceiverDesign, SignalMatrixPair
from multiport_fama.utils.exceptions import ConvergenceError, ValidationError


def single_user_channels(h):
    """K = M = 1 realization with port gains ``h``."""
    h = np.asarray(h, dtype=complex).reshape(-1, 1)
    return ChannelRealization.from_user_matrices([h])


class TestSignalPair:
    """Test cases for build_pair and the per-port SINRs."""

    def test_hand_example(self, identity_channels):
        """Identity channels give A = diag(1, 0), B = diag(1, 2)."""
        pair = build_pair(identity_channels, 0, 1.0)
        assert np.allclose(pair.A.entries, np.diag([1.0, 0.0]))
        assert np.allclose(pair.B.entries, np.diag([1.0, 2.0]))
        assert pair.is_rank_one and pair.user == 0

    def test_no_interferers(self):
        """Single user leaves only noise in B."""
        pair = build_pair(single_user_channels([1.0, 2j, 0.5]), 0, 4.0)
        assert np.array_equal(pair.B.entries, np.eye(3) / 4.0)

    def test_user_without_precoder(self):
        """A user index beyond M is rejected."""
        H = ChannelRealization(np.ones((2, 3, 1), dtype=complex))
        with pytest.raises(ValidationError):
            build_pair(H, 1, 1.0)

    def test_per_port_sinr_arithmetic(self):
        """Equal gains give SINR 1/2."""
        H = ChannelRealization.from_user_matrices([np.array([[1.0, 1.0]]), np.array([[1.0, 1.0]])])
        assert per_port_sinr(H, 0, 0, 1.0) == pytest.approx(0.5)

    def test_per_port_sinr_no_interference(self):
        """Without interferers the SINR is snr |h_r|^2."""
        H = single_user_channels([1.0, 2j, 0.5])
        assert np.allclose(per_port_sinrs(H, 0, 2.0), [2.0, 8.0, 0.5])
        assert per_port_sinr(H, 0, 1, 2.0) == pytest.approx(8.0)

    def test_pair_port_sinrs_match_channel(self, rng):
        """Pair diagonal ratios equal the channel per-port SINRs."""
        H = ChannelRealization(random_complex(rng, (3, 5, 3)))
        pair = build_pair(H, 2, 3.0)
        assert np.allclose(pair.port_sinrs(), per_port_sinrs(H, 2, 3.0))

    def test_restrict_keeps_labels(self, fama_pair):
        """Restriction keeps original port labels."""
        sub = fama_pair.restrict([5, 1, 3]).without(1)
        assert sub.ports == (5, 3)
        assert np.allclose(sub.a_vec, fama_pair.a_vec[[5, 3]])


class TestSinr:
    """Test cases for combiner SINR and spectral efficiency."""

    def test_matched_filter_single_user(self):
        """Matched filter reaches snr ||h||^2 at any scale."""
        h = np.array([1.0, 1j, -0.5, 0.25 + 0.25j])
        H = single_user_channels(h)
        expected = 2.0 * np.vdot(h, h).real
        assert sinr_of_combiner(H, 0, range(4), h, 2.0) == pytest.approx(expected)
        assert sinr_of_combiner(H, 0, range(4), 5j * h, 2.0) == pytest.approx(expected)

    @pytest.mark.parametrize("designer", [
        lambda pair: design_slow_fama(pair),
        lambda pair: design_dc(pair, 3),
        lambda pair: design_mrc(pair, 3),
        lambda pair: design_geport(pair, 3),
        lambda pair: design_geport(pair, 3, GeportOptions(solver="inverse_update")),
        lambda pair: exhaustive_best_subset(pair, 3).to_design(),
    ], ids=["slow_fama", "dc", "mrc", "geport", "geport_inverse_update", "oracle"])
    def test_design_sinr_matches_channel(self, rng, designer):
        """Reported SINR equals the SINR recomputed from H and the combiner."""
        H = ChannelRealization(random_complex(rng, (4, 10, 4)))
        for k in range(4):
            design = designer(build_pair(H, k, 10.0))
            assert sinr_of_design(H, k, design, 10.0) == pytest.approx(design.achieved_sinr, rel=1e-12)

    def test_combiner_scale_invariance(self, rng):
        """Any nonzero complex rescaling of w leaves the SINR unchanged."""
        H = ChannelRealization(random_complex(rng, (4, 10, 4)))
        design = design_geport(build_pair(H, 2, 10.0), 4)
        reference = sinr_of_design(H, 2, design, 10.0)
        for c in random_complex(rng, 10) * 10.0 ** rng.uniform(-3.0, 3.0, 10):
            scaled = sinr_of_combiner(H, 2, design.ports, c * design.w, 10.0)
            assert scaled == pytest.approx(reference, rel=1e-12)

    @pytest.mark.parametrize("sinr,expected", [(0.0, 0.0), (1.0, 1.0), (3.0, 2.0)])
    def test_spectral_efficiency(self, sinr, expected):
        """log2(1 + SINR)."""
        assert spectral_efficiency(sinr) == pytest.approx(expected)

    def test_spectral_efficiency_negative(self):
        """Negative SINR is rejected."""
        with pytest.raises(ValidationError):
            spectral_efficiency(-0.1)


class TestSolveCombiner:
    """Test cases for solve_combiner."""

    def test_single_port(self, fama_pair):
        """One port gives A_rr / B_rr."""
        solution = solve_combiner(fama_pair, [4])
        expected = fama_pair.A.entries[4, 4].real / fama_pair.B.entries[4, 4].real
        assert np.allclose(solution.w, [1.0])
        assert solution.sinr == pytest.approx(expected, rel=1e-12)

    def test_white_interference_gives_matched_filter(self):
        """White B makes the optimum the matched filter."""
        a = np.array([1.0, 2j, -1.0])
        pair = SignalMatrixPair.rank_one(a, 0.5 * np.eye(3))
        solution = solve_combiner(pair, range(3))
        assert abs(np.vdot(solution.w, a)) == pytest.approx(np.linalg.norm(a))
        assert solution.sinr == pytest.approx(2.0 * 6.0)

    def test_zero_signal_is_degenerate(self):
        """No signal on the ports gives a degenerate zero-SINR solution."""
        pair = SignalMatrixPair.rank_one(np.array([0.0, 0.0, 1.0]), np.eye(3))
        solution = solve_combiner(pair, [0, 1])
        assert solution.degenerate
        assert solution.sinr == 0.0
        assert np.allclose(solution.w, [1.0, 0.0])

    def test_full_rank_matches_spectrum(self, full_rank_pair):
        """Full-rank optimum is the top generalized eigenvalue."""
        solution = solve_combiner(full_rank_pair, range(6))
        top = generalized_eigvalsh(full_rank_pair.A, full_rank_pair.B)[-1]
        assert solution.sinr == pytest.approx(top, rel=1e-9)
        assert np.linalg.norm(solution.w) == pytest.approx(1.0)

    def test_rank_one_closed_form(self, fama_pair):
        """Rank-one closed form matches the generalized spectrum."""
        top = generalized_eigvalsh(fama_pair.A, fama_pair.B)[-1]
        assert dominant_eigenvalue(fama_pair) == pytest.approx(top, rel=1e-9)

    def test_duplicate_ports_rejected(self, fama_pair):
        """Repeated port indices are rejected."""
        with pytest.raises(ValidationError):
            solve_combiner(fama_pair, [1, 1])

    @pytest.mark.parametrize("full_rank", [False, True])
    def test_superset_never_worse(self, rng, full_rank):
        """Adding a port to the active set cannot lower the optimal SINR."""
        for _ in range(20):
            pair = random_full_rank_pair(rng, 8) if full_rank else random_fama_pair(rng, 8)
            order = [int(p) for p in rng.permutation(pair.dim)]
            previous = solve_combiner(pair, order[:1]).sinr
            for size in range(2, pair.dim + 1):
                current = solve_combiner(pair, order[:size]).sinr
                assert current >= previous - 1e-10 * max(1.0, previous)
                previous = current


class TestBaselines:
    """Test cases for slow FAMA, DC and MRC."""

    def test_slow_fama_argmax(self):
        """slow_fama activates the best single port."""
        a = np.sqrt([0.1, 0.9, 0.4])
        design = design_slow_fama(SignalMatrixPair.rank_one(a, np.eye(3)))
        assert design.ports == (1,)
        assert design.achieved_sinr == pytest.approx(0.9)
        assert design.strategy == "slow_fama"

    def test_slow_fama_single_user(self):
        """Without interference the strongest port wins."""
        h = np.array([0.3, -1.2j, 0.9])
        pair = build_pair(single_user_channels(h), 0, 1.0)
        assert design_slow_fama(pair).ports == (1,)

    def test_dc_single_port_matches_slow_fama(self, fama_pair):
        """dc with L = 1 is slow_fama."""
        dc = design_dc(fama_pair, 1)
        slow = design_slow_fama(fama_pair)
        assert dc.ports == slow.ports
        assert dc.achieved_sinr == pytest.approx(slow.achieved_sinr, rel=1e-12)

    def test_dc_all_ports(self, fama_pair):
        """dc on every port reaches the full optimum."""
        design = design_dc(fama_pair, fama_pair.dim)
        assert design.ports == tuple(range(fama_pair.dim))
        assert design.achieved_sinr == pytest.approx(dominant_eigenvalue(fama_pair), rel=1e-12)

    def test_dc_ports_sorted(self, fama_pair):
        """dc keeps the top per-port SINRs in ascending order."""
        design = design_dc(fama_pair, 3)
        assert list(design.ports) == sorted(design.ports)
        top = np.argsort(-fama_pair.port_sinrs())[:3]
        assert set(design.ports) == set(int(i) for i in top)

    def test_mrc_top_magnitudes(self):
        """mrc keeps the strongest desired-signal ports."""
        pair = SignalMatrixPair.rank_one(np.array([3.0, 1.0, 2.0]), np.eye(3))
        assert design_mrc(pair, 2).ports == (0, 2)

    def test_mrc_equals_dc_without_interference(self, rng):
        """Without interference mrc and dc coincide."""
        h = random_complex(rng, 6)
        pair = build_pair(single_user_channels(h), 0, 3.0)
        mrc = design_mrc(pair, 3)
        dc = design_dc(pair, 3)
        assert mrc.ports == dc.ports
        assert mrc.achieved_sinr == pytest.approx(dc.achieved_sinr, rel=1e-10)

    def test_mrc_suboptimal_under_interference(self, fama_pair):
        """mrc never beats the optimal combiner on its ports."""
        mrc = design_mrc(fama_pair, 3)
        optimal = solve_combiner(fama_pair, mrc.ports)
        assert mrc.achieved_sinr <= optimal.sinr * (1 + 1e-12)

    def test_invalid_active_ports(self, fama_pair):
        """L outside 1..N is rejected."""
        with pytest.raises(ValidationError):
            design_dc(fama_pair, 0)
        with pytest.raises(ValidationError):
            design_mrc(fama_pair, fama_pair.dim + 1)


class TestSinrDrop:
    """Test cases for the exact and bounded SINR drop."""

    def test_decoupled_port(self, decoupled_pair):
        """Dropping a decoupled port costs nothing."""
        assert sinr_drop_exact(decoupled_pair, 2) == pytest.approx(0.0, abs=1e-12)
        assert sinr_drop_bound(decoupled_pair, 2) == pytest.approx(0.0, abs=1e-15)

    def test_hand_example(self, identity_channels):
        """Only the port carrying the signal costs SINR."""
        pair = build_pair(identity_channels, 0, 1.0)
        assert sinr_drop_exact(pair, 1) == pytest.approx(0.0, abs=1e-15)
        assert sinr_drop_exact(pair, 0) == pytest.approx(1.0)

    def test_bound_tight_for_rank_one(self, fama_pair):
        """Rank-one bound equals the exact drop."""
        lam = dominant_eigenvalue(fama_pair)
        for l in range(fama_pair.dim):
            exact = sinr_drop_exact(fama_pair, l)
            assert sinr_drop_bound(fama_pair, l) == pytest.approx(exact, rel=1e-8, abs=1e-10 * lam)

    def test_bound_below_exact(self, rng):
        """Full-rank bound stays below the exact drop."""
        for _ in range(5):
            pair = random_full_rank_pair(rng, 6)
            for l in range(6):
                exact = sinr_drop_exact(pair, l)
                assert sinr_drop_bound(pair, l) <= exact + 1e-9 * max(1.0, exact)

    def test_drop_reports(self, fama_pair):
        """One non-negative report per port."""
        reports = drop_reports(fama_pair)
        assert [r.port for r in reports] == list(range(fama_pair.dim))
        assert all(r.exact_drop >= -1e-12 for r in reports)

    def test_single_port_rejected(self):
        """A one-port pair has no port to drop."""
        pair = SignalMatrixPair.rank_one(np.ones(1), np.eye(1))
        with pytest.raises(ValidationError):
            sinr_drop_exact(pair, 0)

    def test_report_keeps_port_label(self, fama_pair):
        """drop_report maps the local row to its original port index."""
        sub = fama_pair.restrict([6, 2, 4])
        report = drop_report(sub, 1)
        assert report.port == 2
        assert report.lower_bound <= report.exact_drop + 1e-9 * max(1.0, report.exact_drop)

    def test_full_rank_reports_valid(self, rng):
        """Reports of full-rank pairs pass validation."""
        for _ in range(5):
            assert len(drop_reports(random_full_rank_pair(rng, 6))) == 6

    @pytest.mark.parametrize("port,exact,bound", [
        (0, -0.5, -0.6),
        (1, 1.0, 1.5),
        (-1, 1.0, 0.5),
        (2, float("nan"), 0.0),
        (2, 1.0, float("inf")),
    ])
    def test_report_validation(self, port, exact, bound):
        """Negative drops, bounds above the exact drop and bad ports are rejected."""
        with pytest.raises(ValidationError):
            DropReport(port, exact, bound)

    def test_report_tolerates_roundoff(self):
        """Roundoff-level violations are accepted."""
        report = DropReport(3, -1e-12, 1e-12)
        assert report.to_dict() == {"port": 3, "exact_drop": -1e-12, "lower_bound": 1e-12}


class TestGeport:
    """Test cases for design_geport."""

    def test_all_ports_kept(self, fama_pair):
        """L = N removes nothing and keeps the optimum."""
        design = design_geport(fama_pair, fama_pair.dim)
        assert design.removed_ports == ()
        assert design.loss_trace == (0.0,)
        assert design.achieved_sinr == pytest.approx(dominant_eigenvalue(fama_pair), rel=1e-8)

    def test_useless_port_removed_first(self, decoupled_pair):
        """A decoupled port goes first."""
        design = design_geport(decoupled_pair, 3)
        assert design.removed_ports == (2,)
        assert design.ports == (0, 1, 3)

    def test_removal_bookkeeping(self, fama_pair):
        """Kept and removed ports partition the pair with a monotone loss trace."""
        design = design_geport(fama_pair, 3)
        assert design.L == 3
        assert len(design.removed_ports) == fama_pair.dim - 3
        assert set(design.ports) | set(design.removed_ports) == set(range(fama_pair.dim))
        assert len(design.loss_trace) == len(design.removed_ports) + 1
        assert all(b >= a - 1e-9 for a, b in zip(design.loss_trace, design.loss_trace[1:]))

    def test_achieved_sinr_is_subset_optimum(self, fama_pair):
        """Final combiner is optimal on the kept ports."""
        design = design_geport(fama_pair, 3)
        optimum = solve_combiner(fama_pair, design.ports).sinr
        assert design.achieved_sinr == pytest.approx(optimum, rel=1e-8)

    def test_loss_matches_trace(self, fama_pair):
        """Last trace entry is the total SINR loss."""
        design = design_geport(fama_pair, 2)
        expected = dominant_eigenvalue(fama_pair) - design.achieved_sinr
        assert design.loss_trace[-1] == pytest.approx(expected, rel=1e-7, abs=1e-9)

    def test_zero_loss_budget_stops_early(self, fama_pair):
        """A zero budget keeps every port."""
        design = design_geport(fama_pair, 2, GeportOptions(loss_budget=0.0))
        assert design.L == fama_pair.dim
        assert design.removed_ports == ()

    def test_raw_vector_convention(self, fama_pair):
        """Raw eigenvector ranking still reaches L ports."""
        design = design_geport(fama_pair, 4, GeportOptions(vector="raw"))
        assert design.L == 4

    def test_inverse_update_matches_power(self, rng):
        """Both solvers remove the same ports."""
        for _ in range(5):
            pair = random_fama_pair(rng, 10, snr=10.0 ** 1.5)
            power = design_geport(pair, 3)
            fast = design_geport(pair, 3, GeportOptions(solver="inverse_update"))
            assert fast.ports == power.ports
            assert fast.removed_ports == power.removed_ports
            assert fast.achieved_sinr == pytest.approx(power.achieved_sinr, rel=1e-8)

    def test_inverse_update_needs_rank_one(self, full_rank_pair):
        """Closed-form solver rejects full-rank numerators."""
        with pytest.raises(ValidationError):
            design_geport(full_rank_pair, 2, GeportOptions(solver="inverse_update"))

    def test_full_rank_pair(self, full_rank_pair):
        """Full-rank pairs end on the subset optimum."""
        design = design_geport(full_rank_pair, 2)
        assert design.L == 2
        optimum = solve_combiner(full_rank_pair, design.ports).sinr
        assert design.achieved_sinr == pytest.approx(optimum, rel=1e-6)

    def test_iteration_cap(self, fama_pair):
        """Power-method cap surfaces as ConvergenceError."""
        with pytest.raises(ConvergenceError):
            design_geport(fama_pair, 3, GeportOptions(max_iter=1))

    def test_zero_signal_is_degenerate(self):
        """Zero signal gives a degenerate design with L ports."""
        pair = SignalMatrixPair.rank_one(np.zeros(4), np.eye(4))
        design = design_geport(pair, 2)
        assert design.degenerate
        assert design.achieved_sinr == 0.0
        assert design.L == 2

    def test_invalid_options(self):
        """Unknown solver and vector names are rejected."""
        with pytest.raises(ValidationError):
            GeportOptions(solver="lanczos")
        with pytest.raises(ValidationError):
            GeportOptions(vector="left")


class TestReceiverDesign:
    """Test cases for ReceiverDesign validation."""

    def test_non_unit_combiner(self):
        """Combiners must have unit norm."""
        with pytest.raises(ValidationError):
            ReceiverDesign((0, 1), np.array([1.0, 1.0]), 1.0)

    def test_duplicate_ports(self):
        """Ports must be distinct."""
        with pytest.raises(ValidationError):
            ReceiverDesign((1, 1), np.array([1.0, 0.0]), 1.0)

    def test_to_dict(self):
        """Complex weights serialize as [re, im] pairs."""
        design = ReceiverDesign((2,), np.array([1.0]), 3.0, strategy="dc")
        data = design.to_dict()
        assert data["ports"] == [2]
        assert data["se"] == pytest.approx(2.0)
        assert data["w"] == [[1.0, 0.0]]
