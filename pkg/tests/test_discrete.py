import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_force_partner, brute_force_probabilities
from poppersim.discrete import (
    DETECTORS,
    DiscreteConfig,
    branch_mixture,
    build_state,
    decompose_x_basis,
    joint_xz_distribution,
    reassemble,
    run_coincidence,
    run_unconditional,
    sample_unconditional_counts,
)
from poppersim.errors import ConfigError, NullSelectionError
from poppersim.quantum import equal_up_to_phase

R2 = math.sqrt(2)
PAPER = DiscreteConfig(alpha=math.sqrt(0.05), beta=math.sqrt(0.9))
X_VECS = {1: [0.5, 1 / R2, 0.5], 0: [1 / R2, 0, -1 / R2], -1: [0.5, -1 / R2, 0.5]}

betas = st.floats(0.0, 0.999999).map(lambda b: DiscreteConfig.from_beta(b))


def test_config_normalization_checked():
    with pytest.raises(ConfigError, match="2\\*alpha"):
        DiscreteConfig(alpha=math.sqrt(0.2), beta=math.sqrt(0.5))


def test_config_rejects_negative_amplitudes():
    with pytest.raises(ConfigError):
        DiscreteConfig(alpha=-math.sqrt(0.05), beta=math.sqrt(0.9))


def test_build_state_paper():
    s = build_state(PAPER)
    t = s.tensor
    assert abs(t[0, 2] - math.sqrt(0.05)) < 1e-15
    assert abs(t[1, 1] - math.sqrt(0.9)) < 1e-15
    assert abs(t[2, 0] - math.sqrt(0.05)) < 1e-15
    assert np.count_nonzero(t) == 3


def test_build_state_product_and_maximal():
    s = build_state(DiscreteConfig(alpha=0.0, beta=1.0))
    assert s.tensor[1, 1] == 1 and np.count_nonzero(s.amplitudes) == 1
    m = build_state(DiscreteConfig(alpha=1 / math.sqrt(3), beta=1 / math.sqrt(3)))
    assert abs(m.norm() - 1) < 1e-12


def test_unconditional():
    d = run_unconditional(PAPER)
    assert d.labels == DETECTORS
    np.testing.assert_allclose(d.probs, [0.05, 0.9, 0.05], atol=1e-12)
    np.testing.assert_allclose(run_unconditional(DiscreteConfig(alpha=0.0, beta=1.0)).probs, [0, 1, 0], atol=1e-15)
    third = 1 / math.sqrt(3)
    np.testing.assert_allclose(run_unconditional(DiscreteConfig(third, third)).probs, [1 / 3] * 3, atol=1e-12)


def test_coincidence_paper():
    r = run_coincidence(PAPER)
    assert abs(r.selection_probability - 0.05) < 1e-12
    assert abs(r.discarded_probability - 0.95) < 1e-12
    np.testing.assert_allclose(r.conditional.probs, [0.5, 0.0, 0.5], atol=1e-12)
    assert r.unconditional_counts is None


def test_coincidence_maximal_against_brute_force():
    third = 1 / math.sqrt(3)
    cfg = DiscreteConfig(third, third)
    r = run_coincidence(cfg)
    s = build_state(cfg)
    ref_sel = brute_force_probabilities(s.amplitudes, (3, 3), 0, [X_VECS[0]])[0]
    assert abs(ref_sel - 1 / 3) < 1e-12
    assert abs(r.selection_probability - ref_sel) < 1e-12
    np.testing.assert_allclose(r.conditional.probs, [0.5, 0, 0.5], atol=1e-12)


def test_coincidence_null_selection():
    with pytest.raises(NullSelectionError):
        run_coincidence(DiscreteConfig(alpha=0.0, beta=1.0))


def test_decompose_paper_coefficients():
    br = decompose_x_basis(PAPER)
    assert equal_up_to_phase(br[1], [math.sqrt(0.05) / 2, math.sqrt(0.9) / R2, math.sqrt(0.05) / 2])
    assert equal_up_to_phase(br[-1], [math.sqrt(0.05) / 2, -math.sqrt(0.9) / R2, math.sqrt(0.05) / 2])
    assert equal_up_to_phase(br[0], [-math.sqrt(0.05) / R2, 0, math.sqrt(0.05) / R2])
    assert abs(np.sum(np.abs(br[0]) ** 2) - 0.05) < 1e-12
    # under this phase convention the middle branch carries the same overall sign as written
    np.testing.assert_allclose(br[0], [-math.sqrt(0.05) / R2, 0, math.sqrt(0.05) / R2], atol=1e-15)


def test_decompose_matches_brute_force_projection():
    s = build_state(PAPER)
    for m, vec in X_VECS.items():
        ref = brute_force_partner(s.amplitudes, (3, 3), 0, vec)
        np.testing.assert_allclose(np.abs(decompose_x_basis(PAPER)[m]), np.abs(ref), atol=1e-12)


def test_decompose_product_state_has_empty_middle_branch():
    br = decompose_x_basis(DiscreteConfig(alpha=0.0, beta=1.0))
    assert np.sum(np.abs(br[0]) ** 2) < 1e-30


@given(betas)
def test_decomposition_reassembles(cfg):
    br = decompose_x_basis(cfg)
    np.testing.assert_allclose(reassemble(br), build_state(cfg).amplitudes, atol=1e-12)
    assert abs(sum(np.sum(np.abs(b) ** 2) for b in br.values()) - 1) < 1e-9


@settings(max_examples=200)
@given(betas)
def test_conditional_always_half_zero_half(cfg):
    if cfg.alpha < 1e-6:
        return
    r = run_coincidence(cfg)
    np.testing.assert_allclose(r.conditional.probs, [0.5, 0, 0.5], atol=1e-12)


@given(betas)
def test_no_signaling_mixture(cfg):
    np.testing.assert_allclose(branch_mixture(cfg).probs, run_unconditional(cfg).probs, atol=1e-12)
    joint = joint_xz_distribution(build_state(cfg))
    b_marginal = [sum(joint[(mx, mz)] for mx in (1, 0, -1)) for mz in (1, 0, -1)]
    np.testing.assert_allclose(b_marginal, run_unconditional(cfg).probs, atol=1e-12)


@given(betas)
def test_unconditional_unchanged_by_a_apparatus(cfg):
    if cfg.alpha < 1e-6:
        return
    r = run_coincidence(cfg)
    np.testing.assert_allclose(r.unconditional.probs, run_unconditional(cfg).probs, atol=1e-12)


def test_counts_only_with_shots():
    r = run_coincidence(DiscreteConfig(shots=1000, seed=9))
    assert sum(r.unconditional_counts.values()) == 1000
    assert r.conditional_counts["D0"] == 0
    assert sum(r.conditional_counts.values()) <= 1000
    again = run_coincidence(DiscreteConfig(shots=1000, seed=9))
    assert (again.unconditional_counts, again.conditional_counts) == (r.unconditional_counts, r.conditional_counts)
    assert sum(sample_unconditional_counts(DiscreteConfig(shots=77)).values()) == 77
