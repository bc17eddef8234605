"""Normalized weak-trace state and its eigenvector-limit structure."""

import numpy as np
import pytest

from dixtrace.config import LadderPlan, RunConfig
from dixtrace.errors import IllPosedError
from dixtrace.genlimits import LimitEstimate
from dixtrace.quantum import (
    NormalizedIntegral,
    diagonal_limit,
    phi,
    structure_check,
    theta_pairing,
)
from dixtrace.spectral import (
    DiagonalObservable,
    DyadicBlockLaw,
    LimitModel,
    PowerLaw,
)

ONE = DiagonalObservable.const(1.0)


def decaying(value: float, power: float = 0.8, coef: float = 1.0) -> DiagonalObservable:
    return DiagonalObservable(
        rule=lambda m: value + coef * m.astype(np.float64) ** (-power),
        bound=abs(value) + abs(coef),
        limit=LimitModel(value=value, dev_coef=abs(coef), dev_power=power),
    )


class TestNormalizedIntegral:
    def test_harmonic_normalization_is_one(self, fast_cfg):
        I = NormalizedIntegral.build(PowerLaw(1.0, 1.0), fast_cfg)
        assert I.normalization.is_converged
        assert I.normalization.value == pytest.approx(1.0, abs=1e-6)

    def test_scaled_operator_scales_normalization(self, fast_cfg):
        I = NormalizedIntegral.build(PowerLaw(2.0, 1.0), fast_cfg)
        assert I.normalization.value == pytest.approx(2.0, abs=1e-5)

    def test_trace_class_operator_rejected(self, fast_cfg):
        with pytest.raises(IllPosedError, match="positive"):
            NormalizedIntegral.build(PowerLaw(1.0, 2.0), fast_cfg)

    def test_oscillating_operator_rejected(self):
        cfg = RunConfig().with_updates(ladder=LadderPlan(1 << 10, 1 << 20, 2.0))
        with pytest.raises(IllPosedError, match="band"):
            NormalizedIntegral.build(DyadicBlockLaw(), cfg)


class TestPhi:
    def test_state_axioms_on_constants(self, fast_cfg):
        I = NormalizedIntegral.build(PowerLaw(1.0, 1.0), fast_cfg)
        unit = phi(I, ONE)
        assert unit.is_converged
        assert unit.value == pytest.approx(1.0, abs=1e-12)
        scaled = phi(I, DiagonalObservable.const(0.3))
        assert scaled.value == pytest.approx(0.3, abs=1e-6)

    def test_additive_with_modeled_tails(self, fast_cfg):
        I = NormalizedIntegral.build(PowerLaw(1.0, 1.0), fast_cfg)
        a = decaying(0.3, power=1.1)
        b = decaying(0.4, power=0.9, coef=0.5)
        pa = phi(I, a)
        pb = phi(I, b)
        pab = phi(I, a.add(b))
        assert pab.value == pytest.approx(pa.value + pb.value, abs=1e-6)
        assert pab.value == pytest.approx(0.7, abs=1e-2)
        assert pa.value >= 0.0 and pb.value >= 0.0

    def test_normalization_divides_out(self, fast_cfg):
        A = decaying(0.4)
        p1 = phi(NormalizedIntegral.build(PowerLaw(1.0, 1.0), fast_cfg), A)
        p3 = phi(NormalizedIntegral.build(PowerLaw(3.0, 1.0), fast_cfg), A)
        assert p1.value == pytest.approx(p3.value, abs=1e-4)

    def test_pairing_carries_normalization_factor(self, fast_cfg):
        I = NormalizedIntegral.build(PowerLaw(2.0, 1.0), fast_cfg)
        num = theta_pairing(I, DiagonalObservable.const(0.5))
        assert num.value == pytest.approx(1.0, abs=1e-5)

    def test_complex_diagonal_reports_imaginary_part(self, fast_cfg):
        I = NormalizedIntegral.build(PowerLaw(1.0, 1.0), fast_cfg)
        est = phi(I, DiagonalObservable.const(0.2 + 0.7j))
        assert est.value == pytest.approx(0.2, abs=1e-5)
        assert est.detail["value_im"] == pytest.approx(0.7, abs=1e-5)

    def test_band_numerator_yields_band_state(self):
        cfg = RunConfig().with_updates(ladder=LadderPlan(1 << 10, 1 << 20, 2.0))
        norm = LimitEstimate.converged(1.3, 0.01, method="stub")
        I = NormalizedIntegral(T=DyadicBlockLaw(), normalization=norm, config=cfg)
        est = phi(I, ONE)
        assert est.status == "band"
        assert est.method == "phi-band"
        assert est.lo < est.hi
        assert est.detail["numerator_status"] == "band"


class TestDiagonalLimit:
    def test_constant(self, fast_cfg):
        est = diagonal_limit(DiagonalObservable.const(0.7), fast_cfg)
        assert est.is_converged
        assert est.value == pytest.approx(0.7, abs=1e-9)

    def test_decaying(self, fast_cfg):
        est = diagonal_limit(decaying(0.5, power=1.2), fast_cfg)
        assert est.is_converged
        assert est.value == pytest.approx(0.5, abs=5e-3)

    def test_threshold_override_loosens_verdict(self, fast_cfg):
        A = decaying(0.5, power=0.3)
        strict = diagonal_limit(A, fast_cfg, threshold=1e-9)
        loose = diagonal_limit(A, fast_cfg, threshold=0.3)
        assert not strict.is_converged
        assert loose.is_converged


class TestStructureCheck:
    def test_constant_agrees(self, fast_cfg):
        I = NormalizedIntegral.build(PowerLaw(1.0, 1.0), fast_cfg)
        rep = structure_check(DiagonalObservable.const(0.7), I, fast_cfg)
        assert rep["agreement"]["agree"]
        assert rep["agreement"]["kind"] == "value"
        assert rep["agreement"]["gap"] < 1e-3

    def test_decaying_agrees(self, fast_cfg):
        I = NormalizedIntegral.build(PowerLaw(1.0, 1.0), fast_cfg)
        rep = structure_check(decaying(0.3, power=0.7), I, fast_cfg)
        assert rep["agreement"]["agree"]
        assert rep["phi"]["value"] == pytest.approx(0.3, abs=1e-2)
        assert rep["diagonal_limit"]["value"] == pytest.approx(0.3, abs=1e-2)

    def test_agreement_survives_renormalized_operator(self, fast_cfg):
        A = decaying(0.6, power=0.9)
        I = NormalizedIntegral.build(PowerLaw(5.0, 1.0), fast_cfg)
        rep = structure_check(A, I, fast_cfg)
        assert rep["agreement"]["agree"]
        assert rep["phi"]["value"] == pytest.approx(0.6, abs=1e-2)

    def test_report_carries_diagonal_head(self, fast_cfg):
        I = NormalizedIntegral.build(PowerLaw(1.0, 1.0), fast_cfg)
        rep = structure_check(DiagonalObservable.const(0.25), I, fast_cfg)
        head = rep["diag_head"]
        assert len(head["m"]) == len(head["value"]) > 0
        assert head["m"][0] == 1
        assert head["value"][0] == pytest.approx(0.25)
