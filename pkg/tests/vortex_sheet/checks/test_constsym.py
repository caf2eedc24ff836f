import dataclasses

from vortex_sheet.engine.basic_check import CHECK_FAILURE_TEXT

from tests.vortex_sheet.checks.check_test import CHECKS, CheckTest


class TestBoundarySymbolCheck(CheckTest):
    check_name = "BoundarySymbolCheck"


class TestHomogeneityCheck(CheckTest):
    check_name = "HomogeneityCheck"


class TestOmegaEigenvalueCheck(CheckTest):
    check_name = "OmegaEigenvalueCheck"


class TestSignDichotomyCheck(CheckTest):
    check_name = "SignDichotomyCheck"

    def test_rejects_omega_off_the_stable_root(self, monkeypatch):
        check = CHECKS[self.check_name]
        real = check.check.__globals__["interior_symbol"]

        def wrong_omega(cfg, f):
            return dataclasses.replace(real(cfg, f), omega_plus=2.0 + 1.0j, omega_minus=3.0 - 1.0j)

        monkeypatch.setitem(check.check.__globals__, "interior_symbol", wrong_omega)
        result = check(self.context("stable")).run()
        assert result.status == CHECK_FAILURE_TEXT
        assert "is not the stable root" in result.detail


class TestBoundaryContinuityCheck(CheckTest):
    check_name = "BoundaryContinuityCheck"


class TestStableVectorCheck(CheckTest):
    check_name = "StableVectorCheck"


class TestTriangularizationCheck(CheckTest):
    check_name = "TriangularizationCheck"


class TestNewtonianConstantsCheck(CheckTest):
    check_name = "NewtonianConstantsCheck"
    skipped_on = ("stable", "unstable", "transition")
