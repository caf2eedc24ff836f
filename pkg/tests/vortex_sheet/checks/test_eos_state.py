from tests.vortex_sheet.checks.check_test import CheckTest


class TestParticleDensityCheck(CheckTest):
    check_name = "ParticleDensityCheck"


class TestEnthalpyDerivativeCheck(CheckTest):
    check_name = "EnthalpyDerivativeCheck"


class TestCriticalMachCheck(CheckTest):
    check_name = "CriticalMachCheck"


class TestPrimRoundTripCheck(CheckTest):
    check_name = "PrimRoundTripCheck"
