from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from vortex_sheet.eos_state import classify_threshold

CHECK_SUCCESS_TEXT = "Check Finished Successfully"
CHECK_FAILURE_TEXT = "Check Found A Violated Property"
CHECK_SKIPPED_TEXT = "Check Skipped For This Regime"


@dataclass
class CheckContext:
    """Everything a property check may draw on."""

    sheet: object
    seed: int = 0
    samples: int = 200
    scan_resolution: int = 200
    frozen_amplitude: float = 1e-3
    rng: Optional[np.random.Generator] = field(default=None, repr=False)

    def __post_init__(self):
        if self.rng is None:
            self.rng = np.random.default_rng(self.seed)

    def fresh_rng(self, name):
        """A generator seeded from the run seed and the check name, independent of check order."""
        return np.random.default_rng([self.seed, sum(ord(ch) for ch in name)])


@dataclass(frozen=True)
class CheckResult:
    name: str
    module: str
    status: str
    detail: str = ""

    @property
    def passed(self):
        return self.status != CHECK_FAILURE_TEXT


class BasicCheck(object):
    applies_to = None

    def __init__(self, context):
        self.context = context
        if not hasattr(self, "required_properties"):
            self.required_properties = []
        self.set_properties()
        self.sheet = self.context.sheet
        self.rng = self.context.fresh_rng(self.__class__.__name__)

    def set_properties(self):
        self.properties = {}
        for required_property in self.required_properties:
            if getattr(self.context, required_property, None) is None:
                raise LookupError(
                    "Missing context property for "
                    + self.__class__.__name__
                    + ". Requires: "
                    + str(self.required_properties)
                )
            self.properties[required_property] = getattr(self.context, required_property)

    def applies(self):
        if self.applies_to is None:
            return True
        return classify_threshold(self.sheet).regime in self.applies_to

    def run(self):
        name = self.__class__.__name__
        module = getattr(self, "MODULE", self.__class__.__module__.rsplit(".", 1)[-1])
        if not self.applies():
            return CheckResult(name, module, CHECK_SKIPPED_TEXT)
        failure = self.check()
        if failure:
            return CheckResult(name, module, CHECK_FAILURE_TEXT, str(failure))
        return CheckResult(name, module, CHECK_SUCCESS_TEXT)

    def check(self):
        """Return None when the property holds, otherwise a short description of the violation."""
        raise NotImplementedError
