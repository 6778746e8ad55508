from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass
class Check:
    """One verified identity.  ``residual`` holds the failing polynomial, if any."""

    name: str
    passed: bool
    detail: str = ""
    residual: str = ""
    vacuous: bool = False

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return asdict(self)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        if self.passed and self.vacuous:
            status = "PASS (vacuous)"
        out = f"{status:15} {self.name}"
        if self.detail:
            out += f"  -- {self.detail}"
        return out


def poly_check(name: str, residual, detail: str = "", vacuous: bool = False) -> Check:
    """A check that passes iff ``residual`` is the zero polynomial."""
    return Check(name, not residual, detail, "" if not residual else str(residual), vacuous)
