"""Working-precision settings and the check record shared by every suite."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import mpmath

MIN_PRECISION_BITS = 64
# extra bits carried internally on top of the requested working precision
GUARD_BITS = 32


@dataclass(frozen=True)
class PrecisionContext:
    """Governs all inexact evaluation.

    ``precision_bits`` is the mpmath mantissa size, ``tol_digits`` the number
    of decimal digits demanded by checks, and ``trunc`` the number of q-series
    terms used when evaluating on the upper half-plane.
    """

    precision_bits: int = 256
    tol_digits: int = 25
    trunc: int = 400

    def __post_init__(self) -> None:
        if self.precision_bits < MIN_PRECISION_BITS:
            raise ValueError(
                f"precision_bits={self.precision_bits} is below the minimum of {MIN_PRECISION_BITS}"
            )
        if self.tol_digits < 1:
            raise ValueError("tol_digits must be positive")
        if self.trunc < 1:
            raise ValueError("trunc must be positive")

    def workprec(self):
        return mpmath.workprec(self.precision_bits + GUARD_BITS)

    @property
    def dps(self) -> int:
        """Decimal digits carried by ``precision_bits``."""
        return int(self.precision_bits * math.log10(2))

    @property
    def tolerance(self) -> mpmath.mpf:
        return mpmath.mpf(10) ** (-self.tol_digits)

    @property
    def tail_tolerance(self) -> mpmath.mpf:
        """Every truncated evaluation must leave a tail below this."""
        return mpmath.mpf(10) ** (-self.tol_digits - 5)


class TruncationError(ArithmeticError):
    """A truncated evaluation cannot certify its tail below the required bound."""


def to_mpf(x: Fraction | int) -> mpmath.mpf:
    x = Fraction(x)
    return mpmath.mpf(x.numerator) / x.denominator


def fmt_mp(x: Any, digits: int) -> str:
    """Decimal string for an mpf/mpc value, stable for a fixed ``digits``."""
    return mpmath.nstr(x, digits)


@dataclass
class CheckResult:
    """One verified claim. ``status`` is pass iff ``residual <= tolerance``."""

    check_id: str
    residual: Any
    tolerance: Any
    params: dict[str, Any] = field(default_factory=dict)
    value: Any = None
    message: str = ""
    exact: bool = False

    @property
    def status(self) -> str:
        if self.residual is None:
            return "fail"
        return "pass" if self.residual <= self.tolerance else "fail"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self, digits: int = 30) -> dict[str, Any]:
        def enc(v: Any) -> Any:
            if v is None:
                return None
            if isinstance(v, (mpmath.mpf, mpmath.mpc)):
                return mpmath.nstr(v, digits)
            if isinstance(v, Fraction):
                return str(v)
            if isinstance(v, bool):
                return v
            if isinstance(v, (int, float)):
                return str(v)
            return v

        out: dict[str, Any] = {
            "check_id": self.check_id,
            "status": self.status,
            "exact": self.exact,
            "residual": enc(self.residual),
            "tolerance": enc(self.tolerance),
            "params": {k: enc(v) for k, v in self.params.items()},
        }
        if self.value is not None:
            out["value"] = enc(self.value)
        if self.message:
            out["message"] = self.message
        return out


def exact_check(check_id: str, failures: int, params: dict[str, Any] | None = None,
                message: str = "") -> CheckResult:
    """Record for an exact identity: residual counts mismatches, tolerance 0."""
    return CheckResult(check_id, failures, 0, params or {}, message=message, exact=True)
