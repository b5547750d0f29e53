from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from .errors import PreconditionError

OutputFormat = Literal["json", "text"]


@dataclass(frozen=True)
class Config:
    tolerance: float = 1e-10
    identity_tolerance: float = 1e-12
    output_format: OutputFormat = "text"
    lmax: int = 8
    quadrature_degree: int | None = None

    def __post_init__(self) -> None:
        if self.tolerance <= 0 or self.identity_tolerance <= 0:
            raise PreconditionError(f"tolerances must be positive, got {self.tolerance}, {self.identity_tolerance}")
        if self.lmax < 0:
            raise PreconditionError(f"lmax must be non-negative, got {self.lmax}")
        if self.quadrature_degree is not None and self.quadrature_degree < 0:
            raise PreconditionError(f"quadrature degree must be non-negative, got {self.quadrature_degree}")

    def degree_for(self, needed: int) -> int:
        """Quadrature degree to use when an integrand of degree `needed` is expected."""
        return needed if self.quadrature_degree is None else max(self.quadrature_degree, needed)
