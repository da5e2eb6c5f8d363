"""Numerical settings shared by every rate evaluation."""

from dataclasses import asdict, dataclass

from .errors import DomainError
from .thermo import CONVENTIONS


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and conventions for the adaptive quadratures.

    Attributes
    ----------
    rel_tol : float
        Relative tolerance requested from every adaptive integral.
    max_subdivisions : int
        Subinterval budget per integral.
    n_total_convention : str
        ``"integral"`` (self-consistent, default) or ``"paper_constant"``.
    p_truncation_multiplier : float
        Momentum integrals stop at ``sqrt(2 tau)`` times this; 8.4 puts the
        occupancy below double precision epsilon there.
    """

    rel_tol: float = 1e-8
    max_subdivisions: int = 2000
    n_total_convention: str = "integral"
    p_truncation_multiplier: float = 8.4

    def __post_init__(self):
        if not 1e-14 < self.rel_tol < 1e-2:
            raise DomainError(f"rel_tol must lie in (1e-14, 1e-2), got {self.rel_tol}")
        if int(self.max_subdivisions) != self.max_subdivisions or self.max_subdivisions < 10:
            raise DomainError("max_subdivisions must be an integer >= 10")
        if self.n_total_convention not in CONVENTIONS:
            raise DomainError(f"n_total_convention must be one of {CONVENTIONS}")
        if not self.p_truncation_multiplier > 0:
            raise DomainError("p_truncation_multiplier must be positive")

    def as_dict(self):
        return asdict(self)
