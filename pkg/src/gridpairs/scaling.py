"""Scaling and renormalization factors and the three limit regimes."""

from __future__ import annotations

from dataclasses import dataclass

# binary floats of e.g. 2/3 and 1 - 1/3 differ by one ulp, so the critical
# exponent comparison needs a tolerance
GAMMA_CLASS_TOL = 1e-12


@dataclass(frozen=True)
class LimitClass:
    """Limit of phi(N) / N^(1-alpha): zero, a finite positive value, or infinity."""

    kind: str  # "zero" | "finite" | "infinite"
    value: float | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("zero", "finite", "infinite"):
            raise ValueError(f"unknown limit kind {self.kind!r}")
        if self.kind == "finite":
            if self.value is None or not self.value > 0.0:
                raise ValueError("finite limit requires a positive value")
        elif self.value is not None:
            raise ValueError(f"limit kind {self.kind!r} carries no value")

    @classmethod
    def zero(cls) -> "LimitClass":
        return cls("zero")

    @classmethod
    def finite(cls, value: float) -> "LimitClass":
        return cls("finite", float(value))

    @classmethod
    def infinite(cls) -> "LimitClass":
        return cls("infinite")


@dataclass(frozen=True)
class ScalingRegime:
    """Scaling factor phi: either N -> N^gamma or N -> lam * N^(1-alpha).

    The renormalization factor is always psi(N) = (N^(2-alpha) / phi(N))^2.
    """

    gamma: float | None = None
    lam: float | None = None

    def __post_init__(self) -> None:
        if (self.gamma is None) == (self.lam is None):
            raise ValueError("specify exactly one of gamma (power law) or lam (proportional)")
        if self.gamma is not None and not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0, 1), got {self.gamma}")
        if self.lam is not None and not self.lam > 0.0:
            raise ValueError(f"lam must be positive, got {self.lam}")

    @classmethod
    def power_law(cls, gamma: float) -> "ScalingRegime":
        return cls(gamma=float(gamma))

    @classmethod
    def proportional(cls, lam: float) -> "ScalingRegime":
        return cls(lam=float(lam))

    def phi(self, alpha: float, N: int) -> float:
        if self.gamma is not None:
            return float(N) ** self.gamma
        return self.lam * float(N) ** (1.0 - alpha)

    def psi(self, alpha: float, N: int) -> float:
        return (float(N) ** (2.0 - alpha) / self.phi(alpha, N)) ** 2

    def limit_class(self, alpha: float) -> LimitClass:
        if self.lam is not None:
            return LimitClass.finite(self.lam)
        d = self.gamma - (1.0 - alpha)
        if d > GAMMA_CLASS_TOL:
            return LimitClass.infinite()
        if d < -GAMMA_CLASS_TOL:
            return LimitClass.zero()
        return LimitClass.finite(1.0)


def phi_psi(scaling: ScalingRegime, alpha: float, N: int) -> tuple[float, float, LimitClass]:
    """Scaling factor, renormalization factor and regime classification at N."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    return (
        scaling.phi(alpha, N),
        scaling.psi(alpha, N),
        scaling.limit_class(alpha),
    )
