from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Numerical thresholds shared by every module.

    ``parseval`` is a Frobenius-norm bound on ``F F^T - I``; ``orthogonality``
    bounds stacked row-orthonormality certificates.
    """

    parseval: float = 1e-8
    orthogonality: float = 1e-10
    fd_step: float = 1e-5
    rank: float = 1e-6
    reorth: float = 1e-12
    singular: float = 1e-8
    holonomy: float = 0.1
    closure: float = 1e-8

    def __post_init__(self):
        for name, value in vars(self).items():
            if not value > 0:
                raise ValueError(f"tolerance {name} must be positive, got {value}")


DEFAULT = Tolerances()
