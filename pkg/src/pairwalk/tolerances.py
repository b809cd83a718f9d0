"""Numerical tolerances, threaded explicitly through every analysis."""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass, replace

PROFILE_ENV = "PAIRWALK_TOLERANCE_PROFILE"


@dataclass(frozen=True)
class Tolerances:
    group_tol: float | None = None  # None: 1e-8 * (1 + spectral radius)
    support_tol: float = 1e-8
    sc_tol: float = 1e-7
    fid_tol: float = 1e-7
    int_tol: float = 1e-6
    max_den: int = 10**6

    def __post_init__(self):
        for name in ("group_tol", "support_tol", "sc_tol", "fid_tol", "int_tol"):
            v = getattr(self, name)
            if v is None and name == "group_tol":
                continue
            if not (0 < v < 1e-2):
                raise ValueError(f"{name} must lie in (0, 1e-2), got {v}")
        if int(self.max_den) != self.max_den or self.max_den < 1:
            raise ValueError(f"max_den must be a positive integer, got {self.max_den}")

    def group_tol_for(self, radius: float) -> float:
        return self.group_tol if self.group_tol is not None else 1e-8 * (1.0 + radius)

    def with_(self, **kw) -> "Tolerances":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})

    def as_dict(self) -> dict:
        return asdict(self)


PROFILES = {
    "default": Tolerances(),
    "strict": Tolerances(support_tol=1e-10, sc_tol=1e-9, fid_tol=1e-9, int_tol=1e-8),
}

DEFAULT = PROFILES["default"]


def from_profile(name: str | None = None) -> Tolerances:
    """Tolerances for ``name``, or for the profile named in the environment."""
    name = name or os.environ.get(PROFILE_ENV, "default")
    try:
        return PROFILES[name]
    except KeyError:
        raise ValueError(f"unknown tolerance profile {name!r}; choose from {sorted(PROFILES)}") from None
