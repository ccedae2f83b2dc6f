"""Planner parameter bundles."""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class SprintParams:
    """All SPRINT tuning knobs, held constant across a planning run.

    lam is the fixed local edge length; eta and eps_prog default to lam/2 and
    lam/10 when left as None.
    """

    lam: float = 0.05
    kappa: float = 0.3
    milestone_batch: int = 50
    # global region-selection weights
    w1_g: float = 1.0
    w2_g: float = 1.0
    # local gradient-ascent weights
    w1_l: float = 1.0
    w2_l: float = 1.0
    w3_l: float = 1.0
    # node-culling Gaussian shape
    c_base: float = 30.0
    sigma_slack: float = 2.0
    n_scale: float = 10.0
    eta: float | None = None
    ascent_iters: int = 2
    r_retry: int = 3
    k_obs: int = 10
    eps_prog: float | None = None
    max_local_samples: int = 2000
    max_total_samples: int = 200_000
    seed: int = 0

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if not 0.0 < self.kappa < 1.0:
            raise ValueError("kappa must lie in (0, 1)")
        if self.ascent_iters not in (1, 2):
            raise ValueError("ascent_iters must be 1 or 2")
        for name in ("milestone_batch", "r_retry", "k_obs", "max_local_samples", "max_total_samples"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        for name in ("w1_g", "w2_g", "w1_l", "w2_l", "w3_l", "c_base", "sigma_slack", "n_scale"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")

    @property
    def eta_eff(self) -> float:
        return self.eta if self.eta is not None else self.lam / 2.0

    @property
    def eps_prog_eff(self) -> float:
        return self.eps_prog if self.eps_prog is not None else self.lam / 10.0

    def with_overrides(self, **kwargs) -> "SprintParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class BaselineParams:
    """Parameters for the RRT / RRT-Connect baselines.

    step should equal SPRINT's lam when comparing sample counts.
    """

    step: float = 0.05
    goal_bias: float = 0.05
    max_samples: int = 200_000
    seed: int = 0

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("step must be positive")
        if not 0.0 <= self.goal_bias <= 1.0:
            raise ValueError("goal_bias must lie in [0, 1]")
