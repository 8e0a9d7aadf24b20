"""Exception types shared across the package."""


class GkdvError(Exception):
    """Base class for package errors."""


class ConfigError(GkdvError):
    """Invalid configuration value or unknown key."""


class AliasingError(GkdvError):
    """Spectral content would not survive a resampling operation."""


class BudgetError(GkdvError):
    """A combinatorial evaluation would exceed its configured cost guard."""


class BlowUpError(GkdvError):
    """The solution amplitude crossed the configured blow-up cap."""

    def __init__(self, t: float, max_abs: float, cap: float):
        self.t = t
        self.max_abs = max_abs
        self.cap = cap
        super().__init__(
            f"|u| reached {max_abs:.3e} at t={t:.6g} (cap {cap:.3e}); "
            "focusing data above the ground-state mass can blow up"
        )


class RealityError(GkdvError):
    """A quantity that must be real carried a non-negligible imaginary residue."""
