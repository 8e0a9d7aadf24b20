"""Desk-scale numerical laboratory for the quintic (mass-critical) gKdV equation.

The package provides a periodic pseudo-spectral substrate, the smoothed
low-pass multiplier and its associated smoothing operator, exact evaluators
for the multilinear symbols that drive the modified energies, the
resonant/non-resonant decomposition with Monte-Carlo bound verifiers, a
de-aliased integrating-factor RK4 solver, and experiment drivers that
persist reproducible records.
"""

from gkdvlab.grids import Grid, Field, Spectrum
from gkdvlab.multiplier import IParams
from gkdvlab.resonance import Thresholds

__all__ = ["Grid", "Field", "Spectrum", "IParams", "Thresholds"]
__version__ = "0.1.0"
