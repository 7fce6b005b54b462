"""Radial-index operator toolkit for Laguerre-Gauss beams.

Subpackages by capability:

  specfun   - Laguerre polynomials (real/complex argument), Bessel J,
              Gauss-Legendre and Gauss-Laguerre rules
  lgmode    - closed-form paraxial LG fields, beam geometry, grids, norms,
              analytic partial derivatives
  paraxops  - transverse operators (Lz, Laplacian, hyperbolic momentum,
              radial-index operators), dilations, commutators
  analysis  - expectation values, figure-level curves, overlap/crosstalk
              matrices, modal decomposition
  momentum  - exact and paraxial momentum-space wavefunctions and the
              radial momentum operators, hermiticity analysis
  exactwave - Bessel-basis exact Maxwell solutions, Riemann-Silberstein
              fields, residual checks, closed-form chi and its synthesis
  cli       - `lg-radial` command line front end
"""

from .constants import C_LIGHT, DEFAULT_WAIST, DEFAULT_WAVELENGTH, DEFAULT_WAVENUMBER
from .errors import DiagnosticError, GridError, QuadratureConvergenceError
from .lgmode import (BeamGeometry, FieldGrid, LGParams, PolarGrid,
                     beam_geometry, lg_field, lg_partials, norm,
                     quadrature_polar_grid, sample, uniform_polar_grid)
from .paraxops import (AppliedField, Operator, apply_to_field, apply_to_mode,
                       commutator_residual, dilation_check, eigen_residual)
from .analysis import (Decomposition, ExpectationSeries, OverlapMatrix,
                       decompose, expectation, overlap, overlap_matrix,
                       ph_vs_w0, ph_vs_z)
from .momentum import (ExactMomentumParams, apply_nk, apply_nk_paraxial,
                       hermiticity_defect, nk_polar, plusminus_to_polar,
                       polar_to_plusminus, psi_exact, psi_paraxial)
from .exactwave import (BesselModeParams, RSField, SpacetimePoint, chi_bessel,
                        chi_closed_form, fit_global_scale, maxwell_residual,
                        rs_bessel_field, synthesize_lg, wave_residual)

__version__ = "0.1.0"
