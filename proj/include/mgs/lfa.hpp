#pragma once

#include <array>
#include <complex>
#include <vector>

#include "mgs/grid.hpp"
#include "mgs/hierarchy.hpp"
#include "mgs/tg_analysis.hpp"
#include "mgs/transfer.hpp"

namespace mgs {

// Local Fourier analysis of two-grid iterations. All symbols work in scaled
// (weight-only) units: the stencil symbol omits the 1/h^2 factor, and the
// preconditioner is either the inverse diagonal (default, matching the
// constant-diagonal Jacobi preconditioner of the solvers) or the identity.

// Full stencil symbol including the mesh scale.
std::complex<double> symbol(const StencilOp& op, double t1, double t2);

// Weight-only symbol (real for 180-degree-symmetric stencils).
double symbol_scaled(const StencilOp& op, double t1, double t2);

// min/max ratio of |symbol| over sampled T^high.
double h_ellipticity(const StencilOp& op, int m = 64);

struct LfaOptions {
  ProlongKind prolong = ProlongKind::Bilinear;
  CoarseMode coarse_mode = CoarseMode::Rediscretize;
  bool jacobi_precond = true;  // Phi = D^{-1} (scalar); false: Phi = I in scaled units
};

// Eigenvalues of the 4x4 two-grid symbol W~_alpha at a low frequency
// (harmonics ordered (t1,t2), (t1~,t2), (t1,t2~), (t1~,t2~)). Throws on
// trivial angles (vanishing harmonic or coarse symbol).
std::array<double, 4> two_grid_eigenvalues(const StencilOp& op, const LfaOptions& opt,
                                           double alpha, double t1, double t2);

// Spectrum extremes of W_alpha over sampled T^low (m per axis over
// [-pi,pi)^2, trivial angles excluded).
SpectrumSummary w_alpha_spectrum(const StencilOp& op, const LfaOptions& opt,
                                 double alpha, int m);

double kappa_of_alpha(const StencilOp& op, const LfaOptions& opt, double alpha, int m);

struct KappaOptimum {
  double alpha = 1.0;
  double kappa = 1.0;
  SpectrumSummary spectrum;
  FixedCoefficients coeffs;  // history-optimal coefficients at alpha*
};

// Golden-section search for alpha in (0,1] minimizing kappa(alpha).
KappaOptimum minimize_kappa(const StencilOp& op, const LfaOptions& opt, int m,
                            double tol = 1e-4, bool with_history = true);

// Ideal two-grid factors from the h-ellipticity measure, kappa = 1/E_h:
// {(kappa-1)/(kappa+1), (sqrt(kappa)-1)/(sqrt(kappa)+1)}.
struct IdealFactors {
  double no_history = 0.0;
  double one_history = 0.0;
};
IdealFactors ideal_factors(const StencilOp& op, int m = 64);

// The "ordinary" recipe: c3 = 1, kappa = 1/E_h, lambda extremes
// from the diagonally scaled symbol over T^high.
FixedCoefficients ordinary_coefficients(const StencilOp& op, int m, bool with_history);

// Predicted asymptotic factor for given fixed coefficients: the companion
// spectral radius over the full LFA spectrum of W_alpha.
double predicted_factor(const StencilOp& op, const LfaOptions& opt,
                        const FixedCoefficients& c, int m);

}  // namespace mgs
