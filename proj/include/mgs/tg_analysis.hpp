#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace mgs {

// Fixed stepsizes for the three-direction iteration (history, preconditioned
// gradient, CGC) after the change of variables c23 = c2 + c3, alpha = c2/c23.
struct FixedCoefficients {
  double c1 = 0.0;
  double c23 = 0.0;
  double alpha = 1.0;
  double predicted_factor = 0.0;

  double c2() const { return alpha * c23; }
  double c3() const { return (1.0 - alpha) * c23; }
};

struct SpectrumSummary {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  double kappa() const { return lambda_max / lambda_min; }
  double mu() const { return (kappa() - 1.0) / (kappa() + 1.0); }
};

// Eigenvalue extremes of A split by membership of the eigenvectors in the
// prolongation range (fine = outside the range, coarse = inside).
struct EigSplit {
  double eta_fmax = 0.0, eta_fmin = 0.0;
  double eta_cmax = 0.0, eta_cmin = 0.0;
};

// Gamma = (1+c1) I - (c2 Phi + c3 P A_H^{-1} R) A.
Eigen::MatrixXd gamma_dense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Phi,
                            const Eigen::MatrixXd& P, const Eigen::MatrixXd& R,
                            const Eigen::MatrixXd& A_H, const FixedCoefficients& c);

// W_alpha = (alpha Phi + (1-alpha) P A_H^{-1} R) A.
Eigen::MatrixXd w_alpha_dense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Phi,
                              const Eigen::MatrixXd& P, const Eigen::MatrixXd& R,
                              const Eigen::MatrixXd& A_H, double alpha);

// Larger-modulus root of r^2 - b r + c1 = 0; modulus sqrt(c1) when the
// discriminant is negative (complex-conjugate pair).
double quadratic_root_modulus(double b, double c1);

// Spectral radius of the companion iteration over the given Gamma
// eigenvalues b: max over b of max(|r1|, |r2|).
double upsilon_spectral_radius(std::span<const double> b_values, double c1);

// Worst-case factor over a W_alpha spectrum for given (c1, c23):
// b(lambda) = 1 + c1 - c23 * lambda.
double rbar_over_spectrum(std::span<const double> lambdas, double c1, double c23);

// Closed-form optimal coefficients for given spectrum extremes.
// with_history: c1 = ((sqrt(k)-1)/(sqrt(k)+1))^2, c23 = 4/(lmin (sqrt(k)+1)^2),
// factor (sqrt(k)-1)/(sqrt(k)+1). Without: c1 = 0, c23 = 2/(lmin (k+1)),
// factor (k-1)/(k+1). alpha is left at 1 (caller overrides).
FixedCoefficients optimal_coefficients(const SpectrumSummary& spec, bool with_history);

// Closed-form condition number of W_alpha from the eigen-split.
double kappa_from_eigsplit(const EigSplit& s, double alpha);

// Optimal alpha = 1/(1 + eta_fmin - eta_cmin) and the branch-dependent
// optimal kappa; requires eta_cmin <= eta_fmin and eta_cmax <= eta_fmax.
struct AlphaOpt {
  double alpha = 1.0;
  double kappa = 1.0;
};
AlphaOpt alpha_opt_eigsplit(const EigSplit& s);

// All eigenvalues of W (real parts; W is similar to a symmetric matrix for
// the SPD inputs used here).
std::vector<double> real_eigenvalues(const Eigen::MatrixXd& W);

}  // namespace mgs
