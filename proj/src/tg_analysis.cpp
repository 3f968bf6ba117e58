#include "mgs/tg_analysis.hpp"

#include <cmath>
#include <stdexcept>

namespace mgs {

Eigen::MatrixXd gamma_dense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Phi,
                            const Eigen::MatrixXd& P, const Eigen::MatrixXd& R,
                            const Eigen::MatrixXd& A_H, const FixedCoefficients& c) {
  const auto N = A.rows();
  Eigen::MatrixXd cgc = P * A_H.ldlt().solve(R * A);
  return (1.0 + c.c1) * Eigen::MatrixXd::Identity(N, N) -
         c.c2() * Phi * A - c.c3() * cgc;
}

Eigen::MatrixXd w_alpha_dense(const Eigen::MatrixXd& A, const Eigen::MatrixXd& Phi,
                              const Eigen::MatrixXd& P, const Eigen::MatrixXd& R,
                              const Eigen::MatrixXd& A_H, double alpha) {
  Eigen::MatrixXd cgc = P * A_H.ldlt().solve(R * A);
  return alpha * Phi * A + (1.0 - alpha) * cgc;
}

double quadratic_root_modulus(double b, double c1) {
  const double disc = b * b - 4.0 * c1;
  if (disc < 0.0) return std::sqrt(c1);
  const double root = std::sqrt(disc);
  return 0.5 * std::max(std::abs(b + root), std::abs(b - root));
}

double upsilon_spectral_radius(std::span<const double> b_values, double c1) {
  double r = 0.0;
  for (double b : b_values) r = std::max(r, quadratic_root_modulus(b, c1));
  return r;
}

double rbar_over_spectrum(std::span<const double> lambdas, double c1, double c23) {
  double r = 0.0;
  for (double lam : lambdas)
    r = std::max(r, quadratic_root_modulus(1.0 + c1 - c23 * lam, c1));
  return r;
}

FixedCoefficients optimal_coefficients(const SpectrumSummary& spec, bool with_history) {
  if (!(spec.lambda_min > 0.0) || spec.lambda_max < spec.lambda_min)
    throw std::invalid_argument("optimal_coefficients: need lambda_max >= lambda_min > 0");
  const double kappa = spec.kappa();
  FixedCoefficients c;
  c.alpha = 1.0;
  if (with_history) {
    const double sk = std::sqrt(kappa);
    const double rho = (sk - 1.0) / (sk + 1.0);
    c.c1 = rho * rho;
    c.c23 = 4.0 / (spec.lambda_min * (sk + 1.0) * (sk + 1.0));
    c.predicted_factor = rho;
  } else {
    c.c1 = 0.0;
    c.c23 = 2.0 / (spec.lambda_min * (kappa + 1.0));
    c.predicted_factor = (kappa - 1.0) / (kappa + 1.0);
  }
  return c;
}

double kappa_from_eigsplit(const EigSplit& s, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("kappa_from_eigsplit: alpha must be in (0,1]");
  const double num = std::max(alpha * s.eta_fmax, alpha * s.eta_cmax + 1.0 - alpha);
  const double den = std::min(alpha * s.eta_fmin, alpha * s.eta_cmin + 1.0 - alpha);
  return num / den;
}

AlphaOpt alpha_opt_eigsplit(const EigSplit& s) {
  if (!(s.eta_cmin <= s.eta_fmin && s.eta_cmax <= s.eta_fmax))
    throw std::invalid_argument("alpha_opt_eigsplit: requires eta_c extremes below eta_f extremes");
  AlphaOpt out;
  out.alpha = 1.0 / (1.0 + s.eta_fmin - s.eta_cmin);
  if (s.eta_fmax - s.eta_fmin >= s.eta_cmax - s.eta_cmin)
    out.kappa = s.eta_fmax / s.eta_fmin;
  else
    out.kappa = 1.0 + (s.eta_cmax - s.eta_cmin) / s.eta_fmin;
  return out;
}

std::vector<double> real_eigenvalues(const Eigen::MatrixXd& W) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(W, /*computeEigenvectors=*/false);
  std::vector<double> out(W.rows());
  for (int i = 0; i < W.rows(); ++i) out[i] = es.eigenvalues()[i].real();
  return out;
}

}  // namespace mgs
