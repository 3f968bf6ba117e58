#include "mgs/lfa.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mgs {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTrivialTol = 1e-12;

// 1D symbols of the transfers, normalized to 1 at theta = 0 so that the
// prolongation coefficients are the exact Fourier coefficients of P applied
// to a coarse mode and R applied to a fine mode.
double restrict_symbol_1d(double t) { return 0.5 * (1.0 + std::cos(t)); }

double prolong_symbol_1d(double t, ProlongKind kind) {
  if (kind == ProlongKind::Bilinear) return 0.5 * (1.0 + std::cos(t));
  return 0.5 * (1.0 + 1.125 * std::cos(t) - 0.125 * std::cos(3.0 * t));
}

double shift_pi(double t) { return t >= 0.0 ? t - kPi : t + kPi; }

// The 4x4 two-grid symbol eigenvalues; returns false on trivial angles.
bool eigs_at(const StencilOp& op, const LfaOptions& opt, double alpha,
             double t1, double t2, std::array<double, 4>& out) {
  const double th1[2] = {t1, shift_pi(t1)};
  const double th2[2] = {t2, shift_pi(t2)};
  // Harmonic order: (t1,t2), (t1~,t2), (t1,t2~), (t1~,t2~).
  double a[4], rt[4], pt[4];
  double amax = 0.0;
  for (int k = 0; k < 4; ++k) {
    const double u = th1[k & 1], v = th2[k >> 1];
    a[k] = symbol_scaled(op, u, v);
    rt[k] = restrict_symbol_1d(u) * restrict_symbol_1d(v);
    pt[k] = prolong_symbol_1d(u, opt.prolong) * prolong_symbol_1d(v, opt.prolong);
    amax = std::max(amax, std::abs(a[k]));
  }
  for (int k = 0; k < 4; ++k)
    if (std::abs(a[k]) <= kTrivialTol * amax || amax == 0.0) return false;

  double aH;
  if (opt.coarse_mode == CoarseMode::Rediscretize) {
    aH = 0.25 * symbol_scaled(op, 2.0 * t1, 2.0 * t2);
  } else {
    aH = 0.0;
    for (int k = 0; k < 4; ++k) aH += rt[k] * a[k] * pt[k];
  }
  if (std::abs(aH) <= kTrivialTol * amax) return false;

  const double phi = opt.jacobi_precond ? 1.0 / op.center() : 1.0;
  Eigen::Matrix4d W;
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      double cgc = pt[j] * rt[k] * a[k] / aH;
      W(j, k) = (1.0 - alpha) * cgc + (j == k ? alpha * phi * a[k] : 0.0);
    }
  Eigen::EigenSolver<Eigen::Matrix4d> es(W, /*computeEigenvectors=*/false);
  for (int k = 0; k < 4; ++k) out[k] = es.eigenvalues()[k].real();
  return true;
}

template <typename Fn>
void for_each_low_frequency(int m, Fn&& fn) {
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      fn(-kPi / 2 + kPi * i / m, -kPi / 2 + kPi * j / m);
}

}  // namespace

std::complex<double> symbol(const StencilOp& op, double t1, double t2) {
  std::complex<double> s = 0.0;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      s += op.weight(di, dj) * std::exp(std::complex<double>(0.0, di * t1 + dj * t2));
  return op.scale * s;
}

double symbol_scaled(const StencilOp& op, double t1, double t2) {
  double s = 0.0;
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      s += op.weight(di, dj) * std::cos(di * t1 + dj * t2);
  return s;
}

double h_ellipticity(const StencilOp& op, int m) {
  if (m < 4) throw std::invalid_argument("h_ellipticity: m too small");
  double lo = 0.0, hi = 0.0;
  bool first = true;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double t1 = -kPi + 2.0 * kPi * i / m;
      const double t2 = -kPi + 2.0 * kPi * j / m;
      if (std::abs(t1) < kPi / 2 && std::abs(t2) < kPi / 2) continue;
      const double s = std::abs(symbol_scaled(op, t1, t2));
      if (first) {
        lo = hi = s;
        first = false;
      } else {
        lo = std::min(lo, s);
        hi = std::max(hi, s);
      }
    }
  if (hi <= 0.0) throw std::runtime_error("h_ellipticity: symbol vanishes on T^high");
  return lo / hi;
}

std::array<double, 4> two_grid_eigenvalues(const StencilOp& op, const LfaOptions& opt,
                                           double alpha, double t1, double t2) {
  std::array<double, 4> out;
  if (!eigs_at(op, opt, alpha, t1, t2, out))
    throw std::invalid_argument("two_grid_eigenvalues: trivial angle");
  return out;
}

SpectrumSummary w_alpha_spectrum(const StencilOp& op, const LfaOptions& opt,
                                 double alpha, int m) {
  SpectrumSummary spec;
  bool first = true;
  std::array<double, 4> eigs;
  for_each_low_frequency(m, [&](double t1, double t2) {
    if (!eigs_at(op, opt, alpha, t1, t2, eigs)) return;
    for (double lam : eigs) {
      if (first) {
        spec.lambda_min = spec.lambda_max = lam;
        first = false;
      } else {
        spec.lambda_min = std::min(spec.lambda_min, lam);
        spec.lambda_max = std::max(spec.lambda_max, lam);
      }
    }
  });
  if (first) throw std::runtime_error("w_alpha_spectrum: no usable frequencies");
  return spec;
}

double kappa_of_alpha(const StencilOp& op, const LfaOptions& opt, double alpha, int m) {
  return w_alpha_spectrum(op, opt, alpha, m).kappa();
}

KappaOptimum minimize_kappa(const StencilOp& op, const LfaOptions& opt, int m,
                            double tol, bool with_history) {
  // kappa(alpha) blows up at alpha -> 0+ and is unimodal on (0,1] for the
  // spectra arising here; plain golden-section suffices.
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 1e-3, b = 1.0;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = kappa_of_alpha(op, opt, x1, m), f2 = kappa_of_alpha(op, opt, x2, m);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = kappa_of_alpha(op, opt, x1, m);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = kappa_of_alpha(op, opt, x2, m);
    }
  }
  KappaOptimum out;
  out.alpha = 0.5 * (a + b);
  out.spectrum = w_alpha_spectrum(op, opt, out.alpha, m);
  out.kappa = out.spectrum.kappa();
  out.coeffs = optimal_coefficients(out.spectrum, with_history);
  out.coeffs.alpha = out.alpha;
  return out;
}

IdealFactors ideal_factors(const StencilOp& op, int m) {
  const double kappa = 1.0 / h_ellipticity(op, m);
  IdealFactors f;
  f.no_history = (kappa - 1.0) / (kappa + 1.0);
  const double sk = std::sqrt(kappa);
  f.one_history = (sk - 1.0) / (sk + 1.0);
  return f;
}

FixedCoefficients ordinary_coefficients(const StencilOp& op, int m, bool with_history) {
  // Diagonally scaled symbol over T^high; c3 is pinned to 1 and c2 alone
  // takes the closed-form stepsize, hence alpha = c2/(c2+1).
  SpectrumSummary spec;
  bool first = true;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double t1 = -kPi + 2.0 * kPi * i / m;
      const double t2 = -kPi + 2.0 * kPi * j / m;
      if (std::abs(t1) < kPi / 2 && std::abs(t2) < kPi / 2) continue;
      const double s = symbol_scaled(op, t1, t2) / op.center();
      if (first) {
        spec.lambda_min = spec.lambda_max = s;
        first = false;
      } else {
        spec.lambda_min = std::min(spec.lambda_min, s);
        spec.lambda_max = std::max(spec.lambda_max, s);
      }
    }
  FixedCoefficients base = optimal_coefficients(spec, with_history);
  const double c2 = base.c23;
  FixedCoefficients c;
  c.c1 = base.c1;
  c.c23 = c2 + 1.0;
  c.alpha = c2 / (c2 + 1.0);
  c.predicted_factor = base.predicted_factor;
  return c;
}

double predicted_factor(const StencilOp& op, const LfaOptions& opt,
                        const FixedCoefficients& c, int m) {
  std::vector<double> lambdas;
  lambdas.reserve(size_t(m) * m * 4);
  std::array<double, 4> eigs;
  for_each_low_frequency(m, [&](double t1, double t2) {
    if (!eigs_at(op, opt, c.alpha, t1, t2, eigs)) return;
    lambdas.insert(lambdas.end(), eigs.begin(), eigs.end());
  });
  if (lambdas.empty()) throw std::runtime_error("predicted_factor: no usable frequencies");
  return rbar_over_spectrum(lambdas, c.c1, c.c23);
}

}  // namespace mgs
