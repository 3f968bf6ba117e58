#include "mgs/grid.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace mgs {

GridField::GridField(int n, double h) : n_(n), h_(h), v_(size_t(n) * n, 0.0) {
  if (n < 1) throw std::invalid_argument("GridField: n must be >= 1");
  if (h <= 0.0) throw std::invalid_argument("GridField: h must be > 0");
}

GridField GridField::constant(int n, double h, double value) {
  GridField g(n, h);
  std::fill(g.v_.begin(), g.v_.end(), value);
  return g;
}

GridField GridField::random(int n, double h, std::uint64_t seed) {
  GridField g(n, h);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (auto& x : g.v_) x = dist(rng);
  return g;
}

double GridField::dot(const GridField& other) const {
  if (other.n_ != n_) throw std::invalid_argument("GridField::dot: size mismatch");
  double s = 0.0;
  for (size_t k = 0; k < v_.size(); ++k) s += v_[k] * other.v_[k];
  return s;
}

double GridField::norm() const { return std::sqrt(dot(*this)); }

GridField& GridField::axpy(double a, const GridField& x) {
  if (x.n_ != n_) throw std::invalid_argument("GridField::axpy: size mismatch");
  for (size_t k = 0; k < v_.size(); ++k) v_[k] += a * x.v_[k];
  return *this;
}

GridField& GridField::scale(double a) {
  for (auto& x : v_) x *= a;
  return *this;
}

GridField operator+(const GridField& a, const GridField& b) {
  GridField r = a;
  r.axpy(1.0, b);
  return r;
}

GridField operator-(const GridField& a, const GridField& b) {
  GridField r = a;
  r.axpy(-1.0, b);
  return r;
}

GridField operator*(double a, const GridField& x) {
  GridField r = x;
  r.scale(a);
  return r;
}

GridField apply_stencil(const StencilOp& op, const GridField& u) {
  if (op.h != u.h())
    throw std::invalid_argument("apply_stencil: mesh size mismatch");
  const int n = u.n();
  GridField out(n, u.h());
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int di = -1; di <= 1; ++di)
        for (int dj = -1; dj <= 1; ++dj)
          s += op.weight(di, dj) * u.halo(i + di, j + dj);
      out(i, j) = op.scale * s;
    }
  }
  return out;
}

GridField residual(const StencilOp& op, const GridField& u, const GridField& f) {
  if (u.n() != f.n()) throw std::invalid_argument("residual: size mismatch");
  GridField r = apply_stencil(op, u);
  r.scale(-1.0);
  r.axpy(1.0, f);
  return r;
}

double norm_fro(const GridField& g) { return g.norm(); }

}  // namespace mgs
