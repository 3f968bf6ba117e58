#pragma once

#include <cstdint>
#include <vector>

namespace mgs {

// Real-valued function on the interior of a uniform grid over the unit
// square with homogeneous Dirichlet boundary: any access outside the
// n x n interior reads zero. Mesh size is h = 1/(n+1). Storage is
// row-major with index(i,j) = i*n + j, i being the x index; the same
// flattening is used by the dense oracles.
class GridField {
 public:
  GridField() = default;
  GridField(int n, double h);

  static GridField constant(int n, double h, double value);
  // Uniform values in [0,1), seeded (used for reproducible initialization).
  static GridField random(int n, double h, std::uint64_t seed);

  int n() const { return n_; }
  double h() const { return h_; }
  int size() const { return n_ * n_; }

  double operator()(int i, int j) const { return v_[i * n_ + j]; }
  double& operator()(int i, int j) { return v_[i * n_ + j]; }

  // Dirichlet halo: zero outside the interior.
  double halo(int i, int j) const {
    if (i < 0 || j < 0 || i >= n_ || j >= n_) return 0.0;
    return v_[i * n_ + j];
  }

  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  double dot(const GridField& other) const;
  double norm() const;

  GridField& axpy(double a, const GridField& x);  // *this += a*x
  GridField& scale(double a);

 private:
  int n_ = 0;
  double h_ = 0.0;
  std::vector<double> v_;
};

GridField operator+(const GridField& a, const GridField& b);
GridField operator-(const GridField& a, const GridField& b);
GridField operator*(double a, const GridField& x);

// 3x3 constant-coefficient stencil for a discretized elliptic operator.
// The mesh factor is kept explicit in `scale` (1/h^2 for all operators in
// this project) so Fourier symbols can work in scaled (weight-only) units.
// weight(di,dj) multiplies u(i+di, j+dj).
struct StencilOp {
  double w[3][3] = {};
  double h = 0.0;
  double scale = 1.0;

  double weight(int di, int dj) const { return w[di + 1][dj + 1]; }
  double& weight(int di, int dj) { return w[di + 1][dj + 1]; }
  double center() const { return w[1][1]; }
};

// 9-point convolution with zero Dirichlet halo.
GridField apply_stencil(const StencilOp& op, const GridField& u);

// f - op*u
GridField residual(const StencilOp& op, const GridField& u, const GridField& f);

// Frobenius norm over interior values.
double norm_fro(const GridField& g);

}  // namespace mgs
