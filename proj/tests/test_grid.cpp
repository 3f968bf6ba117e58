#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "mgs/dense.hpp"
#include "mgs/grid.hpp"
#include "mgs/problems.hpp"

using namespace mgs;

namespace {
constexpr double kPi = 3.14159265358979323846;

GridField sine_field(int n) {
  const double h = 1.0 / (n + 1);
  GridField u(n, h);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      u(i, j) = std::sin(kPi * (i + 1) * h) * std::sin(kPi * (j + 1) * h);
  return u;
}

GridField random_field(int n, std::mt19937_64& rng) {
  GridField u(n, 1.0 / (n + 1));
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (double& v : u.data()) v = uni(rng);
  return u;
}
}  // namespace

TEST_CASE("apply_stencil on the zero field is zero") {
  StencilOp op = laplacian_stencil(1.0 / 16);
  GridField u(15, op.h);
  CHECK(norm_fro(apply_stencil(op, u)) == 0.0);
}

TEST_CASE("apply_stencil approximates -Laplacian of a sine mode at O(h^2)") {
  double prev_err = 0.0;
  for (int k = 0; k < 3; ++k) {
    const int n = 63 << k;
    StencilOp op = laplacian_stencil(1.0 / (n + 1));
    GridField u = sine_field(n);
    GridField Au = apply_stencil(op, u);
    double err = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        err = std::max(err, std::fabs(Au(i, j) - 2.0 * kPi * kPi * u(i, j)));
    if (k > 0) CHECK(err < 0.35 * prev_err);  // ~factor 4 per refinement
    prev_err = err;
  }
}

TEST_CASE("apply_stencil impulse response images the stencil weights") {
  StencilOp op = rotated_stencil(1e-2, 0.3, 1.0 / 8);
  GridField u(7, op.h);
  u(3, 4) = 1.0;
  GridField Au = apply_stencil(op, u);
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      CHECK(Au(3 + di, 4 + dj) ==
            doctest::Approx(op.scale * op.weight(-di, -dj)).epsilon(1e-14));
}

TEST_CASE("residual trivial cases and dense oracle") {
  StencilOp op = laplacian_stencil(1.0 / 16);
  std::mt19937_64 rng(7);
  GridField u = random_field(15, rng);
  GridField f = random_field(15, rng);

  GridField r0 = residual(op, GridField(15, op.h), f);
  CHECK((r0 - f).norm() == 0.0);

  Eigen::MatrixXd A = assemble_dense(op, 15);
  Eigen::VectorXd expected = flatten(f) - A * flatten(u);
  CHECK((flatten(residual(op, u, f)) - expected).norm() < 1e-10);

  GridField x = unflatten(A.llt().solve(flatten(f)), 15, op.h);
  CHECK(norm_fro(residual(op, x, f)) < 1e-9);
}

TEST_CASE("norm_fro basics") {
  GridField z(4, 0.2);
  CHECK(norm_fro(z) == 0.0);
  z(1, 2) = 3.0;
  CHECK(norm_fro(z) == doctest::Approx(3.0));
  GridField ones = GridField::constant(2, 1.0 / 3, 1.0);
  CHECK(norm_fro(ones) == doctest::Approx(2.0));
}

TEST_CASE("assemble_dense matches the 5-point Laplacian at n=2") {
  const double h = 1.0 / 3;
  StencilOp op = laplacian_stencil(h);
  Eigen::MatrixXd A = assemble_dense(op, 2);
  const double s = 1.0 / (h * h);
  CHECK(A(0, 0) == doctest::Approx(4.0 * s));
  CHECK(A(0, 1) == doctest::Approx(-s));  // (0,0)-(0,1) adjacency
  CHECK(A(0, 2) == doctest::Approx(-s));  // (0,0)-(1,0) adjacency
  CHECK(A(0, 3) == doctest::Approx(0.0));
  CHECK((A - A.transpose()).norm() == 0.0);
}

TEST_CASE("assemble_dense is symmetric positive definite for the model stencils") {
  for (auto [eps, phi] : {std::pair{1.0, 0.0}, {1e-3, kPi / 4}, {1e-4, kPi / 6}}) {
    StencilOp op = rotated_stencil(eps, phi, 1.0 / 16);
    Eigen::MatrixXd A = assemble_dense(op, 15);
    CHECK((A - A.transpose()).norm() < 1e-12 * A.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("assemble_dense columns are impulse responses of apply_stencil") {
  StencilOp op = rotated_stencil(0.5, 0.7, 1.0 / 8);
  Eigen::MatrixXd A = assemble_dense(op, 7);
  for (int col : {0, 10, 24, 48}) {
    GridField e(7, op.h);
    e.data()[col] = 1.0;
    CHECK((A.col(col) - flatten(apply_stencil(op, e))).norm() < 1e-12);
  }
}

TEST_CASE("apply_stencil is linear and agrees with the dense oracle on random fields") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> uni(-2.0, 2.0);
  for (int n = 2; n <= 16; ++n) {
    StencilOp op = rotated_stencil(0.1, 0.2, 1.0 / (n + 1));
    Eigen::MatrixXd A = assemble_dense(op, n);
    for (int rep = 0; rep < 8; ++rep) {
      GridField u = random_field(n, rng), v = random_field(n, rng);
      const double a = uni(rng), b = uni(rng);
      GridField lin = apply_stencil(op, a * u + b * v);
      GridField sep = a * apply_stencil(op, u) + b * apply_stencil(op, v);
      CHECK((lin - sep).norm() < 1e-11 * (1.0 + lin.norm()));
      CHECK((flatten(apply_stencil(op, u)) - A * flatten(u)).norm() <
            1e-10 * (1.0 + A.norm()));
    }
  }
}

TEST_CASE("assemble_dense rejects grids above the guard") {
  StencilOp op = laplacian_stencil(1.0 / 128);
  CHECK_THROWS(assemble_dense(op, 127));
}
