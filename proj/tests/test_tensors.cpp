#include <doctest.h>

#include <complex>
#include <random>

#include "fvd/tensors.hpp"

using namespace fvd;

TEST_CASE("green_lagrange of simple gradients") {
  Mat2<double> g(2);
  auto e = green_lagrange(g);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == 0.0);
  CHECK(e[2] == 0.0);
  g(0, 0) = 0.1;
  e = green_lagrange(g);
  CHECK(e[0] == doctest::Approx(0.105).epsilon(1e-15));
  CHECK(e[1] == 0.0);
  CHECK(e[2] == 0.0);
}

TEST_CASE("green_lagrange is symmetric and second order for infinitesimal rotations") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> U(-0.3, 0.3);
  for (int k = 0; k < 20; ++k) {
    Mat2<double> g(2);
    g(0, 0) = U(rng); g(0, 1) = U(rng); g(1, 0) = U(rng); g(1, 1) = U(rng);
    Mat2<double> f = deformation_gradient(g);
    auto e = green_lagrange(g);
    // E12 from FᵀF directly
    const double c12 = f(0, 0) * f(0, 1) + f(1, 0) * f(1, 1);
    CHECK(e[2] == doctest::Approx(0.5 * c12).epsilon(1e-14));
  }
  for (double w : {1e-2, 1e-3, 1e-4}) {
    Mat2<double> g(2);
    g(0, 1) = w;
    g(1, 0) = -w;
    auto e = green_lagrange(g);
    CHECK(std::abs(e[0]) <= w * w);
    CHECK(std::abs(e[2]) <= w * w);
  }
}

TEST_CASE("right_cauchy_green round trip") {
  auto c = right_cauchy_green(SymTensor2<double>(1, 0.105));
  CHECK(c[0] == doctest::Approx(1.21).epsilon(1e-15));
  SymTensor2<double> e(2, 0.01, -0.02, 0.005);
  auto c2 = right_cauchy_green(e);
  CHECK((c2[0] - 1.0) * 0.5 == doctest::Approx(e[0]).epsilon(1e-14));
  CHECK((c2[1] - 1.0) * 0.5 == doctest::Approx(e[1]).epsilon(1e-14));
  CHECK(c2[2] * 0.5 == doctest::Approx(e[2]).epsilon(1e-14));
  auto id = right_cauchy_green(SymTensor2<double>(2));
  CHECK(id[0] == 1.0);
  CHECK(id[1] == 1.0);
  CHECK(id[2] == 0.0);
}

TEST_CASE("Fbar layout") {
  auto f = build_Fbar(Mat2<double>::identity(2));
  Eigen::Matrix<double, 3, 4> ref;
  ref << 1, 0, 0, 0, 0, 0, 0, 1, 0, 1, 1, 0;
  CHECK(f == ref);
  Mat2<double> d(2);
  d(0, 0) = 2;
  d(1, 1) = 3;
  ref << 2, 0, 0, 0, 0, 0, 0, 3, 0, 2, 3, 0;
  CHECK(build_Fbar(d) == ref);
  CHECK_THROWS_AS(build_Fbar(Mat2<double>::identity(1)), std::invalid_argument);
}

TEST_CASE("Sbar layout and symmetry") {
  Eigen::Matrix4d ref;
  ref << 1, 3, 0, 0, 3, 2, 0, 0, 0, 0, 1, 3, 0, 0, 3, 2;
  CHECK(build_Sbar(SymTensor2<double>(2, 1, 2, 3)) == ref);
  CHECK(build_Sbar(SymTensor2<double>::identity(2)) == Eigen::Matrix4d::Identity());
  std::mt19937 rng(5);
  std::normal_distribution<double> N;
  for (int k = 0; k < 10; ++k) {
    auto s = build_Sbar(SymTensor2<double>(2, N(rng), N(rng), N(rng)));
    CHECK(s == s.transpose());
  }
}

TEST_CASE("voigt and engineering views round trip") {
  SymTensor2<double> a(2, 1.5, -2.25, 0.375);
  auto b = SymTensor2<double>::from_voigt(2, a.voigt());
  auto c = SymTensor2<double>::from_engineering(2, a.engineering());
  for (int i = 0; i < 3; ++i) {
    CHECK(b[i] == a[i]);
    CHECK(c[i] == a[i]);
  }
  CHECK(a.engineering()[2] == 0.75);
}

TEST_CASE("det, inverse and double contraction") {
  SymTensor2<double> c(2, 2.0, 3.0, 0.5);
  CHECK(det(c) == doctest::Approx(5.75));
  auto ci = inverse(c);
  // C·C⁻¹ = I
  CHECK(c[0] * ci[0] + c[2] * ci[2] == doctest::Approx(1.0));
  CHECK(c[2] * ci[0] + c[1] * ci[2] == doctest::Approx(0.0));
  CHECK(double_dot(c, SymTensor2<double>::identity(2)) == doctest::Approx(5.0));
  Tensor4<double> I4(2);
  I4(0, 0) = I4(1, 1) = 1.0;
  I4(2, 2) = 0.5;
  auto r = I4.contract(c);
  for (int i = 0; i < 3; ++i) CHECK(r[i] == doctest::Approx(c[i]));
  CHECK(I4.quadratic(c) == doctest::Approx(double_dot(c, c)));
}

TEST_CASE("complex scalars with zero imaginary part give identical results") {
  using cd = std::complex<double>;
  Mat2<double> g(2);
  g(0, 0) = 0.02; g(0, 1) = -0.01; g(1, 0) = 0.03; g(1, 1) = -0.015;
  Mat2<cd> gc(2);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) gc(i, j) = g(i, j);
  auto e = green_lagrange(g);
  auto ec = green_lagrange(gc);
  auto ci = inverse(right_cauchy_green(e));
  auto cic = inverse(right_cauchy_green(ec));
  for (int i = 0; i < 3; ++i) {
    CHECK(ec[i].real() == e[i]);
    CHECK(ec[i].imag() == 0.0);
    CHECK(cic[i].real() == ci[i]);
  }
}
