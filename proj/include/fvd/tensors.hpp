#pragma once

#include <array>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "fvd/dual.hpp"

namespace fvd {

inline double real_part(double x) { return x; }
inline double real_part(const std::complex<double>& x) { return x.real(); }
template <class T> double real_part(const Dual<T>& x) { return real_part(x.a); }

// Symmetric 2nd-order tensor. Components are stored as [11, 22, 12] with the
// tensor shear value (no engineering factor). In 1D only [0] is used.
template <class T>
struct SymTensor2 {
  int dim = 2;
  std::array<T, 3> v{T(0.0), T(0.0), T(0.0)};

  SymTensor2() = default;
  explicit SymTensor2(int d) : dim(d) {}
  SymTensor2(int d, T s11, T s22 = T(0.0), T s12 = T(0.0)) : dim(d), v{s11, s22, s12} {
    if (d == 1) { v[1] = T(0.0); v[2] = T(0.0); }
  }

  template <class U> SymTensor2<U> cast() const {
    SymTensor2<U> o(dim);
    for (int i = 0; i < 3; ++i) o.v[i] = U(v[i]);
    return o;
  }

  static SymTensor2 identity(int d) { return d == 1 ? SymTensor2(1, T(1.0)) : SymTensor2(2, T(1.0), T(1.0), T(0.0)); }

  int size() const { return dim == 1 ? 1 : 3; }
  T& operator[](int i) { return v[i]; }
  const T& operator[](int i) const { return v[i]; }
  T operator()(int i, int j) const { return i == j ? v[i] : v[2]; }

  SymTensor2& operator+=(const SymTensor2& o) { for (int i = 0; i < 3; ++i) v[i] += o.v[i]; return *this; }
  SymTensor2& operator-=(const SymTensor2& o) { for (int i = 0; i < 3; ++i) v[i] -= o.v[i]; return *this; }
  template <class S> SymTensor2& operator*=(const S& s) { for (auto& x : v) x = x * s; return *this; }

  friend SymTensor2 operator+(SymTensor2 a, const SymTensor2& b) { return a += b; }
  friend SymTensor2 operator-(SymTensor2 a, const SymTensor2& b) { return a -= b; }
  template <class S> friend SymTensor2 operator*(SymTensor2 a, const S& s) { return a *= s; }
  template <class S> friend SymTensor2 operator*(const S& s, SymTensor2 a) { return a *= s; }

  // engineering Voigt view [11, 22, 2·12]; used only in contractions with 4th order tensors
  std::array<T, 3> engineering() const { return {v[0], v[1], T(2.0) * v[2]}; }
  static SymTensor2 from_engineering(int d, const std::array<T, 3>& e) {
    return SymTensor2(d, e[0], e[1], e[2] * 0.5);
  }
  std::array<T, 3> voigt() const { return v; }
  static SymTensor2 from_voigt(int d, const std::array<T, 3>& x) { return SymTensor2(d, x[0], x[1], x[2]); }
};

// In-plane determinant and inverse. Out-of-plane conventions live in material.
template <class T> T det(const SymTensor2<T>& a) {
  return a.dim == 1 ? a[0] : a[0] * a[1] - a[2] * a[2];
}
template <class T> T trace(const SymTensor2<T>& a) { return a.dim == 1 ? a[0] : a[0] + a[1]; }

template <class T> SymTensor2<T> inverse(const SymTensor2<T>& a) {
  if (a.dim == 1) return SymTensor2<T>(1, T(1.0) / a[0]);
  T d = det(a);
  return SymTensor2<T>(2, a[1] / d, a[0] / d, -a[2] / d);
}

// S:E with tensor components (shear counted twice)
template <class T, class U> auto double_dot(const SymTensor2<T>& a, const SymTensor2<U>& b) {
  if (a.dim == 1) return a[0] * b[0];
  return a[0] * b[0] + a[1] * b[1] + 2.0 * a[2] * b[2];
}

// Fourth-order tensor as a Voigt matrix mapping engineering strain to stress.
template <class T>
struct Tensor4 {
  int dim = 2;
  std::array<std::array<T, 3>, 3> m{};

  Tensor4() { for (auto& r : m) r.fill(T(0.0)); }
  explicit Tensor4(int d) : dim(d) { for (auto& r : m) r.fill(T(0.0)); }

  int size() const { return dim == 1 ? 1 : 3; }
  T& operator()(int i, int j) { return m[i][j]; }
  const T& operator()(int i, int j) const { return m[i][j]; }

  // A : E, E given as tensor components
  template <class U> auto contract(const SymTensor2<U>& e) const {
    using R = decltype(T() * U());
    SymTensor2<R> out(dim);
    auto ev = e.engineering();
    for (int i = 0; i < size(); ++i) {
      R s = R(0.0);
      for (int j = 0; j < size(); ++j) s += m[i][j] * ev[j];
      out[i] = s;
    }
    return out;
  }
  // E : A : E
  template <class U> auto quadratic(const SymTensor2<U>& e) const {
    using R = decltype(T() * U());
    auto ev = e.engineering();
    R s = R(0.0);
    for (int i = 0; i < size(); ++i)
      for (int j = 0; j < size(); ++j) s += ev[i] * m[i][j] * ev[j];
    return s;
  }
};

// Deformation gradient or displacement gradient, dim×dim (1D uses (0,0)).
template <class T>
struct Mat2 {
  int dim = 2;
  std::array<std::array<T, 2>, 2> a{};

  Mat2() { for (auto& r : a) r.fill(T(0.0)); }
  explicit Mat2(int d) : dim(d) { for (auto& r : a) r.fill(T(0.0)); }
  static Mat2 identity(int d) {
    Mat2 m(d);
    for (int i = 0; i < d; ++i) m.a[i][i] = T(1.0);
    return m;
  }
  T& operator()(int i, int j) { return a[i][j]; }
  const T& operator()(int i, int j) const { return a[i][j]; }
};

template <class T> using DeformationGradient = Mat2<T>;

template <class T> T det(const Mat2<T>& f) {
  return f.dim == 1 ? f(0, 0) : f(0, 0) * f(1, 1) - f(0, 1) * f(1, 0);
}

template <class T> SymTensor2<T> green_lagrange(const Mat2<T>& g) {
  const int d = g.dim;
  SymTensor2<T> e(d);
  auto comp = [&](int i, int j) {
    T s = 0.5 * (g(i, j) + g(j, i));
    for (int k = 0; k < d; ++k) s += 0.5 * g(k, i) * g(k, j);
    return s;
  };
  e[0] = comp(0, 0);
  if (d == 2) {
    e[1] = comp(1, 1);
    e[2] = comp(0, 1);
  }
  return e;
}

template <class T> Mat2<T> deformation_gradient(const Mat2<T>& grad_u) {
  Mat2<T> f = grad_u;
  for (int i = 0; i < f.dim; ++i) f(i, i) += T(1.0);
  return f;
}

// In-plane C = 2E + I.
template <class T> SymTensor2<T> right_cauchy_green(const SymTensor2<T>& e) {
  SymTensor2<T> c = e * 2.0;
  c[0] += T(1.0);
  if (e.dim == 2) c[1] += T(1.0);
  return c;
}

template <class T> Eigen::Matrix<T, 3, 4> build_Fbar(const Mat2<T>& f) {
  if (f.dim != 2) throw std::invalid_argument("build_Fbar: 2D deformation gradient required");
  Eigen::Matrix<T, 3, 4> m = Eigen::Matrix<T, 3, 4>::Zero();
  m(0, 0) = f(0, 0); m(0, 2) = f(1, 0);
  m(1, 1) = f(0, 1); m(1, 3) = f(1, 1);
  m(2, 0) = f(0, 1); m(2, 1) = f(0, 0); m(2, 2) = f(1, 1); m(2, 3) = f(1, 0);
  return m;
}

template <class T> Eigen::Matrix<T, 4, 4> build_Sbar(const SymTensor2<T>& s) {
  if (s.dim != 2) throw std::invalid_argument("build_Sbar: 2D stress required");
  Eigen::Matrix<T, 4, 4> m = Eigen::Matrix<T, 4, 4>::Zero();
  for (int b = 0; b < 2; ++b) {
    m(2 * b, 2 * b) = s[0];
    m(2 * b, 2 * b + 1) = s[2];
    m(2 * b + 1, 2 * b) = s[2];
    m(2 * b + 1, 2 * b + 1) = s[1];
  }
  return m;
}

}  // namespace fvd
