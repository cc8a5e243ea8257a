#pragma once

#include <cmath>
#include <complex>
#include <type_traits>

namespace fvd {

// Forward-mode dual number a + b·ε with ε² = 0. The value type may itself
// be complex, which lets a directional derivative live inside a complex-step
// perturbation without the two cancelling each other.
template <class T>
struct Dual {
  T a{};
  T b{};

  constexpr Dual() = default;
  constexpr Dual(T value) : a(value) {}  // NOLINT: implicit on purpose
  constexpr Dual(T value, T deriv) : a(value), b(deriv) {}

  Dual& operator+=(const Dual& o) { a += o.a; b += o.b; return *this; }
  Dual& operator-=(const Dual& o) { a -= o.a; b -= o.b; return *this; }
  Dual& operator*=(const Dual& o) { b = b * o.a + a * o.b; a *= o.a; return *this; }
  Dual& operator/=(const Dual& o) {
    b = (b * o.a - a * o.b) / (o.a * o.a);
    a /= o.a;
    return *this;
  }
};

template <class T> struct is_dual : std::false_type {};
template <class T> struct is_dual<Dual<T>> : std::true_type {};

template <class S, class T>
concept DualOperand = !is_dual<std::remove_cvref_t<S>>::value && std::is_convertible_v<S, T>;

template <class T> Dual<T> operator-(const Dual<T>& x) { return {-x.a, -x.b}; }

template <class T> Dual<T> operator+(Dual<T> x, const Dual<T>& y) { return x += y; }
template <class T> Dual<T> operator-(Dual<T> x, const Dual<T>& y) { return x -= y; }
template <class T> Dual<T> operator*(Dual<T> x, const Dual<T>& y) { return x *= y; }
template <class T> Dual<T> operator/(Dual<T> x, const Dual<T>& y) { return x /= y; }

template <class T, DualOperand<T> S> Dual<T> operator+(const Dual<T>& x, const S& s) { return {x.a + T(s), x.b}; }
template <class T, DualOperand<T> S> Dual<T> operator+(const S& s, const Dual<T>& x) { return {T(s) + x.a, x.b}; }
template <class T, DualOperand<T> S> Dual<T> operator-(const Dual<T>& x, const S& s) { return {x.a - T(s), x.b}; }
template <class T, DualOperand<T> S> Dual<T> operator-(const S& s, const Dual<T>& x) { return {T(s) - x.a, -x.b}; }
template <class T, DualOperand<T> S> Dual<T> operator*(const Dual<T>& x, const S& s) { return {x.a * T(s), x.b * T(s)}; }
template <class T, DualOperand<T> S> Dual<T> operator*(const S& s, const Dual<T>& x) { return {T(s) * x.a, T(s) * x.b}; }
template <class T, DualOperand<T> S> Dual<T> operator/(const Dual<T>& x, const S& s) { return {x.a / T(s), x.b / T(s)}; }
template <class T, DualOperand<T> S> Dual<T> operator/(const S& s, const Dual<T>& x) {
  return {T(s) / x.a, -T(s) * x.b / (x.a * x.a)};
}

template <class T> Dual<T> log(const Dual<T>& x) {
  using std::log;
  return {log(x.a), x.b / x.a};
}
template <class T> Dual<T> sqrt(const Dual<T>& x) {
  using std::sqrt;
  T r = sqrt(x.a);
  return {r, x.b / (T(2.0) * r)};
}

}  // namespace fvd
