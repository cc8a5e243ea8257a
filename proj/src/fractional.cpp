#include "fvd/fractional.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "fvd/errors.hpp"

namespace fvd {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("fractional order must lie in (0,1)");
}

// k^{-e} for k = 0..n (entry 0 unused), cached per exponent since every
// quadrature point of a run asks for the same table
const std::vector<double>& power_table(double e, std::size_t n) {
  thread_local std::map<double, std::vector<double>> cache;
  auto& t = cache[e];
  if (t.empty()) t.push_back(0.0);
  while (t.size() <= n) t.push_back(std::pow(static_cast<double>(t.size()), -e));
  return t;
}

// ∫ (t-τ)^{-(1+e)} dτ over [t-k·dt, t-(k-1)·dt], k ≥ 2
double kernel_weight(std::size_t k, double dt, double e, const std::vector<double>& pw) {
  return std::pow(dt, -e) * (pw[k - 1] - pw[k]) / e;
}

}  // namespace

double gamma_fn(double x) { return std::tgamma(x); }

double g1_coefficient_closed_form(double alpha, std::size_t m) {
  check_alpha(alpha);
  if (m == 0) return 1.0;
  const long double a = alpha;
  const long double mm = static_cast<long double>(m);
  // Γ(m−α) > 0 for m ≥ 1 and Γ(−α) < 0, so every coefficient past the first is negative
  const long double lg = std::lgamma(mm - a) - std::lgamma(-a) - std::lgamma(mm + 1.0L);
  return static_cast<double>(-std::exp(lg));
}

G1Coefficients::G1Coefficients(double alpha, std::size_t n) : alpha_(alpha) {
  check_alpha(alpha);
  c_.push_back(1.0);
  ensure(n);
}

void G1Coefficients::ensure(std::size_t n) {
  c_.reserve(n);
  while (c_.size() < n) {
    const double m = static_cast<double>(c_.size());
    c_.push_back((m - 1.0 - alpha_) / m * c_.back());
  }
}

G1Coefficients g1_coefficients(double alpha, std::size_t n) {
  if (n < 1) throw std::invalid_argument("g1_coefficients: n must be >= 1");
  return G1Coefficients(alpha, n);
}

StrainHistory::StrainHistory(int dim, double dt) : dim_(dim), dt_(dt) {
  if (dt <= 0.0) throw std::invalid_argument("StrainHistory: dt must be positive");
  samples_.push_back({0.0, 0.0, 0.0});
}

void StrainHistory::append(const SymTensor2<double>& e) { samples_.push_back(e.v); }

void StrainHistory::pop_back() {
  if (samples_.size() > 1) samples_.pop_back();
}

void StrainHistory::refine() {
  std::vector<Vec3> out;
  out.reserve(2 * samples_.size());
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (i > 0) {
      Vec3 mid;
      for (int k = 0; k < 3; ++k) mid[k] = 0.5 * (samples_[i - 1][k] + samples_[i][k]);
      out.push_back(mid);
    }
    out.push_back(samples_[i]);
  }
  samples_ = std::move(out);
  dt_ *= 0.5;
}

SymTensor2<double> caputo_g1(const StrainHistory& h, const G1Coefficients& coeffs) {
  if (h.size() == 0) throw std::invalid_argument("caputo_g1: empty history");
  const std::size_t n = h.size() - 1;
  SymTensor2<double> out(h.dim());
  if (n == 0) return out;
  if (coeffs.size() < n) throw std::invalid_argument("caputo_g1: not enough coefficients");
  Vec3 s{0, 0, 0};
  for (std::size_t m = 0; m < n; ++m) {
    const Vec3& f = h.raw(n - m);
    for (int k = 0; k < 3; ++k) s[k] += coeffs[m] * f[k];
  }
  const double scale = std::pow(h.dt(), -coeffs.alpha());
  for (int k = 0; k < 3; ++k) out.v[k] = s[k] * scale;
  if (h.dim() == 1) out.v[1] = out.v[2] = 0.0;
  return out;
}

SymTensor2<double> caputo_g1(const StrainHistory& h, double alpha) {
  G1Coefficients c(alpha, h.size());
  return caputo_g1(h, c);
}

HistoryDigest digest_history(const StrainHistory& past, const G1Coefficients& coeffs, bool with_moments) {
  HistoryDigest d;
  d.dim = past.dim();
  d.alpha = coeffs.alpha();
  d.dt = past.dt();
  const std::size_t n = past.size() - 1;
  d.t = d.dt * static_cast<double>(n + 1);
  d.last = past.raw(n);
  if (coeffs.size() < n + 1) throw std::invalid_argument("digest_history: not enough coefficients");
  // f_m = E_{n+1-m}; m = 0 is the provisional current strain
  for (std::size_t m = 1; m <= n; ++m) {
    const Vec3& f = past.raw(n + 1 - m);
    for (int k = 0; k < 3; ++k) d.g1_tail[k] += coeffs[m] * f[k];
  }
  if (with_moments && n >= 1) {
    d.has_k1 = true;
    const Vec3 lastv = past.at(n).engineering();
    const int nc = d.dim == 1 ? 1 : 3;
    const auto& pw = power_table(d.alpha, n + 1);
    for (std::size_t j = 0; j + 1 <= n; ++j) {
      const double w = kernel_weight(n + 1 - j, d.dt, d.alpha, pw);
      const Vec3 a = past.at(j).engineering();
      const Vec3 b = past.at(j + 1).engineering();
      Vec3 mid{};
      for (int k = 0; k < nc; ++k) mid[k] = 0.5 * (a[k] + b[k]) - lastv[k];
      d.k1.s0 += w;
      for (int k = 0; k < nc; ++k) {
        d.k1.s1[k] += w * mid[k];
        for (int l = 0; l < nc; ++l) d.k1.s2[k][l] += w * mid[k] * mid[l];
      }
    }
  }
  return d;
}

double kappa(double alpha) { return 1.0 / (2.0 * gamma_fn(1.0 - alpha)); }

void require_spd(const Tensor4<double>& A) {
  const int n = A.size();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = A(i, j);
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues().minCoeff() > 0.0) || (m - m.transpose()).norm() > 1e-10 * m.norm())
    throw ConfigError("memory tensor is not symmetric positive definite");
}

namespace {

// Σ over the interior intervals of w_j N(E_t, mid_j) with kernel exponent beta,
// plus the closed-form final interval. Returns {first-term, integral}.
struct Quadrature {
  double first = 0.0;
  double integral = 0.0;
};

Quadrature singular_quadrature(const StrainHistory& past, const SymTensor2<double>& e_t,
                               const Tensor4<double>& A, double beta_shift, double alpha) {
  const std::size_t n = past.size() - 1;
  const double dt = past.dt();
  const double beta = alpha + beta_shift;  // kernel (t−τ)^-β
  const int nc = e_t.dim == 1 ? 1 : 3;
  double M[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) M[i][j] = (i < nc && j < nc) ? A(i, j) : 0.0;
  const Vec3 et = e_t.engineering();
  auto quad = [&](const double* x) {
    double s = 0.0;
    for (int i = 0; i < nc; ++i) {
      double r = 0.0;
      for (int j = 0; j < nc; ++j) r += M[i][j] * x[j];
      s += x[i] * r;
    }
    return s;
  };
  auto diff = [&](const Vec3& e, double* x) {
    x[0] = et[0] - e[0];
    x[1] = et[1] - e[1];
    x[2] = et[2] - 2.0 * e[2];
  };
  Quadrature q;
  double x[3];
  diff(past.raw(0), x);
  q.first = quad(x);
  const auto& pw = power_table(beta - 1.0, n + 1);
  const double scale = std::pow(dt, 1.0 - beta) / (beta - 1.0);
  double acc = 0.0;
  for (std::size_t j = 0; j + 1 <= n; ++j) {
    const Vec3& a = past.raw(j);
    const Vec3& b = past.raw(j + 1);
    const Vec3 mid{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1]), 0.5 * (a[2] + b[2])};
    diff(mid, x);
    const std::size_t k = n + 1 - j;
    acc += (pw[k - 1] - pw[k]) * quad(x);
  }
  q.integral = scale * acc;
  // N ≈ c (t−τ)² on the last interval
  diff(past.raw(n), x);
  const double c = quad(x) / (dt * dt);
  q.integral += c * std::pow(dt, 3.0 - beta) / (3.0 - beta);
  return q;
}

StrainHistory split_past(const StrainHistory& h, SymTensor2<double>& e_t) {
  if (h.size() < 1) throw std::invalid_argument("empty history");
  StrainHistory past = h;
  e_t = h.back();
  past.pop_back();
  return past;
}

}  // namespace

double memory_potential(const StrainHistory& past, const SymTensor2<double>& e_t, const Tensor4<double>& A,
                        double alpha, bool check) {
  check_alpha(alpha);
  if (check) require_spd(A);
  const double t = past.dt() * static_cast<double>(past.size());
  Quadrature q = singular_quadrature(past, e_t, A, 1.0, alpha);
  return kappa(alpha) * (q.first / std::pow(t, alpha) + alpha * q.integral);
}

double memory_potential(const StrainHistory& h, const Tensor4<double>& A, double alpha) {
  if (h.size() < 2) return 0.0;
  SymTensor2<double> e_t;
  StrainHistory past = split_past(h, e_t);
  return memory_potential(past, e_t, A, alpha);
}

double r_prefactor(double G, double rho, double alpha) { return G / (rho * gamma_fn(1.0 - alpha)); }

double r_term(const StrainHistory& past, const SymTensor2<double>& e_t, const Tensor4<double>& A, double alpha,
              double prefactor, bool check) {
  check_alpha(alpha);
  if (check) require_spd(A);
  const double t = past.dt() * static_cast<double>(past.size());
  // N = ½ ΔE:A:ΔE, kernel (t−τ)^-(2+α)
  Quadrature q = singular_quadrature(past, e_t, A, 2.0, alpha);
  return prefactor * alpha * 0.5 * (q.first / std::pow(t, 1.0 + alpha) + (1.0 + alpha) * q.integral);
}

double r_term(const StrainHistory& h, const Tensor4<double>& A, double alpha, double prefactor) {
  if (h.size() < 2) return 0.0;
  SymTensor2<double> e_t;
  StrainHistory past = split_past(h, e_t);
  return r_term(past, e_t, A, alpha, prefactor);
}

}  // namespace fvd
