#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fvd/tensors.hpp"

namespace fvd {

double gamma_fn(double x);

// A_{m+1} from the Gamma ratio Γ(m−α)/(Γ(−α)Γ(m+1)), evaluated in long double.
double g1_coefficient_closed_form(double alpha, std::size_t m);

// Grünwald weights A_1..A_N, grown on demand by the recurrence.
class G1Coefficients {
 public:
  explicit G1Coefficients(double alpha, std::size_t n = 1);
  double alpha() const { return alpha_; }
  std::size_t size() const { return c_.size(); }
  void ensure(std::size_t n);
  // A_{k+1}
  double operator[](std::size_t k) const { return c_[k]; }
  const std::vector<double>& values() const { return c_; }

 private:
  double alpha_;
  std::vector<double> c_;
};

G1Coefficients g1_coefficients(double alpha, std::size_t n);

using Vec3 = std::array<double, 3>;

// Uniformly sampled strain history E_0..E_N of one quadrature point, E_0 = 0.
// Samples hold tensor components [11, 22, 12].
class StrainHistory {
 public:
  StrainHistory() = default;
  StrainHistory(int dim, double dt);

  int dim() const { return dim_; }
  double dt() const { return dt_; }
  std::size_t size() const { return samples_.size(); }
  double time() const { return dt_ * static_cast<double>(samples_.size() - 1); }
  const Vec3& raw(std::size_t i) const { return samples_[i]; }
  SymTensor2<double> at(std::size_t i) const { return SymTensor2<double>::from_voigt(dim_, samples_[i]); }
  SymTensor2<double> back() const { return at(samples_.size() - 1); }

  void append(const SymTensor2<double>& e);
  void pop_back();
  // Halve dt, inserting linearly interpolated midpoints.
  void refine();

 private:
  int dim_ = 1;
  double dt_ = 1.0;
  std::vector<Vec3> samples_;
};

// G1 derivative at t_N = N·dt using every sample of the history (last = current).
SymTensor2<double> caputo_g1(const StrainHistory& h, const G1Coefficients& coeffs);
SymTensor2<double> caputo_g1(const StrainHistory& h, double alpha);

// Weighted moments of the interval midpoints (engineering Voigt, shifted by the
// last past sample) for one kernel exponent.
struct KernelMoments {
  double s0 = 0.0;
  Vec3 s1{0, 0, 0};
  std::array<Vec3, 3> s2{};
};

// Everything an evaluation at t_{n+1} needs from the frozen past E_0..E_n.
struct HistoryDigest {
  int dim = 1;
  double alpha = 0.5;
  double dt = 1.0;
  double t = 0.0;      // t_{n+1}
  Vec3 g1_tail{0, 0, 0};  // Σ_{m=1}^{n} A_{m+1} E_{n+1-m}, tensor components
  Vec3 last{0, 0, 0};     // E_n, tensor components
  KernelMoments k1;       // kernel (t-τ)^-(1+α)
  bool has_k1 = false;
};

// Builds the digest for the next time level. `with_moments` is only needed by
// the complete stress mode.
HistoryDigest digest_history(const StrainHistory& past, const G1Coefficients& coeffs, bool with_moments);

// D^α E at t_{n+1} for the provisional strain e_t.
template <class T>
SymTensor2<T> caputo_from_digest(const HistoryDigest& d, const SymTensor2<T>& e_t) {
  SymTensor2<T> out(d.dim);
  const double scale = std::pow(d.dt, -d.alpha);
  for (int i = 0; i < e_t.size(); ++i) out[i] = (e_t[i] + d.g1_tail[i]) * scale;
  return out;
}

// ∫ N(E_t, E_τ) (t-τ)^-(1+α) dτ over all but the final interval, N(a,b) = (a-b):M:(a-b),
// for a Voigt matrix M (engineering convention) of scalar type T.
template <class T, class M>
T kernel_integral_from_moments(const HistoryDigest& d, const SymTensor2<T>& e_t, const M& m) {
  if (!d.has_k1) return T(0.0);
  const int n = e_t.size();
  auto ev = e_t.engineering();
  std::array<T, 3> x{};
  const Vec3 lastv = SymTensor2<double>::from_voigt(d.dim, d.last).engineering();
  for (int i = 0; i < n; ++i) x[i] = ev[i] - lastv[i];
  T s = T(0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      T w = d.k1.s0 * x[a] * x[b] - x[a] * d.k1.s1[b] - d.k1.s1[a] * x[b] + T(d.k1.s2[a][b]);
      s += m(a, b) * w;
    }
  return s;
}

double kappa(double alpha);

// ρψ̃ₘ with a fixed A; history includes the current strain as its last sample.
double memory_potential(const StrainHistory& h, const Tensor4<double>& A, double alpha);

// Same quantity for a provisional current strain on top of a frozen past.
// `check` runs the SPD test on A first.
double memory_potential(const StrainHistory& past, const SymTensor2<double>& e_t,
                        const Tensor4<double>& A, double alpha, bool check = true);

// G_m / (ρ Γ(1−α)); pass rho = 1 for a volumetric density.
double r_prefactor(double G, double rho, double alpha);

// Entropy-production term R, history includes the current strain.
double r_term(const StrainHistory& h, const Tensor4<double>& A, double alpha, double prefactor);
double r_term(const StrainHistory& past, const SymTensor2<double>& e_t, const Tensor4<double>& A,
              double alpha, double prefactor, bool check = true);

// Throws ConfigError when A is not positive definite.
void require_spd(const Tensor4<double>& A);

}  // namespace fvd
