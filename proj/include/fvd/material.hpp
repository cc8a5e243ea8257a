#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "fvd/errors.hpp"
#include "fvd/fractional.hpp"
#include "fvd/tensors.hpp"

namespace fvd {

enum class Plane { Uniaxial, Strain, Stress };
enum class DegradationKind { G1, G2 };
enum class MemoryTensor { A1, A2, Scalar };
enum class StressMode { Partial, Complete };
enum class ElasticLaw { NeoHookean, LinearSpring };

struct MaterialParams {
  double E_Y = 1.0e9;
  double nu = 0.3;
  double mu = 0.0;      // filled by finalize()
  double lambda = 0.0;  // filled by finalize()
  double p = 1.0e6;
  double alpha = 0.5;
  double b_tilde = 0.0;
  double c_lambda = 1.0;
  double zeta = 1.0;
  double delta_tilde = 1.0e-4;
  double gc = 1.0e3;
  double gamma = 1.0e-3;
  double rho = 1000.0;
  double theta0 = 293.15;
  DegradationKind degradation = DegradationKind::G1;
  double a = 3.8, b = 1.5, c = 1.15, d = 1.05;
  Plane plane = Plane::Strain;
  MemoryTensor memory = MemoryTensor::A1;
  ElasticLaw law = ElasticLaw::NeoHookean;
  bool memory_enabled = true;

  int dim() const { return plane == Plane::Uniaxial ? 1 : 2; }
  // Lamé pair from (E_Y, ν); validates the rest.
  void finalize();
  // λ used by the stress, with the plane-stress reduction applied
  double lambda_eff() const;
  // modified Lamé pair of the memory tensor, same reduction
  double lambda_bar() const;
  double mu_bar() const;
};

double gc_from_toughness(double f_t, double nu, double E_Y);
double inverse_lambda(double phi, const MaterialParams& m);

struct Degradation {
  double G = 1.0;
  double dG = 0.0;
  double ddG = 0.0;
};
Degradation degradation(double phi, const MaterialParams& m);

// Out-of-plane bookkeeping: C33 = 1 (and C22 = 1 in 1D).
template <class T> T det3(const SymTensor2<T>& c) { return det(c); }
template <class T> T trace3(const SymTensor2<T>& c) { return trace(c) + (c.dim == 1 ? 2.0 : 1.0); }

template <class T> void require_admissible(const SymTensor2<T>& c) {
  if (!(real_part(det3(c)) > 0.0)) throw ElementInversion("det C <= 0");
}

double neo_hookean_energy(const SymTensor2<double>& C, double mu, double lambda);

template <class T> SymTensor2<T> neo_hookean_stress(const SymTensor2<T>& C, double mu, double lambda) {
  using std::log;
  require_admissible(C);
  SymTensor2<T> ci = inverse(C);
  T lnJ = 0.5 * log(det3(C));
  SymTensor2<T> s = SymTensor2<T>::identity(C.dim) * mu;
  s -= ci * mu;
  s += ci * (lnJ * lambda);
  return s;
}

template <class T> Tensor4<T> assemble_A(const SymTensor2<T>& C, const MaterialParams& m) {
  using std::log;
  Tensor4<T> A(C.dim);
  if (m.memory == MemoryTensor::Scalar) {
    for (int i = 0; i < A.size(); ++i) A(i, i) = T(m.p);
    if (C.dim == 2) A(2, 2) = T(0.5 * m.p);
    return A;
  }
  if (m.memory == MemoryTensor::A2) {
    A(0, 0) = T(m.p);
    return A;
  }
  require_admissible(C);
  const double lb = m.lambda_bar(), mb = m.mu_bar();
  SymTensor2<T> ci = inverse(C);
  T k = (mb - lb * (0.5 * log(det3(C)))) * 2.0;
  std::array<T, 3> c{ci[0], ci[1], ci[2]};
  const int n = A.size();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A(i, j) = lb * c[i] * c[j];
  // fourth-order identity in the engineering Voigt convention
  A(0, 0) += k;
  if (n == 3) {
    A(1, 1) += k;
    A(2, 2) += k * 0.5;
  }
  return A;
}

// Real-valued data of one quadrature point at the time level being solved.
struct PointState {
  double phi = 0.0;
  std::array<double, 2> grad_phi{0.0, 0.0};
  SymTensor2<double> e_prev{1};  // accepted strain at t_n, for Ė
  double dt = 1.0;
  const HistoryDigest* memory = nullptr;  // null: no fractional term
};

template <class T>
SymTensor2<T> second_piola(const SymTensor2<T>& E, const PointState& st, const MaterialParams& m, StressMode mode) {
  const int dim = E.dim;
  SymTensor2<T> C = right_cauchy_green(E);
  const double G = degradation(st.phi, m).G;

  SymTensor2<T> S(dim);
  if (m.law == ElasticLaw::LinearSpring) {
    S = E * m.E_Y;
  } else {
    S = neo_hookean_stress(C, m.mu, m.lambda_eff());
  }
  S *= G;

  if (m.b_tilde != 0.0) S += (E - st.e_prev.template cast<T>()) * (m.theta0 * m.b_tilde / st.dt);

  if (m.gc * m.gamma != 0.0 && (st.grad_phi[0] != 0.0 || st.grad_phi[1] != 0.0)) {
    require_admissible(C);
    SymTensor2<T> ci = inverse(C);
    if (dim == 1) {
      T w = ci[0] * st.grad_phi[0];
      S[0] -= m.gc * m.gamma * w * w;
    } else {
      T w0 = ci[0] * st.grad_phi[0] + ci[2] * st.grad_phi[1];
      T w1 = ci[2] * st.grad_phi[0] + ci[1] * st.grad_phi[1];
      S[0] -= m.gc * m.gamma * w0 * w0;
      S[1] -= m.gc * m.gamma * w1 * w1;
      S[2] -= m.gc * m.gamma * w0 * w1;
    }
  }

  if (m.memory_enabled && st.memory) {
    const HistoryDigest& d = *st.memory;
    Tensor4<T> A = assemble_A(C, m);
    SymTensor2<T> mem = A.contract(caputo_from_digest(d, E));
    if (mode == StressMode::Complete && m.memory == MemoryTensor::A1) {
      const double kap = kappa(d.alpha);
      const double ta = std::pow(d.t, -d.alpha);
      const double last_w = std::pow(d.dt, -d.alpha) / (2.0 - d.alpha);  // ∫ c s^{1-α} with c = N/dt²
      SymTensor2<T> dlast = E - SymTensor2<double>::from_voigt(dim, d.last).template cast<T>();
      for (int q = 0; q < E.size(); ++q) {
        // ∂A/∂ε_q by forward-mode differentiation along the engineering component q
        SymTensor2<Dual<T>> Ed(dim);
        for (int i = 0; i < 3; ++i) Ed[i] = Dual<T>(E[i]);
        Ed[q].b = T(q == 2 ? 0.5 : 1.0);
        Tensor4<Dual<T>> Ad = assemble_A(right_cauchy_green(Ed), m);
        Tensor4<T> dA(dim);
        for (int i = 0; i < dA.size(); ++i)
          for (int j = 0; j < dA.size(); ++j) dA(i, j) = Ad(i, j).b;
        T extra = dA.quadratic(E) * ta +
                  d.alpha * (kernel_integral_from_moments(d, E, dA) + dA.quadratic(dlast) * last_w);
        mem[q] += kap * extra;
      }
    }
    S += mem * G;
  }
  return S;
}

// Voigt tangent dS/dε (engineering strain) by complex step. Not symmetrized
// unless asked: with a strain-dependent memory tensor the exact tangent is not symmetric.
Tensor4<double> tangent_stiffness(const SymTensor2<double>& E, const PointState& st, const MaterialParams& m,
                                  StressMode mode, double h = 1e-200, bool symmetrize = false);

// Undegraded stored energy density used as damage driving force.
double elastic_energy(const SymTensor2<double>& E, const MaterialParams& m);

const char* to_string(Plane p);
const char* to_string(DegradationKind k);
const char* to_string(MemoryTensor k);
const char* to_string(StressMode k);
const char* to_string(ElasticLaw k);

}  // namespace fvd
