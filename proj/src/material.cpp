#include "fvd/material.hpp"

#include <algorithm>
#include <cmath>

namespace fvd {

void MaterialParams::finalize() {
  if (!(E_Y > 0.0)) throw ConfigError("Young's modulus must be positive");
  if (!(nu > -1.0 && nu < 0.5)) throw ConfigError("Poisson ratio must lie in (-1, 0.5)");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("fractional order must lie in (0,1)");
  if (!(p > 0.0)) throw ConfigError("fractional modulus p must be positive");
  if (!(gamma > 0.0)) throw ConfigError("layer width gamma must be positive");
  if (!(gc > 0.0)) throw ConfigError("gc must be positive");
  if (!(delta_tilde > 0.0)) throw ConfigError("delta_tilde must be positive");
  if (!(rho > 0.0)) throw ConfigError("density must be positive");
  if (!(zeta > 0.0)) throw ConfigError("zeta must be positive");
  if (!(theta0 > 0.0)) throw ConfigError("theta0 must be positive");
  if (law == ElasticLaw::LinearSpring && plane != Plane::Uniaxial)
    throw ConfigError("the linear spring law is only available in 1D");
  mu = E_Y / (2.0 * (1.0 + nu));
  lambda = E_Y * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
}

namespace {
double plane_stress_lambda(double l, double m) { return 2.0 * l * m / (l + 2.0 * m); }
}  // namespace

double MaterialParams::lambda_eff() const {
  return plane == Plane::Stress ? plane_stress_lambda(lambda, mu) : lambda;
}

double MaterialParams::lambda_bar() const {
  const double l = p * nu / ((1.0 + nu) * (1.0 - 2.0 * nu));
  return plane == Plane::Stress ? plane_stress_lambda(l, mu_bar()) : l;
}

double MaterialParams::mu_bar() const { return p / (2.0 * (1.0 + nu)); }

double gc_from_toughness(double f_t, double nu, double E_Y) { return f_t * f_t * (1.0 - nu * nu) / E_Y; }

double inverse_lambda(double phi, const MaterialParams& m) {
  return m.c_lambda / std::pow(1.0 + m.delta_tilde - phi, m.zeta);
}

Degradation degradation(double phi, const MaterialParams& m) {
  constexpr double tol = 1e-8;
  if (!(phi >= -tol && phi <= 1.0 + tol)) throw std::domain_error("damage outside [0,1]");
  phi = std::clamp(phi, 0.0, 1.0);
  const double q = 1.0 - phi;
  Degradation g;
  if (m.degradation == DegradationKind::G1) {
    g.G = q * q;
    g.dG = -2.0 * q;
    g.ddG = 2.0;
    return g;
  }
  // (1−φ)³ + a u^d / (1 + b(φ−c)²), u = φ(1−φ)
  const double d = m.d;
  const double u = phi * q, du = 1.0 - 2.0 * phi;
  const double P = std::pow(u, d);
  const double dP = u > 0.0 ? d * std::pow(u, d - 1.0) * du : 0.0;
  // u^{d-2} blows up at the ends; the floor keeps the Newton Jacobian finite
  const double uf = std::max(u, 1e-12);
  const double ddP = d * (d - 1.0) * std::pow(uf, d - 2.0) * du * du - 2.0 * d * std::pow(uf, d - 1.0);
  const double Q = 1.0 + m.b * (phi - m.c) * (phi - m.c);
  const double dQ = 2.0 * m.b * (phi - m.c), ddQ = 2.0 * m.b;
  const double f = P / Q;
  const double df = (dP * Q - P * dQ) / (Q * Q);
  const double ddf = (ddP * Q - P * ddQ) / (Q * Q) - 2.0 * dQ * (dP * Q - P * dQ) / (Q * Q * Q);
  g.G = q * q * q + m.a * f;
  g.dG = -3.0 * q * q + m.a * df;
  g.ddG = 6.0 * q + m.a * ddf;
  return g;
}

double neo_hookean_energy(const SymTensor2<double>& C, double mu, double lambda) {
  require_admissible(C);
  const double lnJ = 0.5 * std::log(det3(C));
  return 0.5 * mu * (trace3(C) - 3.0) - mu * lnJ + 0.5 * lambda * lnJ * lnJ;
}

double elastic_energy(const SymTensor2<double>& E, const MaterialParams& m) {
  if (m.law == ElasticLaw::LinearSpring) return 0.5 * m.E_Y * E[0] * E[0];
  return neo_hookean_energy(right_cauchy_green(E), m.mu, m.lambda_eff());
}

Tensor4<double> tangent_stiffness(const SymTensor2<double>& E, const PointState& st, const MaterialParams& m,
                                  StressMode mode, double h, bool symmetrize) {
  using cd = std::complex<double>;
  Tensor4<double> D(E.dim);
  const int n = E.size();
  for (int q = 0; q < n; ++q) {
    SymTensor2<cd> Ec = E.cast<cd>();
    Ec[q] += cd(0.0, q == 2 ? 0.5 * h : h);
    SymTensor2<cd> S = second_piola(Ec, st, m, mode);
    for (int p = 0; p < n; ++p) D(p, q) = S[p].imag() / h;
  }
  if (symmetrize) {
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) D(p, q) = D(q, p) = 0.5 * (D(p, q) + D(q, p));
  }
  return D;
}

const char* to_string(Plane p) {
  switch (p) {
    case Plane::Uniaxial: return "uniaxial";
    case Plane::Strain: return "strain";
    case Plane::Stress: return "stress";
  }
  return "?";
}
const char* to_string(DegradationKind k) { return k == DegradationKind::G1 ? "G1" : "G2"; }
const char* to_string(MemoryTensor k) {
  switch (k) {
    case MemoryTensor::A1: return "A1";
    case MemoryTensor::A2: return "A2";
    case MemoryTensor::Scalar: return "scalar";
  }
  return "?";
}
const char* to_string(StressMode k) { return k == StressMode::Partial ? "partial" : "complete"; }
const char* to_string(ElasticLaw k) { return k == ElasticLaw::NeoHookean ? "neo_hookean" : "linear_spring"; }

}  // namespace fvd
