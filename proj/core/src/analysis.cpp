#include "lpctrl/analysis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace lpctrl {

CasimirProfile CasimirProfile::quadratic(std::string casimir, double level,
                                         double slope, double curvature) {
  CasimirProfile p;
  p.casimir = std::move(casimir);
  p.rho = [=](double x) {
    double d = x - level;
    return slope * d + 0.5 * curvature * d * d;
  };
  p.drho = [=](double x) { return slope + curvature * (x - level); };
  p.d2rho = [=](double) { return curvature; };
  return p;
}

CasimirProfile CasimirProfile::linear(std::string casimir, double slope) {
  CasimirProfile p;
  p.casimir = std::move(casimir);
  p.rho = [=](double x) { return slope * x; };
  p.drho = [=](double) { return slope; };
  p.d2rho = [](double) { return 0.0; };
  return p;
}

double CasimirProfile::eval(const AlgebraDescriptor& d, const Vec& nu) const {
  return rho(d.casimir(casimir).value(nu));
}

Vec CasimirProfile::gradient(const AlgebraDescriptor& d, const Vec& nu) const {
  const Casimir& k = d.casimir(casimir);
  return drho(k.value(nu)) * k.gradient(nu);
}

const char* definiteness_name(Definiteness d) {
  switch (d) {
    case Definiteness::PositiveDefinite: return "positive-definite";
    case Definiteness::NegativeDefinite: return "negative-definite";
    case Definiteness::Indefinite: return "indefinite";
    case Definiteness::Degenerate: return "degenerate";
  }
  return "?";
}

FirstVariationReport first_variation(const ControlledSystem& sys,
                                     const CasimirProfile& profile,
                                     const State& z_e) {
  if (z_e.chart != Chart::Z) throw Error("first_variation: expects Z chart");
  const Vec& nu = z_e.nu.coeffs;
  const Vec& beta = z_e.second.coeffs;
  auto [gnu, gbeta] = sys.shaped_energy_gradient(nu, beta);
  Vec knu = profile.gradient(*sys.d(), nu);

  FirstVariationReport out;
  out.gradient = Vec(gnu.size() + gbeta.size());
  out.gradient << gnu + knu, gbeta;
  out.gradient_norm = out.gradient.norm();

  const Casimir& k = sys.d()->casimir(profile.casimir);
  Vec kg = k.gradient(nu);
  double kk = kg.squaredNorm();
  if (kk > 0.0) {
    double slope = -gnu.dot(kg) / kk;
    out.annihilating_slope = slope;
    out.parallel_residual = (gnu + slope * kg).norm();
  }
  return out;
}

std::pair<Definiteness, double> classify_definiteness(const Mat& hessian,
                                                      double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(hessian);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (lo > tol) return {Definiteness::PositiveDefinite, lo};
  if (hi < -tol) return {Definiteness::NegativeDefinite, hi};
  if (lo < -tol && hi > tol)
    return {Definiteness::Indefinite, std::abs(lo) < hi ? lo : hi};
  return {Definiteness::Degenerate, std::abs(lo) < std::abs(hi) ? lo : hi};
}

VariationReport second_variation(const ControlledSystem& sys,
                                 const CasimirProfile& profile,
                                 const State& z_e,
                                 const std::vector<Vec>& basis,
                                 double fd_step) {
  if (z_e.chart != Chart::Z) throw Error("second_variation: expects Z chart");
  const int nd = sys.d()->dim();
  const int ng = sys.g()->dim();
  const int n = static_cast<int>(basis.size());
  if (n == 0) throw Error("second_variation: empty basis");
  for (const Vec& b : basis)
    if (b.size() != nd + ng)
      throw DimensionError("second_variation: basis direction length");

  Vec z0(nd + ng);
  z0 << z_e.nu.coeffs, z_e.second.coeffs;
  auto energy = [&](const Vec& z) {
    Vec nu = z.head(nd);
    Vec beta = z.tail(ng);
    return sys.shaped_energy(nu, beta) + profile.eval(*sys.d(), nu);
  };

  auto hessian_at = [&](double h) {
    Mat H(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        double epp = energy(z0 + h * basis[i] + h * basis[j]);
        double epm = energy(z0 + h * basis[i] - h * basis[j]);
        double emp = energy(z0 - h * basis[i] + h * basis[j]);
        double emm = energy(z0 - h * basis[i] - h * basis[j]);
        H(i, j) = H(j, i) = (epp - epm - emp + emm) / (4.0 * h * h);
      }
    }
    return H;
  };

  // Two step sizes, Richardson extrapolated (error is O(h^2)).
  Mat Hh = hessian_at(fd_step);
  Mat Hh2 = hessian_at(fd_step / 2.0);
  Mat H = (4.0 * Hh2 - Hh) / 3.0;
  H = 0.5 * (H + H.transpose()).eval();

  VariationReport out;
  out.hessian = H;
  out.gradient_norm = first_variation(sys, profile, z_e).gradient_norm;
  auto [cls, margin] = classify_definiteness(H);
  out.classification = cls;
  out.margin = margin;
  return out;
}

double gain_threshold_satellite(double lambda2, double I3, double i3) {
  return I3 * (I3 - lambda2) / (i3 * lambda2);
}

double lyapunov_eval(const ControlledSystem& sys, const CasimirProfile& profile,
                     const State& z, const State& z_e) {
  if (z.chart != Chart::Z || z_e.chart != Chart::Z)
    throw Error("lyapunov_eval: expects Z chart");
  double base = sys.shaped_energy(z.nu.coeffs, z.second.coeffs) +
                profile.eval(*sys.d(), z.nu.coeffs);
  double ref = sys.shaped_energy(z_e.nu.coeffs, z_e.second.coeffs) +
               profile.eval(*sys.d(), z_e.nu.coeffs);
  return sys.s() * (base - ref);
}

}  // namespace lpctrl
