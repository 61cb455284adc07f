#pragma once

#include <array>
#include <cstdint>

#include "loggas/renorm.hpp"

namespace loggas {

/// Electric field of an N-periodic configuration on the cylinder
/// (R/(N Z)) x R.
///
/// The potential H solves -Delta H = 2 pi (sum_i delta_{a_i} - delta_R) on the
/// cylinder. Its point part -sum_i log|2 sin(pi (z - a_i)/N)| has Laplacian
/// -2 pi sum_i delta_{a_i} and grows like pi |y| / N per point, i.e. pi |y|
/// in total; the background term pi |y| has Laplacian 2 pi delta_R and
/// cancels that growth. Summing the two,
///
///   H(x, y) = -(1/2) sum_i log(1 - 2 q cos(2 u_i) + q^2),
///   u_i = pi (x - a_i)/N,  q = exp(-2 pi |y| / N),
///
/// which is finite away from the charges and decays like q. The field
/// E = -grad H equals (Re f', -Im f') - (0, pi sign y) with
/// f'(z) = (pi/N) sum_i cot(pi (z - a_i)/N); it is evaluated in the same
/// q-form to avoid cancellation for large |y|. sign(0) is taken as 0.
class CylinderField {
 public:
  explicit CylinderField(PeriodicConfig config);

  const PeriodicConfig& config() const { return config_; }
  double potential(double x, double y) const;
  std::array<double, 2> field(double x, double y) const;
  double field_norm2(double x, double y) const;

 private:
  PeriodicConfig config_;
};

CylinderField make_field(const PeriodicConfig& config);

struct WQuadratureOptions {
  double eta = 1e-3;
  double y_cut = 6.0;
  int nodes_per_unit = 1;
  double rel_tol = 1e-9;
  std::uint64_t jitter_seed = 0x9e3779b97f4a7c15ULL;
};

/// Renormalized energy from its definition: one period of
///   (1/N) [ (1/2) int |E|^2 over the strip minus disks B(a_i, eta)
///           + pi N log eta ] + tail,
/// where the tail bounds |y| > y_cut through the exp(-2 pi |y| / N) decay of
/// the field. Discs are integrated in log-polar coordinates, the rest of the
/// strip by nested adaptive Gauss-Legendre.
///
/// The finite-eta value exceeds the eta -> 0 limit by 4 pi eta + O(eta^2):
/// the jump of E_y across the background line meets the 1/r point field
/// inside each excluded disc.
///
/// Throws DomainError when eta >= half the minimal gap or y_cut < N.
double w_quadrature(const CylinderField& field, const WQuadratureOptions& opts = {});

}  // namespace loggas
