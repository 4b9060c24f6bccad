#pragma once

#include <memory>
#include <vector>

#include "abshift/abkernel.hpp"
#include "abshift/quadrature.hpp"
#include "abshift/superosc.hpp"
#include "abshift/types.hpp"

namespace abshift {

/// Default outer series order M_max.
inline constexpr int kDefaultSeriesOrder = 24;

/// Largest series order any routine will build or suggest.
inline constexpr int kMaxSeriesOrder = 400;

/// Kernel used inside c_{m,l}: the winding sum, or F = 1 for testing.
enum class KernelMode { winding, unit };

/// Every truncation knob of the solution pipeline in one place.
struct TruncationSpec {
  WindingTruncation winding{};
  QuadratureSpec quadrature{};
  // <= 0 selects the smallest order meeting quadrature.tol.
  int M_max = kDefaultSeriesOrder;
};

/*!
 * The coefficients
 *
 *   c_{m,l} = int_0^{2pi} int_0^inf e^{-M u^2 / (2 hbar t)} F_xi(r, phi, theta, t, u e^{i pi/4})
 *               cos^{m-l}(theta) sin^l(theta) u^{m+1} du dtheta
 *
 * for 0 <= l <= m <= M_max at one target point. Immutable once built.
 *
 * cos^{m-l} sin^l only has Fourier modes |n| <= m, so the theta integral
 * keeps exactly the winding terms |n| <= m and is evaluated exactly from the
 * Fourier coefficients; no winding truncation enters. The u integrals use the
 * composite Gauss-Legendre rule, error-estimated by node doubling plus the
 * analytic Gaussian tail.
 */
class CoefficientTable {
 public:
  static CoefficientTable build(const PhysicsConfig& cfg, const PolarPoint& target, int M_max,
                                const QuadratureSpec& spec = {},
                                KernelMode mode = KernelMode::winding);

  int M_max() const { return M_max_; }
  const PhysicsConfig& config() const { return cfg_; }
  const PolarPoint& target() const { return target_; }
  KernelMode mode() const { return mode_; }
  double u_max() const { return u_max_; }
  double tol() const { return tol_; }

  Complex at(int m, int l) const { return entries_[index(m, l)]; }
  double error(int m, int l) const { return errors_[index(m, l)]; }

  /// K = 2 pi sup_u e^{-M u^2 / (4 hbar t)} |F| majorant.
  double K() const { return K_; }
  /// Bound K Gamma((m+2)/2) / (2 (M / (4 hbar t))^{(m+2)/2}), independent of l.
  double bound(int m) const;

 private:
  CoefficientTable(const PhysicsConfig& cfg, const PolarPoint& target)
      : cfg_(cfg), target_(target) {}
  static std::size_t index(int m, int l) {
    return static_cast<std::size_t>(m) * (m + 1) / 2 + static_cast<std::size_t>(l);
  }

  PhysicsConfig cfg_;
  PolarPoint target_;
  KernelMode mode_ = KernelMode::winding;
  int M_max_ = 0;
  double u_max_ = 0.0;
  double tol_ = 0.0;
  double K_ = 0.0;
  std::vector<Complex> entries_;
  std::vector<double> errors_;
};

/// Shared, cached table for the given inputs (thread safe).
std::shared_ptr<const CoefficientTable> coefficient_table(const PhysicsConfig& cfg,
                                                          const PolarPoint& target, int M_max,
                                                          const QuadratureSpec& spec = {},
                                                          KernelMode mode = KernelMode::winding);

/// Drop every cached table.
void clear_coefficient_cache();

/// The constant K of the coefficient bound, independent of any quadrature grid.
double coefficient_bound_constant(const PhysicsConfig& cfg, double r,
                                  KernelMode mode = KernelMode::winding);

/// Single coefficient c_{m,l} with its error estimate.
FieldValue c_ml(const PhysicsConfig& cfg, const PolarPoint& target, int m, int l,
                const QuadratureSpec& spec = {}, KernelMode mode = KernelMode::winding);

/*!
 * Smallest M_max whose series tail at |a| + |b| = S is below tol, or
 * kMaxSeriesOrder + 1 if none is.
 */
int required_series_order(const PhysicsConfig& cfg, const PolarPoint& target, double S,
                          double tol, KernelMode mode = KernelMode::winding);

/*!
 * psi_{a,b} = i (M / 2 pi hbar t) e^{i M r^2 / (2 hbar t)}
 *               sum_{m <= M_max} ((i e^{i pi/4})^m / m!) sum_l binom(m, l) a^{m-l} b^l c_{m,l}.
 *
 * The tail beyond M_max is bounded through the coefficient bound. Throws
 * NumericalError(series_tail), carrying the required order as suggestion,
 * when it exceeds the table's tolerance.
 */
FieldValue psi_series(const CoefficientTable& table, Complex a, Complex b);

FieldValue psi_series(const PhysicsConfig& cfg, Complex a, Complex b, const PolarPoint& target,
                      int M_max = kDefaultSeriesOrder, const QuadratureSpec& spec = {});

/// Operator-consistency hook of psi_gh.
struct ConsistencyCheck {
  bool enabled = true;
  int m_check = 4;
  // Degree of the truncated exponential fed to the operators.
  int D = 20;
};

/*!
 * psi_{g(a), h(a)} through the series. With the hook enabled, every factor
 * g(a)^{m-l} h(a)^l with m <= m_check is compared with the operator action
 * G_{m,l}(D_w) H_l(D_w) e^{iaw} at w = 0; the largest gap is reported in
 * diagnostics.operator_consistency.
 */
FieldValue psi_gh(const CoefficientTable& table, double a, const EntireSeries& g,
                  const EntireSeries& h, const ConsistencyCheck& check = {});

FieldValue psi_gh(const PhysicsConfig& cfg, double a, const EntireSeries& g, const EntireSeries& h,
                  const PolarPoint& target, int M_max = kDefaultSeriesOrder,
                  const QuadratureSpec& spec = {}, const ConsistencyCheck& check = {});

/*!
 * Psi_n = sum_j C_j(n, a) psi_{g(1-2j/n), h(1-2j/n)} from one shared table.
 *
 * condition_number is sum_j |C_j psi_j| / |Psi_n|.
 */
FieldValue supershift_sum(const CoefficientTable& table, const SuperoscSpec& spec);

/// As above; M_max <= 0 picks the order the limit psi_{g(a),h(a)} needs.
FieldValue supershift_sum(const PhysicsConfig& cfg, const SuperoscSpec& spec,
                          const PolarPoint& target, int M_max = kDefaultSeriesOrder,
                          const QuadratureSpec& qspec = {});

struct SupershiftRow {
  int n = 0;
  Complex value{};
  // |Psi_n - psi_{g(a),h(a)}|
  double error = 0.0;
  double kappa = 1.0;
  // Propagated numerical error estimate of Psi_n.
  double error_estimate = 0.0;
  // kappa * eps exceeds the measured error.
  bool flagged = false;
};

struct SupershiftReport {
  FieldValue limit;
  int M_max = 0;
  std::vector<SupershiftRow> rows;
};

/// One row per n of n_list (nonempty, ascending); M_max <= 0 selects automatically.
SupershiftReport supershift_convergence_report(const PhysicsConfig& cfg, const SuperoscSpec& spec,
                                               const PolarPoint& target,
                                               const std::vector<int>& n_list, int M_max = 0,
                                               const QuadratureSpec& qspec = {});

}  // namespace abshift
