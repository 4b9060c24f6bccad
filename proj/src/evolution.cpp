#include "abshift/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

#include "abshift/compensated.hpp"
#include "abshift/iodo.hpp"
#include "abshift/specfun.hpp"

namespace abshift {

namespace {

constexpr double kScanStep = 1.0 / 64.0;

// Radial majorant of e^{...} |F| u^{m+1} beyond the cutoff (|cos^p sin^q| <= 1).
GrowthMajorant radial_majorant(const PhysicsConfig& cfg, double r, int m, KernelMode mode) {
  if (mode == KernelMode::unit) return {1.0, m + 1.0, 0.0};
  const double kappa_r = 0.25 * cfg.scale() * r;
  const double lift = std::max(1.0, kappa_r);
  return {6.0 * lift * lift, m + 3.0, 3.0 * kappa_r};
}

// Gamma((m+2)/2) / (2 g^{(m+2)/2}) in log form.
double log_moment(double g, int m) {
  const double half = 0.5 * (m + 2);
  return ln_gamma(half) - std::log(2.0) - half * std::log(g);
}

double choose_table_cutoff(const PhysicsConfig& cfg, double r, int M_max, double tol,
                           KernelMode mode) {
  const double gamma = cfg.gamma();
  double u_max = 0.0;
  for (int m = 0; m <= M_max; ++m) {
    const GrowthMajorant maj = radial_majorant(cfg, r, m, mode);
    const double target = 1e-2 * tol * std::max(1.0, std::exp(log_moment(gamma, m)));
    double u = std::max(u_max, 0.125);
    while (2.0 * kPi * gaussian_tail_bound(gamma, u, maj) > target) u += 0.125;
    u_max = u;
  }
  return u_max;
}

// Fourier coefficients of cos^p(theta) sin^q(theta), index k + (p + q) for e^{ik theta}.
std::vector<Complex> trig_monomial(int p, int q) {
  std::vector<Complex> poly{Complex{1.0, 0.0}};
  auto multiply = [&](Complex up, Complex down) {
    std::vector<Complex> next(poly.size() + 2);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k] += down * poly[k];
      next[k + 2] += up * poly[k];
    }
    poly.swap(next);
  };
  for (int i = 0; i < p; ++i) multiply({0.5, 0.0}, {0.5, 0.0});
  for (int i = 0; i < q; ++i) multiply({0.0, -0.5}, {0.0, 0.5});
  return poly;
}

struct RadialMoments {
  // R_{n,m} = sum_q w_q e^{-gamma u^2} u^{m+1} B_n(u), index (n + M) * (M + 1) + m.
  std::vector<Complex> R;
  // Same sums with |B_n| replaced by the Bessel series tail bound.
  std::vector<double> bessel_err;
};

RadialMoments radial_moments(const PhysicsConfig& cfg, double r, int M, KernelMode mode,
                             const GaussRule& rule) {
  const std::size_t width = static_cast<std::size_t>(M) + 1;
  std::vector<ComplexCompensatedSum> acc(width * (2 * width - 1));
  std::vector<double> err(acc.size(), 0.0);
  const Complex rot = std::polar(1.0, 0.25 * kPi);
  const double gamma = cfg.gamma();
  const double xi = cfg.xi();
  std::vector<Complex> b(2 * width - 1);
  std::vector<double> bt(2 * width - 1);

  for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
    const double u = rule.nodes[q];
    std::fill(b.begin(), b.end(), Complex{});
    std::fill(bt.begin(), bt.end(), 0.0);
    if (mode == KernelMode::unit) {
      b[M] = 1.0;
    } else {
      const Complex z = cfg.scale() * r * u * rot;
      for (int n = -M; n <= M; ++n) {
        const double nu = std::abs(n - xi);
        const BesselValue j = bessel_j(BesselOrder(nu), z);
        b[n + M] = i_pow_neg(nu) * j.value;
        bt[n + M] = j.tail_bound;
      }
    }
    double weight = rule.weights[q] * std::exp(-gamma * u * u) * u;
    for (int m = 0; m <= M; ++m) {
      for (int n = -m; n <= m; ++n) {
        const std::size_t at = static_cast<std::size_t>(n + M) * width + m;
        acc[at] += weight * b[n + M];
        err[at] += weight * bt[n + M];
      }
      weight *= u;
    }
  }
  RadialMoments out;
  out.R.resize(acc.size());
  for (std::size_t k = 0; k < acc.size(); ++k) out.R[k] = acc[k].value();
  out.bessel_err = std::move(err);
  return out;
}

// Upper bound on sum_{m > M} S^m / m! * Gamma((m+2)/2) / (2 k^{(m+2)/2}).
// Uses Gamma(x + 1/2) <= sqrt(x) Gamma(x) for the geometric remainder.
double coefficient_series_tail(double k, double S, int M) {
  if (S == 0.0) return 0.0;
  const double log_s = std::log(S);
  CompensatedSum acc;
  for (int m = M + 1;; ++m) {
    const double term =
        std::exp(m * log_s - ln_gamma(m + 1.0) + log_moment(k, m));
    const double ratio = S / (m + 1.0) * std::sqrt(0.5 * (m + 2) / k);
    if (ratio <= 0.5) {
      acc += term / (1.0 - ratio);
      return acc.value();
    }
    acc += term;
  }
}

Complex phase_power(int m) {
  // (i e^{i pi/4})^m = e^{3 i pi m / 4}, reduced mod 8 to keep the phase exact.
  return std::polar(1.0, 0.75 * kPi * (m % 8));
}

using CacheKey = std::tuple<double, double, double, double, double, double, int, int, int, double,
                            double, int>;

std::mutex& cache_mutex() {
  static std::mutex mu;
  return mu;
}

std::map<CacheKey, std::shared_ptr<const CoefficientTable>>& cache() {
  static std::map<CacheKey, std::shared_ptr<const CoefficientTable>> tables;
  return tables;
}

double series_tail_for(const CoefficientTable& table, double S) {
  const PhysicsConfig& cfg = table.config();
  return cfg.prefactor() * table.K() * coefficient_series_tail(0.5 * cfg.gamma(), S, table.M_max());
}

}  // namespace

double coefficient_bound_constant(const PhysicsConfig& cfg, double r, KernelMode mode) {
  if (mode == KernelMode::unit) return 2.0 * kPi;
  const double k = 0.5 * cfg.gamma();
  const GrowthMajorant maj = radial_majorant(cfg, r, -1, mode);
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0;; ++i) {
    const double u = i * kScanStep;
    const double bound = f_xi_bound(cfg, r, u);
    if (bound > 0.0) best = std::max(best, -k * u * u + std::log(bound));
    // Past the majorant's peak and far below the running maximum nothing larger can follow.
    const double slope = maj.power / (1.0 + u) - 2.0 * k * u + maj.rate;
    const double log_maj = -k * u * u + std::log(maj.coeff) + maj.power * std::log1p(u) + maj.rate * u;
    if (slope < 0.0 && log_maj < best - 1.0) break;
  }
  return 2.0 * kPi * std::exp(best);
}

double CoefficientTable::bound(int m) const {
  return K_ * std::exp(log_moment(0.5 * cfg_.gamma(), m));
}

CoefficientTable CoefficientTable::build(const PhysicsConfig& cfg, const PolarPoint& target,
                                         int M_max, const QuadratureSpec& spec, KernelMode mode) {
  spec.validate();
  if (M_max < 0 || M_max > kMaxSeriesOrder) {
    throw std::invalid_argument("CoefficientTable: M_max must lie in [0, " +
                                std::to_string(kMaxSeriesOrder) + "]");
  }
  CoefficientTable table(cfg, target);
  table.mode_ = mode;
  table.M_max_ = M_max;
  table.tol_ = spec.tol;
  table.K_ = coefficient_bound_constant(cfg, target.r, mode);
  table.u_max_ = spec.u_max > 0.0 ? spec.u_max
                                  : choose_table_cutoff(cfg, target.r, M_max, spec.tol, mode);

  const RadialMoments coarse = radial_moments(
      cfg, target.r, M_max, mode, composite_gauss_legendre(spec.n_u, 0.0, table.u_max_));
  const RadialMoments fine = radial_moments(
      cfg, target.r, M_max, mode, composite_gauss_legendre(2 * spec.n_u, 0.0, table.u_max_));

  const std::size_t width = static_cast<std::size_t>(M_max) + 1;
  std::vector<Complex> mode_phase(2 * width - 1);
  for (int n = -M_max; n <= M_max; ++n) mode_phase[n + M_max] = std::polar(2.0 * kPi, n * target.phi);

  table.entries_.resize(index(M_max, M_max) + 1);
  table.errors_.resize(table.entries_.size());
  for (int m = 0; m <= M_max; ++m) {
    const double radial_tail =
        2.0 * kPi * gaussian_tail_bound(cfg.gamma(), table.u_max_, radial_majorant(cfg, target.r, m, mode));
    for (int l = 0; l <= m; ++l) {
      const auto tau = trig_monomial(m - l, l);
      ComplexCompensatedSum c_fine, c_coarse;
      double bessel = 0.0;
      for (int n = -m; n <= m; ++n) {
        const Complex t = tau[n + m];
        if (t == Complex{}) continue;
        const std::size_t at = static_cast<std::size_t>(n + M_max) * width + m;
        const Complex w = mode_phase[n + M_max] * t;
        c_fine += w * fine.R[at];
        c_coarse += w * coarse.R[at];
        bessel += std::abs(w) * fine.bessel_err[at];
      }
      table.entries_[index(m, l)] = c_fine.value();
      table.errors_[index(m, l)] = std::abs(c_fine.value() - c_coarse.value()) + bessel + radial_tail;
    }
  }
  return table;
}

std::shared_ptr<const CoefficientTable> coefficient_table(const PhysicsConfig& cfg,
                                                          const PolarPoint& target, int M_max,
                                                          const QuadratureSpec& spec,
                                                          KernelMode mode) {
  const CacheKey key{cfg.M(),      cfg.hbar(), cfg.t(),    cfg.xi(),  target.r,
                     target.phi,   M_max,      spec.n_theta, spec.n_u, spec.u_max,
                     spec.tol,     static_cast<int>(mode)};
  {
    std::lock_guard<std::mutex> lock(cache_mutex());
    auto it = cache().find(key);
    if (it != cache().end()) return it->second;
  }
  auto table = std::make_shared<const CoefficientTable>(
      CoefficientTable::build(cfg, target, M_max, spec, mode));
  std::lock_guard<std::mutex> lock(cache_mutex());
  return cache().emplace(key, std::move(table)).first->second;
}

void clear_coefficient_cache() {
  std::lock_guard<std::mutex> lock(cache_mutex());
  cache().clear();
}

FieldValue c_ml(const PhysicsConfig& cfg, const PolarPoint& target, int m, int l,
                const QuadratureSpec& spec, KernelMode mode) {
  const OperatorIndex idx(m, l);
  const auto table = coefficient_table(cfg, target, idx.m, spec, mode);
  FieldValue out;
  out.value = table->at(m, l);
  out.error = table->error(m, l);
  out.diagnostics.terms_used = 2 * spec.n_u;
  return out;
}

int required_series_order(const PhysicsConfig& cfg, const PolarPoint& target, double S,
                          double tol, KernelMode mode) {
  const double scale = cfg.prefactor() * coefficient_bound_constant(cfg, target.r, mode);
  const double k = 0.5 * cfg.gamma();
  for (int M = 0; M <= kMaxSeriesOrder; ++M) {
    if (scale * coefficient_series_tail(k, S, M) <= tol) return M;
  }
  return kMaxSeriesOrder + 1;
}

FieldValue psi_series(const CoefficientTable& table, Complex a, Complex b) {
  const PhysicsConfig& cfg = table.config();
  const double S = std::abs(a) + std::abs(b);
  const double tail = series_tail_for(table, S);
  if (tail > table.tol()) {
    const int need = required_series_order(cfg, table.target(), S, table.tol(), table.mode());
    throw NumericalError(ErrorCode::series_tail,
                         "series tail exceeds tolerance: " + std::to_string(tail) +
                             " at M_max = " + std::to_string(table.M_max()) +
                             ", required M_max = " + std::to_string(need),
                         tail, need);
  }

  const int M = table.M_max();
  std::vector<Complex> ap(M + 1), bp(M + 1);
  ap[0] = bp[0] = 1.0;
  for (int k = 1; k <= M; ++k) {
    ap[k] = ap[k - 1] * a / static_cast<double>(k);
    bp[k] = bp[k - 1] * b / static_cast<double>(k);
  }

  ComplexCompensatedSum acc;
  CompensatedSum err;
  for (int m = 0; m <= M; ++m) {
    const Complex ph = phase_power(m);
    for (int l = 0; l <= m; ++l) {
      const Complex w = ph * ap[m - l] * bp[l];
      acc += w * table.at(m, l);
      err += std::abs(w) * table.error(m, l);
    }
  }

  const Complex pre = Complex{0.0, 1.0} * cfg.prefactor() *
                      std::polar(1.0, cfg.gamma() * table.target().r * table.target().r);
  FieldValue out;
  out.value = pre * acc.value();
  out.diagnostics.series_tail = tail;
  out.diagnostics.node_doubling = cfg.prefactor() * err.value();
  out.diagnostics.condition_number = acc.condition_number();
  out.diagnostics.terms_used = (M + 1) * (M + 2) / 2;
  out.error = out.diagnostics.node_doubling + tail;
  return out;
}

FieldValue psi_series(const PhysicsConfig& cfg, Complex a, Complex b, const PolarPoint& target,
                      int M_max, const QuadratureSpec& spec) {
  return psi_series(*coefficient_table(cfg, target, M_max, spec), a, b);
}

FieldValue psi_gh(const CoefficientTable& table, double a, const EntireSeries& g,
                  const EntireSeries& h, const ConsistencyCheck& check) {
  const Complex ga = entire_eval(g, a);
  const Complex ha = entire_eval(h, a);
  FieldValue out = psi_series(table, ga, ha);
  if (check.enabled) {
    const EntireSeries f = EntireSeries::exponential(a, check.D);
    const int cutoff = std::max({1, g.degree(), h.degree()});
    double gap = 0.0;
    for (int m = 0; m <= check.m_check; ++m) {
      for (int l = 0; l <= m; ++l) {
        const Complex op = operator_apply_at_zero(g, h, OperatorIndex(m, l), f, cutoff);
        const Complex direct = std::pow(ga, m - l) * std::pow(ha, l);
        gap = std::max(gap, std::abs(op - direct));
      }
    }
    out.diagnostics.operator_consistency = gap;
  }
  return out;
}

FieldValue psi_gh(const PhysicsConfig& cfg, double a, const EntireSeries& g, const EntireSeries& h,
                  const PolarPoint& target, int M_max, const QuadratureSpec& spec,
                  const ConsistencyCheck& check) {
  return psi_gh(*coefficient_table(cfg, target, M_max, spec), a, g, h, check);
}

FieldValue supershift_sum(const CoefficientTable& table, const SuperoscSpec& spec) {
  // Only n is checked: a = 1 is a legitimate degenerate datum here.
  if (spec.n < 1) throw std::invalid_argument("supershift_sum: n must be >= 1");
  const auto lam = superosc_frequencies(spec.n);
  const auto C = coeff_C_all(spec.n, spec.a);
  ComplexCompensatedSum acc;
  CompensatedSum err, tail;
  for (int j = 0; j <= spec.n; ++j) {
    if (C[j] == 0.0) continue;
    const FieldValue psi =
        psi_series(table, entire_eval(spec.g, lam[j]), entire_eval(spec.h, lam[j]));
    acc += C[j] * psi.value;
    err += std::abs(C[j]) * psi.error;
    tail += std::abs(C[j]) * psi.diagnostics.series_tail;
  }
  FieldValue out;
  out.value = acc.value();
  out.error = err.value();
  out.diagnostics.series_tail = tail.value();
  out.diagnostics.condition_number = acc.condition_number();
  out.diagnostics.cancellation_warning = out.diagnostics.condition_number * kEps > kCancellationTol;
  out.diagnostics.terms_used = spec.n + 1;
  return out;
}

namespace {

double datum_reach(const SuperoscSpec& spec, const std::vector<int>& n_list) {
  auto reach = [&](double x) {
    return std::abs(entire_eval(spec.g, x)) + std::abs(entire_eval(spec.h, x));
  };
  double S = reach(spec.a);
  for (int n : n_list) {
    for (double x : superosc_frequencies(n)) S = std::max(S, reach(x));
  }
  return S;
}

int resolve_order(const PhysicsConfig& cfg, const PolarPoint& target, double S, double tol,
                  int M_max) {
  if (M_max > 0) return M_max;
  const int need = required_series_order(cfg, target, S, tol);
  if (need > kMaxSeriesOrder) {
    throw NumericalError(ErrorCode::series_tail,
                         "no series order up to " + std::to_string(kMaxSeriesOrder) +
                             " meets the tolerance",
                         0.0, need);
  }
  return need;
}

}  // namespace

FieldValue supershift_sum(const PhysicsConfig& cfg, const SuperoscSpec& spec,
                          const PolarPoint& target, int M_max, const QuadratureSpec& qspec) {
  const int M = resolve_order(cfg, target, datum_reach(spec, {spec.n}), qspec.tol, M_max);
  return supershift_sum(*coefficient_table(cfg, target, M, qspec), spec);
}

SupershiftReport supershift_convergence_report(const PhysicsConfig& cfg, const SuperoscSpec& spec,
                                               const PolarPoint& target,
                                               const std::vector<int>& n_list, int M_max,
                                               const QuadratureSpec& qspec) {
  if (n_list.empty()) throw std::invalid_argument("supershift report: n_list is empty");
  if (!std::is_sorted(n_list.begin(), n_list.end())) {
    throw std::invalid_argument("supershift report: n_list must be ascending");
  }
  SupershiftReport report;
  report.M_max = resolve_order(cfg, target, datum_reach(spec, n_list), qspec.tol, M_max);
  const auto table = coefficient_table(cfg, target, report.M_max, qspec);
  report.limit = psi_gh(*table, spec.a, spec.g, spec.h);
  for (int n : n_list) {
    SuperoscSpec s = spec;
    s.n = n;
    const FieldValue psi = supershift_sum(*table, s);
    SupershiftRow row;
    row.n = n;
    row.value = psi.value;
    row.error = std::abs(psi.value - report.limit.value);
    row.kappa = psi.diagnostics.condition_number;
    row.error_estimate = psi.error;
    row.flagged = row.kappa * kEps > row.error;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace abshift
