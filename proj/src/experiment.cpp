#include "abshift/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "abshift/iodo.hpp"
#include "abshift/quadrature.hpp"
#include "abshift/specfun.hpp"
#include "json.hpp"

namespace abshift {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

template <typename T>
T get_or(const json& node, const char* key, T fallback) {
  if (!node.contains(key) || node.at(key).is_null()) return fallback;
  return node.at(key).get<T>();
}

Complex parse_complex(const json& node) {
  if (node.is_number()) return {node.get<double>(), 0.0};
  if (node.is_array() && node.size() == 2) return {node[0].get<double>(), node[1].get<double>()};
  throw ConfigError("expected a number or [re, im]");
}

EntireSeries parse_series(const json& node) {
  std::vector<Complex> c;
  for (const json& v : node) c.push_back(parse_complex(v));
  return EntireSeries(std::move(c));
}

Record base_record(const std::string& experiment, int point) {
  Record rec;
  rec.experiment = experiment;
  rec.point = point;
  return rec;
}

void fill_physics(Record& rec, const PhysicsConfig& cfg) {
  rec.t = cfg.t();
  rec.xi = cfg.xi();
}

Record error_record(const std::string& experiment, int point, const NumericalError& err) {
  Record rec = base_record(experiment, point);
  rec.flags["numerical_error"] = true;
  rec.error = err.achieved();
  rec.message = err.what();
  if (err.suggestion() > 0) rec.params["suggestion"] = err.suggestion();
  return rec;
}

// ---- experiments -------------------------------------------------------------

void run_superosc(const ExperimentConfig& cfg, RunResult& out) {
  const Complex i{0.0, 1.0};
  const Complex ga = entire_eval(cfg.superosc.g, cfg.superosc.a);
  const Complex ha = entire_eval(cfg.superosc.h, cfg.superosc.a);
  for (std::size_t k = 0; k < cfg.targets.size(); ++k) {
    const PolarPoint& p = cfg.targets[k];
    const double x = p.r * std::cos(p.phi);
    const double y = p.r * std::sin(p.phi);
    const Complex limit = std::exp(i * ga * x) * std::exp(i * ha * y);
    for (int n : cfg.n_list) {
      SuperoscSpec spec = cfg.superosc;
      spec.n = n;
      const SumResult s = y_n(x, y, spec);
      Record rec = base_record("superosc", static_cast<int>(k));
      rec.r = p.r;
      rec.phi = p.phi;
      rec.a = spec.a;
      rec.n = n;
      rec.re = s.value.real();
      rec.im = s.value.imag();
      rec.error = std::abs(s.value - limit);
      rec.kappa = s.kappa;
      rec.flags["cancellation_warning"] = s.cancellation_warning;
      rec.params["x"] = x;
      rec.params["y"] = y;
      rec.params["limit_re"] = limit.real();
      rec.params["limit_im"] = limit.imag();
      out.records.push_back(std::move(rec));
    }
  }
}

void run_kernel(const ExperimentConfig& cfg, RunResult& out) {
  for (std::size_t k = 0; k < cfg.targets.size(); ++k) {
    const PolarPoint& p = cfg.targets[k];
    for (double rho : cfg.kernel_rho) {
      for (double theta : cfg.kernel_theta) {
        try {
          const KernelValue f =
              f_xi(cfg.physics, p.r, p.phi, theta, rho, cfg.truncation.winding);
          const Complex K = kernel_K(cfg.physics, p, PolarPoint(rho, theta), cfg.truncation.winding);
          const double bound = f_xi_bound(cfg.physics, p.r, rho);
          Record rec = base_record("kernel", static_cast<int>(k));
          rec.r = p.r;
          rec.phi = p.phi;
          fill_physics(rec, cfg.physics);
          rec.re = f.value.real();
          rec.im = f.value.imag();
          rec.error = f.tail;
          rec.flags["bound_ok"] = std::abs(f.value) <= bound;
          rec.params["rho"] = rho;
          rec.params["theta"] = theta;
          rec.params["bound"] = bound;
          rec.params["N"] = f.N;
          rec.params["K_re"] = K.real();
          rec.params["K_im"] = K.imag();
          if (!rec.flags["bound_ok"]) out.exit_code = 3;
          out.records.push_back(std::move(rec));
        } catch (const NumericalError& e) {
          out.records.push_back(error_record("kernel", static_cast<int>(k), e));
          out.exit_code = 3;
        }
      }
    }
  }
}

void run_evolve(const ExperimentConfig& cfg, RunResult& out) {
  const Complex a = cfg.evolve_a;
  const Complex b = cfg.evolve_b;
  const QuadratureSpec& q = cfg.truncation.quadrature;
  for (std::size_t k = 0; k < cfg.targets.size(); ++k) {
    const PolarPoint& p = cfg.targets[k];
    try {
      const FieldValue direct = psi_direct(cfg.physics, a, b, p, cfg.truncation.winding, q);
      const int M = cfg.truncation.M_max > 0
                        ? cfg.truncation.M_max
                        : required_series_order(cfg.physics, p, std::abs(a) + std::abs(b), q.tol);
      const FieldValue series = psi_series(cfg.physics, a, b, p, M, q);
      Record rec = base_record("evolve", static_cast<int>(k));
      rec.r = p.r;
      rec.phi = p.phi;
      fill_physics(rec, cfg.physics);
      rec.a = a.real();
      rec.re = series.value.real();
      rec.im = series.value.imag();
      rec.error = std::abs(series.value - direct.value);
      rec.kappa = series.diagnostics.condition_number;
      rec.flags["agree"] = *rec.error <= series.error + direct.error;
      rec.params["a_im"] = a.imag();
      rec.params["b_re"] = b.real();
      rec.params["b_im"] = b.imag();
      rec.params["M_max"] = M;
      rec.params["series_error"] = series.error;
      rec.params["direct_re"] = direct.value.real();
      rec.params["direct_im"] = direct.value.imag();
      rec.params["direct_error"] = direct.error;
      out.records.push_back(std::move(rec));
    } catch (const NumericalError& e) {
      out.records.push_back(error_record("evolve", static_cast<int>(k), e));
      out.exit_code = 3;
    }
  }
}

void run_supershift(const ExperimentConfig& cfg, RunResult& out) {
  for (std::size_t k = 0; k < cfg.targets.size(); ++k) {
    const PolarPoint& p = cfg.targets[k];
    try {
      const SupershiftReport rep =
          supershift_convergence_report(cfg.physics, cfg.superosc, p, cfg.n_list,
                                        cfg.truncation.M_max, cfg.truncation.quadrature);
      double previous = std::numeric_limits<double>::infinity();
      for (const SupershiftRow& row : rep.rows) {
        Record rec = base_record("supershift", static_cast<int>(k));
        rec.r = p.r;
        rec.phi = p.phi;
        fill_physics(rec, cfg.physics);
        rec.a = cfg.superosc.a;
        rec.n = row.n;
        rec.re = row.value.real();
        rec.im = row.value.imag();
        rec.error = row.error;
        rec.kappa = row.kappa;
        rec.flags["decreasing"] = row.error < previous;
        rec.flags["kappa_dominates"] = row.flagged;
        rec.flags["cancellation_warning"] = row.kappa * kEps > kCancellationTol;
        rec.params["limit_re"] = rep.limit.value.real();
        rec.params["limit_im"] = rep.limit.value.imag();
        rec.params["limit_error"] = rep.limit.error;
        rec.params["error_estimate"] = row.error_estimate;
        rec.params["operator_consistency"] = rep.limit.diagnostics.operator_consistency;
        rec.params["M_max"] = rep.M_max;
        previous = row.error;
        out.records.push_back(std::move(rec));
      }
    } catch (const NumericalError& e) {
      out.records.push_back(error_record("supershift", static_cast<int>(k), e));
      out.exit_code = 3;
    }
  }
}

void run_verify_bounds(const ExperimentConfig& cfg, const RunOptions& opts, RunResult& out) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
  const Complex rot = std::polar(1.0, 0.25 * kPi);

  for (int s = 0; s < cfg.bound_samples; ++s) {
    const double r = draw(0.0, 2.0);
    const double rho = draw(0.0, 6.0);
    const double theta = draw(0.0, 2.0 * kPi);
    const double phi = draw(0.0, 2.0 * kPi);
    const double t = draw(0.5, 2.0);
    const double xi = draw(-2.0, 2.0);
    try {
      const PhysicsConfig pc(cfg.physics.M(), cfg.physics.hbar(), t, xi);
      const KernelValue real = f_xi(pc, r, phi, theta, rho, cfg.truncation.winding);
      const KernelValue rotated = f_xi(pc, r, phi, theta, rho * rot, cfg.truncation.winding);
      const double bound = f_xi_bound(pc, r, rho);
      Record rec = base_record("verify-bounds:kernel", s);
      rec.r = r;
      rec.phi = phi;
      fill_physics(rec, pc);
      rec.re = real.value.real();
      rec.im = real.value.imag();
      rec.error = std::max(real.tail, rotated.tail);
      rec.flags["bound_ok_real"] = std::abs(real.value) <= bound;
      rec.flags["bound_ok_rotated"] = std::abs(rotated.value) <= bound;
      rec.flags["bound_ok"] = rec.flags["bound_ok_real"] && rec.flags["bound_ok_rotated"];
      rec.params["rho"] = rho;
      rec.params["theta"] = theta;
      rec.params["bound"] = bound;
      rec.params["abs_real"] = std::abs(real.value);
      rec.params["abs_rotated"] = std::abs(rotated.value);
      if (!rec.flags["bound_ok"]) out.exit_code = 3;
      out.records.push_back(std::move(rec));
    } catch (const NumericalError& e) {
      out.records.push_back(error_record("verify-bounds:kernel", s, e));
      out.exit_code = 3;
    }
  }

  int idx = 0;
  for (double q : {1.0, 1.5, 2.0, 4.0}) {
    for (int n = 0; n <= 60; ++n) {
      const double lhs = ln_gamma(n / q + 1.0);
      const double rhs = ln_gamma(n + 1.0) / q;
      Record rec = base_record("verify-bounds:gamma", idx++);
      rec.n = n;
      rec.error = lhs - rhs;
      rec.flags["bound_ok"] = lhs <= rhs;
      rec.params["q"] = q;
      rec.params["lhs"] = lhs;
      rec.params["rhs"] = rhs;
      if (!rec.flags["bound_ok"]) out.exit_code = 3;
      out.records.push_back(std::move(rec));
    }
  }

  const EntireSeries g = EntireSeries::identity();
  const EntireSeries h = EntireSeries::polynomial({0.0, 0.0, 1.0});
  const std::vector<EntireSeries> tests{EntireSeries::exponential(1.5, 20),
                                        EntireSeries::polynomial({0.0, 0.0, 0.0, 1.0}),
                                        f_n_series(8, 1.3, 20)};
  idx = 0;
  for (std::size_t f = 0; f < tests.size(); ++f) {
    const DecayCertificate cert = coeff_decay_certificate(tests[f]);
    for (int m = 0; m <= 6; ++m) {
      for (int l = 0; l <= m; ++l) {
        const OperatorIndex op(m, l);
        const double lhs = std::abs(operator_apply_at_zero(g, h, op, tests[f], 2));
        const double rhs = operator_estimate(g, h, op, cert);
        Record rec = base_record("verify-bounds:operator", idx++);
        rec.n = m;
        rec.error = lhs - rhs;
        rec.flags["bound_ok"] = lhs <= rhs;
        rec.params["f"] = static_cast<double>(f);
        rec.params["m"] = m;
        rec.params["l"] = l;
        rec.params["lhs"] = lhs;
        rec.params["rhs"] = rhs;
        if (!rec.flags["bound_ok"]) out.exit_code = 3;
        out.records.push_back(std::move(rec));
      }
    }
  }
}

std::string format_double(double v) {
  if (!std::isfinite(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

struct Columns {
  std::vector<std::string> flags;
  std::vector<std::string> params;
};

Columns columns_of(const std::vector<Record>& records) {
  std::set<std::string> flags, params;
  for (const Record& r : records) {
    for (const auto& kv : r.flags) flags.insert(kv.first);
    for (const auto& kv : r.params) params.insert(kv.first);
  }
  return {{flags.begin(), flags.end()}, {params.begin(), params.end()}};
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("config root must be an object");

  ExperimentConfig cfg;
  try {
    const json physics = root.value("physics", json::object());
    cfg.physics = PhysicsConfig(get_or(physics, "M", 1.0), get_or(physics, "hbar", 1.0),
                                get_or(physics, "t", 1.0), get_or(physics, "xi", 0.0));

    const json so = root.value("superosc", json::object());
    cfg.superosc.a = get_or(so, "a", 1.3);
    if (so.contains("g")) cfg.superosc.g = parse_series(so.at("g"));
    if (so.contains("h")) cfg.superosc.h = parse_series(so.at("h"));
    if (so.contains("n")) {
      const json& n = so.at("n");
      cfg.n_list = n.is_array() ? n.get<std::vector<int>>() : std::vector<int>{n.get<int>()};
    }

    for (const json& p : root.value("targets", json::array())) {
      cfg.targets.emplace_back(get_or(p, "r", 0.0), get_or(p, "phi", 0.0));
    }

    const json tr = root.value("truncation", json::object());
    cfg.truncation.winding.N = get_or(tr, "N", cfg.truncation.winding.N);
    cfg.truncation.winding.tail_tol = get_or(tr, "tail_tol", cfg.truncation.winding.tail_tol);
    cfg.truncation.quadrature.n_theta = get_or(tr, "n_theta", cfg.truncation.quadrature.n_theta);
    cfg.truncation.quadrature.n_u = get_or(tr, "n_u", cfg.truncation.quadrature.n_u);
    cfg.truncation.quadrature.u_max = get_or(tr, "u_max", cfg.truncation.quadrature.u_max);
    cfg.truncation.quadrature.tol = get_or(tr, "tol", cfg.truncation.quadrature.tol);
    cfg.truncation.M_max = get_or(tr, "M_max", 0);

    const json ev = root.value("evolve", json::object());
    if (ev.contains("a")) cfg.evolve_a = parse_complex(ev.at("a"));
    if (ev.contains("b")) cfg.evolve_b = parse_complex(ev.at("b"));

    const json ke = root.value("kernel", json::object());
    if (ke.contains("rho")) cfg.kernel_rho = ke.at("rho").get<std::vector<double>>();
    if (ke.contains("theta")) cfg.kernel_theta = ke.at("theta").get<std::vector<double>>();

    const json bo = root.value("bounds", json::object());
    cfg.bound_samples = get_or(bo, "samples", cfg.bound_samples);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config type error: ") + e.what());
  } catch (const NumericalError& e) {
    throw ConfigError(e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  if (cfg.targets.empty()) throw ConfigError("no target points");
  try {
    cfg.superosc.validate();
    cfg.truncation.quadrature.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.n_list.empty()) throw ConfigError("superosc.n must list at least one order");
  for (std::size_t k = 0; k < cfg.n_list.size(); ++k) {
    if (cfg.n_list[k] < 1) throw ConfigError("superosc.n entries must be >= 1");
    if (k > 0 && cfg.n_list[k] <= cfg.n_list[k - 1]) {
      throw ConfigError("superosc.n must be strictly ascending");
    }
  }
  if (cfg.truncation.winding.N < 1) throw ConfigError("truncation.N must be >= 1");
  if (cfg.bound_samples < 1) throw ConfigError("bounds.samples must be >= 1");
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_jsonl(const Record& rec) {
  ordered j;
  auto opt = [](const std::optional<double>& v) -> ordered {
    if (!v || !std::isfinite(*v)) return nullptr;
    return *v;
  };
  j["experiment"] = rec.experiment;
  j["r"] = opt(rec.r);
  j["phi"] = opt(rec.phi);
  j["t"] = opt(rec.t);
  j["xi"] = opt(rec.xi);
  j["a"] = opt(rec.a);
  j["n"] = rec.n ? ordered(*rec.n) : ordered(nullptr);
  j["re"] = opt(rec.re);
  j["im"] = opt(rec.im);
  j["error"] = opt(rec.error);
  j["kappa"] = opt(rec.kappa);
  j["flags"] = ordered::object();
  for (const auto& [k, v] : rec.flags) j["flags"][k] = v;
  j["params"] = ordered::object();
  for (const auto& [k, v] : rec.params) j["params"][k] = opt(v);
  j["message"] = rec.message ? ordered(*rec.message) : ordered(nullptr);
  return j.dump();
}

std::string csv_header(const std::vector<Record>& records) {
  const Columns cols = columns_of(records);
  std::string out = "experiment,r,phi,t,xi,a,n,re,im,error,kappa";
  for (const auto& f : cols.flags) out += ",flag_" + f;
  for (const auto& p : cols.params) out += ",param_" + p;
  return out + ",message";
}

std::string to_csv_row(const Record& rec, const std::vector<Record>& records) {
  const Columns cols = columns_of(records);
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  std::string out = csv_escape(rec.experiment);
  for (const auto& v : {rec.r, rec.phi, rec.t, rec.xi, rec.a}) out += "," + opt(v);
  out += "," + (rec.n ? std::to_string(*rec.n) : std::string());
  for (const auto& v : {rec.re, rec.im, rec.error, rec.kappa}) out += "," + opt(v);
  for (const auto& f : cols.flags) {
    auto it = rec.flags.find(f);
    out += ",";
    if (it != rec.flags.end()) out += it->second ? "true" : "false";
  }
  for (const auto& p : cols.params) {
    auto it = rec.params.find(p);
    out += ",";
    if (it != rec.params.end()) out += format_double(it->second);
  }
  out += "," + (rec.message ? csv_escape(*rec.message) : std::string());
  return out;
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"superosc", "kernel", "evolve", "supershift",
                                              "verify-bounds"};
  return names;
}

Record config_error_record(const std::string& experiment, const std::string& message) {
  Record rec = base_record(experiment, 0);
  rec.flags["config_error"] = true;
  rec.message = message;
  return rec;
}

RunResult run_experiment(const std::string& name, const ExperimentConfig& cfg,
                         const RunOptions& opts) {
  ExperimentConfig run = cfg;
  if (opts.tol) {
    if (!(*opts.tol > 0.0)) throw ConfigError("--tol must be > 0");
    run.truncation.quadrature.tol = *opts.tol;
  }
  RunResult out;
  if (name == "superosc") {
    run_superosc(run, out);
  } else if (name == "kernel") {
    run_kernel(run, out);
  } else if (name == "evolve") {
    run_evolve(run, out);
  } else if (name == "supershift") {
    run_supershift(run, out);
  } else if (name == "verify-bounds") {
    run_verify_bounds(run, opts, out);
  } else {
    throw ConfigError("unknown experiment: " + name);
  }
  std::stable_sort(out.records.begin(), out.records.end(), [](const Record& x, const Record& y) {
    return std::tie(x.experiment, x.point) < std::tie(y.experiment, y.point) ||
           (std::tie(x.experiment, x.point) == std::tie(y.experiment, y.point) &&
            x.n.value_or(-1) < y.n.value_or(-1));
  });
  return out;
}

}  // namespace abshift
