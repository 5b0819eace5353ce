#include "hyloc/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "hyloc/crlb.hpp"
#include "hyloc/geometry.hpp"
#include "hyloc/mm_solver.hpp"
#include "hyloc/objective.hpp"
#include "hyloc/rng.hpp"
#include "hyloc/simulate.hpp"
#include "hyloc/wls.hpp"

namespace hyloc {

const char* sweep_var_name(SweepVar v) noexcept {
  switch (v) {
    case SweepVar::Sigma: return "sigma";
    case SweepVar::Radius: return "radius";
    case SweepVar::Anchors: return "anchors";
    case SweepVar::NlosBeta: return "nlos-beta";
    case SweepVar::NlosPaths: return "nlos-paths";
  }
  return "unknown";
}

SweepVar parse_sweep_var(const std::string& name) {
  for (SweepVar v : {SweepVar::Sigma, SweepVar::Radius, SweepVar::Anchors,
                     SweepVar::NlosBeta, SweepVar::NlosPaths})
    if (name == sweep_var_name(v)) return v;
  throw std::invalid_argument("unknown sweep variable \"" + name + "\"");
}

void ExperimentConfig::validate() const {
  if (grid.empty()) throw std::invalid_argument("config: grid must be nonempty");
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (methods.empty() && !include_baseline)
    throw std::invalid_argument("config: no methods selected");
  for (const TypeMask& m : methods)
    if (m.empty()) throw std::invalid_argument("config: empty method mask");
  if (var != SweepVar::Anchors && n_anchors < 2)
    throw std::invalid_argument("config: n_anchors must be >= 2");
  if (var != SweepVar::Radius && !(radius > 0.0))
    throw std::invalid_argument("config: radius must be > 0");
  if (!(sigma >= 0.0)) throw std::invalid_argument("config: sigma must be >= 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("config: gamma must be > 0");
  if (t_max < 1) throw std::invalid_argument("config: t_max must be >= 1");
  if (!(eps_c > 0.0)) throw std::invalid_argument("config: eps_c must be > 0");
  if (nlos_beta < 0.0) throw std::invalid_argument("config: nlos_beta must be >= 0");
  if (nlos_paths < 0) throw std::invalid_argument("config: nlos_paths must be >= 0");
  for (double v : grid) {
    switch (var) {
      case SweepVar::Sigma:
        if (!(v >= 0.0)) throw std::invalid_argument("config: sigma grid value < 0");
        break;
      case SweepVar::Radius:
        if (!(v > 0.0)) throw std::invalid_argument("config: radius grid value <= 0");
        break;
      case SweepVar::Anchors:
        if (v < 2.0 || v != std::floor(v))
          throw std::invalid_argument("config: anchors grid values must be integers >= 2");
        break;
      case SweepVar::NlosBeta:
        if (!(v >= 0.0)) throw std::invalid_argument("config: beta grid value < 0");
        break;
      case SweepVar::NlosPaths:
        if (v < 0.0 || v != std::floor(v))
          throw std::invalid_argument("config: nlos-paths grid values must be integers >= 0");
        break;
    }
  }
}

double rmse(const std::vector<double>& errors) {
  if (errors.empty()) throw std::invalid_argument("rmse: empty error list");
  double sum_sq = 0.0;
  for (double e : errors) sum_sq += e * e;
  return std::sqrt(sum_sq / static_cast<double>(errors.size()));
}

namespace {

struct GridPoint {
  int n_anchors;
  double radius;
  double sigma;
  double nlos_beta;
  int nlos_paths;
};

GridPoint resolve_point(const ExperimentConfig& cfg, double value) {
  GridPoint p{cfg.n_anchors, cfg.radius, cfg.sigma, cfg.nlos_beta, cfg.nlos_paths};
  switch (cfg.var) {
    case SweepVar::Sigma: p.sigma = value; break;
    case SweepVar::Radius: p.radius = value; break;
    case SweepVar::Anchors: p.n_anchors = static_cast<int>(value); break;
    case SweepVar::NlosBeta: p.nlos_beta = value; break;
    case SweepVar::NlosPaths: p.nlos_paths = static_cast<int>(value); break;
  }
  return p;
}

MeasurementSet restrict_mask(const MeasurementSet& full, TypeMask mask) {
  MeasurementSet m;
  m.mask = mask;
  m.sigma = full.sigma;
  if (mask.toa) m.toa = full.toa;
  if (mask.tdoa) m.tdoa = full.tdoa;
  if (mask.rss) m.rss = full.rss;
  if (mask.aoa) m.aoa = full.aoa;
  return m;
}

struct CellSpec {
  std::string name;
  TypeMask mask;
  bool baseline;
};

struct TrialOut {
  std::vector<TrialRecord> records;    // per cell
  std::vector<double> crlb_trace;      // per cell
};

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
      .count();
}

TrialOut run_trial(const ExperimentConfig& cfg, const GridPoint& pt,
                   const std::vector<CellSpec>& cells, std::size_t grid_index,
                   int trial_index) {
  const std::uint64_t base = derive_seed(cfg.master_seed, grid_index, trial_index);
  const RssParams params(cfg.l0, cfg.gamma);
  const NetworkGeometry geom =
      generate_network(pt.n_anchors, pt.radius, derive_seed(base, 1));
  const Sigmas sigmas = Sigmas::equal(pt.n_anchors, pt.sigma);

  // All four types are simulated from per-type seed streams and every
  // method reads the same realization (common random numbers).
  TypeMask full_mask{true, true, true, true};
  MeasurementSet full =
      simulate_measurements(geom, params, sigmas, full_mask, derive_seed(base, 2));
  if (pt.nlos_beta > 0.0 && pt.nlos_paths > 0) {
    NlosConfig nlos{pt.nlos_beta, std::min(pt.nlos_paths, pt.n_anchors),
                    derive_seed(base, 3)};
    full = inject_nlos(full, nlos, pt.n_anchors);
  }
  const std::uint64_t init_seed = derive_seed(base, 4);

  TrialOut out;
  out.records.resize(cells.size());
  out.crlb_trace.resize(cells.size(), 0.0);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const CellSpec& cell = cells[c];
    const MeasurementSet ms = restrict_mask(full, cell.mask);
    const WeightSet weights =
        pt.sigma == 0.0
            ? unit_weights(cell.mask, pt.n_anchors)
            : compute_weights(geom, ms, params, WeightRanges::FromMeasurements);
    TrialRecord& rec = out.records[c];
    const auto t0 = std::chrono::steady_clock::now();
    if (cell.baseline) {
      const WlsResult res = wls_solve(ms, geom.anchors, weights, params, geom.dim);
      rec.ms = cfg.timing ? elapsed_ms(t0) : 0.0;
      rec.iterations = 1;
      rec.failed = !res.ok;
      rec.error_m = res.ok ? (res.estimate - geom.source).norm() : 0.0;
    } else {
      const Problem prob = make_problem(geom.anchors, ms, weights, params, geom.dim);
      SolverConfig scfg;
      scfg.t_max = cfg.t_max;
      scfg.eps_c = cfg.eps_c;
      scfg.init_upper = pt.radius / 4.0;
      scfg.seed = init_seed;
      const SolveResult res = solve(prob, scfg);
      rec.ms = cfg.timing ? elapsed_ms(t0) : 0.0;
      rec.iterations = res.iterations;
      rec.failed = !res.ok();
      rec.error_m = res.ok() ? (res.estimate - geom.source).norm() : 0.0;
    }
    if (pt.sigma > 0.0)
      out.crlb_trace[c] = hybrid_crlb(cell.mask, geom, sigmas, params).trace_crlb;
  }
  return out;
}

}  // namespace

RmseReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();

  std::vector<CellSpec> cells;
  for (const TypeMask& m : cfg.methods) cells.push_back({m.name(), m, false});
  if (cfg.include_baseline)
    cells.push_back({kBaselineMethodName, TypeMask{true, true, true, true}, true});

  RmseReport report;
  report.config = cfg;
  report.cells.resize(cells.size() * cfg.grid.size());

  for (std::size_t gi = 0; gi < cfg.grid.size(); ++gi) {
    const GridPoint pt = resolve_point(cfg, cfg.grid[gi]);
    if (pt.nlos_paths > pt.n_anchors)
      throw std::invalid_argument("config: nlos_paths exceeds anchor count");

    std::vector<TrialOut> outs(cfg.trials);
    int n_threads = cfg.threads > 0
                        ? cfg.threads
                        : static_cast<int>(std::thread::hardware_concurrency());
    n_threads = std::max(1, std::min(n_threads, cfg.trials));
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&]() {
      for (;;) {
        const int ti = next.fetch_add(1);
        if (ti >= cfg.trials) return;
        try {
          outs[ti] = run_trial(cfg, pt, cells, gi, ti);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    if (n_threads == 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    for (std::size_t c = 0; c < cells.size(); ++c) {
      MethodCell& cell = report.cells[c * cfg.grid.size() + gi];
      cell.method = cells[c].name;
      cell.grid_value = cfg.grid[gi];
      cell.trials.reserve(cfg.trials);
      std::vector<double> errors;
      double iter_sum = 0.0, ms_sum = 0.0, trace_sum = 0.0;
      for (int ti = 0; ti < cfg.trials; ++ti) {
        const TrialRecord& rec = outs[ti].records[c];
        cell.trials.push_back(rec);
        if (rec.failed)
          ++cell.failures;
        else
          errors.push_back(rec.error_m);
        iter_sum += rec.iterations;
        ms_sum += rec.ms;
        trace_sum += outs[ti].crlb_trace[c];
      }
      cell.rmse_m = errors.empty() ? std::numeric_limits<double>::quiet_NaN()
                                   : rmse(errors);
      cell.crlb_rmse_m = std::sqrt(trace_sum / cfg.trials);
      cell.mean_iters = iter_sum / cfg.trials;
      cell.mean_ms = ms_sum / cfg.trials;
    }
  }
  return report;
}

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

}  // namespace

std::string report_csv(const RmseReport& report) {
  std::string out = "method,grid_var,grid_value,rmse_m,crlb_rmse_m,mean_iters,mean_ms,failures\n";
  const char* var = sweep_var_name(report.config.var);
  for (const MethodCell& c : report.cells) {
    out += c.method;
    out += ',';
    out += var;
    out += ',';
    out += fmt_double(c.grid_value);
    out += ',';
    out += fmt_double(c.rmse_m);
    out += ',';
    out += fmt_double(c.crlb_rmse_m);
    out += ',';
    out += fmt_double(c.mean_iters);
    out += ',';
    out += fmt_double(c.mean_ms);
    out += ',';
    out += std::to_string(c.failures);
    out += '\n';
  }
  return out;
}

namespace {

using nlohmann::json;

json config_to_json(const ExperimentConfig& c) {
  json methods = json::array();
  for (const TypeMask& m : c.methods) methods.push_back(m.name());
  return json{{"var", sweep_var_name(c.var)},
              {"grid", c.grid},
              {"methods", methods},
              {"baseline", c.include_baseline},
              {"trials", c.trials},
              {"master_seed", c.master_seed},
              {"n_anchors", c.n_anchors},
              {"radius", c.radius},
              {"sigma", c.sigma},
              {"l0", c.l0},
              {"gamma", c.gamma},
              {"t_max", c.t_max},
              {"eps_c", c.eps_c},
              {"nlos_beta", c.nlos_beta},
              {"nlos_paths", c.nlos_paths},
              {"timing", c.timing},
              {"threads", c.threads}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.var = parse_sweep_var(j.at("var").get<std::string>());
  c.grid = j.at("grid").get<std::vector<double>>();
  c.methods.clear();
  for (const auto& name : j.at("methods")) c.methods.push_back(parse_mask(name));
  c.include_baseline = j.at("baseline").get<bool>();
  c.trials = j.at("trials").get<int>();
  c.master_seed = j.at("master_seed").get<std::uint64_t>();
  c.n_anchors = j.at("n_anchors").get<int>();
  c.radius = j.at("radius").get<double>();
  c.sigma = j.at("sigma").get<double>();
  c.l0 = j.at("l0").get<double>();
  c.gamma = j.at("gamma").get<double>();
  c.t_max = j.at("t_max").get<int>();
  c.eps_c = j.at("eps_c").get<double>();
  c.nlos_beta = j.at("nlos_beta").get<double>();
  c.nlos_paths = j.at("nlos_paths").get<int>();
  c.timing = j.at("timing").get<bool>();
  c.threads = j.at("threads").get<int>();
  return c;
}

}  // namespace

std::string report_json(const RmseReport& report) {
  json results = json::array();
  for (const MethodCell& c : report.cells) {
    json trials = json::array();
    for (const TrialRecord& t : c.trials)
      trials.push_back(json{{"error_m", t.error_m},
                            {"iters", t.iterations},
                            {"ms", t.ms},
                            {"failed", t.failed}});
    results.push_back(json{{"method", c.method},
                           {"grid_value", c.grid_value},
                           {"rmse_m", c.rmse_m},
                           {"crlb_rmse_m", c.crlb_rmse_m},
                           {"mean_iters", c.mean_iters},
                           {"mean_ms", c.mean_ms},
                           {"failures", c.failures},
                           {"trials", trials}});
  }
  json doc{{"schema", report.schema},
           {"config", config_to_json(report.config)},
           {"results", results}};
  return doc.dump(2);
}

namespace {

// Non-finite values serialize to JSON null; read them back as NaN.
double json_double(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

RmseReport parse_report(const std::string& json_text) {
  const json doc = json::parse(json_text);
  RmseReport report;
  report.schema = doc.at("schema").get<std::string>();
  if (report.schema != "hyloc-report/1")
    throw std::runtime_error("parse_report: unsupported schema " + report.schema);
  report.config = config_from_json(doc.at("config"));
  for (const auto& r : doc.at("results")) {
    MethodCell c;
    c.method = r.at("method").get<std::string>();
    c.grid_value = json_double(r.at("grid_value"));
    c.rmse_m = json_double(r.at("rmse_m"));
    c.crlb_rmse_m = json_double(r.at("crlb_rmse_m"));
    c.mean_iters = json_double(r.at("mean_iters"));
    c.mean_ms = json_double(r.at("mean_ms"));
    c.failures = r.at("failures").get<int>();
    for (const auto& t : r.at("trials")) {
      TrialRecord rec;
      rec.error_m = t.at("error_m").get<double>();
      rec.iterations = t.at("iters").get<int>();
      rec.ms = t.at("ms").get<double>();
      rec.failed = t.at("failed").get<bool>();
      c.trials.push_back(rec);
    }
    report.cells.push_back(std::move(c));
  }
  return report;
}

void emit(const RmseReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("emit: cannot open " + path + " for writing");
  out << (format == ReportFormat::Csv ? report_csv(report) : report_json(report));
  out.flush();
  if (!out.good()) throw std::runtime_error("emit: write to " + path + " failed");
}

}  // namespace hyloc
