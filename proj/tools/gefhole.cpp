// gefhole command line tool.
#include <CLI11.hpp>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include "checks.hpp"
#include "gefhole/conditional_sampler.hpp"
#include "gefhole/constants.hpp"
#include "gefhole/energy_optimizer.hpp"
#include "gefhole/errors.hpp"
#include "gefhole/io.hpp"
#include "gefhole/radial_measures.hpp"
#include "gefhole/rootfinder.hpp"
#include "gefhole/series.hpp"

using namespace gefhole;

namespace {

// ---- logging: GEF_LOG = error | warn | info | debug ----

enum class Level { error = 0, warn = 1, info = 2, debug = 3 };

Level log_level() {
  static const Level lvl = [] {
    const char* e = std::getenv("GEF_LOG");
    const std::string s = e ? e : "warn";
    if (s == "error" || s == "0") return Level::error;
    if (s == "info" || s == "2") return Level::info;
    if (s == "debug" || s == "3") return Level::debug;
    return Level::warn;
  }();
  return lvl;
}

void log(Level l, const std::string& msg) {
  static const char* names[] = {"error", "warn", "info", "debug"};
  if (l <= log_level()) std::cerr << "[gefhole " << names[static_cast<int>(l)] << "] " << msg << '\n';
}

// ---- parameters with flag > config file > default precedence ----

class Params {
 public:
  template <class T>
  CLI::Option* add(CLI::App* app, const std::string& name, T& var, const std::string& help, bool hashed = true) {
    CLI::Option* opt = app->add_option("--" + name, var, help)->capture_default_str();
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    entries_.push_back({key, opt, [&var](const json& j) { var = j.get<T>(); }, [&var] { return json(var); }, hashed});
    return opt;
  }

  CLI::Option* flag(CLI::App* app, const std::string& name, bool& var, const std::string& help, bool hashed = true) {
    CLI::Option* opt = app->add_flag("--" + name, var, help);
    std::string key = name;
    std::replace(key.begin(), key.end(), '-', '_');
    entries_.push_back({key, opt, [&var](const json& j) { var = j.get<bool>(); }, [&var] { return json(var); }, hashed});
    return opt;
  }

  /// Fills parameters that were not given on the command line from the config object.
  void resolve(const json& file_cfg, const std::string& command) {
    json merged = json::object();
    for (const auto& [k, v] : file_cfg.items())
      if (!v.is_object()) merged[k] = v;
    if (file_cfg.contains(command) && file_cfg[command].is_object())
      for (const auto& [k, v] : file_cfg[command].items()) merged[k] = v;
    for (const auto& [k, v] : merged.items()) {
      auto it = std::find_if(entries_.begin(), entries_.end(), [&](const Entry& e) { return e.key == k; });
      if (it == entries_.end()) {
        log(Level::warn, "config key '" + k + "' is not used by " + command);
        continue;
      }
      if (it->opt->count() > 0) continue;
      try {
        it->set(v);
      } catch (const json::exception& e) {
        throw ArgumentError("config key '" + k + "': " + e.what());
      }
    }
  }

  json effective() const {
    json j = json::object();
    for (const auto& e : entries_)
      if (e.hashed) j[e.key] = e.get();
    return j;
  }

 private:
  struct Entry {
    std::string key;
    CLI::Option* opt;
    std::function<void(const json&)> set;
    std::function<json()> get;
    bool hashed;
  };
  std::vector<Entry> entries_;
};

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  int threads = 0;
  std::string format;
  bool no_timestamp = false;
};

void add_common(CLI::App* app, Params& ps, Common& c, const std::string& default_format,
                const std::vector<std::string>& formats) {
  c.format = default_format;
  ps.add(app, "seed", c.seed, "base seed; sample i uses the split stream i");
  ps.add(app, "out", c.out, "output path (stdout when empty)", false);
  app->add_option("--config", c.config, "JSON config; flags override it");
  ps.add(app, "threads", c.threads, "worker cap, 0 = available parallelism", false);
  ps.add(app, "format", c.format, "output format")->check(CLI::IsMember(formats));
  ps.flag(app, "no-timestamp", c.no_timestamp, "omit the timestamp from headers", false);
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config " + path);
  try {
    json j = json::parse(in);
    if (!j.is_object()) throw ArgumentError("config must be a JSON object");
    return j;
  } catch (const json::exception& e) {
    throw ArgumentError("config " + path + ": " + e.what());
  }
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ArgumentError("cannot open output " + path);
    }
  }
  std::ostream& os() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

int worker_count(int requested) {
  const int hw = std::max(1u, std::thread::hardware_concurrency());
  return requested > 0 ? std::min(requested, hw * 4) : hw;
}

/// Runs f(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <class F>
void parallel_for(long n, int threads, F f) {
  threads = static_cast<int>(std::min<long>(threads, n));
  if (threads <= 1) {
    for (long i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr err;
  std::mutex m;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (long i; (i = next.fetch_add(1)) < n;) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard lk(m);
          if (!err) err = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

// ---- subcommands ----

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> parts;
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) {
    try {
      parts.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ArgumentError("grid '" + spec + "' must be start:stop:step");
    }
  }
  if (parts.size() != 3 || !(parts[2] > 0) || parts[1] < parts[0]) throw ArgumentError("grid '" + spec + "' must be start:stop:step with step > 0");
  std::vector<double> v;
  const long n = std::lround(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= n; ++i) v.push_back(parts[0] + i * parts[2]);
  return v;
}

struct Cmd {
  CLI::App* app;
  Params ps;
  Common common;
  std::function<void(Cmd&)> run;
  json header() const { return make_header(app->get_name(), ps.effective(), common.seed, !common.no_timestamp); }
};

void run_constants(Cmd& c, const std::string& grid) {
  Output out(c.common.out);
  const auto ps = parse_grid(grid);
  if (c.common.format == "json") {
    json rows = json::array();
    for (double p : ps) rows.push_back({{"p", p}, {"q", q_of_p(p)}, {"Z_p", z_const(p)}, {"G_p", ginibre_g(p)}});
    out.os() << json{{"header", c.header()}, {"rows", rows}}.dump(1) << '\n';
    return;
  }
  CsvWriter w(out.os(), c.header(), {"p", "q", "Z_p", "G_p"});
  for (double p : ps) w.row({p, q_of_p(p), z_const(p), ginibre_g(p)});
}

RadialMeasure named_measure(const std::string& kind, double p, double alpha) {
  if (kind == "equilibrium") return equilibrium(alpha);
  if (kind == "gef") return catalog(p, alpha);
  if (kind == "radon") return catalog(p, alpha, CatalogKind::gef_global_radon);
  if (kind == "ginibre") return catalog(p, alpha, CatalogKind::ginibre);
  throw ArgumentError("unknown measure kind " + kind);
}

void run_measures(Cmd& c, const std::string& kind, double p, double alpha, int points) {
  Output out(c.common.out);
  const RadialMeasure nu = named_measure(kind, p, alpha);
  const FunctionalReport rep = functional_I(nu, alpha);
  const double B = rep.B_alpha;
  if (c.common.format == "json") {
    json j{{"header", c.header()},
           {"measure", to_json(nu)},
           {"I_alpha", rep.I_alpha},
           {"B_alpha", B},
           {"energy", rep.energy},
           {"J_alpha", rep.J_alpha},
           {"argmax", rep.argmax_w}};
    if (kind == "gef") j["I_closed_form"] = minimal_I(p, alpha);
    out.os() << j.dump(1) << '\n';
    return;
  }
  // profiles: potential, g_nu, and the density per unit area of the continuous part
  CsvWriter w(out.os(), c.header(), {"radius", "U", "g", "density"});
  const double rmax = 1.25 * std::sqrt(alpha);
  for (int i = 0; i <= points; ++i) {
    const double r = rmax * i / points;
    double dens = 0.0;
    for (const auto& A : nu.annuli())
      if (r >= A.lo && r <= A.hi) dens += A.c / std::numbers::pi;
    const double U = log_potential(nu, r);
    w.row({r, U, U - r * r / (2 * alpha) - 0.5 * B, dens});
  }
}

struct OptimizeArgs {
  double p = 0.0;
  double alpha = 10.0;
  int shells = 800;
  std::string constraint = "auto";
  std::string algorithm = "accelerated";
  int max_iterations = 40000;
  std::string trace;
};

void run_optimize(Cmd& c, const OptimizeArgs& a) {
  const Constraint con = a.constraint == "none" ? Constraint::none() : Constraint::for_p(a.p);
  Budget b;
  b.algorithm = a.algorithm == "subgradient" ? Algorithm::subgradient : Algorithm::accelerated;
  b.max_iterations = a.max_iterations;
  const MinimizeResult res = minimize(a.alpha, con, {a.shells}, b);
  const json header = c.header();
  json j{{"header", header},
         {"grid", to_json(res.grid)},
         {"I", res.I},
         {"gap_estimate", res.gap_estimate},
         {"iterations", res.iterations},
         {"budget_exhausted", res.budget_exhausted},
         {"unit_atom", res.grid.masses[res.grid.unit_index]},
         {"infeasibility", res.grid.infeasibility()}};
  if (con.kind != ConstraintKind::none && a.p != 1.0) j["I_closed_form"] = minimal_I(a.p, a.alpha);
  if (con.kind == ConstraintKind::none) j["I_closed_form"] = 0.5 * std::log(a.alpha) - 0.75;
  Output out(c.common.out);
  out.os() << j.dump(1) << '\n';
  std::string trace_path = a.trace;
  if (trace_path.empty() && !c.common.out.empty() && c.common.out != "-") trace_path = c.common.out + ".trace.csv";
  if (!trace_path.empty()) {
    Output tr(trace_path);
    CsvWriter w(tr.os(), header, {"iter", "I", "best_I", "infeasibility", "argmax_radius"});
    for (const auto& t : res.trace) w.row({double(t.iter), t.I, t.best_I, t.infeasibility, t.argmax_radius});
  }
  log(Level::info, "optimize: I = " + format_double(res.I) + " after " + std::to_string(res.iterations) + " iterations");
}

double resolve_L(double L, int N, double alpha) {
  if (L > 0) return L;
  if (!(alpha > 0)) throw ArgumentError("need L > 0 or alpha > 0");
  return std::sqrt(N / alpha);
}

void write_records(Cmd& c, const std::vector<json>& recs) {
  Output out(c.common.out);
  out.os() << json{{"header", c.header()}}.dump() << '\n';
  for (const auto& r : recs) out.os() << r.dump() << '\n';
}

void run_sample(Cmd& c, int N, double L, double alpha, long count) {
  if (N < 1 || count < 1) throw ArgumentError("sample: need N >= 1 and count >= 1");
  L = resolve_L(L, N, alpha);
  const RandomStream base(c.common.seed);
  std::vector<json> recs(count);
  parallel_for(count, worker_count(c.common.threads), [&](long i) {
    RandomStream s = base.split(static_cast<std::uint64_t>(i));
    json r = sample_record(c.common.seed, roots(sample_coeffs(N, s, L)));
    r["index"] = i;
    recs[i] = std::move(r);
  });
  write_records(c, recs);
}

struct ChainArgs {
  int N = 64;
  double L = 0.0;
  double alpha = 9.0;
  double hole = 1.0;
  int sweeps = 2000;
  int burn_in = 500;
  int thin = 10;
  int chains = 1;
  double proposal_scale = 0.0;
};

void run_hole_mcmc(Cmd& c, const ChainArgs& a) {
  if (a.chains < 1) throw ArgumentError("hole-mcmc: need chains >= 1");
  const auto ctx = JointDensityContext::make(a.N, resolve_L(a.L, a.N, a.alpha));
  ChainOptions o;
  o.hole_radius = a.hole;
  o.sweeps = a.sweeps;
  o.burn_in_sweeps = a.burn_in;
  o.thin = a.thin;
  o.proposal_scale = a.proposal_scale;
  const RandomStream base(c.common.seed);
  std::vector<ChainResult> res(a.chains);
  parallel_for(a.chains, worker_count(c.common.threads), [&](long i) {
    RandomStream s = base.split(static_cast<std::uint64_t>(i));
    res[i] = mh_hole_chain(ctx, o, s);
  });
  std::vector<json> recs;
  for (int ch = 0; ch < a.chains; ++ch) {
    for (std::size_t k = 0; k < res[ch].samples.size(); ++k) {
      json r = sample_record(c.common.seed, res[ch].samples[k]);
      r["chain"] = ch;
      r["index"] = k;
      recs.push_back(std::move(r));
    }
    log(Level::info, "chain " + std::to_string(ch) + ": acceptance " + format_double(res[ch].acceptance_rate) +
                         ", proposal scale " + format_double(res[ch].proposal_scale));
  }
  write_records(c, recs);
}

struct ConstructArgs {
  double r = 4.0;
  double p = 0.0;
  long count = 10;
  double C1 = 2.0;
  double window = 0.0;
  bool zeros = true;
};

void run_construct(Cmd& c, const ConstructArgs& a) {
  if (a.count < 1) throw ArgumentError("construct: need count >= 1");
  const double window = a.window > 0 ? a.window : 2.0 * a.r;
  const RandomStream base(c.common.seed);
  std::vector<json> recs(a.count);
  parallel_for(a.count, worker_count(c.common.threads), [&](long i) {
    RandomStream s = base.split(static_cast<std::uint64_t>(i));
    const RareEventSample ev = construct_rare_event(a.r, a.p, s, a.C1);
    ZeroConfig zc;
    if (a.zeros)
      for (const auto& z : ev.zeros().zeros)
        if (std::abs(z) <= window) zc.zeros.push_back(z);
    json r = sample_record(c.common.seed, zc);
    r["index"] = i;
    r["k0"] = ev.k0;
    r["degree"] = ev.coeffs.degree();
    r["certified"] = ev.certificate.holds;
    r["rouche_margin"] = ev.certificate.rouche_margin;
    r["log_main"] = ev.certificate.log_main;
    r["zero_count"] = ev.zero_count();
    r["window"] = window;
    recs[i] = std::move(r);
  });
  write_records(c, recs);
}

struct HistArgs {
  std::string in = "-";
  double lo = 0.0;
  double hi = 3.0;
  int bins = 60;
  double scale = 1.0;
  std::string normalization = "per_area";
};

void run_hist(Cmd& c, const HistArgs& a) {
  SampleStream s;
  if (a.in == "-") {
    s = read_ndjson(std::cin);
  } else {
    std::ifstream in(a.in);
    if (!in) throw ArgumentError("cannot open " + a.in);
    s = read_ndjson(in);
  }
  if (!(a.hi > a.lo) || a.bins < 1) throw ArgumentError("hist: need hi > lo and bins >= 1");
  const auto norm = a.normalization == "per_sample" ? Normalization::per_sample : Normalization::per_area;
  const RadialHistogram h = radial_histogram(s.samples, uniform_edges(a.lo, a.hi, a.bins), a.scale, norm);
  Output out(c.common.out);
  json header = c.header();
  if (!s.header.is_null()) header["source_config_hash"] = s.header.value("config_hash", "");
  header["samples"] = h.samples;
  if (c.common.format == "json") {
    out.os() << json{{"header", header}, {"edges", h.edges}, {"density", h.density}, {"stderr", h.stderr_}}.dump(1)
             << '\n';
    return;
  }
  CsvWriter w(out.os(), header, {"bin_lo", "bin_hi", "density", "stderr"});
  for (std::size_t b = 0; b + 1 < h.edges.size(); ++b) w.row({h.edges[b], h.edges[b + 1], h.density[b], h.stderr_[b]});
}

int run_verify(Cmd& c, bool fast) {
  std::vector<checks::Check> list = checks::trivial_checks();
  if (!fast)
    for (auto& k : checks::acceptance_criteria()) list.push_back(k);
  std::vector<checks::CheckResult> rs;
  bool ok = true;
  Output out(c.common.out);
  for (const auto& k : list) {
    rs.push_back(checks::run_check(k));
    ok = ok && rs.back().passed;
    if (c.common.format != "json") out.os() << checks::format_line(rs.back()) << std::endl;
  }
  if (c.common.format == "json") {
    json arr = json::array();
    for (const auto& r : rs)
      arr.push_back({{"id", r.id},
                     {"name", r.name},
                     {"passed", r.passed},
                     {"value", r.value},
                     {"threshold", r.threshold},
                     {"detail", r.detail},
                     {"seconds", r.seconds}});
    out.os() << json{{"header", c.header()}, {"checks", arr}, {"passed", ok}}.dump(1) << '\n';
  } else {
    long failed = std::count_if(rs.begin(), rs.end(), [](const auto& r) { return !r.passed; });
    out.os() << (ok ? "all " + std::to_string(rs.size()) + " checks passed"
                    : std::to_string(failed) + " of " + std::to_string(rs.size()) + " checks failed")
             << '\n';
  }
  if (!ok) {
    std::cerr << json{{"error", "numerical"}, {"message", "verify: some checks failed"}, {"exit_code", 3}}.dump()
              << '\n';
    return 3;
  }
  return 0;
}

void error_json(const std::string& kind, const std::string& msg, int code) {
  std::cerr << json{{"error", kind}, {"message", msg}, {"exit_code", code}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"GEF zeros under rare events: constants, measures, optimizer, samplers"};
  app.require_subcommand(1);
  app.set_version_flag("--version", library_version());

  std::vector<std::unique_ptr<Cmd>> cmds;
  auto add = [&](const std::string& name, const std::string& desc, const std::string& fmt,
                 std::vector<std::string> formats) -> Cmd& {
    cmds.push_back(std::make_unique<Cmd>());
    Cmd& c = *cmds.back();
    c.app = app.add_subcommand(name, desc);
    add_common(c.app, c.ps, c.common, fmt, formats);
    return c;
  };

  std::string p_grid = "0:3:0.01";
  {
    Cmd& c = add("constants", "table of q, Z_p and G_p over a p grid", "csv", {"csv", "json"});
    c.ps.add(c.app, "p-grid", p_grid, "start:stop:step");
    c.run = [&](Cmd& self) { run_constants(self, p_grid); };
  }
  std::string m_kind = "gef";
  double m_p = 0.0, m_alpha = 10.0;
  int m_points = 200;
  {
    Cmd& c = add("measures", "catalog measure with its functional, or its profiles as CSV", "json", {"csv", "json"});
    c.ps.add(c.app, "kind", m_kind, "gef | radon | ginibre | equilibrium")
        ->check(CLI::IsMember({"gef", "radon", "ginibre", "equilibrium"}));
    c.ps.add(c.app, "p", m_p, "constraint level");
    c.ps.add(c.app, "alpha", m_alpha, "weight parameter");
    c.ps.add(c.app, "points", m_points, "profile points for CSV");
    c.run = [&](Cmd& self) { run_measures(self, m_kind, m_p, m_alpha, m_points); };
  }
  OptimizeArgs oa;
  {
    Cmd& c = add("optimize", "minimize I over radial shell measures", "json", {"json"});
    c.ps.add(c.app, "p", oa.p, "constraint level");
    c.ps.add(c.app, "alpha", oa.alpha, "weight parameter");
    c.ps.add(c.app, "shells", oa.shells, "number of shells");
    c.ps.add(c.app, "constraint", oa.constraint, "auto (from p) | none")->check(CLI::IsMember({"auto", "none"}));
    c.ps.add(c.app, "algorithm", oa.algorithm, "accelerated | subgradient")
        ->check(CLI::IsMember({"accelerated", "subgradient"}));
    c.ps.add(c.app, "max-iterations", oa.max_iterations, "iteration budget");
    c.ps.add(c.app, "trace", oa.trace, "trace CSV path (default <out>.trace.csv)", false);
    c.run = [&](Cmd& self) { run_optimize(self, oa); };
  }
  int s_N = 64;
  double s_L = 0.0, s_alpha = 9.0;
  long s_count = 100;
  {
    Cmd& c = add("sample", "unconditional zeros of P_{N,L}", "ndjson", {"ndjson"});
    c.ps.add(c.app, "N", s_N, "degree");
    c.ps.add(c.app, "L", s_L, "scale; 0 means sqrt(N / alpha)");
    c.ps.add(c.app, "alpha", s_alpha, "N / L^2 when L is 0");
    c.ps.add(c.app, "count", s_count, "number of samples");
    c.run = [&](Cmd& self) { run_sample(self, s_N, s_L, s_alpha, s_count); };
  }
  ChainArgs ca;
  {
    Cmd& c = add("hole-mcmc", "Metropolis chain for zeros conditioned on a hole", "ndjson", {"ndjson"});
    c.ps.add(c.app, "N", ca.N, "number of zeros");
    c.ps.add(c.app, "L", ca.L, "scale; 0 means sqrt(N / alpha)");
    c.ps.add(c.app, "alpha", ca.alpha, "N / L^2 when L is 0");
    c.ps.add(c.app, "hole", ca.hole, "hole radius in the scaled plane");
    c.ps.add(c.app, "sweeps", ca.sweeps, "sweeps after burn-in");
    c.ps.add(c.app, "burn-in", ca.burn_in, "burn-in sweeps");
    c.ps.add(c.app, "thin", ca.thin, "sweeps between kept samples");
    c.ps.add(c.app, "chains", ca.chains, "independent chains");
    c.ps.add(c.app, "proposal-scale", ca.proposal_scale, "0 means 0.5 / L, tuned during burn-in");
    c.run = [&](Cmd& self) { run_hole_mcmc(self, ca); };
  }
  ConstructArgs ka;
  {
    Cmd& c = add("construct", "coefficient draws from the Rouche-certified rare event", "ndjson", {"ndjson"});
    c.ps.add(c.app, "r", ka.r, "disk radius");
    c.ps.add(c.app, "p", ka.p, "target count is floor(p r^2)");
    c.ps.add(c.app, "count", ka.count, "number of draws");
    c.ps.add(c.app, "C1", ka.C1, "main term exponent");
    c.ps.add(c.app, "window", ka.window, "emit zeros with |z| <= window; 0 means 2r");
    c.ps.add(c.app, "zeros", ka.zeros, "extract zeros (true) or emit certificates only");
    c.run = [&](Cmd& self) { run_construct(self, ka); };
  }
  HistArgs ha;
  {
    Cmd& c = add("hist", "radial histogram of an NDJSON sample stream", "csv", {"csv", "json"});
    c.ps.add(c.app, "in", ha.in, "NDJSON input, - for stdin", false);
    c.ps.add(c.app, "lo", ha.lo, "first edge");
    c.ps.add(c.app, "hi", ha.hi, "last edge");
    c.ps.add(c.app, "bins", ha.bins, "number of bins");
    c.ps.add(c.app, "scale", ha.scale, "radii are divided by this");
    c.ps.add(c.app, "normalization", ha.normalization, "per_area | per_sample")
        ->check(CLI::IsMember({"per_area", "per_sample"}));
    c.run = [&](Cmd& self) { run_hist(self, ha); };
  }
  bool v_fast = false;
  int verify_code = 0;
  {
    Cmd& c = add("verify", "run the invariant suite and print a pass/fail table", "table", {"table", "json"});
    c.ps.flag(c.app, "fast", v_fast, "cheap identities only");
    c.run = [&](Cmd& self) { verify_code = run_verify(self, v_fast); };
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    error_json("config", e.what(), 2);
    return 2;
  }

  try {
    for (auto& c : cmds) {
      if (!c->app->parsed()) continue;
      c->ps.resolve(load_config(c->common.config), c->app->get_name());
      log(Level::debug, "config " + c->ps.effective().dump());
      c->run(*c);
    }
  } catch (const ArgumentError& e) {
    error_json("config", e.what(), 2);
    return 2;
  } catch (const NumericalError& e) {
    error_json("numerical", e.what(), 3);
    return 3;
  } catch (const std::exception& e) {
    error_json("numerical", e.what(), 3);
    return 3;
  }
  return verify_code;
}
