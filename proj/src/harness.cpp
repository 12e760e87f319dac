#include "holoqed/harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include "holoqed/classical.hpp"
#include "holoqed/cqed.hpp"
#include "holoqed/grape.hpp"
#include "holoqed/json_io.hpp"
#include "holoqed/linalg.hpp"
#include "holoqed/noise.hpp"
#include "holoqed/qmps.hpp"
#include "holoqed/snap.hpp"
#include "holoqed/vqe.hpp"

#ifndef HOLOQED_VERSION
#define HOLOQED_VERSION "unknown"
#endif

namespace holoqed::harness {

namespace fs = std::filesystem;
using nlohmann::json;
using Violations = std::vector<std::string>;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<std::pair<Experiment, std::string>>& experiment_table() {
  static const std::vector<std::pair<Experiment, std::string>> t = {
      {Experiment::SynthesizeGrape, "synthesize_grape"},
      {Experiment::SynthesizeSnap, "synthesize_snap"},
      {Experiment::CompareControl, "compare_control"},
      {Experiment::VqeIdeal, "vqe_ideal"},
      {Experiment::VqeNoisy, "vqe_noisy"},
      {Experiment::DmrgReference, "dmrg_reference"},
      {Experiment::Correlations, "correlations"},
      {Experiment::Sample, "sample"},
  };
  return t;
}

std::optional<Experiment> parse_experiment(const std::string& name) {
  for (const auto& [e, n] : experiment_table())
    if (n == name) return e;
  return std::nullopt;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string fmt(long long x) { return std::to_string(x); }
std::string fmt(int x) { return std::to_string(x); }
std::string fmt(std::size_t x) { return std::to_string(x); }

// Typed reader over one JSON object that records violations instead of
// throwing and flags fields it was never asked about.
class Block {
 public:
  Block(const json* j, std::string path, Violations& v) : j_(j), path_(std::move(path)), v_(v) {
    if (j_ && !j_->is_object()) {
      v_.push_back(path_ + ": expected an object");
      j_ = nullptr;
    }
  }

  bool present() const { return j_ != nullptr; }
  bool has(const std::string& k) {
    used_.insert(k);
    return j_ && j_->contains(k);
  }
  const json* raw(const std::string& k) { return has(k) ? &j_->at(k) : nullptr; }
  std::string where(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
  void bad(const std::string& k, const std::string& msg) { v_.push_back(where(k) + ": " + msg); }

  double number(const std::string& k, double def, double lo = -kInf, double hi = kInf) {
    const json* x = raw(k);
    if (!x) return def;
    if (!x->is_number()) {
      bad(k, "expected a number");
      return def;
    }
    const double val = x->get<double>();
    if (!(val >= lo && val <= hi)) {
      bad(k, "value " + fmt(val) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
      return def;
    }
    return val;
  }

  int integer(const std::string& k, int def, int lo, int hi) {
    const json* x = raw(k);
    if (!x) return def;
    if (!x->is_number_integer()) {
      bad(k, "expected an integer");
      return def;
    }
    const long long val = x->get<long long>();
    if (val < lo || val > hi) {
      bad(k, "value " + fmt(val) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
      return def;
    }
    return static_cast<int>(val);
  }

  std::uint64_t seed(const std::string& k, std::uint64_t def) {
    const json* x = raw(k);
    if (!x) return def;
    if (!x->is_number_integer() || (!x->is_number_unsigned() && x->get<long long>() < 0)) {
      bad(k, "expected a non-negative integer");
      return def;
    }
    return x->get<std::uint64_t>();
  }

  std::string text(const std::string& k, const std::string& def, const std::vector<std::string>& allowed = {}) {
    const json* x = raw(k);
    if (!x) return def;
    if (!x->is_string()) {
      bad(k, "expected a string");
      return def;
    }
    const auto s = x->get<std::string>();
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), s) == allowed.end()) {
      bad(k, "'" + s + "' is not one of " + join(allowed, ", "));
      return def;
    }
    return s;
  }

  std::vector<double> numbers(const std::string& k, const std::vector<double>& def, double lo = -kInf,
                              double hi = kInf) {
    const json* x = raw(k);
    if (!x) return def;
    std::vector<double> out;
    if (x->is_number()) {
      out.push_back(x->get<double>());
    } else if (x->is_array() && !x->empty()) {
      for (const auto& e : *x) {
        if (!e.is_number()) {
          bad(k, "expected numbers");
          return def;
        }
        out.push_back(e.get<double>());
      }
    } else {
      bad(k, "expected a number or a nonempty array of numbers");
      return def;
    }
    for (double val : out)
      if (!(val >= lo && val <= hi)) {
        bad(k, "value " + fmt(val) + " outside [" + fmt(lo) + ", " + fmt(hi) + "]");
        return def;
      }
    return out;
  }

  std::vector<int> integers(const std::string& k, const std::vector<int>& def, int lo, int hi) {
    const std::vector<double> d = numbers(k, std::vector<double>(def.begin(), def.end()), lo, hi);
    std::vector<int> out;
    for (double val : d) {
      if (val != std::floor(val)) {
        bad(k, "expected integers");
        return def;
      }
      out.push_back(static_cast<int>(val));
    }
    return out;
  }

  Block sub(const std::string& k) { return Block(raw(k), where(k), v_); }

  void close() {
    if (!j_) return;
    for (const auto& [key, val] : j_->items())
      if (!used_.count(key)) v_.push_back(where(key) + ": unknown field");
  }

 private:
  const json* j_;
  std::string path_;
  Violations& v_;
  std::set<std::string> used_;
};

struct Common {
  DeviceParams params;
  std::optional<NoiseSpec> noise;
  SpinChainModel model;
  std::uint64_t seed = 1;
  fs::path base;
};

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

struct Ctx {
  const Common& c;
  fs::path out;
  std::string hash;
  std::ofstream log;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  json results = json::object();
  std::vector<std::string> files;
  std::map<std::string, DmrgResult> dmrg_cache;

  Ctx(const Common& common, fs::path dir, std::string h) : c(common), out(std::move(dir)), hash(std::move(h)) {
    log.open(out / "run.log", std::ios::app);
  }

  void note(const std::string& msg) {
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char buf[32];
    std::snprintf(buf, sizeof buf, "[%9.2f s] ", s);
    log << buf << msg << '\n';
    log.flush();
  }

  void write_text(const std::string& name, const std::string& body) {
    std::ofstream f(out / name, std::ios::binary | std::ios::trunc);
    require(static_cast<bool>(f), ErrorCode::InvalidArgument, "cannot write " + (out / name).string());
    f << body;
    if (std::find(files.begin(), files.end(), name) == files.end()) files.push_back(name);
  }

  void write_json(const std::string& name, const json& j) { write_text(name, j.dump(2) + "\n"); }

  void write_csv(const std::string& name, const Table& t) {
    std::ostringstream s;
    s << join(t.columns, ",") << ",manifest_hash\n";
    for (const auto& r : t.rows) s << join(r, ",") << ',' << hash << '\n';
    write_text(name, s.str());
  }
};

using Plan = std::function<void(Ctx&)>;

// Reference DMRG ground state; `energy_per_site` short-circuits the energy.
struct Reference {
  DmrgConfig cfg;
  std::optional<double> energy_per_site;
};

Reference parse_reference(Block& parent, const std::string& key, int default_bond) {
  Block b = parent.sub(key);
  Reference r;
  r.cfg.chain_length = b.integer("chain_length", 128, 4, 100000);
  r.cfg.bond_dim = b.integer("bond_dim", default_bond, 1, 4096);
  r.cfg.sweep_tol = b.number("sweep_tol", 1e-9, 0.0, 1.0);
  r.cfg.max_sweeps = b.integer("max_sweeps", 40, 1, 100000);
  r.cfg.seed = b.seed("seed", 7);
  if (b.has("energy_per_site")) r.energy_per_site = b.number("energy_per_site", 0.0);
  b.close();
  return r;
}

const DmrgResult& dmrg(Ctx& ctx, const DmrgConfig& cfg) {
  const std::string key = json{{"L", cfg.chain_length}, {"D", cfg.bond_dim}, {"tol", cfg.sweep_tol},
                               {"sweeps", cfg.max_sweeps}, {"seed", cfg.seed}}
                              .dump();
  auto it = ctx.dmrg_cache.find(key);
  if (it != ctx.dmrg_cache.end()) return it->second;
  ctx.note("dmrg L=" + fmt(cfg.chain_length) + " D=" + fmt(cfg.bond_dim));
  DmrgResult r = dmrg_ground_state(ctx.c.model, cfg);
  ctx.note("dmrg done: E/L=" + fmt(r.energy / cfg.chain_length) + " sweeps=" + fmt(r.sweep_energies.size()));
  return ctx.dmrg_cache.emplace(key, std::move(r)).first->second;
}

double reference_energy(Ctx& ctx, const Reference& ref) {
  if (ref.energy_per_site) return *ref.energy_per_site;
  return dmrg(ctx, ref.cfg).energy / ref.cfg.chain_length;
}

json reference_json(Ctx& ctx, const Reference& ref) {
  json j{{"energy_per_site", reference_energy(ctx, ref)}};
  if (!ref.energy_per_site) {
    const auto& d = dmrg(ctx, ref.cfg);
    j["chain_length"] = ref.cfg.chain_length;
    j["bond_dim"] = ref.cfg.bond_dim;
    j["energy"] = d.energy;
    j["bulk_energy"] = d.bulk_energy;
    j["sweeps"] = d.sweep_energies.size();
    j["truncation_error"] = d.truncation_error;
  }
  return j;
}

fs::path resolve(const Common& c, const std::string& p) {
  fs::path path(p);
  return path.is_absolute() ? path : c.base / path;
}

void check_file(Block& b, const std::string& key, const Common& c, const std::string& value) {
  if (!fs::exists(resolve(c, value))) b.bad(key, "no such file '" + value + "'");
}

json read_json_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::MissingFile, "cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::exception& e) {
    fail(ErrorCode::Schema, path.string() + ": " + e.what());
  }
}

// Durations: `tau_ns` (number or list) and optional matching `n_ts`.
struct Durations {
  std::vector<double> tau;
  std::vector<std::size_t> n_ts;
};

Durations parse_durations(Block& b, const Common& c, const std::vector<double>& def, bool single = false) {
  Durations d;
  d.tau = b.numbers("tau_ns", def, 0.0, 1e9);
  if (single && d.tau.size() != 1) {
    b.bad("tau_ns", "expected a single duration");
    d.tau.resize(1);
  }
  const std::vector<int> declared = b.integers("n_ts", {}, 1, 100000000);
  if (!declared.empty() && declared.size() != d.tau.size())
    b.bad("n_ts", "has " + fmt(declared.size()) + " entries for " + fmt(d.tau.size()) + " durations");
  for (std::size_t i = 0; i < d.tau.size(); ++i) {
    const double steps = d.tau[i] / c.params.dt;
    const double whole = std::round(steps);
    if (d.tau[i] <= 0.0 || std::abs(steps - whole) > 1e-9 * std::max(1.0, steps))
      b.bad("tau_ns", "τ = " + fmt(d.tau[i]) + " ns is not a positive whole number of Δt = " +
                          fmt(c.params.dt) + " ns steps");
    d.n_ts.push_back(static_cast<std::size_t>(std::max(1.0, whole)));
    if (i < declared.size() && declared.size() == d.tau.size() &&
        std::abs(declared[i] * c.params.dt - d.tau[i]) > 1e-9 * d.tau[i])
      b.bad("n_ts", "N_ts·Δt = " + fmt(declared[i] * c.params.dt) + " ns differs from declared τ = " +
                        fmt(d.tau[i]) + " ns");
  }
  return d;
}

void check_usable_levels(Block& b, int cutoff, int bond_levels) {
  const int lp = bond_levels > 0 ? bond_levels : cutoff - 6;
  if (bond_levels <= 0 && lp < 0)
    b.bad("bond_levels", "Λ′ would be negative (Λ − 6 = " + fmt(lp) + " for Λ = " + fmt(cutoff) +
                             "); set bond_levels explicitly");
  else if (bond_levels <= 0 && lp == 0)
    b.bad("bond_levels", "Λ′ would be zero for Λ = 6; set bond_levels explicitly");
  else if (lp > cutoff)
    b.bad("bond_levels", "Λ′ = " + fmt(lp) + " exceeds the cutoff Λ = " + fmt(cutoff));
}

// Synthesis targets: a DMRG bulk tensor embedded as a unitary, a Haar
// unitary, or a TargetUnitary JSON file.
struct TargetSpec {
  std::string source = "dmrg";
  int bond_dim = 2;
  int embed_cutoff = 0;  // 0 means 2 * bond_dim
  int dim = 8;
  std::uint64_t seed = 1;
  std::string path;
  Reference ref;

  int cutoff_for(int d) const { return embed_cutoff > 0 ? embed_cutoff : 2 * d; }
};

TargetSpec parse_target(Block& parent, const Common& c) {
  Block b = parent.sub("target");
  TargetSpec t;
  t.source = b.text("source", "dmrg", {"dmrg", "haar", "file"});
  t.bond_dim = b.integer("bond_dim", 2, 1, 64);
  t.embed_cutoff = b.integer("embed_cutoff", 0, 0, 256);
  t.dim = b.integer("dim", 8, 2, 512);
  t.seed = b.seed("seed", c.seed);
  t.path = b.text("path", "");
  t.ref = parse_reference(b, "reference", 16);
  if (t.source == "file") {
    if (t.path.empty()) b.bad("path", "required when source is 'file'");
    else check_file(b, "path", c, t.path);
  }
  if (t.source == "haar" && t.dim % 2 != 0) b.bad("dim", "must be even (qubit ⊗ cavity)");
  if (t.source == "dmrg" && t.cutoff_for(t.bond_dim) < t.bond_dim)
    b.bad("embed_cutoff", "smaller than bond_dim");
  b.close();
  return t;
}

int target_levels(const TargetSpec& t, int bond_dim) {
  if (t.source == "haar") return t.dim / 2;
  if (t.source == "file") return 0;
  return t.cutoff_for(bond_dim);
}

struct ResolvedTarget {
  Matrix matrix;
  json info;
};

ResolvedTarget resolve_target(Ctx& ctx, const TargetSpec& t, int bond_dim) {
  ResolvedTarget r;
  if (t.source == "haar") {
    std::mt19937_64 rng(t.seed);
    r.matrix = linalg::haar_unitary(t.dim, rng);
    r.info = {{"source", "haar"}, {"dim", t.dim}, {"seed", t.seed}};
  } else if (t.source == "file") {
    TargetUnitary tu = read_json_file(resolve(ctx.c, t.path)).get<TargetUnitary>();
    r.matrix = tu.matrix;
    r.info = {{"source", "file"}, {"path", t.path}, {"bond_dim", tu.logical_dim}, {"embed_cutoff", tu.cutoff}};
  } else {
    const auto& d = dmrg(ctx, t.ref.cfg);
    const BulkTensor bt = bulk_tensor(d.mps, bond_dim);
    const TargetUnitary tu = embed_isometry(bt.tensor, t.cutoff_for(bond_dim));
    r.matrix = tu.matrix;
    r.info = {{"source", "dmrg"},
              {"bond_dim", bond_dim},
              {"embed_cutoff", tu.cutoff},
              {"gauge_mismatch", bt.gauge_mismatch},
              {"tensor_energy", energy_density(bt.tensor, ctx.c.model)},
              {"reference", reference_json(ctx, t.ref)}};
  }
  require(r.matrix.rows() <= 2 * ctx.c.params.cutoff, ErrorCode::DimensionMismatch,
          "target dimension exceeds the device dimension 2Λ");
  return r;
}

// Physical qMPS energy of a joint unitary: full-cutoff tensor, vacuum-free
// fixed point. NaN when the transfer channel has no unique fixed point.
double device_energy(const Matrix& u, const SpinChainModel& model) {
  try {
    return energy_density(extract_tensor(u, static_cast<int>(u.rows() / 2)), model);
  } catch (const Error&) {
    return std::nan("");
  }
}

struct GrapeOpts {
  Durations dur;
  int restarts = 4;
  int max_iters = 5000;
  double tol = 1e-6;
  double learning_rate = 0.005;
  double init_radius = 0.1;
};

GrapeOpts parse_grape(Block& b, const Common& c, double default_tol, const std::vector<double>& default_tau) {
  GrapeOpts o;
  o.dur = parse_durations(b, c, default_tau);
  o.restarts = b.integer("restarts", 4, 1, 10000);
  o.max_iters = b.integer("max_iters", 5000, 1, 100000000);
  o.tol = b.number("tol_infidelity", default_tol, 0.0, 1.0);
  o.learning_rate = b.number("learning_rate", 0.005, 1e-12, 10.0);
  o.init_radius = b.number("init_radius", 0.1, 0.0, 1.0);
  return o;
}

std::vector<SynthesisResult> grape_series(Ctx& ctx, const Matrix& target, const GrapeOpts& o) {
  std::vector<SynthesisResult> out;
  for (std::size_t i = 0; i < o.dur.tau.size(); ++i) {
    SynthesisProblem p;
    p.target = target;
    p.params = ctx.c.params;
    p.n_ts = o.dur.n_ts[i];
    p.seed = ctx.c.seed;
    p.max_iters = o.max_iters;
    p.tol_infidelity = o.tol;
    p.learning_rate = o.learning_rate;
    p.init_radius = o.init_radius;
    out.push_back(synthesize_restarts(p, o.restarts));
    ctx.note("grape tau=" + fmt(o.dur.tau[i]) + " ns infidelity=" + fmt(out.back().infidelity));
  }
  return out;
}

struct SnapOpts {
  int cutoff = 0;
  int depth = 8;
  int batch = 10;
  int max_iters = 200;
  double layer_noise = 0.05;
  double tol = 1e-10;
  double layer_time = 800.0;
};

SnapOpts parse_snap(Block& b, const Common& c) {
  SnapOpts o;
  o.cutoff = b.integer("cutoff", c.params.cutoff, 1, 256);
  o.depth = b.integer("depth", 8, 1, 10000);
  o.batch = b.integer("batch", 10, 1, 10000);
  o.max_iters = b.integer("max_iters", 200, 1, 100000000);
  o.layer_noise = b.number("layer_noise", 0.05, 0.0, 10.0);
  o.tol = b.number("tol_infidelity", 1e-10, 0.0, 1.0);
  o.layer_time = b.number("layer_time_ns", 800.0, 0.0, 1e9);
  return o;
}

CircuitResult snap_run(Ctx& ctx, const Matrix& target, const SnapOpts& o) {
  CircuitProblem p;
  p.target = target;
  p.cutoff = o.cutoff;
  p.depth = o.depth;
  p.seed = ctx.c.seed;
  p.max_iters = o.max_iters;
  p.batch = o.batch;
  p.layer_noise = o.layer_noise;
  p.tol_infidelity = o.tol;
  p.layer_time = o.layer_time;
  CircuitResult r = synthesize_circuit(p);
  ctx.note("snap depth=" + fmt(r.depth_infidelity.size()) + " infidelity=" + fmt(r.infidelity));
  return r;
}

Plan plan_dmrg_reference(Block& p, const Common& c) {
  DmrgConfig cfg;
  cfg.chain_length = p.integer("chain_length", 128, 4, 100000);
  cfg.bond_dim = p.integer("bond_dim", 16, 1, 4096);
  cfg.sweep_tol = p.number("sweep_tol", 1e-9, 0.0, 1.0);
  cfg.max_sweeps = p.integer("max_sweeps", 40, 1, 100000);
  cfg.seed = p.seed("seed", 7);
  const int bulk_dim = p.integer("bulk_bond_dim", 0, 0, 4096);
  const int max_r = p.integer("max_r", 0, 0, 100000);
  if (max_r > 0 && cfg.chain_length / 2 <= max_r) p.bad("max_r", "too long for the central half of the chain");
  (void)c;
  return [=](Ctx& ctx) {
    const auto& d = dmrg(ctx, cfg);
    json r{{"chain_length", cfg.chain_length},
           {"bond_dim", cfg.bond_dim},
           {"energy", d.energy},
           {"energy_per_site", d.energy / cfg.chain_length},
           {"bulk_energy", d.bulk_energy},
           {"sweeps", d.sweep_energies.size()},
           {"truncation_error", d.truncation_error}};
    Table sweeps{{"sweep", "energy"}, {}};
    for (std::size_t i = 0; i < d.sweep_energies.size(); ++i)
      sweeps.rows.push_back({fmt(i + 1), fmt(d.sweep_energies[i])});
    ctx.write_csv("dmrg_sweeps.csv", sweeps);
    Table local{{"site", "local_energy"}, {}};
    for (int i = 1; i + 1 < cfg.chain_length; ++i)
      local.rows.push_back({fmt(i), fmt(local_energy(d.mps, ctx.c.model, i))});
    ctx.write_csv("local_energy.csv", local);
    if (max_r > 0) {
      Table corr{{"r", "zz", "xx"}, {}};
      for (int rr = 1; rr <= max_r; ++rr)
        corr.rows.push_back({fmt(rr), fmt(central_correlation(d.mps, 'z', 'z', rr)),
                             fmt(central_correlation(d.mps, 'x', 'x', rr))});
      ctx.write_csv("correlations.csv", corr);
    }
    if (bulk_dim > 0) {
      const BulkTensor bt = bulk_tensor(d.mps, bulk_dim);
      r["bulk_tensor"] = {{"bond_dim", bulk_dim},
                          {"gauge_mismatch", bt.gauge_mismatch},
                          {"energy_density", energy_density(bt.tensor, ctx.c.model)}};
      ctx.write_json("tensor.json", json(bt.tensor));
    }
    ctx.results = r;
  };
}

Plan plan_synthesize_grape(Block& p, const Common& c) {
  TargetSpec t = parse_target(p, c);
  std::vector<int> dims = p.integers("bond_dims", {t.bond_dim}, 1, 64);
  if (t.source != "dmrg" && p.has("bond_dims")) p.bad("bond_dims", "only applies to dmrg targets");
  if (t.source != "dmrg") dims = {0};
  const GrapeOpts g = parse_grape(p, c, 1e-6, {500.0, 1000.0, 2000.0});
  for (int d : dims)
    if (target_levels(t, d) > c.params.cutoff)
      p.bad("target", "needs " + fmt(target_levels(t, d)) + " cavity levels but params.cutoff is " +
                          fmt(c.params.cutoff));
  return [=](Ctx& ctx) {
    Table fig1b{{"bond_dim", "tau_ns", "n_ts", "infidelity", "iterations", "converged"}, {}};
    Table fig1c{{"bond_dim", "tau_ns", "energy", "energy_error", "target_energy_error"}, {}};
    json runs = json::array(), waveforms = json::object();
    for (int d : dims) {
      const ResolvedTarget tgt = resolve_target(ctx, t, d);
      const std::vector<SynthesisResult> series = grape_series(ctx, tgt.matrix, g);
      const bool with_energy = t.source == "dmrg";
      const double e0 = with_energy ? reference_energy(ctx, t.ref) : std::nan("");
      const double e_target = with_energy ? tgt.info["tensor_energy"].get<double>() : std::nan("");
      json per_tau = json::array();
      for (std::size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const double e = with_energy ? device_energy(propagate(ctx.c.params, s.waveform), ctx.c.model)
                                     : std::nan("");
        fig1b.rows.push_back({fmt(d), fmt(g.dur.tau[i]), fmt(g.dur.n_ts[i]), fmt(s.infidelity),
                              fmt(s.iterations), s.converged ? "1" : "0"});
        if (with_energy)
          fig1c.rows.push_back({fmt(d), fmt(g.dur.tau[i]), fmt(e), fmt(relative_energy_error(e, e0)),
                                fmt(relative_energy_error(e_target, e0))});
        per_tau.push_back({{"tau_ns", g.dur.tau[i]},
                           {"infidelity", s.infidelity},
                           {"iterations", s.iterations},
                           {"seed", s.seed},
                           {"converged", s.converged}});
        if (with_energy) per_tau.back()["energy"] = e;
        waveforms["D" + fmt(d) + "_tau" + fmt(g.dur.tau[i])] = s.waveform;
      }
      runs.push_back({{"target", tgt.info}, {"series", per_tau}});
    }
    ctx.write_csv("fig1b.csv", fig1b);
    if (!fig1c.rows.empty()) ctx.write_csv("fig1c.csv", fig1c);
    ctx.write_json("waveforms.json", waveforms);
    ctx.results = {{"targets", runs}};
  };
}

Plan plan_synthesize_snap(Block& p, const Common& c) {
  const TargetSpec t = parse_target(p, c);
  const SnapOpts o = parse_snap(p, c);
  if (target_levels(t, t.bond_dim) > o.cutoff)
    p.bad("cutoff", "smaller than the target's " + fmt(target_levels(t, t.bond_dim)) + " cavity levels");
  return [=](Ctx& ctx) {
    const ResolvedTarget tgt = resolve_target(ctx, t, t.bond_dim);
    const CircuitResult r = snap_run(ctx, tgt.matrix, o);
    Table tab{{"depth", "implementation_time_ns", "infidelity"}, {}};
    for (std::size_t k = 0; k < r.depth_infidelity.size(); ++k)
      tab.rows.push_back({fmt(k + 1), fmt((k + 1) * o.layer_time), fmt(r.depth_infidelity[k])});
    ctx.write_csv("snap_depth.csv", tab);
    ctx.write_json("circuit.json", json(r.circuit));
    json summary = r;
    summary.erase("circuit");
    ctx.results = {{"target", tgt.info}, {"snap", summary}};
  };
}

// Shortest implementation time whose infidelity is below the threshold.
std::optional<double> time_to(const std::vector<std::pair<double, double>>& series, double threshold) {
  std::optional<double> best;
  for (const auto& [time, inf] : series)
    if (inf < threshold && (!best || time < *best)) best = time;
  return best;
}

Plan plan_compare_control(Block& p, const Common& c) {
  const TargetSpec t = parse_target(p, c);
  const double threshold = p.number("threshold", 1e-2, 0.0, 1.0);
  Block gb = p.sub("grape");
  const GrapeOpts g = parse_grape(gb, c, 1e-4, {250.0, 500.0, 1000.0, 2000.0});
  gb.close();
  Block sb = p.sub("snap");
  const SnapOpts s = parse_snap(sb, c);
  sb.close();
  if (target_levels(t, t.bond_dim) > c.params.cutoff)
    p.bad("target", "needs more cavity levels than params.cutoff");
  return [=](Ctx& ctx) {
    const ResolvedTarget tgt = resolve_target(ctx, t, t.bond_dim);
    const auto grape = grape_series(ctx, tgt.matrix, g);
    const CircuitResult snap = snap_run(ctx, tgt.matrix, s);
    Table tab{{"method", "implementation_time_ns", "infidelity"}, {}};
    std::vector<std::pair<double, double>> gs, ss;
    for (std::size_t i = 0; i < grape.size(); ++i) {
      gs.emplace_back(g.dur.tau[i], grape[i].infidelity);
      tab.rows.push_back({"grape", fmt(g.dur.tau[i]), fmt(grape[i].infidelity)});
    }
    for (std::size_t k = 0; k < snap.depth_infidelity.size(); ++k) {
      ss.emplace_back((k + 1) * s.layer_time, snap.depth_infidelity[k]);
      tab.rows.push_back({"snap", fmt((k + 1) * s.layer_time), fmt(snap.depth_infidelity[k])});
    }
    ctx.write_csv("compare_control.csv", tab);
    const auto tg = time_to(gs, threshold), ts = time_to(ss, threshold);
    json r{{"target", tgt.info}, {"threshold", threshold}};
    r["grape_time_to_threshold_ns"] = tg ? json(*tg) : json(nullptr);
    r["snap_time_to_threshold_ns"] = ts ? json(*ts) : json(nullptr);
    r["speedup"] = (tg && ts) ? json(*ts / *tg) : json(nullptr);
    json wf = json::object();
    for (std::size_t i = 0; i < grape.size(); ++i) wf["tau" + fmt(g.dur.tau[i])] = grape[i].waveform;
    ctx.write_json("waveforms.json", wf);
    ctx.write_json("circuit.json", json(snap.circuit));
    ctx.results = r;
  };
}

struct VqeOpts {
  int bond_levels = 0;
  double penalty_weight = 10.0;
  int batch = 10;
  int max_iters = 3000;
  double learning_rate = 0.005;
  int stall_window = 200;
  double init_radius = 0.1;
};

VqeOpts parse_vqe(Block& b, int default_batch, int default_iters) {
  VqeOpts o;
  o.bond_levels = b.integer("bond_levels", 0, 0, 256);
  o.penalty_weight = b.number("penalty_weight", 10.0, 0.0, 1e12);
  o.batch = b.integer("batch", default_batch, 1, 100000);
  o.max_iters = b.integer("max_iters", default_iters, 1, 100000000);
  o.learning_rate = b.number("learning_rate", 0.005, 1e-12, 10.0);
  o.stall_window = b.integer("stall_window", 200, 1, 100000000);
  o.init_radius = b.number("init_radius", 0.1, 0.0, 1.0);
  return o;
}

VqeProblem make_vqe(const Common& c, int cutoff, std::size_t n_ts, const VqeOpts& o) {
  VqeProblem v;
  v.model = c.model;
  v.params = c.params;
  v.params.cutoff = cutoff;
  v.n_ts = n_ts;
  v.bond_levels = o.bond_levels;
  v.penalty_weight = o.penalty_weight;
  v.batch = o.batch;
  v.seed = c.seed;
  v.max_iters = o.max_iters;
  v.learning_rate = o.learning_rate;
  v.stall_window = o.stall_window;
  v.init_radius = o.init_radius;
  return v;
}

json vqe_summary(const VqeResult& r, double e0) {
  std::size_t failed = 0;
  for (const auto& run : r.runs) failed += run.failed;
  return {{"energy", r.energy},
          {"energy_error", relative_energy_error(r.energy, e0)},
          {"penalty", r.penalty},
          {"buffer_population", r.buffer_population},
          {"best_run", r.best_run},
          {"best_seed", r.runs[r.best_run].seed},
          {"iterations", r.runs[r.best_run].iterations},
          {"failed_runs", failed}};
}

Plan plan_vqe_ideal(Block& p, const Common& c) {
  const std::vector<int> cutoffs = p.integers("cutoffs", {c.params.cutoff}, 2, 256);
  const Durations dur = parse_durations(p, c, {2000.0});
  const VqeOpts o = parse_vqe(p, 10, 3000);
  const Reference ref = parse_reference(p, "reference", 32);
  for (int cut : cutoffs) check_usable_levels(p, cut, o.bond_levels);
  return [=](Ctx& ctx) {
    const double e0 = reference_energy(ctx, ref);
    Table tab{{"cutoff", "tau_ns", "bond_levels", "energy", "energy_error", "buffer_population"}, {}};
    json runs = json::array(), waveforms = json::object();
    for (int cut : cutoffs)
      for (std::size_t i = 0; i < dur.tau.size(); ++i) {
        const VqeProblem v = make_vqe(ctx.c, cut, dur.n_ts[i], o);
        ctx.note("vqe cutoff=" + fmt(cut) + " tau=" + fmt(dur.tau[i]));
        const VqeResult r = run_vqe(v);
        ctx.note("vqe energy=" + fmt(r.energy));
        tab.rows.push_back({fmt(cut), fmt(dur.tau[i]), fmt(v.usable_levels()), fmt(r.energy),
                            fmt(relative_energy_error(r.energy, e0)), fmt(r.buffer_population)});
        json s = vqe_summary(r, e0);
        s["cutoff"] = cut;
        s["tau_ns"] = dur.tau[i];
        runs.push_back(s);
        waveforms["L" + fmt(cut) + "_tau" + fmt(dur.tau[i])] = r.best;
      }
    ctx.write_csv("fig2a.csv", tab);
    ctx.write_json("waveforms.json", waveforms);
    ctx.results = {{"reference", reference_json(ctx, ref)}, {"runs", runs}};
  };
}

Plan plan_correlations(Block& p, const Common& c) {
  const int cutoff = p.integer("cutoff", c.params.cutoff, 2, 256);
  const Durations dur = parse_durations(p, c, {2000.0}, true);
  const VqeOpts o = parse_vqe(p, 10, 3000);
  const Reference ref = parse_reference(p, "reference", 32);
  const int max_r = p.integer("max_r", 6, 1, 10000);
  const std::string wf_file = p.text("waveform_file", "");
  if (!wf_file.empty()) check_file(p, "waveform_file", c, wf_file);
  check_usable_levels(p, cutoff, o.bond_levels);
  if (ref.energy_per_site) p.bad("reference.energy_per_site", "correlations need the DMRG state itself");
  if (ref.cfg.chain_length / 2 <= max_r) p.bad("max_r", "too long for the central half of the reference chain");
  return [=](Ctx& ctx) {
    VqeProblem v = make_vqe(ctx.c, cutoff, dur.n_ts.front(), o);
    json r{{"cutoff", cutoff}, {"tau_ns", dur.tau.front()}};
    Waveform wf;
    if (!wf_file.empty()) {
      wf = read_json_file(resolve(ctx.c, wf_file)).get<Waveform>();
      require(std::abs(wf.dt - ctx.c.params.dt) < 1e-12, ErrorCode::Schema, "waveform dt differs from params.dt");
      r["waveform_file"] = wf_file;
    } else {
      const VqeResult vr = run_vqe(v);
      wf = vr.best;
      r["vqe"] = vqe_summary(vr, reference_energy(ctx, ref));
      ctx.write_json("waveform.json", json(wf));
    }
    const MpsTensor t = extract_tensor(propagate(v.params, wf), cutoff);
    const SiteChannel ch = site_channel(t);
    const Matrix rho = fixed_point(ch).rho;
    const auto& d = dmrg(ctx, ref.cfg);
    Table tab{{"r", "qmps_zz", "dmrg_zz"}, {}};
    double worst = 0.0;
    for (int k = 1; k <= max_r; ++k) {
      const double q = two_point(ch, rho, 'z', 'z', k), e = central_correlation(d.mps, 'z', 'z', k);
      worst = std::max(worst, std::abs(q - e));
      tab.rows.push_back({fmt(k), fmt(q), fmt(e)});
    }
    ctx.write_csv("fig2b.csv", tab);
    r["energy"] = energy_density(ch, rho, ctx.c.model);
    r["energy_error"] = relative_energy_error(r["energy"].get<double>(), reference_energy(ctx, ref));
    r["max_zz_deviation"] = worst;
    r["reference"] = reference_json(ctx, ref);
    ctx.results = r;
  };
}

Plan plan_vqe_noisy(Block& p, const Common& c) {
  const int cutoff = p.integer("cutoff", c.params.cutoff, 2, 256);
  const Durations dur = parse_durations(p, c, {1000.0, 2000.0, 4000.0, 8000.0});
  const std::vector<double> scales = p.numbers("scales", {1.0, 2.0, 3.0}, 1e-9, 1e9);
  const int bond_levels = p.integer("bond_levels", 0, 0, 256);
  const double penalty = p.number("penalty_weight", 10.0, 0.0, 1e12);
  Block ib = p.sub("ideal");
  VqeOpts ideal = parse_vqe(ib, 4, 3000);
  ib.close();
  Block nb = p.sub("noisy");
  VqeOpts noisy = parse_vqe(nb, 1, 300);
  nb.close();
  for (auto* o : {&ideal, &noisy}) {
    o->bond_levels = bond_levels;
    o->penalty_weight = penalty;
  }
  const Reference ref = parse_reference(p, "reference", 32);
  check_usable_levels(p, cutoff, bond_levels);
  const NoiseSpec base = c.noise.value_or(NoiseSpec{});
  return [=](Ctx& ctx) {
    const double e0 = reference_energy(ctx, ref);
    Table tab{{"scale", "tau_ns", "energy", "energy_error", "ideal_energy_error"}, {}};
    std::map<double, std::vector<double>> errors;
    json runs = json::array(), waveforms = json::object();
    for (std::size_t i = 0; i < dur.tau.size(); ++i) {
      ctx.note("ideal vqe tau=" + fmt(dur.tau[i]));
      const VqeResult id = run_vqe(make_vqe(ctx.c, cutoff, dur.n_ts[i], ideal));
      for (double s : scales) {
        VqeProblem v = make_vqe(ctx.c, cutoff, dur.n_ts[i], noisy);
        v.noise = base;
        v.noise->scale = base.scale * s;
        v.initial = id.best;
        ctx.note("noisy vqe tau=" + fmt(dur.tau[i]) + " scale=" + fmt(s));
        const VqeResult nr = run_noisy_vqe(v);
        const double err = relative_energy_error(nr.energy, e0);
        errors[s].push_back(err);
        tab.rows.push_back({fmt(s), fmt(dur.tau[i]), fmt(nr.energy), fmt(err),
                            fmt(relative_energy_error(id.energy, e0))});
        json js = vqe_summary(nr, e0);
        js["scale"] = s;
        js["tau_ns"] = dur.tau[i];
        js["ideal_energy"] = id.energy;
        runs.push_back(js);
        waveforms["scale" + fmt(s) + "_tau" + fmt(dur.tau[i])] = nr.best;
      }
    }
    ctx.write_csv("fig2c.csv", tab);
    ctx.write_json("waveforms.json", waveforms);
    json per_scale = json::array();
    for (double s : scales) {
      const auto& e = errors.at(s);
      const auto k = static_cast<std::size_t>(std::min_element(e.begin(), e.end()) - e.begin());
      per_scale.push_back({{"scale", s},
                           {"min_energy_error", e[k]},
                           {"argmin_tau_ns", dur.tau[k]},
                           {"interior_minimum", k > 0 && k + 1 < e.size()}});
    }
    ctx.results = {{"reference", reference_json(ctx, ref)}, {"runs", runs}, {"per_scale", per_scale}};
  };
}

Plan plan_sample(Block& p, const Common& c) {
  const std::string wf_file = p.text("waveform_file", "");
  const bool has_target = p.has("target");
  TargetSpec t = parse_target(p, c);
  const std::string bases = p.text("bases", "zzzzzzzz");
  const int shots = p.integer("shots", 10000, 1, 100000000);
  const int burn_in = p.integer("burn_in", 50, 0, 100000000);
  if (!wf_file.empty()) check_file(p, "waveform_file", c, wf_file);
  if (!wf_file.empty() && has_target) p.bad("waveform_file", "give either waveform_file or target, not both");
  if (bases.empty() || bases.find_first_not_of("xyz") != std::string::npos)
    p.bad("bases", "expected a nonempty string over x, y, z");
  return [=](Ctx& ctx) {
    Matrix u;
    json r;
    if (!wf_file.empty()) {
      const Waveform wf = read_json_file(resolve(ctx.c, wf_file)).get<Waveform>();
      u = propagate(ctx.c.params, wf);
      r["waveform_file"] = wf_file;
    } else {
      const ResolvedTarget tgt = resolve_target(ctx, t, t.bond_dim);
      u = tgt.matrix;
      r["target"] = tgt.info;
    }
    const std::vector<char> b(bases.begin(), bases.end());
    const auto shots_out = sample_chain(u, b, shots, ctx.c.seed, burn_in);
    Table samples{{"shot", "outcomes"}, {}};
    for (std::size_t k = 0; k < shots_out.size(); ++k) {
      std::string bits;
      for (auto x : shots_out[k]) bits += static_cast<char>('0' + x);
      samples.rows.push_back({fmt(k), bits});
    }
    ctx.write_csv("samples.csv", samples);
    const MpsTensor tensor = extract_tensor(u, static_cast<int>(u.rows() / 2));
    Table corr{{"r", "bases", "estimate", "std_error", "channel_value"}, {}};
    for (std::size_t k = 1; k < b.size(); ++k) {
      double mean = 0.0;
      for (const auto& row : shots_out) mean += (row[0] == row[k]) ? 1.0 : -1.0;
      mean /= shots;
      const double se = std::sqrt(std::max(0.0, 1.0 - mean * mean) / shots);
      double exact = std::nan("");
      try {
        exact = correlation(tensor, b[0], b[k], static_cast<int>(k));
      } catch (const Error&) {
      }
      corr.rows.push_back({fmt(k), std::string{b[0], b[k]}, fmt(mean), fmt(se), fmt(exact)});
    }
    ctx.write_csv("correlators.csv", corr);
    r["shots"] = shots;
    r["bases"] = bases;
    r["burn_in"] = burn_in;
    ctx.results = r;
  };
}

const std::vector<std::string> kParamKeys = {"chi", "chi_prime", "kerr", "omega_max", "dt",
                                             "t1_cavity", "t1_qubit", "t2_qubit", "cutoff"};
const std::vector<std::string> kNoiseKeys = {"t1_cavity", "t1_qubit", "t2_qubit", "scale", "method"};

// Parses and checks a manifest; returns the executable plan when there are
// no violations.
std::optional<Plan> parse(const json& m, const fs::path& base, Common& common, Violations& v) {
  Block root(&m, "", v);
  if (!m.is_object()) return std::nullopt;
  const json* exp = root.raw("experiment");
  std::optional<Experiment> e;
  if (!exp) v.push_back("experiment: required");
  else if (!exp->is_string()) v.push_back("experiment: expected a string");
  else if (!(e = parse_experiment(exp->get<std::string>())))
    v.push_back("experiment: unknown experiment '" + exp->get<std::string>() + "' (expected one of " +
                join(experiment_names(), ", ") + ")");
  common.seed = root.seed("seed", 1);
  common.base = base;
  const json* out = root.raw("output_dir");
  if (!out) v.push_back("output_dir: required");
  else if (!out->is_string() || out->get<std::string>().empty()) v.push_back("output_dir: expected a nonempty string");
  root.text("description", "");

  auto typed = [&](const char* key, const std::vector<std::string>& keys, auto assign) {
    const json* b = root.raw(key);
    if (!b) return;
    if (!b->is_object()) {
      v.push_back(std::string(key) + ": expected an object");
      return;
    }
    for (const auto& [k, val] : b->items())
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) v.push_back(std::string(key) + "." + k + ": unknown field");
    try {
      assign(*b);
    } catch (const std::exception& ex) {
      v.push_back(std::string(key) + ": " + ex.what());
    }
  };
  typed("params", kParamKeys, [&](const json& b) { common.params = b.get<DeviceParams>(); });
  typed("noise", kNoiseKeys, [&](const json& b) { common.noise = b.get<NoiseSpec>(); });
  typed("model", {"J", "h", "V"}, [&](const json& b) {
    for (const auto& [k, val] : b.items())
      if (!val.is_number()) throw std::runtime_error(k + " must be a number");
    common.model = b.get<SpinChainModel>();
  });

  Block problem = root.sub("problem");
  std::optional<Plan> plan;
  if (e) {
    switch (*e) {
      case Experiment::SynthesizeGrape: plan = plan_synthesize_grape(problem, common); break;
      case Experiment::SynthesizeSnap: plan = plan_synthesize_snap(problem, common); break;
      case Experiment::CompareControl: plan = plan_compare_control(problem, common); break;
      case Experiment::VqeIdeal: plan = plan_vqe_ideal(problem, common); break;
      case Experiment::VqeNoisy: plan = plan_vqe_noisy(problem, common); break;
      case Experiment::DmrgReference: plan = plan_dmrg_reference(problem, common); break;
      case Experiment::Correlations: plan = plan_correlations(problem, common); break;
      case Experiment::Sample: plan = plan_sample(problem, common); break;
    }
  }
  problem.close();
  root.close();
  if (!v.empty()) return std::nullopt;
  return plan;
}

class DirLock {
 public:
  explicit DirLock(const fs::path& dir) : path_(dir / ".holoqed.lock") {
    std::FILE* f = std::fopen(path_.c_str(), "wx");
    if (!f) fail(ErrorCode::OutputLocked, "output directory " + dir.string() + " is locked by " + path_.string());
    std::fclose(f);
  }
  ~DirLock() {
    std::error_code ec;
    fs::remove(path_, ec);
  }
  DirLock(const DirLock&) = delete;
  DirLock& operator=(const DirLock&) = delete;

 private:
  fs::path path_;
};

}  // namespace

const char* to_string(Experiment e) {
  for (const auto& [x, n] : experiment_table())
    if (x == e) return n.c_str();
  return "unknown";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [e, n] : experiment_table()) out.push_back(n);
    return out;
  }();
  return names;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Schema: return exit_code::schema;
    case ErrorCode::MissingFile: return exit_code::missing_file;
    case ErrorCode::OutputLocked: return exit_code::locked;
    default: return exit_code::module;
  }
}

const char* version() { return HOLOQED_VERSION; }

std::string manifest_hash(const json& manifest) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : manifest.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json load_manifest(const fs::path& path) {
  if (!fs::exists(path)) fail(ErrorCode::MissingFile, "no such manifest " + path.string());
  return read_json_file(path);
}

std::vector<std::string> validate(const json& manifest, const fs::path& base_dir) {
  Violations v;
  Common common;
  parse(manifest, base_dir, common, v);
  return v;
}

RunOutcome run(const json& manifest, const fs::path& base_dir, const fs::path& output_override) {
  Violations v;
  Common common;
  const std::optional<Plan> plan = parse(manifest, base_dir, common, v);
  if (!plan) fail(ErrorCode::Schema, "invalid manifest:\n  " + join(v, "\n  "));

  fs::path out = output_override.empty() ? fs::path(manifest.at("output_dir").get<std::string>()) : output_override;
  if (out.is_relative() && output_override.empty()) out = base_dir / out;
  fs::create_directories(out);
  DirLock lock(out);

  const std::string hash = manifest_hash(manifest);
  Ctx ctx(common, out, hash);
  ctx.note(std::string("holoqed ") + version() + " experiment=" + manifest.at("experiment").get<std::string>() +
           " manifest_hash=" + hash);
  ctx.write_json("manifest.json", manifest);
  ctx.write_text("VERSION", std::string(version()) + "\n");
  try {
    (*plan)(ctx);
  } catch (const std::exception& e) {
    ctx.note(std::string("error: ") + e.what());
    throw;
  }
  json summary{{"experiment", manifest.at("experiment")},
               {"manifest_hash", hash},
               {"version", version()},
               {"seed", common.seed},
               {"results", ctx.results}};
  std::vector<std::string> files = ctx.files;
  files.push_back("results.json");
  summary["files"] = files;
  ctx.write_json("results.json", summary);
  ctx.note("done");
  return {out, summary, files};
}

json templates() {
  const json params{{"cutoff", 8}};
  const json model{{"J", 1.0}, {"h", 1.0}, {"V", 0.5}};
  json t;
  t["fig1b"] = {{"experiment", "compare_control"},
                {"description", "GRAPE vs SNAP infidelity against implementation time, D=2 target"},
                {"seed", 1},
                {"output_dir", "runs/fig1b"},
                {"params", params},
                {"model", model},
                {"problem",
                 {{"target", {{"source", "dmrg"}, {"bond_dim", 2}, {"embed_cutoff", 4}}},
                  {"threshold", 1e-2},
                  {"grape", {{"tau_ns", {250, 500, 1000, 2000}}, {"restarts", 4}, {"tol_infidelity", 1e-4}}},
                  {"snap", {{"depth", 8}, {"batch", 10}}}}}};
  t["fig1c"] = {{"experiment", "synthesize_grape"},
                {"description", "GRAPE infidelity and qMPS energy error against pulse duration per bond dimension"},
                {"seed", 1},
                {"output_dir", "runs/fig1c"},
                {"params", params},
                {"model", model},
                {"problem",
                 {{"target", {{"source", "dmrg"}}},
                  {"bond_dims", {2, 3}},
                  {"tau_ns", {500, 1000, 2000, 4000}},
                  {"restarts", 4},
                  {"tol_infidelity", 1e-6}}}};
  t["fig2a"] = {{"experiment", "vqe_ideal"},
                {"description", "Ideal holoVQE energy against cavity cutoff per pulse duration"},
                {"seed", 1},
                {"output_dir", "runs/fig2a"},
                {"params", params},
                {"model", model},
                {"problem",
                 {{"cutoffs", {8, 10}},
                  {"tau_ns", {1000, 2000}},
                  {"batch", 10},
                  {"max_iters", 3000},
                  {"reference", {{"chain_length", 128}, {"bond_dim", 32}}}}}};
  t["fig2b"] = {{"experiment", "correlations"},
                {"description", "qMPS z-z correlator against separation, compared with DMRG"},
                {"seed", 1},
                {"output_dir", "runs/fig2b"},
                {"params", {{"cutoff", 10}}},
                {"model", model},
                {"problem",
                 {{"cutoff", 10},
                  {"bond_levels", 4},
                  {"tau_ns", 2000},
                  {"batch", 10},
                  {"max_r", 8},
                  {"reference", {{"chain_length", 128}, {"bond_dim", 32}}}}}};
  t["fig2c"] = {{"experiment", "vqe_noisy"},
                {"description", "Noisy holoVQE energy error against pulse duration per noise-time multiplier"},
                {"seed", 1},
                {"output_dir", "runs/fig2c"},
                {"params", params},
                {"noise", {{"t1_cavity", 2700.0}, {"t1_qubit", 170.0}, {"t2_qubit", 43.0}, {"method", "exact_exponential"}}},
                {"model", model},
                {"problem",
                 {{"cutoff", 8},
                  {"bond_levels", 2},
                  {"tau_ns", {1000, 2000, 4000, 8000}},
                  {"scales", {1, 2, 3}},
                  {"ideal", {{"batch", 4}, {"max_iters", 3000}}},
                  {"noisy", {{"batch", 1}, {"max_iters", 300}}},
                  {"reference", {{"chain_length", 128}, {"bond_dim", 32}}}}}};
  return t;
}

}  // namespace holoqed::harness
