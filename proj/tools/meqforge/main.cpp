// Copyright 2026 The meqforge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// meqforge — batch front end for the master-equation library.
//
//   meqforge <spectrum|liouvillian|steady|sweep|blocks>
//            --config <file.json> [--jobs N] [--out DIR]
//
// JSON config in; CSV / JSON / Matrix Market out.  MEQFORGE_LOG sets the
// log level.  Exit codes: 0 success, 1 solver non-convergence (partial
// results are still written), 2 configuration errors.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <meq/meq.hpp>

using nlohmann::json;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

[[noreturn]] void config_fail(const std::string& path, const std::string& what) {
  throw meq::domain_error(path + ": " + what);
}

const json& require_field(const json& j, const char* key,
                          const std::string& path) {
  if (!j.is_object()) config_fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) config_fail(path + "." + key, "missing");
  return *it;
}

double require_number(const json& j, const char* key, const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_number()) config_fail(path + "." + key, "expected a number");
  return v.get<double>();
}

double optional_number(const json& j, const char* key, double fallback,
                       const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_number()) config_fail(path + "." + key, "expected a number");
  return v.get<double>();
}

bool optional_bool(const json& j, const char* key, bool fallback,
                   const std::string& path) {
  if (!j.is_object() || !j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (!v.is_boolean()) config_fail(path + "." + key, "expected a boolean");
  return v.get<bool>();
}

std::string require_string(const json& j, const char* key,
                           const std::string& path) {
  const json& v = require_field(j, key, path);
  if (!v.is_string()) config_fail(path + "." + key, "expected a string");
  return v.get<std::string>();
}

// ---------------------------------------------------------------------------
// Custom-model operator terms: {"coefficient": c, "factors": [[site, name]]}
// with operator names sz, sp, sm, a, adag, n, id.  A term list sums into one
// operator on the composite space.
// ---------------------------------------------------------------------------

meq::Matrix local_op(const std::string& name, int dim, const std::string& path) {
  using meq::PauliKind;
  if (name == "id") return meq::Matrix::Identity(dim, dim);
  if (name == "sz" || name == "sp" || name == "sm") {
    if (dim != 2)
      config_fail(path, "operator '" + name + "' requires a dimension-2 site");
    if (name == "sz") return meq::pauli(PauliKind::Z).matrix;
    if (name == "sp") return meq::pauli(PauliKind::Plus).matrix;
    return meq::pauli(PauliKind::Minus).matrix;
  }
  if (name == "a" || name == "adag" || name == "n") {
    const meq::Matrix a = meq::annihilation(dim).matrix;
    if (name == "a") return a;
    if (name == "adag") return a.adjoint();
    return a.adjoint() * a;
  }
  config_fail(path, "unknown operator '" + name +
                        "' (expected sz, sp, sm, a, adag, n, id)");
}

meq::Complex parse_coefficient(const json& v, const std::string& path) {
  if (v.is_number()) return meq::Complex(v.get<double>(), 0.0);
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return meq::Complex(v[0].get<double>(), v[1].get<double>());
  config_fail(path, "expected a number or [re, im] pair");
}

meq::Operator build_terms(const json& terms, const meq::CompositeSpace& space,
                          const std::string& path) {
  if (!terms.is_array() || terms.empty())
    config_fail(path, "expected a non-empty array of terms");
  meq::Matrix sum = meq::Matrix::Zero(space.total_dim, space.total_dim);
  for (size_t t = 0; t < terms.size(); ++t) {
    const std::string tpath = path + "[" + std::to_string(t) + "]";
    const json& term = terms[t];
    const meq::Complex coef =
        parse_coefficient(require_field(term, "coefficient", tpath),
                          tpath + ".coefficient");
    const json& factors = require_field(term, "factors", tpath);
    if (!factors.is_array() || factors.empty())
      config_fail(tpath + ".factors", "expected a non-empty array");
    meq::Matrix prod = meq::Matrix::Identity(space.total_dim, space.total_dim);
    for (size_t f = 0; f < factors.size(); ++f) {
      const std::string fpath =
          tpath + ".factors[" + std::to_string(f) + "]";
      const json& fac = factors[f];
      if (!fac.is_array() || fac.size() != 2 || !fac[0].is_number_integer() ||
          !fac[1].is_string())
        config_fail(fpath, "expected [site, \"op\"]");
      const int site = fac[0].get<int>();
      if (site < 0 || site >= static_cast<int>(space.dims.size()))
        config_fail(fpath, "site index out of range");
      const meq::Operator emb = meq::embed(
          meq::Operator{meq::CompositeSpace::single(space.dims[site]),
                        local_op(fac[1].get<std::string>(), space.dims[site],
                                 fpath)},
          site, space);
      prod = (prod * emb.matrix).eval();
    }
    sum += coef * prod;
  }
  return meq::Operator{space, std::move(sum)};
}

// ---------------------------------------------------------------------------
// RunConfig
// ---------------------------------------------------------------------------

struct SweepParam {
  std::string name;
  std::vector<double> values;
};

struct RunConfig {
  bool is_chain = true;
  meq::ChainParams chain;
  // custom model
  meq::CompositeSpace space;
  json custom_hamiltonian, custom_bare, custom_baths, custom_symmetry;
  bool has_bare = false, has_symmetry = false;

  meq::SecularPolicy policy;
  bool local = false;
  bool include_lamb_shift = true;
  double tol_degeneracy = -1.0;
  std::vector<SweepParam> sweep;
  std::string prefix;
};

meq::SecularPolicy parse_policy(const json& j, const std::string& path) {
  const std::string kind = require_string(j, "kind", path);
  if (kind == "redfield") return meq::SecularPolicy::redfield();
  if (kind == "full_secular") return meq::SecularPolicy::full_secular();
  if (kind == "partial") {
    double c = require_number(j, "c_psa", path);
    return meq::SecularPolicy::partial(c);
  }
  if (kind == "unified")
    return meq::SecularPolicy::unified(require_number(j, "w", path));
  config_fail(path + ".kind",
              "expected redfield, full_secular, partial, or unified");
}

RunConfig parse_config(const std::string& file) {
  std::ifstream f(file);
  if (!f) config_fail(file, "cannot open config file");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    config_fail(file, std::string("invalid JSON: ") + e.what());
  }

  RunConfig cfg;
  const std::string model = require_string(j, "model", "config");
  if (model == "chain") {
    cfg.is_chain = true;
    const json c = j.value("chain", json::object());
    meq::ChainParams& p = cfg.chain;
    p.omega1 = optional_number(c, "omega1", p.omega1, "chain");
    p.omega2 = optional_number(c, "omega2", p.omega2, "chain");
    p.Omega_L = optional_number(c, "Omega_L", p.Omega_L, "chain");
    p.Omega_R = optional_number(c, "Omega_R", p.Omega_R, "chain");
    p.g1 = optional_number(c, "g1", p.g1, "chain");
    p.g2 = optional_number(c, "g2", p.g2, "chain");
    p.g12 = optional_number(c, "g12", p.g12, "chain");
    p.N = static_cast<int>(optional_number(c, "N", p.N, "chain"));
    p.T_L = optional_number(c, "T_L", p.T_L, "chain");
    p.T_R = optional_number(c, "T_R", p.T_R, "chain");
    p.alpha_L = optional_number(c, "alpha_L", p.alpha_L, "chain");
    p.alpha_R = optional_number(c, "alpha_R", p.alpha_R, "chain");
    p.chi = optional_number(c, "chi", p.chi, "chain");
    p.omega_c = optional_number(c, "omega_c", p.omega_c, "chain");
    p.momentum_coupling =
        optional_bool(c, "momentum_coupling", p.momentum_coupling, "chain");
    try {
      p.validate();
    } catch (const meq::domain_error& e) {
      config_fail("chain", e.what());
    }
  } else if (model == "custom") {
    cfg.is_chain = false;
    const json& c = require_field(j, "custom", "config");
    const json& dims = require_field(c, "dims", "custom");
    if (!dims.is_array() || dims.empty())
      config_fail("custom.dims", "expected a non-empty array of dimensions");
    std::vector<int> dvec;
    for (const auto& d : dims) {
      if (!d.is_number_integer())
        config_fail("custom.dims", "expected integers");
      dvec.push_back(d.get<int>());
    }
    try {
      cfg.space = meq::CompositeSpace::of(dvec);
    } catch (const meq::domain_error& e) {
      config_fail("custom.dims", e.what());
    }
    cfg.custom_hamiltonian = require_field(c, "hamiltonian", "custom");
    if (c.contains("hamiltonian_bare")) {
      cfg.custom_bare = c.at("hamiltonian_bare");
      cfg.has_bare = true;
    }
    cfg.custom_baths = require_field(c, "baths", "custom");
    if (!cfg.custom_baths.is_array() || cfg.custom_baths.empty())
      config_fail("custom.baths", "expected a non-empty array");
    if (c.contains("symmetry")) {
      cfg.custom_symmetry = c.at("symmetry");
      cfg.has_symmetry = true;
    }
  } else {
    config_fail("config.model", "expected \"chain\" or \"custom\"");
  }

  cfg.policy = parse_policy(require_field(j, "policy", "config"), "policy");
  const std::string mode =
      j.contains("mode") ? require_string(j, "mode", "config") : "global";
  if (mode == "local")
    cfg.local = true;
  else if (mode == "global")
    cfg.local = false;
  else
    config_fail("config.mode", "expected \"global\" or \"local\"");
  cfg.include_lamb_shift =
      optional_bool(j, "include_lamb_shift", true, "config");
  cfg.tol_degeneracy = optional_number(j, "tol_degeneracy", -1.0, "config");

  if (j.contains("sweep")) {
    const json& sw = j.at("sweep");
    const json& params = require_field(sw, "parameters", "sweep");
    if (!params.is_array() || params.empty() || params.size() > 2)
      config_fail("sweep.parameters", "expected 1 or 2 parameter entries");
    for (size_t i = 0; i < params.size(); ++i) {
      const std::string ppath = "sweep.parameters[" + std::to_string(i) + "]";
      SweepParam sp;
      sp.name = require_string(params[i], "name", ppath);
      const json& vals = require_field(params[i], "values", ppath);
      if (!vals.is_array() || vals.empty())
        config_fail(ppath + ".values", "expected a non-empty array");
      for (const auto& v : vals) {
        if (!v.is_number())
          config_fail(ppath + ".values", "expected numbers");
        sp.values.push_back(v.get<double>());
        if (!std::isfinite(sp.values.back()))
          config_fail(ppath + ".values", "values must be finite");
      }
      bool incr = true, decr = true;
      for (size_t k = 1; k < sp.values.size(); ++k) {
        incr = incr && sp.values[k] > sp.values[k - 1];
        decr = decr && sp.values[k] < sp.values[k - 1];
      }
      if (sp.values.size() > 1 && !incr && !decr)
        config_fail(ppath + ".values", "values must be strictly monotone");
      cfg.sweep.push_back(std::move(sp));
    }
    if (!cfg.is_chain)
      config_fail("sweep", "sweeps require the chain model");
  }

  if (j.contains("outputs"))
    cfg.prefix = j.at("outputs").is_object()
                     ? j.at("outputs").value("prefix", std::string())
                     : std::string();
  return cfg;
}

// ---------------------------------------------------------------------------
// Model instantiation
// ---------------------------------------------------------------------------

struct ModelInstance {
  meq::Operator H_full, H_jump;
  std::vector<meq::BathSpec> baths;
  std::optional<meq::Operator> symmetry_gen;
};

void apply_chain_param(meq::ChainParams& p, const std::string& name, double v,
                       const std::string& path) {
  if (name == "g") p.g1 = p.g2 = v;
  else if (name == "g1") p.g1 = v;
  else if (name == "g2") p.g2 = v;
  else if (name == "g12") p.g12 = v;
  else if (name == "omega1") p.omega1 = v;
  else if (name == "omega2") p.omega2 = v;
  else if (name == "Omega") p.Omega_L = p.Omega_R = v;
  else if (name == "Omega_L") p.Omega_L = v;
  else if (name == "Omega_R") p.Omega_R = v;
  else if (name == "T_L") p.T_L = v;
  else if (name == "T_R") p.T_R = v;
  else if (name == "alpha") p.alpha_L = p.alpha_R = v;
  else if (name == "alpha_L") p.alpha_L = v;
  else if (name == "alpha_R") p.alpha_R = v;
  else if (name == "chi") p.chi = v;
  else if (name == "omega_c") p.omega_c = v;
  else
    config_fail(path, "unknown sweep parameter '" + name + "'");
}

meq::Operator chain_total_number(const meq::CompositeSpace& space, int N) {
  const meq::Matrix aL = meq::embed(meq::annihilation(N), 0, space).matrix;
  const meq::Matrix aR = meq::embed(meq::annihilation(N), 3, space).matrix;
  const meq::Matrix sz1 = meq::embed(meq::pauli(meq::PauliKind::Z), 1, space).matrix;
  const meq::Matrix sz2 = meq::embed(meq::pauli(meq::PauliKind::Z), 2, space).matrix;
  const meq::Matrix id = meq::Matrix::Identity(space.total_dim, space.total_dim);
  return meq::Operator{space, aL.adjoint() * aL + aR.adjoint() * aR +
                                  0.5 * (sz1 + id) + 0.5 * (sz2 + id)};
}

ModelInstance instantiate(const RunConfig& cfg) {
  ModelInstance m;
  if (cfg.is_chain) {
    const meq::ChainSystem s = meq::chain_hamiltonians(cfg.chain);
    m.H_full = s.H_full;
    m.H_jump = cfg.local ? s.H_bare : s.H_full;
    m.baths = meq::chain_baths(cfg.chain);
    m.symmetry_gen = chain_total_number(s.space, cfg.chain.N);
    return m;
  }
  m.H_full = build_terms(cfg.custom_hamiltonian, cfg.space, "custom.hamiltonian");
  const double hnorm = std::max(1.0, m.H_full.matrix.norm());
  if ((m.H_full.matrix - m.H_full.matrix.adjoint()).norm() > 1e-12 * hnorm)
    config_fail("custom.hamiltonian",
                "assembled operator is not Hermitian; check the term set");
  if (cfg.local) {
    if (!cfg.has_bare)
      config_fail("custom.hamiltonian_bare",
                  "required for local mode with a custom model");
    m.H_jump = build_terms(cfg.custom_bare, cfg.space, "custom.hamiltonian_bare");
    const double bnorm = std::max(1.0, m.H_jump.matrix.norm());
    if ((m.H_jump.matrix - m.H_jump.matrix.adjoint()).norm() > 1e-12 * bnorm)
      config_fail("custom.hamiltonian_bare",
                  "assembled operator is not Hermitian; check the term set");
  } else {
    m.H_jump = m.H_full;
  }
  for (size_t b = 0; b < cfg.custom_baths.size(); ++b) {
    const std::string bpath = "baths[" + std::to_string(b) + "]";
    const json& jb = cfg.custom_baths[b];
    const std::string label = require_string(jb, "label", bpath);
    const double T = require_number(jb, "T", bpath);
    const double alpha = require_number(jb, "alpha", bpath);
    const double chi = require_number(jb, "chi", bpath);
    const double omega_c = require_number(jb, "omega_c", bpath);
    meq::Operator coupling = build_terms(require_field(jb, "coupling", bpath),
                                         cfg.space, bpath + ".coupling");
    try {
      m.baths.push_back(meq::BathSpec::make(T, alpha, chi, omega_c,
                                            {std::move(coupling)}, label));
    } catch (const meq::domain_error& e) {
      config_fail(bpath, e.what());
    }
  }
  if (cfg.has_symmetry)
    m.symmetry_gen =
        build_terms(cfg.custom_symmetry, cfg.space, "custom.symmetry");
  return m;
}

meq::LiouvillianBuild build_from(const RunConfig& cfg, const ModelInstance& m) {
  return meq::build_liouvillian(m.H_full, m.H_jump, m.baths, cfg.policy,
                                cfg.include_lamb_shift, cfg.tol_degeneracy);
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

std::filesystem::path out_path(const std::string& dir,
                               const std::string& prefix,
                               const std::string& name) {
  std::filesystem::create_directories(dir);
  return std::filesystem::path(dir) / (prefix + name);
}

int cmd_spectrum(const RunConfig& cfg, const std::string& out_dir) {
  const ModelInstance m = instantiate(cfg);
  const meq::EigenSystem eig =
      meq::diagonalize(m.H_jump, cfg.tol_degeneracy);
  const std::vector<double> freqs = meq::bohr_frequencies(eig);

  std::vector<int> cluster_of(freqs.size());
  std::vector<double> rep_of(freqs.size());
  if (cfg.policy.kind == meq::SecularPolicy::Kind::Unified) {
    const auto clusters = meq::cluster_frequencies(freqs, cfg.policy.w);
    size_t k = 0;
    for (size_t c = 0; c < clusters.size(); ++c)
      for (size_t mdx = 0; mdx < clusters[c].members.size(); ++mdx, ++k) {
        cluster_of[k] = static_cast<int>(c);
        rep_of[k] = clusters[c].representative;
      }
  } else {
    for (size_t k = 0; k < freqs.size(); ++k) {
      cluster_of[k] = static_cast<int>(k);
      rep_of[k] = freqs[k];
    }
  }

  const auto path = out_path(out_dir, cfg.prefix, "spectrum.csv");
  std::ofstream f(path);
  f << "omega,cluster,representative\n";
  for (size_t k = 0; k < freqs.size(); ++k)
    f << fmt17(freqs[k]) << ',' << cluster_of[k] << ',' << fmt17(rep_of[k])
      << '\n';
  std::printf("wrote %s (%zu frequencies)\n", path.c_str(), freqs.size());
  return 0;
}

int cmd_liouvillian(const RunConfig& cfg, const std::string& out_dir) {
  const ModelInstance m = instantiate(cfg);
  const meq::LiouvillianBuild build = build_from(cfg, m);
  const auto mtx = out_path(out_dir, cfg.prefix, "liouvillian.mtx");
  meq::write_matrix_market(mtx.string(), build.total());

  json report;
  report["policy"] = build.policy.name();
  report["mode"] = build.is_local ? "local" : "global";
  report["dimension"] = build.space.total_dim;
  report["superoperator_dimension"] =
      static_cast<long long>(build.space.total_dim) * build.space.total_dim;
  report["kept_pairs"] = build.kept_pairs;
  report["dropped_pairs"] = build.dropped_pairs;
  report["include_lamb_shift"] = build.include_lamb_shift;
  report["bath_labels"] = build.bath_labels;
  if (build.clusters) {
    json cl = json::array();
    for (const auto& c : *build.clusters)
      cl.push_back({{"representative", c.representative},
                    {"members", c.members}});
    report["clusters"] = std::move(cl);
  }
  const auto rep = out_path(out_dir, cfg.prefix, "liouvillian.json");
  std::ofstream f(rep);
  f << report.dump(2) << '\n';
  std::printf("wrote %s and %s (kept %lld, dropped %lld)\n", mtx.c_str(),
              rep.c_str(), build.kept_pairs, build.dropped_pairs);
  return 0;
}

int cmd_steady(const RunConfig& cfg, const std::string& out_dir) {
  const ModelInstance m = instantiate(cfg);
  const meq::LiouvillianBuild build = build_from(cfg, m);
  meq::SteadyState ss;
  try {
    ss = meq::steady_state(build);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "steady: %s\n", e.what());
    return 1;
  }
  const meq::HeatFlowResult hf = meq::heat_flow(m.H_full, build, ss.rho);

  json report;
  report["method"] = ss.method;
  report["residual"] = ss.residual;
  report["min_eig_rho"] = ss.min_eigenvalue;
  report["policy"] = build.policy.name();
  report["mode"] = build.is_local ? "local" : "global";
  report["kept_pairs"] = build.kept_pairs;
  report["dropped_pairs"] = build.dropped_pairs;
  json flows;
  for (const auto& [label, flow] : hf.per_bath) flows[label] = flow;
  report["heat_flow"] = std::move(flows);
  report["imbalance"] = hf.imbalance;

  const auto rep = out_path(out_dir, cfg.prefix, "steady.json");
  std::ofstream f(rep);
  f << report.dump(2) << '\n';
  const auto mtx = out_path(out_dir, cfg.prefix, "rho.mtx");
  meq::write_matrix_market(mtx.string(), ss.rho.matrix);
  std::printf("wrote %s and %s\n", rep.c_str(), mtx.c_str());
  return 0;
}

struct PointResult {
  double p1 = kNaN, p2 = kNaN;
  double JL = kNaN, JR = kNaN, imbalance = kNaN;
  double residual = kNaN, min_eig = kNaN;
  std::string flag;
  bool noconv = false;
};

int cmd_sweep(const RunConfig& cfg, const std::string& out_dir, int jobs) {
  if (cfg.sweep.empty())
    config_fail("sweep", "the sweep subcommand needs a sweep section");
  const SweepParam& P1 = cfg.sweep[0];
  const SweepParam* P2 = cfg.sweep.size() > 1 ? &cfg.sweep[1] : nullptr;
  const size_t n1 = P1.values.size();
  const size_t n2 = P2 ? P2->values.size() : 1;
  const size_t total = n1 * n2;
  // Validate names once up front so a typo fails before any work runs.
  {
    meq::ChainParams probe = cfg.chain;
    apply_chain_param(probe, P1.name, P1.values[0], "sweep.parameters[0]");
    if (P2)
      apply_chain_param(probe, P2->name, P2->values[0], "sweep.parameters[1]");
  }

  std::vector<PointResult> results(total);
  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const size_t idx = next.fetch_add(1);
      if (idx >= total) return;
      const size_t i1 = idx / n2, i2 = idx % n2;
      PointResult r;
      r.p1 = P1.values[i1];
      if (P2) r.p2 = P2->values[i2];
      try {
        meq::ChainParams p = cfg.chain;
        apply_chain_param(p, P1.name, r.p1, "sweep.parameters[0]");
        if (P2) apply_chain_param(p, P2->name, r.p2, "sweep.parameters[1]");
        const meq::ChainSystem s = meq::chain_hamiltonians(p);
        const auto baths = meq::chain_baths(p);
        const meq::LiouvillianBuild build = meq::build_liouvillian(
            s.H_full, cfg.local ? s.H_bare : s.H_full, baths, cfg.policy,
            cfg.include_lamb_shift, cfg.tol_degeneracy);
        const meq::SteadyState ss = meq::steady_state(build);
        const meq::HeatFlowResult hf = meq::heat_flow(s.H_full, build, ss.rho);
        r.JL = hf.per_bath.at("L");
        r.JR = hf.per_bath.at("R");
        r.imbalance = hf.imbalance;
        r.residual = ss.residual;
        r.min_eig = ss.min_eigenvalue;
        std::vector<std::string> flags;
        const double jscale =
            std::max({std::abs(r.JL), std::abs(r.JR), 1e-300});
        if (r.min_eig < -1e-8) flags.push_back("positivity");
        // Balance check J_L + J_R = 0: exact (up to solver precision) when
        // the generator's Hamiltonian equals H_S; with the Lamb shift in the
        // generator the sum acquires the physical i·Tr([H_S, H_LS]ρ) term,
        // far below 1e-3 relative at weak coupling, so only gross violations
        // are flagged in that configuration.
        const double balance_tol = cfg.include_lamb_shift ? 1e-3 : 1e-10;
        if (r.imbalance > balance_tol * jscale) flags.push_back("imbalance");
        // Flow out of the hotter bath must not be negative (the cells the
        // reference heat maps whiten out).
        const double J_hot = p.T_L >= p.T_R ? r.JL : r.JR;
        if (J_hot < -1e-6 * jscale) flags.push_back("second_law");
        for (size_t k = 0; k < flags.size(); ++k)
          r.flag += (k ? ";" : "") + flags[k];
        if (!r.flag.empty()) r.JL = r.JR = kNaN;  // whiten flagged cells
      } catch (const std::exception& e) {
        r.noconv = true;
        r.flag = "noconv";
        r.JL = r.JR = r.imbalance = kNaN;
        std::fprintf(stderr, "sweep point %zu (%s=%s%s%s): %s\n", idx,
                     P1.name.c_str(), fmt17(r.p1).c_str(),
                     P2 ? (", " + P2->name + "=").c_str() : "",
                     P2 ? fmt17(r.p2).c_str() : "", e.what());
      }
      results[idx] = std::move(r);
    }
  };

  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(total)));
  std::vector<std::thread> pool;
  for (int t = 1; t < nthreads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  const auto path = out_path(out_dir, cfg.prefix, "sweep.csv");
  std::ofstream f(path);
  f << "param1,param2,J_L,J_R,imbalance,residual,min_eig_rho,flag\n";
  for (const PointResult& r : results)
    f << fmt17(r.p1) << ',' << fmt17(r.p2) << ',' << fmt17(r.JL) << ','
      << fmt17(r.JR) << ',' << fmt17(r.imbalance) << ',' << fmt17(r.residual)
      << ',' << fmt17(r.min_eig) << ',' << r.flag << '\n';
  const long long bad =
      std::count_if(results.begin(), results.end(),
                    [](const PointResult& r) { return r.noconv; });
  std::printf("wrote %s (%zu points, %lld non-converged)\n", path.c_str(),
              total, bad);
  return bad > 0 ? 1 : 0;
}

int cmd_blocks(const RunConfig& cfg, const std::string& out_dir) {
  const ModelInstance m = instantiate(cfg);
  if (!m.symmetry_gen)
    config_fail("custom.symmetry",
                "the blocks subcommand needs a symmetry generator "
                "(automatic for the chain model)");
  const meq::LiouvillianBuild build = build_from(cfg, m);
  meq::BlockDecomposition bd;
  try {
    bd = meq::block_transform(build.total(), *m.symmetry_gen);
  } catch (const meq::domain_error& e) {
    std::fprintf(stderr, "blocks: %s\n", e.what());
    return 1;
  }

  json report;
  report["symmetry_residual"] = bd.symmetry_residual;
  report["offblock_mass"] = bd.offblock_mass;
  report["block_count"] = bd.blocks.size();
  json blocks = json::array();
  for (size_t g = 0; g < bd.blocks.size(); ++g)
    blocks.push_back({{"label", bd.block_labels[g]},
                      {"begin", bd.block_ranges[g].first},
                      {"end", bd.block_ranges[g].second},
                      {"size", bd.block_ranges[g].second -
                                   bd.block_ranges[g].first}});
  report["blocks"] = std::move(blocks);
  const auto rep = out_path(out_dir, cfg.prefix, "blocks.json");
  std::ofstream f(rep);
  f << report.dump(2) << '\n';
  std::printf("wrote %s (%zu blocks)\n", rep.c_str(), bd.blocks.size());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  meq::init_logging_from_env();

  CLI::App app{"meqforge — thermal master-equation generators, steady states, "
               "and heat-flow sweeps"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  int jobs = 1;
  const char* names[] = {"spectrum", "liouvillian", "steady", "sweep",
                         "blocks"};
  const char* descs[] = {
      "Bohr frequencies and cluster table (CSV)",
      "assemble and export the generator (Matrix Market + report)",
      "steady state and per-bath heat flows (JSON + Matrix Market)",
      "grid sweep over chain parameters (CSV)",
      "weak-symmetry block report (JSON)"};
  for (int i = 0; i < 5; ++i) {
    auto* sub = app.add_subcommand(names[i], descs[i]);
    sub->add_option("--config", config_path, "JSON configuration file")
        ->required();
    sub->add_option("--out", out_dir, "output directory (default: .)");
    sub->add_option("--jobs", jobs, "worker threads for sweeps (default: 1)");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const RunConfig cfg = parse_config(config_path);
    if (app.got_subcommand("spectrum")) return cmd_spectrum(cfg, out_dir);
    if (app.got_subcommand("liouvillian")) return cmd_liouvillian(cfg, out_dir);
    if (app.got_subcommand("steady")) return cmd_steady(cfg, out_dir);
    if (app.got_subcommand("sweep")) return cmd_sweep(cfg, out_dir, jobs);
    if (app.got_subcommand("blocks")) return cmd_blocks(cfg, out_dir);
  } catch (const meq::domain_error& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
