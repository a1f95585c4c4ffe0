#include "mixlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <stdexcept>

#include "mixlab/conductance.hpp"
#include "mixlab/contraction.hpp"
#include "mixlab/fvtl.hpp"
#include "mixlab/generators.hpp"
#include "mixlab/parallel.hpp"
#include "mixlab/walk.hpp"

namespace mixlab {

std::string library_version() { return "0.1.0"; }

namespace {

const std::set<std::string> kAnalyses = {
    "mix",      "avgmix",   "spreader", "contract-pipeline",
    "fvtl",     "conductance", "ball-lower"};

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char delim) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    auto next = s.find(delim, pos);
    if (next == std::string::npos) next = s.size();
    const std::string item = trim(s.substr(pos, next - pos));
    if (!item.empty()) out.push_back(item);
    pos = next + 1;
  }
  return out;
}

void set_field(ExperimentConfig& c, const std::string& key, const json& v) {
  auto as_string = [&]() -> std::string {
    if (v.is_string()) return v.get<std::string>();
    throw std::invalid_argument("config key '" + key + "' needs a string");
  };
  auto as_double = [&]() -> double {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) return std::stod(v.get<std::string>());
    throw std::invalid_argument("config key '" + key + "' needs a number");
  };
  auto as_long = [&]() -> long { return static_cast<long>(as_double()); };
  auto as_bool = [&]() -> bool {
    if (v.is_boolean()) return v.get<bool>();
    const std::string s = as_string();
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("config key '" + key + "' needs a bool");
  };
  auto as_string_list = [&]() -> std::vector<std::string> {
    if (v.is_array()) {
      std::vector<std::string> out;
      for (const auto& item : v) out.push_back(item.get<std::string>());
      return out;
    }
    return split(as_string(), ',');
  };

  if (key == "model") {
    c.model = as_string();
  } else if (key == "n") {
    c.n.clear();
    if (v.is_array()) {
      for (const auto& item : v) c.n.push_back(item.get<long>());
    } else if (v.is_number()) {
      c.n.push_back(v.get<long>());
    } else {
      for (const std::string& item : split(as_string(), ','))
        c.n.push_back(std::stol(item));
    }
  } else if (key == "seeds") {
    c.seeds.clear();
    if (v.is_array()) {
      for (const auto& item : v) c.seeds.push_back(item.get<std::uint64_t>());
    } else if (v.is_number()) {
      c.seeds.push_back(v.get<std::uint64_t>());
    } else {
      for (const std::string& item : split(as_string(), ','))
        c.seeds.push_back(std::stoull(item));
    }
  } else if (key == "analyses") {
    c.analyses = as_string_list();
  } else if (key == "eps") {
    c.eps = as_double();
  } else if (key == "k") {
    c.k = static_cast<int>(as_long());
  } else if (key == "base") {
    c.base = as_string();
  } else if (key == "host") {
    c.host = as_string();
  } else if (key == "restrict_to_largest") {
    c.restrict_to_largest = as_bool();
  } else if (key == "mix_eps") {
    c.mix_eps = as_double();
  } else if (key == "mix_mode") {
    c.mix_mode = as_string();
  } else if (key == "avgmix_mode") {
    c.avgmix_mode = as_string();
  } else if (key == "samples") {
    c.samples = static_cast<int>(as_long());
  } else if (key == "t_cap") {
    c.t_cap = as_long();
  } else if (key == "alpha") {
    c.alpha = as_double();
  } else if (key == "D") {
    c.D = as_double();
  } else if (key == "gamma") {
    c.gamma = as_double();
  } else if (key == "k_cap") {
    c.k_cap = as_long();
  } else if (key == "c0") {
    c.c0 = as_double();
  } else if (key == "budget") {
    c.budget = static_cast<int>(as_long());
  } else if (key == "conductance_mode") {
    c.conductance_mode = as_string();
  } else if (key == "fvtl_T") {
    c.fvtl_T = as_long();
  } else if (key == "fvtl_samples") {
    c.fvtl_samples = static_cast<int>(as_long());
  } else if (key == "fvtl_tol") {
    c.fvtl_tol = as_double();
  } else if (key == "dbar") {
    c.dbar = as_double();
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

void validate_config(const ExperimentConfig& c) {
  if (c.model != "perturbed" && c.model != "newman-watts" &&
      c.model != "percolated" && c.model != "gnp-giant")
    throw std::invalid_argument("unknown model: " + c.model);
  if (c.n.empty()) throw std::invalid_argument("config needs at least one n");
  if (c.seeds.empty()) throw std::invalid_argument("config needs at least one seed");
  for (const std::string& a : c.analyses)
    if (!kAnalyses.count(a))
      throw std::invalid_argument("unknown analysis: " + a);
  if (c.model == "percolated" && c.host.empty())
    throw std::invalid_argument("percolated model needs a host spec");
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig c;
  const std::string body = trim(text);
  if (!body.empty() && body.front() == '{') {
    const json j = json::parse(body);
    for (const auto& [key, value] : j.items()) set_field(c, key, value);
  } else {
    std::size_t pos = 0;
    while (pos <= body.size()) {
      auto nl = body.find('\n', pos);
      if (nl == std::string::npos) nl = body.size();
      std::string line = body.substr(pos, nl - pos);
      pos = nl + 1;
      auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      line = trim(line);
      if (line.empty()) continue;
      auto eq = line.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line needs key=value: " + line);
      set_field(c, trim(line.substr(0, eq)), json(trim(line.substr(eq + 1))));
    }
  }
  validate_config(c);
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  j["model"] = c.model;
  j["n"] = c.n;
  j["eps"] = c.eps;
  j["k"] = c.k;
  j["base"] = c.base;
  j["host"] = c.host;
  j["analyses"] = c.analyses;
  j["seeds"] = c.seeds;
  j["restrict_to_largest"] = c.restrict_to_largest;
  j["mix_eps"] = c.mix_eps;
  j["mix_mode"] = c.mix_mode;
  j["avgmix_mode"] = c.avgmix_mode;
  j["samples"] = c.samples;
  j["t_cap"] = c.t_cap;
  j["alpha"] = c.alpha;
  j["D"] = c.D;
  j["gamma"] = c.gamma;
  j["k_cap"] = c.k_cap;
  j["c0"] = c.c0;
  j["budget"] = c.budget;
  j["conductance_mode"] = c.conductance_mode;
  j["fvtl_T"] = c.fvtl_T;
  j["fvtl_samples"] = c.fvtl_samples;
  j["fvtl_tol"] = c.fvtl_tol;
  j["dbar"] = c.dbar;
  return j;
}

std::string config_hash(const ExperimentConfig& c) {
  const std::string dump = config_to_json(c).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Generated {
  MultiGraph graph;
  json info;
  Vertex base_degeneracy = 0;
};

Graph make_base(const std::string& base, Vertex n) {
  if (base == "path") return make_path(n);
  if (base == "cycle") return make_cycle(n);
  if (base.rfind("file:", 0) == 0) return read_graph_file(base.substr(5));
  throw std::invalid_argument("unknown perturbation base: " + base);
}

Generated generate(const ExperimentConfig& c, long n_req, std::uint64_t seed) {
  Generated out;
  const Seed s{seed, 0};
  const Vertex n = static_cast<Vertex>(n_req);
  Graph g;
  bool restrict = c.restrict_to_largest;
  if (c.model == "perturbed") {
    Graph base = make_base(c.base, n);
    out.base_degeneracy = degeneracy(base).value;
    g = perturb(base, c.eps, s);
  } else if (c.model == "newman-watts") {
    std::vector<Vertex> offsets;
    for (Vertex o = 1; o <= c.k; ++o) offsets.push_back(o);
    out.base_degeneracy = degeneracy(make_circulant(n, offsets)).value;
    g = gen_newman_watts(n, c.k, c.eps, s);
  } else if (c.model == "percolated") {
    HostSpec spec = HostSpec::parse(c.host);
    spec.n = n;  // the size sweep overrides the host's n
    Vertex d = 0;
    switch (spec.kind) {
      case HostSpec::Kind::complete:
        d = n - 1;
        break;
      case HostSpec::Kind::circulant:
        d = 2 * static_cast<Vertex>(spec.offsets.size());
        break;
      case HostSpec::Kind::random_regular:
        d = spec.d;
        break;
      case HostSpec::Kind::file: {
        Graph host = read_graph_file(spec.path);
        d = host.order() > 0 ? host.degree(0) : 0;
        for (Vertex v = 0; v < host.order(); ++v)
          if (host.degree(v) != d)
            throw std::invalid_argument("file host must be regular");
        break;
      }
    }
    if (d <= 0) throw std::invalid_argument("host degree must be positive");
    g = percolate_host(spec, (1.0 + c.eps) / static_cast<double>(d), s);
    restrict = true;  // percolation is analysed on L_1
  } else {  // gnp-giant
    g = gen_gnp(n, (1.0 + c.eps) / static_cast<double>(n), s);
    restrict = true;
  }

  out.info["n_generated"] = g.order();
  out.info["m_generated"] = g.size();
  if (restrict) {
    auto [l1, order] = largest_component(g);
    auto [sub, origin] = induced_subgraph(g, l1);
    out.info["l1_frac"] =
        static_cast<double>(order) / static_cast<double>(g.order());
    out.graph = std::move(sub);
  } else {
    out.graph = g.multi();
  }
  out.info["n"] = out.graph.order();
  out.info["m"] = out.graph.size();
  return out;
}

json mixing_to_json(const MixingReport& rep) {
  json j;
  j["t"] = rep.t;
  j["capped"] = rep.capped;
  j["eps"] = rep.eps;
  j["mode"] = rep.mode == MixMode::exact ? "exact" : "sampled";
  j["average"] = rep.average;
  j["starts"] = rep.starts;
  j["t_cap"] = rep.t_cap;
  if (rep.has_curves) {
    json curve;
    curve["max_tv"] = rep.max_tv;
    curve["mean_tv"] = rep.mean_tv;
    curve["sem"] = rep.sem;
    j["curve"] = std::move(curve);
  }
  return j;
}

json condition_to_json(const ConditionReport& rep) {
  json j;
  j["verdict"] = to_string(rep.verdict);
  j["k_checked"] = rep.k_checked;
  json per_k = json::array();
  for (const PerKCount& pk : rep.per_k) {
    per_k.push_back(
        {{"k", pk.k}, {"count", pk.count}, {"threshold", pk.threshold}});
  }
  j["per_k"] = std::move(per_k);
  j["witnesses"] = rep.witnesses;
  return j;
}

json spreader_to_json(const SpreaderScan& scan, const SpreaderParams& params,
                      long k_cap) {
  json j;
  j["params"] = {{"alpha", params.alpha}, {"D", params.D},
                 {"beta", params.beta},   {"gamma", params.gamma},
                 {"k_lo", params.k_lo},   {"k_hi", params.k_hi},
                 {"k_cap", k_cap}};
  j["s1"] = condition_to_json(scan.certificate.s1);
  j["s2"] = condition_to_json(scan.certificate.s2);
  json s3;
  s3["verdict"] = to_string(scan.certificate.s3.verdict);
  s3["witness"] = scan.certificate.s3.witness ? json(*scan.certificate.s3.witness)
                                              : json::array();
  s3["witness_density"] = scan.certificate.s3.witness_density;
  s3["padded"] = scan.certificate.s3.padded;
  s3["note"] = scan.certificate.s3.note;
  j["s3"] = std::move(s3);
  j["U"] = scan.bad.u;
  j["stats"] = {{"U_size", scan.bad.u.size()},
                {"deg_U", scan.bad.deg_u},
                {"pi_U", scan.bad.pi_u},
                {"size_threshold", scan.bad.size_threshold},
                {"pi_threshold", scan.bad.pi_threshold},
                {"blocks", scan.bad.blocks.size()},
                {"partial", scan.bad.partial},
                {"k_checked", scan.bad.k_checked}};
  return j;
}

json profile_to_json(const ConductanceProfile& profile) {
  json levels = json::array();
  for (const ProfileLevel& lvl : profile.levels) {
    json l;
    l["j"] = lvl.j;
    l["p"] = lvl.p;
    l["phi"] = lvl.phi;
    l["witness"] = lvl.witness ? json(*lvl.witness) : json::array();
    l["exists"] = lvl.witness.has_value();
    l["examined"] = lvl.examined;
    levels.push_back(std::move(l));
  }
  return levels;
}

json fr_to_json(const FrBound& fr, double c0) {
  json j;
  j["levels"] = profile_to_json(fr.profile);
  j["fr_sum"] = fr.sum;
  j["bound"] = fr.bound;
  j["rigorous"] = fr.rigorous;
  j["c0"] = c0;
  j["mode"] = fr.profile.mode == ProfileMode::exact ? "exact" : "sampled";
  return j;
}

double median_of(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  if (values.size() % 2 == 1) return values[mid];
  return 0.5 * (values[mid - 1] + values[mid]);
}

json fvtl_analysis(const MultiGraph& g, const ExperimentConfig& c,
                   std::uint64_t seed) {
  const Vertex n = g.order();
  const double ln = std::log(std::max<double>(2.0, n));
  long T = c.fvtl_T;
  if (T <= 0) T = static_cast<long>(std::pow(ln, 6.0));
  FvtlOptions opts;
  opts.T = T;
  opts.tol = c.fvtl_tol;

  // Sampled non-cut vertices (reducible flag false).
  Rng rng(Seed{seed, 5});
  std::vector<Vertex> chosen;
  std::set<Vertex> seen;
  VertexSet rest;
  int attempts = 100 * std::max(1, c.fvtl_samples);
  while (static_cast<int>(chosen.size()) < c.fvtl_samples && attempts-- > 0) {
    const Vertex u =
        static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
    if (seen.count(u)) continue;
    seen.insert(u);
    rest.clear();
    for (Vertex v = 0; v < n; ++v)
      if (v != u) rest.push_back(v);
    if (!is_connected_set(g, rest)) continue;  // cut vertex: P_u reducible
    chosen.push_back(u);
  }

  json j;
  j["T"] = T;
  j["tol"] = c.fvtl_tol;
  json us = json::array();
  std::vector<double> hit_stats, prob_stats;
  for (Vertex u : chosen) {
    const FvtlReport rep = fvtl_report(g, u, opts);
    json one;
    one["u"] = rep.u;
    one["lambda_u"] = rep.lambda;
    one["reducible"] = rep.reducible;
    one["R_T"] = rep.r_t;
    one["stat_hitting"] = rep.stat_hitting;
    one["stat_prob"] = rep.stat_prob;
    one["grid_top"] = rep.grid_top;
    us.push_back(std::move(one));
    hit_stats.push_back(rep.stat_hitting);
    prob_stats.push_back(rep.stat_prob);
  }
  j["us"] = std::move(us);
  j["sampled"] = chosen.size();
  j["median_stat_hitting"] = median_of(hit_stats);
  j["median_stat_prob"] = median_of(prob_stats);
  return j;
}

MixMode mode_from(const std::string& s) {
  if (s == "exact") return MixMode::exact;
  if (s == "sampled") return MixMode::sampled;
  throw std::invalid_argument("mode must be exact or sampled: " + s);
}

json run_analyses(const ExperimentConfig& c, const Generated& gen,
                  std::uint64_t seed) {
  const MultiGraph& g = gen.graph;
  json out;
  for (const std::string& name : c.analyses) {
    try {
      if (name == "mix" || name == "avgmix") {
        MixOptions opts;
        opts.eps = c.mix_eps;
        opts.mode = mode_from(name == "mix" ? c.mix_mode : c.avgmix_mode);
        opts.samples = c.samples;
        opts.seed = Seed{seed, name == "mix" ? 1u : 2u};
        opts.t_cap = c.t_cap;
        out[name] = mixing_to_json(name == "mix" ? mixing_time(g, opts)
                                                 : avg_mixing_time(g, opts));
      } else if (name == "ball-lower") {
        const double measured =
            2.0 * static_cast<double>(g.size()) /
            std::max<double>(1.0, static_cast<double>(g.order()));
        const double dbar = c.dbar > 0 ? c.dbar : std::max(1.0, measured);
        json j;
        j["k"] = ball_growth_lower_bound(g, dbar);
        j["dbar"] = dbar;
        out[name] = std::move(j);
      } else if (name == "spreader") {
        SpreaderParams params = default_spreader_params(c, g, gen.base_degeneracy);
        out[name] = spreader_to_json(spreader_scan(g, params, c.k_cap), params,
                                     c.k_cap);
      } else if (name == "contract-pipeline") {
        SpreaderParams params = default_spreader_params(c, g, gen.base_degeneracy);
        out[name] = contract_pipeline(g, params, c.k_cap, c.budget, c.samples,
                                      Seed{seed, 3});
      } else if (name == "conductance") {
        ProfileOptions opts;
        opts.mode = c.conductance_mode == "exact" ? ProfileMode::exact
                                                  : ProfileMode::sampled;
        opts.budget = c.budget;
        opts.seed = Seed{seed, 4};
        out[name] = fr_to_json(fr_bound(g, c.c0, opts), c.c0);
      } else if (name == "fvtl") {
        out[name] = fvtl_analysis(g, c, seed);
      }
    } catch (const std::exception& e) {
      out[name] = {{"skipped", true}, {"reason", e.what()}};
    }
  }
  return out;
}

void flatten_numeric(const json& j, const std::string& prefix,
                     std::map<std::string, double>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten_numeric(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_number()) {
    out[prefix] = j.get<double>();
  }
}

}  // namespace

SpreaderParams default_spreader_params(const ExperimentConfig& c,
                                       const MultiGraph& g,
                                       Vertex base_degeneracy) {
  double alpha = c.alpha;
  double D = c.D;
  if (D <= 0) {
    if (c.model == "perturbed" || c.model == "newman-watts")
      D = 2.0 * (static_cast<double>(base_degeneracy) + 1.0 + c.eps);
    else
      D = 12.0;
  }
  if (alpha <= 0) {
    if (c.model == "perturbed" || c.model == "newman-watts") {
      alpha = std::min(0.01, c.eps / (2.0 * D * D));
    } else if (c.eps < 1.0 && c.eps > 0.0) {
      alpha = std::min(0.01, c.eps * c.eps / (D * D * std::log(1.0 / c.eps)));
    } else {
      alpha = std::min(0.01, 0.5 / (D * D));
    }
  }
  SpreaderParams params = SpreaderParams::standard(g.order(), alpha, D);
  if (c.gamma > 0) params = params.with_gamma(c.gamma);
  return params;
}

json contract_pipeline(const MultiGraph& g, const SpreaderParams& params,
                       long k_cap, int budget, int samples, Seed seed) {
  if (!is_connected(g))
    throw std::domain_error("contract pipeline needs a connected graph");
  const double n = static_cast<double>(g.order());
  const double ln = std::log(std::max(2.0, n));

  json j;
  j["params"] = {{"alpha", params.alpha}, {"D", params.D},
                 {"gamma", params.gamma}, {"k_lo", params.k_lo},
                 {"k_hi", params.k_hi},   {"k_cap", k_cap}};

  const BadSetReport bad = bad_set_union(g, params, k_cap);
  j["u_size"] = bad.u.size();
  j["deg_u"] = bad.deg_u;
  j["pi_u"] = bad.pi_u;
  j["u_partial"] = bad.partial;
  j["blocks"] = bad.blocks.size();

  const ContractedPair pair = contract_components(g, bad.u);
  j["gstar_n"] = pair.gstar.order();
  j["gstar_m"] = pair.gstar.size();

  const HatGraph hat = contract_to_vertex(pair);
  j["ghat_m"] = hat.ghat.size();
  j["edge_counts_match"] = hat.ghat.size() == pair.gstar.size();
  j["ustar_independent"] = true;  // contract_to_vertex verified it

  const double tv = stationary_tv(g, pair);
  j["stationary_tv"] = tv;
  j["tv_threshold"] = std::exp(-std::pow(ln, 1.0 / 12.0));

  ProfileOptions popts;
  popts.mode = ProfileMode::sampled;
  popts.budget = budget;
  popts.seed = seed;
  const ConductanceProfile profile = conductance_profile(pair.gstar, popts);
  j["gstar_profile"] = profile_to_json(profile);
  double phi_min = 1.0;
  for (const ProfileLevel& lvl : profile.levels)
    if (lvl.witness) phi_min = std::min(phi_min, lvl.phi);
  j["phi_min_sampled"] = phi_min;
  j["phi_floor_eighth"] = params.alpha * params.alpha / 8.0;
  j["phi_floor_sixteenth"] = params.alpha * params.alpha / 16.0;

  MixOptions mopts;
  mopts.mode = MixMode::sampled;
  mopts.samples = samples;
  mopts.seed = seed.next_stream();
  mopts.keep_curves = false;
  const MixingReport mix = mixing_time(pair.gstar, mopts);
  j["tmix_gstar"] = mixing_to_json(mix);
  j["tmix_gstar_per_log_n"] =
      mix.t >= 0 ? static_cast<double>(mix.t) / ln : -1.0;
  return j;
}

json run_experiment(const ExperimentConfig& config) {
  validate_config(config);
  const auto t0 = std::chrono::steady_clock::now();

  struct RunSlot {
    long n;
    std::uint64_t seed;
    json result;
    double ms = 0;
  };
  std::vector<RunSlot> slots;
  for (long n : config.n)
    for (std::uint64_t seed : config.seeds) slots.push_back({n, seed, {}, 0});

  parallel_blocks(slots.size(), 1, [&](std::size_t b, std::size_t lo,
                                       std::size_t hi) {
    (void)b;
    for (std::size_t i = lo; i < hi; ++i) {
      RunSlot& slot = slots[i];
      const auto start = std::chrono::steady_clock::now();
      json run;
      run["n_requested"] = slot.n;
      run["seed"] = slot.seed;
      try {
        Generated gen = generate(config, slot.n, slot.seed);
        run["graph"] = gen.info;
        run["analyses"] = run_analyses(config, gen, slot.seed);
      } catch (const std::exception& e) {
        run["failed"] = true;
        run["reason"] = e.what();
      }
      slot.result = std::move(run);
      slot.ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - start)
                    .count();
    }
  });

  json record;
  record["version"] = library_version();
  record["config"] = config_to_json(config);
  record["config_hash"] = config_hash(config);
  json runs = json::array();
  for (const RunSlot& slot : slots) runs.push_back(slot.result);
  record["runs"] = std::move(runs);

  // Per-size aggregates over seeds: median/min/max of every scalar metric.
  json aggregate;
  for (long n : config.n) {
    std::map<std::string, std::vector<double>> columns;
    for (const RunSlot& slot : slots) {
      if (slot.n != n || !slot.result.contains("analyses")) continue;
      std::map<std::string, double> flat;
      flatten_numeric(slot.result["analyses"], "", flat);
      for (const auto& [path, value] : flat) columns[path].push_back(value);
    }
    json per_n;
    for (auto& [path, values] : columns) {
      per_n[path] = {{"median", median_of(values)},
                     {"min", *std::min_element(values.begin(), values.end())},
                     {"max", *std::max_element(values.begin(), values.end())}};
    }
    aggregate[std::to_string(n)] = std::move(per_n);
  }
  record["aggregate"] = std::move(aggregate);

  json timing;
  json per_run = json::array();
  for (const RunSlot& slot : slots) per_run.push_back(slot.ms);
  timing["per_run_ms"] = std::move(per_run);
  timing["wall_ms"] = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
  record["timing"] = std::move(timing);
  return record;
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::vector<std::string> emit_plot_data(const json& record,
                                        const std::string& kind,
                                        const std::string& out_stem) {
  std::vector<std::string> written;
  if (!record.contains("runs"))
    throw std::invalid_argument("record has no runs");

  auto available = [&]() {
    std::string keys;
    for (const auto& run : record["runs"]) {
      if (!run.contains("analyses")) continue;
      for (const auto& [key, value] : run["analyses"].items()) {
        (void)value;
        if (keys.find(key) == std::string::npos) keys += key + " ";
      }
    }
    return keys.empty() ? std::string("<none>") : keys;
  };

  if (kind == "mixing-curve") {
    for (const auto& run : record["runs"]) {
      if (!run.contains("analyses")) continue;
      for (const std::string name : {"mix", "avgmix"}) {
        if (!run["analyses"].contains(name) ||
            !run["analyses"][name].contains("curve"))
          continue;
        const json& curve = run["analyses"][name]["curve"];
        const std::string path = out_stem + "_" + name + "_n" +
                                 std::to_string(run["n_requested"].get<long>()) +
                                 "_seed" +
                                 std::to_string(run["seed"].get<std::uint64_t>()) +
                                 ".csv";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path);
        out << "t,max_tv,mean_tv,sem\n";
        const auto& max_tv = curve["max_tv"];
        const auto& mean_tv = curve["mean_tv"];
        const auto& sem = curve["sem"];
        for (std::size_t t = 0; t < max_tv.size(); ++t) {
          out << t << ',' << format_double(max_tv[t].get<double>()) << ','
              << format_double(mean_tv[t].get<double>()) << ','
              << format_double(sem[t].get<double>()) << '\n';
        }
        written.push_back(path);
      }
    }
    if (written.empty())
      throw std::invalid_argument(
          "record holds no mixing curves; available analyses: " + available());
    return written;
  }

  if (kind == "size-sweep") {
    struct Row {
      long n;
      std::uint64_t seed;
      double mix_t = -1, avgmix_t = -1;
    };
    std::vector<Row> rows;
    for (const auto& run : record["runs"]) {
      if (!run.contains("analyses")) continue;
      Row row{run["n_requested"].get<long>(), run["seed"].get<std::uint64_t>(),
              -1, -1};
      const json& a = run["analyses"];
      if (a.contains("mix") && a["mix"].contains("t"))
        row.mix_t = a["mix"]["t"].get<double>();
      if (a.contains("avgmix") && a["avgmix"].contains("t"))
        row.avgmix_t = a["avgmix"]["t"].get<double>();
      if (row.mix_t >= 0 || row.avgmix_t >= 0) rows.push_back(row);
    }
    if (rows.empty())
      throw std::invalid_argument(
          "record holds no mixing numbers; available analyses: " + available());
    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
      return a.n < b.n || (a.n == b.n && a.seed < b.seed);
    });
    const std::string path = out_stem + "_sweep.csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "n,seed,mix_t,avgmix_t\n";
    for (const Row& row : rows)
      out << row.n << ',' << row.seed << ',' << format_double(row.mix_t) << ','
          << format_double(row.avgmix_t) << '\n';
    written.push_back(path);
    return written;
  }

  throw std::invalid_argument("unknown plot kind: " + kind +
                              " (mixing-curve, size-sweep)");
}

}  // namespace mixlab
