// mixlab: lazy-random-walk analysis on graphs with small bottlenecks.
//
// Subcommands: gen, mix, avgmix, conductance, spreader, contract, fvtl, run.
// Every invocation with a fixed seed emits byte-identical JSON apart from the
// "timing" block.

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mixlab/conductance.hpp"
#include "mixlab/contraction.hpp"
#include "mixlab/experiments.hpp"
#include "mixlab/fvtl.hpp"
#include "mixlab/generators.hpp"
#include "mixlab/graph.hpp"
#include "mixlab/spreader.hpp"
#include "mixlab/walk.hpp"

namespace {

using mixlab::json;

void write_json(const json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

mixlab::MultiGraph load_for_analysis(const std::string& path,
                                     bool restrict_l1) {
  mixlab::MultiGraph g = mixlab::read_multigraph_file(path);
  if (!restrict_l1) return g;
  auto [l1, order] = mixlab::largest_component(g);
  auto [sub, origin] = mixlab::induced_subgraph(g, l1);
  return sub;
}

json mixing_json(const mixlab::MixingReport& rep) {
  json j;
  j["t"] = rep.t;
  j["capped"] = rep.capped;
  j["eps"] = rep.eps;
  j["mode"] = rep.mode == mixlab::MixMode::exact ? "exact" : "sampled";
  j["average"] = rep.average;
  j["starts"] = rep.starts;
  j["t_cap"] = rep.t_cap;
  return j;
}

void write_curve_csv(const mixlab::MixingReport& rep, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,max_tv,mean_tv,sem\n";
  char buf[40];
  for (std::size_t t = 0; t < rep.max_tv.size(); ++t) {
    out << t;
    std::snprintf(buf, sizeof buf, ",%.17g", rep.max_tv[t]);
    out << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", rep.mean_tv[t]);
    out << buf;
    std::snprintf(buf, sizeof buf, ",%.17g", t < rep.sem.size() ? rep.sem[t] : 0.0);
    out << buf << '\n';
  }
}

struct MixArgs {
  std::string graph;
  double eps = 0.25;
  std::string mode = "exact";
  int samples = 256;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  long t_cap = -1;
  std::string curve_out;
  std::string json_out;
  bool restrict_l1 = false;
};

void add_mix_command(CLI::App& app, const std::string& name, bool average) {
  auto args = std::make_shared<MixArgs>();
  CLI::App* cmd = app.add_subcommand(
      name, average ? "Average-start mixing time" : "Worst-start mixing time");
  cmd->add_option("--graph", args->graph, "edge-list file")->required();
  cmd->add_option("--eps", args->eps, "target total-variation level");
  cmd->add_option("--mode", args->mode, "exact|sampled");
  cmd->add_option("--samples", args->samples, "starts in sampled mode");
  cmd->add_option("--seed", args->seed, "master seed");
  cmd->add_option("--stream", args->stream, "seed substream");
  cmd->add_option("--t-cap", args->t_cap, "step cap (default 50 (ln n)^2)");
  cmd->add_option("--curve-out", args->curve_out, "CSV curve t,max_tv,mean_tv,sem");
  cmd->add_option("--json-out", args->json_out, "JSON output path (default stdout)");
  cmd->add_flag("--restrict-to-largest-component", args->restrict_l1,
                "analyse L_1 instead of requiring a connected input");
  cmd->callback([args, average] {
    mixlab::MultiGraph g = load_for_analysis(args->graph, args->restrict_l1);
    if (!mixlab::is_connected(g))
      throw std::runtime_error(
          "graph is disconnected; pass --restrict-to-largest-component to analyse L_1");
    mixlab::MixOptions opts;
    opts.eps = args->eps;
    opts.mode = args->mode == "sampled" ? mixlab::MixMode::sampled
                                        : mixlab::MixMode::exact;
    opts.samples = args->samples;
    opts.seed = mixlab::Seed{args->seed, args->stream};
    opts.t_cap = args->t_cap;
    opts.keep_curves = true;
    const auto t0 = std::chrono::steady_clock::now();
    mixlab::MixingReport rep = average ? mixlab::avg_mixing_time(g, opts)
                                       : mixlab::mixing_time(g, opts);
    json j = mixing_json(rep);
    j["graph"] = args->graph;
    j["timing"] = {{"wall_ms", std::chrono::duration<double, std::milli>(
                                   std::chrono::steady_clock::now() - t0)
                                   .count()}};
    if (!args->curve_out.empty()) write_curve_csv(rep, args->curve_out);
    write_json(j, args->json_out);
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lazy random walks, conductance and bottleneck contraction"};
  app.require_subcommand(1);

  // ---- gen ----
  struct GenArgs {
    std::string model;
    long n = 0;
    double p = -1;
    double eps = 1.0;
    int k = 1;
    std::string base = "path";
    std::string host;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    std::string out;
  };
  auto gen_args = std::make_shared<GenArgs>();
  {
    CLI::App* cmd = app.add_subcommand("gen", "Generate a graph (edge-list output)");
    cmd->add_option("--model", gen_args->model,
                    "gnp|newman-watts|perturbed|percolated|host")
        ->required();
    cmd->add_option("--n", gen_args->n, "vertex count");
    cmd->add_option("--p", gen_args->p, "edge/retention probability");
    cmd->add_option("--eps", gen_args->eps, "perturbation eps (edge prob eps/n)");
    cmd->add_option("--k", gen_args->k, "newman-watts band half-width");
    cmd->add_option("--base", gen_args->base, "perturbed base: path|cycle|file:<p>");
    cmd->add_option("--host", gen_args->host,
                    "host spec: complete:n=..., circulant:n=...,offsets=1;2, "
                    "random-regular:n=...,d=..., file:<p>");
    cmd->add_option("--seed", gen_args->seed, "master seed");
    cmd->add_option("--stream", gen_args->stream, "seed substream");
    cmd->add_option("--out", gen_args->out, "output path (default stdout)");
    cmd->callback([gen_args] {
      const mixlab::Seed seed{gen_args->seed, gen_args->stream};
      mixlab::Graph g;
      if (gen_args->model == "gnp") {
        if (gen_args->p < 0) throw std::runtime_error("gnp needs --p");
        g = mixlab::gen_gnp(static_cast<mixlab::Vertex>(gen_args->n), gen_args->p,
                            seed);
      } else if (gen_args->model == "newman-watts") {
        g = mixlab::gen_newman_watts(static_cast<mixlab::Vertex>(gen_args->n),
                                     gen_args->k, gen_args->eps, seed);
      } else if (gen_args->model == "perturbed") {
        mixlab::Graph base;
        if (gen_args->base == "path")
          base = mixlab::make_path(static_cast<mixlab::Vertex>(gen_args->n));
        else if (gen_args->base == "cycle")
          base = mixlab::make_cycle(static_cast<mixlab::Vertex>(gen_args->n));
        else if (gen_args->base.rfind("file:", 0) == 0)
          base = mixlab::read_graph_file(gen_args->base.substr(5));
        else
          throw std::runtime_error("unknown base: " + gen_args->base);
        g = mixlab::perturb(base, gen_args->eps, seed);
      } else if (gen_args->model == "percolated") {
        if (gen_args->host.empty()) throw std::runtime_error("percolated needs --host");
        if (gen_args->p < 0) throw std::runtime_error("percolated needs --p");
        g = mixlab::percolate_host(mixlab::HostSpec::parse(gen_args->host),
                                   gen_args->p, seed);
      } else if (gen_args->model == "host") {
        if (gen_args->host.empty()) throw std::runtime_error("host model needs --host");
        g = mixlab::materialize_host(mixlab::HostSpec::parse(gen_args->host), seed);
      } else {
        throw std::runtime_error("unknown model: " + gen_args->model);
      }
      if (gen_args->out.empty() || gen_args->out == "-")
        mixlab::write_edge_list(g, std::cout);
      else
        mixlab::write_edge_list_file(g, gen_args->out);
    });
  }

  add_mix_command(app, "mix", /*average=*/false);
  add_mix_command(app, "avgmix", /*average=*/true);

  // ---- conductance ----
  struct CondArgs {
    std::string graph;
    std::string mode = "sampled";
    int budget = 64;
    double c0 = 1.0;
    int exact_limit = 30;
    std::uint64_t seed = 0;
    std::string json_out;
  };
  auto cond_args = std::make_shared<CondArgs>();
  {
    CLI::App* cmd =
        app.add_subcommand("conductance", "Φ profile and Fountoulakis–Reed bound");
    cmd->add_option("--graph", cond_args->graph, "edge-list file")->required();
    cmd->add_option("--mode", cond_args->mode, "exact|sampled");
    cmd->add_option("--budget", cond_args->budget, "sampled growths");
    cmd->add_option("--c0", cond_args->c0, "bound constant C0");
    cmd->add_option("--exact-limit", cond_args->exact_limit,
                    "exact-mode vertex-count guard");
    cmd->add_option("--seed", cond_args->seed, "sampling seed");
    cmd->add_option("--json-out", cond_args->json_out, "JSON output path");
    cmd->callback([cond_args] {
      mixlab::MultiGraph g = mixlab::read_multigraph_file(cond_args->graph);
      mixlab::ProfileOptions opts;
      opts.mode = cond_args->mode == "exact" ? mixlab::ProfileMode::exact
                                             : mixlab::ProfileMode::sampled;
      opts.budget = cond_args->budget;
      opts.exact_n_limit = cond_args->exact_limit;
      opts.seed = mixlab::Seed{cond_args->seed, 0};
      const mixlab::FrBound fr = mixlab::fr_bound(g, cond_args->c0, opts);
      json j;
      json levels = json::array();
      for (const auto& lvl : fr.profile.levels) {
        json l;
        l["j"] = lvl.j;
        l["p"] = lvl.p;
        l["phi"] = lvl.phi;
        l["witness"] = lvl.witness ? json(*lvl.witness) : json::array();
        l["exists"] = lvl.witness.has_value();
        l["examined"] = lvl.examined;
        levels.push_back(std::move(l));
      }
      j["levels"] = std::move(levels);
      j["fr_sum"] = fr.sum;
      j["bound"] = fr.bound;
      j["rigorous"] = fr.rigorous;
      write_json(j, cond_args->json_out);
    });
  }

  // ---- spreader ----
  struct SpreadArgs {
    std::string graph;
    double alpha = 0;
    double D = 0;
    double gamma = -1;
    long k_lo = -1;
    long k_hi = -1;
    long k_cap = 6;
    std::string json_out;
  };
  auto spread_args = std::make_shared<SpreadArgs>();
  {
    CLI::App* cmd = app.add_subcommand("spreader", "S1–S3 certificate and bad set U");
    cmd->add_option("--graph", spread_args->graph, "edge-list file")->required();
    cmd->add_option("--alpha", spread_args->alpha, "thinness parameter")->required();
    cmd->add_option("--D", spread_args->D, "load parameter")->required();
    cmd->add_option("--gamma", spread_args->gamma,
                    "override the derived alpha^2/4 (exploratory)");
    cmd->add_option("--k-lo", spread_args->k_lo, "window bottom override");
    cmd->add_option("--k-hi", spread_args->k_hi, "window top override");
    cmd->add_option("--k-cap", spread_args->k_cap, "enumeration ceiling");
    cmd->add_option("--json-out", spread_args->json_out, "JSON output path");
    cmd->callback([spread_args] {
      mixlab::MultiGraph g = mixlab::read_multigraph_file(spread_args->graph);
      mixlab::SpreaderParams params = mixlab::SpreaderParams::standard(
          g.order(), spread_args->alpha, spread_args->D);
      if (spread_args->gamma > 0) params = params.with_gamma(spread_args->gamma);
      if (spread_args->k_lo > 0 || spread_args->k_hi > 0)
        params = params.with_window(
            spread_args->k_lo > 0 ? spread_args->k_lo : params.k_lo,
            spread_args->k_hi > 0 ? spread_args->k_hi : params.k_hi);
      const mixlab::SpreaderScan scan =
          mixlab::spreader_scan(g, params, spread_args->k_cap);
      json j;
      auto cond = [](const mixlab::ConditionReport& rep) {
        json c;
        c["verdict"] = mixlab::to_string(rep.verdict);
        c["k_checked"] = rep.k_checked;
        json per_k = json::array();
        for (const auto& pk : rep.per_k)
          per_k.push_back({{"k", pk.k},
                           {"count", pk.count},
                           {"threshold", pk.threshold}});
        c["per_k"] = std::move(per_k);
        c["witnesses"] = rep.witnesses;
        return c;
      };
      j["s1"] = cond(scan.certificate.s1);
      j["s2"] = cond(scan.certificate.s2);
      j["s3"] = {{"verdict", mixlab::to_string(scan.certificate.s3.verdict)},
                 {"witness", scan.certificate.s3.witness
                                 ? json(*scan.certificate.s3.witness)
                                 : json::array()},
                 {"witness_density", scan.certificate.s3.witness_density},
                 {"padded", scan.certificate.s3.padded},
                 {"note", scan.certificate.s3.note}};
      j["U"] = scan.bad.u;
      j["stats"] = {{"U_size", scan.bad.u.size()},
                    {"deg_U", scan.bad.deg_u},
                    {"pi_U", scan.bad.pi_u},
                    {"size_threshold", scan.bad.size_threshold},
                    {"pi_threshold", scan.bad.pi_threshold},
                    {"blocks", scan.bad.blocks.size()},
                    {"partial", scan.bad.partial},
                    {"k_checked", scan.bad.k_checked}};
      write_json(j, spread_args->json_out);
    });
  }

  // ---- contract ----
  struct ContractArgs {
    std::string graph;
    std::string u_file;
    bool from_spreader = false;
    double alpha = 0;
    double D = 0;
    double gamma = -1;
    long k_cap = 6;
    std::string emit_gstar;
    std::string emit_ghat;
    std::string json_out;
  };
  auto con_args = std::make_shared<ContractArgs>();
  {
    CLI::App* cmd = app.add_subcommand("contract", "Contract G[U] components to G*, Ĝ");
    cmd->add_option("--graph", con_args->graph, "edge-list file")->required();
    cmd->add_option("--u-file", con_args->u_file, "file of vertex ids forming U");
    cmd->add_flag("--from-spreader", con_args->from_spreader,
                  "take U = bad_set_union(alpha, D)");
    cmd->add_option("--alpha", con_args->alpha, "spreader alpha (with --from-spreader)");
    cmd->add_option("--D", con_args->D, "spreader D (with --from-spreader)");
    cmd->add_option("--gamma", con_args->gamma, "gamma override (exploratory)");
    cmd->add_option("--k-cap", con_args->k_cap, "enumeration ceiling");
    cmd->add_option("--emit-gstar", con_args->emit_gstar, "write G* edge list here");
    cmd->add_option("--emit-ghat", con_args->emit_ghat, "write Ĝ edge list here");
    cmd->add_option("--json-out", con_args->json_out, "JSON output path");
    cmd->callback([con_args] {
      mixlab::MultiGraph g = mixlab::read_multigraph_file(con_args->graph);
      mixlab::VertexSet u;
      bool partial = false;
      if (con_args->from_spreader) {
        mixlab::SpreaderParams params = mixlab::SpreaderParams::standard(
            g.order(), con_args->alpha, con_args->D);
        if (con_args->gamma > 0) params = params.with_gamma(con_args->gamma);
        mixlab::BadSetReport bad =
            mixlab::bad_set_union(g, params, con_args->k_cap);
        u = bad.u;
        partial = bad.partial;
      } else if (!con_args->u_file.empty()) {
        std::ifstream in(con_args->u_file);
        if (!in) throw std::runtime_error("cannot open " + con_args->u_file);
        long v;
        while (in >> v) u.push_back(static_cast<mixlab::Vertex>(v));
        std::sort(u.begin(), u.end());
        u.erase(std::unique(u.begin(), u.end()), u.end());
      } else {
        throw std::runtime_error("contract needs --u-file or --from-spreader");
      }
      const mixlab::ContractedPair pair = mixlab::contract_components(g, u);
      const mixlab::HatGraph hat = mixlab::contract_to_vertex(pair);
      if (!con_args->emit_gstar.empty())
        mixlab::write_edge_list_file(pair.gstar, con_args->emit_gstar);
      if (!con_args->emit_ghat.empty())
        mixlab::write_edge_list_file(hat.ghat, con_args->emit_ghat);
      json j;
      j["u"] = u;
      j["u_partial"] = partial;
      j["blocks"] = pair.map.blocks.size();
      j["gstar_n"] = pair.gstar.order();
      j["gstar_m"] = pair.gstar.size();
      j["ghat_m"] = hat.ghat.size();
      j["ustar"] = pair.map.ustar;
      if (mixlab::is_connected(g) && mixlab::is_connected(pair.gstar))
        j["stationary_tv"] = mixlab::stationary_tv(g, pair);
      write_json(j, con_args->json_out);
    });
  }

  // ---- fvtl ----
  struct FvtlArgs {
    std::string graph;
    long u = -1;
    int sample = 0;
    long T = -1;
    double tol = 1e-10;
    std::uint64_t seed = 0;
    bool hp1 = false;
    std::string json_out;
  };
  auto fvtl_args = std::make_shared<FvtlArgs>();
  {
    CLI::App* cmd = app.add_subcommand("fvtl", "First-visit-time diagnostics");
    cmd->add_option("--graph", fvtl_args->graph, "edge-list file")->required();
    cmd->add_option("--u", fvtl_args->u, "target vertex");
    cmd->add_option("--sample", fvtl_args->sample, "sample this many non-cut vertices");
    cmd->add_option("--T", fvtl_args->T, "return horizon (default (ln n)^6)");
    cmd->add_option("--tol", fvtl_args->tol, "lambda_u tolerance");
    cmd->add_option("--seed", fvtl_args->seed, "sampling seed");
    cmd->add_flag("--hp1", fvtl_args->hp1, "evaluate the HP1 double loop");
    cmd->add_option("--json-out", fvtl_args->json_out, "JSON output path");
    cmd->callback([fvtl_args] {
      mixlab::MultiGraph g = mixlab::read_multigraph_file(fvtl_args->graph);
      const double ln = std::log(std::max<double>(2.0, g.order()));
      mixlab::FvtlOptions opts;
      opts.T = fvtl_args->T > 0 ? fvtl_args->T
                                : static_cast<long>(std::pow(ln, 6.0));
      opts.tol = fvtl_args->tol;
      opts.hp1 = fvtl_args->hp1;
      opts.seed = mixlab::Seed{fvtl_args->seed, 1};
      std::vector<mixlab::Vertex> targets;
      if (fvtl_args->u >= 0) {
        targets.push_back(static_cast<mixlab::Vertex>(fvtl_args->u));
      } else if (fvtl_args->sample > 0) {
        mixlab::Rng rng(mixlab::Seed{fvtl_args->seed, 0});
        std::set<mixlab::Vertex> seen;
        int attempts = 100 * fvtl_args->sample;
        while (static_cast<int>(targets.size()) < fvtl_args->sample &&
               attempts-- > 0) {
          const auto u = static_cast<mixlab::Vertex>(
              rng.below(static_cast<std::uint64_t>(g.order())));
          if (seen.count(u)) continue;
          seen.insert(u);
          mixlab::VertexSet rest;
          for (mixlab::Vertex v = 0; v < g.order(); ++v)
            if (v != u) rest.push_back(v);
          if (!mixlab::is_connected_set(g, rest)) continue;
          targets.push_back(u);
        }
      } else {
        throw std::runtime_error("fvtl needs --u or --sample");
      }
      json us = json::array();
      for (mixlab::Vertex u : targets) {
        const mixlab::FvtlReport rep = mixlab::fvtl_report(g, u, opts);
        json one;
        one["u"] = rep.u;
        one["lambda_u"] = rep.lambda;
        one["R_T"] = rep.r_t;
        one["stat_hitting"] = rep.stat_hitting;
        one["stat_prob"] = rep.stat_prob;
        one["reducible"] = rep.reducible;
        json hp;
        hp["hp2_T_pi_max"] = rep.hp.hp2_t_pi_max;
        hp["hp2_prime_T_pi_u"] = rep.hp.hp2_prime_t_pi_u;
        hp["hp3_pi_min_n2"] = rep.hp.hp3_pi_min_n2;
        hp["hp1_threshold"] = rep.hp.hp1_threshold;
        if (rep.hp.hp1_max_dev) {
          hp["hp1_max_dev"] = *rep.hp.hp1_max_dev;
          hp["hp1_exact"] = rep.hp.hp1_exact;
        }
        one["hp"] = std::move(hp);
        us.push_back(std::move(one));
      }
      json j;
      j["T"] = opts.T;
      j["us"] = std::move(us);
      write_json(j, fvtl_args->json_out);
    });
  }

  // ---- run ----
  struct RunArgs {
    std::string config;
    std::string out_dir = ".";
    bool allow_skip = false;
    std::vector<std::string> emit;
  };
  auto run_args = std::make_shared<RunArgs>();
  {
    CLI::App* cmd = app.add_subcommand("run", "Run an experiment config");
    cmd->add_option("--config", run_args->config, "config file (key=value or JSON)")
        ->required();
    cmd->add_option("--out-dir", run_args->out_dir, "output directory");
    cmd->add_flag("--allow-skip", run_args->allow_skip,
                  "skipped analyses do not fail the run");
    cmd->add_option("--emit", run_args->emit,
                    "plot data kinds: mixing-curve, size-sweep");
    cmd->callback([run_args] {
      std::ifstream in(run_args->config);
      if (!in) throw std::runtime_error("cannot open " + run_args->config);
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      const mixlab::ExperimentConfig config = mixlab::parse_config(text);
      const json record = mixlab::run_experiment(config);
      std::filesystem::create_directories(run_args->out_dir);
      const std::string stem = run_args->out_dir + "/record";
      write_json(record, stem + ".json");
      for (const std::string& kind : run_args->emit)
        mixlab::emit_plot_data(record, kind, stem);
      // Exit nonzero when an analysis failed or was skipped.
      bool all_ok = true;
      for (const auto& run : record["runs"]) {
        if (run.contains("failed")) all_ok = false;
        if (!run.contains("analyses")) continue;
        for (const auto& [name, result] : run["analyses"].items()) {
          (void)name;
          if (result.is_object() && result.contains("skipped")) all_ok = false;
        }
      }
      if (!all_ok && !run_args->allow_skip)
        throw std::runtime_error("some analyses failed or were skipped");
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
