#pragma once

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "mixlab/graph.hpp"
#include "mixlab/rng.hpp"
#include "mixlab/spreader.hpp"

namespace mixlab {

using json = nlohmann::json;

std::string library_version();

// One experiment: a model, one or more sizes, seeds, and the analyses to run
// on each generated graph. Parsed from flat key=value text or JSON (same
// keys); unknown keys are rejected.
struct ExperimentConfig {
  std::string model;            // perturbed | newman-watts | percolated | gnp-giant
  std::vector<long> n;          // size sweep
  double eps = 1.0;
  int k = 1;                    // newman-watts band half-width
  std::string base = "path";    // perturbed base: path | cycle | file:<path>
  std::string host;             // percolated host spec
  std::vector<std::string> analyses;
  std::vector<std::uint64_t> seeds;
  bool restrict_to_largest = false;  // forced on for percolated / gnp-giant

  double mix_eps = 0.25;
  std::string mix_mode = "exact";
  std::string avgmix_mode = "sampled";
  int samples = 256;
  long t_cap = -1;

  double alpha = -1;  // <= 0: model default
  double D = -1;      // <= 0: model default
  double gamma = -1;  // <= 0: derived alpha^2/4
  long k_cap = 6;

  double c0 = 1.0;
  int budget = 64;
  std::string conductance_mode = "sampled";

  long fvtl_T = -1;  // <= 0: (ln n)^6
  int fvtl_samples = 10;
  double fvtl_tol = 1e-8;

  double dbar = -1;  // <= 0: measured average degree
};

ExperimentConfig parse_config(const std::string& text);
json config_to_json(const ExperimentConfig& config);
std::string config_hash(const ExperimentConfig& config);

// Full record: config, per-(n, seed) runs with their analysis outputs,
// per-size aggregates (median/min/max of every scalar metric), and a timing
// block that is excluded from determinism comparisons.
json run_experiment(const ExperimentConfig& config);

// bad_set_union -> contract_components -> contract_to_vertex ->
// stationary_tv -> sampled conductance profile of G* -> sampled-start
// mixing time of G*, each reported against its qualitative target.
json contract_pipeline(const MultiGraph& g, const SpreaderParams& params,
                       long k_cap, int budget, int samples, Seed seed);

// kind = "mixing-curve" (CSV t,max_tv,mean_tv,sem per run) or "size-sweep"
// (one CSV, rows sorted by n). Returns the files written; throws with the
// available keys when the record lacks the needed curves.
std::vector<std::string> emit_plot_data(const json& record,
                                        const std::string& kind,
                                        const std::string& out_stem);

// Model defaults for the spreader parameters (used when the config leaves
// alpha/D unset): perturbed-style models take D = 2(Δ+1+eps) with Δ the base
// degeneracy; percolated-style models take D = 12 with alpha from the
// eps-dependent formula.
SpreaderParams default_spreader_params(const ExperimentConfig& config,
                                       const MultiGraph& g, Vertex base_degeneracy);

}  // namespace mixlab
