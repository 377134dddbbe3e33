#pragma once

// Experiment runner: seeded Monte Carlo studies over Haar rotations, with
// machine-readable CSV / JSON-lines output.
//
// Reproducibility contract: every record's value is a pure function of
// (experiment name, n, sample_index, master seed).  Seeds are derived by
// hashing that tuple, never from execution order, so permuting n_list or
// changing the thread count cannot change any record.  Wall-clock columns are
// zero unless timing is switched on, keeping default outputs byte-identical
// across runs.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "shadow/errors.hpp"
#include "shadow/line_search.hpp"
#include "shadow/stats.hpp"

namespace shadow::exp {

enum class ExperimentKind {
    scaling_cUn,       // minimized shadow area vs n, power-law fit
    scaling_sandwich,  // 1/|A|_max rate vs sqrt(n/ln n), divergence ratio table
    rare_event,        // frequency of diam-proxy minima below lambda*sqrt(n)
    concentration,     // pushforward norm statistics on the orthogonal subsphere
    nets_audit,        // lattice/slice net counts, bounds, and covering gaps
    section_diameter,  // cross-polytope section diameters
};

ExperimentKind parse_experiment(const std::string& name);
const char* experiment_name(ExperimentKind kind);

// One (theta, epsilon, n) cell of the slice-net audit.
struct SliceCase {
    double theta = 0.0;
    double epsilon = 0.0;
    int n = 0;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::scaling_cUn;
    std::vector<int> n_list;
    int samples_per_n = 1;
    std::uint64_t seed = 0;
    opt::OptimizerConfig optimizer;
    std::string output_path;
    enum class Format { csv, json } format = Format::csv;

    // Experiment-specific knobs (all optional in the config file).
    double lambda = 0.05;                            // rare_event threshold scale
    std::vector<std::pair<int, int>> lattice_cells;  // nets_audit (k, n) grid
    std::vector<SliceCase> slice_cases;              // nets_audit slice grid
    int trials = 10000;                              // covering-check samples per cell
    bool timing = false;                             // fill elapsed_ms with wall time
    long long work_budget = 10'000'000;              // optimizer outer-iteration cap
    double net_budget = 1e7;                         // net enumeration cap
    int threads = 0;                                 // 0 = hardware concurrency
};

// Strict JSON loader: unknown keys are rejected, required keys are n_list,
// samples_per_n, seed, output_path; the schema mirrors ExperimentConfig
// field-for-field ("optimizer" is a nested object of the OptimizerConfig
// fields; "lattice_cells" is a list of [k, n]; "slice_cases" a list of
// [theta, epsilon, n]).  "experiment", when present, must agree with the
// `expected` name if one is given (the CLI passes its positional argument).
ExperimentConfig parse_config_json(const std::string& text,
                                   const std::string& expected = std::string());
ExperimentConfig load_config(const std::string& path,
                             const std::string& expected = std::string());

struct ExperimentRecord {
    std::string experiment;
    int n = 0;
    long long sample_index = 0;
    std::uint64_t seed_used = 0;
    std::string estimator;
    double value = 0.0;
    double elapsed_ms = 0.0;
};

// Seed for one (experiment, n, sample_index) cell under a master seed.
std::uint64_t derive_seed(std::uint64_t master, const std::string& experiment, long long n,
                          long long sample_index);

struct RunResult {
    std::vector<ExperimentRecord> records;     // sorted by (n, sample_index)
    std::optional<stats::PowerLawFit> fit;     // when the experiment fits a rate
    std::string summary_json;                  // human-facing digest, one JSON object
};

// Per sample: Haar rotation, minimized shadow area, diameter proxy (warm
// started at the area minimizer, so min_area >= 2*diam_proxy per sample), and
// the constructive width-direction upper bound; fits log mean area vs log n.
// Estimators: min_area, diam_proxy, width_ub_area, inv_j_norm.
RunResult run_scaling_cUn(const ExperimentConfig& cfg);

// Per sample: 1/|A|_max, |A|_max, 4/|A|_max; the minimized shadow area is
// added on the first min(samples_per_n, 20) samples per n to keep the run
// affordable, and means over that subset feed the divergence ratio table.
// Estimators: inv_j_norm, j_norm, upper_4_inv_j, min_area (subset).
RunResult run_scaling_sandwich(const ExperimentConfig& cfg);

// Per sample: diameter-proxy minimum; the summary tabulates per-n frequencies
// of the event {proxy <= lambda*sqrt(n)}.  The observed frequency over-counts
// the true rare event (the optimizer only upper-bounds the proxy minimum).
RunResult run_rare_event(const ExperimentConfig& cfg, double lambda);

// Per sample: l1 and max norms of the image of the first basis vector under
// O^T J O for Haar O; the summary reports moment statistics against the
// closed-form subsphere expectation and the sqrt(n)/2 floor.
// Estimators: pushforward_l1, pushforward_linf.
RunResult run_concentration(const ExperimentConfig& cfg);

// Lattice cells: exact point count, the (2e(1+n/k))^k cardinality bound, and
// the covering gap measured on `trials` sampled points of the l1 ball (must
// stay below sqrt(k)).  Slice cells: point count vs the exp(eps*n) target and
// covering gap vs the stated net radius.  A cell whose enumeration would
// exceed net_budget is reported with budget_exceeded=1 instead of aborting.
// Record convention: sample_index carries the cell key (lattice: k; slice:
// position in slice_cases).
RunResult run_nets_audit(const ExperimentConfig& cfg);

// Per sample: minimized shadow area, diameter proxy (warm from the area
// minimizer), the cross-polytope section functional m2 (warm from the proxy
// minimizer, so 2*diam_proxy >= m2 per sample), and the section diameter
// 2*sqrt(2)/m2.  Estimators: min_area, diam_proxy, m2, section_diameter.
RunResult run_section_diameter(const ExperimentConfig& cfg);

// Dispatch on cfg.experiment.
RunResult run_experiment(const ExperimentConfig& cfg);

// Re-validates bracket invariants that every emitted value must satisfy
// (area caps, sandwich ordering, norm ranges, warm-start chains); throws
// InvariantError with a diagnostic naming the offending record.  A violation
// here is a code bug by construction, never a statistical fluctuation.
void validate_records(const std::vector<ExperimentRecord>& records);

// CSV header: experiment,n,sample_index,seed_used,estimator,value,elapsed_ms.
// JSON-lines mode emits one object per line with keys in that same order.
// Reals use 17 significant digits, newlines are LF, encoding UTF-8.  Records
// are written sorted by (n, sample_index), preserving estimator order within
// a sample.  Both forms round-trip doubles bit-exactly through parse_records.
void emit(const std::vector<ExperimentRecord>& records, ExperimentConfig::Format format,
          std::ostream& os);
void emit(const std::vector<ExperimentRecord>& records, ExperimentConfig::Format format,
          const std::string& path);

std::vector<ExperimentRecord> parse_records(std::istream& is, ExperimentConfig::Format format);

}  // namespace shadow::exp
