#include "shadow/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"
#include "shadow/concentration.hpp"
#include "shadow/format.hpp"
#include "shadow/nets.hpp"
#include "shadow/parallel.hpp"
#include "shadow/zonogon.hpp"

namespace shadow::exp {

using json = nlohmann::ordered_json;

// --------------------------------------------------------------------------
// Names, config, seeds

ExperimentKind parse_experiment(const std::string& name) {
    if (name == "scaling_cUn") return ExperimentKind::scaling_cUn;
    if (name == "scaling_sandwich") return ExperimentKind::scaling_sandwich;
    if (name == "rare_event") return ExperimentKind::rare_event;
    if (name == "concentration") return ExperimentKind::concentration;
    if (name == "nets_audit") return ExperimentKind::nets_audit;
    if (name == "section_diameter") return ExperimentKind::section_diameter;
    throw ParameterError("unknown experiment '" + name + "'");
}

const char* experiment_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::scaling_cUn: return "scaling_cUn";
        case ExperimentKind::scaling_sandwich: return "scaling_sandwich";
        case ExperimentKind::rare_event: return "rare_event";
        case ExperimentKind::concentration: return "concentration";
        case ExperimentKind::nets_audit: return "nets_audit";
        case ExperimentKind::section_diameter: return "section_diameter";
    }
    throw ParameterError("experiment_name: unknown kind");
}

namespace {

void check_known_keys(const json& j, const std::set<std::string>& known, const char* where) {
    for (const auto& item : j.items())
        if (!known.count(item.key()))
            throw ParameterError(std::string(where) + ": unknown key '" + item.key() + "'");
}

opt::OptimizerConfig parse_optimizer(const json& j) {
    check_known_keys(j, {"restarts", "max_iters", "step_init", "step_shrink", "grad_tol"},
                     "optimizer");
    opt::OptimizerConfig cfg;
    cfg.restarts = j.value("restarts", cfg.restarts);
    cfg.max_iters = j.value("max_iters", cfg.max_iters);
    cfg.step_init = j.value("step_init", cfg.step_init);
    cfg.step_shrink = j.value("step_shrink", cfg.step_shrink);
    cfg.grad_tol = j.value("grad_tol", cfg.grad_tol);
    return cfg;
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& text, const std::string& expected) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("config: not valid JSON: ") + e.what());
    }
    check_known_keys(j,
                     {"experiment", "n_list", "samples_per_n", "seed", "optimizer", "output_path",
                      "format", "lambda", "lattice_cells", "slice_cases", "trials", "timing",
                      "work_budget", "net_budget", "threads"},
                     "config");
    ExperimentConfig cfg;
    std::string name = expected;
    if (j.contains("experiment")) {
        const std::string from_file = j.at("experiment").get<std::string>();
        if (!expected.empty() && from_file != expected)
            throw ParameterError("config names experiment '" + from_file +
                                 "' but the command line asked for '" + expected + "'");
        name = from_file;
    }
    if (name.empty()) throw ParameterError("config: no experiment named");
    cfg.experiment = parse_experiment(name);

    if (!j.contains("n_list")) throw ParameterError("config: n_list is required");
    cfg.n_list = j.at("n_list").get<std::vector<int>>();
    if (cfg.n_list.empty()) throw ParameterError("config: n_list must be nonempty");
    for (int n : cfg.n_list)
        if (n < 2) throw ParameterError("config: every n must be >= 2");
    {
        std::set<int> uniq(cfg.n_list.begin(), cfg.n_list.end());
        if (uniq.size() != cfg.n_list.size())
            throw ParameterError("config: n_list has duplicates");
    }
    if (!j.contains("samples_per_n")) throw ParameterError("config: samples_per_n is required");
    cfg.samples_per_n = j.at("samples_per_n").get<int>();
    if (cfg.samples_per_n < 1) throw ParameterError("config: samples_per_n must be >= 1");
    if (!j.contains("seed")) throw ParameterError("config: seed is required");
    cfg.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("optimizer")) cfg.optimizer = parse_optimizer(j.at("optimizer"));
    if (!j.contains("output_path")) throw ParameterError("config: output_path is required");
    cfg.output_path = j.at("output_path").get<std::string>();
    if (j.contains("format")) {
        const std::string f = j.at("format").get<std::string>();
        if (f == "csv")
            cfg.format = ExperimentConfig::Format::csv;
        else if (f == "json")
            cfg.format = ExperimentConfig::Format::json;
        else
            throw ParameterError("config: format must be 'csv' or 'json'");
    }
    cfg.lambda = j.value("lambda", cfg.lambda);
    if (!(cfg.lambda > 0.0)) throw ParameterError("config: lambda must be positive");
    if (j.contains("lattice_cells"))
        for (const auto& cell : j.at("lattice_cells")) {
            if (!cell.is_array() || cell.size() != 2)
                throw ParameterError("config: lattice_cells entries must be [k, n]");
            cfg.lattice_cells.emplace_back(cell[0].get<int>(), cell[1].get<int>());
        }
    if (j.contains("slice_cases"))
        for (const auto& cell : j.at("slice_cases")) {
            if (!cell.is_array() || cell.size() != 3)
                throw ParameterError("config: slice_cases entries must be [theta, eps, n]");
            cfg.slice_cases.push_back(
                {cell[0].get<double>(), cell[1].get<double>(), cell[2].get<int>()});
        }
    cfg.trials = j.value("trials", cfg.trials);
    if (cfg.trials < 1) throw ParameterError("config: trials must be >= 1");
    cfg.timing = j.value("timing", cfg.timing);
    cfg.work_budget = j.value("work_budget", cfg.work_budget);
    cfg.net_budget = j.value("net_budget", cfg.net_budget);
    cfg.threads = j.value("threads", cfg.threads);
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::string& expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str(), expected);
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& experiment, long long n,
                          long long sample_index) {
    std::uint64_t h = mix64(master);
    h = hash_str(h, experiment);
    h = hash_combine(h, std::uint64_t(n));
    h = hash_combine(h, std::uint64_t(sample_index));
    return h;
}

// --------------------------------------------------------------------------
// Shared running machinery

namespace {

struct Timer {
    bool enabled = false;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double ms() const {
        if (!enabled) return 0.0;
        return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

// Runs `per_sample(n, sample_index, seed_used)` over the full (n, sample) grid
// in parallel, then stitches the per-sample record batches together sorted by
// (n, sample_index).  Values depend only on seeds, never on scheduling.
std::vector<ExperimentRecord> run_grid(
    const ExperimentConfig& cfg,
    const std::function<std::vector<ExperimentRecord>(int, long long, std::uint64_t)>&
        per_sample) {
    const std::string name = experiment_name(cfg.experiment);
    std::vector<int> ns = cfg.n_list;
    std::sort(ns.begin(), ns.end());
    const std::size_t total = ns.size() * std::size_t(cfg.samples_per_n);
    std::vector<std::vector<ExperimentRecord>> slots(total);
    parallel_for(
        total,
        [&](std::size_t i) {
            const int n = ns[i / std::size_t(cfg.samples_per_n)];
            const long long s = (long long)(i % std::size_t(cfg.samples_per_n));
            slots[i] = per_sample(n, s, derive_seed(cfg.seed, name, n, s));
        },
        cfg.threads);
    std::vector<ExperimentRecord> records;
    for (auto& batch : slots)
        for (auto& r : batch) records.push_back(std::move(r));
    return records;
}

ExperimentRecord make_record(const std::string& experiment, int n, long long sample_index,
                             std::uint64_t seed_used, const char* estimator, double value,
                             double elapsed_ms) {
    ExperimentRecord r;
    r.experiment = experiment;
    r.n = n;
    r.sample_index = sample_index;
    r.seed_used = seed_used;
    r.estimator = estimator;
    r.value = value;
    r.elapsed_ms = elapsed_ms;
    return r;
}

// Planned optimizer outer iterations for `minimizations` solver calls; checked
// against the work budget up front so oversized configs fail fast.
void check_work_budget(const ExperimentConfig& cfg, long long minimizations) {
    const long long starts = std::max(cfg.optimizer.restarts, 3);
    const long long planned = minimizations * starts * (long long)cfg.optimizer.max_iters;
    if (planned > cfg.work_budget)
        throw BudgetError("planned optimizer work " + std::to_string(planned) +
                          " outer iterations exceeds work_budget " +
                          std::to_string(cfg.work_budget));
}

double mean_of(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / double(xs.size());
}

// Per-n means of one estimator, in ascending n order.
std::vector<std::pair<int, double>> per_n_means(const std::vector<ExperimentRecord>& records,
                                                const std::string& estimator) {
    std::map<int, std::vector<double>> by_n;
    for (const auto& r : records)
        if (r.estimator == estimator) by_n[r.n].push_back(r.value);
    std::vector<std::pair<int, double>> means;
    for (auto& [n, xs] : by_n) means.emplace_back(n, mean_of(xs));
    return means;
}

json quantiles_json(const stats::NormStats& s) {
    json q = json::object();
    for (const auto& [p, v] : s.quantiles) q["p" + std::to_string(int(p * 100))] = v;
    return q;
}

}  // namespace

// --------------------------------------------------------------------------
// Experiments

RunResult run_scaling_cUn(const ExperimentConfig& cfg) {
    check_work_budget(cfg, 2LL * cfg.n_list.size() * cfg.samples_per_n);
    const std::string name = experiment_name(cfg.experiment);
    RunResult out;
    out.records = run_grid(cfg, [&](int n, long long s, std::uint64_t seed_used) {
        Timer timer{cfg.timing};
        Rng haar(RngSeed{seed_used, 0});
        const Matrix O = haar_orthogonal(2 * n, haar);

        opt::OptimizerConfig area_cfg = cfg.optimizer;
        area_cfg.rng = RngSeed{seed_used, 1};
        const opt::MinimizationResult area = opt::minimize_shadow_area(O, area_cfg, 1);

        // Warm-start the proxy at the area minimizer: the proxy value there is
        // at most half the area, so min_area >= 2*diam_proxy sample by sample.
        std::vector<Vector> warm{(O.transpose() * area.best_line.e).normalized()};
        opt::OptimizerConfig proxy_cfg = cfg.optimizer;
        proxy_cfg.rng = RngSeed{seed_used, 2};
        const opt::MinimizationResult proxy = opt::minimize_diam_proxy(O, proxy_cfg, 1, &warm);

        const opt::WidthLineResult wub = opt::width_direction_upper_bound(O);
        const double inv_j = 1.0 / opt::j_operator_norm_cube(O);
        const double ms = timer.ms();
        return std::vector<ExperimentRecord>{
            make_record(name, n, s, seed_used, "min_area", area.best_value, ms),
            make_record(name, n, s, seed_used, "diam_proxy", proxy.best_value, ms),
            make_record(name, n, s, seed_used, "width_ub_area", wub.area_ub, ms),
            make_record(name, n, s, seed_used, "inv_j_norm", inv_j, ms),
        };
    });

    const auto means = per_n_means(out.records, "min_area");
    std::vector<std::pair<double, double>> pts;
    for (auto& [n, m] : means) pts.emplace_back(double(n), m);
    out.fit = stats::fit_power_law(pts);

    json summary;
    summary["experiment"] = name;
    summary["fit"] = {{"exponent", out.fit->exponent},
                      {"log_constant", out.fit->log_constant},
                      {"r_squared", out.fit->r_squared}};
    json rows = json::array();
    const auto proxy_means = per_n_means(out.records, "diam_proxy");
    for (std::size_t i = 0; i < means.size(); ++i)
        rows.push_back({{"n", means[i].first},
                        {"mean_min_area", means[i].second},
                        {"mean_diam_proxy", proxy_means[i].second}});
    summary["per_n"] = rows;
    out.summary_json = summary.dump();
    return out;
}

RunResult run_scaling_sandwich(const ExperimentConfig& cfg) {
    const long long subset = std::min<long long>(cfg.samples_per_n, 20);
    check_work_budget(cfg, (long long)cfg.n_list.size() * subset);
    const std::string name = experiment_name(cfg.experiment);
    RunResult out;
    out.records = run_grid(cfg, [&](int n, long long s, std::uint64_t seed_used) {
        Timer timer{cfg.timing};
        Rng haar(RngSeed{seed_used, 0});
        const Matrix O = haar_orthogonal(2 * n, haar);
        const double jn = opt::j_operator_norm_cube(O);
        std::vector<ExperimentRecord> recs;
        // The norm quantities are cheap and run on every sample; the shadow-area
        // minimization is restricted to a fixed-size leading subset per n so the
        // divergence ratio stays affordable at large n.
        if (s < subset) {
            opt::OptimizerConfig area_cfg = cfg.optimizer;
            area_cfg.rng = RngSeed{seed_used, 1};
            const opt::MinimizationResult area = opt::minimize_shadow_area(O, area_cfg, 1);
            recs.push_back(make_record(name, n, s, seed_used, "min_area", area.best_value, 0.0));
        }
        const double ms = timer.ms();
        for (auto& r : recs) r.elapsed_ms = ms;
        const double inv_j = 1.0 / jn;
        recs.push_back(make_record(name, n, s, seed_used, "inv_j_norm", inv_j, ms));
        recs.push_back(make_record(name, n, s, seed_used, "j_norm", jn, ms));
        recs.push_back(make_record(name, n, s, seed_used, "upper_4_inv_j", 4.0 * inv_j, ms));
        return recs;
    });

    const auto inv_means = per_n_means(out.records, "inv_j_norm");
    const auto area_means = per_n_means(out.records, "min_area");
    std::vector<std::pair<double, double>> pts;
    for (auto& [n, m] : inv_means) pts.emplace_back(double(n), m);
    out.fit = stats::fit_power_law(pts);

    json rows = json::array();
    double rate_lo = 0.0, rate_hi = 0.0;
    bool increasing = true;
    double prev_ratio = 0.0;
    for (std::size_t i = 0; i < inv_means.size(); ++i) {
        const int n = inv_means[i].first;
        const double rate = inv_means[i].second / std::sqrt(double(n) / std::log(double(n)));
        const double ratio = area_means[i].second / inv_means[i].second;
        rate_lo = (i == 0) ? rate : std::min(rate_lo, rate);
        rate_hi = (i == 0) ? rate : std::max(rate_hi, rate);
        if (i > 0 && ratio <= prev_ratio) increasing = false;
        prev_ratio = ratio;
        rows.push_back({{"n", n},
                        {"mean_inv_j", inv_means[i].second},
                        {"rate_ratio", rate},
                        {"mean_min_area", area_means[i].second},
                        {"area_over_inv_j", ratio}});
    }
    json summary;
    summary["experiment"] = name;
    summary["fit"] = {{"exponent", out.fit->exponent},
                      {"log_constant", out.fit->log_constant},
                      {"r_squared", out.fit->r_squared}};
    summary["per_n"] = rows;
    summary["rate_spread"] = rate_lo > 0.0 ? rate_hi / rate_lo : 0.0;
    summary["ratio_strictly_increasing"] = increasing;
    out.summary_json = summary.dump();
    return out;
}

RunResult run_rare_event(const ExperimentConfig& cfg, double lambda) {
    if (!(lambda > 0.0)) throw ParameterError("run_rare_event: lambda must be positive");
    check_work_budget(cfg, (long long)cfg.n_list.size() * cfg.samples_per_n);
    const std::string name = experiment_name(cfg.experiment);
    RunResult out;
    out.records = run_grid(cfg, [&](int n, long long s, std::uint64_t seed_used) {
        Timer timer{cfg.timing};
        Rng haar(RngSeed{seed_used, 0});
        const Matrix O = haar_orthogonal(2 * n, haar);
        opt::OptimizerConfig proxy_cfg = cfg.optimizer;
        proxy_cfg.rng = RngSeed{seed_used, 2};
        const opt::MinimizationResult proxy = opt::minimize_diam_proxy(O, proxy_cfg, 1);
        return std::vector<ExperimentRecord>{
            make_record(name, n, s, seed_used, "diam_proxy", proxy.best_value, timer.ms())};
    });

    json rows = json::array();
    for (auto& [n, values] : [&] {
             std::map<int, std::vector<double>> by_n;
             for (const auto& r : out.records) by_n[r.n].push_back(r.value);
             return by_n;
         }()) {
        const double threshold = lambda * std::sqrt(double(n));
        long events = 0;
        for (double v : values)
            if (v <= threshold) ++events;
        rows.push_back({{"n", n},
                        {"threshold", threshold},
                        {"samples", values.size()},
                        {"events", events},
                        {"frequency", double(events) / double(values.size())}});
    }
    json summary;
    summary["experiment"] = name;
    summary["lambda"] = lambda;
    summary["frequency_table"] = rows;
    out.summary_json = summary.dump();
    return out;
}

RunResult run_concentration(const ExperimentConfig& cfg) {
    const std::string name = experiment_name(cfg.experiment);
    RunResult out;
    out.records = run_grid(cfg, [&](int n, long long s, std::uint64_t seed_used) {
        Timer timer{cfg.timing};
        Rng rng(RngSeed{seed_used, 0});
        Vector y = Vector::Zero(2 * n);
        y(0) = 1.0;
        const prob::SubsphereSample sample = prob::pushforward_sample(y, rng);
        const double ms = timer.ms();
        return std::vector<ExperimentRecord>{
            make_record(name, n, s, seed_used, "pushforward_l1", sample.x.lpNorm<1>(), ms),
            make_record(name, n, s, seed_used, "pushforward_linf",
                        sample.x.lpNorm<Eigen::Infinity>(), ms),
        };
    });

    json stats_rows = json::array();
    for (int n : [&] {
             std::vector<int> ns = cfg.n_list;
             std::sort(ns.begin(), ns.end());
             return ns;
         }()) {
        std::vector<double> l1, linf;
        for (const auto& r : out.records) {
            if (r.n != n) continue;
            if (r.estimator == "pushforward_l1") l1.push_back(r.value);
            if (r.estimator == "pushforward_linf") linf.push_back(r.value);
        }
        const stats::NormStats s1 = stats::summarize(std::move(l1), stats::NormKind::l1);
        const stats::NormStats si = stats::summarize(std::move(linf), stats::NormKind::linf);
        // y = e1: the closed-form subsphere expectation of the l1 norm.
        const double closed_form =
            std::sqrt(2.0 / M_PI) * std::sqrt(double(2 * n - 1));
        const double floor_bound = 0.5 * std::sqrt(double(n));
        stats_rows.push_back(
            {{"estimator", "pushforward_l1"},
             {"n", n},
             {"samples", s1.n_samples},
             {"mean", s1.mean},
             {"std", s1.std},
             {"quantiles", quantiles_json(s1)},
             {"pass_flags",
              {{"mean_above_half_sqrt_n", s1.mean >= floor_bound},
               {"mean_within_5pct_closed_form",
                std::fabs(s1.mean / closed_form - 1.0) <= 0.05}}},
             {"closed_form", closed_form},
             {"half_sqrt_n", floor_bound}});
        stats_rows.push_back({{"estimator", "pushforward_linf"},
                              {"n", n},
                              {"samples", si.n_samples},
                              {"mean", si.mean},
                              {"std", si.std},
                              {"quantiles", quantiles_json(si)},
                              {"pass_flags",
                               {{"range_ok", si.mean >= 1.0 / std::sqrt(2.0 * n) &&
                                                 si.mean <= 1.0}}}});
    }
    json summary;
    summary["experiment"] = name;
    summary["stats"] = stats_rows;
    out.summary_json = summary.dump();
    return out;
}

RunResult run_nets_audit(const ExperimentConfig& cfg) {
    const std::string name = experiment_name(cfg.experiment);
    if (cfg.lattice_cells.empty() && cfg.slice_cases.empty())
        throw ParameterError("run_nets_audit: no lattice_cells or slice_cases configured");
    RunResult out;
    json rows = json::array();

    for (const auto& [k, n] : cfg.lattice_cells) {
        const std::uint64_t seed_used = derive_seed(cfg.seed, name, n, k);
        Timer timer{cfg.timing};
        try {
            const nets::LatticeNet net = nets::lattice_net(k, n, cfg.net_budget);
            const std::vector<Vector> pts = nets::to_vectors(net);
            Rng rng(RngSeed{seed_used, 0});
            const double gap = nets::covering_check(
                pts, net.covering_radius_bound,
                [&] { return nets::sample_l1_ball(double(k), n, rng); }, cfg.trials);
            const double ms = timer.ms();
            out.records.push_back(
                make_record(name, n, k, seed_used, "lattice_count", double(net.count()), ms));
            out.records.push_back(
                make_record(name, n, k, seed_used, "lattice_bound", net.cardinality_bound, ms));
            out.records.push_back(make_record(name, n, k, seed_used, "lattice_gap", gap, ms));
            out.records.push_back(
                make_record(name, n, k, seed_used, "budget_exceeded", 0.0, ms));
            rows.push_back({{"kind", "lattice"},
                            {"k", k},
                            {"n", n},
                            {"count", net.count()},
                            {"bound", net.cardinality_bound},
                            {"gap", gap},
                            {"radius", net.covering_radius_bound}});
        } catch (const BudgetError&) {
            out.records.push_back(
                make_record(name, n, k, seed_used, "budget_exceeded", 1.0, timer.ms()));
            rows.push_back({{"kind", "lattice"}, {"k", k}, {"n", n}, {"budget_exceeded", true}});
        }
    }

    for (std::size_t i = 0; i < cfg.slice_cases.size(); ++i) {
        const SliceCase& c = cfg.slice_cases[i];
        const std::uint64_t seed_used = derive_seed(cfg.seed, name, c.n, (long long)i);
        Timer timer{cfg.timing};
        try {
            const nets::SliceNet net = nets::slice_net(c.theta, c.epsilon, c.n, cfg.net_budget);
            Rng rng(RngSeed{seed_used, 0});
            const double gap = nets::covering_check(
                net.points, net.net_radius,
                [&] { return nets::sample_sphere_slice(c.theta, c.n, rng); }, cfg.trials);
            const double cap = std::exp(c.epsilon * double(c.n));
            const double ms = timer.ms();
            out.records.push_back(make_record(name, c.n, (long long)i, seed_used, "slice_count",
                                              double(net.points.size()), ms));
            out.records.push_back(
                make_record(name, c.n, (long long)i, seed_used, "slice_cap", cap, ms));
            out.records.push_back(make_record(name, c.n, (long long)i, seed_used, "slice_radius",
                                              net.net_radius, ms));
            out.records.push_back(
                make_record(name, c.n, (long long)i, seed_used, "slice_gap", gap, ms));
            rows.push_back({{"kind", "slice"},
                            {"theta", c.theta},
                            {"epsilon", c.epsilon},
                            {"n", c.n},
                            {"count", net.points.size()},
                            {"cap_exp_eps_n", cap},
                            {"gap", gap},
                            {"radius", net.net_radius}});
        } catch (const BudgetError&) {
            out.records.push_back(make_record(name, c.n, (long long)i, seed_used,
                                              "budget_exceeded", 1.0, timer.ms()));
            rows.push_back({{"kind", "slice"},
                            {"theta", c.theta},
                            {"epsilon", c.epsilon},
                            {"n", c.n},
                            {"budget_exceeded", true}});
        }
    }

    std::stable_sort(out.records.begin(), out.records.end(),
                     [](const ExperimentRecord& a, const ExperimentRecord& b) {
                         return std::tie(a.n, a.sample_index) < std::tie(b.n, b.sample_index);
                     });
    json summary;
    summary["experiment"] = name;
    summary["cells"] = rows;
    out.summary_json = summary.dump();
    return out;
}

RunResult run_section_diameter(const ExperimentConfig& cfg) {
    check_work_budget(cfg, 3LL * cfg.n_list.size() * cfg.samples_per_n);
    const std::string name = experiment_name(cfg.experiment);
    RunResult out;
    out.records = run_grid(cfg, [&](int n, long long s, std::uint64_t seed_used) {
        Timer timer{cfg.timing};
        Rng haar(RngSeed{seed_used, 0});
        const Matrix O = haar_orthogonal(2 * n, haar);

        opt::OptimizerConfig area_cfg = cfg.optimizer;
        area_cfg.rng = RngSeed{seed_used, 1};
        const opt::MinimizationResult area = opt::minimize_shadow_area(O, area_cfg, 1);

        std::vector<Vector> warm{(O.transpose() * area.best_line.e).normalized()};
        opt::OptimizerConfig proxy_cfg = cfg.optimizer;
        proxy_cfg.rng = RngSeed{seed_used, 2};
        const opt::MinimizationResult proxy = opt::minimize_diam_proxy(O, proxy_cfg, 1, &warm);

        // Chain the warm start once more: m2 at the proxy minimizer is at most
        // twice the proxy value, so 2*diam_proxy >= m2 sample by sample.
        std::vector<Vector> warm2{(O.transpose() * proxy.best_line.e).normalized()};
        opt::OptimizerConfig m2_cfg = cfg.optimizer;
        m2_cfg.rng = RngSeed{seed_used, 3};
        const opt::OctahedronSection sec =
            opt::octahedron_section_diameter(O, m2_cfg, 1, &warm2);

        const double ms = timer.ms();
        return std::vector<ExperimentRecord>{
            make_record(name, n, s, seed_used, "min_area", area.best_value, ms),
            make_record(name, n, s, seed_used, "diam_proxy", proxy.best_value, ms),
            make_record(name, n, s, seed_used, "m2", sec.m2_upper_bound, ms),
            make_record(name, n, s, seed_used, "section_diameter", sec.diameter, ms),
        };
    });

    json rows = json::array();
    long long remark_failures = 0;
    {
        std::map<std::pair<int, long long>, std::map<std::string, double>> by_sample;
        for (const auto& r : out.records)
            by_sample[{r.n, r.sample_index}][r.estimator] = r.value;
        for (const auto& [key, vals] : by_sample)
            if (vals.at("min_area") < vals.at("section_diameter")) ++remark_failures;
    }
    for (auto& [n, m] : per_n_means(out.records, "section_diameter"))
        rows.push_back({{"n", n},
                        {"mean_section_diameter", m},
                        {"mean_scaled_sqrt_n", m * std::sqrt(double(n))}});
    json summary;
    summary["experiment"] = name;
    summary["per_n"] = rows;
    summary["area_vs_section_failures"] = remark_failures;
    out.summary_json = summary.dump();
    return out;
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    switch (cfg.experiment) {
        case ExperimentKind::scaling_cUn: return run_scaling_cUn(cfg);
        case ExperimentKind::scaling_sandwich: return run_scaling_sandwich(cfg);
        case ExperimentKind::rare_event: return run_rare_event(cfg, cfg.lambda);
        case ExperimentKind::concentration: return run_concentration(cfg);
        case ExperimentKind::nets_audit: return run_nets_audit(cfg);
        case ExperimentKind::section_diameter: return run_section_diameter(cfg);
    }
    throw ParameterError("run_experiment: unknown kind");
}

// --------------------------------------------------------------------------
// Validation

namespace {

[[noreturn]] void fail_record(const ExperimentRecord& r, const std::string& why) {
    throw InvariantError("record invariant violated (" + r.experiment + ", n=" +
                         std::to_string(r.n) + ", sample=" + std::to_string(r.sample_index) +
                         ", " + r.estimator + "=" + format_g17(r.value) + "): " + why);
}

void check_range(const ExperimentRecord& r, double lo, double hi) {
    if (r.value < lo || r.value > hi)
        fail_record(r, "outside [" + format_g17(lo) + ", " + format_g17(hi) + "]");
}

}  // namespace

void validate_records(const std::vector<ExperimentRecord>& records) {
    std::map<std::pair<int, long long>, std::map<std::string, const ExperimentRecord*>> groups;
    for (const auto& r : records) {
        if (!std::isfinite(r.value)) fail_record(r, "not finite");
        const double root2n = std::sqrt(2.0 * r.n);
        if (r.estimator == "min_area" || r.estimator == "width_ub_area")
            check_range(r, M_PI - 1e-9, 4.0 * root2n + 1e-9 * (1.0 + 4.0 * root2n));
        else if (r.estimator == "diam_proxy")
            check_range(r, 1.0 - 1e-12, root2n + 1e-9);
        else if (r.estimator == "inv_j_norm")
            check_range(r, 1.0 - 1e-12, root2n + 1e-9);
        else if (r.estimator == "j_norm")
            check_range(r, 1.0 / root2n - 1e-12, 1.0 + 1e-12);
        else if (r.estimator == "m2")
            check_range(r, 2.0 - 1e-9, 1.0 + root2n + 1e-9);
        else if (r.estimator == "section_diameter")
            check_range(r, 1.0 / std::sqrt(double(r.n)) - 1e-9, std::sqrt(2.0) + 1e-9);
        else if (r.estimator == "pushforward_l1")
            check_range(r, 1.0 - 1e-9, root2n + 1e-9);
        else if (r.estimator == "pushforward_linf")
            check_range(r, 1.0 / root2n - 1e-9, 1.0 + 1e-9);
        else if (r.estimator == "budget_exceeded") {
            if (r.value != 0.0 && r.value != 1.0) fail_record(r, "must be 0 or 1");
        } else if (r.estimator == "lattice_count" || r.estimator == "slice_count") {
            if (r.value < 1.0) fail_record(r, "empty net");
        }
        groups[{r.n, r.sample_index}].emplace(r.estimator, &r);
    }

    for (const auto& [key, g] : groups) {
        const auto get = [&](const char* est) -> const ExperimentRecord* {
            auto it = g.find(est);
            return it == g.end() ? nullptr : it->second;
        };
        const ExperimentRecord* area = get("min_area");
        const ExperimentRecord* proxy = get("diam_proxy");
        const ExperimentRecord* wub = get("width_ub_area");
        const ExperimentRecord* inv_j = get("inv_j_norm");
        const ExperimentRecord* jn = get("j_norm");
        const ExperimentRecord* four = get("upper_4_inv_j");
        const ExperimentRecord* m2 = get("m2");
        const ExperimentRecord* sec = get("section_diameter");
        if (area && inv_j && area->value < inv_j->value - 1e-9)
            fail_record(*area, "minimized area below the certified 1/|A|_max bound");
        if (area && wub && area->value > wub->value + 1e-9)
            fail_record(*area, "minimized area above the width-direction upper bound");
        if (area && proxy && area->value < 2.0 * proxy->value - 1e-9)
            fail_record(*area, "warm-start chain broken: min_area < 2*diam_proxy");
        if (proxy && m2 && 2.0 * proxy->value < m2->value - 1e-9)
            fail_record(*m2, "warm-start chain broken: m2 > 2*diam_proxy");
        if (m2 && sec && std::fabs(sec->value * m2->value - 2.0 * std::sqrt(2.0)) > 1e-9)
            fail_record(*sec, "section diameter is not 2*sqrt(2)/m2");
        if (inv_j && jn && std::fabs(inv_j->value * jn->value - 1.0) > 1e-9)
            fail_record(*inv_j, "inv_j_norm and j_norm are not reciprocal");
        if (inv_j && four && std::fabs(four->value - 4.0 * inv_j->value) > 1e-9 * four->value)
            fail_record(*four, "upper bound is not exactly 4x the lower bound");
        const ExperimentRecord* lc = get("lattice_count");
        const ExperimentRecord* lb = get("lattice_bound");
        const ExperimentRecord* lg = get("lattice_gap");
        if (lc && lb && lc->value > lb->value * (1.0 + 1e-12))
            fail_record(*lc, "lattice count exceeds its cardinality bound");
        if (lg && lg->value > std::sqrt(double(key.second)) + 1e-9)
            fail_record(*lg, "lattice covering gap exceeds sqrt(k)");
        const ExperimentRecord* sg = get("slice_gap");
        const ExperimentRecord* sr = get("slice_radius");
        if (sg && sr && sg->value > sr->value + 1e-9)
            fail_record(*sg, "slice covering gap exceeds the net radius");
    }
}

// --------------------------------------------------------------------------
// Emission and parsing

namespace {

constexpr const char* kCsvHeader = "experiment,n,sample_index,seed_used,estimator,value,elapsed_ms";

std::vector<ExperimentRecord> sorted_records(std::vector<ExperimentRecord> records) {
    std::stable_sort(records.begin(), records.end(),
                     [](const ExperimentRecord& a, const ExperimentRecord& b) {
                         return std::tie(a.n, a.sample_index) < std::tie(b.n, b.sample_index);
                     });
    return records;
}

}  // namespace

void emit(const std::vector<ExperimentRecord>& records, ExperimentConfig::Format format,
          std::ostream& os) {
    const std::vector<ExperimentRecord> rows = sorted_records(records);
    if (format == ExperimentConfig::Format::csv) {
        os << kCsvHeader << '\n';
        for (const auto& r : rows)
            os << r.experiment << ',' << r.n << ',' << r.sample_index << ',' << r.seed_used << ','
               << r.estimator << ',' << format_g17(r.value) << ',' << format_g17(r.elapsed_ms)
               << '\n';
    } else {
        for (const auto& r : rows)
            os << "{\"experiment\":\"" << r.experiment << "\",\"n\":" << r.n
               << ",\"sample_index\":" << r.sample_index << ",\"seed_used\":" << r.seed_used
               << ",\"estimator\":\"" << r.estimator << "\",\"value\":" << format_g17(r.value)
               << ",\"elapsed_ms\":" << format_g17(r.elapsed_ms) << "}\n";
    }
    if (!os) throw IoError("emit: stream write failed");
}

void emit(const std::vector<ExperimentRecord>& records, ExperimentConfig::Format format,
          const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: LF on every platform
    if (!out) throw IoError("emit: cannot open " + path);
    emit(records, format, out);
    out.flush();
    if (!out) throw IoError("emit: write failed for " + path);
}

std::vector<ExperimentRecord> parse_records(std::istream& is, ExperimentConfig::Format format) {
    std::vector<ExperimentRecord> records;
    std::string line;
    if (format == ExperimentConfig::Format::csv) {
        if (!std::getline(is, line)) throw IoError("parse_records: empty input");
        if (line != kCsvHeader) throw IoError("parse_records: unexpected header: " + line);
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::vector<std::string> fields;
            std::size_t pos = 0;
            while (fields.size() < 6) {
                const std::size_t comma = line.find(',', pos);
                if (comma == std::string::npos)
                    throw IoError("parse_records: short row: " + line);
                fields.push_back(line.substr(pos, comma - pos));
                pos = comma + 1;
            }
            fields.push_back(line.substr(pos));
            ExperimentRecord r;
            r.experiment = fields[0];
            r.n = std::stoi(fields[1]);
            r.sample_index = std::stoll(fields[2]);
            r.seed_used = std::stoull(fields[3]);
            r.estimator = fields[4];
            r.value = std::strtod(fields[5].c_str(), nullptr);
            r.elapsed_ms = std::strtod(fields[6].c_str(), nullptr);
            records.push_back(std::move(r));
        }
    } else {
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            json j;
            try {
                j = json::parse(line);
            } catch (const json::exception& e) {
                throw IoError(std::string("parse_records: bad JSON line: ") + e.what());
            }
            ExperimentRecord r;
            r.experiment = j.at("experiment").get<std::string>();
            r.n = j.at("n").get<int>();
            r.sample_index = j.at("sample_index").get<long long>();
            r.seed_used = j.at("seed_used").get<std::uint64_t>();
            r.estimator = j.at("estimator").get<std::string>();
            r.value = j.at("value").get<double>();
            r.elapsed_ms = j.at("elapsed_ms").get<double>();
            records.push_back(std::move(r));
        }
    }
    return records;
}

}  // namespace shadow::exp
