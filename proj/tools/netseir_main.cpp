// Command-line front end: scenario runner plus utilities for generating,
// ingesting and calibrating contact networks.

#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "netseir/calibrate.hpp"
#include "netseir/curves.hpp"
#include "netseir/graph_io.hpp"
#include "netseir/ingest.hpp"
#include "netseir/netgen.hpp"
#include "netseir/ode.hpp"
#include "netseir/scenario.hpp"
#include "netseir/simulate.hpp"

namespace {

using namespace netseir;

std::int64_t parse_timestamp_arg(const std::string& text) {
    if (auto epoch = netseir::detail::parse_epoch(text)) return *epoch;
    if (auto iso = parse_iso_timestamp(text)) return *iso;
    throw std::runtime_error("'" + text + "' is neither epoch seconds nor an ISO-8601 timestamp");
}

std::string format_value(double value) {
    std::ostringstream out;
    out << std::setprecision(10) << value;
    return out.str();
}

// Report rows shared by all calibrate modes: one candidate per line, the
// chosen one flagged.
void write_calibration_report(const std::filesystem::path& path, const std::string& mode,
                              const std::string& parameter,
                              const std::vector<std::pair<double, double>>& evaluated,
                              double chosen) {
    std::ostringstream out;
    out << "# mode=" << mode << "\n";
    out << "parameter,value,mse,chosen\n";
    for (const auto& [value, mse] : evaluated) {
        out << parameter << ',' << format_value(value) << ',' << format_value(mse) << ','
            << (value == chosen ? 1 : 0) << "\n";
    }
    atomic_write_file(path, out.str());
}

struct GenerateArgs {
    std::string family;
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    double p = 0.0;
    std::uint32_t m = 0;
    std::uint64_t seed = 0;
    std::string out;
    bool stats = false;
};

int cmd_generate(const GenerateArgs& args) {
    GenSpec spec;
    spec.family = parse_family(args.family);
    spec.n = args.n;
    spec.degree = args.k;
    spec.edge_prob = args.p;
    spec.edges_per_node = args.m;
    spec.seed = args.seed;
    ContactGraph graph = generate(spec);
    write_edge_list(graph, args.out);
    std::cout << "family=" << family_name(spec.family) << " n=" << graph.node_count()
              << " edges=" << graph.edge_count() << " out=" << args.out << "\n";
    if (args.stats) {
        double asp = estimate_average_shortest_path(graph, 200, derive_seed(args.seed, 0xa59));
        std::cout << "avg_shortest_path=" << format_value(asp) << "\n";
    }
    return 0;
}

struct IngestArgs {
    std::string log;
    std::string out;
    std::string stats_out;
    std::string users_out;
    std::string window_start;
    std::string window_end;
    std::uint32_t target_nodes = 17800;
    std::int64_t slack_seconds = 0;
    std::uint64_t seed = 0;
};

int cmd_ingest(const IngestArgs& args) {
    ParseStats parse_stats;
    auto records = parse_colocation_log(args.log, &parse_stats);
    IngestSpec spec;
    spec.window_start = parse_timestamp_arg(args.window_start);
    spec.window_end = parse_timestamp_arg(args.window_end);
    spec.target_nodes = args.target_nodes;
    spec.slack_seconds = args.slack_seconds;
    spec.seed = args.seed;
    IngestResult result = build_contact_graph(records, spec);
    write_edge_list(result.graph, args.out);

    double asp = estimate_average_shortest_path(result.graph, 500, derive_seed(args.seed, 0xa59));
    std::ostringstream stats;
    stats << "rows=" << parse_stats.rows << "\n"
          << "malformed_rows=" << parse_stats.malformed << "\n"
          << "users_in_window=" << result.users_in_window << "\n"
          << "users_sampled=" << result.users_sampled << "\n"
          << "nodes_before_component=" << result.nodes_before_component << "\n"
          << "edges_before_component=" << result.edges_before_component << "\n"
          << "nodes=" << result.graph.node_count() << "\n"
          << "edges=" << result.graph.edge_count() << "\n"
          << "avg_shortest_path=" << format_value(asp) << "\n";
    if (!args.stats_out.empty()) atomic_write_file(args.stats_out, stats.str());
    std::cout << stats.str();

    if (!args.users_out.empty()) {
        std::ostringstream users;
        users << "node_id,user_id\n";
        for (NodeId id = 0; id < result.user_ids.size(); ++id) {
            users << id << ',' << result.user_ids[id] << "\n";
        }
        atomic_write_file(args.users_out, users.str());
    }
    return 0;
}

struct CalibrateCommon {
    double sigma = 0.2;
    double gamma = 1.0 / 14.0;
    std::uint32_t n = 17800;
    int replicates = 10;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::string report;
};

CompartmentCounts default_init(std::uint32_t n) {
    if (n < 5) throw std::runtime_error("population must have at least 5 nodes");
    return CompartmentCounts{n - 4, 3, 1, 0};
}

std::vector<double> ode_reference(double beta, const CalibrateCommon& common) {
    SeirParams params{beta, common.sigma, common.gamma, static_cast<double>(common.n)};
    CompartmentCounts init = default_init(common.n);
    SeirPoint point{static_cast<double>(init.s), static_cast<double>(init.e),
                    static_cast<double>(init.i), static_cast<double>(init.r)};
    SeirTrajectory traj = integrate_seir(params, point, 365);
    return calibration_window(traj);
}

std::vector<double> curve_reference(const std::string& path) {
    CurveSet set = read_curves_csv(path);
    std::vector<double> infected(set.daily.size());
    for (std::size_t d = 0; d < set.daily.size(); ++d) infected[d] = set.daily[d][2].mean;
    return infected;
}

int cmd_fit_beta(const std::string& series_path, const CalibrateCommon& common, double lo,
                 double hi, double step, bool fit_cumulative) {
    CaseSeries series = read_case_series(series_path);
    CompartmentCounts init = default_init(common.n);
    SeirPoint point{static_cast<double>(init.s), static_cast<double>(init.e),
                    static_cast<double>(init.i), static_cast<double>(init.r)};
    BetaFit fit = fit_beta(series.infected, common.sigma, common.gamma,
                           static_cast<double>(common.n), point, BetaGrid{lo, hi, step},
                           fit_cumulative);
    if (!common.report.empty()) {
        write_calibration_report(common.report, "fit_beta", "beta", fit.evaluated, fit.beta);
    }
    std::cout << "beta=" << format_value(fit.beta) << " mse=" << format_value(fit.mse) << "\n";
    return 0;
}

int cmd_bridge_k(const CalibrateCommon& common, double beta, int k_lo, int k_hi) {
    if (k_lo > k_hi) throw std::runtime_error("--k-lo must not exceed --k-hi");
    std::vector<int> k_range;
    for (int k = k_lo; k <= k_hi; ++k) k_range.push_back(k);
    std::vector<double> reference = ode_reference(beta, common);
    CalibrateOptions options{common.replicates, common.seed, common.threads};
    BridgeResult result = bridge_k(beta, common.sigma, common.gamma, common.n,
                                   default_init(common.n), k_range, reference, options);
    if (!common.report.empty()) {
        std::vector<std::pair<double, double>> rows;
        for (const auto& [k, phi, mse] : result.evaluated) {
            rows.push_back({static_cast<double>(k), mse});
        }
        write_calibration_report(common.report, "bridge_k", "k", rows,
                                 static_cast<double>(result.k_star));
    }
    std::cout << "k_star=" << result.k_star << " phi_star=" << format_value(result.phi_star)
              << " mse=" << format_value(result.fit_error) << "\n";
    return 0;
}

int cmd_tune_ba(const CalibrateCommon& common, double phi, int m_lo, int m_hi, double beta,
                const std::string& reference_path) {
    if (m_lo > m_hi) throw std::runtime_error("--m-lo must not exceed --m-hi");
    std::vector<int> m_range;
    for (int m = m_lo; m <= m_hi; ++m) m_range.push_back(m);
    std::vector<double> reference =
        reference_path.empty() ? ode_reference(beta, common) : curve_reference(reference_path);
    CalibrateOptions options{common.replicates, common.seed, common.threads};
    TuneResult result = tune_ba(phi, common.sigma, common.gamma, common.n, default_init(common.n),
                                m_range, reference, options);
    if (!common.report.empty()) {
        write_calibration_report(common.report, "tune_ba", "m", result.evaluated, result.best);
    }
    std::cout << "m_ba=" << static_cast<int>(result.best)
              << " mse=" << format_value(result.fit_error) << "\n";
    return 0;
}

int cmd_tune_er(const CalibrateCommon& common, double phi, double p_lo, double p_hi, double p_step,
                double beta, const std::string& reference_path) {
    if (!(p_step > 0) || p_lo > p_hi) throw std::runtime_error("bad edge probability grid");
    std::vector<double> p_range;
    for (double p = p_lo; p <= p_hi + 1e-12; p += p_step) p_range.push_back(p);
    std::vector<double> reference =
        reference_path.empty() ? ode_reference(beta, common) : curve_reference(reference_path);
    CalibrateOptions options{common.replicates, common.seed, common.threads};
    TuneResult result = tune_er(phi, common.sigma, common.gamma, common.n, default_init(common.n),
                                p_range, reference, options);
    if (!common.report.empty()) {
        write_calibration_report(common.report, "tune_er", "p", result.evaluated, result.best);
    }
    std::cout << "p_er=" << format_value(result.best) << " mse=" << format_value(result.fit_error)
              << "\n";
    return 0;
}

struct RunArgs {
    std::string scenario;
    std::string out;
    std::optional<int> replicates;
    std::optional<std::uint64_t> seed;
    unsigned threads = 1;
};

int cmd_run(const RunArgs& args) {
    Scenario scenario = load_scenario(args.scenario, args.replicates, args.seed);
    ContactGraph graph = build_scenario_graph(scenario);
    ScenarioRun run = run_scenario(scenario, graph, args.threads);
    write_scenario_outputs(run, args.out);
    std::cout << "scenario_hash=" << run.hash << " n=" << graph.node_count()
              << " edges=" << graph.edge_count() << "\n"
              << "peak_infected=" << format_value(run.summary.peak_infected)
              << " peak_day=" << run.summary.peak_day
              << " final_attack_rate=" << format_value(run.summary.final_attack_rate) << "\n"
              << "wrote " << (std::filesystem::path(args.out) / "curves.csv").string() << ", "
              << (std::filesystem::path(args.out) / "summary.csv").string() << "\n";
    return 0;
}

int cmd_compare(const std::string& a_path, const std::string& b_path, const std::string& out) {
    CurveSet a = read_curves_csv(a_path);
    CurveSet b = read_curves_csv(b_path);
    CompareReport report = compare_runs(a, b);
    if (!out.empty()) atomic_write_file(out, compare_to_csv(report));
    double max_abs = 0.0;
    for (double diff : report.cum_infected_diff) max_abs = std::max(max_abs, std::abs(diff));
    std::cout << "days=" << report.cum_infected_diff.size() - 1
              << " final_cum_diff=" << format_value(report.cum_infected_diff.back())
              << " max_abs_cum_diff=" << format_value(max_abs) << "\n"
              << "final_attack_rate_a=" << format_value(report.final_attack_rate_a)
              << " final_attack_rate_b=" << format_value(report.final_attack_rate_b)
              << " diff=" << format_value(report.final_attack_rate_diff) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Contact-network SEIR epidemic simulator"};
    app.require_subcommand(1);

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand("generate", "Generate a synthetic contact network");
    generate->add_option("--family", gen.family, "regular, er or ba")->required();
    generate->add_option("--n", gen.n, "number of nodes")->required();
    generate->add_option("--k", gen.k, "degree (regular)");
    generate->add_option("--p", gen.p, "edge probability (er)");
    generate->add_option("--m", gen.m, "edges per new node (ba)");
    generate->add_option("--seed", gen.seed, "generator seed");
    generate->add_option("--out", gen.out, "edge-list output path")->required();
    generate->add_flag("--stats", gen.stats, "also print an average shortest path estimate");

    IngestArgs ing;
    CLI::App* ingest = app.add_subcommand("ingest", "Build a contact network from co-location logs");
    ingest->add_option("--log", ing.log, "co-location CSV")->required();
    ingest->add_option("--out", ing.out, "edge-list output path")->required();
    ingest->add_option("--window-start", ing.window_start, "epoch seconds or ISO-8601")->required();
    ingest->add_option("--window-end", ing.window_end, "epoch seconds or ISO-8601")->required();
    ingest->add_option("--target-nodes", ing.target_nodes, "user subsample size (default 17800)");
    ingest->add_option("--slack-seconds", ing.slack_seconds,
                       "treat sessions this close in time as overlapping");
    ingest->add_option("--seed", ing.seed, "subsampling seed");
    ingest->add_option("--stats-out", ing.stats_out, "stats sidecar path");
    ingest->add_option("--users-out", ing.users_out, "node id to user id map path");

    CLI::App* calibrate = app.add_subcommand("calibrate", "Fit and bridge model parameters");
    calibrate->require_subcommand(1);
    CalibrateCommon common;
    double beta = 0.78;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--sigma", common.sigma, "daily E->I probability (default 0.2)");
        sub->add_option("--gamma", common.gamma, "daily I->R probability (default 1/14)");
        sub->add_option("--n", common.n, "population (default 17800)");
        sub->add_option("--replicates", common.replicates, "replicates per candidate (default 10)");
        sub->add_option("--seed", common.seed, "master seed");
        sub->add_option("--threads", common.threads, "worker threads");
        sub->add_option("--report", common.report, "per-candidate report CSV path");
    };

    std::string series_path;
    double beta_lo = 0.50, beta_hi = 1.00, beta_step = 0.01;
    bool fit_cumulative = false;
    CLI::App* fit = calibrate->add_subcommand("fit-beta", "Grid-fit the ODE transmission rate");
    fit->add_option("--series", series_path, "case series CSV (date,infected)")->required();
    fit->add_option("--beta-lo", beta_lo, "grid start (default 0.50)");
    fit->add_option("--beta-hi", beta_hi, "grid end (default 1.00)");
    fit->add_option("--beta-step", beta_step, "grid step (default 0.01)");
    fit->add_flag("--fit-cumulative", fit_cumulative, "fit cumulative instead of active infected");
    add_common(fit);

    int k_lo = 18, k_hi = 23;
    CLI::App* bridge = calibrate->add_subcommand("bridge-k", "Pick k* and phi* = beta / k*");
    bridge->add_option("--beta", beta, "ODE transmission rate (default 0.78)");
    bridge->add_option("--k-lo", k_lo, "smallest degree (default 18)");
    bridge->add_option("--k-hi", k_hi, "largest degree (default 23)");
    add_common(bridge);

    double phi = 0.0371;
    int m_lo = 5, m_hi = 15;
    std::string reference_path;
    CLI::App* ba = calibrate->add_subcommand("tune-ba", "Pick the preferential-attachment m");
    ba->add_option("--phi", phi, "per-contact transmission (default 0.0371)");
    ba->add_option("--m-lo", m_lo, "smallest m (default 5)");
    ba->add_option("--m-hi", m_hi, "largest m (default 15)");
    ba->add_option("--beta", beta, "build the reference from this ODE rate (default 0.78)");
    ba->add_option("--reference", reference_path, "use a curves.csv I_mean as reference instead");
    add_common(ba);

    double p_lo = 0.0013, p_hi = 0.0015, p_step = 0.00005;
    CLI::App* er = calibrate->add_subcommand("tune-er", "Pick the uniform edge probability");
    er->add_option("--phi", phi, "per-contact transmission (default 0.0371)");
    er->add_option("--p-lo", p_lo, "grid start (default 0.0013)");
    er->add_option("--p-hi", p_hi, "grid end (default 0.0015)");
    er->add_option("--p-step", p_step, "grid step (default 0.00005)");
    er->add_option("--beta", beta, "build the reference from this ODE rate (default 0.78)");
    er->add_option("--reference", reference_path, "use a curves.csv I_mean as reference instead");
    add_common(er);

    RunArgs run;
    int run_replicates = -1;
    std::int64_t run_seed = -1;
    CLI::App* runner = app.add_subcommand("run", "Run a scenario and write curve CSVs");
    runner->add_option("--scenario", run.scenario, "scenario JSON path")->required();
    runner->add_option("--out", run.out, "output directory")->required();
    runner->add_option("--replicates", run_replicates, "override scenario replicates");
    runner->add_option("--seed", run_seed, "override scenario seed");
    runner->add_option("--threads", run.threads, "worker threads (default 1)");

    std::string cmp_a, cmp_b, cmp_out;
    CLI::App* compare = app.add_subcommand("compare", "Diff two curves.csv files");
    compare->add_option("--a", cmp_a, "first curves.csv")->required();
    compare->add_option("--b", cmp_b, "second curves.csv")->required();
    compare->add_option("--out", cmp_out, "per-day difference CSV path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*generate) return cmd_generate(gen);
        if (*ingest) return cmd_ingest(ing);
        if (*fit) return cmd_fit_beta(series_path, common, beta_lo, beta_hi, beta_step,
                                      fit_cumulative);
        if (*bridge) return cmd_bridge_k(common, beta, k_lo, k_hi);
        if (*ba) return cmd_tune_ba(common, phi, m_lo, m_hi, beta, reference_path);
        if (*er) return cmd_tune_er(common, phi, p_lo, p_hi, p_step, beta, reference_path);
        if (*runner) {
            if (run_replicates >= 0) run.replicates = run_replicates;
            if (run_seed >= 0) run.seed = static_cast<std::uint64_t>(run_seed);
            return cmd_run(run);
        }
        if (*compare) return cmd_compare(cmp_a, cmp_b, cmp_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
