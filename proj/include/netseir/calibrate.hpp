#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "netseir/engine.hpp"
#include "netseir/netgen.hpp"
#include "netseir/ode.hpp"
#include "netseir/simulate.hpp"

namespace netseir {

// Shared knobs for grid calibration runs. `replicates` matches the
// ten-run averaging used everywhere else; the comparison window is the
// length of the reference curve.
struct CalibrateOptions {
    int replicates = 10;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct BridgeResult {
    int k_star = 0;
    double phi_star = 0.0;
    double fit_error = 0.0;
    std::vector<std::tuple<int, double, double>> evaluated;  // (k, phi, mse)
};

struct TuneResult {
    double best = 0.0;  // chosen grid value (k, m or p depending on the tuner)
    double fit_error = 0.0;
    std::vector<std::pair<double, double>> evaluated;  // (value, mse)
};

namespace detail {

// Mean infected curve of `replicates` runs on `graph`, compared to the
// reference by MSE over the reference's full length.
inline double candidate_mse(const ContactGraph& graph, const DiseaseParams& disease,
                            CompartmentCounts init, std::span<const double> reference,
                            const CalibrateOptions& options, std::uint64_t candidate_seed) {
    if (reference.size() < 2) {
        throw std::invalid_argument("calibration reference must cover at least one day");
    }
    RunConfig config;
    config.disease = disease;
    config.init = init;
    config.days = static_cast<int>(reference.size()) - 1;
    config.seed = candidate_seed;
    auto replicates = run_replicates(graph, config, options.replicates, options.threads);
    std::vector<double> mean(reference.size(), 0.0);
    for (const auto& curve : replicates) {
        for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += curve[d].i;
    }
    for (double& value : mean) value /= static_cast<double>(replicates.size());
    return mean_squared_error(mean, reference);
}

inline CompartmentCounts default_init_for(std::uint32_t n, CompartmentCounts init) {
    if (init.total() != n) {
        throw std::invalid_argument("calibration initial counts must sum to n");
    }
    return init;
}

}  // namespace detail

// Bridges the ODE transmission rate onto a contact network: for every k in
// the range, runs the network model on a random regular graph with
// phi = beta / k and picks the k whose mean infected curve best matches
// the reference (MSE; ties go to the smaller k). k values for which a
// k-regular graph on n nodes cannot exist are skipped.
inline BridgeResult bridge_k(double beta, double sigma, double gamma, std::uint32_t n,
                             CompartmentCounts init, std::span<const int> k_range,
                             std::span<const double> reference_infected,
                             const CalibrateOptions& options = {}) {
    if (k_range.empty()) throw std::invalid_argument("bridge_k: empty k range");
    detail::default_init_for(n, init);
    BridgeResult result;
    bool found = false;
    for (int k : k_range) {
        if (k <= 0 || static_cast<std::uint32_t>(k) >= n) continue;
        if ((static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(k)) % 2 != 0) continue;
        double phi = beta / static_cast<double>(k);
        if (phi > 1.0) continue;
        ContactGraph graph =
            gen_regular(n, static_cast<std::uint32_t>(k), derive_seed(options.seed, 0x6772, k));
        DiseaseParams disease{phi, sigma, gamma};
        double mse = detail::candidate_mse(graph, disease, init, reference_infected, options,
                                           derive_seed(options.seed, 0x7275, k));
        result.evaluated.push_back({k, phi, mse});
        if (!found || mse < result.fit_error) {
            result.k_star = k;
            result.phi_star = phi;
            result.fit_error = mse;
            found = true;
        }
    }
    if (!found) throw std::runtime_error("bridge_k: no feasible k in range");
    return result;
}

// Grid-tunes the preferential-attachment edge parameter: the returned
// value is the m whose mean infected curve under phi best matches the
// reference (ties to the smaller m).
inline TuneResult tune_ba(double phi, double sigma, double gamma, std::uint32_t n,
                          CompartmentCounts init, std::span<const int> m_range,
                          std::span<const double> reference_infected,
                          const CalibrateOptions& options = {}) {
    if (m_range.empty()) throw std::invalid_argument("tune_ba: empty m range");
    detail::default_init_for(n, init);
    TuneResult result;
    bool found = false;
    DiseaseParams disease{phi, sigma, gamma};
    for (int m : m_range) {
        if (m < 1 || static_cast<std::uint32_t>(m) >= n) continue;
        ContactGraph graph =
            gen_ba(n, static_cast<std::uint32_t>(m), derive_seed(options.seed, 0x6261, m));
        double mse = detail::candidate_mse(graph, disease, init, reference_infected, options,
                                           derive_seed(options.seed, 0x7262, m));
        result.evaluated.push_back({static_cast<double>(m), mse});
        if (!found || mse < result.fit_error) {
            result.best = static_cast<double>(m);
            result.fit_error = mse;
            found = true;
        }
    }
    if (!found) throw std::runtime_error("tune_ba: no feasible m in range");
    return result;
}

// Grid-tunes the uniform edge probability (ties to the smaller p).
inline TuneResult tune_er(double phi, double sigma, double gamma, std::uint32_t n,
                          CompartmentCounts init, std::span<const double> p_range,
                          std::span<const double> reference_infected,
                          const CalibrateOptions& options = {}) {
    if (p_range.empty()) throw std::invalid_argument("tune_er: empty p range");
    detail::default_init_for(n, init);
    TuneResult result;
    bool found = false;
    DiseaseParams disease{phi, sigma, gamma};
    std::uint64_t index = 0;
    for (double p : p_range) {
        ++index;
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("tune_er: edge probability must be in [0, 1]");
        }
        ContactGraph graph = gen_er(n, p, derive_seed(options.seed, 0x6572, index));
        double mse = detail::candidate_mse(graph, disease, init, reference_infected, options,
                                           derive_seed(options.seed, 0x7265, index));
        result.evaluated.push_back({p, mse});
        if (!found || mse < result.fit_error) {
            result.best = p;
            result.fit_error = mse;
            found = true;
        }
    }
    return result;
}

// Comparison window used when calibrating against an ODE reference:
// day 0 through the ODE peak plus a fortnight of decline.
inline std::vector<double> calibration_window(const SeirTrajectory& reference,
                                              int extra_days = 14) {
    int end = std::min(reference.days(), reference.peak_day() + extra_days);
    std::vector<double> window(static_cast<std::size_t>(end) + 1);
    for (int d = 0; d <= end; ++d) window[d] = reference.daily[d].i;
    return window;
}

}  // namespace netseir
