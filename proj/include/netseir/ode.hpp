#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netseir/dates.hpp"

namespace netseir {

struct SeirParams {
    double beta = 0.0;   // S->E rate per day
    double sigma = 0.0;  // E->I rate per day
    double gamma = 0.0;  // I->R rate per day
    double population = 0.0;

    void validate() const {
        if (beta < 0 || sigma < 0 || gamma < 0) {
            throw std::invalid_argument("SEIR rates must be non-negative");
        }
        if (!(population > 0)) throw std::invalid_argument("population must be positive");
    }
};

struct SeirPoint {
    double s = 0, e = 0, i = 0, r = 0;

    double sum() const { return s + e + i + r; }
};

struct SeirTrajectory {
    std::vector<SeirPoint> daily;  // index = day, size days + 1

    int days() const { return static_cast<int>(daily.size()) - 1; }

    std::vector<double> infected_curve() const {
        std::vector<double> curve(daily.size());
        for (std::size_t d = 0; d < daily.size(); ++d) curve[d] = daily[d].i;
        return curve;
    }

    int peak_day() const {
        int best = 0;
        for (int d = 1; d <= days(); ++d) {
            if (daily[d].i > daily[best].i) best = d;
        }
        return best;
    }

    double peak_infected() const { return daily[peak_day()].i; }
};

// Classic SEIR integrated with fixed-step RK4, sampled once per day. The
// system is non-stiff at epidemic rates; 100 steps/day resolves it to well
// below the comparison tolerances used elsewhere.
inline SeirTrajectory integrate_seir(const SeirParams& params, SeirPoint init, int days,
                                     int steps_per_day = 100) {
    params.validate();
    if (days < 1) throw std::invalid_argument("integrate_seir: days must be >= 1");
    if (steps_per_day < 1) throw std::invalid_argument("integrate_seir: steps_per_day must be >= 1");
    if (init.s < 0 || init.e < 0 || init.i < 0 || init.r < 0) {
        throw std::invalid_argument("integrate_seir: negative initial compartment");
    }
    if (std::abs(init.sum() - params.population) > 1e-6 * params.population) {
        throw std::invalid_argument("integrate_seir: initial compartments must sum to the population");
    }

    const double n = params.population;
    auto derivative = [&](const SeirPoint& y) {
        double infection = params.beta * y.s * y.i / n;
        return SeirPoint{-infection, infection - params.sigma * y.e,
                         params.sigma * y.e - params.gamma * y.i, params.gamma * y.i};
    };
    auto axpy = [](const SeirPoint& y, double h, const SeirPoint& k) {
        return SeirPoint{y.s + h * k.s, y.e + h * k.e, y.i + h * k.i, y.r + h * k.r};
    };

    SeirTrajectory traj;
    traj.daily.reserve(days + 1);
    traj.daily.push_back(init);
    SeirPoint y = init;
    const double h = 1.0 / steps_per_day;
    for (int day = 0; day < days; ++day) {
        for (int s = 0; s < steps_per_day; ++s) {
            SeirPoint k1 = derivative(y);
            SeirPoint k2 = derivative(axpy(y, h / 2, k1));
            SeirPoint k3 = derivative(axpy(y, h / 2, k2));
            SeirPoint k4 = derivative(axpy(y, h, k3));
            y = SeirPoint{y.s + h / 6 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s),
                          y.e + h / 6 * (k1.e + 2 * k2.e + 2 * k3.e + k4.e),
                          y.i + h / 6 * (k1.i + 2 * k2.i + 2 * k3.i + k4.i),
                          y.r + h / 6 * (k1.r + 2 * k2.r + 2 * k3.r + k4.r)};
        }
        traj.daily.push_back(y);
    }
    return traj;
}

inline double mean_squared_error(std::span<const double> a, std::span<const double> b) {
    std::size_t len = std::min(a.size(), b.size());
    if (len == 0) throw std::invalid_argument("mean_squared_error: empty series");
    double total = 0.0;
    for (std::size_t d = 0; d < len; ++d) {
        double diff = a[d] - b[d];
        total += diff * diff;
    }
    return total / static_cast<double>(len);
}

// Daily reported infected counts anchored at a calendar date.
struct CaseSeries {
    CivilDate start;
    std::vector<double> infected;
};

// CSV with header `date,infected`; dates must be consecutive days.
inline CaseSeries read_case_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open case series: " + path.string());
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty case series: " + path.string());
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line != "date,infected") {
        throw std::runtime_error(path.string() + ": expected header 'date,infected'");
    }
    CaseSeries series;
    std::int64_t expected_day = 0;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": expected date,infected");
        }
        CivilDate date = parse_iso_date(line.substr(0, comma));
        double value = 0.0;
        try {
            value = std::stod(line.substr(comma + 1));
        } catch (const std::exception&) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": bad count");
        }
        if (value < 0) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": negative count");
        }
        if (series.infected.empty()) {
            series.start = date;
            expected_day = days_from_civil(date);
        } else if (days_from_civil(date) != expected_day) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) + ": dates must be consecutive");
        }
        series.infected.push_back(value);
        ++expected_day;
    }
    if (series.infected.empty()) throw std::runtime_error("case series has no rows: " + path.string());
    return series;
}

struct BetaGrid {
    double lo = 0.0;
    double hi = 0.0;
    double step = 0.01;

    std::vector<double> values() const {
        if (!(lo < hi)) throw std::invalid_argument("beta grid: need lo < hi");
        if (!(step > 0)) throw std::invalid_argument("beta grid: need step > 0");
        auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
        std::vector<double> grid(count);
        for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * step;
        return grid;
    }
};

struct BetaFit {
    double beta = 0.0;
    double mse = 0.0;
    std::vector<std::pair<double, double>> evaluated;  // (beta, mse) per grid point
};

// Grid search for the transmission rate whose model curve best matches the
// observed series (MSE; ties go to the smaller beta). `observed[d]`
// corresponds to simulation day d from `init`. When `fit_cumulative` is
// set the model target is cumulative infections (n - S) instead of the
// active infected compartment.
inline BetaFit fit_beta(std::span<const double> observed, double sigma, double gamma,
                        double population, SeirPoint init, const BetaGrid& grid,
                        bool fit_cumulative = false, int steps_per_day = 100) {
    if (observed.size() < 3) throw std::invalid_argument("fit_beta: series must have at least 3 days");
    int days = static_cast<int>(observed.size()) - 1;
    BetaFit fit;
    bool first = true;
    for (double beta : grid.values()) {
        SeirParams params{beta, sigma, gamma, population};
        SeirTrajectory traj = integrate_seir(params, init, days, steps_per_day);
        std::vector<double> model(observed.size());
        for (std::size_t d = 0; d < observed.size(); ++d) {
            model[d] = fit_cumulative ? population - traj.daily[d].s : traj.daily[d].i;
        }
        double mse = mean_squared_error(model, observed);
        fit.evaluated.push_back({beta, mse});
        if (first || mse < fit.mse) {
            fit.beta = beta;
            fit.mse = mse;
            first = false;
        }
    }
    return fit;
}

}  // namespace netseir
