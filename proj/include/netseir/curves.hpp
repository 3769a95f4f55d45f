#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "netseir/engine.hpp"
#include "netseir/util.hpp"

namespace netseir {

struct CurveStats {
    double mean = 0.0;
    double lo = 0.0;  // 95% CI bounds, mean +- 1.96 * sd / sqrt(replicates)
    double hi = 0.0;
};

// Replicate curves reduced to per-day, per-compartment mean and 95% CI.
// daily[d] holds S, E, I, R in that order; cum_infected is n - S_mean,
// the mean count of ever-infected nodes.
struct CurveSet {
    std::uint32_t population = 0;
    std::vector<std::vector<CompartmentCounts>> replicates;  // [replicate][day]
    std::vector<std::array<CurveStats, 4>> daily;            // [day][compartment]
    std::vector<double> cum_infected_mean;

    int days() const { return static_cast<int>(daily.size()) - 1; }
};

struct SummaryStats {
    double peak_infected = 0.0;  // maximum of the replicate-mean I curve
    int peak_day = 0;            // earliest day attaining the maximum
    double final_attack_rate = 0.0;  // (n - S_final) / n
};

inline CurveSet reduce_replicates(std::vector<std::vector<CompartmentCounts>> replicates,
                                  std::uint32_t population) {
    if (replicates.empty()) throw std::invalid_argument("reduce_replicates: no replicates");
    const std::size_t days = replicates.front().size();
    if (days == 0) throw std::invalid_argument("reduce_replicates: empty curve");
    for (const auto& curve : replicates) {
        if (curve.size() != days) {
            throw std::invalid_argument("reduce_replicates: replicates have different lengths");
        }
    }
    const auto r = static_cast<double>(replicates.size());
    CurveSet set;
    set.population = population;
    set.daily.resize(days);
    set.cum_infected_mean.resize(days);
    for (std::size_t d = 0; d < days; ++d) {
        std::array<double, 4> sum{}, sumsq{};
        for (const auto& curve : replicates) {
            const CompartmentCounts& c = curve[d];
            const std::array<double, 4> value{static_cast<double>(c.s), static_cast<double>(c.e),
                                              static_cast<double>(c.i), static_cast<double>(c.r)};
            for (std::size_t j = 0; j < 4; ++j) {
                sum[j] += value[j];
                sumsq[j] += value[j] * value[j];
            }
        }
        for (std::size_t j = 0; j < 4; ++j) {
            double mean = sum[j] / r;
            double sd = 0.0;
            if (replicates.size() > 1) {
                double var = (sumsq[j] - r * mean * mean) / (r - 1.0);
                sd = var > 0.0 ? std::sqrt(var) : 0.0;
            }
            double half = 1.96 * sd / std::sqrt(r);
            set.daily[d][j] = CurveStats{mean, mean - half, mean + half};
        }
        set.cum_infected_mean[d] = static_cast<double>(population) - set.daily[d][0].mean;
    }
    set.replicates = std::move(replicates);
    return set;
}

inline SummaryStats summarize(const CurveSet& set) {
    if (set.daily.empty()) throw std::invalid_argument("summarize: empty curve set");
    SummaryStats stats;
    for (std::size_t d = 0; d < set.daily.size(); ++d) {
        double infected = set.daily[d][2].mean;
        if (infected > stats.peak_infected) {
            stats.peak_infected = infected;
            stats.peak_day = static_cast<int>(d);
        }
    }
    double s_final = set.daily.back()[0].mean;
    stats.final_attack_rate = (static_cast<double>(set.population) - s_final) /
                              static_cast<double>(set.population);
    return stats;
}

inline constexpr const char* kCurvesCsvHeader =
    "day,S_mean,S_lo,S_hi,E_mean,E_lo,E_hi,I_mean,I_lo,I_hi,R_mean,R_lo,R_hi,cum_infected_mean";

namespace detail {

inline std::string format_double(double value) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << value;
    return out.str();
}

}  // namespace detail

// CSV serialization. A `# scenario_hash=<hex>` comment line precedes the
// header when a hash is supplied; readers skip `#` lines.
inline std::string curves_to_csv(const CurveSet& set, const std::string& scenario_hash = "") {
    std::ostringstream out;
    if (!scenario_hash.empty()) out << "# scenario_hash=" << scenario_hash << "\n";
    out << kCurvesCsvHeader << "\n";
    for (std::size_t d = 0; d < set.daily.size(); ++d) {
        out << d;
        for (std::size_t j = 0; j < 4; ++j) {
            const CurveStats& c = set.daily[d][j];
            out << ',' << detail::format_double(c.mean) << ',' << detail::format_double(c.lo)
                << ',' << detail::format_double(c.hi);
        }
        out << ',' << detail::format_double(set.cum_infected_mean[d]) << "\n";
    }
    return out.str();
}

inline std::string summary_to_csv(const SummaryStats& stats, const std::string& scenario_hash = "") {
    std::ostringstream out;
    if (!scenario_hash.empty()) out << "# scenario_hash=" << scenario_hash << "\n";
    out << "peak_infected,peak_day,final_attack_rate\n";
    out << detail::format_double(stats.peak_infected) << ',' << stats.peak_day << ','
        << detail::format_double(stats.final_attack_rate) << "\n";
    return out.str();
}

inline void write_curves_csv(const CurveSet& set, const std::filesystem::path& path,
                             const std::string& scenario_hash = "") {
    atomic_write_file(path, curves_to_csv(set, scenario_hash));
}

inline void write_summary_csv(const SummaryStats& stats, const std::filesystem::path& path,
                              const std::string& scenario_hash = "") {
    atomic_write_file(path, summary_to_csv(stats, scenario_hash));
}

// Reads a curves.csv back into a CurveSet (means and CIs only; the raw
// replicate curves are not stored in the file). The population is
// recovered from the day-0 means, which are exact because every replicate
// starts from the same initial counts.
inline CurveSet read_curves_csv(const std::filesystem::path& path) {
    std::istringstream in(read_text_file(path));
    std::string line;
    bool saw_header = false;
    CurveSet set;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.size() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!saw_header) {
            if (line != kCurvesCsvHeader) {
                throw std::runtime_error(path.string() + ": unexpected curves header");
            }
            saw_header = true;
            continue;
        }
        std::array<double, 14> fields{};
        std::size_t pos = 0;
        for (std::size_t f = 0; f < 14; ++f) {
            std::size_t comma = line.find(',', pos);
            std::string token = line.substr(pos, comma == std::string::npos ? comma : comma - pos);
            try {
                fields[f] = std::stod(token);
            } catch (const std::exception&) {
                throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                         ": bad field " + std::to_string(f));
            }
            if (comma == std::string::npos) {
                if (f != 13) {
                    throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                             ": expected 14 fields");
                }
                break;
            }
            pos = comma + 1;
        }
        if (static_cast<std::size_t>(fields[0]) != set.daily.size()) {
            throw std::runtime_error(path.string() + ":" + std::to_string(line_no) +
                                     ": days must be consecutive from 0");
        }
        std::array<CurveStats, 4> day;
        for (std::size_t j = 0; j < 4; ++j) {
            day[j] = CurveStats{fields[1 + 3 * j], fields[2 + 3 * j], fields[3 + 3 * j]};
        }
        set.daily.push_back(day);
        set.cum_infected_mean.push_back(fields[13]);
    }
    if (set.daily.empty()) throw std::runtime_error(path.string() + ": no curve rows");
    double day0_total = 0.0;
    for (std::size_t j = 0; j < 4; ++j) day0_total += set.daily.front()[j].mean;
    set.population = static_cast<std::uint32_t>(std::llround(day0_total));
    return set;
}

// Per-day difference of cumulative-infection means (a minus b) plus the
// difference of final attack rates.
struct CompareReport {
    std::vector<double> cum_infected_diff;
    double final_attack_rate_a = 0.0;
    double final_attack_rate_b = 0.0;
    double final_attack_rate_diff = 0.0;
};

inline CompareReport compare_runs(const CurveSet& a, const CurveSet& b) {
    if (a.daily.size() != b.daily.size()) {
        throw std::invalid_argument("compare_runs: day ranges differ");
    }
    CompareReport report;
    report.cum_infected_diff.resize(a.daily.size());
    for (std::size_t d = 0; d < a.daily.size(); ++d) {
        report.cum_infected_diff[d] = a.cum_infected_mean[d] - b.cum_infected_mean[d];
    }
    report.final_attack_rate_a = summarize(a).final_attack_rate;
    report.final_attack_rate_b = summarize(b).final_attack_rate;
    report.final_attack_rate_diff = report.final_attack_rate_a - report.final_attack_rate_b;
    return report;
}

inline std::string compare_to_csv(const CompareReport& report) {
    std::ostringstream out;
    out << "day,cum_infected_diff\n";
    for (std::size_t d = 0; d < report.cum_infected_diff.size(); ++d) {
        out << d << ',' << detail::format_double(report.cum_infected_diff[d]) << "\n";
    }
    return out.str();
}

}  // namespace netseir
