/*
* Copyright (C) 2026 The episim authors
*
* Licensed under the Apache License, Version 2.0 (the "License");
* you may not use this file except in compliance with the License.
* You may obtain a copy of the License at
*
*     http://www.apache.org/licenses/LICENSE-2.0
*
* Unless required by applicable law or agreed to in writing, software
* distributed under the License is distributed on an "AS IS" BASIS,
* WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
* See the License for the specific language governing permissions and
* limitations under the License.
*/
#include "episim/harness.h"
#include "episim/dynamics.h"
#include "episim/io.h"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace episim
{

RunSummary summarize(const SimState& state, std::uint64_t seed)
{
    RunSummary s;
    s.seed          = seed;
    s.duration_days = state.day;
    for (const auto& r : state.history) {
        s.serious_total += r.new_serious;
        s.vaccines_total += r.doses_given;
        s.peak_daily_new_infections = std::max(s.peak_daily_new_infections, r.new_infections);
    }
    for (const auto& a : state.agents) {
        s.infected_total += a.times_sick;
    }
    s.truncated = has_infectious(state);
    return s;
}

RunResult run_simulation(SimConfig cfg, std::uint64_t seed)
{
    cfg.seed   = seed;
    auto state = make_state(cfg);
    while (state.day < cfg.max_days && has_infectious(state)) {
        step(state);
    }
    RunResult result;
    result.estimates = build_estimates(state);
    result.summary   = summarize(state, seed);
    result.history   = std::move(state.history);
    result.agents    = std::move(state.agents);
    result.tests     = std::move(state.test_log);
    return result;
}

Stat mean_sd(std::span<const double> values)
{
    Stat s;
    if (values.empty()) {
        return s;
    }
    for (double v : values) {
        s.mean += v;
    }
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) {
            ss += (v - s.mean) * (v - s.mean);
        }
        s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

std::string config_fingerprint(const SimConfig& cfg)
{
    auto canonical = cfg;
    canonical.seed = 0;
    auto text      = to_json(canonical).dump();
    // FNV-1a, 64 bit.
    std::uint64_t hash = 1469598103934665603ull;
    for (unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << hash;
    return os.str();
}

BatchSummary run_batch(const SimConfig& cfg, int n_runs, std::uint64_t base_seed, unsigned threads)
{
    if (n_runs < 1) {
        throw ConfigError("a batch needs at least one run");
    }
    cfg.validate();
    BatchSummary batch;
    batch.fingerprint = config_fingerprint(cfg);
    batch.n_runs      = n_runs;
    batch.runs        = map_seeds<RunSummary>(
        n_runs, base_seed,
        [&cfg](std::uint64_t seed) {
            return run_simulation(cfg, seed).summary;
        },
        threads);

    auto stat = [&](auto field) {
        std::vector<double> v;
        for (const auto& r : batch.runs) {
            v.push_back(static_cast<double>(r.*field));
        }
        return mean_sd(v);
    };
    batch.duration_days             = stat(&RunSummary::duration_days);
    batch.serious_total             = stat(&RunSummary::serious_total);
    batch.peak_daily_new_infections = stat(&RunSummary::peak_daily_new_infections);
    batch.infected_total            = stat(&RunSummary::infected_total);
    batch.vaccines_total            = stat(&RunSummary::vaccines_total);
    return batch;
}

ScreeningRunMetrics score_screening_run(const RunResult& run, int population)
{
    ScreeningRunMetrics m;
    m.seed           = run.summary.seed;
    m.infected_total = run.summary.infected_total;
    m.duration_days  = run.summary.duration_days;

    std::vector<double> prop, pred;
    std::vector<int> truth;
    for (const auto& p : run.estimates) {
        prop.push_back(p.est_proportional);
        pred.push_back(p.est_predictive);
        truth.push_back(p.true_infected);
    }
    m.mae_proportional      = curve_error(prop, truth);
    m.mae_predictive        = curve_error(pred, truth);
    m.peak_mae_proportional = peak_window_error(prop, truth);
    m.peak_mae_predictive   = peak_window_error(pred, truth);
    m.peak_bias_predictive  = peak_window_bias(pred, truth);

    int positives = 0;
    for (const auto& r : run.history) {
        m.tests_total += r.tests_done;
        positives += r.positives;
        m.max_daily_tests = std::max(m.max_daily_tests, r.tests_done);
    }
    m.positivity = m.tests_total > 0 ? static_cast<double>(positives) / m.tests_total : 0.0;
    for (const auto& t : run.tests) {
        m.false_positives += (t.positive && !t.infected) ? 1 : 0;
    }
    if (!truth.empty() && population > 0) {
        double sum = 0.0;
        for (int t : truth) {
            sum += t;
        }
        m.mean_prevalence = sum / static_cast<double>(truth.size()) / population;
    }
    return m;
}

double ScreeningCell::mean_of(double ScreeningRunMetrics::*field) const
{
    if (runs.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& r : runs) {
        sum += r.*field;
    }
    return sum / static_cast<double>(runs.size());
}

const ScreeningCell& ScreeningReport::cell(const std::string& label) const
{
    for (const auto& c : cells) {
        if (c.label == label) {
            return c;
        }
    }
    throw std::out_of_range("no cell '" + label + "' in report " + name);
}

namespace
{

ScreeningCell run_screening_cell(const SimConfig& base, std::string label, const ScreeningConfig& screening,
                                 int n_runs, std::uint64_t base_seed)
{
    auto cfg      = base;
    cfg.screening = screening;
    cfg.validate();
    ScreeningCell cell;
    cell.label     = std::move(label);
    cell.screening = screening;
    cell.runs      = map_seeds<ScreeningRunMetrics>(n_runs, base_seed, [&cfg](std::uint64_t seed) {
        return score_screening_run(run_simulation(cfg, seed), cfg.population.size);
    });
    if (n_runs > 0) {
        cell.example = run_simulation(cfg, base_seed).estimates;
    }
    return cell;
}

ScreeningConfig screening_variant(const SimConfig& base, ScreeningTarget target, int daily_tests, double trigger)
{
    auto s                      = base.screening;
    s.enabled                   = true;
    s.target                    = target;
    s.daily_tests               = daily_tests;
    s.trigger_symptomatic_share = trigger;
    return s;
}

} // namespace

ScreeningReport experiment_screening_samples(const SimConfig& base, int n_runs, std::uint64_t base_seed)
{
    ScreeningReport report;
    report.name = "samples";
    for (auto target : {ScreeningTarget::Random, ScreeningTarget::Symptomatic, ScreeningTarget::Elderly,
                        ScreeningTarget::Workers}) {
        report.cells.push_back(run_screening_cell(base, to_string(target), screening_variant(base, target, 3, 0.0),
                                                  n_runs, base_seed));
    }
    return report;
}

ScreeningReport experiment_screening_intensity(const SimConfig& base, int n_runs, std::uint64_t base_seed)
{
    ScreeningReport report;
    report.name = "intensity";
    for (int tests : {3, 6, 9}) {
        report.cells.push_back(run_screening_cell(base, "tests_" + std::to_string(tests),
                                                  screening_variant(base, ScreeningTarget::Random, tests, 0.0),
                                                  n_runs, base_seed));
    }
    return report;
}

ScreeningReport experiment_screening_timing(const SimConfig& base, int n_runs, std::uint64_t base_seed)
{
    ScreeningReport report;
    report.name = "timing";
    for (auto [start, trigger] : {std::pair{"immediate", 0.0}, std::pair{"late", 0.15}}) {
        for (int tests : {3, 9}) {
            report.cells.push_back(run_screening_cell(base, std::string(start) + "_" + std::to_string(tests),
                                                      screening_variant(base, ScreeningTarget::Random, tests, trigger),
                                                      n_runs, base_seed));
        }
    }
    return report;
}

VaccinationReport experiment_vaccination_sweep(const SimConfig& base, int n_runs, std::uint64_t base_seed)
{
    VaccinationReport report;
    for (auto strategy :
         {VaccinationStrategy::RiskFirst, VaccinationStrategy::ContactsFirst, VaccinationStrategy::Random}) {
        for (double start : {0.0, 0.10, 0.20}) {
            for (int speed : {10, 20, 30}) {
                auto cfg                               = base;
                cfg.vaccination.enabled                = true;
                cfg.vaccination.strategy               = strategy;
                cfg.vaccination.trigger_infected_share = start;
                cfg.vaccination.daily_doses            = speed;
                report.cells.push_back({start, speed, strategy, run_batch(cfg, n_runs, base_seed)});
            }
        }
    }
    return report;
}

namespace
{

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream os(path);
    if (!os) {
        throw std::runtime_error("cannot write " + path.string());
    }
    return os;
}

} // namespace

void write_report(const ScreeningReport& report, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    auto errors = open_out(dir / "errors.csv");
    errors << "cell,seed,mae_proportional,mae_predictive,peak_mae_proportional,peak_mae_predictive,"
              "peak_bias_predictive,positivity,mean_prevalence,tests_total,false_positives,infected_total\n";
    errors << std::setprecision(std::numeric_limits<double>::max_digits10);
    nlohmann::json j;
    j["experiment"] = report.name;
    j["cells"]      = nlohmann::json::array();
    for (const auto& cell : report.cells) {
        for (const auto& r : cell.runs) {
            errors << cell.label << ',' << r.seed << ',' << r.mae_proportional << ',' << r.mae_predictive << ','
                   << r.peak_mae_proportional << ',' << r.peak_mae_predictive << ',' << r.peak_bias_predictive
                   << ',' << r.positivity << ',' << r.mean_prevalence << ',' << r.tests_total << ','
                   << r.false_positives << ',' << r.infected_total << '\n';
        }
        auto est = open_out(dir / ("estimates_" + cell.label + ".csv"));
        write_estimates_csv(est, cell.example);
        j["cells"].push_back({
            {"label", cell.label},
            {"screening", to_json(cell.screening)},
            {"n_runs", cell.runs.size()},
            {"mean_mae_proportional", cell.mean_of(&ScreeningRunMetrics::mae_proportional)},
            {"mean_mae_predictive", cell.mean_of(&ScreeningRunMetrics::mae_predictive)},
            {"mean_peak_mae_predictive", cell.mean_of(&ScreeningRunMetrics::peak_mae_predictive)},
            {"mean_peak_bias_predictive", cell.mean_of(&ScreeningRunMetrics::peak_bias_predictive)},
            {"mean_positivity", cell.mean_of(&ScreeningRunMetrics::positivity)},
            {"mean_prevalence", cell.mean_of(&ScreeningRunMetrics::mean_prevalence)},
        });
    }
    open_out(dir / "report.json") << j.dump(2) << '\n';
}

void write_report(const VaccinationReport& report, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    auto table = open_out(dir / "vaccination_table.csv");
    table << "strategy,start,speed,duration,serious,peak,infected,vaccines,"
             "duration_sd,serious_sd,peak_sd,infected_sd,vaccines_sd\n";
    nlohmann::json j = nlohmann::json::array();
    for (const auto& c : report.cells) {
        const auto& b = c.batch;
        table << to_string(c.strategy) << ',' << std::lround(c.start * 100) << ',' << c.speed << ','
              << b.duration_days.mean << ',' << b.serious_total.mean << ',' << b.peak_daily_new_infections.mean
              << ',' << b.infected_total.mean << ',' << b.vaccines_total.mean << ',' << b.duration_days.sd << ','
              << b.serious_total.sd << ',' << b.peak_daily_new_infections.sd << ',' << b.infected_total.sd << ','
              << b.vaccines_total.sd << '\n';
        auto cell        = to_json(b);
        cell["strategy"] = to_string(c.strategy);
        cell["start"]    = c.start;
        cell["speed"]    = c.speed;
        j.push_back(std::move(cell));
    }
    open_out(dir / "report.json") << j.dump(2) << '\n';
}

int count_waves(std::span<const double> series, double trough_ratio, double min_peak)
{
    int waves     = 0;
    bool in_wave  = false;
    double peak   = 0.0;
    double trough = std::numeric_limits<double>::infinity();
    for (double v : series) {
        if (!in_wave) {
            trough = std::min(trough, v);
            if (v >= min_peak && v > 0.0 && trough < trough_ratio * v) {
                in_wave = true;
                peak    = v;
            }
        }
        else {
            peak = std::max(peak, v);
            if (v < trough_ratio * peak) {
                ++waves;
                in_wave = false;
                trough  = v;
            }
        }
    }
    return waves + (in_wave ? 1 : 0);
}

} // namespace episim
