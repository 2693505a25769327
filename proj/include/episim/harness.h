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
#ifndef EPISIM_HARNESS_H
#define EPISIM_HARNESS_H

#include "episim/config.h"
#include "episim/estimation.h"
#include "episim/sim_state.h"

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <thread>
#include <vector>

namespace episim
{

/// The five campaign indicators of one run.
struct RunSummary {
    int duration_days             = 0;
    int serious_total             = 0;
    int peak_daily_new_infections = 0;
    int infected_total            = 0; // infection events, reinfections and index cases included
    int vaccines_total            = 0;
    std::uint64_t seed            = 0;
    bool truncated                = false; // stopped at max_days with infectious agents left

    friend bool operator==(const RunSummary&, const RunSummary&) = default;
};

struct RunResult {
    std::vector<DailyRecord> history;
    EstimateSeries estimates;
    RunSummary summary;
    std::vector<Agent> agents; // final population
    std::vector<TestResult> tests;
};

/// Step until no agent is infectious or cfg.max_days is reached.
RunResult run_simulation(SimConfig cfg, std::uint64_t seed);

RunSummary summarize(const SimState& state, std::uint64_t seed);

struct Stat {
    double mean = 0.0;
    double sd   = 0.0;

    friend bool operator==(const Stat&, const Stat&) = default;
};

Stat mean_sd(std::span<const double> values);

struct BatchSummary {
    std::string fingerprint;
    int n_runs = 0;
    Stat duration_days;
    Stat serious_total;
    Stat peak_daily_new_infections;
    Stat infected_total;
    Stat vaccines_total;
    std::vector<RunSummary> runs; // sorted by seed

    friend bool operator==(const BatchSummary&, const BatchSummary&) = default;
};

/// Stable hex digest of the canonical JSON form of cfg, seed excluded.
std::string config_fingerprint(const SimConfig& cfg);

/**
 * @brief Evaluate fn(seed) for seeds base_seed .. base_seed + n_runs - 1 on a worker pool.
 *
 * Results come back in seed order whatever the thread count.
 */
template <class Result>
std::vector<Result> map_seeds(int n_runs, std::uint64_t base_seed, const std::function<Result(std::uint64_t)>& fn,
                              unsigned threads = 0)
{
    std::vector<std::optional<Result>> slots(static_cast<std::size_t>(std::max(n_runs, 0)));
    if (threads == 0) {
        threads = std::max(1u, std::thread::hardware_concurrency());
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(slots.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (auto i = next++; i < slots.size(); i = next++) {
            try {
                slots[i].emplace(fn(base_seed + i));
            }
            catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
            }
        }
    };
    if (threads <= 1) {
        worker();
    }
    else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    std::vector<Result> results;
    results.reserve(slots.size());
    for (auto& slot : slots) {
        results.push_back(std::move(*slot));
    }
    return results;
}

/// @throws ConfigError if n_runs < 1.
BatchSummary run_batch(const SimConfig& cfg, int n_runs = 20, std::uint64_t base_seed = 1, unsigned threads = 0);

/// Per-run scores of a screening scenario.
struct ScreeningRunMetrics {
    std::uint64_t seed           = 0;
    double mae_proportional      = 0.0;
    double mae_predictive        = 0.0;
    double peak_mae_proportional = 0.0;
    double peak_mae_predictive   = 0.0;
    double peak_bias_predictive  = 0.0;
    double positivity            = 0.0; // positives / tests over the run
    double mean_prevalence       = 0.0; // mean true infected share over the run
    int tests_total              = 0;
    int max_daily_tests          = 0;
    int false_positives          = 0;
    int infected_total           = 0;
    int duration_days            = 0;
};

ScreeningRunMetrics score_screening_run(const RunResult& run, int population);

struct ScreeningCell {
    std::string label;
    ScreeningConfig screening;
    std::vector<ScreeningRunMetrics> runs;
    EstimateSeries example; // estimates of the first seed

    double mean_of(double ScreeningRunMetrics::*field) const;
};

struct ScreeningReport {
    std::string name;
    std::vector<ScreeningCell> cells;

    const ScreeningCell& cell(const std::string& label) const;
};

/// Random, Symptomatic, Elderly and Workers targeting at 3 tests/day, immediate start.
ScreeningReport experiment_screening_samples(const SimConfig& base, int n_runs = 20, std::uint64_t base_seed = 1);

/// Random targeting, immediate start, 3, 6 and 9 tests/day.
ScreeningReport experiment_screening_intensity(const SimConfig& base, int n_runs = 20, std::uint64_t base_seed = 1);

/// Random targeting, {immediate, 15% symptomatic} x {3, 9} tests/day.
ScreeningReport experiment_screening_timing(const SimConfig& base, int n_runs = 20, std::uint64_t base_seed = 1);

struct VaccinationCell {
    double start = 0.0; // infected share trigger
    int speed    = 0;   // daily doses
    VaccinationStrategy strategy = VaccinationStrategy::Random;
    BatchSummary batch;
};

struct VaccinationReport {
    std::vector<VaccinationCell> cells;
};

/// Start {0, 10, 20}% x speed {10, 20, 30} x {RiskFirst, ContactsFirst, Random}.
VaccinationReport experiment_vaccination_sweep(const SimConfig& base, int n_runs = 20, std::uint64_t base_seed = 1);

/// Writes estimates_<label>.csv per cell and errors.csv, report.json.
void write_report(const ScreeningReport& report, const std::filesystem::path& dir);

/// Writes vaccination_table.csv (one row per cell, mean indicators) and report.json.
void write_report(const VaccinationReport& report, const std::filesystem::path& dir);

/**
 * @brief Number of distinct waves of a series.
 *
 * Two maxima count as distinct when the series falls between them below
 * trough_ratio times the smaller of the two. Maxima below min_peak are ignored.
 */
int count_waves(std::span<const double> series, double trough_ratio = 0.25, double min_peak = 0.0);

} // namespace episim

#endif // EPISIM_HARNESS_H
