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
#include "episim/estimation.h"

#include <algorithm>
#include <cmath>
#include <string>

namespace episim
{

double proportional_estimate(std::int64_t positives, std::int64_t tests, std::int64_t population)
{
    if (positives < 0 || tests < 0 || population < 0) {
        throw ContractViolation("counts must be non-negative");
    }
    if (positives > tests) {
        throw ContractViolation("positives (" + std::to_string(positives) + ") exceed tests (" +
                                std::to_string(tests) + ")");
    }
    if (tests == 0) {
        return 0.0;
    }
    return static_cast<double>(population) * static_cast<double>(positives) / static_cast<double>(tests);
}

double ppv(double sensi, double specif, double preval)
{
    double true_pos  = sensi * preval;
    double false_pos = (1.0 - specif) * (1.0 - preval);
    double denom     = true_pos + false_pos;
    return denom > 0.0 ? true_pos / denom : 0.0;
}

double npv(double sensi, double specif, double preval)
{
    double true_neg  = specif * (1.0 - preval);
    double false_neg = (1.0 - sensi) * preval;
    double denom     = true_neg + false_neg;
    return denom > 0.0 ? true_neg / denom : 1.0;
}

double corrected_prevalence(double apparent_positivity, const TestParams& params)
{
    double youden = params.sensitivity + params.specificity - 1.0;
    if (youden <= 0.0) {
        throw ConfigError("prevalence correction needs sensitivity + specificity > 1");
    }
    return std::clamp((apparent_positivity + params.specificity - 1.0) / youden, 0.0, 1.0);
}

std::vector<double> smooth(std::span<const double> series, int window)
{
    if (window < 1) {
        throw ContractViolation("smoothing window must be >= 1");
    }
    std::vector<double> out(series.size());
    double sum = 0.0;
    for (std::size_t d = 0; d < series.size(); ++d) {
        sum += series[d];
        if (d >= static_cast<std::size_t>(window)) {
            sum -= series[d - static_cast<std::size_t>(window)];
        }
        auto n = std::min(d + 1, static_cast<std::size_t>(window));
        out[d] = sum / static_cast<double>(n);
    }
    return out;
}

EstimateTracker::EstimateTracker(int population, TestParams params, int window)
    : m_population(population)
    , m_params(params)
    , m_window(window)
{
    if (window < 1) {
        throw ContractViolation("estimation window must be >= 1");
    }
}

void EstimateTracker::set_params(const TestParams& params)
{
    m_params = params;
}

EstimatePoint EstimateTracker::push(const DailyRecord& record)
{
    m_recent.push_back(record);
    if (m_recent.size() > static_cast<std::size_t>(m_window)) {
        m_recent.erase(m_recent.begin());
    }

    EstimatePoint p;
    p.day           = record.day;
    p.true_infected = record.infected();
    for (const auto& r : m_recent) {
        p.window_tests += r.tests_done;
        p.window_positives += r.positives;
    }

    if (p.window_tests == 0) {
        p.est_proportional = m_last.est_proportional;
        p.est_predictive   = m_last.est_predictive;
        p.ppv              = m_last.ppv;
        p.npv              = m_last.npv;
    }
    else {
        double positivity  = static_cast<double>(p.window_positives) / p.window_tests;
        double prevalence  = corrected_prevalence(positivity, m_params);
        p.est_proportional = proportional_estimate(p.window_positives, p.window_tests, m_population);
        p.est_predictive   = m_population * prevalence;
        p.ppv              = ppv(m_params.sensitivity, m_params.specificity, prevalence);
        p.npv              = npv(m_params.sensitivity, m_params.specificity, prevalence);
    }
    m_last = p;
    return p;
}

EstimateSeries build_estimates(std::span<const DailyRecord> history, int population, const TestParams& params,
                               int window)
{
    EstimateTracker tracker(population, params, window);
    EstimateSeries series;
    series.reserve(history.size());
    for (const auto& r : history) {
        series.push_back(tracker.push(r));
    }
    return series;
}

EstimateSeries build_estimates(const SimState& state, int window)
{
    return build_estimates(state.history, state.population(), state.screening.params, window);
}

double curve_error(std::span<const double> est, std::span<const int> truth)
{
    if (est.size() != truth.size()) {
        throw ContractViolation("curve_error: series lengths differ");
    }
    if (est.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        sum += std::abs(est[i] - truth[i]);
    }
    return sum / static_cast<double>(est.size());
}

std::vector<std::size_t> peak_window(std::span<const int> truth, double fraction)
{
    std::vector<std::size_t> days;
    if (truth.empty()) {
        return days;
    }
    int peak = *std::max_element(truth.begin(), truth.end());
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (truth[i] >= fraction * peak) {
            days.push_back(i);
        }
    }
    return days;
}

double peak_window_error(std::span<const double> est, std::span<const int> truth)
{
    if (est.size() != truth.size()) {
        throw ContractViolation("peak_window_error: series lengths differ");
    }
    auto days = peak_window(truth);
    if (days.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (auto d : days) {
        sum += std::abs(est[d] - truth[d]);
    }
    return sum / static_cast<double>(days.size());
}

double peak_window_bias(std::span<const double> est, std::span<const int> truth)
{
    if (est.size() != truth.size()) {
        throw ContractViolation("peak_window_bias: series lengths differ");
    }
    auto days = peak_window(truth);
    if (days.empty()) {
        return 0.0;
    }
    double sum = 0.0;
    for (auto d : days) {
        sum += est[d] - truth[d];
    }
    return sum / static_cast<double>(days.size());
}

} // namespace episim
