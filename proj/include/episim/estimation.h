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
#ifndef EPISIM_ESTIMATION_H
#define EPISIM_ESTIMATION_H

#include "episim/config.h"
#include "episim/sim_state.h"

#include <cstdint>
#include <span>
#include <vector>

namespace episim
{

/**
 * @brief Cross-multiplication estimate population * positives / tests.
 *
 * Returns 0 when no test was done.
 * @throws ContractViolation if positives > tests or a count is negative.
 */
double proportional_estimate(std::int64_t positives, std::int64_t tests, std::int64_t population);

/// Positive predictive value. Defined as 0 when the denominator vanishes.
double ppv(double sensi, double specif, double preval);

/// Negative predictive value. Defined as 1 when the denominator vanishes.
double npv(double sensi, double specif, double preval);

/**
 * @brief Invert the expected positivity sensi * p + (1 - specif) * (1 - p) for p.
 *
 * Result is clamped to [0, 1].
 * @throws ConfigError if sensitivity + specificity <= 1.
 */
double corrected_prevalence(double apparent_positivity, const TestParams& params);

/// Trailing moving average. Days before window - 1 average over the available prefix.
std::vector<double> smooth(std::span<const double> series, int window = 7);

struct EstimatePoint {
    int day             = 0;
    int true_infected   = 0;
    double est_proportional = 0.0;
    double est_predictive   = 0.0;
    int window_tests     = 0;
    int window_positives = 0;
    /// Predictive values of the test at the estimated prevalence; reporting only.
    double ppv = 0.0;
    double npv = 1.0;

    friend bool operator==(const EstimatePoint&, const EstimatePoint&) = default;
};

using EstimateSeries = std::vector<EstimatePoint>;

/**
 * @brief Incremental estimator fed one DailyRecord at a time.
 *
 * Pools tests and positives over the trailing window; a window without tests
 * carries the previous estimates forward.
 */
class EstimateTracker
{
public:
    EstimateTracker(int population, TestParams params, int window = 7);

    EstimatePoint push(const DailyRecord& record);

    const EstimatePoint& last() const
    {
        return m_last;
    }

    void set_params(const TestParams& params);

private:
    int m_population;
    TestParams m_params;
    int m_window;
    std::vector<DailyRecord> m_recent;
    EstimatePoint m_last;
};

EstimateSeries build_estimates(std::span<const DailyRecord> history, int population, const TestParams& params,
                               int window = 7);

EstimateSeries build_estimates(const SimState& state, int window = 7);

/// Mean absolute error.
/// @throws ContractViolation on length mismatch.
double curve_error(std::span<const double> est, std::span<const int> truth);

/// Mean absolute error restricted to days where truth >= 50% of its maximum.
double peak_window_error(std::span<const double> est, std::span<const int> truth);

/// Mean of (est - truth) over the same peak window.
double peak_window_bias(std::span<const double> est, std::span<const int> truth);

/// Indices of the days where truth >= fraction * max(truth).
std::vector<std::size_t> peak_window(std::span<const int> truth, double fraction = 0.5);

} // namespace episim

#endif // EPISIM_ESTIMATION_H
