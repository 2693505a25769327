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
#ifndef EPISIM_SIM_STATE_H
#define EPISIM_SIM_STATE_H

#include "episim/agent.h"
#include "episim/config.h"
#include "episim/rng.h"

#include <vector>

namespace episim
{

/// Aggregates of one simulated day. Census is taken at the end of the day.
struct DailyRecord {
    int day = 0;
    Census census{};
    int new_infections  = 0;
    int new_serious     = 0;
    int tests_done      = 0;
    int positives       = 0;
    int doses_given     = 0;
    int in_quarantine   = 0;
    bool lockdown_active = false;

    int infected() const
    {
        return census[1] + census[2] + census[3];
    }

    friend bool operator==(const DailyRecord&, const DailyRecord&) = default;
};

/// Outcome of one administered test. `infected` is ground truth, for scoring only.
struct TestResult {
    int agent_id  = 0;
    int day       = 0;
    bool positive = false;
    bool infected = false;

    friend bool operator==(const TestResult&, const TestResult&) = default;
};

/**
 * @brief Complete mutable state of one simulation.
 *
 * history.size() == day at all times. Mutated by one logical thread; may be
 * moved between threads between steps.
 */
struct SimState {
    int day = 0;
    std::vector<Agent> agents;
    bool lockdown = false;
    std::vector<DailyRecord> history;
    std::vector<TestResult> test_log;
    Rng rng;
    DiseaseConfig disease;
    ScreeningConfig screening;
    VaccinationConfig vaccination;
    bool screening_active   = false;
    bool vaccination_active = false;

    int population() const
    {
        return static_cast<int>(agents.size());
    }
    Census census() const;
    int infected_count() const;
};

} // namespace episim

#endif // EPISIM_SIM_STATE_H
