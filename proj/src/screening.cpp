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
#include "episim/screening.h"

#include <algorithm>

namespace episim
{

bool campaign_active(SimState& state)
{
    if (!state.screening.enabled) {
        return false;
    }
    if (!state.screening_active) {
        auto c       = state.census();
        double share = static_cast<double>(c[static_cast<std::size_t>(EpiState::Symptomatic)]) / state.population();
        if (share >= state.screening.trigger_symptomatic_share) {
            state.screening_active = true;
        }
    }
    return state.screening_active;
}

bool eligible_for_test(const Agent& agent, const ScreeningConfig& cfg, int day)
{
    if (agent.quarantined()) {
        return false;
    }
    return !agent.last_tested_day || day - *agent.last_tested_day >= cfg.retest_cooldown_days;
}

namespace
{

bool matches_target(const Agent& agent, ScreeningTarget target)
{
    switch (target) {
    case ScreeningTarget::Random:
        return true;
    case ScreeningTarget::Symptomatic:
        return agent.state == EpiState::Symptomatic;
    case ScreeningTarget::Elderly:
        return agent.age >= 65;
    case ScreeningTarget::Workers:
        return agent.works_outside;
    }
    return false;
}

} // namespace

std::vector<int> select_test_targets(const SimState& state, const ScreeningConfig& cfg, int day, Rng& rng)
{
    std::vector<int> pool;
    for (const auto& a : state.agents) {
        if (eligible_for_test(a, cfg, day) && matches_target(a, cfg.target)) {
            pool.push_back(a.id);
        }
    }
    const auto n = static_cast<std::size_t>(std::max(cfg.daily_tests, 0));
    if (pool.size() <= n) {
        return pool;
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto j = rng.uniform_int<std::size_t>(i, pool.size() - 1);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(n);
    return pool;
}

TestResult administer_test(Agent& agent, const ScreeningConfig& cfg, int day, Rng& rng)
{
    TestResult result;
    result.agent_id = agent.id;
    result.day      = day;
    result.infected = agent.infectious();
    result.positive = result.infected ? rng.bernoulli(cfg.params.sensitivity)
                                      : rng.bernoulli(1.0 - cfg.params.specificity);
    agent.last_tested_day = day;
    if (result.positive) {
        if (result.infected) {
            agent.quarantine_days_left = kUntilRecovery;
        }
        else {
            agent.quarantine_days_left = std::max(agent.quarantine_days_left, cfg.false_positive_quarantine_days);
        }
    }
    return result;
}

void screening_phase(SimState& state, int day, DailyRecord& record)
{
    if (!campaign_active(state)) {
        return;
    }
    for (int id : select_test_targets(state, state.screening, day, state.rng)) {
        auto result = administer_test(state.agents[static_cast<std::size_t>(id)], state.screening, day, state.rng);
        ++record.tests_done;
        record.positives += result.positive ? 1 : 0;
        state.test_log.push_back(result);
    }
}

} // namespace episim
