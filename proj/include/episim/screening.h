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
#ifndef EPISIM_SCREENING_H
#define EPISIM_SCREENING_H

#include "episim/agent.h"
#include "episim/config.h"
#include "episim/rng.h"
#include "episim/sim_state.h"

#include <vector>

namespace episim
{

/// Latches state.screening_active once the symptomatic share reaches the trigger.
bool campaign_active(SimState& state);

/// True if the agent may be tested on `day`: not quarantined and outside the retest cooldown.
bool eligible_for_test(const Agent& agent, const ScreeningConfig& cfg, int day);

/**
 * @brief Up to cfg.daily_tests eligible agents matching the target filter, sampled uniformly.
 *
 * A filtered pool smaller than daily_tests is returned whole; there is no spillover
 * into other groups.
 */
std::vector<int> select_test_targets(const SimState& state, const ScreeningConfig& cfg, int day, Rng& rng);

/**
 * @brief Test one agent and quarantine it on a positive outcome.
 *
 * Infected positives are isolated until recovery, false positives for
 * cfg.false_positive_quarantine_days.
 */
TestResult administer_test(Agent& agent, const ScreeningConfig& cfg, int day, Rng& rng);

/// Screening phase of one day. Fills tests_done and positives of the record.
void screening_phase(SimState& state, int day, DailyRecord& record);

} // namespace episim

#endif // EPISIM_SCREENING_H
