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
#ifndef EPISIM_VACCINATION_H
#define EPISIM_VACCINATION_H

#include "episim/agent.h"
#include "episim/config.h"
#include "episim/rng.h"
#include "episim/sim_state.h"

#include <vector>

namespace episim
{

/// Latches state.vaccination_active once the infected share reaches the trigger.
bool vaccination_active(SimState& state);

/// Susceptible, unvaccinated and without running immunity.
bool is_vaccine_eligible(const Agent& agent);

std::vector<int> eligible_candidates(const SimState& state);

/**
 * Pick n of the candidate ids. RiskFirst and ContactsFirst take the top n by
 * descending attribute with ties broken uniformly at random; Random takes a
 * uniform n-subset.
 */
std::vector<int> prioritize(const std::vector<Agent>& agents, std::vector<int> candidates,
                            VaccinationStrategy strategy, int n, Rng& rng);

/// @throws ContractViolation if the agent is not eligible.
void vaccinate(Agent& agent, const VaccinationConfig& cfg);

/// Decide the severity of a fresh symptomatic episode; sets agent.serious.
bool maybe_serious_form(Agent& agent, double efficiency, Rng& rng);

/// Vaccination phase of one day. Returns the ids vaccinated, in selection order.
std::vector<int> vaccination_phase(SimState& state);

} // namespace episim

#endif // EPISIM_VACCINATION_H
