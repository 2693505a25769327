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
#include "episim/vaccination.h"

#include <algorithm>

namespace episim
{

bool vaccination_active(SimState& state)
{
    if (!state.vaccination.enabled) {
        return false;
    }
    if (!state.vaccination_active) {
        double share = static_cast<double>(state.infected_count()) / state.population();
        if (share >= state.vaccination.trigger_infected_share) {
            state.vaccination_active = true;
        }
    }
    return state.vaccination_active;
}

bool is_vaccine_eligible(const Agent& agent)
{
    return agent.state == EpiState::Susceptible && !agent.vaccinated && agent.immunity_days_left == 0;
}

std::vector<int> eligible_candidates(const SimState& state)
{
    std::vector<int> ids;
    for (const auto& a : state.agents) {
        if (is_vaccine_eligible(a)) {
            ids.push_back(a.id);
        }
    }
    return ids;
}

std::vector<int> prioritize(const std::vector<Agent>& agents, std::vector<int> candidates,
                            VaccinationStrategy strategy, int n, Rng& rng)
{
    if (n <= 0 || candidates.empty()) {
        return {};
    }
    const auto count = std::min(candidates.size(), static_cast<std::size_t>(n));

    // A uniform shuffle followed by a stable sort breaks ties uniformly.
    rng.shuffle(std::span<int>(candidates));
    auto key = [&](int id) -> const Agent& {
        return agents[static_cast<std::size_t>(id)];
    };
    switch (strategy) {
    case VaccinationStrategy::Random:
        break;
    case VaccinationStrategy::RiskFirst:
        std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            return key(a).risk_factor > key(b).risk_factor;
        });
        break;
    case VaccinationStrategy::ContactsFirst:
        std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            return key(a).daily_contacts > key(b).daily_contacts;
        });
        break;
    }
    candidates.resize(count);
    return candidates;
}

void vaccinate(Agent& agent, const VaccinationConfig& cfg)
{
    if (!is_vaccine_eligible(agent)) {
        throw ContractViolation("agent " + std::to_string(agent.id) + " is not eligible for vaccination");
    }
    agent.vaccinated         = true;
    agent.immunity_days_left = cfg.vaccine_immunity_days;
    agent.doses_received += 1;
}

bool maybe_serious_form(Agent& agent, double efficiency, Rng& rng)
{
    double p = agent.risk_factor;
    if (agent.vaccinated) {
        p *= 1.0 - efficiency;
    }
    agent.serious = rng.bernoulli(p);
    return agent.serious;
}

std::vector<int> vaccination_phase(SimState& state)
{
    if (!vaccination_active(state) || state.vaccination.daily_doses <= 0) {
        return {};
    }
    auto chosen = prioritize(state.agents, eligible_candidates(state), state.vaccination.strategy,
                             state.vaccination.daily_doses, state.rng);
    for (int id : chosen) {
        vaccinate(state.agents[static_cast<std::size_t>(id)], state.vaccination);
    }
    return chosen;
}

} // namespace episim
