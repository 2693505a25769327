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
#ifndef EPISIM_DYNAMICS_H
#define EPISIM_DYNAMICS_H

#include "episim/agent.h"
#include "episim/config.h"
#include "episim/rng.h"
#include "episim/sim_state.h"

#include <vector>

namespace episim
{

/**
 * @brief Initial state of a run: population from cfg.population, then
 * cfg.initial_infected index cases, all drawn from one generator seeded with cfg.seed.
 * @throws ConfigError if cfg is invalid.
 */
SimState make_state(const SimConfig& cfg);

/**
 * @brief Advance one day.
 *
 * Phases, in this order: contacts and transmission, screening, vaccination,
 * state progression (with waning and quarantine countdown). The returned record
 * is also appended to state.history and state.day is incremented.
 */
DailyRecord step(SimState& state);

/// True while at least one agent is Incubating, Asymptomatic or Symptomatic.
bool has_infectious(const SimState& state);

/**
 * @brief Degree-weighted partner sampler over the non-quarantined agents of one day.
 *
 * Each candidate is drawn with probability proportional to its own daily_contacts.
 */
class ContactPool
{
public:
    explicit ContactPool(const std::vector<Agent>& agents);

    /// agent.daily_contacts distinct partners (fewer if the pool is smaller), never the agent itself.
    std::vector<int> sample(const Agent& agent, Rng& rng) const;

    std::size_t size() const
    {
        return m_ids.size();
    }

private:
    int draw_index(Rng& rng) const;
    std::vector<int> sample_exact(int self_index, int count, Rng& rng) const;

    std::vector<int> m_ids;
    std::vector<double> m_cumulative;
    std::vector<int> m_index_of; // agent id -> index in m_ids, -1 if excluded
};

std::vector<int> sample_contacts(const Agent& agent, const SimState& state, Rng& rng);

/**
 * @brief One contact between an infectious source and a susceptible target.
 *
 * Succeeds with p_transmission, reduced by vacc_efficiency for each vaccinated side.
 * On success target becomes Incubating with a fresh incubation period.
 * Returns false without touching rng or target if the pair is not source-infectious/target-susceptible.
 */
bool try_transmit(const Agent& source, Agent& target, const DiseaseConfig& disease, double vacc_efficiency,
                  Rng& rng);

/// Incubation ~ geometric(1 / mean) on {1, 2, ...}, capped at incubation_max_days.
int sample_incubation_days(const DiseaseConfig& disease, Rng& rng);

/// Illness ~ U{mean - spread, mean + spread}; serious episodes scaled by serious_duration_factor.
int sample_illness_days(const DiseaseConfig& disease, bool serious, Rng& rng);

enum class Transition
{
    None,
    BecameAsymptomatic,
    BecameSymptomatic,
    Recovered,
    ImmunityWaned,
};

/**
 * @brief Advance one agent's clock by a day and apply at most one transition.
 *
 * Also counts down a finite vaccine protection on Susceptible agents unless
 * keep_vaccine_clock is set (the injection day itself).
 */
Transition progress_state(Agent& agent, const DiseaseConfig& disease, double vacc_efficiency, Rng& rng,
                          bool keep_vaccine_clock = false);

/// Turn up to n uniformly chosen Susceptible agents into Incubating ones. Returns how many.
int introduce_infected(SimState& state, int n);

void set_lockdown(SimState& state, bool on);

} // namespace episim

#endif // EPISIM_DYNAMICS_H
