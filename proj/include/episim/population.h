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
#ifndef EPISIM_POPULATION_H
#define EPISIM_POPULATION_H

#include "episim/agent.h"
#include "episim/config.h"
#include "episim/rng.h"

#include <vector>

namespace episim
{

/**
 * @brief Create cfg.size Susceptible agents, initialized in index order.
 *
 * Per agent the draws are: age, worker status (only for ages 20..65),
 * risk factor, daily contacts. Workers get ContactModel::worker_bonus extra contacts.
 * @throws ConfigError if cfg is invalid.
 */
std::vector<Agent> init_population(const PopulationConfig& cfg, Rng& rng);

/// Deterministic part of the risk formula for a given uniform draw u in [0, noise_max].
double risk_factor_from_draw(int age, double u, const RiskModel& model = {});

double assign_risk_factor(int age, Rng& rng, const RiskModel& model = {});

/// Deterministic part of the contacts formula for given draws.
int daily_contacts_from_draws(int age, double risk, double u1, double u2, double u3, const ContactModel& model = {});

/// Base contacts, without the worker bonus.
int assign_daily_contacts(int age, double risk, Rng& rng, const ContactModel& model = {});

int sample_age(const PopulationConfig& cfg, Rng& rng);

inline bool can_work_outside(int age)
{
    return age >= 20 && age <= 65;
}

} // namespace episim

#endif // EPISIM_POPULATION_H
