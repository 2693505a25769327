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
#include "episim/population.h"

#include <algorithm>
#include <cmath>

namespace episim
{

std::string_view to_string(EpiState s)
{
    switch (s) {
    case EpiState::Susceptible:
        return "susceptible";
    case EpiState::Incubating:
        return "incubating";
    case EpiState::Asymptomatic:
        return "asymptomatic";
    case EpiState::Symptomatic:
        return "symptomatic";
    case EpiState::Recovered:
        return "recovered";
    }
    return "susceptible";
}

double risk_factor_from_draw(int age, double u, const RiskModel& model)
{
    return std::clamp(model.age_slope * (age / 100.0) + u, 0.0, 1.0);
}

double assign_risk_factor(int age, Rng& rng, const RiskModel& model)
{
    return risk_factor_from_draw(age, rng.uniform(0.0, model.noise_max), model);
}

int daily_contacts_from_draws(int age, double risk, double u1, double u2, double u3, const ContactModel&)
{
    double raw = u1 + (1.0 - age / 100.0) * u2 - risk * u3;
    return std::max(1, static_cast<int>(std::lround(raw)));
}

int assign_daily_contacts(int age, double risk, Rng& rng, const ContactModel& model)
{
    double u1 = rng.uniform(model.base_min, model.base_max);
    double u2 = rng.uniform(0.0, model.youth_max);
    double u3 = rng.uniform(0.0, model.risk_max);
    return daily_contacts_from_draws(age, risk, u1, u2, u3, model);
}

int sample_age(const PopulationConfig& cfg, Rng& rng)
{
    double u   = rng.uniform();
    double acc = 0.0;
    for (const auto& band : cfg.age_distribution) {
        acc += band.share;
        if (u < acc) {
            return rng.uniform_int(band.min_age, band.max_age);
        }
    }
    // Rounding left u above the last cumulative share.
    const auto& last = cfg.age_distribution.back();
    return rng.uniform_int(last.min_age, last.max_age);
}

std::vector<Agent> init_population(const PopulationConfig& cfg, Rng& rng)
{
    cfg.validate();
    std::vector<Agent> agents(static_cast<std::size_t>(cfg.size));
    for (int i = 0; i < cfg.size; ++i) {
        auto& a = agents[static_cast<std::size_t>(i)];
        a.id    = i;
        a.age   = sample_age(cfg, rng);
        a.works_outside  = can_work_outside(a.age) && rng.bernoulli(cfg.worker_share_20_65);
        a.risk_factor    = assign_risk_factor(a.age, rng, cfg.risk);
        a.daily_contacts = assign_daily_contacts(a.age, a.risk_factor, rng, cfg.contacts);
        if (a.works_outside) {
            a.daily_contacts += cfg.contacts.worker_bonus;
        }
    }
    return agents;
}

} // namespace episim
