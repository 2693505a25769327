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
#include "episim/config.h"

#include <cmath>

namespace episim
{

namespace
{

void require(bool condition, const std::string& message)
{
    if (!condition) {
        throw ConfigError(message);
    }
}

bool is_probability(double p)
{
    return p >= 0.0 && p <= 1.0;
}

} // namespace

void PopulationConfig::validate() const
{
    require(size >= 1, "population size must be >= 1");
    require(!age_distribution.empty(), "age distribution must not be empty");
    double total = 0.0;
    for (const auto& band : age_distribution) {
        require(band.min_age >= 0 && band.max_age <= 100 && band.min_age <= band.max_age,
                "age bands must lie in [0, 100]");
        require(band.share >= 0.0, "age band shares must be >= 0");
        total += band.share;
    }
    require(std::abs(total - 1.0) <= 1e-9, "age band shares must sum to 1");
    require(is_probability(worker_share_20_65), "worker share must be in [0, 1]");
    require(risk.noise_max >= 0.0 && risk.age_slope >= 0.0, "risk coefficients must be >= 0");
    require(contacts.base_min <= contacts.base_max, "contacts base range is empty");
    require(contacts.youth_max >= 0.0 && contacts.risk_max >= 0.0 && contacts.worker_bonus >= 0,
            "contact coefficients must be >= 0");
}

void DiseaseConfig::validate() const
{
    require(is_probability(p_transmission), "p_transmission must be in [0, 1]");
    require(incubation_mean_days >= 1.0, "incubation mean must be >= 1 day");
    require(incubation_max_days >= 1, "incubation max must be >= 1 day");
    require(illness_spread_days >= 0 && illness_mean_days - illness_spread_days >= 1,
            "illness durations must be >= 1 day");
    require(is_probability(asymptomatic_share_under_65), "asymptomatic share must be in [0, 1]");
    require(serious_duration_factor >= 1.0, "serious duration factor must be >= 1");
    require(recovery_immunity_days >= 1, "recovery immunity must be >= 1 day");
}

void TestParams::validate() const
{
    require(is_probability(sensitivity), "sensitivity must be in [0, 1]");
    require(is_probability(specificity), "specificity must be in [0, 1]");
}

void ScreeningConfig::validate() const
{
    require(daily_tests >= 0, "daily tests must be >= 0");
    require(is_probability(trigger_symptomatic_share), "screening trigger must be in [0, 1]");
    require(retest_cooldown_days >= 0, "retest cooldown must be >= 0");
    require(false_positive_quarantine_days >= 0, "false positive quarantine must be >= 0");
    params.validate();
}

void VaccinationConfig::validate() const
{
    require(is_probability(trigger_infected_share), "vaccination trigger must be in [0, 1]");
    require(daily_doses >= 0, "daily doses must be >= 0");
    require(is_probability(efficiency), "vaccine efficiency must be in [0, 1]");
    require(vaccine_immunity_days >= 1, "vaccine immunity must be >= 1 day");
}

void SimConfig::validate() const
{
    population.validate();
    disease.validate();
    screening.validate();
    vaccination.validate();
    require(initial_infected >= 0, "initial infected must be >= 0");
    require(max_days >= 1, "max days must be >= 1");
}

std::string to_string(ScreeningTarget target)
{
    switch (target) {
    case ScreeningTarget::Random:
        return "random";
    case ScreeningTarget::Symptomatic:
        return "symptomatic";
    case ScreeningTarget::Elderly:
        return "elderly";
    case ScreeningTarget::Workers:
        return "workers";
    }
    return "random";
}

std::string to_string(VaccinationStrategy strategy)
{
    switch (strategy) {
    case VaccinationStrategy::Random:
        return "random";
    case VaccinationStrategy::RiskFirst:
        return "risk_first";
    case VaccinationStrategy::ContactsFirst:
        return "contacts_first";
    }
    return "random";
}

ScreeningTarget parse_screening_target(const std::string& name)
{
    if (name == "random") {
        return ScreeningTarget::Random;
    }
    if (name == "symptomatic") {
        return ScreeningTarget::Symptomatic;
    }
    if (name == "elderly") {
        return ScreeningTarget::Elderly;
    }
    if (name == "workers") {
        return ScreeningTarget::Workers;
    }
    throw ConfigError("unknown screening target '" + name + "'");
}

VaccinationStrategy parse_vaccination_strategy(const std::string& name)
{
    if (name == "random") {
        return VaccinationStrategy::Random;
    }
    if (name == "risk_first" || name == "risk") {
        return VaccinationStrategy::RiskFirst;
    }
    if (name == "contacts_first" || name == "contacts") {
        return VaccinationStrategy::ContactsFirst;
    }
    throw ConfigError("unknown vaccination strategy '" + name + "'");
}

} // namespace episim
