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
#ifndef EPISIM_CONFIG_H
#define EPISIM_CONFIG_H

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace episim
{

/// Sentinel for immunity that never wanes.
inline constexpr int kForever = std::numeric_limits<int>::max();

/// Raised for invalid parameterizations. The CLI maps it to a nonzero exit code.
class ConfigError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an operation is called outside its precondition.
class ContractViolation : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

struct AgeBand {
    int min_age   = 0;
    int max_age   = 100; // inclusive
    double share  = 1.0;
};

/// Coefficients of risk = clamp(age_slope * age / 100 + U(0, noise_max), 0, 1).
struct RiskModel {
    double age_slope = 0.7;
    double noise_max = 0.3;
};

/// Coefficients of contacts = max(1, round(U(base_min, base_max) + (1 - age/100) U(0, youth_max) - risk U(0, risk_max))).
struct ContactModel {
    double base_min  = 1.0;
    double base_max  = 6.0;
    double youth_max = 10.0;
    double risk_max  = 4.0;
    int worker_bonus = 4;
};

struct PopulationConfig {
    int size = 2000;
    std::vector<AgeBand> age_distribution{{0, 19, 0.24}, {20, 64, 0.56}, {65, 100, 0.20}};
    double worker_share_20_65 = 0.5;
    RiskModel risk;
    ContactModel contacts;

    void validate() const;
};

struct DiseaseConfig {
    double p_transmission             = 0.015;
    double incubation_mean_days       = 6.0;
    int incubation_max_days           = 20;
    int illness_mean_days             = 21;
    int illness_spread_days           = 7; // illness ~ U{mean - spread, mean + spread}
    double asymptomatic_share_under_65 = 0.3;
    double serious_duration_factor    = 1.5;
    int recovery_immunity_days        = kForever;

    void validate() const;
};

struct TestParams {
    double sensitivity = 0.9;
    double specificity = 0.9;

    void validate() const;
};

enum class ScreeningTarget
{
    Random,
    Symptomatic,
    Elderly,
    Workers,
};

struct ScreeningConfig {
    bool enabled                     = false;
    int daily_tests                  = 3;
    double trigger_symptomatic_share = 0.0;
    ScreeningTarget target           = ScreeningTarget::Random;
    int retest_cooldown_days         = 7;
    int false_positive_quarantine_days = 14;
    TestParams params;

    void validate() const;
};

enum class VaccinationStrategy
{
    Random,
    RiskFirst,
    ContactsFirst,
};

struct VaccinationConfig {
    bool enabled                  = false;
    double trigger_infected_share = 0.0;
    int daily_doses               = 30;
    VaccinationStrategy strategy  = VaccinationStrategy::RiskFirst;
    double efficiency             = 0.9;
    int vaccine_immunity_days     = kForever;

    void validate() const;
};

/// Full parameterization of one run.
struct SimConfig {
    PopulationConfig population;
    DiseaseConfig disease;
    ScreeningConfig screening;
    VaccinationConfig vaccination;
    int initial_infected = 1;
    int max_days         = 1000;
    std::uint64_t seed   = 0;

    void validate() const;
};

std::string to_string(ScreeningTarget target);
std::string to_string(VaccinationStrategy strategy);
ScreeningTarget parse_screening_target(const std::string& name);
VaccinationStrategy parse_vaccination_strategy(const std::string& name);

} // namespace episim

#endif // EPISIM_CONFIG_H
