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
#ifndef EPISIM_AGENT_H
#define EPISIM_AGENT_H

#include "episim/config.h"

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace episim
{

enum class EpiState : std::uint8_t
{
    Susceptible,
    Incubating,
    Asymptomatic,
    Symptomatic,
    Recovered,
};

inline constexpr std::size_t kNumStates = 5;

/// Per-state head counts, indexed by EpiState.
using Census = std::array<int, kNumStates>;

inline constexpr bool is_infectious(EpiState s)
{
    return s == EpiState::Incubating || s == EpiState::Asymptomatic || s == EpiState::Symptomatic;
}

std::string_view to_string(EpiState s);

/// Quarantine sentinel for agents isolated after a true positive test; cleared on recovery.
inline constexpr int kUntilRecovery = kForever;

/**
 * @brief One individual of the simulated population.
 *
 * immunity_days_left holds whatever protection is currently running: the vaccine
 * countdown while a vaccinated agent is Susceptible, the post-recovery countdown
 * while Recovered. kForever never counts down.
 */
struct Agent {
    int id            = 0;
    int age           = 0;
    EpiState state    = EpiState::Susceptible;
    int days_in_state = 0;
    int state_duration = 1;
    bool works_outside = false;
    double risk_factor = 0.0;
    int daily_contacts = 1;
    bool serious       = false;
    bool vaccinated    = false;
    int immunity_days_left   = 0;
    int quarantine_days_left = 0;
    std::optional<int> last_tested_day;
    int times_sick     = 0;
    int doses_received = 0;
    int serious_episodes = 0;
    std::optional<int> first_infection_day;

    bool quarantined() const
    {
        return quarantine_days_left > 0;
    }
    bool infectious() const
    {
        return is_infectious(state);
    }

    friend bool operator==(const Agent&, const Agent&) = default;
};

} // namespace episim

#endif // EPISIM_AGENT_H
