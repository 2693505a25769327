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
#include "episim/dynamics.h"
#include "episim/population.h"
#include "episim/screening.h"
#include "episim/vaccination.h"

#include <algorithm>
#include <cmath>

namespace episim
{

Census SimState::census() const
{
    Census c{};
    for (const auto& a : agents) {
        ++c[static_cast<std::size_t>(a.state)];
    }
    return c;
}

int SimState::infected_count() const
{
    return static_cast<int>(std::count_if(agents.begin(), agents.end(), [](const Agent& a) {
        return a.infectious();
    }));
}

SimState make_state(const SimConfig& cfg)
{
    cfg.validate();
    SimState state;
    state.rng         = Rng(cfg.seed);
    state.disease     = cfg.disease;
    state.screening   = cfg.screening;
    state.vaccination = cfg.vaccination;
    state.agents      = init_population(cfg.population, state.rng);
    introduce_infected(state, cfg.initial_infected);
    return state;
}

bool has_infectious(const SimState& state)
{
    return std::any_of(state.agents.begin(), state.agents.end(), [](const Agent& a) {
        return a.infectious();
    });
}

ContactPool::ContactPool(const std::vector<Agent>& agents)
    : m_index_of(agents.size(), -1)
{
    double total = 0.0;
    for (const auto& a : agents) {
        if (a.quarantined()) {
            continue;
        }
        m_index_of[static_cast<std::size_t>(a.id)] = static_cast<int>(m_ids.size());
        m_ids.push_back(a.id);
        total += a.daily_contacts;
        m_cumulative.push_back(total);
    }
}

int ContactPool::draw_index(Rng& rng) const
{
    double u = rng.uniform(0.0, m_cumulative.back());
    auto it  = std::upper_bound(m_cumulative.begin(), m_cumulative.end(), u);
    if (it == m_cumulative.end()) {
        --it;
    }
    return static_cast<int>(it - m_cumulative.begin());
}

std::vector<int> ContactPool::sample_exact(int self_index, int count, Rng& rng) const
{
    // Successive weighted draws without replacement, linear in the pool size per draw.
    std::vector<double> weights(m_ids.size());
    weights[0] = m_cumulative[0];
    for (std::size_t i = 1; i < m_ids.size(); ++i) {
        weights[i] = m_cumulative[i] - m_cumulative[i - 1];
    }
    if (self_index >= 0) {
        weights[static_cast<std::size_t>(self_index)] = 0.0;
    }
    std::vector<int> chosen;
    for (int k = 0; k < count; ++k) {
        double total = 0.0;
        for (double w : weights) {
            total += w;
        }
        if (total <= 0.0) {
            break;
        }
        double u      = rng.uniform(0.0, total);
        double acc    = 0.0;
        std::size_t i = 0;
        std::size_t last_positive = 0;
        for (; i < weights.size(); ++i) {
            if (weights[i] > 0.0) {
                last_positive = i;
                acc += weights[i];
                if (u < acc) {
                    break;
                }
            }
        }
        if (i == weights.size()) {
            i = last_positive;
        }
        chosen.push_back(m_ids[i]);
        weights[i] = 0.0;
    }
    return chosen;
}

std::vector<int> ContactPool::sample(const Agent& agent, Rng& rng) const
{
    int self_index = agent.id >= 0 && static_cast<std::size_t>(agent.id) < m_index_of.size()
                         ? m_index_of[static_cast<std::size_t>(agent.id)]
                         : -1;
    int available  = static_cast<int>(m_ids.size()) - (self_index >= 0 ? 1 : 0);
    int want       = agent.daily_contacts;
    if (available <= 0 || want <= 0) {
        return {};
    }
    if (want >= available) {
        std::vector<int> all;
        all.reserve(static_cast<std::size_t>(available));
        for (int id : m_ids) {
            if (id != agent.id) {
                all.push_back(id);
            }
        }
        return all;
    }

    std::vector<int> chosen;
    chosen.reserve(static_cast<std::size_t>(want));
    const int max_attempts = 64 * want + 64;
    int attempts           = 0;
    while (static_cast<int>(chosen.size()) < want && attempts < max_attempts) {
        ++attempts;
        int idx = draw_index(rng);
        int id  = m_ids[static_cast<std::size_t>(idx)];
        if (id == agent.id || std::find(chosen.begin(), chosen.end(), id) != chosen.end()) {
            continue;
        }
        chosen.push_back(id);
    }
    if (static_cast<int>(chosen.size()) < want) {
        // A few heavy candidates dominate the weights; finish exactly.
        return sample_exact(self_index, want, rng);
    }
    return chosen;
}

std::vector<int> sample_contacts(const Agent& agent, const SimState& state, Rng& rng)
{
    if (agent.quarantined() || state.lockdown) {
        return {};
    }
    return ContactPool(state.agents).sample(agent, rng);
}

int sample_incubation_days(const DiseaseConfig& disease, Rng& rng)
{
    int days = disease.incubation_mean_days <= 1.0 ? 1 : rng.geometric_trials(1.0 / disease.incubation_mean_days);
    return std::min(days, disease.incubation_max_days);
}

int sample_illness_days(const DiseaseConfig& disease, bool serious, Rng& rng)
{
    int days = rng.uniform_int(disease.illness_mean_days - disease.illness_spread_days,
                               disease.illness_mean_days + disease.illness_spread_days);
    if (serious) {
        days = static_cast<int>(std::lround(days * disease.serious_duration_factor));
    }
    return std::max(days, 1);
}

bool try_transmit(const Agent& source, Agent& target, const DiseaseConfig& disease, double vacc_efficiency, Rng& rng)
{
    if (!source.infectious() || target.state != EpiState::Susceptible) {
        return false;
    }
    double p = disease.p_transmission;
    if (source.vaccinated) {
        p *= 1.0 - vacc_efficiency;
    }
    if (target.vaccinated) {
        p *= 1.0 - vacc_efficiency;
    }
    if (!rng.bernoulli(p)) {
        return false;
    }
    target.state          = EpiState::Incubating;
    target.days_in_state  = 0;
    target.state_duration = sample_incubation_days(disease, rng);
    target.serious        = false;
    target.times_sick += 1;
    return true;
}

Transition progress_state(Agent& agent, const DiseaseConfig& disease, double vacc_efficiency, Rng& rng,
                          bool keep_vaccine_clock)
{
    switch (agent.state) {
    case EpiState::Susceptible:
        if (agent.vaccinated && !keep_vaccine_clock && agent.immunity_days_left != kForever &&
            agent.immunity_days_left > 0) {
            if (--agent.immunity_days_left == 0) {
                agent.vaccinated = false;
                return Transition::ImmunityWaned;
            }
        }
        return Transition::None;

    case EpiState::Incubating:
        if (++agent.days_in_state < agent.state_duration) {
            return Transition::None;
        }
        agent.days_in_state = 0;
        if (agent.age < 65 && rng.bernoulli(disease.asymptomatic_share_under_65)) {
            agent.state          = EpiState::Asymptomatic;
            agent.state_duration = sample_illness_days(disease, false, rng);
            return Transition::BecameAsymptomatic;
        }
        agent.state          = EpiState::Symptomatic;
        if (maybe_serious_form(agent, vacc_efficiency, rng)) {
            ++agent.serious_episodes;
        }
        agent.state_duration = sample_illness_days(disease, agent.serious, rng);
        return Transition::BecameSymptomatic;

    case EpiState::Asymptomatic:
    case EpiState::Symptomatic:
        if (++agent.days_in_state < agent.state_duration) {
            return Transition::None;
        }
        agent.state              = EpiState::Recovered;
        agent.days_in_state      = 0;
        agent.state_duration     = 1;
        agent.serious            = false;
        agent.immunity_days_left = disease.recovery_immunity_days;
        if (agent.quarantine_days_left == kUntilRecovery) {
            agent.quarantine_days_left = 0;
        }
        return Transition::Recovered;

    case EpiState::Recovered:
        ++agent.days_in_state;
        if (agent.immunity_days_left == kForever) {
            return Transition::None;
        }
        if (agent.immunity_days_left > 0) {
            --agent.immunity_days_left;
        }
        if (agent.immunity_days_left == 0) {
            agent.state         = EpiState::Susceptible;
            agent.days_in_state = 0;
            agent.vaccinated    = false;
            return Transition::ImmunityWaned;
        }
        return Transition::None;
    }
    return Transition::None;
}

int introduce_infected(SimState& state, int n)
{
    if (n <= 0) {
        return 0;
    }
    std::vector<int> susceptible;
    for (const auto& a : state.agents) {
        if (a.state == EpiState::Susceptible) {
            susceptible.push_back(a.id);
        }
    }
    int count = std::min(n, static_cast<int>(susceptible.size()));
    // Partial Fisher-Yates: the first `count` slots end up a uniform subset.
    for (int i = 0; i < count; ++i) {
        auto j = state.rng.uniform_int<std::size_t>(static_cast<std::size_t>(i), susceptible.size() - 1);
        std::swap(susceptible[static_cast<std::size_t>(i)], susceptible[j]);
        auto& a          = state.agents[static_cast<std::size_t>(susceptible[static_cast<std::size_t>(i)])];
        a.state          = EpiState::Incubating;
        a.days_in_state  = 0;
        a.state_duration = sample_incubation_days(state.disease, state.rng);
        a.serious        = false;
        a.times_sick += 1;
        if (!a.first_infection_day) {
            a.first_infection_day = state.day;
        }
    }
    return count;
}

void set_lockdown(SimState& state, bool on)
{
    state.lockdown = on;
}

namespace
{

int transmission_phase(SimState& state, int day)
{
    if (state.lockdown) {
        return 0;
    }
    const auto n = state.agents.size();
    std::vector<char> source(n, 0);
    bool any_source = false;
    for (std::size_t i = 0; i < n; ++i) {
        source[i] = state.agents[i].infectious() && !state.agents[i].quarantined();
        any_source |= source[i] != 0;
    }
    if (!any_source) {
        return 0;
    }

    ContactPool pool(state.agents);
    const double efficiency = state.vaccination.efficiency;
    int infections          = 0;
    auto infect             = [&](std::size_t from, std::size_t to) {
        if (try_transmit(state.agents[from], state.agents[to], state.disease, efficiency, state.rng)) {
            ++infections;
            if (!state.agents[to].first_infection_day) {
                state.agents[to].first_infection_day = day;
            }
        }
    };

    for (std::size_t i = 0; i < n; ++i) {
        const auto& agent = state.agents[i];
        // Contacts of an agent that can neither infect nor be infected change nothing.
        if (agent.quarantined() || (!source[i] && agent.state != EpiState::Susceptible)) {
            continue;
        }
        for (int partner : pool.sample(agent, state.rng)) {
            auto j = static_cast<std::size_t>(partner);
            if (source[i] && state.agents[j].state == EpiState::Susceptible) {
                infect(i, j);
            }
            else if (source[j] && state.agents[i].state == EpiState::Susceptible) {
                infect(j, i);
            }
        }
    }
    return infections;
}

} // namespace

DailyRecord step(SimState& state)
{
    const int day = state.day + 1;
    DailyRecord record;
    record.day = day;

    record.new_infections = transmission_phase(state, day);

    screening_phase(state, day, record);

    std::vector<char> vaccinated_today(state.agents.size(), 0);
    for (int id : vaccination_phase(state)) {
        vaccinated_today[static_cast<std::size_t>(id)] = 1;
        ++record.doses_given;
    }

    const double efficiency = state.vaccination.efficiency;
    for (auto& a : state.agents) {
        if (a.quarantine_days_left > 0 && a.quarantine_days_left != kUntilRecovery) {
            --a.quarantine_days_left;
        }
        auto t = progress_state(a, state.disease, efficiency, state.rng, vaccinated_today[static_cast<std::size_t>(a.id)] != 0);
        if (t == Transition::BecameSymptomatic && a.serious) {
            ++record.new_serious;
        }
    }

    record.census          = state.census();
    record.in_quarantine   = static_cast<int>(std::count_if(state.agents.begin(), state.agents.end(), [](const Agent& a) {
        return a.quarantined();
    }));
    record.lockdown_active = state.lockdown;

    state.day = day;
    state.history.push_back(record);
    return record;
}

} // namespace episim
