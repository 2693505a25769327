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
#include "episim/vaccination.h"

#include "../support/stats.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <limits>
#include <numeric>

namespace episim
{
namespace
{

using testing::make_agent;
using testing::uniform_state;

SimState infected_share(int n, int infected, double trigger)
{
    auto s                                = uniform_state(n);
    s.vaccination.enabled                 = true;
    s.vaccination.trigger_infected_share  = trigger;
    for (int i = 0; i < infected; ++i) {
        s.agents[static_cast<std::size_t>(i)].state = EpiState::Asymptomatic;
    }
    return s;
}

TEST(VaccinationActive, ImmediateTrigger)
{
    auto s = infected_share(100, 0, 0.0);
    EXPECT_TRUE(vaccination_active(s));
}

TEST(VaccinationActive, BelowTrigger)
{
    auto s = infected_share(100, 4, 0.05);
    EXPECT_FALSE(vaccination_active(s));
}

TEST(VaccinationActive, Latches)
{
    auto s = infected_share(100, 5, 0.05);
    EXPECT_TRUE(vaccination_active(s));
    for (auto& a : s.agents) {
        a.state = EpiState::Susceptible;
    }
    EXPECT_TRUE(vaccination_active(s));
}

TEST(VaccinationActive, LatchSurvivesARealRun)
{
    SimConfig cfg;
    cfg.seed                               = 3;
    cfg.initial_infected                   = 10;
    cfg.vaccination.enabled                = true;
    cfg.vaccination.trigger_infected_share = 0.05;
    auto state                             = make_state(cfg);
    bool seen = false;
    while (has_infectious(state) && state.day < 400) {
        step(state);
        seen = seen || state.vaccination_active;
        if (seen) {
            ASSERT_TRUE(vaccination_active(state));
        }
    }
    EXPECT_TRUE(seen);
    EXPECT_EQ(state.infected_count(), 0);
}

TEST(Eligibility, AllImmuneGivesNothing)
{
    auto s = uniform_state(20);
    for (auto& a : s.agents) {
        a.state              = EpiState::Recovered;
        a.immunity_days_left = kForever;
    }
    EXPECT_TRUE(eligible_candidates(s).empty());
}

TEST(Eligibility, Cases)
{
    EXPECT_TRUE(is_vaccine_eligible(make_agent(0)));
    EXPECT_FALSE(is_vaccine_eligible(make_agent(0, 30, EpiState::Incubating)));
    auto vaccinated       = make_agent(0);
    vaccinated.vaccinated = true;
    EXPECT_FALSE(is_vaccine_eligible(vaccinated));

    DiseaseConfig d;
    Rng rng(1);
    auto waned               = make_agent(0, 30, EpiState::Recovered);
    waned.immunity_days_left = 1;
    progress_state(waned, d, 0.9, rng);
    EXPECT_TRUE(is_vaccine_eligible(waned));
}

std::vector<Agent> with_risks(const std::vector<double>& risks)
{
    std::vector<Agent> agents;
    for (std::size_t i = 0; i < risks.size(); ++i) {
        auto a        = make_agent(static_cast<int>(i));
        a.risk_factor = risks[i];
        agents.push_back(a);
    }
    return agents;
}

TEST(Prioritize, RiskFirstTopN)
{
    auto agents = with_risks({0.2, 0.9, 0.5});
    Rng rng(1);
    auto chosen = prioritize(agents, {0, 1, 2}, VaccinationStrategy::RiskFirst, 2, rng);
    EXPECT_EQ(chosen, (std::vector<int>{1, 2}));
}

TEST(Prioritize, ZeroDoses)
{
    auto agents = with_risks({0.2, 0.9, 0.5});
    Rng rng(1);
    EXPECT_TRUE(prioritize(agents, {0, 1, 2}, VaccinationStrategy::Random, 0, rng).empty());
}

TEST(Prioritize, FewerCandidatesThanDoses)
{
    auto agents = with_risks({0.2, 0.9, 0.5});
    Rng rng(1);
    auto chosen = prioritize(agents, {0, 2}, VaccinationStrategy::Random, 10, rng);
    std::sort(chosen.begin(), chosen.end());
    EXPECT_EQ(chosen, (std::vector<int>{0, 2}));
}

TEST(Prioritize, TiesBrokenUniformly)
{
    auto agents = with_risks({0.5, 0.5, 0.5, 0.1});
    Rng rng(4);
    std::vector<int> hits(4, 0);
    for (int k = 0; k < 30000; ++k) {
        ++hits[static_cast<std::size_t>(prioritize(agents, {0, 1, 2, 3}, VaccinationStrategy::RiskFirst, 1, rng)[0])];
    }
    EXPECT_EQ(hits[3], 0);
    for (int i = 0; i < 3; ++i) {
        EXPECT_NEAR(hits[static_cast<std::size_t>(i)], 10000, 400);
    }
}

TEST(Prioritize, ContactsFirstBatchAboveMean)
{
    SimConfig cfg;
    cfg.seed   = 17;
    auto state = make_state(cfg);
    Rng rng(2);
    auto chosen = prioritize(state.agents, eligible_candidates(state), VaccinationStrategy::ContactsFirst, 30, rng);
    ASSERT_EQ(chosen.size(), 30u);
    double batch = 0.0, all = 0.0;
    for (int id : chosen) {
        batch += state.agents[static_cast<std::size_t>(id)].daily_contacts;
    }
    for (const auto& a : state.agents) {
        all += a.daily_contacts;
    }
    EXPECT_GT(batch / 30.0, all / state.population());
}

TEST(Vaccinate, SetsFieldsAndCountsDoses)
{
    VaccinationConfig cfg;
    cfg.vaccine_immunity_days = 2;
    auto a                    = make_agent(0);
    vaccinate(a, cfg);
    EXPECT_TRUE(a.vaccinated);
    EXPECT_EQ(a.doses_received, 1);
    EXPECT_EQ(a.immunity_days_left, 2);

    DiseaseConfig d;
    Rng rng(1);
    progress_state(a, d, 0.9, rng);
    progress_state(a, d, 0.9, rng);
    ASSERT_TRUE(is_vaccine_eligible(a));
    vaccinate(a, cfg);
    EXPECT_EQ(a.doses_received, 2);
}

TEST(Vaccinate, RejectsIneligible)
{
    VaccinationConfig cfg;
    auto a = make_agent(0, 30, EpiState::Symptomatic);
    EXPECT_THROW(vaccinate(a, cfg), ContractViolation);
    auto b = make_agent(1);
    vaccinate(b, cfg);
    EXPECT_THROW(vaccinate(b, cfg), ContractViolation);
}

TEST(VaccinationPhase, DailyBatchOfThirty)
{
    auto s                = infected_share(500, 0, 0.0);
    s.vaccination.daily_doses = 30;
    auto ids              = vaccination_phase(s);
    EXPECT_EQ(ids.size(), 30u);
    int vaccinated = 0;
    for (const auto& a : s.agents) {
        vaccinated += a.vaccinated;
    }
    EXPECT_EQ(vaccinated, 30);
}

TEST(SeriousForm, Extremes)
{
    Rng rng(1);
    for (int k = 0; k < 1000; ++k) {
        auto low        = make_agent(0);
        low.risk_factor = 0.0;
        ASSERT_FALSE(maybe_serious_form(low, 0.9, rng));
        auto high        = make_agent(1);
        high.risk_factor = 1.0;
        ASSERT_TRUE(maybe_serious_form(high, 0.9, rng));
        ASSERT_TRUE(high.serious);
    }
}

TEST(SeriousForm, VaccinatedRate)
{
    Rng rng(8);
    int serious      = 0;
    const int trials = 100000;
    for (int k = 0; k < trials; ++k) {
        auto a        = make_agent(0);
        a.risk_factor = 0.5;
        a.vaccinated  = true;
        serious += maybe_serious_form(a, 0.9, rng);
    }
    EXPECT_NEAR(static_cast<double>(serious) / trials, 0.05, 0.005);
}

TEST(SeriousForm, OnlySymptomaticEpisodesCount)
{
    SimConfig cfg;
    cfg.seed             = 5;
    cfg.initial_infected = 20;
    auto state           = make_state(cfg);
    while (has_infectious(state) && state.day < 400) {
        auto before = state.agents;
        step(state);
        for (std::size_t i = 0; i < before.size(); ++i) {
            if (state.agents[i].serious_episodes > before[i].serious_episodes) {
                ASSERT_TRUE(before[i].state == EpiState::Incubating || before[i].state == EpiState::Susceptible);
                ASSERT_EQ(state.agents[i].state, EpiState::Symptomatic);
            }
        }
    }
}

class CampaignRun : public ::testing::TestWithParam<std::uint64_t>
{
};

SimConfig campaign(VaccinationStrategy strategy, std::uint64_t seed)
{
    SimConfig cfg;
    cfg.seed                  = seed;
    cfg.initial_infected      = 10;
    cfg.vaccination.enabled   = true;
    cfg.vaccination.strategy  = strategy;
    cfg.vaccination.daily_doses = 30;
    return cfg;
}

TEST_P(CampaignRun, DosesNeverExceedBudgetNorTargetInfectedOrImmune)
{
    auto cfg   = campaign(VaccinationStrategy::Random, GetParam());
    auto state = make_state(cfg);
    while (has_infectious(state) && state.day < 400) {
        auto before = state.agents;
        auto r      = step(state);
        ASSERT_LE(r.doses_given, 30);
        int given = 0;
        for (std::size_t i = 0; i < before.size(); ++i) {
            if (state.agents[i].doses_received > before[i].doses_received) {
                ++given;
                ASSERT_TRUE(is_vaccine_eligible(before[i]));
                ASSERT_TRUE(state.agents[i].vaccinated);
            }
        }
        ASSERT_EQ(given, r.doses_given);
    }
}

TEST_P(CampaignRun, RiskFirstMinimumRiskNonincreasing)
{
    auto cfg             = campaign(VaccinationStrategy::RiskFirst, GetParam());
    cfg.initial_infected = 0;
    auto state           = make_state(cfg);
    double min_risk      = std::numeric_limits<double>::infinity();
    for (int d = 0; d < 40; ++d) {
        auto before = state.agents;
        step(state);
        double today = min_risk;
        for (std::size_t i = 0; i < before.size(); ++i) {
            if (state.agents[i].vaccinated && !before[i].vaccinated) {
                today = std::min(today, state.agents[i].risk_factor);
            }
        }
        ASSERT_LE(today, min_risk);
        min_risk = today;
    }
}

TEST_P(CampaignRun, ContactsFirstBatchMeanNonincreasing)
{
    auto cfg             = campaign(VaccinationStrategy::ContactsFirst, GetParam());
    cfg.initial_infected = 0;
    auto state           = make_state(cfg);
    double previous      = std::numeric_limits<double>::infinity();
    for (int d = 0; d < 40; ++d) {
        auto before = state.agents;
        step(state);
        double sum = 0.0;
        int n      = 0;
        for (std::size_t i = 0; i < before.size(); ++i) {
            if (state.agents[i].vaccinated && !before[i].vaccinated) {
                sum += state.agents[i].daily_contacts;
                ++n;
            }
        }
        ASSERT_EQ(n, 30);
        ASSERT_LE(sum / n, previous);
        previous = sum / n;
    }
}

TEST_P(CampaignRun, PerfectVaccineStopsSeriousFormsAmongVaccinated)
{
    auto cfg                   = campaign(VaccinationStrategy::Random, GetParam());
    cfg.vaccination.efficiency = 1.0;
    cfg.vaccination.daily_doses = cfg.population.size;
    auto state                 = make_state(cfg);
    step(state);
    while (has_infectious(state) && state.day < 400) {
        auto before = state.agents;
        step(state);
        for (std::size_t i = 0; i < before.size(); ++i) {
            if (before[i].vaccinated) {
                ASSERT_EQ(state.agents[i].serious_episodes, before[i].serious_episodes);
                ASSERT_EQ(state.agents[i].times_sick, before[i].times_sick);
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, CampaignRun, ::testing::Values(1, 2, 3));

} // namespace
} // namespace episim
