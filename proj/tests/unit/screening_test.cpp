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
#include "episim/screening.h"

#include "../support/stats.h"

#include <gtest/gtest.h>

#include <map>
#include <set>

namespace episim
{
namespace
{

using testing::make_agent;
using testing::uniform_state;

SimState with_symptomatic(int n, int symptomatic, double trigger)
{
    auto s                               = uniform_state(n);
    s.screening.enabled                  = true;
    s.screening.trigger_symptomatic_share = trigger;
    for (int i = 0; i < symptomatic; ++i) {
        s.agents[static_cast<std::size_t>(i)].state = EpiState::Symptomatic;
    }
    return s;
}

TEST(CampaignActive, ImmediateTrigger)
{
    auto s = with_symptomatic(100, 0, 0.0);
    EXPECT_TRUE(campaign_active(s));
}

TEST(CampaignActive, DisabledNeverStarts)
{
    auto s              = with_symptomatic(100, 50, 0.0);
    s.screening.enabled = false;
    EXPECT_FALSE(campaign_active(s));
}

TEST(CampaignActive, BelowTriggerStaysOff)
{
    auto s = with_symptomatic(100, 10, 0.15);
    EXPECT_FALSE(campaign_active(s));
    EXPECT_FALSE(campaign_active(s));
}

TEST(CampaignActive, LatchesAfterShareFalls)
{
    auto s = with_symptomatic(100, 10, 0.15);
    EXPECT_FALSE(campaign_active(s));
    for (std::size_t i = 10; i < 15; ++i) {
        s.agents[i].state = EpiState::Symptomatic;
    }
    EXPECT_TRUE(campaign_active(s));
    for (auto& a : s.agents) {
        a.state = EpiState::Recovered;
    }
    EXPECT_TRUE(campaign_active(s));
}

TEST(CampaignActive, LatchSurvivesARealRun)
{
    SimConfig cfg;
    cfg.seed                                = 11;
    cfg.initial_infected                    = 10;
    cfg.screening.enabled                   = true;
    cfg.screening.trigger_symptomatic_share = 0.05;
    auto state                              = make_state(cfg);
    int first = -1;
    while (has_infectious(state) && state.day < 400) {
        step(state);
        if (first < 0 && state.screening_active) {
            first = state.day;
        }
        if (first >= 0) {
            ASSERT_TRUE(campaign_active(state));
            ASSERT_GT(state.history.back().tests_done, 0);
        }
    }
    ASSERT_GT(first, 0);
}

TEST(SelectTestTargets, SymptomaticExhaustion)
{
    auto s                = with_symptomatic(100, 2, 0.0);
    s.screening.target    = ScreeningTarget::Symptomatic;
    s.screening.daily_tests = 3;
    Rng rng(1);
    auto ids = select_test_targets(s, s.screening, 0, rng);
    std::sort(ids.begin(), ids.end());
    EXPECT_EQ(ids, (std::vector<int>{0, 1}));
}

TEST(SelectTestTargets, WorkersOnly)
{
    auto s = uniform_state(300);
    for (std::size_t i = 0; i < 300; i += 3) {
        s.agents[i].works_outside = true;
    }
    s.screening.target      = ScreeningTarget::Workers;
    s.screening.daily_tests = 30;
    Rng rng(5);
    auto ids = select_test_targets(s, s.screening, 0, rng);
    ASSERT_EQ(ids.size(), 30u);
    for (int id : ids) {
        EXPECT_TRUE(s.agents[static_cast<std::size_t>(id)].works_outside);
    }
}

TEST(SelectTestTargets, ElderlyOnly)
{
    auto s = uniform_state(200);
    for (std::size_t i = 0; i < 200; i += 4) {
        s.agents[i].age = 65 + static_cast<int>(i % 30);
    }
    s.screening.target      = ScreeningTarget::Elderly;
    s.screening.daily_tests = 100;
    Rng rng(5);
    auto ids = select_test_targets(s, s.screening, 0, rng);
    EXPECT_EQ(ids.size(), 50u);
    for (int id : ids) {
        EXPECT_GE(s.agents[static_cast<std::size_t>(id)].age, 65);
    }
}

TEST(SelectTestTargets, RandomDistinctEligible)
{
    auto s = uniform_state(1500);
    for (std::size_t i = 0; i < 1500; i += 2) {
        s.agents[i].quarantine_days_left = 3;
    }
    Rng rng(8);
    for (int k = 0; k < 100; ++k) {
        auto ids = select_test_targets(s, s.screening, 0, rng);
        ASSERT_EQ(ids.size(), 3u);
        EXPECT_EQ(std::set<int>(ids.begin(), ids.end()).size(), 3u);
        for (int id : ids) {
            EXPECT_EQ(id % 2, 1);
        }
    }
}

TEST(SelectTestTargets, EmptyPool)
{
    auto s = uniform_state(10);
    for (auto& a : s.agents) {
        a.last_tested_day = 5;
    }
    Rng rng(1);
    EXPECT_TRUE(select_test_targets(s, s.screening, 8, rng).empty());
    EXPECT_EQ(select_test_targets(s, s.screening, 12, rng).size(), 3u);
}

TEST(SelectTestTargets, UniformWithinFilter)
{
    auto s                  = uniform_state(10);
    s.screening.daily_tests = 1;
    Rng rng(21);
    std::vector<int> hits(10, 0);
    for (int k = 0; k < 20000; ++k) {
        ++hits[static_cast<std::size_t>(select_test_targets(s, s.screening, 0, rng).at(0))];
    }
    for (int h : hits) {
        EXPECT_NEAR(h, 2000, 200);
    }
}

TEST(AdministerTest, PerfectSensitivity)
{
    ScreeningConfig cfg;
    cfg.params.sensitivity = 1.0;
    Rng rng(1);
    for (auto st : {EpiState::Incubating, EpiState::Asymptomatic, EpiState::Symptomatic}) {
        auto a = make_agent(0, 30, st);
        auto r = administer_test(a, cfg, 4, rng);
        EXPECT_TRUE(r.positive);
        EXPECT_TRUE(r.infected);
        EXPECT_EQ(a.quarantine_days_left, kUntilRecovery);
        EXPECT_EQ(a.last_tested_day, 4);
    }
}

TEST(AdministerTest, PerfectSpecificity)
{
    ScreeningConfig cfg;
    cfg.params.specificity = 1.0;
    Rng rng(1);
    for (auto st : {EpiState::Susceptible, EpiState::Recovered}) {
        auto a = make_agent(0, 30, st);
        auto r = administer_test(a, cfg, 2, rng);
        EXPECT_FALSE(r.positive);
        EXPECT_FALSE(r.infected);
        EXPECT_FALSE(a.quarantined());
        EXPECT_EQ(a.last_tested_day, 2);
    }
}

TEST(AdministerTest, FalsePositiveRate)
{
    ScreeningConfig cfg;
    cfg.params.specificity = 0.9;
    Rng rng(99);
    int positives    = 0;
    const int trials = 100000;
    for (int k = 0; k < trials; ++k) {
        auto a = make_agent(0);
        positives += administer_test(a, cfg, 0, rng).positive;
    }
    EXPECT_NEAR(static_cast<double>(positives) / trials, 0.10, 0.005);
}

TEST(AdministerTest, FalsePositiveQuarantineIsFinite)
{
    ScreeningConfig cfg;
    cfg.params.specificity = 0.0;
    Rng rng(1);
    auto a = make_agent(0);
    administer_test(a, cfg, 0, rng);
    EXPECT_EQ(a.quarantine_days_left, cfg.false_positive_quarantine_days);
}

ScreeningConfig run_screening(ScreeningTarget target, int tests)
{
    ScreeningConfig sc;
    sc.enabled     = true;
    sc.target      = target;
    sc.daily_tests = tests;
    return sc;
}

class ScreeningRun : public ::testing::TestWithParam<std::uint64_t>
{
};

TEST_P(ScreeningRun, BudgetAndCooldown)
{
    SimConfig cfg;
    cfg.population.size  = 500;
    cfg.seed             = GetParam();
    cfg.initial_infected = 5;
    cfg.screening        = run_screening(ScreeningTarget::Random, 40);
    auto state           = make_state(cfg);
    while (has_infectious(state) && state.day < 300) {
        auto r = step(state);
        ASSERT_LE(r.tests_done, 40);
        ASSERT_LE(r.positives, r.tests_done);
    }
    std::map<int, int> last;
    for (const auto& t : state.test_log) {
        auto it = last.find(t.agent_id);
        if (it != last.end()) {
            ASSERT_GE(t.day - it->second, cfg.screening.retest_cooldown_days);
        }
        last[t.agent_id] = t.day;
    }
    EXPECT_FALSE(state.test_log.empty());
}

TEST_P(ScreeningRun, PerfectSpecificityHasNoFalsePositives)
{
    SimConfig cfg;
    cfg.population.size            = 500;
    cfg.seed                       = GetParam();
    cfg.initial_infected           = 5;
    cfg.screening                  = run_screening(ScreeningTarget::Random, 30);
    cfg.screening.params.specificity = 1.0;
    auto state                     = make_state(cfg);
    while (has_infectious(state) && state.day < 300) {
        step(state);
    }
    for (const auto& t : state.test_log) {
        EXPECT_FALSE(t.positive && !t.infected);
    }
}

TEST_P(ScreeningRun, QuarantinedAgentsAreNeverTested)
{
    SimConfig cfg;
    cfg.population.size  = 500;
    cfg.seed             = GetParam();
    cfg.initial_infected = 5;
    cfg.screening        = run_screening(ScreeningTarget::Random, 40);
    auto state           = make_state(cfg);
    while (has_infectious(state) && state.day < 300) {
        auto before = state.agents;
        auto logged = state.test_log.size();
        step(state);
        for (std::size_t i = logged; i < state.test_log.size(); ++i) {
            ASSERT_FALSE(before[static_cast<std::size_t>(state.test_log[i].agent_id)].quarantined());
        }
    }
}

INSTANTIATE_TEST_SUITE_P(Seeds, ScreeningRun, ::testing::Values(1, 2, 3));

TEST(ScreeningProperty, SymptomaticTargetingOversamplesInfected)
{
    int satisfied = 0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        SimConfig cfg;
        cfg.seed             = seed;
        cfg.initial_infected = 5;
        cfg.screening        = run_screening(ScreeningTarget::Symptomatic, 3);
        auto state           = make_state(cfg);
        long tests = 0, positives = 0;
        double prevalence = 0.0;
        while (has_infectious(state) && state.day < cfg.max_days) {
            auto r = step(state);
            tests += r.tests_done;
            positives += r.positives;
            prevalence += static_cast<double>(r.infected()) / cfg.population.size;
        }
        if (tests > 0 && state.day > 0) {
            satisfied += static_cast<double>(positives) / tests > prevalence / state.day;
        }
    }
    EXPECT_GE(satisfied, 18);
}

} // namespace
} // namespace episim
