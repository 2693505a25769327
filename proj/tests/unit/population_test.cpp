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

#include "../support/stats.h"

#include <gtest/gtest.h>

#include <algorithm>

namespace episim
{
namespace
{

TEST(RiskFactor, LowerBoundAtAgeZero)
{
    EXPECT_DOUBLE_EQ(risk_factor_from_draw(0, 0.0), 0.0);
}

TEST(RiskFactor, ClampedAtOne)
{
    EXPECT_DOUBLE_EQ(risk_factor_from_draw(100, 0.3), 1.0);
}

TEST(RiskFactor, HandEvaluatedMidpoint)
{
    // 0.7 * 0.65 + 0.15
    EXPECT_NEAR(risk_factor_from_draw(65, 0.15), 0.605, 1e-12);
}

TEST(RiskFactor, StaysInUnitIntervalForAllAges)
{
    Rng rng(3);
    for (int age = 0; age <= 100; ++age) {
        for (int k = 0; k < 50; ++k) {
            double r = assign_risk_factor(age, rng);
            EXPECT_GE(r, 0.0);
            EXPECT_LE(r, 1.0);
            EXPECT_GE(r, 0.7 * age / 100.0 - 1e-12);
        }
    }
}

TEST(DailyContacts, FlooredAtOne)
{
    EXPECT_EQ(daily_contacts_from_draws(100, 1.0, 1.0, 5.0, 4.0), 1);
}

TEST(DailyContacts, YoungLowRiskMaximum)
{
    EXPECT_EQ(daily_contacts_from_draws(0, 0.0, 6.0, 10.0, 3.0), 16);
}

TEST(DailyContacts, RoundsToNearest)
{
    // 2 + 0.5 * 3 - 0.5 * 1 = 3.0 ; 2.2 + 0.5 * 0.4 - 0 = 2.4
    EXPECT_EQ(daily_contacts_from_draws(50, 0.5, 2.0, 3.0, 1.0), 3);
    EXPECT_EQ(daily_contacts_from_draws(50, 0.0, 2.2, 0.4, 0.0), 2);
}

TEST(InitPopulation, PostConditions)
{
    PopulationConfig cfg;
    Rng rng(11);
    auto agents = init_population(cfg, rng);
    ASSERT_EQ(agents.size(), 2000u);
    int workers = 0;
    for (std::size_t i = 0; i < agents.size(); ++i) {
        const auto& a = agents[i];
        EXPECT_EQ(a.id, static_cast<int>(i));
        EXPECT_EQ(a.state, EpiState::Susceptible);
        EXPECT_FALSE(a.vaccinated);
        EXPECT_FALSE(a.quarantined());
        EXPECT_GE(a.age, 0);
        EXPECT_LE(a.age, 100);
        EXPECT_GE(a.daily_contacts, 1);
        EXPECT_GE(a.risk_factor, 0.0);
        EXPECT_LE(a.risk_factor, 1.0);
        if (a.works_outside) {
            ++workers;
            EXPECT_TRUE(a.age >= 20 && a.age <= 65) << "age " << a.age;
        }
    }
    EXPECT_GT(workers, 0);
}

TEST(InitPopulation, AgeBandsFollowConfiguredShares)
{
    PopulationConfig cfg;
    cfg.size = 20000;
    Rng rng(5);
    auto agents = init_population(cfg, rng);
    auto share  = [&](int lo, int hi) {
        return static_cast<double>(std::count_if(agents.begin(), agents.end(), [&](const Agent& a) {
                   return a.age >= lo && a.age <= hi;
               })) /
               cfg.size;
    };
    EXPECT_NEAR(share(0, 19), 0.24, 0.015);
    EXPECT_NEAR(share(20, 64), 0.56, 0.015);
    EXPECT_NEAR(share(65, 100), 0.20, 0.015);
}

TEST(InitPopulation, SameSeedSamePopulation)
{
    PopulationConfig cfg;
    Rng a(42), b(42), c(43);
    auto pa = init_population(cfg, a);
    auto pb = init_population(cfg, b);
    auto pc = init_population(cfg, c);
    EXPECT_EQ(pa, pb);
    EXPECT_NE(pa, pc);
}

TEST(InitPopulation, AttributeCorrelations)
{
    PopulationConfig cfg;
    cfg.size = 10000;
    Rng rng(2024);
    auto agents = init_population(cfg, rng);
    std::vector<double> age, risk, contacts;
    for (const auto& a : agents) {
        age.push_back(a.age);
        risk.push_back(a.risk_factor);
        contacts.push_back(a.daily_contacts);
    }
    EXPECT_GT(testing::pearson(age, risk), 0.5);
    EXPECT_LT(testing::pearson(age, contacts), -0.2);
}

TEST(InitPopulation, WorkersGetExtraContacts)
{
    PopulationConfig cfg;
    cfg.size = 10000;
    Rng rng(8);
    auto agents = init_population(cfg, rng);
    double worker_sum = 0, other_sum = 0;
    int workers = 0, others = 0;
    for (const auto& a : agents) {
        if (a.age < 20 || a.age > 65) {
            continue;
        }
        (a.works_outside ? worker_sum : other_sum) += a.daily_contacts;
        (a.works_outside ? workers : others) += 1;
    }
    EXPECT_GT(worker_sum / workers, other_sum / others + 3.0);
}

TEST(InitPopulation, RejectsInvalidConfig)
{
    PopulationConfig cfg;
    cfg.size = 0;
    Rng rng(1);
    EXPECT_THROW(init_population(cfg, rng), ConfigError);
    cfg      = PopulationConfig{};
    cfg.age_distribution = {{0, 50, 0.3}, {51, 100, 0.3}};
    EXPECT_THROW(init_population(cfg, rng), ConfigError);
}

} // namespace
} // namespace episim
