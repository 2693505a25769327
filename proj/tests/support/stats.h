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
#ifndef EPISIM_TESTS_STATS_H
#define EPISIM_TESTS_STATS_H

#include "episim/agent.h"
#include "episim/sim_state.h"

#include <cmath>
#include <numeric>
#include <vector>

namespace episim::testing
{

/// Pearson correlation coefficient, computed from scratch.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n  = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    return sxy / std::sqrt(sxx * syy);
}

inline Agent make_agent(int id, int age = 30, EpiState state = EpiState::Susceptible, int contacts = 5)
{
    Agent a;
    a.id             = id;
    a.age            = age;
    a.state          = state;
    a.daily_contacts = contacts;
    return a;
}

/// A state of n identical susceptible agents with the given seed.
inline SimState uniform_state(int n, std::uint64_t seed = 1, int contacts = 5)
{
    SimState s;
    s.rng = Rng(seed);
    for (int i = 0; i < n; ++i) {
        s.agents.push_back(make_agent(i, 30, EpiState::Susceptible, contacts));
    }
    return s;
}

inline int count_state(const SimState& s, EpiState state)
{
    int n = 0;
    for (const auto& a : s.agents) {
        n += a.state == state;
    }
    return n;
}

} // namespace episim::testing

#endif // EPISIM_TESTS_STATS_H
