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
#ifndef EPISIM_RNG_H
#define EPISIM_RNG_H

#include <boost/random/bernoulli_distribution.hpp>
#include <boost/random/geometric_distribution.hpp>
#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <cstdint>
#include <span>
#include <utility>

namespace episim
{

/**
 * @brief The single pseudo-random stream owned by one simulation run.
 *
 * Wraps a 64-bit Mersenne twister with boost distributions. Unlike the std
 * distributions, the boost ones produce the same sequence on every platform,
 * so a (config, seed) pair identifies a run bit for bit.
 */
class Rng
{
public:
    using Engine = boost::random::mt19937_64;

    explicit Rng(std::uint64_t seed = 0)
        : m_engine(seed)
    {
    }

    /// Uniform real in [a, b).
    double uniform(double a = 0.0, double b = 1.0)
    {
        return boost::random::uniform_real_distribution<double>(a, b)(m_engine);
    }

    /// Uniform integer in [a, b], both inclusive.
    template <class Int>
    Int uniform_int(Int a, Int b)
    {
        return boost::random::uniform_int_distribution<Int>(a, b)(m_engine);
    }

    bool bernoulli(double p)
    {
        if (p <= 0.0) {
            return false;
        }
        if (p >= 1.0) {
            return true;
        }
        return boost::random::bernoulli_distribution<double>(p)(m_engine);
    }

    /// Number of trials up to and including the first success, support {1, 2, ...}.
    int geometric_trials(double p)
    {
        return boost::random::geometric_distribution<int, double>(p)(m_engine) + 1;
    }

    /// Fisher-Yates shuffle. std::shuffle is not specified bit for bit across standard libraries.
    template <class T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            auto j = uniform_int<std::size_t>(0, i - 1);
            std::swap(items[i - 1], items[j]);
        }
    }

    Engine& engine()
    {
        return m_engine;
    }

    friend bool operator==(const Rng&, const Rng&) = default;

private:
    Engine m_engine;
};

} // namespace episim

#endif // EPISIM_RNG_H
