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
#ifndef EPISIM_ACCEPTANCE_H
#define EPISIM_ACCEPTANCE_H

#include "episim/config.h"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace episim::acceptance
{

struct Options {
    std::uint64_t base_seed = 1;
    int runs                = 20;
    std::optional<double> p_transmission;

    SimConfig base_config() const;
};

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    std::string id;
    std::string title;
    std::function<Outcome(const Options&)> check;
};

const std::vector<Criterion>& criteria();

} // namespace episim::acceptance

#endif // EPISIM_ACCEPTANCE_H
