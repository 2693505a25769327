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
/*
 * Acceptance suite. Runs every exit criterion at its pinned tolerance and prints
 * one PASS/FAIL line per criterion. Exit code is the number of failures.
 */
#include "acceptance.h"

#include <CLI11.hpp>

#include <chrono>
#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"episim acceptance suite"};
    episim::acceptance::Options options;
    std::vector<std::string> only;
    app.add_option("--base-seed", options.base_seed, "First seed of every 20-seed batch");
    app.add_option("--runs", options.runs, "Seeds per batch");
    app.add_option("--p-transmission", options.p_transmission, "Override the transmission probability");
    app.add_option("--only", only, "Run only these criteria (e.g. A4 A10)");
    CLI11_PARSE(app, argc, argv);

    int failures = 0;
    for (const auto& criterion : episim::acceptance::criteria()) {
        if (!only.empty() && std::find(only.begin(), only.end(), criterion.id) == only.end()) {
            continue;
        }
        auto start   = std::chrono::steady_clock::now();
        auto outcome = criterion.check(options);
        auto seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::cout << (outcome.pass ? "PASS " : "FAIL ") << criterion.id << "  " << criterion.title << "  ["
                  << outcome.detail << "] (" << std::fixed << std::setprecision(1) << seconds << "s)" << std::endl;
        failures += outcome.pass ? 0 : 1;
    }
    std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
              << std::endl;
    return failures;
}
