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
#ifndef EPISIM_IO_H
#define EPISIM_IO_H

#include "episim/agent.h"
#include "episim/config.h"
#include "episim/estimation.h"
#include "episim/harness.h"
#include "episim/sim_state.h"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace episim
{

/// Thrown when a CSV or JSON document does not match the expected layout.
class ParseError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

// History CSV. Column order:
// day,susceptible,incubating,asymptomatic,symptomatic,recovered,new_infections,
// new_serious,tests_done,positives,doses_given,in_quarantine,lockdown_active
std::string history_csv_header();
void write_history_csv(std::ostream& os, const std::vector<DailyRecord>& history);
std::vector<DailyRecord> read_history_csv(std::istream& is);

// day,true,est_proportional,est_predictive,window_tests,window_positives
void write_estimates_csv(std::ostream& os, const EstimateSeries& series);
EstimateSeries read_estimates_csv(std::istream& is);

struct PopulationRow {
    int id             = 0;
    int age            = 0;
    bool works_outside = false;
    double risk_factor = 0.0;
    int daily_contacts = 0;
    int doses_received = 0;
    int times_sick     = 0;

    friend bool operator==(const PopulationRow&, const PopulationRow&) = default;
};

PopulationRow to_row(const Agent& agent);

// id,age,works_outside,risk_factor,daily_contacts,doses_received,times_sick
void write_population_csv(std::ostream& os, const std::vector<Agent>& agents);
std::vector<PopulationRow> read_population_csv(std::istream& is);

// day,agent_id,outcome,truth
void write_test_log_csv(std::ostream& os, const std::vector<TestResult>& tests);
std::vector<TestResult> read_test_log_csv(std::istream& is);

// seed,duration_days,serious_total,peak_daily_new_infections,infected_total,vaccines_total,truncated
void write_batch_csv(std::ostream& os, const std::vector<RunSummary>& runs);
std::vector<RunSummary> read_batch_csv(std::istream& is);

nlohmann::json to_json(const SimConfig& cfg);
nlohmann::json to_json(const ScreeningConfig& cfg);
nlohmann::json to_json(const VaccinationConfig& cfg);
nlohmann::json to_json(const RunSummary& summary);
nlohmann::json to_json(const BatchSummary& batch);

/// Missing keys keep their defaults. Immunity durations accept null or "inf" for kForever.
/// @throws ConfigError on wrong types or unknown enum names.
SimConfig sim_config_from_json(const nlohmann::json& j, SimConfig base = {});
ScreeningConfig screening_config_from_json(const nlohmann::json& j, ScreeningConfig base = {});
VaccinationConfig vaccination_config_from_json(const nlohmann::json& j, VaccinationConfig base = {});

SimConfig load_sim_config(const std::filesystem::path& path);

/// Writes history.csv, estimates.csv, population.csv, tests.csv and summary.json.
void write_run(const RunResult& run, const SimConfig& cfg, const std::filesystem::path& dir);

} // namespace episim

#endif // EPISIM_IO_H
