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
#include "episim/io.h"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace episim
{

namespace
{

std::string fmt_double(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, end);
}

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

template <class T>
T parse_number(const std::string& text)
{
    T value{};
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        throw ParseError("not a number: '" + text + "'");
    }
    return value;
}

bool parse_bool(const std::string& text)
{
    if (text == "1" || text == "true") {
        return true;
    }
    if (text == "0" || text == "false") {
        return false;
    }
    throw ParseError("not a boolean: '" + text + "'");
}

/// Reads the header, checks it, then hands each data row to fn.
template <class Fn>
void read_rows(std::istream& is, const std::string& header, std::size_t columns, Fn&& fn)
{
    std::string line;
    if (!std::getline(is, line)) {
        throw ParseError("missing CSV header");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != header) {
        throw ParseError("unexpected CSV header '" + line + "'");
    }
    while (std::getline(is, line)) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        auto cells = split(line);
        if (cells.size() != columns) {
            throw ParseError("expected " + std::to_string(columns) + " columns in '" + line + "'");
        }
        fn(cells);
    }
}

const std::string kEstimatesHeader  = "day,true,est_proportional,est_predictive,window_tests,window_positives";
const std::string kPopulationHeader = "id,age,works_outside,risk_factor,daily_contacts,doses_received,times_sick";
const std::string kTestLogHeader    = "day,agent_id,outcome,truth";
const std::string kBatchHeader =
    "seed,duration_days,serious_total,peak_daily_new_infections,infected_total,vaccines_total,truncated";

} // namespace

std::string history_csv_header()
{
    return "day,susceptible,incubating,asymptomatic,symptomatic,recovered,new_infections,new_serious,"
           "tests_done,positives,doses_given,in_quarantine,lockdown_active";
}

void write_history_csv(std::ostream& os, const std::vector<DailyRecord>& history)
{
    os << history_csv_header() << '\n';
    for (const auto& r : history) {
        os << r.day;
        for (int c : r.census) {
            os << ',' << c;
        }
        os << ',' << r.new_infections << ',' << r.new_serious << ',' << r.tests_done << ',' << r.positives << ','
           << r.doses_given << ',' << r.in_quarantine << ',' << (r.lockdown_active ? 1 : 0) << '\n';
    }
}

std::vector<DailyRecord> read_history_csv(std::istream& is)
{
    std::vector<DailyRecord> out;
    read_rows(is, history_csv_header(), 13, [&](const std::vector<std::string>& c) {
        DailyRecord r;
        r.day = parse_number<int>(c[0]);
        for (std::size_t s = 0; s < kNumStates; ++s) {
            r.census[s] = parse_number<int>(c[1 + s]);
        }
        r.new_infections  = parse_number<int>(c[6]);
        r.new_serious     = parse_number<int>(c[7]);
        r.tests_done      = parse_number<int>(c[8]);
        r.positives       = parse_number<int>(c[9]);
        r.doses_given     = parse_number<int>(c[10]);
        r.in_quarantine   = parse_number<int>(c[11]);
        r.lockdown_active = parse_bool(c[12]);
        out.push_back(r);
    });
    return out;
}

void write_estimates_csv(std::ostream& os, const EstimateSeries& series)
{
    os << kEstimatesHeader << '\n';
    for (const auto& p : series) {
        os << p.day << ',' << p.true_infected << ',' << fmt_double(p.est_proportional) << ','
           << fmt_double(p.est_predictive) << ',' << p.window_tests << ',' << p.window_positives << '\n';
    }
}

EstimateSeries read_estimates_csv(std::istream& is)
{
    EstimateSeries out;
    read_rows(is, kEstimatesHeader, 6, [&](const std::vector<std::string>& c) {
        EstimatePoint p;
        p.day              = parse_number<int>(c[0]);
        p.true_infected    = parse_number<int>(c[1]);
        p.est_proportional = parse_number<double>(c[2]);
        p.est_predictive   = parse_number<double>(c[3]);
        p.window_tests     = parse_number<int>(c[4]);
        p.window_positives = parse_number<int>(c[5]);
        out.push_back(p);
    });
    return out;
}

PopulationRow to_row(const Agent& a)
{
    return {a.id, a.age, a.works_outside, a.risk_factor, a.daily_contacts, a.doses_received, a.times_sick};
}

void write_population_csv(std::ostream& os, const std::vector<Agent>& agents)
{
    os << kPopulationHeader << '\n';
    for (const auto& a : agents) {
        os << a.id << ',' << a.age << ',' << (a.works_outside ? 1 : 0) << ',' << fmt_double(a.risk_factor) << ','
           << a.daily_contacts << ',' << a.doses_received << ',' << a.times_sick << '\n';
    }
}

std::vector<PopulationRow> read_population_csv(std::istream& is)
{
    std::vector<PopulationRow> out;
    read_rows(is, kPopulationHeader, 7, [&](const std::vector<std::string>& c) {
        out.push_back({parse_number<int>(c[0]), parse_number<int>(c[1]), parse_bool(c[2]),
                       parse_number<double>(c[3]), parse_number<int>(c[4]), parse_number<int>(c[5]),
                       parse_number<int>(c[6])});
    });
    return out;
}

void write_test_log_csv(std::ostream& os, const std::vector<TestResult>& tests)
{
    os << kTestLogHeader << '\n';
    for (const auto& t : tests) {
        os << t.day << ',' << t.agent_id << ',' << (t.positive ? "positive" : "negative") << ','
           << (t.infected ? "infected" : "not-infected") << '\n';
    }
}

std::vector<TestResult> read_test_log_csv(std::istream& is)
{
    std::vector<TestResult> out;
    read_rows(is, kTestLogHeader, 4, [&](const std::vector<std::string>& c) {
        TestResult t;
        t.day      = parse_number<int>(c[0]);
        t.agent_id = parse_number<int>(c[1]);
        if (c[2] != "positive" && c[2] != "negative") {
            throw ParseError("bad outcome '" + c[2] + "'");
        }
        if (c[3] != "infected" && c[3] != "not-infected") {
            throw ParseError("bad truth '" + c[3] + "'");
        }
        t.positive = c[2] == "positive";
        t.infected = c[3] == "infected";
        out.push_back(t);
    });
    return out;
}

void write_batch_csv(std::ostream& os, const std::vector<RunSummary>& runs)
{
    os << kBatchHeader << '\n';
    for (const auto& r : runs) {
        os << r.seed << ',' << r.duration_days << ',' << r.serious_total << ',' << r.peak_daily_new_infections << ','
           << r.infected_total << ',' << r.vaccines_total << ',' << (r.truncated ? 1 : 0) << '\n';
    }
}

std::vector<RunSummary> read_batch_csv(std::istream& is)
{
    std::vector<RunSummary> out;
    read_rows(is, kBatchHeader, 7, [&](const std::vector<std::string>& c) {
        RunSummary r;
        r.seed                      = parse_number<std::uint64_t>(c[0]);
        r.duration_days             = parse_number<int>(c[1]);
        r.serious_total             = parse_number<int>(c[2]);
        r.peak_daily_new_infections = parse_number<int>(c[3]);
        r.infected_total            = parse_number<int>(c[4]);
        r.vaccines_total            = parse_number<int>(c[5]);
        r.truncated                 = parse_bool(c[6]);
        out.push_back(r);
    });
    return out;
}

namespace
{

using nlohmann::json;

json days_to_json(int days)
{
    return days == kForever ? json(nullptr) : json(days);
}

int days_from_json(const json& j)
{
    if (j.is_null() || (j.is_string() && (j == "inf" || j == "forever"))) {
        return kForever;
    }
    if (!j.is_number_integer()) {
        throw ConfigError("immunity duration must be an integer, null or \"inf\"");
    }
    return j.get<int>();
}

/// Overwrite target with j[key] when present, converting type errors to ConfigError.
template <class T>
void read_field(const json& j, const char* key, T& target)
{
    auto it = j.find(key);
    if (it == j.end()) {
        return;
    }
    try {
        target = it->get<T>();
    }
    catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
    }
}

void require_object(const json& j, const char* what)
{
    if (!j.is_object()) {
        throw ConfigError(std::string(what) + " must be a JSON object");
    }
}

json to_json(const PopulationConfig& p)
{
    json bands = json::array();
    for (const auto& b : p.age_distribution) {
        bands.push_back({{"min_age", b.min_age}, {"max_age", b.max_age}, {"share", b.share}});
    }
    return {
        {"size", p.size},
        {"age_distribution", bands},
        {"worker_share_20_65", p.worker_share_20_65},
        {"risk", {{"age_slope", p.risk.age_slope}, {"noise_max", p.risk.noise_max}}},
        {"contacts",
         {{"base_min", p.contacts.base_min},
          {"base_max", p.contacts.base_max},
          {"youth_max", p.contacts.youth_max},
          {"risk_max", p.contacts.risk_max},
          {"worker_bonus", p.contacts.worker_bonus}}},
    };
}

json to_json(const DiseaseConfig& d)
{
    return {
        {"p_transmission", d.p_transmission},
        {"incubation_mean_days", d.incubation_mean_days},
        {"incubation_max_days", d.incubation_max_days},
        {"illness_mean_days", d.illness_mean_days},
        {"illness_spread_days", d.illness_spread_days},
        {"asymptomatic_share_under_65", d.asymptomatic_share_under_65},
        {"serious_duration_factor", d.serious_duration_factor},
        {"recovery_immunity_days", days_to_json(d.recovery_immunity_days)},
    };
}

PopulationConfig population_from_json(const json& j, PopulationConfig p)
{
    require_object(j, "population");
    read_field(j, "size", p.size);
    read_field(j, "worker_share_20_65", p.worker_share_20_65);
    if (auto it = j.find("age_distribution"); it != j.end()) {
        if (!it->is_array()) {
            throw ConfigError("age_distribution must be an array");
        }
        p.age_distribution.clear();
        for (const auto& b : *it) {
            require_object(b, "age band");
            AgeBand band;
            read_field(b, "min_age", band.min_age);
            read_field(b, "max_age", band.max_age);
            read_field(b, "share", band.share);
            p.age_distribution.push_back(band);
        }
    }
    if (auto it = j.find("risk"); it != j.end()) {
        require_object(*it, "risk");
        read_field(*it, "age_slope", p.risk.age_slope);
        read_field(*it, "noise_max", p.risk.noise_max);
    }
    if (auto it = j.find("contacts"); it != j.end()) {
        require_object(*it, "contacts");
        read_field(*it, "base_min", p.contacts.base_min);
        read_field(*it, "base_max", p.contacts.base_max);
        read_field(*it, "youth_max", p.contacts.youth_max);
        read_field(*it, "risk_max", p.contacts.risk_max);
        read_field(*it, "worker_bonus", p.contacts.worker_bonus);
    }
    return p;
}

DiseaseConfig disease_from_json(const json& j, DiseaseConfig d)
{
    require_object(j, "disease");
    read_field(j, "p_transmission", d.p_transmission);
    read_field(j, "incubation_mean_days", d.incubation_mean_days);
    read_field(j, "incubation_max_days", d.incubation_max_days);
    read_field(j, "illness_mean_days", d.illness_mean_days);
    read_field(j, "illness_spread_days", d.illness_spread_days);
    read_field(j, "asymptomatic_share_under_65", d.asymptomatic_share_under_65);
    read_field(j, "serious_duration_factor", d.serious_duration_factor);
    if (j.contains("recovery_immunity_days")) {
        d.recovery_immunity_days = days_from_json(j["recovery_immunity_days"]);
    }
    return d;
}

} // namespace

nlohmann::json to_json(const ScreeningConfig& s)
{
    return {
        {"enabled", s.enabled},
        {"daily_tests", s.daily_tests},
        {"trigger_symptomatic_share", s.trigger_symptomatic_share},
        {"target", to_string(s.target)},
        {"retest_cooldown_days", s.retest_cooldown_days},
        {"false_positive_quarantine_days", s.false_positive_quarantine_days},
        {"params", {{"sensitivity", s.params.sensitivity}, {"specificity", s.params.specificity}}},
    };
}

nlohmann::json to_json(const VaccinationConfig& v)
{
    return {
        {"enabled", v.enabled},
        {"trigger_infected_share", v.trigger_infected_share},
        {"daily_doses", v.daily_doses},
        {"strategy", to_string(v.strategy)},
        {"efficiency", v.efficiency},
        {"vaccine_immunity_days", days_to_json(v.vaccine_immunity_days)},
    };
}

nlohmann::json to_json(const SimConfig& cfg)
{
    return {
        {"population", to_json(cfg.population)},
        {"disease", to_json(cfg.disease)},
        {"screening", to_json(cfg.screening)},
        {"vaccination", to_json(cfg.vaccination)},
        {"initial_infected", cfg.initial_infected},
        {"max_days", cfg.max_days},
        {"seed", cfg.seed},
    };
}

nlohmann::json to_json(const RunSummary& s)
{
    return {
        {"seed", s.seed},
        {"duration_days", s.duration_days},
        {"serious_total", s.serious_total},
        {"peak_daily_new_infections", s.peak_daily_new_infections},
        {"infected_total", s.infected_total},
        {"vaccines_total", s.vaccines_total},
        {"truncated", s.truncated},
    };
}

nlohmann::json to_json(const BatchSummary& b)
{
    auto stat = [](const Stat& s) {
        return json{{"mean", s.mean}, {"sd", s.sd}};
    };
    return {
        {"fingerprint", b.fingerprint},
        {"n_runs", b.n_runs},
        {"duration_days", stat(b.duration_days)},
        {"serious_total", stat(b.serious_total)},
        {"peak_daily_new_infections", stat(b.peak_daily_new_infections)},
        {"infected_total", stat(b.infected_total)},
        {"vaccines_total", stat(b.vaccines_total)},
    };
}

ScreeningConfig screening_config_from_json(const nlohmann::json& j, ScreeningConfig s)
{
    require_object(j, "screening");
    read_field(j, "enabled", s.enabled);
    read_field(j, "daily_tests", s.daily_tests);
    read_field(j, "trigger_symptomatic_share", s.trigger_symptomatic_share);
    if (j.contains("target")) {
        std::string name;
        read_field(j, "target", name);
        s.target = parse_screening_target(name);
    }
    read_field(j, "retest_cooldown_days", s.retest_cooldown_days);
    read_field(j, "false_positive_quarantine_days", s.false_positive_quarantine_days);
    if (auto it = j.find("params"); it != j.end()) {
        require_object(*it, "params");
        read_field(*it, "sensitivity", s.params.sensitivity);
        read_field(*it, "specificity", s.params.specificity);
    }
    return s;
}

VaccinationConfig vaccination_config_from_json(const nlohmann::json& j, VaccinationConfig v)
{
    require_object(j, "vaccination");
    read_field(j, "enabled", v.enabled);
    read_field(j, "trigger_infected_share", v.trigger_infected_share);
    read_field(j, "daily_doses", v.daily_doses);
    if (j.contains("strategy")) {
        std::string name;
        read_field(j, "strategy", name);
        v.strategy = parse_vaccination_strategy(name);
    }
    read_field(j, "efficiency", v.efficiency);
    if (j.contains("vaccine_immunity_days")) {
        v.vaccine_immunity_days = days_from_json(j["vaccine_immunity_days"]);
    }
    return v;
}

SimConfig sim_config_from_json(const nlohmann::json& j, SimConfig cfg)
{
    require_object(j, "config");
    if (auto it = j.find("population"); it != j.end()) {
        cfg.population = population_from_json(*it, cfg.population);
    }
    if (auto it = j.find("disease"); it != j.end()) {
        cfg.disease = disease_from_json(*it, cfg.disease);
    }
    if (auto it = j.find("screening"); it != j.end()) {
        cfg.screening = screening_config_from_json(*it, cfg.screening);
    }
    if (auto it = j.find("vaccination"); it != j.end()) {
        cfg.vaccination = vaccination_config_from_json(*it, cfg.vaccination);
    }
    read_field(j, "initial_infected", cfg.initial_infected);
    read_field(j, "max_days", cfg.max_days);
    read_field(j, "seed", cfg.seed);
    return cfg;
}

SimConfig load_sim_config(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) {
        throw ConfigError("cannot open config file " + path.string());
    }
    nlohmann::json j;
    try {
        is >> j;
    }
    catch (const nlohmann::json::exception& e) {
        throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
    }
    return sim_config_from_json(j);
}

void write_run(const RunResult& run, const SimConfig& cfg, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    auto open = [&](const char* name) {
        std::ofstream os(dir / name);
        if (!os) {
            throw std::runtime_error("cannot write " + (dir / name).string());
        }
        return os;
    };
    {
        auto os = open("history.csv");
        write_history_csv(os, run.history);
    }
    {
        auto os = open("estimates.csv");
        write_estimates_csv(os, run.estimates);
    }
    {
        auto os = open("population.csv");
        write_population_csv(os, run.agents);
    }
    {
        auto os = open("tests.csv");
        write_test_log_csv(os, run.tests);
    }
    auto summary      = to_json(run.summary);
    summary["config"] = to_json(cfg);
    open("summary.json") << summary.dump(2) << '\n';
}

} // namespace episim
