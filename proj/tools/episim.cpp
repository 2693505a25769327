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
#include "episim/harness.h"
#include "episim/io.h"
#include "episim/server.h"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iostream>
#include <optional>
#include <pthread.h>

namespace
{

using namespace episim;

/// Flags mirroring SimConfig. Unset flags keep the value from --config or the defaults.
struct ConfigFlags {
    std::optional<std::string> config_file;

    std::optional<int> population_size;
    std::optional<std::string> age_bands;
    std::optional<double> worker_share;
    std::optional<double> risk_age_slope;
    std::optional<double> risk_noise_max;
    std::optional<double> contacts_base_min;
    std::optional<double> contacts_base_max;
    std::optional<double> contacts_youth_max;
    std::optional<double> contacts_risk_max;
    std::optional<int> worker_bonus;

    std::optional<double> p_transmission;
    std::optional<double> incubation_mean;
    std::optional<int> incubation_max;
    std::optional<int> illness_mean;
    std::optional<int> illness_spread;
    std::optional<double> asymptomatic_share;
    std::optional<double> serious_duration_factor;
    std::optional<std::string> recovery_immunity;

    std::optional<bool> screening;
    std::optional<int> daily_tests;
    std::optional<double> screening_trigger;
    std::optional<std::string> screening_target;
    std::optional<int> retest_cooldown;
    std::optional<int> fp_quarantine;
    std::optional<double> sensitivity;
    std::optional<double> specificity;

    std::optional<bool> vaccination;
    std::optional<double> vaccination_trigger;
    std::optional<int> daily_doses;
    std::optional<std::string> vaccination_strategy;
    std::optional<double> efficiency;
    std::optional<std::string> vaccine_immunity;

    std::optional<int> initial_infected;
    std::optional<int> max_days;
};

void add_config_flags(CLI::App& app, ConfigFlags& f)
{
    app.add_option("--config", f.config_file, "JSON SimConfig to start from");

    app.add_option("--population-size", f.population_size, "Number of agents");
    app.add_option("--age-bands", f.age_bands, "Age distribution as min-max:share,... (e.g. 0-19:0.24,20-64:0.56,65-100:0.2)");
    app.add_option("--worker-share", f.worker_share, "Share of agents aged 20-65 working outside");
    app.add_option("--risk-age-slope", f.risk_age_slope);
    app.add_option("--risk-noise-max", f.risk_noise_max);
    app.add_option("--contacts-base-min", f.contacts_base_min);
    app.add_option("--contacts-base-max", f.contacts_base_max);
    app.add_option("--contacts-youth-max", f.contacts_youth_max);
    app.add_option("--contacts-risk-max", f.contacts_risk_max);
    app.add_option("--worker-bonus", f.worker_bonus, "Extra daily contacts of workers");

    app.add_option("--p-transmission", f.p_transmission, "Infection probability per contact");
    app.add_option("--incubation-mean", f.incubation_mean);
    app.add_option("--incubation-max", f.incubation_max);
    app.add_option("--illness-mean", f.illness_mean);
    app.add_option("--illness-spread", f.illness_spread);
    app.add_option("--asymptomatic-share", f.asymptomatic_share, "Asymptomatic share below age 65");
    app.add_option("--serious-duration-factor", f.serious_duration_factor);
    app.add_option("--recovery-immunity", f.recovery_immunity, "Days of immunity after recovery, or inf");

    app.add_flag("--screening,!--no-screening", f.screening, "Enable the testing campaign");
    app.add_option("--daily-tests", f.daily_tests);
    app.add_option("--screening-trigger", f.screening_trigger, "Symptomatic share that starts testing");
    app.add_option("--screening-target", f.screening_target, "random, symptomatic, elderly or workers");
    app.add_option("--retest-cooldown", f.retest_cooldown);
    app.add_option("--fp-quarantine", f.fp_quarantine, "Quarantine days after a false positive");
    app.add_option("--sensitivity", f.sensitivity);
    app.add_option("--specificity", f.specificity);

    app.add_flag("--vaccination,!--no-vaccination", f.vaccination, "Enable the vaccination campaign");
    app.add_option("--vaccination-trigger", f.vaccination_trigger, "Infected share that starts vaccination");
    app.add_option("--daily-doses", f.daily_doses);
    app.add_option("--vaccination-strategy", f.vaccination_strategy, "random, risk_first or contacts_first");
    app.add_option("--efficiency", f.efficiency, "Vaccine efficiency");
    app.add_option("--vaccine-immunity", f.vaccine_immunity, "Days of vaccine immunity, or inf");

    app.add_option("--initial-infected", f.initial_infected);
    app.add_option("--max-days", f.max_days);
}

int parse_days(const std::string& text)
{
    if (text == "inf" || text == "forever") {
        return kForever;
    }
    try {
        std::size_t used = 0;
        int days         = std::stoi(text, &used);
        if (used == text.size()) {
            return days;
        }
    }
    catch (const std::exception&) {
    }
    throw ConfigError("expected a number of days or inf, got '" + text + "'");
}

std::vector<AgeBand> parse_age_bands(const std::string& text)
{
    std::vector<AgeBand> bands;
    std::istringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        AgeBand band;
        char dash = 0;
        char colon = 0;
        std::istringstream is(item);
        if (!(is >> band.min_age >> dash >> band.max_age >> colon >> band.share) || dash != '-' || colon != ':') {
            throw ConfigError("bad age band '" + item + "'");
        }
        bands.push_back(band);
    }
    return bands;
}

template <class T>
void set_if(T& target, const std::optional<T>& value)
{
    if (value) {
        target = *value;
    }
}

SimConfig build_config(const ConfigFlags& f)
{
    SimConfig cfg = f.config_file ? load_sim_config(*f.config_file) : SimConfig{};

    auto& pop = cfg.population;
    set_if(pop.size, f.population_size);
    if (f.age_bands) {
        pop.age_distribution = parse_age_bands(*f.age_bands);
    }
    set_if(pop.worker_share_20_65, f.worker_share);
    set_if(pop.risk.age_slope, f.risk_age_slope);
    set_if(pop.risk.noise_max, f.risk_noise_max);
    set_if(pop.contacts.base_min, f.contacts_base_min);
    set_if(pop.contacts.base_max, f.contacts_base_max);
    set_if(pop.contacts.youth_max, f.contacts_youth_max);
    set_if(pop.contacts.risk_max, f.contacts_risk_max);
    set_if(pop.contacts.worker_bonus, f.worker_bonus);

    auto& d = cfg.disease;
    set_if(d.p_transmission, f.p_transmission);
    set_if(d.incubation_mean_days, f.incubation_mean);
    set_if(d.incubation_max_days, f.incubation_max);
    set_if(d.illness_mean_days, f.illness_mean);
    set_if(d.illness_spread_days, f.illness_spread);
    set_if(d.asymptomatic_share_under_65, f.asymptomatic_share);
    set_if(d.serious_duration_factor, f.serious_duration_factor);
    if (f.recovery_immunity) {
        d.recovery_immunity_days = parse_days(*f.recovery_immunity);
    }

    auto& s = cfg.screening;
    set_if(s.enabled, f.screening);
    set_if(s.daily_tests, f.daily_tests);
    set_if(s.trigger_symptomatic_share, f.screening_trigger);
    if (f.screening_target) {
        s.target = parse_screening_target(*f.screening_target);
    }
    set_if(s.retest_cooldown_days, f.retest_cooldown);
    set_if(s.false_positive_quarantine_days, f.fp_quarantine);
    set_if(s.params.sensitivity, f.sensitivity);
    set_if(s.params.specificity, f.specificity);

    auto& v = cfg.vaccination;
    set_if(v.enabled, f.vaccination);
    set_if(v.trigger_infected_share, f.vaccination_trigger);
    set_if(v.daily_doses, f.daily_doses);
    if (f.vaccination_strategy) {
        v.strategy = parse_vaccination_strategy(*f.vaccination_strategy);
    }
    set_if(v.efficiency, f.efficiency);
    if (f.vaccine_immunity) {
        v.vaccine_immunity_days = parse_days(*f.vaccine_immunity);
    }

    set_if(cfg.initial_infected, f.initial_infected);
    set_if(cfg.max_days, f.max_days);
    cfg.validate();
    return cfg;
}

int cmd_run(const ConfigFlags& flags, std::uint64_t seed, const std::string& out)
{
    auto cfg = build_config(flags);
    cfg.seed = seed;
    auto run = run_simulation(cfg, seed);
    write_run(run, cfg, out);
    std::cout << to_json(run.summary).dump(2) << std::endl;
    return 0;
}

int cmd_batch(const ConfigFlags& flags, int runs, std::uint64_t base_seed, unsigned threads, const std::string& out)
{
    auto cfg   = build_config(flags);
    auto batch = run_batch(cfg, runs, base_seed, threads);
    std::filesystem::create_directories(out);
    std::ofstream csv(std::filesystem::path(out) / "batch.csv");
    write_batch_csv(csv, batch.runs);
    auto summary      = to_json(batch);
    summary["config"] = to_json(cfg);
    std::ofstream(std::filesystem::path(out) / "summary.json") << summary.dump(2) << "\n";
    std::cout << to_json(batch).dump(2) << std::endl;
    return 0;
}

int cmd_experiment(const ConfigFlags& flags, const std::string& name, int runs, std::uint64_t base_seed,
                   const std::string& out)
{
    auto cfg = build_config(flags);
    if (name == "vax-sweep") {
        auto report = experiment_vaccination_sweep(cfg, runs, base_seed);
        write_report(report, out);
    }
    else {
        ScreeningReport report;
        if (name == "samples") {
            report = experiment_screening_samples(cfg, runs, base_seed);
        }
        else if (name == "intensity") {
            report = experiment_screening_intensity(cfg, runs, base_seed);
        }
        else {
            report = experiment_screening_timing(cfg, runs, base_seed);
        }
        write_report(report, out);
        for (const auto& cell : report.cells) {
            std::cout << cell.label << ": MAE proportional " << cell.mean_of(&ScreeningRunMetrics::mae_proportional)
                      << ", predictive " << cell.mean_of(&ScreeningRunMetrics::mae_predictive) << "\n";
        }
    }
    std::cout << "report written to " << out << std::endl;
    return 0;
}

int cmd_serve(unsigned short port, const std::string& static_dir, unsigned threads)
{
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);

    ServerOptions options;
    options.address    = bind_address_from_env();
    options.port       = port;
    options.static_dir = static_dir;
    options.threads    = threads;
    Server server(options);
    server.start();
    std::cout << "listening on " << options.address << ":" << server.port() << std::endl;

    int received = 0;
    sigwait(&signals, &received);
    server.stop();
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"episim: agent-based epidemic simulator with screening and vaccination campaigns"};
    app.require_subcommand(1);

    ConfigFlags run_flags;
    std::uint64_t seed = 0;
    std::string run_out = "out";
    auto* run = app.add_subcommand("run", "Simulate one epidemic and write its CSV and JSON outputs");
    add_config_flags(*run, run_flags);
    run->add_option("--seed", seed, "Random seed");
    run->add_option("--out", run_out, "Output directory");

    ConfigFlags batch_flags;
    int batch_runs = 20;
    std::uint64_t batch_seed = 1;
    unsigned batch_threads = 0;
    std::string batch_out = "out";
    auto* batch = app.add_subcommand("batch", "Run one configuration over consecutive seeds");
    add_config_flags(*batch, batch_flags);
    batch->add_option("--runs", batch_runs, "Number of seeds")->check(CLI::PositiveNumber);
    batch->add_option("--base-seed", batch_seed, "First seed");
    batch->add_option("--threads", batch_threads, "Worker threads (0 = hardware)");
    batch->add_option("--out", batch_out, "Output directory");

    ConfigFlags exp_flags;
    std::string exp_name;
    int exp_runs = 20;
    std::uint64_t exp_seed = 1;
    std::string exp_out = "out";
    auto* experiment = app.add_subcommand("experiment", "Reproduce a screening or vaccination experiment");
    experiment->add_option("name", exp_name, "samples, intensity, timing or vax-sweep")
        ->required()
        ->check(CLI::IsMember({"samples", "intensity", "timing", "vax-sweep"}));
    add_config_flags(*experiment, exp_flags);
    experiment->add_option("--runs", exp_runs, "Seeds per cell")->check(CLI::PositiveNumber);
    experiment->add_option("--base-seed", exp_seed, "First seed");
    experiment->add_option("--out", exp_out, "Output directory");

    unsigned short port = 8080;
    std::string static_dir;
    unsigned serve_threads = 1;
    auto* serve = app.add_subcommand(
        "serve", std::string("Serve interactive sessions over HTTP and WebSocket (bind address from ") +
                     kBindAddressEnv + ")");
    serve->add_option("--port", port, "TCP port");
    serve->add_option("--static", static_dir, "Directory of dashboard assets to serve");
    serve->add_option("--threads", serve_threads, "I/O threads");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(run_flags, seed, run_out);
        }
        if (batch->parsed()) {
            return cmd_batch(batch_flags, batch_runs, batch_seed, batch_threads, batch_out);
        }
        if (experiment->parsed()) {
            return cmd_experiment(exp_flags, exp_name, exp_runs, exp_seed, exp_out);
        }
        return cmd_serve(port, static_dir, serve_threads);
    }
    catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << std::endl;
        return 2;
    }
    catch (const ParseError& e) {
        std::cerr << "input error: " << e.what() << std::endl;
        return 2;
    }
    catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
}
