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
#include "episim/service.h"
#include "episim/dynamics.h"
#include "episim/io.h"

#include <algorithm>
#include <array>

namespace episim
{

namespace
{

constexpr std::array<std::pair<CommandKind, std::string_view>, 8> kCommandNames{{
    {CommandKind::Start, "start"},
    {CommandKind::Pause, "pause"},
    {CommandKind::Step, "step"},
    {CommandKind::Reset, "reset"},
    {CommandKind::SetScreening, "set_screening"},
    {CommandKind::SetVaccination, "set_vaccination"},
    {CommandKind::InjectInfected, "inject_infected"},
    {CommandKind::ToggleLockdown, "toggle_lockdown"},
}};

void require_estimable(const TestParams& params)
{
    if (params.sensitivity + params.specificity <= 1.0) {
        throw ConfigError("sensitivity + specificity must exceed 1");
    }
}

template <class T>
T field(const nlohmann::json& j, const char* key)
{
    try {
        return j.at(key).get<T>();
    }
    catch (const nlohmann::json::exception&) {
        throw ProtocolError(std::string("missing or invalid field '") + key + "'");
    }
}

template <class T>
T optional_field(const nlohmann::json& j, const char* key, T fallback)
{
    if (!j.contains(key)) {
        return fallback;
    }
    return field<T>(j, key);
}

} // namespace

std::string to_string(CommandKind kind)
{
    for (const auto& [k, name] : kCommandNames) {
        if (k == kind) {
            return std::string(name);
        }
    }
    return "unknown";
}

CommandKind parse_command_kind(std::string_view text)
{
    for (const auto& [k, name] : kCommandNames) {
        if (name == text) {
            return k;
        }
    }
    throw ProtocolError("unknown command '" + std::string(text) + "'");
}

Command parse_command(const nlohmann::json& msg)
{
    if (!msg.is_object()) {
        throw ProtocolError("message must be a JSON object");
    }
    if (field<std::string>(msg, "type") != "command") {
        throw ProtocolError("expected a message of type 'command'");
    }
    Command cmd;
    cmd.kind = parse_command_kind(field<std::string>(msg, "kind"));
    cmd.id   = optional_field<std::string>(msg, "id", "");
    switch (cmd.kind) {
    case CommandKind::Start:
        cmd.days_per_second = optional_field<double>(msg, "days_per_second", 5.0);
        if (!(cmd.days_per_second > 0.0) || cmd.days_per_second > 1000.0) {
            throw ProtocolError("days_per_second must be in (0, 1000]");
        }
        break;
    case CommandKind::Step:
        cmd.n = optional_field<int>(msg, "n", 1);
        if (cmd.n < 1) {
            throw ProtocolError("step needs n >= 1");
        }
        break;
    case CommandKind::InjectInfected:
        cmd.n = optional_field<int>(msg, "n", 1);
        if (cmd.n < 0) {
            throw ProtocolError("inject_infected needs n >= 0");
        }
        break;
    case CommandKind::Reset:
    case CommandKind::SetScreening:
    case CommandKind::SetVaccination:
        if (msg.contains("config")) {
            cmd.config = msg.at("config");
        }
        else if (cmd.kind != CommandKind::Reset) {
            throw ProtocolError("missing field 'config'");
        }
        if (!cmd.config.is_object()) {
            throw ProtocolError("'config' must be an object");
        }
        try {
            if (cmd.kind == CommandKind::Reset) {
                (void)sim_config_from_json(cmd.config);
            }
            else if (cmd.kind == CommandKind::SetScreening) {
                (void)screening_config_from_json(cmd.config);
            }
            else {
                (void)vaccination_config_from_json(cmd.config);
            }
        }
        catch (const ConfigError& e) {
            throw ProtocolError(e.what());
        }
        break;
    case CommandKind::Pause:
    case CommandKind::ToggleLockdown:
        break;
    }
    return cmd;
}

nlohmann::json to_json(const Command& cmd)
{
    nlohmann::json j{{"type", "command"}, {"kind", to_string(cmd.kind)}};
    switch (cmd.kind) {
    case CommandKind::Start:
        j["days_per_second"] = cmd.days_per_second;
        break;
    case CommandKind::Step:
    case CommandKind::InjectInfected:
        j["n"] = cmd.n;
        break;
    case CommandKind::Reset:
    case CommandKind::SetScreening:
    case CommandKind::SetVaccination:
        j["config"] = cmd.config;
        break;
    default:
        break;
    }
    if (!cmd.id.empty()) {
        j["id"] = cmd.id;
    }
    return j;
}

StateFrame make_frame(const DailyRecord& record, const EstimatePoint& estimate, const Indicators& cumulative)
{
    StateFrame f;
    f.day            = record.day;
    f.census         = record.census;
    f.new_infections = record.new_infections;
    f.new_serious    = record.new_serious;
    f.tests_done     = record.tests_done;
    f.positives      = record.positives;
    f.doses_given    = record.doses_given;
    f.in_quarantine  = record.in_quarantine;
    f.lockdown       = record.lockdown_active;
    f.estimates      = {estimate.true_infected, estimate.est_proportional, estimate.est_predictive, estimate.ppv,
                        estimate.npv};
    f.cumulative     = cumulative;
    return f;
}

Indicators indicators_of(const SimState& state)
{
    Indicators ind;
    ind.duration_days = state.day;
    for (const auto& r : state.history) {
        ind.serious_total += r.new_serious;
        ind.vaccines_total += r.doses_given;
        ind.peak_daily_new_infections = std::max(ind.peak_daily_new_infections, r.new_infections);
    }
    for (const auto& a : state.agents) {
        ind.infected_total += a.times_sick;
    }
    return ind;
}

nlohmann::json to_json(const StateFrame& f)
{
    nlohmann::json census = nlohmann::json::object();
    for (std::size_t s = 0; s < kNumStates; ++s) {
        census[std::string(to_string(static_cast<EpiState>(s)))] = f.census[s];
    }
    return {
        {"day", f.day},
        {"census", census},
        {"new_infections", f.new_infections},
        {"new_serious", f.new_serious},
        {"tests_done", f.tests_done},
        {"positives", f.positives},
        {"doses_given", f.doses_given},
        {"in_quarantine", f.in_quarantine},
        {"lockdown", f.lockdown},
        {"estimates",
         {{"true", f.estimates.true_infected},
          {"proportional", f.estimates.proportional},
          {"predictive", f.estimates.predictive},
          {"ppv", f.estimates.ppv},
          {"npv", f.estimates.npv}}},
        {"cumulative",
         {{"duration_days", f.cumulative.duration_days},
          {"serious_total", f.cumulative.serious_total},
          {"peak_daily_new_infections", f.cumulative.peak_daily_new_infections},
          {"infected_total", f.cumulative.infected_total},
          {"vaccines_total", f.cumulative.vaccines_total}}},
    };
}

StateFrame frame_from_json(const nlohmann::json& j)
{
    StateFrame f;
    f.day         = field<int>(j, "day");
    auto census   = field<nlohmann::json>(j, "census");
    for (std::size_t s = 0; s < kNumStates; ++s) {
        f.census[s] = field<int>(census, std::string(to_string(static_cast<EpiState>(s))).c_str());
    }
    f.new_infections = field<int>(j, "new_infections");
    f.new_serious    = field<int>(j, "new_serious");
    f.tests_done     = field<int>(j, "tests_done");
    f.positives      = field<int>(j, "positives");
    f.doses_given    = field<int>(j, "doses_given");
    f.in_quarantine  = field<int>(j, "in_quarantine");
    f.lockdown       = field<bool>(j, "lockdown");
    auto est         = field<nlohmann::json>(j, "estimates");
    f.estimates      = {field<int>(est, "true"), field<double>(est, "proportional"), field<double>(est, "predictive"),
                        field<double>(est, "ppv"), field<double>(est, "npv")};
    auto cum         = field<nlohmann::json>(j, "cumulative");
    f.cumulative     = {field<int>(cum, "duration_days"), field<int>(cum, "serious_total"),
                        field<int>(cum, "peak_daily_new_infections"), field<int>(cum, "infected_total"),
                        field<int>(cum, "vaccines_total")};
    return f;
}

nlohmann::json to_json(const Reply& reply)
{
    nlohmann::json j{{"type", reply.ok ? "ack" : "error"}, {"kind", to_string(reply.kind)}, {"day", reply.day}};
    if (!reply.ok) {
        j["message"] = reply.message;
    }
    if (!reply.id.empty()) {
        j["id"] = reply.id;
    }
    return j;
}

nlohmann::json error_message(const std::string& message, const std::string& id)
{
    nlohmann::json j{{"type", "error"}, {"message", message}};
    if (!id.empty()) {
        j["id"] = id;
    }
    return j;
}

std::string to_line(const nlohmann::json& j)
{
    return j.dump() + "\n";
}

Simulation::Simulation(SimConfig cfg)
    : m_tracker(1, cfg.screening.params)
{
    rebuild(std::move(cfg));
}

void Simulation::rebuild(SimConfig cfg)
{
    require_estimable(cfg.screening.params);
    auto state = make_state(cfg);
    EstimateTracker tracker(state.population(), cfg.screening.params);
    m_config     = std::move(cfg);
    m_state      = std::move(state);
    m_tracker    = std::move(tracker);
    m_cumulative = indicators_of(m_state);
    m_frames.clear();
    m_running = false;
    m_pending = 0;
}

bool Simulation::finished() const
{
    return m_state.day >= 1 && !has_infectious(m_state);
}

Reply Simulation::apply(const Command& cmd)
{
    Reply reply;
    reply.kind = cmd.kind;
    reply.day  = m_state.day;
    reply.id   = cmd.id;
    auto reject = [&](std::string message) {
        reply.ok      = false;
        reply.message = std::move(message);
        return reply;
    };

    bool allowed_when_finished = cmd.kind == CommandKind::InjectInfected || cmd.kind == CommandKind::Reset;
    if (finished() && !allowed_when_finished) {
        return reject("session finished: only inject_infected and reset are accepted");
    }

    try {
        switch (cmd.kind) {
        case CommandKind::Start:
            if (!(cmd.days_per_second > 0.0)) {
                return reject("days_per_second must be positive");
            }
            m_running         = true;
            m_days_per_second = cmd.days_per_second;
            break;
        case CommandKind::Pause:
            m_running = false;
            break;
        case CommandKind::Step:
            if (cmd.n < 1) {
                return reject("step needs n >= 1");
            }
            m_pending += cmd.n;
            break;
        case CommandKind::Reset:
            rebuild(sim_config_from_json(cmd.config, m_config));
            reply.day = 0;
            break;
        case CommandKind::SetScreening: {
            auto screening = screening_config_from_json(cmd.config, m_state.screening);
            screening.validate();
            require_estimable(screening.params);
            m_state.screening  = screening;
            m_config.screening = screening;
            m_tracker.set_params(screening.params);
            break;
        }
        case CommandKind::SetVaccination: {
            auto vaccination = vaccination_config_from_json(cmd.config, m_state.vaccination);
            vaccination.validate();
            m_state.vaccination  = vaccination;
            m_config.vaccination = vaccination;
            break;
        }
        case CommandKind::InjectInfected:
            if (cmd.n < 0) {
                return reject("inject_infected needs n >= 0");
            }
            introduce_infected(m_state, cmd.n);
            break;
        case CommandKind::ToggleLockdown:
            set_lockdown(m_state, !m_state.lockdown);
            break;
        }
    }
    catch (const ConfigError& e) {
        return reject(e.what());
    }
    return reply;
}

const StateFrame& Simulation::advance()
{
    auto record = step(m_state);
    auto point  = m_tracker.push(record);

    m_cumulative.duration_days = record.day;
    m_cumulative.serious_total += record.new_serious;
    m_cumulative.vaccines_total += record.doses_given;
    m_cumulative.peak_daily_new_infections =
        std::max(m_cumulative.peak_daily_new_infections, record.new_infections);
    m_cumulative.infected_total = 0;
    for (const auto& a : m_state.agents) {
        m_cumulative.infected_total += a.times_sick;
    }

    m_frames.push_back(make_frame(record, point, m_cumulative));
    if (m_pending > 0) {
        --m_pending;
    }
    if (finished()) {
        m_pending = 0;
        m_running = false;
    }
    return m_frames.back();
}

StateFrame Simulation::snapshot() const
{
    if (!m_frames.empty()) {
        return m_frames.back();
    }
    DailyRecord record;
    record.day             = m_state.day;
    record.census          = m_state.census();
    record.lockdown_active = m_state.lockdown;
    EstimatePoint point;
    point.day           = m_state.day;
    point.true_infected = record.infected();
    return make_frame(record, point, indicators_of(m_state));
}

std::vector<StateFrame> run_script(const SimConfig& cfg, const std::vector<Command>& script)
{
    Simulation sim(cfg);
    for (const auto& cmd : script) {
        if (!sim.apply(cmd).ok) {
            continue;
        }
        while (sim.pending_steps() > 0) {
            sim.advance();
        }
        while (sim.running() && sim.day() < sim.config().max_days) {
            sim.advance();
        }
    }
    return sim.frames();
}

namespace
{

std::string frame_line(const StateFrame& frame)
{
    auto j    = to_json(frame);
    j["type"] = "frame";
    return to_line(j);
}

} // namespace

Session::Session(std::string id, SimConfig cfg)
    : m_id(std::move(id))
    , m_sim(std::move(cfg))
{
    m_thread = std::jthread([this] {
        loop();
    });
}

Session::~Session()
{
    stop();
}

void Session::stop()
{
    {
        std::lock_guard lock(m_mutex);
        m_stop = true;
    }
    m_cv.notify_all();
    if (m_thread.joinable() && m_thread.get_id() != std::this_thread::get_id()) {
        m_thread.join();
    }
}

void Session::submit(Command cmd, std::uint64_t subscriber)
{
    {
        std::lock_guard lock(m_mutex);
        m_queue.emplace_back(std::move(cmd), subscriber);
    }
    m_cv.notify_all();
}

std::uint64_t Session::subscribe(Sink sink, int last_seen)
{
    std::lock_guard lock(m_mutex);
    for (const auto& frame : m_sim.frames()) {
        if (frame.day > last_seen) {
            sink(frame_line(frame));
        }
    }
    auto handle = m_next_sink++;
    m_sinks.emplace(handle, std::move(sink));
    return handle;
}

void Session::unsubscribe(std::uint64_t subscriber)
{
    std::lock_guard lock(m_mutex);
    m_sinks.erase(subscriber);
}

void Session::send_to(std::uint64_t subscriber, const std::string& line)
{
    std::lock_guard lock(m_mutex);
    if (auto it = m_sinks.find(subscriber); it != m_sinks.end()) {
        it->second(line);
    }
}

StateFrame Session::snapshot() const
{
    std::lock_guard lock(m_mutex);
    return m_sim.snapshot();
}

std::vector<StateFrame> Session::frames_since(int last_seen) const
{
    std::lock_guard lock(m_mutex);
    std::vector<StateFrame> out;
    for (const auto& frame : m_sim.frames()) {
        if (frame.day > last_seen) {
            out.push_back(frame);
        }
    }
    return out;
}

void Session::broadcast(const std::string& line)
{
    for (auto& [handle, sink] : m_sinks) {
        sink(line);
    }
}

void Session::loop()
{
    using clock = std::chrono::steady_clock;
    std::unique_lock lock(m_mutex);
    auto next_tick   = clock::now();
    bool was_running = false;
    auto wake        = [this] {
        return m_stop || !m_queue.empty();
    };

    while (!m_stop) {
        if (m_sim.pending_steps() > 0) {
            broadcast(frame_line(m_sim.advance()));
            continue;
        }
        if (!m_queue.empty()) {
            auto [cmd, subscriber] = std::move(m_queue.front());
            m_queue.pop_front();
            auto reply = m_sim.apply(cmd);
            if (auto it = m_sinks.find(subscriber); it != m_sinks.end()) {
                it->second(to_line(to_json(reply)));
            }
            continue;
        }
        if (m_sim.running()) {
            auto period = std::chrono::duration_cast<clock::duration>(
                std::chrono::duration<double>(1.0 / m_sim.days_per_second()));
            if (!was_running) {
                next_tick   = clock::now() + period;
                was_running = true;
            }
            if (m_cv.wait_until(lock, next_tick, wake)) {
                continue;
            }
            broadcast(frame_line(m_sim.advance()));
            next_tick = std::max(next_tick + period, clock::now());
            continue;
        }
        was_running = false;
        m_cv.wait(lock, wake);
    }
}

std::shared_ptr<Session> SessionRegistry::create(const SimConfig& cfg)
{
    std::lock_guard lock(m_mutex);
    auto id      = std::to_string(m_next++);
    auto session = std::make_shared<Session>(id, cfg);
    m_sessions.emplace(id, session);
    return session;
}

std::shared_ptr<Session> SessionRegistry::find(const std::string& id) const
{
    std::lock_guard lock(m_mutex);
    auto it = m_sessions.find(id);
    return it == m_sessions.end() ? nullptr : it->second;
}

std::size_t SessionRegistry::size() const
{
    std::lock_guard lock(m_mutex);
    return m_sessions.size();
}

void SessionRegistry::stop_all()
{
    std::lock_guard lock(m_mutex);
    for (auto& [id, session] : m_sessions) {
        session->stop();
    }
}

} // namespace episim
