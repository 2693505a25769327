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
#ifndef EPISIM_SERVICE_H
#define EPISIM_SERVICE_H

#include "episim/config.h"
#include "episim/estimation.h"
#include "episim/sim_state.h"

#include <nlohmann/json.hpp>

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace episim
{

/// A client message that cannot be turned into a Command.
class ProtocolError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

enum class CommandKind
{
    Start,
    Pause,
    Step,
    Reset,
    SetScreening,
    SetVaccination,
    InjectInfected,
    ToggleLockdown,
};

std::string to_string(CommandKind kind);
CommandKind parse_command_kind(std::string_view text);

struct Command {
    CommandKind kind = CommandKind::Pause;
    int n            = 1; // step, inject_infected
    double days_per_second = 5.0; // start
    /// Partial config for reset, set_screening and set_vaccination. Missing keys keep the current values.
    nlohmann::json config = nlohmann::json::object();
    /// Optional client tag, echoed in the reply.
    std::string id;
};

/**
 * @brief Decode {"type":"command","kind":...} with its payload.
 * @throws ProtocolError on a malformed message or an invalid payload.
 */
Command parse_command(const nlohmann::json& msg);
nlohmann::json to_json(const Command& cmd);

struct Indicators {
    int duration_days             = 0;
    int serious_total             = 0;
    int peak_daily_new_infections = 0;
    int infected_total            = 0;
    int vaccines_total            = 0;

    friend bool operator==(const Indicators&, const Indicators&) = default;
};

struct FrameEstimates {
    int true_infected   = 0;
    double proportional = 0.0;
    double predictive   = 0.0;
    double ppv          = 0.0;
    double npv          = 1.0;

    friend bool operator==(const FrameEstimates&, const FrameEstimates&) = default;
};

/// What a client sees of one simulated day.
struct StateFrame {
    int day = 0;
    Census census{};
    int new_infections = 0;
    int new_serious    = 0;
    int tests_done     = 0;
    int positives      = 0;
    int doses_given    = 0;
    int in_quarantine  = 0;
    bool lockdown      = false;
    FrameEstimates estimates;
    Indicators cumulative;

    friend bool operator==(const StateFrame&, const StateFrame&) = default;
};

StateFrame make_frame(const DailyRecord& record, const EstimatePoint& estimate, const Indicators& cumulative);

/// Cumulative indicators of a state, recomputed from its history and agents.
Indicators indicators_of(const SimState& state);

nlohmann::json to_json(const StateFrame& frame);
/// @throws ProtocolError on missing or mistyped fields.
StateFrame frame_from_json(const nlohmann::json& j);

/// Server answer to one command.
struct Reply {
    bool ok          = true;
    CommandKind kind = CommandKind::Pause;
    int day          = 0; // days completed when the command was applied
    std::string message;
    std::string id;
};

nlohmann::json to_json(const Reply& reply);
nlohmann::json error_message(const std::string& message, const std::string& id = {});

/// One JSON document terminated by a newline.
std::string to_line(const nlohmann::json& j);

/**
 * @brief Single-threaded session core.
 *
 * Commands are applied between days. Step(n) only schedules days; the caller
 * runs them through advance().
 */
class Simulation
{
public:
    explicit Simulation(SimConfig cfg);

    Reply apply(const Command& cmd);

    /// Simulate one day. Clears the schedule and stops running once finished.
    const StateFrame& advance();

    /// True from day 1 on when no agent is infectious.
    bool finished() const;

    bool running() const
    {
        return m_running;
    }
    double days_per_second() const
    {
        return m_days_per_second;
    }
    int pending_steps() const
    {
        return m_pending;
    }
    int day() const
    {
        return m_state.day;
    }
    const SimConfig& config() const
    {
        return m_config;
    }
    const SimState& state() const
    {
        return m_state;
    }
    const std::vector<StateFrame>& frames() const
    {
        return m_frames;
    }

    /// Last streamed frame, or the day-0 picture before any step.
    StateFrame snapshot() const;

private:
    void rebuild(SimConfig cfg);

    SimConfig m_config;
    SimState m_state;
    EstimateTracker m_tracker;
    Indicators m_cumulative;
    std::vector<StateFrame> m_frames;
    bool m_running           = false;
    double m_days_per_second = 5.0;
    int m_pending            = 0;
};

/**
 * @brief Apply a command list without a clock.
 *
 * Step(n) runs n days; Start runs until the session is finished or cfg.max_days
 * is reached. Rejected commands are skipped.
 */
std::vector<StateFrame> run_script(const SimConfig& cfg, const std::vector<Command>& script);

/**
 * @brief A live session: a Simulation driven by its own thread.
 *
 * Commands from any thread enter one ordered queue and are applied between
 * days. Frames go to every subscriber; replies go to the submitter only.
 */
class Session
{
public:
    using Sink = std::function<void(const std::string& line)>;

    Session(std::string id, SimConfig cfg);
    ~Session();

    Session(const Session&)            = delete;
    Session& operator=(const Session&) = delete;

    const std::string& id() const
    {
        return m_id;
    }

    void submit(Command cmd, std::uint64_t subscriber = 0);

    /// Replays frames after last_seen to the sink, then streams live ones. Returns a subscriber handle.
    std::uint64_t subscribe(Sink sink, int last_seen = 0);
    void unsubscribe(std::uint64_t subscriber);
    /// Sends a line to one subscriber, in order with frames and replies.
    void send_to(std::uint64_t subscriber, const std::string& line);

    StateFrame snapshot() const;
    std::vector<StateFrame> frames_since(int last_seen) const;

    void stop();

private:
    void loop();
    void broadcast(const std::string& line);

    std::string m_id;
    mutable std::mutex m_mutex;
    std::condition_variable m_cv;
    Simulation m_sim;
    std::deque<std::pair<Command, std::uint64_t>> m_queue;
    std::map<std::uint64_t, Sink> m_sinks;
    std::uint64_t m_next_sink = 1;
    bool m_stop               = false;
    std::jthread m_thread;
};

class SessionRegistry
{
public:
    std::shared_ptr<Session> create(const SimConfig& cfg);
    std::shared_ptr<Session> find(const std::string& id) const;
    std::size_t size() const;
    void stop_all();

private:
    mutable std::mutex m_mutex;
    std::map<std::string, std::shared_ptr<Session>> m_sessions;
    std::uint64_t m_next = 1;
};

} // namespace episim

#endif // EPISIM_SERVICE_H
