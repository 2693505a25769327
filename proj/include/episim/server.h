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
#ifndef EPISIM_SERVER_H
#define EPISIM_SERVER_H

#include "episim/service.h"

#include <filesystem>
#include <memory>
#include <string>

namespace episim
{

/// Name of the environment variable holding the bind address.
inline constexpr const char* kBindAddressEnv = "EPISIM_BIND_ADDRESS";

/// Value of EPISIM_BIND_ADDRESS, or fallback when unset or empty.
std::string bind_address_from_env(const std::string& fallback = "127.0.0.1");

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 8080; // 0 picks a free port
    std::filesystem::path static_dir; // served under / when set
    unsigned threads = 1;
};

/**
 * @brief HTTP and WebSocket front end for sessions.
 *
 * POST /session creates a session from a JSON SimConfig and answers {"id": ...}.
 * GET /session/{id}/snapshot returns the latest frame. A WebSocket upgrade on
 * /session/{id}[?last_seen=N] replays frames after day N, then streams frames,
 * acks and errors as line-delimited JSON and accepts commands the same way.
 */
class Server
{
public:
    explicit Server(ServerOptions options);
    ~Server();

    Server(const Server&)            = delete;
    Server& operator=(const Server&) = delete;

    /// Bind, listen and serve on background threads.
    /// @throws std::system_error if the address cannot be bound.
    void start();
    void stop();
    /// Block until stop() is called from another thread or a signal handler.
    void wait();

    unsigned short port() const;
    SessionRegistry& sessions();

private:
    struct Impl;
    std::unique_ptr<Impl> m_impl;
};

} // namespace episim

#endif // EPISIM_SERVER_H
