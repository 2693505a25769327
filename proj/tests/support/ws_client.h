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
#ifndef EPISIM_TESTS_WS_CLIENT_H
#define EPISIM_TESTS_WS_CLIENT_H

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <nlohmann/json.hpp>

#include <sys/socket.h>
#include <sys/time.h>

#include <deque>
#include <optional>
#include <sstream>
#include <string>

namespace episim::testing
{

struct HttpReply {
    int status = 0;
    std::string body;
};

inline void set_receive_timeout(boost::asio::ip::tcp::socket& socket, int seconds)
{
    timeval tv{seconds, 0};
    ::setsockopt(socket.native_handle(), SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
}

inline HttpReply http_request(unsigned short port, boost::beast::http::verb method, const std::string& target,
                              const std::string& body = {})
{
    namespace http = boost::beast::http;
    boost::asio::io_context ioc;
    boost::asio::ip::tcp::socket socket(ioc);
    socket.connect({boost::asio::ip::make_address("127.0.0.1"), port});
    set_receive_timeout(socket, 10);
    http::request<http::string_body> req{method, target, 11};
    req.set(http::field::host, "127.0.0.1");
    req.set(http::field::content_type, "application/json");
    req.body() = body;
    req.prepare_payload();
    http::write(socket, req);
    boost::beast::flat_buffer buffer;
    http::response<http::string_body> res;
    http::read(socket, buffer, res);
    boost::system::error_code ignored;
    socket.shutdown(boost::asio::ip::tcp::socket::shutdown_both, ignored);
    return {static_cast<int>(res.result_int()), res.body()};
}

/// Blocking WebSocket client speaking line-delimited JSON.
class WsClient
{
public:
    WsClient(unsigned short port, const std::string& target)
        : m_ws(m_ioc)
    {
        auto& socket = m_ws.next_layer();
        socket.connect({boost::asio::ip::make_address("127.0.0.1"), port});
        set_receive_timeout(socket, 20);
        m_ws.handshake("127.0.0.1", target);
        m_ws.text(true);
    }

    ~WsClient()
    {
        boost::system::error_code ignored;
        m_ws.close(boost::beast::websocket::close_code::normal, ignored);
    }

    void send(const nlohmann::json& msg)
    {
        m_ws.write(boost::asio::buffer(msg.dump() + "\n"));
    }

    void send_raw(const std::string& text)
    {
        m_ws.write(boost::asio::buffer(text));
    }

    /// Next JSON message, or nullopt on timeout or close.
    std::optional<nlohmann::json> receive()
    {
        while (m_pending.empty()) {
            boost::beast::flat_buffer buffer;
            boost::system::error_code ec;
            m_ws.read(buffer, ec);
            if (ec) {
                return std::nullopt;
            }
            std::istringstream lines(boost::beast::buffers_to_string(buffer.data()));
            std::string line;
            while (std::getline(lines, line)) {
                if (!line.empty()) {
                    m_pending.push_back(nlohmann::json::parse(line));
                }
            }
        }
        auto msg = std::move(m_pending.front());
        m_pending.pop_front();
        return msg;
    }

private:
    boost::asio::io_context m_ioc;
    boost::beast::websocket::stream<boost::asio::ip::tcp::socket> m_ws;
    std::deque<nlohmann::json> m_pending;
};

} // namespace episim::testing

#endif // EPISIM_TESTS_WS_CLIENT_H
