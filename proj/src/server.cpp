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
#include "episim/server.h"
#include "episim/io.h"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace episim
{

namespace
{

namespace beast     = boost::beast;
namespace http      = beast::http;
namespace websocket = beast::websocket;
namespace net       = boost::asio;
using tcp           = net::ip::tcp;

using Request  = http::request<http::string_body>;
using Response = http::response<http::string_body>;

struct Target {
    std::vector<std::string> segments;
    std::map<std::string, std::string> query;
};

Target parse_target(std::string_view target)
{
    Target t;
    auto qpos = target.find('?');
    auto path = target.substr(0, qpos);
    std::size_t start = 0;
    while (start <= path.size()) {
        auto end = path.find('/', start);
        if (end == std::string_view::npos) {
            end = path.size();
        }
        if (end > start) {
            t.segments.emplace_back(path.substr(start, end - start));
        }
        start = end + 1;
    }
    if (qpos != std::string_view::npos) {
        std::istringstream ss(std::string(target.substr(qpos + 1)));
        std::string pair;
        while (std::getline(ss, pair, '&')) {
            auto eq = pair.find('=');
            if (eq == std::string::npos) {
                t.query[pair] = "";
            }
            else {
                t.query[pair.substr(0, eq)] = pair.substr(eq + 1);
            }
        }
    }
    return t;
}

std::optional<int> parse_int(const std::string& text)
{
    int value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size()) {
        return std::nullopt;
    }
    return value;
}

std::string mime_type(const std::filesystem::path& path)
{
    auto ext = path.extension().string();
    if (ext == ".html") {
        return "text/html";
    }
    if (ext == ".js" || ext == ".mjs") {
        return "application/javascript";
    }
    if (ext == ".css") {
        return "text/css";
    }
    if (ext == ".json") {
        return "application/json";
    }
    if (ext == ".svg") {
        return "image/svg+xml";
    }
    if (ext == ".png") {
        return "image/png";
    }
    return "application/octet-stream";
}

Response make_response(const Request& req, http::status status, std::string body,
                       const std::string& content_type = "application/json")
{
    Response res{status, req.version()};
    res.set(http::field::content_type, content_type);
    res.set(http::field::access_control_allow_origin, "*");
    res.keep_alive(req.keep_alive());
    res.body() = std::move(body);
    res.prepare_payload();
    return res;
}

Response json_response(const Request& req, http::status status, const nlohmann::json& j)
{
    return make_response(req, status, j.dump());
}

class WsConnection : public std::enable_shared_from_this<WsConnection>
{
public:
    WsConnection(tcp::socket&& socket, std::shared_ptr<Session> session, int last_seen)
        : m_ws(std::move(socket))
        , m_session(std::move(session))
        , m_last_seen(last_seen)
    {
    }

    void run(Request req)
    {
        m_ws.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        m_ws.text(true);
        m_ws.async_accept(req, beast::bind_front_handler(&WsConnection::on_accept, shared_from_this()));
    }

    void send(std::string line)
    {
        net::post(m_ws.get_executor(), [self = shared_from_this(), line = std::move(line)]() mutable {
            self->m_outbox.push_back(std::move(line));
            if (!self->m_writing) {
                self->do_write();
            }
        });
    }

private:
    void on_accept(beast::error_code ec)
    {
        if (ec) {
            return;
        }
        std::weak_ptr<WsConnection> weak = shared_from_this();
        m_subscriber = m_session->subscribe(
            [weak](const std::string& line) {
                if (auto self = weak.lock()) {
                    self->send(line);
                }
            },
            m_last_seen);
        do_read();
    }

    void do_read()
    {
        m_ws.async_read(m_buffer, beast::bind_front_handler(&WsConnection::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t)
    {
        if (ec) {
            close();
            return;
        }
        auto text = beast::buffers_to_string(m_buffer.data());
        m_buffer.consume(m_buffer.size());
        std::istringstream lines(text);
        std::string line;
        while (std::getline(lines, line)) {
            if (line.find_first_not_of(" \t\r") == std::string::npos) {
                continue;
            }
            handle_line(line);
        }
        do_read();
    }

    void handle_line(const std::string& line)
    {
        nlohmann::json msg;
        try {
            msg = nlohmann::json::parse(line);
        }
        catch (const nlohmann::json::exception&) {
            m_session->send_to(m_subscriber, to_line(error_message("invalid JSON")));
            return;
        }
        std::string id;
        if (msg.is_object() && msg.contains("id") && msg["id"].is_string()) {
            id = msg["id"].get<std::string>();
        }
        try {
            m_session->submit(parse_command(msg), m_subscriber);
        }
        catch (const ProtocolError& e) {
            m_session->send_to(m_subscriber, to_line(error_message(e.what(), id)));
        }
    }

    void do_write()
    {
        if (m_closed || m_outbox.empty()) {
            m_writing = false;
            return;
        }
        m_writing = true;
        m_ws.async_write(net::buffer(m_outbox.front()),
                         beast::bind_front_handler(&WsConnection::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t)
    {
        if (ec) {
            close();
            return;
        }
        m_outbox.pop_front();
        do_write();
    }

    void close()
    {
        if (!m_closed) {
            m_closed = true;
            m_outbox.clear();
            m_session->unsubscribe(m_subscriber);
        }
    }

    websocket::stream<beast::tcp_stream> m_ws;
    beast::flat_buffer m_buffer;
    std::shared_ptr<Session> m_session;
    int m_last_seen;
    std::uint64_t m_subscriber = 0;
    std::deque<std::string> m_outbox;
    bool m_writing = false;
    bool m_closed  = false;
};

class HttpConnection : public std::enable_shared_from_this<HttpConnection>
{
public:
    HttpConnection(tcp::socket&& socket, SessionRegistry& sessions, std::filesystem::path static_dir)
        : m_stream(std::move(socket))
        , m_sessions(sessions)
        , m_static_dir(std::move(static_dir))
    {
    }

    void run()
    {
        net::dispatch(m_stream.get_executor(),
                      beast::bind_front_handler(&HttpConnection::do_read, shared_from_this()));
    }

private:
    void do_read()
    {
        m_req = {};
        m_stream.expires_after(std::chrono::seconds(30));
        http::async_read(m_stream, m_buffer, m_req,
                         beast::bind_front_handler(&HttpConnection::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t)
    {
        if (ec) {
            beast::error_code ignored;
            m_stream.socket().shutdown(tcp::socket::shutdown_send, ignored);
            return;
        }
        auto target = parse_target(std::string_view(m_req.target().data(), m_req.target().size()));
        if (websocket::is_upgrade(m_req)) {
            if (target.segments.size() == 2 && target.segments[0] == "session") {
                if (auto session = m_sessions.find(target.segments[1])) {
                    int last_seen = 0;
                    if (auto it = target.query.find("last_seen"); it != target.query.end()) {
                        last_seen = parse_int(it->second).value_or(0);
                    }
                    m_stream.expires_never();
                    std::make_shared<WsConnection>(m_stream.release_socket(), std::move(session), last_seen)
                        ->run(std::move(m_req));
                    return;
                }
            }
            send(json_response(m_req, http::status::not_found, error_message("unknown session")));
            return;
        }
        send(handle(target));
    }

    Response handle(const Target& target)
    {
        const auto& seg = target.segments;
        if (m_req.method() == http::verb::options) {
            auto res = make_response(m_req, http::status::no_content, "");
            res.set(http::field::access_control_allow_methods, "GET, POST, OPTIONS");
            res.set(http::field::access_control_allow_headers, "Content-Type");
            return res;
        }
        if (seg.size() == 1 && seg[0] == "session" && m_req.method() == http::verb::post) {
            try {
                auto body = m_req.body().empty() ? nlohmann::json::object() : nlohmann::json::parse(m_req.body());
                auto session = m_sessions.create(sim_config_from_json(body));
                return json_response(m_req, http::status::created, {{"id", session->id()}});
            }
            catch (const nlohmann::json::exception& e) {
                return json_response(m_req, http::status::bad_request, error_message(e.what()));
            }
            catch (const ConfigError& e) {
                return json_response(m_req, http::status::bad_request, error_message(e.what()));
            }
        }
        if (seg.size() == 3 && seg[0] == "session" && seg[2] == "snapshot" && m_req.method() == http::verb::get) {
            if (auto session = m_sessions.find(seg[1])) {
                return json_response(m_req, http::status::ok, to_json(session->snapshot()));
            }
            return json_response(m_req, http::status::not_found, error_message("unknown session"));
        }
        if (m_req.method() == http::verb::get && !m_static_dir.empty()) {
            if (auto res = serve_static(seg)) {
                return *res;
            }
        }
        return json_response(m_req, http::status::not_found, error_message("not found"));
    }

    std::optional<Response> serve_static(const std::vector<std::string>& seg)
    {
        auto path = m_static_dir;
        for (const auto& s : seg) {
            if (s == ".." || s == ".") {
                return std::nullopt;
            }
            path /= s;
        }
        if (seg.empty() || std::filesystem::is_directory(path)) {
            path /= "index.html";
        }
        std::ifstream in(path, std::ios::binary);
        if (!in) {
            return std::nullopt;
        }
        std::ostringstream body;
        body << in.rdbuf();
        return make_response(m_req, http::status::ok, body.str(), mime_type(path));
    }

    void send(Response res)
    {
        auto sp = std::make_shared<Response>(std::move(res));
        http::async_write(m_stream, *sp, [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
            if (ec || !sp->keep_alive()) {
                beast::error_code ignored;
                self->m_stream.socket().shutdown(tcp::socket::shutdown_send, ignored);
                return;
            }
            self->do_read();
        });
    }

    beast::tcp_stream m_stream;
    beast::flat_buffer m_buffer;
    Request m_req;
    SessionRegistry& m_sessions;
    std::filesystem::path m_static_dir;
};

} // namespace

std::string bind_address_from_env(const std::string& fallback)
{
    const char* value = std::getenv(kBindAddressEnv);
    return value != nullptr && *value != '\0' ? std::string(value) : fallback;
}

struct Server::Impl {
    ServerOptions options;
    net::io_context ioc;
    tcp::acceptor acceptor{ioc};
    SessionRegistry sessions;
    std::vector<std::thread> threads;
    std::mutex mutex;
    std::condition_variable stopped_cv;
    bool stopped = false;
    unsigned short port = 0;

    void do_accept()
    {
        acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
            if (!acceptor.is_open()) {
                return;
            }
            if (!ec) {
                std::make_shared<HttpConnection>(std::move(socket), sessions, options.static_dir)->run();
            }
            do_accept();
        });
    }
};

Server::Server(ServerOptions options)
    : m_impl(std::make_unique<Impl>())
{
    m_impl->options = std::move(options);
}

Server::~Server()
{
    stop();
}

void Server::start()
{
    auto& impl = *m_impl;
    tcp::endpoint endpoint{net::ip::make_address(impl.options.address), impl.options.port};
    impl.acceptor.open(endpoint.protocol());
    impl.acceptor.set_option(net::socket_base::reuse_address(true));
    impl.acceptor.bind(endpoint);
    impl.acceptor.listen(net::socket_base::max_listen_connections);
    impl.port = impl.acceptor.local_endpoint().port();
    impl.do_accept();
    for (unsigned i = 0; i < std::max(1u, impl.options.threads); ++i) {
        impl.threads.emplace_back([&impl] {
            impl.ioc.run();
        });
    }
}

void Server::stop()
{
    auto& impl = *m_impl;
    {
        std::lock_guard lock(impl.mutex);
        if (impl.stopped) {
            return;
        }
        impl.stopped = true;
    }
    impl.sessions.stop_all();
    net::post(impl.ioc, [&impl] {
        beast::error_code ignored;
        impl.acceptor.close(ignored);
    });
    impl.ioc.stop();
    for (auto& t : impl.threads) {
        if (t.joinable()) {
            t.join();
        }
    }
    impl.stopped_cv.notify_all();
}

void Server::wait()
{
    std::unique_lock lock(m_impl->mutex);
    m_impl->stopped_cv.wait(lock, [this] {
        return m_impl->stopped;
    });
}

unsigned short Server::port() const
{
    return m_impl->port;
}

SessionRegistry& Server::sessions()
{
    return m_impl->sessions;
}

} // namespace episim
