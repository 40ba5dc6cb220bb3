#include "vine/server.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace vine {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

SessionService::SessionService(std::shared_ptr<const SessionSettings> settings)
    : state_(initial_state(std::move(settings))) {}

std::string SessionService::initial_frame() const {
    return snapshot_message(make_snapshot(state_)).dump();
}

std::string SessionService::handle(std::string_view frame) {
    json message;
    try {
        message = json::parse(frame);
    } catch (const json::parse_error& e) {
        return error_message("bad_json", e.what()).dump();
    }
    Command command;
    try {
        command = command_from_message(message);
    } catch (const ProtocolError& e) {
        return error_message(e.code(), e.what()).dump();
    }
    StepResult step = vine::apply(state_, command);
    state_ = step.state;
    return snapshot_message(make_snapshot(step)).dump();
}

namespace {

constexpr std::string_view kFallbackPage =
    "<!doctype html><html><head><title>vine session</title></head><body>"
    "<h1>vine session service</h1>"
    "<p>The operator console assets are not installed. Start the server with "
    "<code>--assets DIR</code> pointing at a built console.</p>"
    "<p>Session protocol: WebSocket on this host and port, JSON text frames "
    "<code>{\"v\":1,\"type\":\"cmd.steer\",\"payload\":{\"dla\":0,\"dlb\":-0.01}}</code>.</p>"
    "</body></html>";

std::string mime_type(const std::filesystem::path& p) {
    const std::string ext = p.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html";
    if (ext == ".js" || ext == ".mjs") return "application/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    return "application/octet-stream";
}

http::response<http::string_body> serve_static(const http::request<http::string_body>& req,
                                               const std::string& assets_dir) {
    http::response<http::string_body> res;
    res.version(req.version());
    res.keep_alive(false);

    std::string target(req.target());
    if (const auto q = target.find('?'); q != std::string::npos) target.resize(q);
    if (target.empty() || target == "/") target = "/index.html";

    const bool traversal = target.find("..") != std::string::npos;
    const std::filesystem::path file = std::filesystem::path(assets_dir) / target.substr(1);
    if (!traversal && !assets_dir.empty() && std::filesystem::is_regular_file(file)) {
        std::ifstream in(file, std::ios::binary);
        std::ostringstream body;
        body << in.rdbuf();
        res.result(http::status::ok);
        res.set(http::field::content_type, mime_type(file));
        res.body() = body.str();
    } else if (target == "/index.html") {
        res.result(http::status::ok);
        res.set(http::field::content_type, "text/html");
        res.body() = std::string(kFallbackPage);
    } else {
        res.result(http::status::not_found);
        res.set(http::field::content_type, "text/plain");
        res.body() = "not found\n";
    }
    res.prepare_payload();
    return res;
}

void handle_connection(tcp::socket socket, std::shared_ptr<const SessionSettings> settings,
                       std::string assets_dir) {
    try {
        beast::flat_buffer buffer;
        http::request<http::string_body> req;
        http::read(socket, buffer, req);

        if (!websocket::is_upgrade(req)) {
            http::write(socket, serve_static(req, assets_dir));
            beast::error_code ec;
            socket.shutdown(tcp::socket::shutdown_send, ec);
            return;
        }

        websocket::stream<tcp::socket> ws(std::move(socket));
        ws.accept(req);
        ws.text(true);
        SessionService service(std::move(settings));
        ws.write(asio::buffer(service.initial_frame()));
        for (;;) {
            beast::flat_buffer frame;
            ws.read(frame);
            const std::string reply = service.handle(beast::buffers_to_string(frame.data()));
            ws.write(asio::buffer(reply));
        }
    } catch (const beast::system_error& e) {
        // closed or reset: the session is discarded
        if (e.code() != websocket::error::closed && e.code() != asio::error::eof &&
            e.code() != asio::error::connection_reset && e.code() != http::error::end_of_stream)
            std::cerr << "vine serve: connection error: " << e.code().message() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "vine serve: " << e.what() << '\n';
    }
}

}  // namespace

struct Server::Impl {
    std::shared_ptr<const SessionSettings> settings;
    std::string assets_dir;
    asio::io_context io;
    tcp::acceptor acceptor;

    Impl(std::shared_ptr<const SessionSettings> s, std::string assets, unsigned short port,
         const std::string& address)
        : settings(std::move(s)),
          assets_dir(std::move(assets)),
          acceptor(io, tcp::endpoint(asio::ip::make_address(address), port)) {}

    void accept_next() {
        acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
            if (ec) return;  // acceptor closed
            std::thread(handle_connection, std::move(socket), settings, assets_dir).detach();
            accept_next();
        });
    }
};

Server::Server(std::shared_ptr<const SessionSettings> settings, std::string assets_dir, unsigned short port,
               const std::string& address)
    : impl_(std::make_unique<Impl>(std::move(settings), std::move(assets_dir), port, address)) {}

Server::~Server() = default;

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
    impl_->accept_next();
    impl_->io.run();
}

void Server::stop() {
    asio::post(impl_->io, [impl = impl_.get()] {
        beast::error_code ec;
        impl->acceptor.close(ec);
    });
    impl_->io.stop();
}

}  // namespace vine
