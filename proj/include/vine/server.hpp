#pragma once

#include "vine/protocol.hpp"
#include "vine/session.hpp"

#include <atomic>
#include <memory>
#include <string>
#include <string_view>

namespace vine {

/// One live session: JSON command frames in, snapshot or error frames out.
class SessionService {
public:
    explicit SessionService(std::shared_ptr<const SessionSettings> settings);

    /// Snapshot of the freshly reset session, sent on connect.
    std::string initial_frame() const;

    /// Applies one frame. Malformed frames get an error frame and leave the
    /// state untouched; every command gets a snapshot.
    std::string handle(std::string_view frame);

    const SimState& state() const { return state_; }

private:
    SimState state_;
};

/// WebSocket session endpoint plus static file serving for the operator
/// console. Every WebSocket connection owns an independent session.
class Server {
public:
    Server(std::shared_ptr<const SessionSettings> settings, std::string assets_dir, unsigned short port,
           const std::string& address = "127.0.0.1");
    ~Server();

    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Bound port (useful when constructed with port 0).
    unsigned short port() const;

    /// Accepts connections until stop() is called.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace vine
