#pragma once

#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>

#include <nlohmann/json.hpp>

#include "fdem/devices.hpp"

namespace httplib {
class Server;
}

namespace fdem {

struct Reply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

// JSON-over-HTTP front end. Request bodies and reply documents are the same
// ones the CLI reads and prints; handle() is the single dispatch point and can
// be used without a socket.
class Service {
public:
    explicit Service(DeviceCatalog catalog);
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    [[nodiscard]] Reply handle(std::string_view method, std::string_view path, std::string_view body);

    // Blocks until stop() is called. Returns false if the socket cannot be bound.
    bool listen(const std::string& host, int port);
    // Binds to a free port and returns it; serve with listen_after_bind().
    int bind_any_port(const std::string& host);
    bool listen_after_bind();
    void stop();

private:
    struct Job {
        std::string status = "queued";
        nlohmann::json request;
        nlohmann::json result;
        nlohmann::json error;
    };

    Reply post_invert(const nlohmann::json& request);
    Reply get_job(std::string_view id);
    void work(std::stop_token stop);
    httplib::Server& server();

    DeviceCatalog catalog_;
    std::shared_mutex catalog_mutex_;

    std::mutex jobs_mutex_;
    std::condition_variable_any jobs_cv_;
    std::map<std::string, Job> jobs_;
    std::deque<std::string> queue_;
    std::uint64_t next_job_ = 1;

    std::unique_ptr<httplib::Server> server_;
    std::jthread worker_;
};

}  // namespace fdem
