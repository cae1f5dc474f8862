#include "fdem/service.hpp"

#include "fdem/api.hpp"
#include "fdem/csv.hpp"
#include "fdem/error.hpp"

// After Eigen: the resolver header pulled in here defines _res.
#include <httplib.h>

namespace fdem {

namespace {

using nlohmann::json;

Reply json_reply(int status, const json& doc) { return {status, api::render(doc), "application/json"}; }

int status_for(const std::exception& e)
{
    if (dynamic_cast<const SchemaError*>(&e) || dynamic_cast<const json::exception*>(&e)) return 400;
    if (dynamic_cast<const ValidationError*>(&e)) return 422;
    if (dynamic_cast<const NotFoundError*>(&e)) return 404;
    return 500;
}

json parse_body(std::string_view body)
{
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("request body is not valid JSON: ") + e.what());
    }
}

bool wants_csv(const json& request)
{
    return request.is_object() && request.contains("format") && request.at("format") == "csv";
}

Reply csv_reply(std::string text) { return {200, std::move(text), "text/csv"}; }

}  // namespace

Service::Service(DeviceCatalog catalog)
    : catalog_(std::move(catalog)), worker_([this](std::stop_token st) { work(st); })
{
}

Service::~Service()
{
    stop();
    worker_.request_stop();
    jobs_cv_.notify_all();
}

Reply Service::handle(std::string_view method, std::string_view path, std::string_view body)
{
    try {
        if (method == "GET" && path == "/devices") {
            std::shared_lock lock(catalog_mutex_);
            return json_reply(200, api::devices(catalog_));
        }
        if (method == "PUT" && path == "/devices") {
            auto entry = device_from_json(parse_body(body));
            entry.seed = false;
            std::unique_lock lock(catalog_mutex_);
            catalog_.upsert(entry);
            return json_reply(200, to_json(catalog_.lookup(entry.name)));
        }
        if (method == "GET" && path.starts_with("/jobs/")) return get_job(path.substr(6));
        if (method != "POST") throw NotFoundError("no route for " + std::string(method) + " " + std::string(path));

        const auto request = parse_body(body);
        if (path == "/invert") return post_invert(request);
        std::shared_lock lock(catalog_mutex_);
        if (path == "/forward")
            return wants_csv(request) ? csv_reply(api::forward_csv(request, catalog_))
                                      : json_reply(200, api::forward(request, catalog_));
        if (path == "/sweep")
            return wants_csv(request) ? csv_reply(api::sweep_csv(request, catalog_))
                                      : json_reply(200, api::sweep(request, catalog_));
        if (path == "/diagnostics")
            return wants_csv(request) ? csv_reply(api::diagnostics_csv(request, catalog_))
                                      : json_reply(200, api::diagnostics(request, catalog_));
        if (path == "/doi") return json_reply(200, api::doi(request, catalog_));
        throw NotFoundError("no route for POST " + std::string(path));
    } catch (const std::exception& e) {
        return json_reply(status_for(e), api::error_json(e));
    }
}

Reply Service::post_invert(const json& request)
{
    const auto opts = api::options_from_json(request.contains("options") ? request.at("options") : json(nullptr));
    if (opts.max_iterations == 0 || (request.contains("sync") && request.at("sync") == true))
        return json_reply(200, api::invert(request));

    // Reject malformed data before queueing so the client sees 400/422 now.
    if (request.contains("data_csv"))
        (void)read_response_csv(request.at("data_csv").get<std::string>());
    else if (request.contains("data"))
        (void)api::data_from_json(request.at("data"));
    else
        throw SchemaError("missing field \"data\"");

    std::string id;
    {
        std::lock_guard lock(jobs_mutex_);
        id = "job-" + std::to_string(next_job_++);
        jobs_[id].request = request;
        queue_.push_back(id);
    }
    jobs_cv_.notify_one();
    return json_reply(202, {{"id", id}, {"status", "queued"}, {"href", "/jobs/" + id}});
}

Reply Service::get_job(std::string_view id)
{
    std::lock_guard lock(jobs_mutex_);
    const auto it = jobs_.find(std::string(id));
    if (it == jobs_.end()) throw NotFoundError("unknown job \"" + std::string(id) + "\"");
    const auto& job = it->second;
    return json_reply(200, {{"id", it->first}, {"status", job.status}, {"result", job.result}, {"error", job.error}});
}

void Service::work(std::stop_token stop)
{
    for (;;) {
        std::string id;
        json request;
        {
            std::unique_lock lock(jobs_mutex_);
            if (!jobs_cv_.wait(lock, stop, [this] { return !queue_.empty(); })) return;
            id = queue_.front();
            queue_.pop_front();
            jobs_[id].status = "running";
            request = jobs_[id].request;
        }
        json result = nullptr;
        json error = nullptr;
        try {
            result = api::invert(request);
        } catch (const std::exception& e) {
            error = api::error_json(e).at("error");
        }
        std::lock_guard lock(jobs_mutex_);
        auto& job = jobs_[id];
        job.status = error.is_null() ? "done" : "failed";
        job.result = std::move(result);
        job.error = std::move(error);
        job.request = nullptr;
    }
}

httplib::Server& Service::server()
{
    if (server_) return *server_;
    server_ = std::make_unique<httplib::Server>();
    auto route = [this](const httplib::Request& req, httplib::Response& res) {
        const auto reply = handle(req.method, req.path, req.body);
        res.status = reply.status;
        res.set_content(reply.body, reply.content_type);
    };
    for (const char* p : {"/forward", "/sweep", "/diagnostics", "/doi", "/invert"}) server_->Post(p, route);
    server_->Get("/devices", route);
    server_->Put("/devices", route);
    server_->Get(R"(/jobs/([A-Za-z0-9-]+))", route);
    server_->set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const json doc = {{"error", {{"type", "not_found"}, {"message", "no route for " + req.method + " " + req.path},
                                     {"issues", json::array()}}}};
        res.set_content(api::render(doc), "application/json");
    });
    return *server_;
}

bool Service::listen(const std::string& host, int port) { return server().listen(host, port); }

int Service::bind_any_port(const std::string& host) { return server().bind_to_any_port(host); }

bool Service::listen_after_bind() { return server().listen_after_bind(); }

void Service::stop()
{
    if (server_) server_->stop();
}

}  // namespace fdem
