// Project headers (which pull in Eigen) must precede httplib: <resolv.h> defines a
// `_res` macro that collides with Eigen parameter names.
#include "auav/common/error.hpp"
#include "auav/reasoning/backend.hpp"

#include <httplib.h>

namespace auav::reasoning {

namespace {

class HttplibTransport : public Transport {
 public:
  HttpResponse post(const HttpRequest& request) override {
    // Split "scheme://host[:port]/path".
    const auto scheme_end = request.url.find("://");
    if (scheme_end == std::string::npos) {
      throw Error(ErrorCode::invalid_argument, "bad URL '" + request.url + "'");
    }
    const auto path_start = request.url.find('/', scheme_end + 3);
    const std::string origin = request.url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? std::string("/") : request.url.substr(path_start);

    httplib::Client client(origin);
    const auto secs = static_cast<time_t>(request.timeout_s);
    const auto usecs = static_cast<time_t>((request.timeout_s - static_cast<double>(secs)) * 1e6);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    std::string content_type = "application/json";
    for (const auto& [k, v] : request.headers) {
      if (k == "Content-Type") content_type = v;
      else headers.emplace(k, v);
    }
    auto res = client.Post(path, headers, request.body, content_type);
    if (!res) {
      throw Error(ErrorCode::transport,
                  "HTTP request to " + origin + " failed: " + httplib::to_string(res.error()));
    }
    return {res->status, res->body};
  }
};

}  // namespace

std::shared_ptr<Transport> make_http_transport() { return std::make_shared<HttplibTransport>(); }

}  // namespace auav::reasoning
