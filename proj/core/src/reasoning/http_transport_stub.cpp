#include "auav/common/error.hpp"
#include "auav/reasoning/backend.hpp"

namespace auav::reasoning {

std::shared_ptr<Transport> make_http_transport() {
  throw Error(ErrorCode::transport, "built without an HTTP client; remote backend unavailable");
}

}  // namespace auav::reasoning
