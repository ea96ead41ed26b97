#include "medaide/gateway/http.hpp"

#include <cstdlib>

#include "httplib.h"
#include "medaide/common/error.hpp"

namespace medaide::gateway {
namespace {

std::atomic<std::size_t> g_requests{0};

struct SplitUrl {
  std::string origin;  // scheme://host[:port]
  std::string path;
};

SplitUrl split_url(const std::string& url) {
  const auto scheme_end = url.find("://");
  if (scheme_end == std::string::npos) throw Error(ErrorCode::kConfig, "URL without scheme: " + url);
  const auto path_start = url.find('/', scheme_end + 3);
  if (path_start == std::string::npos) return {url, "/"};
  return {url.substr(0, path_start), url.substr(path_start)};
}

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(int timeout_seconds) : timeout_(timeout_seconds) {}

  HttpResponse post(const std::string& url, const std::map<std::string, std::string>& headers,
                    const std::string& body) override {
    if (const char* forbid = std::getenv("MEDAIDE_FORBID_NETWORK"); forbid && *forbid) {
      throw Error(ErrorCode::kTransport, "network access forbidden (MEDAIDE_FORBID_NETWORK) for " + url);
    }
    ++g_requests;
    const auto parts = split_url(url);
    httplib::Client client(parts.origin);
    client.set_connection_timeout(timeout_, 0);
    client.set_read_timeout(timeout_, 0);
    httplib::Headers h;
    for (const auto& [k, v] : headers) h.emplace(k, v);
    auto res = client.Post(parts.path, h, body, "application/json");
    if (!res) throw Error(ErrorCode::kTransport, "request to " + url + " failed: " + httplib::to_string(res.error()));
    return {res->status, res->body};
  }

 private:
  int timeout_;
};

std::string join_url(const std::string& base, const std::string& suffix) {
  if (!base.empty() && base.back() == '/') return base.substr(0, base.size() - 1) + suffix;
  return base + suffix;
}

std::map<std::string, std::string> auth_headers(const HttpEndpoint& endpoint) {
  std::map<std::string, std::string> headers;
  if (const char* key = std::getenv(endpoint.api_key_env.c_str()); key && *key) {
    headers["Authorization"] = std::string("Bearer ") + key;
  }
  return headers;
}

HttpResponse post_with_retries(HttpTransport& transport, const HttpEndpoint& endpoint, const std::string& url,
                               const std::string& body) {
  const auto headers = auth_headers(endpoint);
  for (int attempt = 0;; ++attempt) {
    HttpResponse res;
    try {
      res = transport.post(url, headers, body);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kTransport || attempt >= endpoint.retries) throw;
      continue;
    }
    if (res.status >= 500 && attempt < endpoint.retries) continue;
    if (res.status < 200 || res.status >= 300) {
      throw Error(ErrorCode::kTransport, "HTTP " + std::to_string(res.status) + ": " + res.body.substr(0, 200));
    }
    return res;
  }
}

}  // namespace

std::shared_ptr<HttpTransport> make_http_transport(int timeout_seconds) {
  return std::make_shared<HttplibTransport>(timeout_seconds);
}

std::size_t http_request_count() { return g_requests.load(); }

HttpChatBackend::HttpChatBackend(std::shared_ptr<HttpTransport> transport, HttpEndpoint endpoint)
    : transport_(std::move(transport)), endpoint_(std::move(endpoint)) {}

Json HttpChatBackend::wire_body(const ChatRequest& request) {
  Json messages = Json::array();
  for (const auto& m : request.messages) {
    messages.push_back({{"role", std::string(to_string(m.role))}, {"content", m.content}});
  }
  return Json{{"model", request.model},
              {"messages", std::move(messages)},
              {"temperature", request.temperature},
              {"max_tokens", request.max_tokens}};
}

ChatReply HttpChatBackend::parse_wire_reply(const std::string& body) {
  try {
    const auto j = Json::parse(body);
    const auto& choice = j.at("choices").at(0);
    ChatReply r;
    r.content = choice.at("message").at("content").get<std::string>();
    if (choice.contains("finish_reason") && choice["finish_reason"].is_string()) {
      r.finish_reason = choice["finish_reason"].get<std::string>();
    }
    if (const auto u = j.find("usage"); u != j.end() && u->is_object()) {
      r.usage.prompt_tokens = u->value("prompt_tokens", 0);
      r.usage.completion_tokens = u->value("completion_tokens", 0);
      r.usage.total_tokens = u->value("total_tokens", 0);
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kTransport, std::string("malformed chat reply: ") + e.what());
  }
}

ChatReply HttpChatBackend::chat(const ChatRequest& request) {
  validate(request);
  const auto res = post_with_retries(*transport_, endpoint_, join_url(endpoint_.base_url, "/chat/completions"),
                                     wire_body(request).dump());
  return parse_wire_reply(res.body);
}

HttpEmbedder::HttpEmbedder(std::shared_ptr<HttpTransport> transport, HttpEndpoint endpoint, std::string model,
                           std::size_t dimension)
    : transport_(std::move(transport)), endpoint_(std::move(endpoint)), model_(std::move(model)), dimension_(dimension) {}

EmbeddingVector HttpEmbedder::embed(std::string_view text_in) const {
  if (text_in.empty()) throw Error(ErrorCode::kEmptyInput, "cannot embed empty text");
  const Json body{{"model", model_}, {"input", Json::array({std::string(text_in)})}};
  const auto res = post_with_retries(*transport_, endpoint_, join_url(endpoint_.base_url, "/embeddings"), body.dump());
  EmbeddingVector out;
  out.source = id();
  try {
    const auto j = Json::parse(res.body);
    for (const auto& item : j.at("data")) {
      if (item.value("index", 0) == 0) out.values = item.at("embedding").get<std::vector<double>>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kTransport, std::string("malformed embedding reply: ") + e.what());
  }
  if (out.values.size() != dimension_) {
    throw Error(ErrorCode::kDimensionMismatch, "endpoint returned dimension " + std::to_string(out.values.size()));
  }
  return out;
}

}  // namespace medaide::gateway
