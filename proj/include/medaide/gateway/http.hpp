#pragma once

#include <atomic>
#include <map>
#include <memory>
#include <string>

#include "medaide/gateway/chat.hpp"
#include "medaide/gateway/embedding.hpp"

namespace medaide::gateway {

struct HttpResponse {
  int status = 0;
  std::string body;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse post(const std::string& url, const std::map<std::string, std::string>& headers,
                            const std::string& body) = 0;
};

// cpp-httplib backed transport. Refuses to send anything when the
// MEDAIDE_FORBID_NETWORK environment variable is set to a non-empty value.
std::shared_ptr<HttpTransport> make_http_transport(int timeout_seconds = 60);

// Number of requests any transport from make_http_transport has attempted.
std::size_t http_request_count();

struct HttpEndpoint {
  std::string base_url;  // e.g. https://api.example.com/v1
  std::string api_key_env = "MEDAIDE_API_KEY";
  int retries = 0;
};

// Chat-completions wire format over HTTP.
class HttpChatBackend final : public ChatBackend {
 public:
  HttpChatBackend(std::shared_ptr<HttpTransport> transport, HttpEndpoint endpoint);

  ChatReply chat(const ChatRequest& request) override;
  std::string id() const override { return "http:" + endpoint_.base_url; }

  static Json wire_body(const ChatRequest& request);
  static ChatReply parse_wire_reply(const std::string& body);

 private:
  std::shared_ptr<HttpTransport> transport_;
  HttpEndpoint endpoint_;
};

class HttpEmbedder final : public Embedder {
 public:
  HttpEmbedder(std::shared_ptr<HttpTransport> transport, HttpEndpoint endpoint, std::string model,
               std::size_t dimension);

  EmbeddingVector embed(std::string_view text) const override;
  std::size_t dimension() const override { return dimension_; }
  std::string id() const override { return "http:" + model_; }

 private:
  std::shared_ptr<HttpTransport> transport_;
  HttpEndpoint endpoint_;
  std::string model_;
  std::size_t dimension_;
};

}  // namespace medaide::gateway
