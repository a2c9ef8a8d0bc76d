#include <cstdlib>
#include <regex>
#include <thread>

#include <httplib.h>

#include "dfyannot/llm.hpp"
#include "json_io.hpp"

namespace dfyannot {

using jsonio::json;

RemoteProvider::RemoteProvider(ProviderConfig cfg) : cfg_(std::move(cfg)) { cfg_.validate(); }

std::string RemoteProvider::requestBody(const Prompt& prompt) const {
  json body = {
      {"model", cfg_.modelId},
      {"messages",
       json::array({{{"role", "system"}, {"content", prompt.systemText}},
                    {{"role", "user"}, {"content", prompt.userText}}})},
      {"max_tokens", cfg_.maxOutputTokens},
      {"temperature", cfg_.temperature},
  };
  return body.dump();
}

std::string RemoteProvider::parseResponseBody(std::string_view body) {
  try {
    auto j = json::parse(body);
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (content.is_string()) return content.get<std::string>();
    // some endpoints return a list of content parts
    std::string out;
    for (const auto& part : content)
      if (part.value("type", "") == "text") out += part.value("text", "");
    return out;
  } catch (const json::exception& e) {
    throw TransportError(std::string("unexpected chat-completion response: ") + e.what());
  }
}

std::string RemoteProvider::meta() const {
  return json{{"kind", "remote"}, {"model", cfg_.modelId}, {"temperature", cfg_.temperature}}.dump();
}

void RemoteProvider::acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [&] { return inFlight_ < std::max(1, cfg_.maxInFlight); });
  ++inFlight_;
  if (cfg_.requestsPerMinute > 0) {
    using namespace std::chrono;
    while (true) {
      auto now = steady_clock::now();
      std::erase_if(recent_, [&](auto t) { return now - t >= minutes(1); });
      if (static_cast<int>(recent_.size()) < cfg_.requestsPerMinute) break;
      auto wake = recent_.front() + minutes(1);
      lock.unlock();
      std::this_thread::sleep_until(wake);
      lock.lock();
    }
    recent_.push_back(steady_clock::now());
  }
}

void RemoteProvider::release() {
  {
    std::lock_guard lock(mu_);
    --inFlight_;
  }
  cv_.notify_one();
}

std::string RemoteProvider::complete(const Prompt& prompt) {
  const char* token = std::getenv(cfg_.authTokenEnvVar.c_str());
  if (!token || !*token) throw AuthError("environment variable " + cfg_.authTokenEnvVar + " is not set");

  static const std::regex url(R"(^(https?://[^/]+)(/.*)?$)");
  std::smatch m;
  if (!std::regex_match(cfg_.endpointUrl, m, url))
    throw TransportError("endpoint URL must start with http:// or https://: " + cfg_.endpointUrl);
  std::string hostPart = m[1].str();
  std::string path = m[2].matched ? m[2].str() : "/v1/chat/completions";

  acquire();
  struct Release {
    RemoteProvider* self;
    ~Release() { self->release(); }
  } guard{this};

  httplib::Client client(hostPart);
  auto secs = static_cast<time_t>(cfg_.requestTimeoutSeconds);
  client.set_connection_timeout(std::min<time_t>(secs, 30), 0);
  client.set_read_timeout(secs, 0);
  client.set_write_timeout(secs, 0);
  client.set_bearer_token_auth(token);
  auto body = requestBody(prompt);

  std::string lastError;
  for (int attempt = 0; attempt <= cfg_.maxRetries; ++attempt) {
    if (attempt > 0) {
      auto delay = cfg_.retryBackoffSeconds * static_cast<double>(1 << std::min(attempt - 1, 6));
      std::this_thread::sleep_for(std::chrono::duration<double>(delay));
    }
    auto res = client.Post(path, body, "application/json");
    if (!res) {
      lastError = "request failed: " + httplib::to_string(res.error());
      continue;
    }
    if (res->status == 401 || res->status == 403)
      throw AuthError("endpoint rejected credentials (HTTP " + std::to_string(res->status) + ")");
    if (res->status == 429 || res->status >= 500) {
      lastError = "HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200)
      throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 500));
    return parseResponseBody(res->body);
  }
  throw TransportError("giving up after " + std::to_string(cfg_.maxRetries + 1) +
                       " tries: " + lastError);
}

}  // namespace dfyannot
