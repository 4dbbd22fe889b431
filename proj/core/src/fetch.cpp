#include "wikimento/fetch.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <thread>

#include "httplib.h"
#include "wikimento/errors.hpp"

namespace wikimento {

namespace {

class SteadyClock : public Clock {
 public:
  std::int64_t now_ms() override {
    using namespace std::chrono;
    return duration_cast<milliseconds>(
               steady_clock::now().time_since_epoch())
        .count();
  }
  void sleep_ms(std::int64_t ms) override {
    if (ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(ms));
  }
};

std::uint64_t fnv1a64(std::string_view s, std::uint64_t h) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char digits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return data;
}

void write_file_atomic(const std::filesystem::path& path,
                       std::string_view data) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw IoError("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::shared_ptr<Clock> steady_clock_source() {
  static auto instance = std::make_shared<SteadyClock>();
  return instance;
}

HostRateLimiter::HostRateLimiter(double requests_per_second,
                                 std::shared_ptr<Clock> clock)
    : interval_ms_(requests_per_second > 0
                       ? static_cast<std::int64_t>(1000.0 / requests_per_second)
                       : 0),
      clock_(std::move(clock)) {}

void HostRateLimiter::acquire(const std::string& host) {
  if (interval_ms_ <= 0) return;
  std::int64_t slot;
  {
    std::lock_guard lock(mu_);
    const auto now = clock_->now_ms();
    auto& next = next_slot_ms_[host];
    slot = std::max(now, next);
    next = slot + interval_ms_;
  }
  const auto wait = slot - clock_->now_ms();
  if (wait > 0) clock_->sleep_ms(wait);
}

ParsedUri parse_uri(const std::string& uri) {
  ParsedUri out;
  const auto scheme_end = uri.find("://");
  if (scheme_end == std::string::npos)
    throw NetworkError("not an absolute URI: " + uri);
  out.scheme = uri.substr(0, scheme_end);
  std::transform(out.scheme.begin(), out.scheme.end(), out.scheme.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (out.scheme != "http" && out.scheme != "https")
    throw NetworkError("unsupported scheme in " + uri);

  const auto authority_start = scheme_end + 3;
  const auto path_start = uri.find_first_of("/?", authority_start);
  const auto authority =
      uri.substr(authority_start, path_start == std::string::npos
                                      ? std::string::npos
                                      : path_start - authority_start);
  if (authority.empty()) throw NetworkError("missing host in " + uri);

  const auto colon = authority.rfind(':');
  if (colon != std::string::npos) {
    const auto digits = authority.substr(colon + 1);
    if (digits.empty() || digits.size() > 5 ||
        digits.find_first_not_of("0123456789") != std::string::npos)
      throw NetworkError("bad port in " + uri);
    const int port = std::stoi(digits);
    if (port < 1 || port > 65535) throw NetworkError("bad port in " + uri);
    out.host = authority.substr(0, colon);
    out.port = port;
  } else {
    out.host = authority;
  }
  if (out.host.empty()) throw NetworkError("missing host in " + uri);
  if (out.port == 0) out.port = out.scheme == "https" ? 443 : 80;

  if (path_start == std::string::npos) {
    out.path_and_query = "/";
  } else if (uri[path_start] == '?') {
    out.path_and_query = "/" + uri.substr(path_start);
  } else {
    out.path_and_query = uri.substr(path_start);
  }
  return out;
}

Fetcher::Fetcher(FetchOptions options, std::shared_ptr<Clock> clock)
    : options_(std::move(options)),
      clock_(clock),
      limiter_(options_.requests_per_second, clock) {}

Fetcher::~Fetcher() = default;

std::string Fetcher::cache_path(const std::string& uri) const {
  const auto key = hex64(fnv1a64(uri, 1469598103934665603ULL)) +
                   hex64(fnv1a64(uri, 0x9E3779B97F4A7C15ULL));
  return (std::filesystem::path(options_.cache_dir) / key).string();
}

FetchResult Fetcher::fetch(const std::string& uri) {
  const bool caching = !options_.cache_dir.empty();
  std::filesystem::path body_path, uri_path;
  if (caching) {
    const auto base = cache_path(uri);
    body_path = base + ".body";
    uri_path = base + ".uri";
    std::error_code ec;
    if (std::filesystem::exists(body_path, ec) &&
        std::filesystem::exists(uri_path, ec) &&
        read_file(uri_path) == uri) {
      return {read_file(body_path), true};
    }
  }

  const auto parsed = parse_uri(uri);
  if (parsed.scheme == "https")
    throw NetworkError("https is not supported by this build: " + uri);
  const auto limiter_key = parsed.host + ":" + std::to_string(parsed.port);

  std::string last_transport_error;
  int last_server_status = 0;
  for (int attempt = 0; attempt <= options_.retries; ++attempt) {
    if (attempt > 0) {
      auto backoff = static_cast<double>(options_.backoff_initial_ms);
      for (int i = 1; i < attempt; ++i) backoff *= options_.backoff_factor;
      clock_->sleep_ms(static_cast<std::int64_t>(backoff));
    }
    limiter_.acquire(limiter_key);

    httplib::Client client(parsed.host, parsed.port);
    client.set_follow_location(true);
    client.set_connection_timeout(options_.timeout_seconds, 0);
    client.set_read_timeout(options_.timeout_seconds, 0);

    auto res = client.Get(parsed.path_and_query);
    if (!res) {
      last_transport_error = httplib::to_string(res.error());
      continue;
    }
    if (res->status >= 200 && res->status < 300) {
      if (caching) {
        std::filesystem::create_directories(options_.cache_dir);
        write_file_atomic(body_path, res->body);
        write_file_atomic(uri_path, uri);
      }
      return {std::move(res->body), false};
    }
    if (res->status >= 500 && res->status < 600) {
      last_server_status = res->status;
      continue;
    }
    throw HttpError(res->status, uri);
  }

  if (last_server_status != 0) throw HttpError(last_server_status, uri);
  throw NetworkError("fetch of " + uri + " failed: " + last_transport_error);
}

}  // namespace wikimento
