#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace wikimento {

// Injectable time source so politeness behavior is testable without real
// waiting. Milliseconds on an arbitrary monotonic scale.
class Clock {
 public:
  virtual ~Clock() = default;
  virtual std::int64_t now_ms() = 0;
  virtual void sleep_ms(std::int64_t ms) = 0;
};

std::shared_ptr<Clock> steady_clock_source();

class FakeClock : public Clock {
 public:
  explicit FakeClock(std::int64_t start_ms = 0) : now_(start_ms) {}
  std::int64_t now_ms() override {
    std::lock_guard lock(mu_);
    return now_;
  }
  void sleep_ms(std::int64_t ms) override {
    std::lock_guard lock(mu_);
    if (ms > 0) now_ += ms;
  }

 private:
  std::mutex mu_;
  std::int64_t now_ = 0;
};

// Global per-host request budget: consecutive acquisitions for one host are
// spaced at least min_interval_ms apart; distinct hosts do not interact.
class HostRateLimiter {
 public:
  HostRateLimiter(double requests_per_second, std::shared_ptr<Clock> clock);

  // Blocks (via the clock) until the caller may issue a request to `host`.
  void acquire(const std::string& host);

  std::int64_t min_interval_ms() const { return interval_ms_; }

 private:
  std::int64_t interval_ms_;
  std::shared_ptr<Clock> clock_;
  std::mutex mu_;
  std::map<std::string, std::int64_t> next_slot_ms_;
};

struct ParsedUri {
  std::string scheme;
  std::string host;
  int port = 0;  // 0: scheme default
  std::string path_and_query;  // always begins with '/'
};

// Minimal absolute http(s) URI splitter. Throws NetworkError on anything
// else.
ParsedUri parse_uri(const std::string& uri);

struct FetchOptions {
  double requests_per_second = 1.0;  // per host
  int retries = 3;                   // on 5xx and transport errors
  std::int64_t backoff_initial_ms = 500;
  double backoff_factor = 2.0;
  int timeout_seconds = 30;
  std::string cache_dir;  // empty: no cache
};

struct FetchResult {
  std::string body;
  bool from_cache = false;
};

// Polite HTTP GET with retries and an exact-bytes local cache. 2xx bodies
// are returned (and cached); persistent 5xx raises HttpError after the
// retry budget; other statuses raise HttpError immediately; transport
// failures raise NetworkError after the retry budget.
class Fetcher {
 public:
  explicit Fetcher(FetchOptions options,
                   std::shared_ptr<Clock> clock = steady_clock_source());
  ~Fetcher();

  FetchResult fetch(const std::string& uri);

 private:
  std::string cache_path(const std::string& uri) const;

  FetchOptions options_;
  std::shared_ptr<Clock> clock_;
  HostRateLimiter limiter_;
};

}  // namespace wikimento
