#include "wikimento/fetch.hpp"

#include <atomic>
#include <filesystem>
#include <thread>

#include "doctest.h"
#include "httplib.h"
#include "wikimento/errors.hpp"

using namespace wikimento;
namespace fs = std::filesystem;

namespace {

// Local HTTP server for fetcher tests; binds an ephemeral port.
class TestServer {
 public:
  explicit TestServer(std::function<void(httplib::Server&)> setup) {
    setup(server_);
    port_ = server_.bind_to_any_port("127.0.0.1");
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }
  ~TestServer() {
    server_.stop();
    thread_.join();
  }

  std::string uri(const std::string& path) const {
    return "http://127.0.0.1:" + std::to_string(port_) + path;
  }

 private:
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

fs::path temp_cache(const char* tag) {
  const auto dir =
      fs::temp_directory_path() / (std::string("wikimento_cache_") + tag);
  fs::remove_all(dir);
  return dir;
}

FetchOptions fast_options() {
  FetchOptions options;
  options.requests_per_second = 1000.0;
  options.retries = 2;
  options.backoff_initial_ms = 100;
  options.timeout_seconds = 5;
  return options;
}

}  // namespace

TEST_CASE("uri parsing") {
  const auto a = parse_uri("http://w.test/wiki/Page?action=raw");
  CHECK(a.scheme == "http");
  CHECK(a.host == "w.test");
  CHECK(a.port == 80);
  CHECK(a.path_and_query == "/wiki/Page?action=raw");

  const auto b = parse_uri("http://w.test:8080/");
  CHECK(b.port == 8080);
  CHECK(b.path_and_query == "/");

  const auto c = parse_uri("https://w.test");
  CHECK(c.scheme == "https");
  CHECK(c.port == 443);
  CHECK(c.path_and_query == "/");

  CHECK(parse_uri("HTTP://UPPER.test/x").scheme == "http");
  CHECK(parse_uri("http://w.test?q=1").path_and_query == "/?q=1");

  CHECK_THROWS_AS(parse_uri("ftp://w.test/x"), NetworkError);
  CHECK_THROWS_AS(parse_uri("not a uri"), NetworkError);
  CHECK_THROWS_AS(parse_uri("http:///path"), NetworkError);
  CHECK_THROWS_AS(parse_uri("http://h.test:8x/"), NetworkError);
  CHECK_THROWS_AS(parse_uri("http://h.test:/"), NetworkError);
  CHECK_THROWS_AS(parse_uri("http://h.test:0/"), NetworkError);
  CHECK_THROWS_AS(parse_uri("http://h.test:70000/"), NetworkError);
  CHECK_THROWS_AS(parse_uri("http://h.test:999999999999/"), NetworkError);
}

TEST_CASE("rate limiter spaces requests per host") {
  auto clock = std::make_shared<FakeClock>();
  HostRateLimiter limiter(1.0, clock);
  CHECK(limiter.min_interval_ms() == 1000);

  limiter.acquire("a.test:80");
  CHECK(clock->now_ms() == 0);  // first request goes out immediately
  limiter.acquire("a.test:80");
  CHECK(clock->now_ms() == 1000);
  limiter.acquire("a.test:80");
  CHECK(clock->now_ms() == 2000);

  // A different host has its own budget.
  limiter.acquire("b.test:80");
  CHECK(clock->now_ms() == 2000);

  // After idling past the next slot, no sleep is needed.
  clock->sleep_ms(10'000);
  limiter.acquire("a.test:80");
  CHECK(clock->now_ms() == 12'000);
}

TEST_CASE("rate limiter honors fractional rates") {
  auto clock = std::make_shared<FakeClock>();
  HostRateLimiter limiter(4.0, clock);
  CHECK(limiter.min_interval_ms() == 250);
  for (int i = 0; i < 5; ++i) limiter.acquire("h:80");
  CHECK(clock->now_ms() == 1000);
}

TEST_CASE("fetch returns bodies and caches them byte-exactly") {
  std::string payload = "binary\0payload\xff\x01 with odd bytes";
  payload += std::string(1, '\0');
  std::atomic<int> hits{0};
  TestServer server([&](httplib::Server& s) {
    s.Get("/data", [&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.set_content(payload, "application/octet-stream");
    });
  });

  const auto cache = temp_cache("roundtrip");
  auto options = fast_options();
  options.cache_dir = cache.string();
  Fetcher fetcher(options, std::make_shared<FakeClock>());

  const auto first = fetcher.fetch(server.uri("/data"));
  CHECK(first.body == payload);
  CHECK_FALSE(first.from_cache);
  const auto second = fetcher.fetch(server.uri("/data"));
  CHECK(second.body == payload);
  CHECK(second.from_cache);
  CHECK(hits == 1);

  // The cache stores the source URI next to the body for verification.
  std::size_t body_files = 0, uri_files = 0;
  for (const auto& entry : fs::directory_iterator(cache)) {
    const auto ext = entry.path().extension();
    if (ext == ".body") ++body_files;
    if (ext == ".uri") ++uri_files;
    CHECK(entry.path().filename().string().find('.') == 32);  // hex key
  }
  CHECK(body_files == 1);
  CHECK(uri_files == 1);
  fs::remove_all(cache);
}

TEST_CASE("cache entries are keyed by the exact URI") {
  std::atomic<int> hits{0};
  TestServer server([&](httplib::Server& s) {
    s.Get(R"(/page/(\d+))", [&](const httplib::Request& req,
                                httplib::Response& res) {
      ++hits;
      res.set_content("page " + req.matches[1].str(), "text/plain");
    });
  });
  const auto cache = temp_cache("keys");
  auto options = fast_options();
  options.cache_dir = cache.string();
  Fetcher fetcher(options, std::make_shared<FakeClock>());

  CHECK(fetcher.fetch(server.uri("/page/1")).body == "page 1");
  CHECK(fetcher.fetch(server.uri("/page/2")).body == "page 2");
  CHECK(fetcher.fetch(server.uri("/page/1")).from_cache);
  CHECK(fetcher.fetch(server.uri("/page/2")).from_cache);
  CHECK(hits == 2);
  fs::remove_all(cache);
}

TEST_CASE("non-retryable statuses raise immediately") {
  std::atomic<int> hits{0};
  TestServer server([&](httplib::Server& s) {
    s.Get("/missing", [&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.status = 404;
    });
  });
  Fetcher fetcher(fast_options(), std::make_shared<FakeClock>());
  try {
    fetcher.fetch(server.uri("/missing"));
    FAIL("expected HttpError");
  } catch (const HttpError& e) {
    CHECK(e.status() == 404);
  }
  CHECK(hits == 1);
}

TEST_CASE("5xx responses are retried with backoff, then raised") {
  std::atomic<int> hits{0};
  TestServer server([&](httplib::Server& s) {
    s.Get("/broken", [&](const httplib::Request&, httplib::Response& res) {
      ++hits;
      res.status = 503;
    });
  });
  auto clock = std::make_shared<FakeClock>();
  Fetcher fetcher(fast_options(), clock);  // retries = 2
  try {
    fetcher.fetch(server.uri("/broken"));
    FAIL("expected HttpError");
  } catch (const HttpError& e) {
    CHECK(e.status() == 503);
  }
  CHECK(hits == 3);  // initial + 2 retries
  // Exponential backoff slept 100 then 200 fake milliseconds.
  CHECK(clock->now_ms() >= 300);
}

TEST_CASE("a transient 5xx recovers on retry") {
  std::atomic<int> hits{0};
  TestServer server([&](httplib::Server& s) {
    s.Get("/flaky", [&](const httplib::Request&, httplib::Response& res) {
      if (++hits == 1)
        res.status = 503;
      else
        res.set_content("recovered", "text/plain");
    });
  });
  Fetcher fetcher(fast_options(), std::make_shared<FakeClock>());
  CHECK(fetcher.fetch(server.uri("/flaky")).body == "recovered");
  CHECK(hits == 2);
}

TEST_CASE("transport failures raise NetworkError after retries") {
  auto options = fast_options();
  options.retries = 1;
  options.timeout_seconds = 1;
  Fetcher fetcher(options, std::make_shared<FakeClock>());
  // Nothing listens on this port (bound and closed immediately).
  int dead_port;
  {
    httplib::Server probe;
    dead_port = probe.bind_to_any_port("127.0.0.1");
    probe.stop();
  }
  CHECK_THROWS_AS(
      fetcher.fetch("http://127.0.0.1:" + std::to_string(dead_port) + "/x"),
      NetworkError);
}

TEST_CASE("https is rejected up front") {
  Fetcher fetcher(fast_options(), std::make_shared<FakeClock>());
  CHECK_THROWS_AS(fetcher.fetch("https://w.test/page"), NetworkError);
}
