#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wikimento/time.hpp"
#include "wikimento/timeline.hpp"

namespace wikimento {

struct LogEntry {
  std::string visitor_id;
  std::string visited_uri;
  std::string referrer_uri;  // empty when the log field was "-"
  std::string raw_line;

  friend bool operator==(const LogEntry&, const LogEntry&) = default;
};

// NCSA common log format with the referrer field (combined format's
// user-agent is tolerated and ignored). Throws MalformedLogLine.
LogEntry parse_log_line(std::string_view line);

struct ArchiveRef {
  EpochSecond datetime = 0;
  std::string target_uri;

  friend bool operator==(const ArchiveRef&, const ArchiveRef&) = default;
};

// Recognizes /web/{14 digits}[modifier]/{target} anywhere in an archive
// URI and converts the timestamp (YYYYMMDDHHMMSS, UTC). Returns nothing
// for URIs without a valid embedded datetime.
std::optional<ArchiveRef> extract_archive_datetime(std::string_view uri);

struct FilterConfig {
  std::vector<std::string> asset_extensions = {"js",  "css", "png", "jpg",
                                               "jpeg", "gif", "ico", "svg"};
  std::vector<std::string> namespaces = {"Template:", "Category:",
                                         "Special:",  "File:",
                                         "MediaWiki:", "User:", "Talk:"};
  std::vector<std::string> ad_hosts = {"doubleclick.net",
                                       "googlesyndication.com",
                                       "google-analytics.com"};
};

// True when the entry survives the asset/namespace/ad-host filters.
bool keep_request(const LogEntry& entry, const FilterConfig& config = {});

std::vector<LogEntry> filter_requests(std::vector<LogEntry> entries,
                                      const FilterConfig& config = {});

enum class Category { spoiler, safe, indeterminate };

std::string_view category_name(Category c);

struct Classification {
  Category category = Category::indeterminate;
  std::string reason;  // set for indeterminate entries
  std::optional<EpochSecond> t_a;  // desired datetime, from the referrer
  std::optional<EpochSecond> t_m;  // visited memento datetime
  std::optional<EpochSecond> t_r;  // matched revision datetime
};

struct RevisionLookup {
  enum class Status { found, unknown_page, unavailable };
  Status status = Status::unknown_page;
  std::vector<EpochSecond> datetimes;  // ascending, for `found`
  std::string detail;                  // for `unavailable`
};

// Resolves the revision history of a target page so the visited memento
// can be matched to the revision it captured.
class RevisionSource {
 public:
  virtual ~RevisionSource() = default;
  virtual RevisionLookup lookup(const std::string& target_uri) = 0;
};

// Lookup over already-ingested timelines; matches on the exact URI-R,
// or on the wiki title taken from a /wiki/{title} path.
class TimelineRevisionSource : public RevisionSource {
 public:
  explicit TimelineRevisionSource(const std::vector<PageTimeline>& timelines);
  RevisionLookup lookup(const std::string& target_uri) override;

 private:
  std::map<std::string, std::vector<EpochSecond>, std::less<>> by_uri_;
  std::map<std::string, std::vector<EpochSecond>, std::less<>> by_title_;
};

// The desired datetime comes from the referrer, the visited memento
// fixes both the page and (through the capture rule: latest revision at
// or before the memento datetime) the revision the visitor saw. Spoiler
// iff t_a < t_r; the t_a = t_r boundary is safe. Every failure to
// resolve a datetime is an indeterminate entry with a reason.
Classification classify(const LogEntry& entry, RevisionSource& source);

struct AuditRecord {
  std::string visitor_id;
  std::string visited_uri;
  Classification classification;
};

struct AuditSummary {
  std::uint64_t lines_total = 0;
  std::uint64_t lines_malformed = 0;
  std::uint64_t filtered_out = 0;
  std::uint64_t spoiler = 0;
  std::uint64_t safe = 0;
  std::uint64_t indeterminate = 0;

  // Among determinate entries only.
  std::optional<double> spoiler_rate_determinate() const;
  // Over all classified entries, the conservative denominator.
  std::optional<double> spoiler_rate_overall() const;
};

using AuditSink = std::function<void(const AuditRecord&)>;

// Streams a log file (plain or gzip) line by line: parse, filter,
// classify, reduce. Memory use is independent of file size. Throws
// IoError when the file cannot be opened.
AuditSummary audit_log_file(const std::string& path, RevisionSource& source,
                            const FilterConfig& config = {},
                            const AuditSink& sink = {});

}  // namespace wikimento
