#include "wikimento/logaudit.hpp"

#include <zlib.h>

#include <algorithm>
#include <cctype>

#include "wikimento/errors.hpp"

namespace wikimento {

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::string percent_decode(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  const auto hex = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '%' && i + 2 < s.size()) {
      const int hi = hex(s[i + 1]);
      const int lo = hex(s[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += s[i];
  }
  return out;
}

}  // namespace

LogEntry parse_log_line(std::string_view line) {
  // host ident authuser [datetime] "request" status bytes "referrer" ...
  std::vector<std::string> fields;
  std::size_t i = 0;
  const auto n = line.size();
  while (i < n) {
    while (i < n && (line[i] == ' ' || line[i] == '\t')) ++i;
    if (i >= n) break;
    std::string field;
    if (line[i] == '[') {
      const auto end = line.find(']', i);
      if (end == std::string_view::npos)
        throw MalformedLogLine("unterminated bracket field");
      field = std::string(line.substr(i + 1, end - i - 1));
      i = end + 1;
    } else if (line[i] == '"') {
      ++i;
      while (i < n && line[i] != '"') {
        if (line[i] == '\\' && i + 1 < n) ++i;
        field += line[i++];
      }
      if (i >= n) throw MalformedLogLine("unterminated quoted field");
      ++i;
    } else {
      while (i < n && line[i] != ' ' && line[i] != '\t') field += line[i++];
    }
    fields.push_back(std::move(field));
  }

  if (fields.size() < 8)
    throw MalformedLogLine("expected at least 8 fields, got " +
                           std::to_string(fields.size()));

  LogEntry entry;
  entry.raw_line = std::string(line);
  entry.visitor_id = fields[0];

  // fields[4] is the request line: METHOD SP URI SP PROTOCOL.
  const auto& request = fields[4];
  const auto sp1 = request.find(' ');
  if (sp1 == std::string::npos) {
    entry.visited_uri = request;
  } else {
    const auto sp2 = request.find(' ', sp1 + 1);
    entry.visited_uri = request.substr(
        sp1 + 1, sp2 == std::string::npos ? std::string::npos : sp2 - sp1 - 1);
  }
  if (entry.visited_uri.empty())
    throw MalformedLogLine("empty request URI");

  if (fields[7] != "-") entry.referrer_uri = fields[7];
  return entry;
}

std::optional<ArchiveRef> extract_archive_datetime(std::string_view uri) {
  const auto marker = uri.find("/web/");
  if (marker == std::string_view::npos) return std::nullopt;
  auto rest = uri.substr(marker + 5);
  if (rest.size() < 14) return std::nullopt;
  const auto stamp = rest.substr(0, 14);
  const auto parsed = parse_archive_timestamp(stamp);
  if (!parsed) return std::nullopt;
  rest.remove_prefix(14);
  // Optional non-digit modifier such as im_, cs_, js_ before the slash.
  const auto slash = rest.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  for (std::size_t i = 0; i < slash; ++i) {
    if (std::isdigit(static_cast<unsigned char>(rest[i]))) return std::nullopt;
  }
  auto target = rest.substr(slash + 1);
  if (target.empty()) return std::nullopt;
  return ArchiveRef{*parsed, std::string(target)};
}

namespace {

struct UriParts {
  std::string host;  // lowercase
  std::string path;  // no query/fragment
};

UriParts split_uri(std::string_view uri) {
  UriParts parts;
  auto rest = uri;
  const auto scheme = rest.find("://");
  if (scheme != std::string_view::npos) {
    rest.remove_prefix(scheme + 3);
    const auto host_end = rest.find_first_of("/?#");
    parts.host = to_lower(rest.substr(0, host_end));
    const auto port = parts.host.rfind(':');
    if (port != std::string::npos &&
        parts.host.find_first_not_of("0123456789", port + 1) ==
            std::string::npos)
      parts.host.resize(port);
    if (host_end == std::string_view::npos) {
      parts.path = "/";
      return parts;
    }
    rest.remove_prefix(host_end);
  }
  const auto stop = rest.find_first_of("?#");
  parts.path = std::string(stop == std::string_view::npos
                               ? rest
                               : rest.substr(0, stop));
  if (parts.path.empty()) parts.path = "/";
  return parts;
}

bool host_matches(const std::string& host, const std::string& suffix) {
  if (host == suffix) return true;
  return host.size() > suffix.size() &&
         host.compare(host.size() - suffix.size(), suffix.size(), suffix) ==
             0 &&
         host[host.size() - suffix.size() - 1] == '.';
}

std::string last_segment(const std::string& path) {
  const auto slash = path.rfind('/');
  return slash == std::string::npos ? path : path.substr(slash + 1);
}

}  // namespace

bool keep_request(const LogEntry& entry, const FilterConfig& config) {
  // Filters look at the wiki target when the visited URI is an archive
  // memento, otherwise at the visited URI itself.
  std::string subject = entry.visited_uri;
  if (const auto archive = extract_archive_datetime(subject))
    subject = archive->target_uri;
  const auto parts = split_uri(subject);

  const auto segment = percent_decode(last_segment(parts.path));
  const auto dot = segment.rfind('.');
  if (dot != std::string::npos && dot + 1 < segment.size()) {
    const auto ext = to_lower(segment.substr(dot + 1));
    for (const auto& banned : config.asset_extensions)
      if (ext == banned) return false;
  }

  for (const auto& ns : config.namespaces) {
    if (segment.size() >= ns.size() && segment.compare(0, ns.size(), ns) == 0)
      return false;
  }

  if (!parts.host.empty()) {
    for (const auto& ad : config.ad_hosts)
      if (host_matches(parts.host, to_lower(ad))) return false;
  }
  return true;
}

std::vector<LogEntry> filter_requests(std::vector<LogEntry> entries,
                                      const FilterConfig& config) {
  std::vector<LogEntry> kept;
  kept.reserve(entries.size());
  for (auto& entry : entries)
    if (keep_request(entry, config)) kept.push_back(std::move(entry));
  return kept;
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::spoiler: return "spoiler";
    case Category::safe: return "safe";
    default: return "indeterminate";
  }
}

TimelineRevisionSource::TimelineRevisionSource(
    const std::vector<PageTimeline>& timelines) {
  for (const auto& t : timelines) {
    std::vector<EpochSecond> datetimes;
    datetimes.reserve(t.revisions.size());
    for (const auto& rev : t.revisions) datetimes.push_back(rev.datetime);
    if (!t.uri_r.empty()) by_uri_.emplace(t.uri_r, datetimes);
    by_title_.emplace(t.page_title, std::move(datetimes));
  }
}

RevisionLookup TimelineRevisionSource::lookup(const std::string& target_uri) {
  RevisionLookup result;
  if (const auto it = by_uri_.find(target_uri); it != by_uri_.end()) {
    result.status = RevisionLookup::Status::found;
    result.datetimes = it->second;
    return result;
  }
  const auto parts = split_uri(target_uri);
  const auto wiki = parts.path.find("/wiki/");
  if (wiki != std::string::npos) {
    auto title = percent_decode(parts.path.substr(wiki + 6));
    std::replace(title.begin(), title.end(), '_', ' ');
    if (const auto it = by_title_.find(title); it != by_title_.end()) {
      result.status = RevisionLookup::Status::found;
      result.datetimes = it->second;
      return result;
    }
  }
  result.status = RevisionLookup::Status::unknown_page;
  return result;
}

Classification classify(const LogEntry& entry, RevisionSource& source) {
  Classification c;

  const auto visited = extract_archive_datetime(entry.visited_uri);
  if (!visited) {
    c.reason = "visited URI is not an archive memento";
    return c;
  }
  c.t_m = visited->datetime;

  if (entry.referrer_uri.empty()) {
    c.reason = "missing referrer";
    return c;
  }
  const auto referred = extract_archive_datetime(entry.referrer_uri);
  if (!referred) {
    c.reason = "referrer carries no archive datetime";
    return c;
  }
  c.t_a = referred->datetime;

  const auto lookup = source.lookup(visited->target_uri);
  if (lookup.status == RevisionLookup::Status::unavailable) {
    c.reason = lookup.detail.empty() ? "revision history unavailable"
                                     : lookup.detail;
    return c;
  }
  if (lookup.status == RevisionLookup::Status::unknown_page ||
      lookup.datetimes.empty()) {
    c.reason = "no revision history for the visited page";
    return c;
  }

  // Capture rule: the memento holds the latest revision at or before it.
  const auto it = std::upper_bound(lookup.datetimes.begin(),
                                   lookup.datetimes.end(), visited->datetime);
  if (it == lookup.datetimes.begin()) {
    c.reason = "memento predates the page's first revision";
    return c;
  }
  c.t_r = *(it - 1);

  c.category = *c.t_a < *c.t_r ? Category::spoiler : Category::safe;
  return c;
}

std::optional<double> AuditSummary::spoiler_rate_determinate() const {
  const auto denom = spoiler + safe;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(spoiler) / static_cast<double>(denom);
}

std::optional<double> AuditSummary::spoiler_rate_overall() const {
  const auto denom = spoiler + safe + indeterminate;
  if (denom == 0) return std::nullopt;
  return static_cast<double>(spoiler) / static_cast<double>(denom);
}

AuditSummary audit_log_file(const std::string& path, RevisionSource& source,
                            const FilterConfig& config, const AuditSink& sink) {
  gzFile file = gzopen(path.c_str(), "rb");
  if (!file) throw IoError("cannot open log file " + path);

  AuditSummary summary;
  std::string line;
  char buffer[1 << 16];
  bool eof = false;
  while (!eof) {
    line.clear();
    while (true) {
      if (gzgets(file, buffer, sizeof(buffer)) == nullptr) {
        eof = true;
        break;
      }
      line += buffer;
      if (!line.empty() && line.back() == '\n') break;
    }
    if (line.empty()) continue;
    while (!line.empty() && (line.back() == '\n' || line.back() == '\r'))
      line.pop_back();
    if (line.empty()) continue;

    ++summary.lines_total;
    LogEntry entry;
    try {
      entry = parse_log_line(line);
    } catch (const MalformedLogLine&) {
      ++summary.lines_malformed;
      continue;
    }
    if (!keep_request(entry, config)) {
      ++summary.filtered_out;
      continue;
    }
    const auto classification = classify(entry, source);
    switch (classification.category) {
      case Category::spoiler: ++summary.spoiler; break;
      case Category::safe: ++summary.safe; break;
      case Category::indeterminate: ++summary.indeterminate; break;
    }
    if (sink) sink({entry.visitor_id, entry.visited_uri, classification});
  }
  gzclose(file);
  return summary;
}

}  // namespace wikimento
