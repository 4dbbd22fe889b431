#include "wikimento/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <optional>

#include "csv.hpp"
#include "wikimento/errors.hpp"
#include "xml_reader.hpp"

namespace wikimento {

namespace {

void warn(std::vector<std::string>* sink, std::string message) {
  if (sink) sink->push_back(std::move(message));
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

bool starts_with_redirect_directive(std::string_view text) {
  const auto t = trim(text);
  constexpr std::string_view directive = "#redirect";
  if (t.size() < directive.size()) return false;
  for (std::size_t i = 0; i < directive.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(t[i])) != directive[i])
      return false;
  }
  return true;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<WikiExportDocument> parse_wiki_export(
    std::string_view bytes, std::vector<std::string>* warnings) {
  detail::XmlReader reader(bytes);
  std::vector<WikiExportDocument> out;
  std::vector<std::string> path;

  struct RevisionState {
    std::optional<std::int64_t> id;
    std::optional<EpochSecond> timestamp;
    bool text_redirect = false;
  };
  struct PageState {
    std::string title;
    bool redirect_marker = false;
    std::vector<Revision> revisions;
    std::string skip_reason;  // non-empty: drop the page, keep the reason
  };

  std::optional<PageState> page;
  RevisionState revision;
  bool in_revision = false;
  bool capturing = false;
  std::string captured;
  std::size_t page_ordinal = 0;

  const auto page_label = [&]() {
    if (page && !page->title.empty()) return "page '" + page->title + "'";
    return "page #" + std::to_string(page_ordinal);
  };
  const auto skip_page = [&](const std::string& why) {
    if (page && page->skip_reason.empty()) page->skip_reason = why;
  };

  while (true) {
    const auto event = reader.next();
    if (event == detail::XmlReader::Event::end_document) break;

    if (event == detail::XmlReader::Event::text) {
      if (capturing && captured.size() < 4096) captured += reader.text();
      continue;
    }

    if (event == detail::XmlReader::Event::start_element) {
      const std::string parent = path.empty() ? "" : path.back();
      const auto& name = reader.name();
      if (name == "page" && path.size() <= 1) {
        ++page_ordinal;
        page.emplace();
      } else if (page && parent == "page") {
        if (name == "title") {
          capturing = true;
          captured.clear();
        } else if (name == "redirect") {
          page->redirect_marker = true;
        } else if (name == "revision") {
          revision = {};
          in_revision = true;
        }
      } else if (page && in_revision && parent == "revision") {
        if ((name == "id" && !revision.id) || name == "timestamp" ||
            name == "text") {
          capturing = true;
          captured.clear();
        }
      }
      path.push_back(name);
      continue;
    }

    // end_element
    const auto& name = reader.name();
    if (!path.empty()) path.pop_back();
    const std::string parent = path.empty() ? "" : path.back();

    const bool at_revision_field =
        page && in_revision && parent == "revision" &&
        (name == "id" || name == "timestamp" || name == "text");
    const bool at_page_title =
        page && !in_revision && parent == "page" && name == "title";
    if (capturing && (at_revision_field || at_page_title)) {
      capturing = false;
      if (at_revision_field) {
        if (name == "id") {
          const auto t = trim(captured);
          std::int64_t value = 0;
          const auto [ptr, ec] =
              std::from_chars(t.data(), t.data() + t.size(), value);
          if (ec != std::errc() || ptr != t.data() + t.size())
            skip_page("revision id '" + std::string(t) + "' is not an integer");
          else
            revision.id = value;
        } else if (name == "timestamp") {
          try {
            revision.timestamp = parse_iso8601(trim(captured));
          } catch (const MalformedDate& e) {
            skip_page(std::string("bad revision timestamp: ") + e.what());
          }
        } else if (name == "text") {
          revision.text_redirect = starts_with_redirect_directive(captured);
        }
      } else {
        page->title = std::string(trim(captured));
      }
    }

    if (name == "revision" && page && in_revision) {
      if (!revision.id)
        skip_page("revision without an id");
      else if (!revision.timestamp)
        skip_page("revision without a timestamp");
      else
        page->revisions.push_back(
            {*revision.id, *revision.timestamp, revision.text_redirect});
      in_revision = false;
      continue;
    }

    if (name == "page" && page) {
      if (page->title.empty()) skip_page("page without a title");
      if (page->revisions.empty()) skip_page("page without revisions");
      if (!page->skip_reason.empty()) {
        warn(warnings, page_label() + " skipped: " + page->skip_reason);
      } else {
        WikiExportDocument doc;
        doc.page_title = std::move(page->title);
        doc.revisions = std::move(page->revisions);
        const auto latest = std::max_element(
            doc.revisions.begin(), doc.revisions.end(),
            [](const Revision& a, const Revision& b) {
              return std::tie(a.datetime, a.id) < std::tie(b.datetime, b.id);
            });
        doc.is_redirect = page->redirect_marker || latest->is_redirect;
        out.push_back(std::move(doc));
      }
      page.reset();
    }
  }
  return out;
}

std::string serialize_wiki_export(
    const std::vector<WikiExportDocument>& docs) {
  std::string out = "<mediawiki>\n";
  for (const auto& doc : docs) {
    out += "  <page>\n";
    out += "    <title>" + xml_escape(doc.page_title) + "</title>\n";
    if (doc.is_redirect) out += "    <redirect/>\n";
    for (const auto& rev : doc.revisions) {
      out += "    <revision>\n";
      out += "      <id>" + std::to_string(rev.id) + "</id>\n";
      out += "      <timestamp>" + format_iso8601(rev.datetime) +
             "</timestamp>\n";
      out += "    </revision>\n";
    }
    out += "  </page>\n";
  }
  out += "</mediawiki>\n";
  return out;
}

namespace {

struct RawLink {
  std::string target;
  std::vector<std::pair<std::string, std::string>> params;

  std::string param(std::string_view key) const {
    for (const auto& [k, v] : params)
      if (k == key) return v;
    return {};
  }
};

bool token_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '-' ||
         c == '_' || c == '.' || c == '/' || c == '+';
}

// RFC 8288-style link-format scanner.
std::vector<RawLink> scan_links(std::string_view text) {
  std::vector<RawLink> links;
  std::size_t i = 0;
  const auto skip_ws = [&] {
    while (i < text.size() &&
           std::isspace(static_cast<unsigned char>(text[i])))
      ++i;
  };

  skip_ws();
  if (i >= text.size()) throw MalformedTimeMap("empty TimeMap document");

  while (i < text.size()) {
    if (text[i] != '<')
      throw MalformedTimeMap("expected '<' at byte " + std::to_string(i));
    const auto close = text.find('>', i);
    if (close == std::string_view::npos)
      throw MalformedTimeMap("unterminated URI reference");
    RawLink link;
    link.target = std::string(text.substr(i + 1, close - i - 1));
    i = close + 1;

    while (true) {
      skip_ws();
      if (i >= text.size()) break;
      if (text[i] == ',') {
        ++i;
        skip_ws();
        break;
      }
      if (text[i] != ';')
        throw MalformedTimeMap("expected ';' or ',' at byte " +
                               std::to_string(i));
      ++i;
      skip_ws();
      std::string key;
      while (i < text.size() && token_char(text[i])) key += text[i++];
      if (key.empty())
        throw MalformedTimeMap("empty parameter name at byte " +
                               std::to_string(i));
      std::string value;
      skip_ws();
      if (i < text.size() && text[i] == '=') {
        ++i;
        skip_ws();
        if (i < text.size() && text[i] == '"') {
          ++i;
          while (i < text.size() && text[i] != '"') {
            if (text[i] == '\\' && i + 1 < text.size()) ++i;
            value += text[i++];
          }
          if (i >= text.size())
            throw MalformedTimeMap("unterminated quoted value");
          ++i;
        } else {
          while (i < text.size() && token_char(text[i])) value += text[i++];
        }
      }
      link.params.emplace_back(std::move(key), std::move(value));
    }
    links.push_back(std::move(link));
  }
  return links;
}

std::vector<std::string> rel_tokens(const std::string& rel) {
  std::vector<std::string> tokens;
  std::string cur;
  for (char c : rel) {
    if (c == ' ') {
      if (!cur.empty()) tokens.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) tokens.push_back(std::move(cur));
  return tokens;
}

bool has_token(const std::vector<std::string>& tokens, std::string_view t) {
  return std::find(tokens.begin(), tokens.end(), t) != tokens.end();
}

}  // namespace

TimeMapDocument parse_timemap(std::string_view bytes,
                              std::vector<std::string>* warnings) {
  const auto links = scan_links(bytes);
  TimeMapDocument doc;
  for (const auto& link : links) {
    const auto tokens = rel_tokens(link.param("rel"));
    if (has_token(tokens, "original") && doc.uri_r.empty()) {
      doc.uri_r = link.target;
      continue;
    }
    if (has_token(tokens, "self") ||
        (has_token(tokens, "timemap") && doc.uri_t.empty())) {
      doc.uri_t = link.target;
      continue;
    }
    if (has_token(tokens, "timegate")) {
      if (doc.uri_g.empty()) doc.uri_g = link.target;
      continue;
    }
    if (has_token(tokens, "memento")) {
      const auto datetime = link.param("datetime");
      if (datetime.empty()) {
        warn(warnings, "memento link <" + link.target +
                           "> has no datetime attribute; dropped");
        continue;
      }
      try {
        doc.entries.push_back({link.target, parse_http_date(datetime)});
      } catch (const MalformedDate&) {
        warn(warnings, "memento link <" + link.target +
                           "> has unparseable datetime '" + datetime +
                           "'; dropped");
      }
    }
  }
  std::stable_sort(doc.entries.begin(), doc.entries.end(),
                   [](const TimeMapEntry& a, const TimeMapEntry& b) {
                     return a.datetime < b.datetime;
                   });
  return doc;
}

std::string serialize_timemap(const TimeMapDocument& doc) {
  std::vector<std::string> links;
  if (!doc.uri_r.empty()) links.push_back("<" + doc.uri_r + ">; rel=\"original\"");
  if (!doc.uri_t.empty())
    links.push_back("<" + doc.uri_t +
                    ">; rel=\"self\"; type=\"application/link-format\"");
  if (!doc.uri_g.empty())
    links.push_back("<" + doc.uri_g + ">; rel=\"timegate\"");
  for (std::size_t k = 0; k < doc.entries.size(); ++k) {
    std::string rel = "memento";
    if (doc.entries.size() == 1) {
      rel = "first last memento";
    } else if (k == 0) {
      rel = "first memento";
    } else if (k + 1 == doc.entries.size()) {
      rel = "last memento";
    }
    links.push_back("<" + doc.entries[k].uri_m + ">; rel=\"" + rel +
                    "\"; datetime=\"" + format_http_date(doc.entries[k].datetime) +
                    "\"");
  }
  std::string out;
  for (std::size_t k = 0; k < links.size(); ++k) {
    out += links[k];
    out += k + 1 < links.size() ? ",\n" : "\n";
  }
  return out;
}

EventSeries parse_episode_list(std::string_view bytes) {
  std::vector<Event> events;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  std::vector<std::string> fields;

  while (pos <= bytes.size()) {
    const auto eol = bytes.find('\n', pos);
    std::string_view line = eol == std::string_view::npos
                                ? bytes.substr(pos)
                                : bytes.substr(pos, eol - pos);
    pos = eol == std::string_view::npos ? bytes.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (eol == std::string_view::npos) break;
      continue;
    }

    if (!detail::csv_split(line, fields))
      throw MalformedEpisodeList("unbalanced quotes", line_no);

    if (!header_seen) {
      const std::vector<std::string> expected = {"series", "season", "episode",
                                                 "title", "air_datetime"};
      if (fields.size() != expected.size())
        throw MalformedEpisodeList("header must have 5 columns", line_no);
      for (std::size_t i = 0; i < expected.size(); ++i)
        if (std::string(trim(fields[i])) != expected[i])
          throw MalformedEpisodeList(
              "header must be series,season,episode,title,air_datetime",
              line_no);
      header_seen = true;
      continue;
    }

    if (fields.size() != 5)
      throw MalformedEpisodeList("expected 5 fields, got " +
                                     std::to_string(fields.size()),
                                 line_no);
    Event e;
    e.series_id = fields[0];
    const auto parse_count = [&](const std::string& raw,
                                 const char* what) -> int {
      const auto t = trim(raw);
      int value = 0;
      const auto [ptr, ec] =
          std::from_chars(t.data(), t.data() + t.size(), value);
      if (ec != std::errc() || ptr != t.data() + t.size() || value < 0)
        throw MalformedEpisodeList(std::string(what) + " '" + raw +
                                       "' is not a non-negative integer",
                                   line_no);
      return value;
    };
    e.season = parse_count(fields[1], "season");
    e.episode = parse_count(fields[2], "episode");
    e.label = fields[3];
    try {
      e.air_datetime = parse_iso8601(trim(fields[4]));
    } catch (const MalformedDate& err) {
      throw MalformedEpisodeList(err.what(), line_no);
    }
    events.push_back(std::move(e));
  }

  // Only reachable when every line was blank, so the row the header
  // should have occupied is the first one.
  if (!header_seen) throw MalformedEpisodeList("missing header row", 1);
  return make_event_series(std::move(events));
}

std::string serialize_episode_list(const EventSeries& series) {
  std::string out = "series,season,episode,title,air_datetime\n";
  for (const auto& e : series.events) {
    out += detail::csv_escape(e.series_id) + ",";
    out += std::to_string(e.season) + ",";
    out += std::to_string(e.episode) + ",";
    out += detail::csv_escape(e.label) + ",";
    out += format_iso8601(e.air_datetime) + "\n";
  }
  return out;
}

RedirectFilterResult filter_redirects(std::vector<WikiExportDocument> pages) {
  RedirectFilterResult result;
  result.pages.reserve(pages.size());
  for (auto& page : pages) {
    if (page.is_redirect)
      ++result.removed;
    else
      result.pages.push_back(std::move(page));
  }
  return result;
}

PageTimeline consistency_filter(const PageTimeline& timeline) {
  PageTimeline out;
  out.page_title = timeline.page_title;
  out.uri_r = timeline.uri_r;
  out.revisions = timeline.revisions;
  out.snapshot_datetime = timeline.snapshot_datetime;
  out.mementos.reserve(timeline.mementos.size());
  for (const auto& m : timeline.mementos)
    if (m.datetime <= timeline.snapshot_datetime) out.mementos.push_back(m);
  out.captures = build_capture_map(out.revisions, out.mementos);
  return out;
}

}  // namespace wikimento
