#include "wikimento/timegate.hpp"

#include <ctime>

#include "httplib.h"
#include "wikimento/errors.hpp"
#include "wikimento/ingest.hpp"

namespace wikimento {

RevisionStore RevisionStore::from_timelines(
    const std::vector<PageTimeline>& pages, const StoreOptions& options) {
  RevisionStore store;
  for (const auto& page : pages) {
    if (page.revisions.empty()) continue;
    StoreEntry entry;
    entry.uri_r = page.uri_r;
    entry.page_title = page.page_title;
    entry.revisions.reserve(page.revisions.size());
    for (const auto& rev : page.revisions) {
      StoreRevision sr;
      sr.revision_id = rev.id;
      sr.datetime = rev.datetime;
      sr.uri_m = options.oldid_base.empty()
                     ? "/memento/" + std::to_string(rev.id)
                     : options.oldid_base + std::to_string(rev.id);
      entry.revisions.push_back(std::move(sr));
    }
    store.entries_.push_back(std::move(entry));
  }

  for (std::size_t i = 0; i < store.entries_.size(); ++i) {
    const auto& entry = store.entries_[i];
    store.by_key_.emplace(entry.uri_r, i);
    store.by_key_.emplace(entry.page_title, i);
    std::string underscored = entry.page_title;
    for (auto& c : underscored)
      if (c == ' ') c = '_';
    store.by_key_.emplace(underscored, i);

    for (std::size_t j = 0; j < entry.revisions.size(); ++j) {
      const auto id = entry.revisions[j].revision_id;
      const auto [it, inserted] = store.by_revision_id_.emplace(
          id, std::make_pair(i, j));
      if (!inserted && options.oldid_base.empty())
        throw Error("revision id " + std::to_string(id) +
                    " appears on more than one page; /memento/{id} would be "
                    "ambiguous");
    }
  }
  return store;
}

const StoreEntry* RevisionStore::find_original(std::string_view key) const {
  const auto it = by_key_.find(key);
  if (it == by_key_.end()) return nullptr;
  return &entries_[it->second];
}

std::optional<RevisionStore::MementoRef> RevisionStore::find_memento(
    std::int64_t revision_id) const {
  const auto it = by_revision_id_.find(revision_id);
  if (it == by_revision_id_.end()) return std::nullopt;
  const auto& [entry_idx, rev_idx] = it->second;
  return MementoRef{&entries_[entry_idx], &entries_[entry_idx].revisions[rev_idx]};
}

std::optional<NegotiationResult> negotiate(const StoreEntry& entry,
                                           EpochSecond desired, Heuristic h) {
  std::vector<EpochSecond> candidates;
  candidates.reserve(entry.revisions.size());
  for (const auto& rev : entry.revisions) candidates.push_back(rev.datetime);

  std::optional<Selection> picked;
  if (h == Heuristic::mindist) {
    picked = select_mindist(candidates, desired);
  } else {
    picked = select_minpast(candidates, desired);
    if (!picked) return std::nullopt;
  }
  const auto& rev = entry.revisions[picked->index];
  return NegotiationResult{rev.uri_m, rev.datetime, rev.revision_id, h};
}

struct TimegateService::Impl {
  RevisionStore store;
  ServiceConfig config;
  httplib::Server server;

  std::string base_for(const httplib::Request& req) const {
    if (!config.base_uri.empty()) {
      auto base = config.base_uri;
      while (!base.empty() && base.back() == '/') base.pop_back();
      return base;
    }
    const auto host = req.get_header_value("Host");
    return "http://" + (host.empty() ? "localhost" : host);
  }

  std::string absolute(const httplib::Request& req,
                       const std::string& uri) const {
    if (uri.rfind('/', 0) == 0) return base_for(req) + uri;
    return uri;
  }

  // Link header for negotiation responses: original, timemap, first and
  // last mementos with their datetimes.
  std::string negotiation_links(const httplib::Request& req,
                                const StoreEntry& entry) const {
    const auto& first = entry.revisions.front();
    const auto& last = entry.revisions.back();
    std::string links = "<" + entry.uri_r + ">; rel=\"original\"";
    links += ", <" + base_for(req) + "/timemap/" + entry.uri_r +
             ">; rel=\"timemap\"; type=\"application/link-format\"";
    if (entry.revisions.size() == 1) {
      links += ", <" + absolute(req, first.uri_m) +
               ">; rel=\"first last memento\"; datetime=\"" +
               format_http_date(first.datetime) + "\"";
    } else {
      links += ", <" + absolute(req, first.uri_m) +
               ">; rel=\"first memento\"; datetime=\"" +
               format_http_date(first.datetime) + "\"";
      links += ", <" + absolute(req, last.uri_m) +
               ">; rel=\"last memento\"; datetime=\"" +
               format_http_date(last.datetime) + "\"";
    }
    return links;
  }

  void handle_timegate(const httplib::Request& req, httplib::Response& res) {
    const auto* entry = store.find_original(req.matches[1].str());
    if (!entry) {
      res.status = 404;
      res.set_content("unknown original resource\n", "text/plain");
      return;
    }

    EpochSecond desired;
    const auto accept_datetime = req.get_header_value("Accept-Datetime");
    if (accept_datetime.empty()) {
      desired = static_cast<EpochSecond>(std::time(nullptr));
    } else {
      try {
        desired = parse_http_date(accept_datetime);
      } catch (const MalformedDate& e) {
        res.status = 400;
        res.set_content(std::string("malformed Accept-Datetime: ") + e.what() +
                            "\n",
                        "text/plain");
        return;
      }
    }

    auto heuristic = config.default_heuristic;
    if (req.has_param("heuristic")) {
      const auto named = heuristic_from_name(req.get_param_value("heuristic"));
      if (!named) {
        res.status = 400;
        res.set_content("unknown heuristic; use mindist or minpast\n",
                        "text/plain");
        return;
      }
      heuristic = *named;
    }

    const auto result = negotiate(*entry, desired, heuristic);
    if (!result) {
      res.status = 406;
      res.set_header("Vary", "accept-datetime");
      res.set_content(
          "no memento exists at or before the requested datetime; refusing "
          "to deliver a later revision, which could reveal events the "
          "requester has not seen\n",
          "text/plain");
      return;
    }

    res.status = 302;
    res.set_header("Location", absolute(req, result->uri_m));
    res.set_header("Vary", "accept-datetime");
    res.set_header("Link", negotiation_links(req, *entry));
  }

  void handle_timemap(const httplib::Request& req, httplib::Response& res) {
    const auto* entry = store.find_original(req.matches[1].str());
    if (!entry) {
      res.status = 404;
      res.set_content("unknown original resource\n", "text/plain");
      return;
    }
    TimeMapDocument doc;
    doc.uri_r = entry->uri_r;
    doc.uri_t = base_for(req) + "/timemap/" + entry->uri_r;
    doc.uri_g = base_for(req) + "/timegate/" + entry->uri_r;
    doc.entries.reserve(entry->revisions.size());
    for (const auto& rev : entry->revisions)
      doc.entries.push_back({absolute(req, rev.uri_m), rev.datetime});
    res.status = 200;
    res.set_content(serialize_timemap(doc), "application/link-format");
  }

  void handle_memento(const httplib::Request& req, httplib::Response& res) {
    std::int64_t id = 0;
    try {
      id = std::stoll(req.matches[1].str());
    } catch (...) {
      res.status = 404;
      res.set_content("unknown memento\n", "text/plain");
      return;
    }
    const auto ref = store.find_memento(id);
    if (!ref) {
      res.status = 404;
      res.set_content("unknown memento\n", "text/plain");
      return;
    }
    res.status = 200;
    res.set_header("Memento-Datetime", format_http_date(ref->revision->datetime));
    res.set_header("Link", "<" + ref->entry->uri_r + ">; rel=\"original\"");
    res.set_content("memento of " + ref->entry->uri_r + "\nrevision " +
                        std::to_string(ref->revision->revision_id) + " at " +
                        format_iso8601(ref->revision->datetime) + "\n",
                    "text/plain");
  }

  void setup_routes() {
    server.Get("/healthz", [this](const httplib::Request&,
                                  httplib::Response& res) {
      res.set_content("ok\n", "text/plain");
    });
    server.Get(R"(/timegate/(.+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 handle_timegate(req, res);
               });
    server.Get(R"(/timemap/(.+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 handle_timemap(req, res);
               });
    server.Get(R"(/memento/(\d+))",
               [this](const httplib::Request& req, httplib::Response& res) {
                 handle_memento(req, res);
               });
  }
};

TimegateService::TimegateService(RevisionStore store, ServiceConfig config)
    : impl_(std::make_unique<Impl>()) {
  impl_->store = std::move(store);
  impl_->config = std::move(config);
  impl_->setup_routes();
}

TimegateService::~TimegateService() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

int TimegateService::bind_any(const std::string& host) {
  return impl_->server.bind_to_any_port(host);
}

bool TimegateService::serve_after_bind() {
  return impl_->server.listen_after_bind();
}

bool TimegateService::listen(const std::string& host, int port) {
  return impl_->server.listen(host, port);
}

void TimegateService::stop() { impl_->server.stop(); }

bool TimegateService::is_running() const { return impl_->server.is_running(); }

const RevisionStore& TimegateService::store() const { return impl_->store; }

}  // namespace wikimento
