#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wikimento/dataset.hpp"
#include "wikimento/errors.hpp"
#include "wikimento/fetch.hpp"
#include "wikimento/ingest.hpp"
#include "wikimento/logaudit.hpp"
#include "wikimento/report.hpp"
#include "wikimento/spoiler.hpp"
#include "wikimento/timegate.hpp"

namespace fs = std::filesystem;
using namespace wikimento;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

EventSeries load_series(const std::string& dataset_dir,
                        const std::string& episodes_path) {
  if (!episodes_path.empty())
    return parse_episode_list(read_file(episodes_path));
  if (dataset_has_episodes(dataset_dir))
    return dataset_load_episodes(dataset_dir);
  throw Error("no episode list: pass --episodes or ingest one into the dataset");
}

struct IngestArgs {
  std::string out_dir;
  std::string export_file;
  std::string export_base;
  std::string titles_file;
  std::string timemap_base;
  std::string page_base = "http://wiki.local/wiki/";
  std::string episodes_file;
  std::string wiki_id;
  std::string snapshot;
  std::string cache_dir;
  double rps = 1.0;
  int retries = 3;
};

int run_ingest(const IngestArgs& args) {
  DatasetManifest manifest;
  manifest.wiki_id = args.wiki_id.empty()
                         ? fs::path(args.out_dir).filename().string()
                         : args.wiki_id;
  manifest.base_uri = args.page_base;
  manifest.snapshot_datetime =
      args.snapshot.empty() ? static_cast<EpochSecond>(std::time(nullptr))
                            : parse_iso8601(args.snapshot);

  std::vector<std::string> warnings;
  std::vector<std::string> titles;

  if (!args.export_file.empty()) {
    const auto docs = parse_wiki_export(read_file(args.export_file), &warnings);
    for (const auto& doc : docs) {
      dataset_store_page(args.out_dir, doc.page_title,
                         serialize_wiki_export({doc}));
      titles.push_back(doc.page_title);
    }
  } else {
    for (const auto& raw_line : [&] {
           std::vector<std::string> lines;
           std::ifstream in(args.titles_file);
           if (!in) throw IoError("cannot read " + args.titles_file);
           std::string line;
           while (std::getline(in, line)) {
             if (!line.empty() && line.back() == '\r') line.pop_back();
             if (line.empty() || line[0] == '#') continue;
             lines.push_back(line);
           }
           return lines;
         }()) {
      titles.push_back(raw_line);
    }

    FetchOptions options;
    options.requests_per_second = args.rps;
    options.retries = args.retries;
    options.cache_dir = args.cache_dir;
    Fetcher fetcher(options);

    for (const auto& title : titles) {
      const auto export_uri = args.export_base + uri_for_title("", title);
      try {
        const auto body = fetcher.fetch(export_uri).body;
        parse_wiki_export(body, &warnings);  // validate before storing
        dataset_store_page(args.out_dir, title, body);
      } catch (const std::exception& e) {
        warnings.push_back("export of '" + title + "' not ingested: " +
                           e.what());
        continue;
      }
      if (args.timemap_base.empty()) continue;
      const auto uri_r = uri_for_title(manifest.base_uri, title);
      try {
        const auto body = fetcher.fetch(args.timemap_base + uri_r).body;
        parse_timemap(body, &warnings);  // validate before storing
        dataset_store_timemap(args.out_dir, title, body);
      } catch (const std::exception& e) {
        warnings.push_back("TimeMap for '" + title +
                           "' not ingested (page will count as unarchived): " +
                           e.what());
      }
    }
  }

  if (!args.episodes_file.empty()) {
    const auto bytes = read_file(args.episodes_file);
    parse_episode_list(bytes);  // validate before storing
    dataset_store_episodes(args.out_dir, bytes);
  }
  save_manifest(args.out_dir, manifest);

  print_warnings(warnings);
  std::cout << "ingested " << titles.size() << " page(s) into " << args.out_dir
            << "\n";
  return 0;
}

struct AnalyzeArgs {
  std::string dataset_dir;
  std::string episodes_file;
  std::string out_dir;
  unsigned threads = 0;
};

int run_analyze(const AnalyzeArgs& args) {
  std::vector<std::string> warnings;
  auto loaded = dataset_load(args.dataset_dir, &warnings);
  const auto series = load_series(args.dataset_dir, args.episodes_file);
  if (series.empty()) throw Error("episode list is empty");
  if (loaded.timelines.empty()) throw Error("dataset holds no pages");

  const auto reports = analyze_wiki(series, loaded.timelines, args.threads);
  const auto agg =
      aggregate(loaded.manifest.wiki_id, reports, loaded.timelines);

  write_text_file((fs::path(args.out_dir) / "reports.csv").string(),
                  render_reports_csv(reports));
  write_text_file((fs::path(args.out_dir) / "aggregate.csv").string(),
                  render_aggregate_csv(agg));
  write_plot_files(args.out_dir, reports, loaded.timelines, series);

  print_warnings(warnings);
  std::cout << "pages: " << agg.page_count << " analyzed: " << agg.analyzed_count
            << " unarchived: " << agg.unarchived_count
            << " failed: " << agg.failed_count
            << " redirects removed: " << loaded.redirects_removed << "\n";
  std::cout << "reports written to " << args.out_dir << "\n";
  return 0;
}

struct ServeArgs {
  std::string dataset_dir;
  std::string listen = "127.0.0.1:8080";
  std::string heuristic = "minpast";
  std::string base_uri;
  std::string oldid_base;
};

int run_serve(const ServeArgs& args) {
  std::vector<std::string> warnings;
  const auto loaded = dataset_load(args.dataset_dir, &warnings);
  print_warnings(warnings);

  StoreOptions store_options;
  store_options.oldid_base = args.oldid_base;
  auto store = RevisionStore::from_timelines(loaded.timelines, store_options);
  if (store.page_count() == 0) throw Error("dataset holds no servable pages");

  ServiceConfig config;
  const auto heuristic = heuristic_from_name(args.heuristic);
  if (!heuristic) throw Error("unknown heuristic '" + args.heuristic + "'");
  config.default_heuristic = *heuristic;
  config.base_uri = args.base_uri;

  const auto colon = args.listen.rfind(':');
  if (colon == std::string::npos)
    throw Error("--listen must be HOST:PORT");
  auto host = args.listen.substr(0, colon);
  if (host.empty()) host = "0.0.0.0";
  const int port = std::stoi(args.listen.substr(colon + 1));

  TimegateService service(std::move(store), config);
  std::cout << "negotiating " << service.store().page_count()
            << " page(s) on http://" << host << ":" << port
            << " (default heuristic: " << args.heuristic << ")\n"
            << std::flush;
  if (!service.listen(host, port))
    throw Error("cannot listen on " + args.listen);
  return 0;
}

struct AuditArgs {
  std::string log_file;
  std::string dataset_dir;
  std::string out_file;
};

int run_audit(const AuditArgs& args) {
  std::vector<std::string> warnings;
  const auto loaded = dataset_load(args.dataset_dir, &warnings);
  print_warnings(warnings);
  TimelineRevisionSource source(loaded.timelines);

  std::string records =
      "visitor,category,t_a,t_m,t_r,reason,visited\n";
  const auto opt_col = [](const std::optional<EpochSecond>& v) {
    return v ? std::to_string(*v) : "";
  };
  const auto summary = audit_log_file(
      args.log_file, source, {}, [&](const AuditRecord& record) {
        records += record.visitor_id;
        records += ",";
        records += category_name(record.classification.category);
        records += "," + opt_col(record.classification.t_a);
        records += "," + opt_col(record.classification.t_m);
        records += "," + opt_col(record.classification.t_r);
        records += ",\"" + record.classification.reason + "\"";
        records += ",\"" + record.visited_uri + "\"\n";
      });

  if (!args.out_file.empty()) write_text_file(args.out_file, records);

  std::cout << "lines: " << summary.lines_total
            << " malformed: " << summary.lines_malformed
            << " filtered: " << summary.filtered_out << "\n";
  std::cout << "spoiler: " << summary.spoiler << " safe: " << summary.safe
            << " indeterminate: " << summary.indeterminate << "\n";
  const auto rate = summary.spoiler_rate_determinate();
  const auto overall = summary.spoiler_rate_overall();
  std::cout << "spoiler rate (determinate): "
            << (rate ? std::to_string(*rate) : "n/a")
            << "  (overall): "
            << (overall ? std::to_string(*overall) : "n/a") << "\n";
  return 0;
}

struct OracleArgs {
  std::string dataset_dir;
  std::string episodes_file;
  std::int64_t cap = kDefaultZoneCap;
  std::size_t max_pages = 0;
};

int run_oracle(const OracleArgs& args) {
  std::vector<std::string> warnings;
  const auto loaded = dataset_load(args.dataset_dir, &warnings);
  const auto series = load_series(args.dataset_dir, args.episodes_file);
  if (series.empty()) throw Error("episode list is empty");
  print_warnings(warnings);

  std::size_t checked = 0, skipped = 0, mismatched = 0;
  for (const auto& timeline : loaded.timelines) {
    if (args.max_pages && checked >= args.max_pages) break;
    std::int64_t analytic = 0;
    try {
      analytic = union_seconds(spoiler_areas(series, timeline));
    } catch (const NoCapturedMemento&) {
      ++skipped;
      continue;
    }
    std::int64_t brute = 0;
    try {
      brute = brute_force_spoiler_seconds(series, timeline, args.cap);
    } catch (const ZoneTooLarge&) {
      std::cout << timeline.page_title << ": zone exceeds --cap, skipped\n";
      ++skipped;
      continue;
    }
    ++checked;
    const bool ok = analytic == brute;
    if (!ok) ++mismatched;
    std::cout << timeline.page_title << ": analytic=" << analytic
              << " brute=" << brute << (ok ? " OK" : " MISMATCH") << "\n";
  }

  std::cout << "checked " << checked << " page(s), skipped " << skipped
            << "\n";
  if (mismatched) {
    std::cout << "analytic == brute-force: FAILED on " << mismatched
              << " page(s)\n";
    return 1;
  }
  std::cout << "analytic == brute-force: OK\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spoiler-aware temporal toolkit for wiki archives"};
  app.require_subcommand(1);

  const char* cache_env = std::getenv("WIKIMENTO_CACHE");
  const std::string default_cache = cache_env ? cache_env : "";

  IngestArgs ingest_args;
  ingest_args.cache_dir = default_cache;
  auto* ingest = app.add_subcommand(
      "ingest", "Build a dataset from a wiki export and archive TimeMaps");
  ingest->add_option("--out", ingest_args.out_dir, "Dataset directory")
      ->required();
  auto* export_opt =
      ingest->add_option("--export", ingest_args.export_file,
                         "Local MediaWiki XML export (offline mode)");
  auto* export_base_opt = ingest->add_option(
      "--wiki-export-base", ingest_args.export_base,
      "Base URI for per-title export fetches, e.g. "
      "http://wiki.test/wiki/Special:Export/");
  ingest->add_option("--titles", ingest_args.titles_file,
                     "File with one page title per line (remote mode)");
  ingest->add_option("--timemap-base", ingest_args.timemap_base,
                     "TimeMap endpoint prefix; the page URI-R is appended");
  ingest->add_option("--page-base", ingest_args.page_base,
                     "Base URI for page URI-Rs")->capture_default_str();
  ingest->add_option("--episodes", ingest_args.episodes_file,
                     "Episode list CSV to store in the dataset");
  ingest->add_option("--wiki-id", ingest_args.wiki_id,
                     "Wiki identifier (default: dataset directory name)");
  ingest->add_option("--snapshot", ingest_args.snapshot,
                     "Snapshot datetime, ISO-8601 (default: now)");
  ingest->add_option("--rps", ingest_args.rps,
                     "Politeness cap, requests per second per host")->capture_default_str();
  ingest->add_option("--retries", ingest_args.retries,
                     "Retries on 5xx and transport errors")->capture_default_str();
  ingest->add_option("--cache", ingest_args.cache_dir,
                     "Fetch cache directory (default: $WIKIMENTO_CACHE)");
  export_opt->excludes(export_base_opt);

  AnalyzeArgs analyze_args;
  auto* analyze = app.add_subcommand(
      "analyze", "Compute spoiler areas, probabilities, and reports");
  analyze->add_option("--dataset", analyze_args.dataset_dir, "Dataset directory")
      ->required();
  analyze->add_option("--episodes", analyze_args.episodes_file,
                      "Episode list CSV (default: the dataset's)");
  analyze->add_option("--out", analyze_args.out_dir, "Output directory")
      ->required();
  analyze->add_option("--threads", analyze_args.threads,
                      "Worker threads, 0 = auto")->capture_default_str();

  ServeArgs serve_args;
  auto* serve =
      app.add_subcommand("serve", "Run the Memento TimeGate over a dataset");
  serve->add_option("--dataset", serve_args.dataset_dir, "Dataset directory")
      ->required();
  serve->add_option("--listen", serve_args.listen, "HOST:PORT")->capture_default_str();
  serve->add_option("--heuristic", serve_args.heuristic,
                    "Default heuristic: minpast or mindist")->capture_default_str();
  serve->add_option("--base-uri", serve_args.base_uri,
                    "Absolute base for Location/Link headers "
                    "(default: request Host)");
  serve->add_option("--oldid-base", serve_args.oldid_base,
                    "Emit origin-wiki URI-Ms as this prefix + revision id");

  AuditArgs audit_args;
  auto* audit = app.add_subcommand(
      "audit", "Classify archive access-log requests for spoilers");
  audit->add_option("--log", audit_args.log_file,
                    "NCSA log file, plain or gzipped")
      ->required();
  audit->add_option("--dataset", audit_args.dataset_dir,
                    "Dataset supplying revision histories")
      ->required();
  audit->add_option("--out", audit_args.out_file, "Per-entry records CSV");

  OracleArgs oracle_args;
  auto* oracle = app.add_subcommand(
      "oracle", "Verify analytic spoiler areas against the per-second oracle");
  oracle->add_option("--dataset", oracle_args.dataset_dir, "Dataset directory")
      ->required();
  oracle->add_option("--episodes", oracle_args.episodes_file,
                     "Episode list CSV (default: the dataset's)");
  oracle->add_option("--cap", oracle_args.cap,
                     "Zone width cap in seconds for the brute-force pass")->capture_default_str();
  oracle->add_option("--max-pages", oracle_args.max_pages,
                     "Check at most this many pages (0 = all)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (ingest->parsed()) {
      if (ingest_args.export_file.empty() &&
          (ingest_args.export_base.empty() || ingest_args.titles_file.empty()))
        throw Error(
            "pass --export FILE, or --wiki-export-base and --titles for "
            "remote ingestion");
      return run_ingest(ingest_args);
    }
    if (analyze->parsed()) return run_analyze(analyze_args);
    if (serve->parsed()) return run_serve(serve_args);
    if (audit->parsed()) return run_audit(audit_args);
    if (oracle->parsed()) return run_oracle(oracle_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
