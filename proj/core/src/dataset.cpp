#include "wikimento/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include "nlohmann/json.hpp"
#include "wikimento/errors.hpp"

namespace fs = std::filesystem;

namespace wikimento {

namespace {

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
}

void write_file(const fs::path& path, std::string_view data) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
  if (!out) throw IoError("short write to " + path.string());
}

bool unreserved(char c) {
  return (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
         (c >= '0' && c <= '9') || c == '.' || c == '_' || c == '-';
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

std::string encode_component(std::string_view raw) {
  static const char digits[] = "0123456789ABCDEF";
  std::string out;
  out.reserve(raw.size());
  for (unsigned char c : raw) {
    if (unreserved(static_cast<char>(c))) {
      out += static_cast<char>(c);
    } else {
      out += '%';
      out += digits[c >> 4];
      out += digits[c & 0xF];
    }
  }
  return out;
}

std::string decode_component(std::string_view encoded) {
  std::string out;
  out.reserve(encoded.size());
  for (std::size_t i = 0; i < encoded.size(); ++i) {
    if (encoded[i] == '%' && i + 2 < encoded.size()) {
      const int hi = hex_value(encoded[i + 1]);
      const int lo = hex_value(encoded[i + 2]);
      if (hi >= 0 && lo >= 0) {
        out += static_cast<char>(hi * 16 + lo);
        i += 2;
        continue;
      }
    }
    out += encoded[i];
  }
  return out;
}

std::string uri_for_title(std::string_view base_uri, std::string_view title) {
  std::string out(base_uri);
  for (unsigned char c : title) {
    if (c == ' ') {
      out += '_';
    } else if (unreserved(static_cast<char>(c)) || c == '/' || c == ':' ||
               c == '(' || c == ')' || c == '!' || c == ',' || c == '\'' ||
               c == '*' || c == '~' || c == '@') {
      out += static_cast<char>(c);
    } else {
      static const char digits[] = "0123456789ABCDEF";
      out += '%';
      out += digits[c >> 4];
      out += digits[c & 0xF];
    }
  }
  return out;
}

void save_manifest(const std::string& dataset_dir, const DatasetManifest& m) {
  nlohmann::json j{{"wiki_id", m.wiki_id},
                   {"base_uri", m.base_uri},
                   {"snapshot_datetime", m.snapshot_datetime},
                   {"format", m.format}};
  write_file(fs::path(dataset_dir) / "manifest.json", j.dump(2) + "\n");
}

DatasetManifest load_manifest(const std::string& dataset_dir) {
  const auto path = fs::path(dataset_dir) / "manifest.json";
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad manifest " + path.string() + ": " + e.what());
  }
  DatasetManifest m;
  try {
    m.wiki_id = j.at("wiki_id").get<std::string>();
    m.base_uri = j.at("base_uri").get<std::string>();
    m.snapshot_datetime = j.at("snapshot_datetime").get<EpochSecond>();
    m.format = j.value("format", 1);
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad manifest " + path.string() + ": " + e.what());
  }
  if (m.format != 1)
    throw IoError("unsupported dataset format " + std::to_string(m.format));
  return m;
}

void dataset_store_page(const std::string& dataset_dir,
                        const std::string& title, std::string_view xml_bytes) {
  write_file(fs::path(dataset_dir) / "pages" / (encode_component(title) + ".xml"),
             xml_bytes);
}

void dataset_store_timemap(const std::string& dataset_dir,
                           const std::string& title, std::string_view body) {
  write_file(
      fs::path(dataset_dir) / "timemaps" / (encode_component(title) + ".link"),
      body);
}

void dataset_store_episodes(const std::string& dataset_dir,
                            std::string_view csv_bytes) {
  write_file(fs::path(dataset_dir) / "episodes.csv", csv_bytes);
}

bool dataset_has_episodes(const std::string& dataset_dir) {
  std::error_code ec;
  return fs::exists(fs::path(dataset_dir) / "episodes.csv", ec);
}

EventSeries dataset_load_episodes(const std::string& dataset_dir) {
  return parse_episode_list(read_file(fs::path(dataset_dir) / "episodes.csv"));
}

DatasetLoadResult dataset_load(const std::string& dataset_dir,
                               std::vector<std::string>* warnings) {
  DatasetLoadResult result;
  result.manifest = load_manifest(dataset_dir);

  const auto pages_dir = fs::path(dataset_dir) / "pages";
  std::vector<fs::path> page_files;
  if (fs::exists(pages_dir)) {
    for (const auto& entry : fs::directory_iterator(pages_dir)) {
      if (entry.is_regular_file() && entry.path().extension() == ".xml")
        page_files.push_back(entry.path());
    }
  }
  std::sort(page_files.begin(), page_files.end());

  for (const auto& file : page_files) {
    auto docs = parse_wiki_export(read_file(file), warnings);
    auto filtered = filter_redirects(std::move(docs));
    result.redirects_removed += filtered.removed;

    for (auto& doc : filtered.pages) {
      std::vector<Memento> mementos;
      std::string uri_r =
          uri_for_title(result.manifest.base_uri, doc.page_title);
      const auto timemap_path =
          fs::path(dataset_dir) / "timemaps" /
          (encode_component(doc.page_title) + ".link");
      std::error_code ec;
      if (fs::exists(timemap_path, ec)) {
        try {
          const auto timemap = parse_timemap(read_file(timemap_path), warnings);
          if (!timemap.uri_r.empty()) uri_r = timemap.uri_r;
          mementos.reserve(timemap.entries.size());
          for (const auto& entry : timemap.entries)
            mementos.push_back({entry.uri_m, entry.datetime});
        } catch (const MalformedTimeMap& e) {
          if (warnings)
            warnings->push_back("TimeMap for '" + doc.page_title +
                                "' unusable (" + e.what() +
                                "); page treated as unarchived");
        }
      }
      auto timeline = make_page_timeline(
          doc.page_title, std::move(uri_r), std::move(doc.revisions),
          std::move(mementos), result.manifest.snapshot_datetime);
      result.timelines.push_back(consistency_filter(timeline));
    }
  }
  return result;
}

}  // namespace wikimento
