#include "wikimento/dataset.hpp"

#include <filesystem>
#include <random>

#include "doctest.h"
#include "wikimento/errors.hpp"
#include "wikimento/report.hpp"

using namespace wikimento;
namespace fs = std::filesystem;

namespace {

fs::path temp_dataset(const char* tag) {
  const auto dir =
      fs::temp_directory_path() / (std::string("wikimento_dataset_") + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("component encoding is reversible and filesystem safe") {
  CHECK(encode_component("Alpha Station") == "Alpha%20Station");
  CHECK(encode_component("a/b\\c?d#e") == "a%2Fb%5Cc%3Fd%23e");
  CHECK(encode_component("plain-name_1.x") == "plain-name_1.x");
  CHECK(encode_component("") == "");

  std::mt19937_64 rng(0xDA7A0001);
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<int> byte(0, 255);
  for (int trial = 0; trial < 500; ++trial) {
    std::string raw;
    const int n = len(rng);
    for (int i = 0; i < n; ++i) raw += static_cast<char>(byte(rng));
    const auto enc = encode_component(raw);
    CHECK(decode_component(enc) == raw);
    for (char c : enc) {
      const bool safe = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                        (c >= '0' && c <= '9') || c == '.' || c == '_' ||
                        c == '-' || c == '%';
      CHECK(safe);
    }
  }
}

TEST_CASE("page URIs use underscores and conservative escaping") {
  CHECK(uri_for_title("http://w.test/wiki/", "Alpha Station") ==
        "http://w.test/wiki/Alpha_Station");
  CHECK(uri_for_title("http://w.test/wiki/", "Who? What!") ==
        "http://w.test/wiki/Who%3F_What!");
  CHECK(uri_for_title("http://w.test/wiki/", "List (disambiguation)") ==
        "http://w.test/wiki/List_(disambiguation)");
  CHECK(uri_for_title("", "It's A Test") == "It's_A_Test");
}

TEST_CASE("manifest round-trips through disk") {
  const auto dir = temp_dataset("manifest");
  DatasetManifest m;
  m.wiki_id = "testwiki";
  m.base_uri = "http://w.test/wiki/";
  m.snapshot_datetime = 1302998400;
  save_manifest(dir.string(), m);
  CHECK(load_manifest(dir.string()) == m);
  fs::remove_all(dir);
}

TEST_CASE("manifest loading rejects junk and missing files") {
  const auto dir = temp_dataset("manifest_bad");
  CHECK_THROWS_AS(load_manifest(dir.string()), IoError);

  write_text_file((dir / "manifest.json").string(), "{not json");
  CHECK_THROWS_AS(load_manifest(dir.string()), IoError);

  write_text_file((dir / "manifest.json").string(), R"({"wiki_id":"x"})");
  CHECK_THROWS_AS(load_manifest(dir.string()), IoError);

  write_text_file((dir / "manifest.json").string(),
                  R"({"wiki_id":"x","base_uri":"http://w.test/wiki/",
                      "snapshot_datetime":0,"format":99})");
  CHECK_THROWS_AS(load_manifest(dir.string()), IoError);
  fs::remove_all(dir);
}

TEST_CASE("dataset loads pages with timemaps into analyzable timelines") {
  const auto dir = temp_dataset("load");
  DatasetManifest m;
  m.wiki_id = "testwiki";
  m.base_uri = "http://w.test/wiki/";
  m.snapshot_datetime = 2000;
  save_manifest(dir.string(), m);

  // Page with a TimeMap; one capture is newer than the snapshot and one
  // memento predates the first revision.
  dataset_store_page(dir.string(), "Alpha Station", R"(<mediawiki><page>
    <title>Alpha Station</title>
    <revision><id>1</id><timestamp>1970-01-01T00:02:00Z</timestamp></revision>
    <revision><id>2</id><timestamp>1970-01-01T00:10:00Z</timestamp></revision>
  </page></mediawiki>)");
  dataset_store_timemap(
      dir.string(), "Alpha Station",
      "<http://w.test/wiki/Alpha_Station>; rel=\"original\",\n"
      "<http://a.test/web/19700101000001/p>; rel=\"first memento\"; "
      "datetime=\"Thu, 01 Jan 1970 00:00:01 GMT\",\n"
      "<http://a.test/web/19700101000500/p>; rel=\"memento\"; "
      "datetime=\"Thu, 01 Jan 1970 00:05:00 GMT\",\n"
      "<http://a.test/web/19700101010000/p>; rel=\"last memento\"; "
      "datetime=\"Thu, 01 Jan 1970 01:00:00 GMT\"\n");

  // Redirect page: filtered out.
  dataset_store_page(dir.string(), "Old Name", R"(<mediawiki><page>
    <title>Old Name</title><redirect/>
    <revision><id>3</id><timestamp>1970-01-01T00:02:00Z</timestamp></revision>
  </page></mediawiki>)");

  // Page without any TimeMap: loads with zero mementos.
  dataset_store_page(dir.string(), "Bare", R"(<mediawiki><page>
    <title>Bare</title>
    <revision><id>4</id><timestamp>1970-01-01T00:02:00Z</timestamp></revision>
  </page></mediawiki>)");

  std::vector<std::string> warnings;
  const auto loaded = dataset_load(dir.string(), &warnings);
  CHECK(warnings.empty());
  CHECK(loaded.redirects_removed == 1);
  REQUIRE(loaded.timelines.size() == 2);

  // Sorted by encoded filename: "Alpha%20Station" < "Bare".
  const auto& alpha = loaded.timelines[0];
  CHECK(alpha.page_title == "Alpha Station");
  CHECK(alpha.uri_r == "http://w.test/wiki/Alpha_Station");
  CHECK(alpha.revisions.size() == 2);
  // The 01:00:00 capture postdates the snapshot (2000) and is dropped.
  REQUIRE(alpha.mementos.size() == 2);
  CHECK(alpha.mementos[0].datetime == 1);
  CHECK(alpha.mementos[1].datetime == 300);
  CHECK(alpha.captures.revision_for(0) == std::nullopt);  // before rev 1
  CHECK(alpha.captures.revision_for(1) == 0);
  CHECK(alpha.snapshot_datetime == 2000);

  CHECK(loaded.timelines[1].page_title == "Bare");
  CHECK(loaded.timelines[1].mementos.empty());
  fs::remove_all(dir);
}

TEST_CASE("unusable timemaps degrade to unarchived with a warning") {
  const auto dir = temp_dataset("badmap");
  DatasetManifest m;
  m.wiki_id = "w";
  m.base_uri = "http://w.test/wiki/";
  m.snapshot_datetime = 2000;
  save_manifest(dir.string(), m);
  dataset_store_page(dir.string(), "Solo", R"(<mediawiki><page>
    <title>Solo</title>
    <revision><id>1</id><timestamp>1970-01-01T00:02:00Z</timestamp></revision>
  </page></mediawiki>)");
  dataset_store_timemap(dir.string(), "Solo", "<html>not a timemap</html>");

  std::vector<std::string> warnings;
  const auto loaded = dataset_load(dir.string(), &warnings);
  REQUIRE(loaded.timelines.size() == 1);
  CHECK(loaded.timelines[0].mementos.empty());
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("page treated as unarchived") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("timemap URI-R wins over the constructed one") {
  const auto dir = temp_dataset("urir");
  DatasetManifest m;
  m.wiki_id = "w";
  m.base_uri = "http://w.test/wiki/";
  m.snapshot_datetime = 2000;
  save_manifest(dir.string(), m);
  dataset_store_page(dir.string(), "Moved Page", R"(<mediawiki><page>
    <title>Moved Page</title>
    <revision><id>1</id><timestamp>1970-01-01T00:02:00Z</timestamp></revision>
  </page></mediawiki>)");
  dataset_store_timemap(dir.string(), "Moved Page",
                        "<http://w.test/view.php?page=moved>; "
                        "rel=\"original\"\n");
  const auto loaded = dataset_load(dir.string());
  REQUIRE(loaded.timelines.size() == 1);
  CHECK(loaded.timelines[0].uri_r == "http://w.test/view.php?page=moved");
  fs::remove_all(dir);
}

TEST_CASE("episodes store and load through the dataset") {
  const auto dir = temp_dataset("episodes");
  DatasetManifest m;
  m.wiki_id = "w";
  m.base_uri = "http://w.test/wiki/";
  save_manifest(dir.string(), m);
  CHECK_FALSE(dataset_has_episodes(dir.string()));
  dataset_store_episodes(dir.string(),
                         "series,season,episode,title,air_datetime\n"
                         "show,1,1,Opener,1970-01-02\n");
  CHECK(dataset_has_episodes(dir.string()));
  const auto series = dataset_load_episodes(dir.string());
  REQUIRE(series.events.size() == 1);
  CHECK(series.events[0].label == "Opener");
  fs::remove_all(dir);
}
