#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wikimento::detail {

// Minimal pull parser for the MediaWiki export subset: elements,
// attributes, character data, CDATA, comments, numeric and the five named
// entities. No namespaces, no DTD validation. Throws MalformedExport with
// the byte offset of the failure.
class XmlReader {
 public:
  enum class Event { start_element, end_element, text, end_document };

  explicit XmlReader(std::string_view doc) : doc_(doc) {}

  Event next();

  const std::string& name() const { return name_; }
  const std::string& text() const { return text_; }
  std::optional<std::string_view> attribute(std::string_view key) const;
  std::size_t offset() const { return pos_; }
  std::size_t depth() const { return stack_.size(); }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t at) const;
  bool skip_misc();  // prolog, comments, doctype; false at end of input
  void parse_start_tag();
  void parse_end_tag();
  std::string read_name();
  std::string decode_entities(std::string_view raw, std::size_t at) const;

  std::string_view doc_;
  std::size_t pos_ = 0;
  std::string name_;
  std::string text_;
  std::vector<std::pair<std::string, std::string>> attributes_;
  std::vector<std::string> stack_;
  bool pending_end_ = false;  // set after a self-closing tag
  bool root_seen_ = false;
};

}  // namespace wikimento::detail
