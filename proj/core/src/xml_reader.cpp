#include "xml_reader.hpp"

#include <cctype>

#include "wikimento/errors.hpp"

namespace wikimento::detail {

namespace {

bool name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
}

bool name_char(char c) {
  return name_start(c) || std::isdigit(static_cast<unsigned char>(c)) ||
         c == '-' || c == '.';
}

bool space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

}  // namespace

void XmlReader::fail(const std::string& what, std::size_t at) const {
  throw MalformedExport(what, at);
}

std::optional<std::string_view> XmlReader::attribute(
    std::string_view key) const {
  for (const auto& [k, v] : attributes_)
    if (k == key) return std::string_view(v);
  return std::nullopt;
}

std::string XmlReader::read_name() {
  const auto start = pos_;
  if (pos_ >= doc_.size() || !name_start(doc_[pos_]))
    fail("expected a name", pos_);
  while (pos_ < doc_.size() && name_char(doc_[pos_])) ++pos_;
  return std::string(doc_.substr(start, pos_ - start));
}

std::string XmlReader::decode_entities(std::string_view raw,
                                       std::size_t at) const {
  std::string out;
  out.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] != '&') {
      out += raw[i];
      continue;
    }
    const auto end = raw.find(';', i);
    if (end == std::string_view::npos)
      fail("unterminated entity reference", at + i);
    const auto body = raw.substr(i + 1, end - i - 1);
    if (body == "amp") out += '&';
    else if (body == "lt") out += '<';
    else if (body == "gt") out += '>';
    else if (body == "quot") out += '"';
    else if (body == "apos") out += '\'';
    else if (body.size() > 1 && body[0] == '#') {
      long code = 0;
      std::size_t k = 1;
      const bool hex = body[1] == 'x' || body[1] == 'X';
      if (hex) k = 2;
      if (k >= body.size()) fail("empty character reference", at + i);
      for (; k < body.size(); ++k) {
        const char c = body[k];
        int digit;
        if (c >= '0' && c <= '9') digit = c - '0';
        else if (hex && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
        else if (hex && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
        else fail("bad character reference", at + i);
        code = code * (hex ? 16 : 10) + digit;
        if (code > 0x10FFFF) fail("character reference out of range", at + i);
      }
      // UTF-8 encode.
      const auto cp = static_cast<unsigned long>(code);
      if (cp < 0x80) {
        out += static_cast<char>(cp);
      } else if (cp < 0x800) {
        out += static_cast<char>(0xC0 | (cp >> 6));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else if (cp < 0x10000) {
        out += static_cast<char>(0xE0 | (cp >> 12));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      } else {
        out += static_cast<char>(0xF0 | (cp >> 18));
        out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
        out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
        out += static_cast<char>(0x80 | (cp & 0x3F));
      }
    } else {
      fail("unknown entity reference", at + i);
    }
    i = end;
  }
  return out;
}

bool XmlReader::skip_misc() {
  while (pos_ < doc_.size()) {
    if (space(doc_[pos_])) {
      ++pos_;
      continue;
    }
    if (doc_.compare(pos_, 3, "\xEF\xBB\xBF") == 0 && pos_ == 0) {
      pos_ += 3;
      continue;
    }
    if (doc_.compare(pos_, 2, "<?") == 0) {
      const auto end = doc_.find("?>", pos_);
      if (end == std::string_view::npos)
        fail("unterminated processing instruction", pos_);
      pos_ = end + 2;
      continue;
    }
    if (doc_.compare(pos_, 4, "<!--") == 0) {
      const auto end = doc_.find("-->", pos_);
      if (end == std::string_view::npos) fail("unterminated comment", pos_);
      pos_ = end + 3;
      continue;
    }
    if (doc_.compare(pos_, 2, "<!") == 0) {
      const auto end = doc_.find('>', pos_);
      if (end == std::string_view::npos) fail("unterminated declaration", pos_);
      pos_ = end + 1;
      continue;
    }
    return true;
  }
  return false;
}

void XmlReader::parse_start_tag() {
  ++pos_;  // '<'
  name_ = read_name();
  attributes_.clear();
  while (true) {
    while (pos_ < doc_.size() && space(doc_[pos_])) ++pos_;
    if (pos_ >= doc_.size()) fail("unterminated start tag", pos_);
    if (doc_[pos_] == '>') {
      ++pos_;
      stack_.push_back(name_);
      return;
    }
    if (doc_.compare(pos_, 2, "/>") == 0) {
      pos_ += 2;
      pending_end_ = true;  // the matching end event is synthesized
      return;
    }
    const auto key = read_name();
    if (pos_ >= doc_.size() || doc_[pos_] != '=')
      fail("expected '=' after attribute name", pos_);
    ++pos_;
    if (pos_ >= doc_.size() || (doc_[pos_] != '"' && doc_[pos_] != '\''))
      fail("expected quoted attribute value", pos_);
    const char quote = doc_[pos_++];
    const auto start = pos_;
    const auto end = doc_.find(quote, pos_);
    if (end == std::string_view::npos)
      fail("unterminated attribute value", start);
    attributes_.emplace_back(key,
                             decode_entities(doc_.substr(start, end - start),
                                             start));
    pos_ = end + 1;
  }
}

void XmlReader::parse_end_tag() {
  pos_ += 2;  // "</"
  name_ = read_name();
  while (pos_ < doc_.size() && space(doc_[pos_])) ++pos_;
  if (pos_ >= doc_.size() || doc_[pos_] != '>')
    fail("unterminated end tag", pos_);
  ++pos_;
  if (stack_.empty() || stack_.back() != name_)
    fail("mismatched end tag </" + name_ + ">", pos_);
  stack_.pop_back();
}

XmlReader::Event XmlReader::next() {
  if (pending_end_) {
    pending_end_ = false;
    return Event::end_element;
  }

  if (stack_.empty()) {
    if (!skip_misc()) {
      if (!root_seen_) fail("document has no root element", pos_);
      return Event::end_document;
    }
    if (doc_[pos_] != '<' || pos_ + 1 >= doc_.size() ||
        !name_start(doc_[pos_ + 1]))
      fail("expected an element", pos_);
    root_seen_ = true;
    parse_start_tag();
    return Event::start_element;
  }

  // Inside an element: text up to the next markup, or the markup itself.
  std::string raw;
  const auto text_start = pos_;
  while (pos_ < doc_.size()) {
    if (doc_.compare(pos_, 9, "<![CDATA[") == 0) {
      const auto end = doc_.find("]]>", pos_ + 9);
      if (end == std::string_view::npos) fail("unterminated CDATA", pos_);
      raw.append(doc_.substr(pos_ + 9, end - pos_ - 9));
      pos_ = end + 3;
      continue;
    }
    if (doc_.compare(pos_, 4, "<!--") == 0) {
      const auto end = doc_.find("-->", pos_);
      if (end == std::string_view::npos) fail("unterminated comment", pos_);
      pos_ = end + 3;
      continue;
    }
    if (doc_[pos_] == '<') break;
    const auto stop = doc_.find('<', pos_);
    const auto take = stop == std::string_view::npos ? doc_.size() - pos_
                                                     : stop - pos_;
    raw.append(doc_.substr(pos_, take));
    pos_ += take;
  }
  if (!raw.empty()) {
    text_ = decode_entities(raw, text_start);
    return Event::text;
  }
  if (pos_ >= doc_.size())
    fail("unexpected end of input inside <" + stack_.back() + ">", pos_);

  if (doc_.compare(pos_, 2, "</") == 0) {
    parse_end_tag();
    return Event::end_element;
  }
  if (doc_.compare(pos_, 2, "<?") == 0) {
    const auto end = doc_.find("?>", pos_);
    if (end == std::string_view::npos)
      fail("unterminated processing instruction", pos_);
    pos_ = end + 2;
    return next();
  }
  if (pos_ + 1 >= doc_.size() || !name_start(doc_[pos_ + 1]))
    fail("expected an element", pos_);
  parse_start_tag();
  return Event::start_element;
}

}  // namespace wikimento::detail
