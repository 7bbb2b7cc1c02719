#include "xsbridge/xml.hpp"

#include <cctype>

#include "xsbridge/errors.hpp"

namespace xsbridge::xml {

namespace {

class Parser {
public:
  explicit Parser(std::string_view text) : text_(text) {}

  Element parse() {
    skip_prolog();
    Element root = parse_element();
    skip_space_and_comments();
    if (pos_ != text_.size()) fail(ErrorCode::MalformedXml, "trailing content after root element");
    return root;
  }

private:
  [[noreturn]] void error(const std::string& what) {
    fail(ErrorCode::MalformedXml, what + " at offset " + std::to_string(pos_));
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  bool starts_with(std::string_view s) const {
    return text_.compare(pos_, s.size(), s) == 0;
  }

  void skip_space() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  void skip_space_and_comments() {
    for (;;) {
      skip_space();
      if (starts_with("<!--")) {
        size_t end = text_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) error("unterminated comment");
        pos_ = end + 3;
        continue;
      }
      return;
    }
  }

  void skip_prolog() {
    skip_space();
    if (starts_with("<?")) {
      size_t end = text_.find("?>", pos_ + 2);
      if (end == std::string_view::npos) error("unterminated XML declaration");
      pos_ = end + 2;
    }
    skip_space_and_comments();
  }

  std::string parse_name() {
    size_t start = pos_;
    while (!eof()) {
      char c = peek();
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' ||
          c == ':')
        ++pos_;
      else
        break;
    }
    if (pos_ == start) error("expected a name");
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string parse_attribute_value() {
    if (eof() || (peek() != '"' && peek() != '\'')) error("expected quoted attribute value");
    char quote = peek();
    ++pos_;
    std::string value;
    while (!eof() && peek() != quote) {
      char c = peek();
      if (c == '&') {
        if (starts_with("&amp;")) value += '&', pos_ += 5;
        else if (starts_with("&lt;")) value += '<', pos_ += 4;
        else if (starts_with("&gt;")) value += '>', pos_ += 4;
        else if (starts_with("&quot;")) value += '"', pos_ += 6;
        else if (starts_with("&apos;")) value += '\'', pos_ += 6;
        else error("unknown entity");
      } else {
        value += c;
        ++pos_;
      }
    }
    if (eof()) error("unterminated attribute value");
    ++pos_;  // closing quote
    return value;
  }

  Element parse_element() {
    if (eof() || peek() != '<') error("expected '<'");
    ++pos_;
    Element element;
    element.name = parse_name();

    for (;;) {
      skip_space();
      if (eof()) error("unterminated start tag");
      if (peek() == '/') {
        ++pos_;
        if (eof() || peek() != '>') error("malformed self-closing tag");
        ++pos_;
        return element;
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      std::string key = parse_name();
      skip_space();
      if (eof() || peek() != '=') error("expected '=' after attribute name");
      ++pos_;
      skip_space();
      element.attributes.emplace_back(std::move(key), parse_attribute_value());
    }

    // content
    for (;;) {
      // skip text content
      while (!eof() && peek() != '<') ++pos_;
      if (eof()) error("unterminated element " + element.name);
      if (starts_with("<!--")) {
        size_t end = text_.find("-->", pos_ + 4);
        if (end == std::string_view::npos) error("unterminated comment");
        pos_ = end + 3;
        continue;
      }
      if (starts_with("</")) {
        pos_ += 2;
        std::string closing = parse_name();
        if (closing != element.name)
          error("mismatched closing tag " + closing + " for " + element.name);
        skip_space();
        if (eof() || peek() != '>') error("malformed closing tag");
        ++pos_;
        return element;
      }
      element.children.push_back(parse_element());
    }
  }

  std::string_view text_;
  size_t pos_ = 0;
};

void render_element(const Element& e, std::string& out, int depth) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out += '<';
  out += e.name;
  for (const auto& [key, value] : e.attributes) {
    out += ' ';
    out += key;
    out += "=\"";
    out += escape_attribute(value);
    out += '"';
  }
  if (e.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const auto& child : e.children) render_element(child, out, depth + 1);
  out.append(static_cast<size_t>(depth) * 2, ' ');
  out += "</";
  out += e.name;
  out += ">\n";
}

}  // namespace

const std::string* Element::attribute(std::string_view key) const {
  for (const auto& [k, v] : attributes)
    if (k == key) return &v;
  return nullptr;
}

const Element* Element::first_child(std::string_view child_name) const {
  for (const auto& c : children)
    if (c.name == child_name) return &c;
  return nullptr;
}

std::vector<const Element*> Element::children_named(std::string_view child_name) const {
  std::vector<const Element*> out;
  for (const auto& c : children)
    if (c.name == child_name) out.push_back(&c);
  return out;
}

Element parse_document(std::string_view text) { return Parser(text).parse(); }

std::string render_document(const Element& root) {
  std::string out = "<?xml version=\"1.0\"?>\n";
  render_element(root, out, 0);
  return out;
}

std::string escape_attribute(std::string_view value) {
  std::string out;
  out.reserve(value.size());
  for (char c : value) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace xsbridge::xml
