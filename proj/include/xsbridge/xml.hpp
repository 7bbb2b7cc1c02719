#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace xsbridge::xml {

/// Element-and-attribute subset of XML: enough for robot description files.
/// Text content is tolerated on parse and discarded.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;

  const std::string* attribute(std::string_view key) const;
  const Element* first_child(std::string_view name) const;
  std::vector<const Element*> children_named(std::string_view name) const;
};

/// Parses one document (optional XML declaration, comments allowed).
/// Throws MalformedXml on structural errors.
Element parse_document(std::string_view text);

/// Deterministic pretty-printer: two-space indent, attributes in stored
/// order, self-closing tags for childless elements.
std::string render_document(const Element& root);

std::string escape_attribute(std::string_view value);

}  // namespace xsbridge::xml
