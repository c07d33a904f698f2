#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace eventcrawl::html {

// A lenient HTML tokenizer. It never fails: malformed markup degrades to text.
// Contents of script/style/textarea/title are emitted as a single raw Text token.
struct Token {
  enum class Kind { StartTag, EndTag, Text, Comment };

  Kind kind = Kind::Text;
  std::string name;  // lowercased tag name
  std::vector<std::pair<std::string, std::string>> attributes;  // names lowercased, values decoded
  std::string text;  // decoded text for Text tokens
  bool self_closing = false;

  std::optional<std::string> attribute(std::string_view attr) const;
  bool has_attribute(std::string_view attr) const { return attribute(attr).has_value(); }
  bool is_start(std::string_view tag) const { return kind == Kind::StartTag && name == tag; }
  bool is_end(std::string_view tag) const { return kind == Kind::EndTag && name == tag; }
};

std::vector<Token> tokenize(std::string_view html);

// Decodes character references (&amp;, &#39;, &#x2014;, &nbsp; ...) to UTF-8.
std::string decode_entities(std::string_view text);

bool is_void_element(std::string_view tag);
bool is_block_element(std::string_view tag);

// Whitespace-normalized visible text (script/style/head content dropped).
std::string visible_text(std::string_view html);

// Appends a Unicode code point to a UTF-8 string.
void append_utf8(std::string& out, char32_t cp);

}  // namespace eventcrawl::html
