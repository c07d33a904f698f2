#include "eventcrawl/html.hpp"

#include "eventcrawl/strings.hpp"

#include <array>
#include <charconv>

namespace eventcrawl::html {

namespace {

struct NamedEntity {
  std::string_view name;
  char32_t code;
};

constexpr std::array<NamedEntity, 24> kEntities = {{
    {"amp", U'&'},      {"lt", U'<'},       {"gt", U'>'},       {"quot", U'"'},
    {"apos", U'\''},    {"nbsp", 0xA0},     {"ndash", 0x2013},  {"mdash", 0x2014},
    {"lsquo", 0x2018},  {"rsquo", 0x2019},  {"ldquo", 0x201C},  {"rdquo", 0x201D},
    {"hellip", 0x2026}, {"copy", 0xA9},     {"reg", 0xAE},      {"middot", 0xB7},
    {"eacute", 0xE9},   {"egrave", 0xE8},   {"uuml", 0xFC},     {"ouml", 0xF6},
    {"auml", 0xE4},     {"ccedil", 0xE7},   {"laquo", 0xAB},    {"raquo", 0xBB},
}};

constexpr std::array<std::string_view, 14> kVoid = {"area", "base",  "br",   "col",   "embed",
                                                    "hr",   "img",   "input", "link", "meta",
                                                    "param", "source", "track", "wbr"};

constexpr std::array<std::string_view, 35> kBlock = {
    "address", "article", "aside",  "blockquote", "body",   "center", "dd",     "details", "div",
    "dl",      "dt",      "fieldset", "figcaption", "figure", "footer", "form",   "h1",      "h2",
    "h3",      "h4",      "h5",     "h6",         "header", "hr",     "li",     "main",    "nav",
    "ol",      "p",       "pre",    "section",    "table",  "td",     "th",     "ul"};

bool is_name_char(char c) {
  return str::is_alpha(c) || str::is_digit(c) || c == '-' || c == '_' || c == ':' || c == '.';
}

class Tokenizer {
public:
  explicit Tokenizer(std::string_view input) : in_(input) {}

  std::vector<Token> run() {
    std::string text;
    while (pos_ < in_.size()) {
      char c = in_[pos_];
      if (c == '<' && try_markup(text)) continue;
      text.push_back(c);
      ++pos_;
    }
    flush_text(text);
    return std::move(out_);
  }

private:
  void flush_text(std::string& text) {
    if (text.empty()) return;
    Token t;
    t.kind = Token::Kind::Text;
    t.text = decode_entities(text);
    out_.push_back(std::move(t));
    text.clear();
  }

  // Returns false when '<' does not start markup, so it is kept as text.
  bool try_markup(std::string& text) {
    auto rest = in_.substr(pos_);
    if (rest.substr(0, 4) == "<!--") {
      flush_text(text);
      auto end = in_.find("-->", pos_ + 4);
      Token t;
      t.kind = Token::Kind::Comment;
      t.text = std::string(in_.substr(pos_ + 4, end == std::string_view::npos ? std::string_view::npos
                                                                               : end - pos_ - 4));
      out_.push_back(std::move(t));
      pos_ = end == std::string_view::npos ? in_.size() : end + 3;
      return true;
    }
    if (rest.size() >= 2 && (rest[1] == '!' || rest[1] == '?')) {
      flush_text(text);
      auto end = in_.find('>', pos_);
      pos_ = end == std::string_view::npos ? in_.size() : end + 1;
      return true;
    }
    bool closing = rest.size() >= 2 && rest[1] == '/';
    std::size_t p = pos_ + (closing ? 2 : 1);
    if (p >= in_.size() || !str::is_alpha(in_[p])) return false;
    flush_text(text);

    Token tag;
    tag.kind = closing ? Token::Kind::EndTag : Token::Kind::StartTag;
    std::size_t start = p;
    while (p < in_.size() && is_name_char(in_[p])) ++p;
    tag.name = str::to_lower(in_.substr(start, p - start));
    p = parse_attributes(p, tag);
    pos_ = p;
    std::string name = tag.name;
    bool raw = !closing && !tag.self_closing &&
               (name == "script" || name == "style" || name == "textarea" || name == "title");
    out_.push_back(std::move(tag));
    if (raw) read_raw_text(name);
    return true;
  }

  std::size_t parse_attributes(std::size_t p, Token& tag) {
    while (p < in_.size()) {
      while (p < in_.size() && (str::is_space(in_[p]) || in_[p] == '/')) {
        if (in_[p] == '/' && p + 1 < in_.size() && in_[p + 1] == '>') tag.self_closing = true;
        ++p;
      }
      if (p >= in_.size()) return p;
      if (in_[p] == '>') return p + 1;
      std::size_t name_start = p;
      while (p < in_.size() && !str::is_space(in_[p]) && in_[p] != '=' && in_[p] != '>' &&
             !(in_[p] == '/' && p + 1 < in_.size() && in_[p + 1] == '>'))
        ++p;
      std::string attr_name = str::to_lower(in_.substr(name_start, p - name_start));
      while (p < in_.size() && str::is_space(in_[p])) ++p;
      std::string value;
      if (p < in_.size() && in_[p] == '=') {
        ++p;
        while (p < in_.size() && str::is_space(in_[p])) ++p;
        if (p < in_.size() && (in_[p] == '"' || in_[p] == '\'')) {
          char quote = in_[p++];
          auto end = in_.find(quote, p);
          if (end == std::string_view::npos) end = in_.size();
          value = decode_entities(in_.substr(p, end - p));
          p = std::min(end + 1, in_.size());
        } else {
          std::size_t vstart = p;
          while (p < in_.size() && !str::is_space(in_[p]) && in_[p] != '>') ++p;
          value = decode_entities(in_.substr(vstart, p - vstart));
        }
      }
      if (!attr_name.empty() && !tag.attribute(attr_name))
        tag.attributes.emplace_back(std::move(attr_name), std::move(value));
      else if (attr_name.empty())
        ++p;
    }
    return p;
  }

  void read_raw_text(const std::string& name) {
    std::string closing = "</" + name;
    std::size_t p = pos_;
    std::size_t end = std::string_view::npos;
    while (p < in_.size()) {
      auto lt = in_.find("</", p);
      if (lt == std::string_view::npos) break;
      if (str::iequals(in_.substr(lt, closing.size()), closing)) {
        end = lt;
        break;
      }
      p = lt + 2;
    }
    if (end == std::string_view::npos) end = in_.size();
    Token t;
    t.kind = Token::Kind::Text;
    t.text = name == "title" || name == "textarea" ? decode_entities(in_.substr(pos_, end - pos_))
                                                   : std::string(in_.substr(pos_, end - pos_));
    out_.push_back(std::move(t));
    pos_ = end;
    if (end < in_.size()) {
      auto gt = in_.find('>', end);
      Token close;
      close.kind = Token::Kind::EndTag;
      close.name = name;
      out_.push_back(std::move(close));
      pos_ = gt == std::string_view::npos ? in_.size() : gt + 1;
    }
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  std::vector<Token> out_;
};

}  // namespace

std::optional<std::string> Token::attribute(std::string_view attr) const {
  for (const auto& [name, value] : attributes)
    if (name == attr) return value;
  return std::nullopt;
}

std::vector<Token> tokenize(std::string_view input) { return Tokenizer(input).run(); }

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string decode_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out.push_back(text[i++]);
      continue;
    }
    auto semi = text.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back(text[i++]);
      continue;
    }
    auto body = text.substr(i + 1, semi - i - 1);
    std::optional<char32_t> cp;
    if (!body.empty() && body[0] == '#') {
      unsigned value = 0;
      auto digits = body.substr(1);
      int base = 10;
      if (!digits.empty() && (digits[0] == 'x' || digits[0] == 'X')) {
        base = 16;
        digits.remove_prefix(1);
      }
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value, base);
      if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty() && value < 0x110000)
        cp = value;
    } else {
      for (const auto& e : kEntities)
        if (e.name == body) cp = e.code;
    }
    if (!cp) {
      out.push_back(text[i++]);
      continue;
    }
    append_utf8(out, *cp == 0xA0 ? U' ' : *cp);
    i = semi + 1;
  }
  return out;
}

bool is_void_element(std::string_view tag) {
  for (auto v : kVoid)
    if (v == tag) return true;
  return false;
}

bool is_block_element(std::string_view tag) {
  for (auto b : kBlock)
    if (b == tag) return true;
  return tag == "br" || tag == "tr" || tag == "html";
}

std::string visible_text(std::string_view input) {
  std::string out;
  int hidden = 0;
  for (const auto& t : tokenize(input)) {
    bool hiding_tag = t.name == "script" || t.name == "style" || t.name == "head" ||
                      t.name == "noscript" || t.name == "template";
    if (t.kind == Token::Kind::StartTag && hiding_tag && !t.self_closing) {
      ++hidden;
    } else if (t.kind == Token::Kind::EndTag && hiding_tag) {
      if (hidden > 0) --hidden;
    } else if (t.kind == Token::Kind::Text && hidden == 0) {
      out += t.text;
    } else if ((t.kind == Token::Kind::StartTag || t.kind == Token::Kind::EndTag) &&
               is_block_element(t.name)) {
      out += ' ';
    }
  }
  return str::collapse_whitespace(out);
}

}  // namespace eventcrawl::html
