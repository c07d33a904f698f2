#include "eventcrawl/uri.hpp"

#include "eventcrawl/strings.hpp"

#include <array>
#include <vector>

namespace eventcrawl {

namespace {

bool is_scheme_char(char c) {
  return str::is_alpha(c) || str::is_digit(c) || c == '+' || c == '-' || c == '.';
}

std::optional<int> default_port(std::string_view scheme) {
  if (scheme == "http") return 80;
  if (scheme == "https") return 443;
  return std::nullopt;
}

}  // namespace

Uri Uri::parse(std::string_view text) {
  for (char c : text) {
    auto u = static_cast<unsigned char>(c);
    if (u <= 0x20 || u == 0x7f) throw UriError("invalid character in URI: " + std::string(text));
  }
  Uri uri;
  auto rest = text;
  auto colon = rest.find(':');
  auto delim = rest.find_first_of("/?#");
  if (colon != std::string_view::npos && colon > 0 && (delim == std::string_view::npos || colon < delim) &&
      str::is_alpha(rest[0])) {
    auto scheme = rest.substr(0, colon);
    bool valid = true;
    for (char c : scheme) valid = valid && is_scheme_char(c);
    if (valid) {
      uri.scheme = str::to_lower(scheme);
      rest.remove_prefix(colon + 1);
    }
  }
  if (rest.substr(0, 2) == "//") {
    rest.remove_prefix(2);
    auto end = rest.find_first_of("/?#");
    uri.authority = std::string(rest.substr(0, end));
    rest = end == std::string_view::npos ? std::string_view{} : rest.substr(end);
  }
  auto hash = rest.find('#');
  if (hash != std::string_view::npos) {
    uri.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  auto question = rest.find('?');
  if (question != std::string_view::npos) {
    uri.query = std::string(rest.substr(question + 1));
    rest = rest.substr(0, question);
  }
  uri.path = std::string(rest);
  return uri;
}

std::string Uri::host() const {
  if (!authority) return {};
  std::string_view a = *authority;
  if (auto at = a.rfind('@'); at != std::string_view::npos) a.remove_prefix(at + 1);
  if (!a.empty() && a.front() == '[') {
    auto close = a.find(']');
    return std::string(a.substr(0, close == std::string_view::npos ? a.size() : close + 1));
  }
  return std::string(a.substr(0, a.find(':')));
}

std::optional<int> Uri::port() const {
  if (!authority) return std::nullopt;
  std::string_view a = *authority;
  if (auto at = a.rfind('@'); at != std::string_view::npos) a.remove_prefix(at + 1);
  if (auto close = a.find(']'); close != std::string_view::npos) a.remove_prefix(close + 1);
  auto colon = a.find(':');
  if (colon == std::string_view::npos || colon + 1 == a.size()) return std::nullopt;
  int port = 0;
  for (char c : a.substr(colon + 1)) {
    if (!str::is_digit(c)) throw UriError("invalid port in authority: " + *authority);
    port = port * 10 + (c - '0');
    if (port > 65535) throw UriError("port out of range: " + *authority);
  }
  return port;
}

std::string Uri::to_string() const {
  std::string out;
  if (!scheme.empty()) out += scheme + ":";
  if (authority) out += "//" + *authority;
  out += path;
  if (query) out += "?" + *query;
  if (fragment) out += "#" + *fragment;
  return out;
}

std::string remove_dot_segments(std::string_view input) {
  std::vector<std::string_view> output;
  bool absolute = !input.empty() && input.front() == '/';
  auto segments = str::split(absolute ? input.substr(1) : input, '/');
  bool trailing_slash = false;
  for (std::size_t i = 0; i < segments.size(); ++i) {
    auto seg = segments[i];
    bool last = i + 1 == segments.size();
    if (seg == ".") {
      trailing_slash = last;
    } else if (seg == "..") {
      if (!output.empty()) output.pop_back();
      trailing_slash = last;
    } else {
      output.push_back(seg);
      trailing_slash = false;
    }
  }
  std::string out = absolute ? "/" : "";
  for (std::size_t i = 0; i < output.size(); ++i) {
    if (i) out += "/";
    out += output[i];
  }
  if (trailing_slash && !out.empty() && out.back() != '/') out += "/";
  return out;
}

Uri resolve(const Uri& base, const Uri& ref) {
  Uri target;
  if (!ref.scheme.empty()) {
    target = ref;
    target.path = remove_dot_segments(ref.path);
    return target;
  }
  target.scheme = base.scheme;
  if (ref.authority) {
    target.authority = ref.authority;
    target.path = remove_dot_segments(ref.path);
    target.query = ref.query;
  } else {
    target.authority = base.authority;
    if (ref.path.empty()) {
      target.path = base.path;
      target.query = ref.query ? ref.query : base.query;
    } else {
      if (ref.path.front() == '/') {
        target.path = remove_dot_segments(ref.path);
      } else {
        std::string merged;
        if (base.authority && base.path.empty()) {
          merged = "/" + ref.path;
        } else {
          auto slash = base.path.rfind('/');
          merged = (slash == std::string::npos ? std::string{} : base.path.substr(0, slash + 1)) + ref.path;
        }
        target.path = remove_dot_segments(merged);
      }
      target.query = ref.query;
    }
  }
  target.fragment = ref.fragment;
  return target;
}

std::string resolve(std::string_view base, std::string_view reference) {
  return resolve(Uri::parse(base), Uri::parse(reference)).to_string();
}

std::string normalize_uri(std::string_view text) {
  Uri uri = Uri::parse(str::trim(text));
  if (!uri.is_absolute()) throw UriError("relative URI cannot be normalized: " + std::string(text));
  if (!uri.authority || uri.host().empty())
    throw UriError("URI has no host: " + std::string(text));

  std::string host = str::to_lower(uri.host());
  auto port = uri.port();
  std::string authority = host;
  if (port && port != default_port(uri.scheme)) authority += ":" + std::to_string(*port);
  uri.authority = authority;
  uri.fragment.reset();
  uri.path = remove_dot_segments(uri.path);
  if (uri.path.empty()) uri.path = "/";

  if (uri.query) {
    std::string kept;
    for (auto param : str::split(*uri.query, '&')) {
      if (param.empty() || str::istarts_with(param, "utm_")) continue;
      if (!kept.empty()) kept += "&";
      kept += param;
    }
    if (kept.empty())
      uri.query.reset();
    else
      uri.query = kept;
  }
  return uri.to_string();
}

bool is_http_uri(std::string_view uri) {
  return str::istarts_with(uri, "http://") || str::istarts_with(uri, "https://");
}

std::string host_of(std::string_view uri) {
  try {
    auto parsed = Uri::parse(uri);
    if (!parsed.is_absolute()) return {};
    return str::to_lower(parsed.host());
  } catch (const UriError&) {
    return {};
  }
}

std::string registrable_domain(std::string_view host_in) {
  std::string host = str::to_lower(host_in);
  if (!host.empty() && host.back() == '.') host.pop_back();
  if (host.empty() || host.front() == '[') return host;
  bool numeric = true;
  for (char c : host) numeric = numeric && (str::is_digit(c) || c == '.');
  if (numeric) return host;

  auto labels = str::split(host, '.');
  if (labels.size() <= 2) return host;
  static constexpr std::array<std::string_view, 8> kSecondLevel = {"co", "com", "org", "net",
                                                                   "gov", "ac",  "edu", "govt"};
  auto tld = labels[labels.size() - 1];
  auto sld = labels[labels.size() - 2];
  std::size_t keep = 2;
  if (tld.size() == 2) {
    for (auto s : kSecondLevel)
      if (sld == s) keep = 3;
  }
  std::string out;
  for (std::size_t i = labels.size() - keep; i < labels.size(); ++i) {
    if (!out.empty()) out += ".";
    out += labels[i];
  }
  return out;
}

}  // namespace eventcrawl
