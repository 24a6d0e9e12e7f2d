#include "netcarta/packet/fingerprint.hpp"

#include <charconv>
#include <sstream>

#include "embedded.hpp"
#include "netcarta/error.hpp"

namespace netcarta::packet {

int ttl_bucket(int observed_ttl) {
  for (int bucket : {32, 64, 128}) {
    if (observed_ttl <= bucket) return bucket;
  }
  return 255;
}

bool Signature::matches(const SynFeatures& f) const {
  if (ttl && *ttl != f.initial_ttl) return false;
  switch (window.kind) {
    case WindowRule::Kind::any: break;
    case WindowRule::Kind::exact:
      if (f.window_size != window.value) return false;
      break;
    case WindowRule::Kind::mss_multiple:
      if (!f.mss || f.window_size != *f.mss * window.value) return false;
      break;
  }
  if (mss && f.mss != mss) return false;
  if (window_scale && f.window_scale != window_scale) return false;
  if (df && *df != f.df) return false;
  if (options && *options != f.options_order) return false;
  return true;
}

namespace {

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    parts.emplace_back(text.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || p != text.data() + text.size()) return std::nullopt;
  return value;
}

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r");
  return std::string(text.substr(first, last - first + 1));
}

std::optional<int> wildcard_int(const std::string& field, std::string_view line,
                                const char* what) {
  if (field == "*") return std::nullopt;
  auto value = parse_int(field);
  if (!value) {
    throw ParseError("signature '" + std::string(line) + "': bad " + what + " '" + field + "'");
  }
  return value;
}

std::uint8_t option_kind(const std::string& name, std::string_view line) {
  if (name == "eol") return tcp_option::eol;
  if (name == "nop") return tcp_option::nop;
  if (name == "mss") return tcp_option::mss;
  if (name == "ws") return tcp_option::window_scale;
  if (name == "sok") return tcp_option::sack_permitted;
  if (name == "ts") return tcp_option::timestamp;
  if (auto kind = parse_int(name); kind && *kind >= 0 && *kind <= 255) {
    return static_cast<std::uint8_t>(*kind);
  }
  throw ParseError("signature '" + std::string(line) + "': unknown option '" + name + "'");
}

}  // namespace

Signature parse_signature(std::string_view line) {
  const auto fields = split(line, ':');
  if (fields.size() != 7) {
    throw ParseError("signature '" + std::string(line) +
                     "': expected label:ttl:window:mss:wscale:df:options");
  }
  Signature sig;
  sig.label = trim(fields[0]);
  if (sig.label.empty()) throw ParseError("signature '" + std::string(line) + "': empty label");
  sig.ttl = wildcard_int(fields[1], line, "ttl");

  const auto& window = fields[2];
  if (window == "*") {
    sig.window.kind = WindowRule::Kind::any;
  } else if (window.starts_with("mss*")) {
    auto multiple = parse_int(std::string_view(window).substr(4));
    if (!multiple || *multiple <= 0) {
      throw ParseError("signature '" + std::string(line) + "': bad window '" + window + "'");
    }
    sig.window = {WindowRule::Kind::mss_multiple, *multiple};
  } else {
    sig.window = {WindowRule::Kind::exact, *wildcard_int(window, line, "window")};
  }
  sig.mss = wildcard_int(fields[3], line, "mss");
  sig.window_scale = wildcard_int(fields[4], line, "wscale");
  if (fields[5] == "1") {
    sig.df = true;
  } else if (fields[5] == "0") {
    sig.df = false;
  } else if (fields[5] != "*") {
    throw ParseError("signature '" + std::string(line) + "': df must be 0, 1 or *");
  }
  const auto options = trim(fields[6]);
  if (options != "*") {
    std::vector<std::uint8_t> kinds;
    if (!options.empty()) {
      for (const auto& name : split(options, ',')) kinds.push_back(option_kind(trim(name), line));
    }
    sig.options = std::move(kinds);
  }
  if (!sig.ttl && sig.window.kind == WindowRule::Kind::any && !sig.mss && !sig.window_scale &&
      !sig.df && !sig.options) {
    throw ParseError("signature '" + std::string(line) + "': every field is a wildcard");
  }
  return sig;
}

SignatureDb parse_signatures(std::string_view text) {
  SignatureDb db;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    auto content = trim(line.substr(0, line.find('#')));
    if (content.empty()) continue;
    try {
      db.push_back(parse_signature(content));
    } catch (const ParseError& e) {
      throw ParseError("signature line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return db;
}

std::string_view default_signature_text() { return detail::embedded_signatures(); }

const SignatureDb& default_signatures() {
  static const SignatureDb db = parse_signatures(default_signature_text());
  return db;
}

std::optional<std::string> fingerprint_syn(const SynFeatures& features, const SignatureDb& db) {
  for (const auto& sig : db) {
    if (sig.matches(features)) return sig.label;
  }
  return std::nullopt;
}

}  // namespace netcarta::packet
