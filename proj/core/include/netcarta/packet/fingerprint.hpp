#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace netcarta::packet {

namespace tcp_option {
inline constexpr std::uint8_t eol = 0;
inline constexpr std::uint8_t nop = 1;
inline constexpr std::uint8_t mss = 2;
inline constexpr std::uint8_t window_scale = 3;
inline constexpr std::uint8_t sack_permitted = 4;
inline constexpr std::uint8_t timestamp = 8;
}  // namespace tcp_option

// Observable TCP SYN parameters that vary by operating system.
struct SynFeatures {
  int initial_ttl = 64;  // bucketed: 32, 64, 128 or 255
  int window_size = 0;
  std::optional<int> mss;
  std::optional<int> window_scale;
  std::vector<std::uint8_t> options_order;  // option kinds in wire order
  bool df = false;

  bool operator==(const SynFeatures&) const = default;
};

// Smallest of {32, 64, 128, 255} not below the observed TTL.
int ttl_bucket(int observed_ttl);

struct WindowRule {
  enum class Kind { any, exact, mss_multiple };
  Kind kind = Kind::any;
  int value = 0;

  bool operator==(const WindowRule&) const = default;
};

// One database line: `label:ttl:window:mss:wscale:df:options`, where `*` is a
// wildcard, window may be `mss*N`, df is 0/1 and options is a comma list of
// mss,nop,ws,sok,ts,eol or numeric kinds.
struct Signature {
  std::string label;
  std::optional<int> ttl;
  WindowRule window;
  std::optional<int> mss;
  std::optional<int> window_scale;
  std::optional<bool> df;
  std::optional<std::vector<std::uint8_t>> options;

  bool matches(const SynFeatures& features) const;
  bool operator==(const Signature&) const = default;
};

using SignatureDb = std::vector<Signature>;

// Throws ParseError naming the line for malformed entries, including entries
// with an empty label or with every field wildcarded.
SignatureDb parse_signatures(std::string_view text);
Signature parse_signature(std::string_view line);

// The shipped minimal database (linux, windows, macos).
const SignatureDb& default_signatures();
std::string_view default_signature_text();

// First matching signature in database order.
std::optional<std::string> fingerprint_syn(const SynFeatures& features, const SignatureDb& db);

}  // namespace netcarta::packet
