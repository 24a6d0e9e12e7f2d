#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "netcarta/ir/experiment.hpp"
#include "netcarta/ir/observation.hpp"
#include "netcarta/text/router_config.hpp"

namespace netcarta::testing {

// The reference example node with its original four-space indentation.
extern const std::string_view kHostIrNode;

// The same node inside a full document, in canonical form, with network 63
// carrying the subnet its edge address implies.
extern const std::string_view kHostIrDocument;

// Observation equivalent to the example node.
Observation host_ir_observation();

// Independent IPv4 helpers for oracles.
std::uint32_t ip_value(std::string_view dotted);
std::string ip_text(std::uint32_t value);
std::string subnet_of(std::string_view dotted, int prefix);

struct DhcpTruth {
  std::string ip;
  std::optional<std::string> hostname;
  std::string subnet;
};

struct DhcpLogFixture {
  std::string text;
  int ack_lines = 0;
  int hint_prefix = 22;
  std::vector<std::string> subnets;
  std::map<std::string, DhcpTruth> final_by_mac;  // the last ACK per mac
  std::set<std::string> reacked;
};

// `acks` DHCPACK lines for `distinct_macs` clients spread over `subnet_count`
// /22 subnets; the surplus ACKs re-lease a fresh address to an earlier client.
// Noise lines (DHCPDISCOVER/REQUEST/OFFER) are interleaved.
DhcpLogFixture generate_dhcp_log(std::uint64_t seed, int acks = 1000, int subnet_count = 4,
                                 int distinct_macs = 950);

struct RouterFixture {
  std::vector<text::RouterSpec> truth;
  std::vector<std::pair<std::string, text::RouterDialect>> configs;
};

// Two aggregation routers joined by several point-to-point links, plus three
// edge routers uplinked to both and carrying their own LANs. Configurations
// alternate between IOS and Junos set syntax.
RouterFixture generate_router_fixture();

// Random but valid experiment for round-trip properties.
Experiment random_experiment(std::mt19937_64& rng, int max_endpoints = 12, int max_networks = 5);

struct ConflictStream {
  std::vector<Observation> observations;
  std::vector<std::set<std::size_t>> planted;  // indices of each planted group
};

// Clean background traffic plus `plant` disjoint conflict groups of both
// kinds (mac with two static ips in one subnet; ip with two macs).
ConflictStream generate_conflict_stream(std::mt19937_64& rng, int devices, int plant);

struct PassMatrix {
  std::vector<std::pair<std::string, std::string>> files;  // template file name, body
  Experiment experiment;
  // Hand-simulated (template file name, nid) sequence the emitter must follow.
  std::vector<std::pair<std::string, Id>> expected_log;
};

// Random passes x templates x nodes with per-(template, node) handled flags.
// Each template prints "<file> <nid>" and, when the node's flag for it is
// set, reports handled.
PassMatrix random_pass_matrix(std::mt19937_64& rng, int passes = 3, int max_templates = 4,
                              int nodes = 50);

}  // namespace netcarta::testing
