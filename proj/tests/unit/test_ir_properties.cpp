#include <doctest.h>

#include <optional>
#include <random>

#include "fixtures.hpp"
#include "netcarta/ir/experiment.hpp"
#include "netcarta/ir/serialize.hpp"

using namespace netcarta;
using netcarta::testing::random_experiment;

TEST_CASE("serialize and deserialize are inverse on 1000 random experiments") {
  std::mt19937_64 rng(20161114);
  for (int i = 0; i < 1000; ++i) {
    const Experiment exp = random_experiment(rng);
    const std::string text = serialize(exp);
    const Experiment back = deserialize(text);
    REQUIRE(back == exp);
    REQUIRE(serialize(back) == text);
  }
}

TEST_CASE("serialization is independent of insertion order") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Experiment exp = random_experiment(rng);
    // Rebuild by inserting nodes in reverse id order.
    Experiment rebuilt;
    for (auto it = exp.networks().rbegin(); it != exp.networks().rend(); ++it) {
      rebuilt.insert_network(it->second);
    }
    for (auto it = exp.endpoints().rbegin(); it != exp.endpoints().rend(); ++it) {
      rebuilt.insert_endpoint(it->second);
    }
    rebuilt.config() = exp.config();
    CHECK(serialize(rebuilt) == serialize(exp));
  }
}

namespace {

// Brute-force reference for the query grammar.
std::vector<Id> scan(const Experiment& exp, const std::string& scope, const std::string& key,
                     const std::string& value) {
  std::vector<Id> out;
  for (const auto& [nid, e] : exp.endpoints()) {
    bool hit = false;
    if (scope == "node") {
      auto it = e.data.find(key);
      hit = it != e.data.end() && it->second == value;
    } else if (scope == "edge") {
      for (const auto& edge : e.edges) {
        auto it = edge.data.find(key);
        hit = hit || (it != edge.data.end() && it->second == value);
      }
    } else {
      for (const auto& edge : e.edges) hit = hit || edge.network.to_string() == value;
    }
    if (hit) out.push_back(nid);
  }
  return out;
}

}  // namespace

TEST_CASE("find_nodes agrees with a brute-force scan") {
  std::mt19937_64 rng(99);
  int nonempty = 0;
  for (int i = 0; i < 500; ++i) {
    const Experiment exp = random_experiment(rng, 20, 4);
    if (exp.endpoints().empty()) continue;
    // Draw a query from existing data so matches are likely.
    auto it = exp.endpoints().begin();
    std::advance(it, static_cast<long>(rng() % exp.endpoints().size()));
    const Endpoint& e = it->second;
    const int scope = static_cast<int>(rng() % 3);
    std::string key = "hostname", value = "nobody";
    std::string query;
    if (scope == 0) {
      if (!e.data.empty()) {
        auto kv = e.data.begin();
        std::advance(kv, static_cast<long>(rng() % e.data.size()));
        key = kv->first;
        value = kv->second;
      }
      if (key.find('=') != std::string::npos) continue;
      query = key + "=" + value;
      CHECK(exp.find_nodes(query) == scan(exp, "node", key, value));
    } else if (scope == 1) {
      key = "mac";
      if (!e.edges.empty()) {
        auto mac = e.edges.front().data.find("mac");
        if (mac != e.edges.front().data.end()) value = mac->second;
      }
      query = "edge." + key + "=" + value;
      CHECK(exp.find_nodes(query) == scan(exp, "edge", key, value));
    } else {
      value = e.edges.empty() ? "12345" : e.edges.front().network.to_string();
      query = "network=" + value;
      CHECK(exp.find_nodes(query) == scan(exp, "network", "", value));
    }
    nonempty += exp.find_nodes(query).empty() ? 0 : 1;
  }
  CHECK(nonempty > 100);
}

TEST_CASE("upserting any valid observation twice equals upserting it once") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 300; ++i) {
    Experiment exp = random_experiment(rng, 8, 3);
    Observation o;
    o.source = "prop";
    if (rng() % 2) o.mac = "02:00:00:00:00:" + std::to_string(10 + rng() % 80);
    if (rng() % 3 || !o.mac) o.ip = "10." + std::to_string(rng() % 4) + ".0." + std::to_string(1 + rng() % 200);
    if (o.ip && rng() % 2) o.prefix_len = 16;
    if (rng() % 2) o.hostname = "h" + std::to_string(rng() % 5);
    if (rng() % 2) o.ports = {static_cast<int>(1 + rng() % 1000), 22};
    o.dhcp = rng() % 2;
    exp.upsert_endpoint(o);
    const std::string once = serialize(exp);
    exp.upsert_endpoint(o);
    CHECK(serialize(exp) == once);
    CHECK_NOTHROW(exp.validate());
  }
}

TEST_CASE("observation JSON round-trip") {
  Observation o = netcarta::testing::host_ir_observation();
  o.services = {"_ipp._tcp.local"};
  o.network_hint = "10.0.0.0/24";
  o.dhcp = true;
  const nlohmann::json j = o;
  CHECK(j.get<Observation>() == o);
}

namespace {

// Lowest-nid endpoint with an edge carrying the mac, else the ip address.
std::optional<Id> scan_match(const Experiment& exp, const Observation& obs) {
  if (obs.mac) {
    for (const auto& [nid, ep] : exp.endpoints()) {
      for (const auto& e : ep.edges) {
        if (lookup(e.data, "mac") == *obs.mac) return nid;
      }
    }
  }
  if (obs.ip) {
    for (const auto& [nid, ep] : exp.endpoints()) {
      for (const auto& e : ep.edges) {
        auto ip = lookup(e.data, "ip");
        if (ip.substr(0, ip.find('/')) == *obs.ip) return nid;
      }
    }
  }
  return std::nullopt;
}

}  // namespace

TEST_CASE("upsert matches the endpoint a linear scan would pick, across edits") {
  std::mt19937_64 rng(99);
  auto mac = [&] { return "02:00:00:00:00:0" + std::to_string(rng() % 8); };
  auto ip = [&] { return "10.0.0." + std::to_string(1 + rng() % 8); };
  for (int trial = 0; trial < 200; ++trial) {
    Experiment exp;
    const Id net = exp.network_for_subnet("10.0.0.0/24");
    for (int step = 0; step < 40; ++step) {
      const auto roll = rng() % 10;
      if (roll < 6) {
        Observation o;
        o.source = "p";
        if (rng() % 3) o.mac = mac();
        if (!o.mac || rng() % 2) o.ip = ip();
        const auto expected = scan_match(exp, o);
        const Id got = exp.upsert_endpoint(o);
        if (expected) CHECK(got == *expected);
      } else if (roll < 8 && !exp.endpoints().empty()) {
        auto it = exp.endpoints().begin();
        std::advance(it, static_cast<long>(rng() % exp.endpoints().size()));
        std::vector<Edge> edges{Edge{net, {{"ip", ip() + "/24"}, {"mac", mac()}}}};
        exp.set_edges(it->first, edges);
      } else if (roll < 9 && !exp.endpoints().empty()) {
        exp.remove_endpoint(exp.endpoints().begin()->first);
      } else {
        exp.add_endpoint({Edge{net, {{"ip", ip() + "/24"}}}}, {});
      }
    }
    // A deserialized copy rebuilds its lookups and must behave identically.
    auto copy = deserialize(serialize(exp));
    Observation o;
    o.source = "p";
    o.ip = ip();
    if (const auto expected = scan_match(exp, o)) {
      CHECK(exp.upsert_endpoint(o) == *expected);
      CHECK(copy.upsert_endpoint(o) == *expected);
    }
  }
}
