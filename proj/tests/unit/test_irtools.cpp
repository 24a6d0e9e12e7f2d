#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "netcarta/error.hpp"
#include "netcarta/ir/experiment.hpp"
#include "netcarta/irtools/check.hpp"
#include "netcarta/irtools/os_infer.hpp"
#include "netcarta/irtools/stats.hpp"
#include "netcarta/irtools/trim.hpp"

using namespace netcarta;
using namespace netcarta::irtools;
namespace t = netcarta::testing;

namespace {

Edge edge(Id network, std::string ip = {}) {
  Edge e{network, {}};
  if (!ip.empty()) e.data["ip"] = ip;
  return e;
}

std::string address(std::string_view ip) { return std::string(ip.substr(0, ip.find('/'))); }

using Finding = std::pair<std::string, std::set<Id>>;

std::set<Finding> findings(const std::vector<Diagnostic>& diagnostics) {
  std::set<Finding> out;
  for (const auto& d : diagnostics) out.emplace(d.code, std::set<Id>(d.subjects.begin(), d.subjects.end()));
  return out;
}

// Rule-by-rule brute force with pairwise comparisons.
std::set<Finding> oracle(const Experiment& exp, int max_interfaces) {
  std::set<Finding> out;
  std::vector<const Endpoint*> eps;
  for (const auto& [nid, ep] : exp.endpoints()) eps.push_back(&ep);
  for (const auto* ep : eps) {
    if (ep->edges.size() > static_cast<std::size_t>(max_interfaces)) out.insert({"R1", {ep->nid}});
    if (ep->edges.empty()) out.insert({"R3", {ep->nid}});
    const bool any_ip = std::any_of(ep->edges.begin(), ep->edges.end(),
                                    [](const Edge& e) { return !lookup(e.data, "ip").empty(); });
    if (!ep->edges.empty() && !any_ip && lookup(ep->data, "dhcp") != "true") out.insert({"R5", {ep->nid}});
  }
  for (const auto& [nid, net] : exp.networks()) {
    bool used = false;
    for (const auto* ep : eps) {
      for (const auto& e : ep->edges) used = used || e.network == nid;
    }
    if (!used) out.insert({"R4", {nid}});
  }
  for (const auto* a : eps) {
    for (const auto& ea : a->edges) {
      if (lookup(ea.data, "ip").empty()) continue;
      std::set<Id> group{a->nid};
      for (const auto* b : eps) {
        if (b == a) continue;
        for (const auto& eb : b->edges) {
          if (eb.network == ea.network && !lookup(eb.data, "ip").empty() &&
              address(lookup(eb.data, "ip")) == address(lookup(ea.data, "ip"))) {
            group.insert(b->nid);
          }
        }
      }
      if (group.size() > 1) out.insert({"R2", group});
    }
    const auto host = lookup(a->data, "hostname");
    if (host.empty()) continue;
    std::set<Id> group;
    for (const auto* b : eps) {
      if (lookup(b->data, "hostname") == host) group.insert(b->nid);
    }
    if (group.size() > 1) out.insert({"R6", group});
  }
  return out;
}

// Hosts spread across three /24 networks, one router on all of them.
Experiment trim_fixture() {
  Experiment exp;
  for (int i = 0; i < 30; ++i) {
    Observation o;
    o.source = "fixture";
    o.ip = "10.0." + std::to_string(i % 3) + "." + std::to_string(10 + i);
    o.prefix_len = 24;
    exp.upsert_endpoint(o);
  }
  std::vector<Edge> edges;
  for (int n = 0; n < 3; ++n) edges.push_back(edge(exp.network_for_subnet("10.0." + std::to_string(n) + ".0/24"), "10.0." + std::to_string(n) + ".1/24"));
  exp.add_endpoint(edges, {{"role", "router"}, {"hostname", "gw"}});
  return exp;
}

}  // namespace

TEST_CASE("trim: mark a network, spare its router, sweep") {
  auto exp = trim_fixture();
  const Id net1 = exp.network_for_subnet("10.0.1.0/24");
  CHECK(mark(exp, "network=" + net1.to_string()) == 11);
  CHECK(unmark(exp, "role=router") == 1);
  auto swept = sweep(exp);
  CHECK(swept.endpoints == 10);
  // The router still references the network, so it stays.
  CHECK(swept.networks == 0);
  CHECK(exp.endpoints().size() == 21);
  CHECK(exp.find_network(net1));
  exp.validate();
  for (const auto& [nid, ep] : exp.endpoints()) CHECK(lookup(ep.data, "marked").empty());
}

TEST_CASE("trim: sweeping the last endpoints removes their network") {
  Experiment exp;
  const Id lonely = exp.upsert_endpoint(Observation{.source = "x", .ip = "192.168.5.5", .prefix_len = 24});
  const Id net = exp.find_endpoint(lonely)->edges[0].network;
  const Id other_net = exp.add_network({{"name", "spare"}});
  CHECK(mark(exp, "network=" + net.to_string()) == 1);
  auto swept = sweep(exp);
  CHECK(swept.endpoints == 1);
  CHECK(swept.networks == 1);
  CHECK_FALSE(exp.find_network(net));
  // Networks the sweep did not touch are left alone even when unreferenced.
  CHECK(exp.find_network(other_net));
}

TEST_CASE("trim: malformed query changes nothing") {
  auto exp = trim_fixture();
  const auto before = exp;
  CHECK_THROWS_AS(mark(exp, "no-equals-sign"), ParseError);
  CHECK(exp == before);
  CHECK(mark(exp, "hostname=absent") == 0);
  CHECK(sweep(exp).endpoints == 0);
  CHECK(exp == before);
}

TEST_CASE("check: each rule fires on its case") {
  Experiment exp;
  const Id net = exp.network_for_subnet("10.0.0.0/24");
  const Id empty_net = exp.add_network({{"name", "empty"}});
  std::vector<Edge> many;
  for (int i = 0; i < 17; ++i) many.push_back(edge(net, "10.0.0." + std::to_string(100 + i) + "/24"));
  const Id big = exp.add_endpoint(many, {});
  const Id a = exp.add_endpoint({edge(net, "10.0.0.5/24")}, {{"hostname", "dup"}});
  const Id b = exp.add_endpoint({edge(net, "10.0.0.5/24")}, {{"hostname", "dup"}});
  const Id bare = exp.add_endpoint({}, {});
  const Id noip = exp.add_endpoint({edge(net)}, {});
  exp.add_endpoint({edge(net)}, {{"dhcp", "true"}});

  const auto diags = check(exp);
  const std::set<Finding> expected{
      {"R1", {big}}, {"R2", {a, b}}, {"R3", {bare}}, {"R4", {empty_net}}, {"R5", {noip}}, {"R6", {a, b}}};
  CHECK(findings(diags) == expected);
  for (const auto& d : diags) {
    CHECK(d.severity == (d.code == "R1" || d.code == "R2" || d.code == "R5" ? Severity::error
                                                                          : Severity::warning));
  }
  CHECK(std::is_sorted(diags.begin(), diags.end(),
                       [](const Diagnostic& x, const Diagnostic& y) { return x.code < y.code; }));

  RuleConfig only_r3;
  only_r3.enabled = {"R3"};
  CHECK(findings(check(exp, only_r3)) == std::set<Finding>{{"R3", {bare}}});
  RuleConfig loose;
  loose.max_interfaces = 17;
  CHECK_FALSE(findings(check(exp, loose)).contains(Finding{"R1", {big}}));
}

TEST_CASE("check: rule configuration is validated") {
  RuleConfig bad;
  bad.max_interfaces = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  RuleConfig unknown;
  unknown.enabled = {"R9"};
  CHECK_THROWS_AS(unknown.validate(), ConfigError);
}

TEST_CASE("check property: agrees with the brute-force oracle") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 300; ++i) {
    auto exp = t::random_experiment(rng, 14, 4);
    // Seed some collisions the random generator rarely produces.
    if (exp.endpoints().size() >= 2 && !exp.networks().empty() && rng() % 2) {
      const Id net = exp.networks().begin()->first;
      auto it = exp.endpoints().begin();
      const Id x = it->first;
      const Id y = std::next(it)->first;
      auto ex = exp.find_endpoint(x)->edges;
      auto ey = exp.find_endpoint(y)->edges;
      ex.push_back(edge(net, "10.99.0.1/24"));
      ey.push_back(edge(net, "10.99.0.1/16"));
      exp.set_edges(x, ex);
      exp.set_edges(y, ey);
    }
    const int max_if = 1 + static_cast<int>(rng() % 3);
    RuleConfig rules;
    rules.max_interfaces = max_if;
    const auto before = exp;
    CHECK(findings(check(exp, rules)) == oracle(exp, max_if));
    CHECK(exp == before);
  }
}

TEST_CASE("hostname os rules") {
  CHECK(infer_os_from_hostname("android-3f2a") == "android");
  CHECK(infer_os_from_hostname("Johns-iPhone") == "ios");
  CHECK(infer_os_from_hostname("DESKTOP-7QK2M1") == "windows");
  CHECK(infer_os_from_hostname("accounting-PC") == "windows");
  CHECK(infer_os_from_hostname("Janes-MacBook-Pro") == "macos");
  CHECK_FALSE(infer_os_from_hostname("printer-0a1b"));
  CHECK_FALSE(infer_os_from_hostname(""));
  for (const auto& rule : hostname_rules()) {
    std::string lower(rule.pattern);
    std::transform(lower.begin(), lower.end(), lower.begin(), ::tolower);
    CHECK(lower == rule.pattern);
  }
}

TEST_CASE("annotate_os_from_hostnames only fills gaps") {
  Experiment exp;
  const Id a = exp.add_endpoint({}, {{"hostname", "android-1"}});
  const Id b = exp.add_endpoint({}, {{"hostname", "android-2"}, {"os", "linux"}});
  exp.add_endpoint({}, {{"hostname", "nas"}});
  CHECK(annotate_os_from_hostnames(exp) == 1);
  CHECK(lookup(exp.find_endpoint(a)->data, "os") == "android");
  CHECK(lookup(exp.find_endpoint(b)->data, "os") == "linux");
}

TEST_CASE("stats property: counts match a direct scan") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 200; ++i) {
    auto exp = t::random_experiment(rng, 12, 5);
    for (const auto& [nid, ep] : exp.endpoints()) {
      if (rng() % 3 == 0) exp.mutable_data(nid)["marked"] = "true";
      if (rng() % 4 == 0) exp.mutable_data(nid)["hostname"] = "android-" + nid.to_string();
    }
    for (bool infer : {false, true}) {
      const auto before = exp;
      const auto s = stats(exp, infer);
      CHECK(exp == before);
      CHECK(s.endpoints == exp.endpoints().size());
      CHECK(s.networks == exp.networks().size());
      std::size_t marked = 0;
      std::map<std::string, std::size_t> os;
      std::map<Id, std::size_t> per_net;
      for (const auto& [nid, net] : exp.networks()) per_net[nid] = 0;
      for (const auto& [nid, ep] : exp.endpoints()) {
        marked += lookup(ep.data, "marked") == "true";
        std::string label(lookup(ep.data, "os"));
        if (label.empty() && infer) label = infer_os_from_hostname(lookup(ep.data, "hostname")).value_or("");
        ++os[label.empty() ? "unknown" : label];
        std::set<Id> nets;
        for (const auto& e : ep.edges) nets.insert(e.network);
        for (Id n : nets) ++per_net[n];
      }
      CHECK(s.marked == marked);
      CHECK(s.os_histogram == os);
      CHECK(s.endpoints_per_network == per_net);
    }
  }
}

TEST_CASE("stats json shape") {
  auto exp = trim_fixture();
  auto j = to_json(stats(exp));
  CHECK(j["endpoints"] == 31);
  CHECK(j["networks"] == 3);
  CHECK(j["marked"] == 0);
  CHECK(j["os"]["unknown"] == 31);
  CHECK(j["endpoints_per_network"].size() == 3);
}
