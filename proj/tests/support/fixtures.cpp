#include "fixtures.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace netcarta::testing {

const std::string_view kHostIrNode = R"({
    "NID": 1,
    "Edges": [
        {
            "N": 63,
            "D": {
                "ip": "10.0.0.1/24",
                "mac": "de:ad:be:ef:ca:fe"
            }
        }
    ],
    "D": {
        "hostname": "irc.example.com",
        "os": "linux",
        "ports": "22,6667"
    }
})";

const std::string_view kHostIrDocument = R"({
  "Nodes": [
    {
      "NID": 1,
      "Edges": [
        {
          "N": 63,
          "D": {
            "ip": "10.0.0.1/24",
            "mac": "de:ad:be:ef:ca:fe"
          }
        }
      ],
      "D": {
        "hostname": "irc.example.com",
        "os": "linux",
        "ports": "22,6667"
      }
    }
  ],
  "Networks": [
    {
      "NID": 63,
      "D": {
        "subnet": "10.0.0.0/24"
      }
    }
  ],
  "Config": {}
}
)";

Observation host_ir_observation() {
  Observation obs;
  obs.source = "fixture";
  obs.mac = "de:ad:be:ef:ca:fe";
  obs.ip = "10.0.0.1";
  obs.prefix_len = 24;
  obs.hostname = "irc.example.com";
  obs.os = "linux";
  obs.ports = {22, 6667};
  return obs;
}

std::uint32_t ip_value(std::string_view dotted) {
  unsigned a = 0, b = 0, c = 0, d = 0;
  std::sscanf(std::string(dotted).c_str(), "%u.%u.%u.%u", &a, &b, &c, &d);
  return (a << 24) | (b << 16) | (c << 8) | d;
}

std::string ip_text(std::uint32_t v) {
  return std::to_string(v >> 24) + "." + std::to_string((v >> 16) & 255) + "." +
         std::to_string((v >> 8) & 255) + "." + std::to_string(v & 255);
}

std::string subnet_of(std::string_view dotted, int prefix) {
  const std::uint32_t mask = prefix == 0 ? 0 : ~std::uint32_t{0} << (32 - prefix);
  return ip_text(ip_value(dotted) & mask) + "/" + std::to_string(prefix);
}

namespace {

std::string mac_text(std::uint32_t serial, std::uint8_t family) {
  char buf[18];
  std::snprintf(buf, sizeof buf, "02:%02x:%02x:%02x:%02x:%02x", family, (serial >> 16) & 255,
                (serial >> 8) & 255, serial & 255, (serial * 7) & 255);
  return buf;
}

std::string syslog_prefix(int second) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "Nov 14 %02d:%02d:%02d sc-dhcp01 dhcpd[4242]: ", 8 + second / 3600,
                (second / 60) % 60, second % 60);
  return buf;
}

}  // namespace

DhcpLogFixture generate_dhcp_log(std::uint64_t seed, int acks, int subnet_count,
                                 int distinct_macs) {
  std::mt19937_64 rng(seed);
  DhcpLogFixture fx;
  fx.ack_lines = acks;
  std::vector<std::uint32_t> next_host(subnet_count, 10);
  for (int s = 0; s < subnet_count; ++s) {
    fx.subnets.push_back("10." + std::to_string(100 + s) + ".0.0/22");
  }
  auto gateway = [](int s) { return "10." + std::to_string(100 + s) + ".0.1"; };
  auto fresh_ip = [&](int s) {
    const std::uint32_t base = ip_value("10." + std::to_string(100 + s) + ".0.0");
    return ip_text(base + next_host[s]++);
  };

  struct Client {
    std::string mac;
    int subnet;
    std::optional<std::string> hostname;
  };
  std::vector<Client> clients;
  const char* kinds[] = {"android-", "iPhone-", "DESKTOP-", "printer-", ""};
  for (int i = 0; i < distinct_macs; ++i) {
    Client c{mac_text(static_cast<std::uint32_t>(i), 0xd4), static_cast<int>(rng() % subnet_count),
             std::nullopt};
    const std::string kind = kinds[rng() % 5];
    if (!kind.empty()) {
      char suffix[8];
      std::snprintf(suffix, sizeof suffix, "%04x", static_cast<unsigned>(rng() & 0xffff));
      c.hostname = kind + suffix;
    }
    clients.push_back(c);
  }

  // First lease for everyone, then re-leases for a random subset.
  std::vector<int> order(distinct_macs);
  for (int i = 0; i < distinct_macs; ++i) order[i] = i;
  std::vector<int> releases;
  std::vector<int> pool = order;
  std::shuffle(pool.begin(), pool.end(), rng);
  for (int i = 0; i < acks - distinct_macs; ++i) releases.push_back(pool[i % pool.size()]);

  std::ostringstream out;
  int clock = 0;
  auto ack = [&](const Client& c) {
    const std::string ip = fresh_ip(c.subnet);
    if (rng() % 4 == 0) {
      out << syslog_prefix(clock) << "DHCPREQUEST for " << ip << " from " << c.mac << " via "
          << gateway(c.subnet) << "\n";
    }
    if (rng() % 8 == 0) {
      out << syslog_prefix(clock) << "DHCPDISCOVER from " << c.mac << " via " << gateway(c.subnet)
          << "\n";
      out << syslog_prefix(clock) << "DHCPOFFER on " << ip << " to " << c.mac << " via "
          << gateway(c.subnet) << "\n";
    }
    out << syslog_prefix(clock) << "DHCPACK on " << ip << " to " << c.mac;
    if (c.hostname) out << " (" << *c.hostname << ")";
    out << " via " << gateway(c.subnet) << "\n";
    ++clock;
    fx.final_by_mac[c.mac] = DhcpTruth{ip, c.hostname, fx.subnets[c.subnet]};
  };
  for (int i : order) ack(clients[i]);
  for (int i : releases) {
    fx.reacked.insert(clients[i].mac);
    ack(clients[i]);
  }
  fx.text = out.str();
  return fx;
}

RouterFixture generate_router_fixture() {
  using text::RouterInterface;
  using text::RouterSpec;
  RouterFixture fx;
  RouterSpec agg1{"agg1", {}}, agg2{"agg2", {}};
  // Aggregation interconnects: six /30 links.
  for (int k = 0; k < 6; ++k) {
    const std::uint32_t base = ip_value("172.16.0.0") + 4u * static_cast<std::uint32_t>(k);
    agg1.interfaces.push_back({"TenGigabitEthernet1/" + std::to_string(k), ip_text(base + 1), 30});
    agg2.interfaces.push_back({"xe-0/0/" + std::to_string(k), ip_text(base + 2), 30});
  }
  std::vector<RouterSpec> edges;
  for (int e = 0; e < 3; ++e) {
    RouterSpec edge{"edge" + std::to_string(e + 1), {}};
    const std::uint32_t up1 = ip_value("172.16.1.0") + 8u * static_cast<std::uint32_t>(e);
    const std::uint32_t up2 = up1 + 4;
    edge.interfaces.push_back({e % 2 == 0 ? "GigabitEthernet0/0" : "ge-0/0/0", ip_text(up1 + 2), 30});
    agg1.interfaces.push_back({"GigabitEthernet2/" + std::to_string(e), ip_text(up1 + 1), 30});
    edge.interfaces.push_back({e % 2 == 0 ? "GigabitEthernet0/1" : "ge-0/0/1", ip_text(up2 + 2), 30});
    agg2.interfaces.push_back({"ge-1/0/" + std::to_string(e), ip_text(up2 + 1), 30});
    for (int lan = 0; lan < 2; ++lan) {
      const std::string addr =
          "10." + std::to_string(20 + e) + "." + std::to_string(lan * 4) + ".1";
      edge.interfaces.push_back(
          {e % 2 == 0 ? "Vlan" + std::to_string(100 + lan) : "irb." + std::to_string(100 + lan),
           addr, 22});
    }
    edges.push_back(edge);
  }
  fx.truth = {agg1, agg2, edges[0], edges[1], edges[2]};

  auto netmask = [](int prefix) {
    return ip_text(prefix == 0 ? 0 : ~std::uint32_t{0} << (32 - prefix));
  };
  auto ios = [&](const RouterSpec& spec) {
    std::ostringstream o;
    o << "!\nversion 15.2\nservice timestamps debug datetime msec\n!\nhostname " << spec.name
      << "\n!\n";
    for (const auto& itf : spec.interfaces) {
      o << "interface " << itf.name << "\n description link\n ip address " << itf.ip << " "
        << netmask(itf.prefix_len) << "\n no shutdown\n!\n";
    }
    o << "interface GigabitEthernet9/9\n ip address 192.0.2.1 255.255.255.0\n shutdown\n!\n"
      << "interface Loopback7\n no ip address\n!\nrouter ospf 1\n network 0.0.0.0 "
         "255.255.255.255 area 0\n!\nend\n";
    return o.str();
  };
  auto junos = [&](const RouterSpec& spec) {
    std::ostringstream o;
    o << "set version 20.4R3\nset system host-name " << spec.name << "\n";
    for (const auto& itf : spec.interfaces) {
      std::string physical = itf.name;
      std::string unit = "0";
      if (auto dot = itf.name.find('.'); dot != std::string::npos) {
        physical = itf.name.substr(0, dot);
        unit = itf.name.substr(dot + 1);
      }
      o << "set interfaces " << physical << " description uplink\n"
        << "set interfaces " << physical << " unit " << unit << " family inet address " << itf.ip
        << "/" << itf.prefix_len << "\n";
    }
    o << "set protocols ospf area 0.0.0.0 interface all\n";
    return o.str();
  };
  fx.configs.emplace_back(ios(agg1), text::RouterDialect::ios);
  fx.configs.emplace_back(junos(agg2), text::RouterDialect::junos_set);
  fx.configs.emplace_back(ios(edges[0]), text::RouterDialect::ios);
  fx.configs.emplace_back(junos(edges[1]), text::RouterDialect::junos_set);
  fx.configs.emplace_back(ios(edges[2]), text::RouterDialect::ios);
  return fx;
}

namespace {

std::string random_text(std::mt19937_64& rng) {
  static const std::vector<std::string> pieces{
      "a", "Z", "0", "-", "_", " ", ".", "/", ":", "\"", "\\", "\n", "\t", "é", "☃", "日本", "{", "}"};
  std::string s;
  const int n = static_cast<int>(rng() % 8);
  for (int i = 0; i < n; ++i) s += pieces[rng() % pieces.size()];
  return s;
}

MetadataMap random_map(std::mt19937_64& rng) {
  static const std::vector<std::string> keys{"hostname", "os", "ports", "role", "note",
                                             "vendor", "Δ", "x y", "services", "dhcp"};
  MetadataMap map;
  const int n = static_cast<int>(rng() % 5);
  for (int i = 0; i < n; ++i) map[keys[rng() % keys.size()]] = random_text(rng);
  return map;
}

}  // namespace

Experiment random_experiment(std::mt19937_64& rng, int max_endpoints, int max_networks) {
  Experiment exp;
  std::vector<Id> networks;
  const int network_count = static_cast<int>(rng() % (max_networks + 1));
  for (int i = 0; i < network_count; ++i) {
    MetadataMap data = random_map(rng);
    data.erase("subnet");
    if (rng() % 2) data["subnet"] = "10." + std::to_string(i) + ".0.0/16";
    networks.push_back(exp.add_network(std::move(data)));
  }
  const int endpoint_count = static_cast<int>(rng() % (max_endpoints + 1));
  for (int i = 0; i < endpoint_count; ++i) {
    std::vector<Edge> edges;
    if (!networks.empty()) {
      const int edge_count = static_cast<int>(rng() % 4);
      for (int k = 0; k < edge_count; ++k) {
        MetadataMap data;
        if (rng() % 3) {
          data["ip"] = ip_text(static_cast<std::uint32_t>(rng())) + "/" + std::to_string(rng() % 33);
        }
        if (rng() % 2) data["mac"] = mac_text(static_cast<std::uint32_t>(rng()), 0x0a);
        if (rng() % 4 == 0) data["interface"] = random_text(rng);
        edges.push_back({networks[rng() % networks.size()], std::move(data)});
      }
    }
    exp.add_endpoint(std::move(edges), random_map(rng));
  }
  // Leave gaps in the id space now and then.
  if (!exp.endpoints().empty() && rng() % 3 == 0) {
    exp.remove_endpoint(exp.endpoints().begin()->first);
  }
  exp.config() = random_map(rng);
  return exp;
}

ConflictStream generate_conflict_stream(std::mt19937_64& rng, int devices, int plant) {
  struct Tagged {
    Observation obs;
    int group;
  };
  std::vector<Tagged> items;
  std::uint32_t next_ip = ip_value("10.60.0.10");
  std::uint32_t next_mac = 1;
  auto fresh_ip = [&] { return ip_text(next_ip++); };
  auto fresh_mac = [&] { return mac_text(next_mac++, 0x5c); };
  auto arp = [&](const std::string& m, const std::string& ip) {
    Observation o;
    o.source = "arp";
    o.mac = m;
    o.ip = ip;
    return o;
  };

  for (int d = 0; d < devices; ++d) {
    const std::string m = fresh_mac();
    if (rng() % 3 == 0) {
      // DHCP client, possibly moved to a new lease later on.
      Observation ack;
      ack.source = "dhcp";
      ack.mac = m;
      ack.ip = fresh_ip();
      ack.prefix_len = 16;
      ack.dhcp = true;
      items.push_back({ack, -1});
      if (rng() % 2) {
        ack.ip = fresh_ip();
        items.push_back({ack, -1});
      }
    } else {
      const std::string ip = fresh_ip();
      const int repeats = 1 + static_cast<int>(rng() % 3);
      for (int r = 0; r < repeats; ++r) items.push_back({arp(m, ip), -1});
      if (rng() % 2) {
        Observation ping;
        ping.source = "icmp";
        ping.ip = ip;
        items.push_back({ping, -1});
      }
    }
  }
  for (int g = 0; g < plant; ++g) {
    if (g % 2 == 0) {
      const std::string m = fresh_mac();
      const std::string a = fresh_ip();
      const std::string b = fresh_ip();
      items.push_back({arp(m, a), g});
      items.push_back({arp(m, b), g});
      if (rng() % 2) items.push_back({arp(m, a), g});
    } else {
      const std::string ip = fresh_ip();
      items.push_back({arp(fresh_mac(), ip), g});
      items.push_back({arp(fresh_mac(), ip), g});
      Observation ping;
      ping.source = "icmp";
      ping.ip = ip;
      items.push_back({ping, g});
    }
  }
  std::shuffle(items.begin(), items.end(), rng);
  ConflictStream out;
  out.planted.resize(plant);
  for (std::size_t i = 0; i < items.size(); ++i) {
    out.observations.push_back(items[i].obs);
    if (items[i].group >= 0) out.planted[items[i].group].insert(i);
  }
  return out;
}

PassMatrix random_pass_matrix(std::mt19937_64& rng, int passes, int max_templates, int nodes) {
  PassMatrix m;
  // Distinct pass letters, visited alphabetically.
  std::string letters = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  std::shuffle(letters.begin(), letters.end(), rng);
  letters.resize(passes);
  std::sort(letters.begin(), letters.end());

  std::vector<std::vector<std::string>> per_pass;  // file names in execution order
  for (char letter : letters) {
    const int count = 1 + static_cast<int>(rng() % max_templates);
    std::set<int> orders;
    while (static_cast<int>(orders.size()) < count) orders.insert(static_cast<int>(rng() % 100));
    std::vector<std::string> names;
    for (int order : orders) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%c%02dstep.template", letter, order);
      names.emplace_back(buf);
    }
    per_pass.push_back(names);
  }

  std::vector<Id> ids;
  for (int n = 0; n < nodes; ++n) ids.push_back(m.experiment.add_endpoint({}, {}));
  // flag[file][node]
  std::map<std::string, std::set<Id>> handled;
  for (const auto& names : per_pass) {
    for (const auto& name : names) {
      const std::string key = "h_" + name.substr(0, 3);
      for (Id id : ids) {
        if (rng() % 3 == 0) {
          m.experiment.mutable_data(id)[key] = "1";
          handled[name].insert(id);
        }
      }
      m.files.emplace_back(name, name + " {{ $n.NID }}\n{{ if $n.D." + key + " }}{{ handled }}{{ end }}\n");
    }
  }
  std::shuffle(m.files.begin(), m.files.end(), rng);

  for (const auto& names : per_pass) {
    for (Id id : ids) {
      for (const auto& name : names) {
        m.expected_log.emplace_back(name, id);
        if (handled[name].contains(id)) break;
      }
    }
  }
  return m;
}

}  // namespace netcarta::testing
