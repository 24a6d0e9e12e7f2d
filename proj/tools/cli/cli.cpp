#include "cli/cli.hpp"

#include <csignal>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "cli/backend.hpp"
#include "netcarta/daemon/server.hpp"
#include "netcarta/daemon/store.hpp"
#include "netcarta/emit/emitter.hpp"
#include "netcarta/error.hpp"
#include "netcarta/irtools/check.hpp"
#include "netcarta/irtools/stats.hpp"
#include "netcarta/irtools/trim.hpp"
#include "netcarta/ir/serialize.hpp"
#include "netcarta/packet/pcap.hpp"
#include "netcarta/text/dhcpd.hpp"
#include "netcarta/text/nmap.hpp"
#include "netcarta/text/router_config.hpp"
#include "netcarta/text/traceroute.hpp"

namespace netcarta::cli {

namespace {

constexpr const char* kDefaultServer = "http://127.0.0.1:9090";

struct Globals {
  std::string server;
  std::string file;
  bool json = false;
};

std::string env_or(const char* name, std::string fallback) {
  const char* value = std::getenv(name);
  return value && *value ? std::string(value) : std::move(fallback);
}

std::unique_ptr<Backend> backend_for(const Globals& g) {
  if (!g.file.empty()) return make_file_backend(g.file);
  if (!g.server.empty()) return make_server_backend(g.server);
  return make_server_backend(env_or("NETCARTA_SERVER", kDefaultServer));
}

void print_diagnostics(std::ostream& os, const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics) os << format_line(d) << '\n';
}

int status_for(const std::vector<Diagnostic>& diagnostics) {
  return has_errors(diagnostics) ? kExitFindings : kExitOk;
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
  const std::string text = read_file(path);
  return {text.begin(), text.end()};
}

int ingest_observations(const Globals& g, std::ostream& out, std::vector<Observation> observations,
                        std::vector<Diagnostic> diagnostics) {
  std::vector<daemon::Mutation> batch;
  batch.reserve(observations.size());
  for (const auto& obs : observations) {
    batch.push_back({daemon::MutationKind::upsert_endpoint, nlohmann::json(obs), std::nullopt});
  }
  if (!batch.empty()) {
    auto result = backend_for(g)->apply(batch);
    diagnostics.insert(diagnostics.end(), result.diagnostics.begin(), result.diagnostics.end());
  }
  print_diagnostics(out, diagnostics);
  out << "ingested " << observations.size() << " observation(s)\n";
  return status_for(diagnostics);
}

void run_server(const Globals& g, const std::string& bind_text, std::ostream& out) {
  Experiment initial;
  if (!g.file.empty() && std::filesystem::exists(g.file)) initial = load_experiment(g.file);
  daemon::ExperimentStore store(std::move(initial));
  daemon::Server server(store);
  const auto address = daemon::BindAddress::parse(bind_text);

  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  const int port = server.bind(address);
  out << "serving on " << address.host << ":" << port << std::endl;
  std::thread worker([&] { server.run(); });
  int received = 0;
  sigwait(&signals, &received);
  server.stop();
  worker.join();
  if (!g.file.empty()) {
    store.save(g.file);
    out << "saved " << g.file << std::endl;
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"netcarta: network discovery and emulation model generation"};
  app.name("netcarta");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--server", g.server, "daemon URL (default $NETCARTA_SERVER or " +
                                           std::string(kDefaultServer) + ")");
  app.add_option("--file", g.file, "operate on a local experiment file instead of a daemon");
  app.add_flag("--json", g.json, "machine-readable output for check, stats and graph");

  int code = kExitOk;

  // serve
  auto* serve = app.add_subcommand("serve", "run the discovery daemon");
  std::string bind_text = env_or("NETCARTA_BIND", "127.0.0.1:9090");
  serve->add_option("--bind", bind_text, "host:port to listen on (default $NETCARTA_BIND)");
  serve->callback([&] { run_server(g, bind_text, out); });

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse evidence and merge it into the experiment");
  ingest->require_subcommand(1);

  auto* pcap = ingest->add_subcommand("pcap", "classic pcap capture");
  std::string pcap_file;
  std::string conflicts = "drop";
  pcap->add_option("FILE", pcap_file)->required()->check(CLI::ExistingFile);
  pcap->add_option("--conflicts", conflicts, "drop, keep-first or keep-last")
      ->check(CLI::IsMember({"drop", "keep-first", "keep-last"}));
  pcap->callback([&] {
    const auto bytes = read_bytes(pcap_file);
    packet::PcapOptions options;
    options.conflicts = packet::parse_conflict_mode(conflicts);
    auto parsed = packet::parse_pcap(bytes, options);
    code = ingest_observations(g, out, std::move(parsed.observations),
                               std::move(parsed.diagnostics));
  });

  auto* dhcpd = ingest->add_subcommand("dhcpd", "ISC dhcpd log");
  std::string dhcpd_file;
  int hint_prefix = 24;
  dhcpd->add_option("FILE", dhcpd_file)->required()->check(CLI::ExistingFile);
  dhcpd->add_option("--prefix", hint_prefix, "prefix length assumed for relay subnets")
      ->check(CLI::Range(1, 32));
  dhcpd->callback([&] {
    auto parsed = text::parse_dhcpd_log(read_file(dhcpd_file), hint_prefix);
    code = ingest_observations(g, out, std::move(parsed.observations), {});
  });

  auto* nmap = ingest->add_subcommand("nmap", "nmap XML output");
  std::string nmap_file;
  nmap->add_option("FILE", nmap_file)->required()->check(CLI::ExistingFile);
  nmap->callback([&] {
    code = ingest_observations(g, out, text::parse_nmap_xml(read_file(nmap_file)), {});
  });

  auto* trace = ingest->add_subcommand("traceroute", "traceroute text output");
  std::string trace_file;
  trace->add_option("FILE", trace_file)->required()->check(CLI::ExistingFile);
  trace->callback([&] {
    auto parsed = text::parse_traceroute(read_file(trace_file));
    nlohmann::json hops = parsed.hops;
    auto result = backend_for(g)->apply(
        {daemon::Mutation{daemon::MutationKind::ingest_traceroute, hops, std::nullopt}});
    auto diagnostics = std::move(parsed.diagnostics);
    diagnostics.insert(diagnostics.end(), result.diagnostics.begin(), result.diagnostics.end());
    print_diagnostics(out, diagnostics);
    out << "ingested " << parsed.hops.size() << " hop(s)\n";
    code = status_for(diagnostics);
  });

  auto* router = ingest->add_subcommand("router", "router configurations");
  std::vector<std::string> router_files;
  std::string dialect = "ios";
  router->add_option("FILES", router_files)->required()->check(CLI::ExistingFile);
  router->add_option("--dialect", dialect, "ios or junos-set")
      ->check(CLI::IsMember({"ios", "junos-set"}));
  router->callback([&] {
    const auto parsed_dialect = text::parse_dialect(dialect);
    std::vector<Diagnostic> diagnostics;
    nlohmann::json specs = nlohmann::json::array();
    for (const auto& file : router_files) {
      auto parsed = text::parse_router_config(read_file(file), parsed_dialect);
      diagnostics.insert(diagnostics.end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
      specs.push_back(parsed.spec);
    }
    auto result = backend_for(g)->apply(
        {daemon::Mutation{daemon::MutationKind::link_routers, specs, std::nullopt}});
    diagnostics.insert(diagnostics.end(), result.diagnostics.begin(), result.diagnostics.end());
    print_diagnostics(out, diagnostics);
    out << "linked " << router_files.size() << " router(s)\n";
    code = status_for(diagnostics);
  });

  // trim
  auto* trim = app.add_subcommand("trim", "mark, unmark or sweep endpoints");
  std::string mark_query;
  std::string unmark_query;
  bool sweep = false;
  auto* mark_opt = trim->add_option("--mark", mark_query, "mark endpoints matching QUERY");
  auto* unmark_opt = trim->add_option("--unmark", unmark_query, "unmark endpoints matching QUERY");
  auto* sweep_opt = trim->add_flag("--sweep", sweep, "delete marked endpoints");
  mark_opt->excludes(unmark_opt)->excludes(sweep_opt);
  unmark_opt->excludes(sweep_opt);
  trim->callback([&] {
    if (mark_query.empty() && unmark_query.empty() && !sweep) {
      throw CLI::ValidationError("trim", "one of --mark, --unmark or --sweep is required");
    }
    // Validate locally so a bad query never reaches the daemon.
    if (!mark_query.empty()) Query::parse(mark_query);
    if (!unmark_query.empty()) Query::parse(unmark_query);
    std::string summary;
    backend_for(g)->transact([&](Experiment& experiment) {
      if (!mark_query.empty()) {
        summary = "marked " + std::to_string(irtools::mark(experiment, mark_query)) + " endpoint(s)";
      } else if (!unmark_query.empty()) {
        summary =
            "unmarked " + std::to_string(irtools::unmark(experiment, unmark_query)) + " endpoint(s)";
      } else {
        auto swept = irtools::sweep(experiment);
        summary = "swept " + std::to_string(swept.endpoints) + " endpoint(s) and " +
                  std::to_string(swept.networks) + " network(s)";
      }
    });
    out << summary << '\n';
  });

  // check
  auto* check = app.add_subcommand("check", "gap analysis (exit 1 on error findings)");
  irtools::RuleConfig rules;
  check->add_option("--max-interfaces", rules.max_interfaces, "R1 threshold")
      ->check(CLI::PositiveNumber);
  check->callback([&] {
    const auto diagnostics = irtools::check(backend_for(g)->fetch(), rules);
    if (g.json) {
      out << nlohmann::json{{"diagnostics", diagnostics}, {"errors", has_errors(diagnostics)}}.dump(2)
          << '\n';
    } else {
      print_diagnostics(out, diagnostics);
    }
    code = status_for(diagnostics);
  });

  // stats
  auto* stats = app.add_subcommand("stats", "summary counts");
  bool infer_os = false;
  stats->add_flag("--infer-os", infer_os, "guess os from hostnames where missing");
  stats->callback([&] {
    const auto s = irtools::stats(backend_for(g)->fetch(), infer_os);
    if (g.json) {
      out << irtools::to_json(s).dump(2) << '\n';
      return;
    }
    out << "endpoints " << s.endpoints << '\n'
        << "networks " << s.networks << '\n'
        << "marked " << s.marked << '\n';
    for (const auto& [os, count] : s.os_histogram) out << "os " << os << ' ' << count << '\n';
    for (const auto& [nid, count] : s.endpoints_per_network) {
      out << "network " << nid.to_string() << ' ' << count << '\n';
    }
  });

  // emit
  auto* emit_cmd = app.add_subcommand("emit", "generate an emulation script");
  std::string template_dir;
  std::string out_file;
  std::string dedup_mode = "drop";
  emit_cmd->add_option("--templates", template_dir, "template directory (default: built-in set)")
      ->check(CLI::ExistingDirectory);
  emit_cmd->add_option("--out", out_file, "write the script here instead of stdout");
  emit_cmd->add_option("--dedup", dedup_mode, "drop, suffix or off")
      ->check(CLI::IsMember({"drop", "suffix", "off"}));
  emit_cmd->callback([&] {
    const emit::TemplateSet loaded =
        template_dir.empty() ? emit::TemplateSet{} : emit::load_templates(template_dir);
    const emit::TemplateSet& templates = template_dir.empty() ? emit::default_templates() : loaded;
    emit::EmitOptions options;
    options.dedup = emit::parse_dedup_mode(dedup_mode);
    auto result = emit::emit(backend_for(g)->fetch(), templates, options);
    print_diagnostics(err, result.diagnostics);
    if (out_file.empty()) {
      out << result.script;
    } else {
      write_file_atomically(out_file, result.script);
    }
    code = status_for(result.diagnostics);
  });

  // save / load
  auto* save = app.add_subcommand("save", "write the experiment to a file");
  std::string save_path;
  save->add_option("PATH", save_path)->required();
  save->callback([&] {
    backend_for(g)->save(save_path);
    out << "saved " << save_path << '\n';
  });

  auto* load = app.add_subcommand("load", "replace the experiment from a file");
  std::string load_path;
  load->add_option("PATH", load_path)->required()->check(CLI::ExistingFile);
  load->callback([&] {
    backend_for(g)->load(load_path);
    out << "loaded " << load_path << '\n';
  });

  // graph
  auto* graph = app.add_subcommand("graph", "print the visualization snapshot as JSON");
  graph->callback([&] { out << nlohmann::json(backend_for(g)->graph()).dump(2) << '\n'; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int status = app.exit(e, out, err);
    if (status == 0) return kExitOk;
    err << app.help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "netcarta: " << e.what() << '\n';
    return kExitFindings;
  } catch (const std::exception& e) {
    err << "netcarta: " << e.what() << '\n';
    return kExitFindings;
  }
  return code;
}

}  // namespace netcarta::cli
