// relengine: command-line front end for the reliability backends.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relengine/bat.hpp"
#include "relengine/deadline.hpp"
#include "relengine/decomposition.hpp"
#include "relengine/generators.hpp"
#include "relengine/graph.hpp"
#include "relengine/runner.hpp"

namespace {

using relengine::Backend;
using nlohmann::json;

// Exit codes.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInvalidNetwork = 2;
constexpr int kExitOracleCap = 3;
constexpr int kExitCrosscheckFailed = 4;
constexpr int kExitTimeout = 5;
constexpr int kExitUnsupported = 6;

std::string ten_digits(double r) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%#.10g", r);
  return buf;
}

std::string hex_digest(std::uint64_t d) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(d));
  return buf;
}

json counters_json(const relengine::RunCounters& c) {
  json out = json::object();
  for (const auto& [name, value] : c.values) out[name] = value;
  if (!c.stms_per_stage.empty()) out["stms_per_stage"] = c.stms_per_stage;
  return out;
}

json run_json(const relengine::RunResult& r, bool with_counters) {
  json out{{"backend", relengine::to_string(r.backend)},
           {"reliability", r.reliability},
           {"wall_time", r.wall_time},
           {"network_digest", hex_digest(r.network_digest)}};
  if (with_counters && r.counters) out["counters"] = counters_json(*r.counters);
  return out;
}

struct NetworkSource {
  std::string file;
  std::string family;
  int k = 0;
  double p = 0.9;
  std::optional<std::uint64_t> seed;

  relengine::Network load() const {
    if (!file.empty()) return relengine::load_network(file);
    const auto f = relengine::parse_family(family);
    if (!f) throw CLI::ValidationError("--family", "unknown family '" + family + "'");
    return relengine::generate({.family = *f, .k = k, .uniform_p = p, .seed = seed});
  }
};

std::vector<Backend> parse_backend_list(const std::string& list) {
  std::vector<Backend> out;
  std::stringstream in(list);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = relengine::parse_backend(item);
    if (!b) throw CLI::ValidationError("--backends", "unknown backend '" + item + "'");
    out.push_back(*b);
  }
  if (out.empty()) throw CLI::ValidationError("--backends", "empty backend list");
  return out;
}

int cmd_compute(const std::string& file, const std::string& backend_name, bool backend_given,
                bool counters, bool time, bool as_json, bool explain) {
  const relengine::Network network = relengine::load_network(file);
  if (explain) {
    std::cout << relengine::explain_decomposition(relengine::decompose(network));
    if (!backend_given) return kExitOk;
  }
  const auto backend = relengine::parse_backend(backend_name);
  if (!backend) throw CLI::ValidationError("--backend", "unknown backend '" + backend_name + "'");

  relengine::RunOptions options;
  options.oracle_cap = relengine::oracle_cap_from_env();
  const relengine::RunResult r = relengine::run_backend(network, *backend, options);

  if (as_json) {
    json out = run_json(r, counters);
    if (!time) out.erase("wall_time");
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << ten_digits(r.reliability) << '\n';
  if (counters && r.counters) {
    std::cout << std::left << std::setw(26) << "network_digest" << hex_digest(r.network_digest) << '\n';
    for (const auto& [name, value] : r.counters->values) {
      std::cout << std::setw(26) << name << value << '\n';
    }
    if (!r.counters->stms_per_stage.empty()) {
      std::cout << std::setw(26) << "stms_per_stage";
      for (std::size_t i = 0; i < r.counters->stms_per_stage.size(); ++i) {
        std::cout << (i ? " " : "") << r.counters->stms_per_stage[i];
      }
      std::cout << '\n';
    }
  }
  if (time) std::cout << std::left << std::setw(26) << "wall_time" << r.wall_time << " s\n";
  return kExitOk;
}

int cmd_crosscheck(const NetworkSource& source, double tolerance, bool as_json) {
  const relengine::Network network = source.load();
  relengine::RunOptions options;
  options.oracle_cap = relengine::oracle_cap_from_env();
  const relengine::CrosscheckReport report = relengine::crosscheck(network, tolerance, options);
  if (as_json) {
    json runs = json::array();
    for (const auto& r : report.runs) runs.push_back(run_json(r, false));
    std::cout << json{{"runs", runs},
                      {"max_delta", report.max_delta},
                      {"tolerance", tolerance},
                      {"passed", report.passed}}
                     .dump(2)
              << '\n';
  } else {
    for (const auto& r : report.runs) {
      std::cout << std::left << std::setw(8) << relengine::to_string(r.backend)
                << ten_digits(r.reliability) << "  " << r.wall_time << " s\n";
    }
    std::cout << "max |dR| " << report.max_delta << " (tolerance " << tolerance << ")\n"
              << (report.passed ? "PASS" : "FAIL") << '\n';
  }
  return report.passed ? kExitOk : kExitCrosscheckFailed;
}

int cmd_bench(const relengine::BenchSpec& spec, bool csv, bool as_json) {
  const std::vector<relengine::BenchRow> rows = relengine::run_bench(spec);
  auto reliability_of = [](const relengine::BenchRow& row) {
    return row.result ? ten_digits(row.result->reliability) : std::string();
  };
  auto time_of = [](const relengine::BenchRow& row) {
    if (!row.result) return std::string();
    std::ostringstream s;
    s << std::setprecision(6) << row.result->wall_time;
    return s.str();
  };
  if (as_json) {
    json out = json::array();
    for (const auto& row : rows) {
      json j{{"family", relengine::to_string(row.family)},
             {"k", row.k},
             {"nodes", row.nodes},
             {"arcs", row.arcs},
             {"backend", relengine::to_string(row.backend)},
             {"status", relengine::to_string(row.status)}};
      if (row.result) {
        j["reliability"] = row.result->reliability;
        j["wall_time"] = row.result->wall_time;
        j["network_digest"] = hex_digest(row.result->network_digest);
        if (row.result->counters) j["counters"] = counters_json(*row.result->counters);
      }
      if (!row.note.empty()) j["note"] = row.note;
      out.push_back(std::move(j));
    }
    std::cout << out.dump(2) << '\n';
  } else if (csv) {
    std::cout << "family,k,nodes,arcs,backend,status,reliability,wall_time,note\n";
    for (const auto& row : rows) {
      std::cout << relengine::to_string(row.family) << ',' << row.k << ',' << row.nodes << ','
                << row.arcs << ',' << relengine::to_string(row.backend) << ','
                << relengine::to_string(row.status) << ',' << reliability_of(row) << ','
                << time_of(row) << ",\"" << row.note << "\"\n";
    }
  } else {
    std::cout << std::left << std::setw(14) << "family" << std::setw(4) << "k" << std::setw(7)
              << "nodes" << std::setw(6) << "arcs" << std::setw(8) << "backend" << std::setw(13)
              << "status" << std::setw(14) << "reliability" << "wall_time\n";
    for (const auto& row : rows) {
      std::cout << std::setw(14) << relengine::to_string(row.family) << std::setw(4) << row.k
                << std::setw(7) << row.nodes << std::setw(6) << row.arcs << std::setw(8)
                << relengine::to_string(row.backend) << std::setw(13)
                << relengine::to_string(row.status) << std::setw(14) << reliability_of(row)
                << time_of(row);
      if (!row.note.empty()) std::cout << "  " << row.note;
      std::cout << '\n';
    }
  }
  return kExitOk;
}

int cmd_generate(const NetworkSource& source) {
  const relengine::Network network = source.load();
  std::ostringstream comment;
  comment << source.family << " k=" << source.k;
  if (source.seed) {
    comment << " seed=" << *source.seed;
  } else {
    comment << " p=" << source.p;
  }
  std::cout << relengine::format_network(network, comment.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact two-terminal reliability of binary-state networks"};
  app.require_subcommand(1);

  // compute
  auto* compute = app.add_subcommand("compute", "Reliability of a network file");
  std::string compute_file;
  std::string backend_name = "qb2";
  bool show_counters = false;
  bool show_time = false;
  bool compute_json = false;
  bool explain = false;
  compute->add_option("file", compute_file, "Network file")->required();
  auto* backend_opt = compute->add_option("--backend", backend_name, "oracle, bat, qbat or qb2")
                          ->check(CLI::IsMember({"oracle", "bat", "qbat", "qb2"}));
  compute->add_flag("--counters", show_counters, "Print work counters");
  compute->add_flag("--time", show_time, "Print wall time");
  compute->add_flag("--json", compute_json, "Machine-readable output");
  compute->add_flag("--explain-decomposition", explain, "Print stages, cuts and boundaries");

  // crosscheck
  auto* check = app.add_subcommand("crosscheck", "Run every backend and compare");
  NetworkSource check_source;
  std::uint64_t check_seed = 0;
  double tolerance = relengine::kCrosscheckTolerance;
  bool check_json = false;
  check->add_option("file", check_source.file, "Network file");
  auto* check_family = check->add_option("--family", check_source.family, "Generator family");
  check->add_option("--k", check_source.k, "Generator size")->needs(check_family);
  check->add_option("--p", check_source.p, "Uniform arc probability")->needs(check_family);
  auto* check_seed_opt =
      check->add_option("--seed", check_seed, "Seed for per-arc random probabilities")->needs(check_family);
  check->add_option("--tolerance", tolerance, "Largest accepted pairwise difference");
  check->add_flag("--json", check_json, "Machine-readable output");

  // bench
  auto* bench = app.add_subcommand("bench", "Time backends over a family sweep");
  relengine::BenchSpec bench_spec;
  std::string bench_family = "bridge-chain";
  std::string bench_backends = "qbat,qb2";
  std::uint64_t bench_seed = 0;
  bool bench_csv = false;
  bool bench_json = false;
  bench->add_option("--family", bench_family, "Generator family")->required();
  bench->add_option("--k-min", bench_spec.k_min, "Smallest size")->required();
  bench->add_option("--k-max", bench_spec.k_max, "Largest size")->required();
  bench->add_option("--p", bench_spec.p, "Uniform arc probability");
  auto* bench_seed_opt = bench->add_option("--seed", bench_seed, "Seed for random probabilities");
  bench->add_option("--backends", bench_backends, "Comma-separated backend list");
  bench->add_option("--budget", bench_spec.budget, "Per-run time budget in seconds");
  auto* csv_flag = bench->add_flag("--csv", bench_csv, "CSV output");
  bench->add_flag("--json", bench_json, "JSON output")->excludes(csv_flag);

  // generate
  auto* gen = app.add_subcommand("generate", "Write a generated network to stdout");
  NetworkSource gen_source;
  gen_source.k = 1;
  std::uint64_t gen_seed = 0;
  std::string gen_family_pos;
  int gen_k_pos = 0;
  double gen_p_pos = -1.0;
  gen->add_option("--family", gen_source.family, "Generator family");
  gen->add_option("--k", gen_source.k, "Generator size");
  gen->add_option("--p", gen_source.p, "Uniform arc probability");
  auto* gen_seed_opt = gen->add_option("--seed", gen_seed, "Seed for per-arc random probabilities");
  gen->add_option("family_k_p", gen_family_pos, "")->group("");
  gen->add_option("k_pos", gen_k_pos, "")->group("");
  gen->add_option("p_pos", gen_p_pos, "")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (compute->parsed()) {
      return cmd_compute(compute_file, backend_name, backend_opt->count() > 0, show_counters,
                         show_time, compute_json, explain);
    }
    if (check->parsed()) {
      if (check_source.file.empty() == check_source.family.empty()) {
        std::cerr << "crosscheck: give either a network file or --family\n";
        return kExitUsage;
      }
      if (check_seed_opt->count() > 0) check_source.seed = check_seed;
      return cmd_crosscheck(check_source, tolerance, check_json);
    }
    if (bench->parsed()) {
      const auto family = relengine::parse_family(bench_family);
      if (!family) throw CLI::ValidationError("--family", "unknown family '" + bench_family + "'");
      bench_spec.family = *family;
      bench_spec.backends = parse_backend_list(bench_backends);
      bench_spec.oracle_cap = relengine::oracle_cap_from_env();
      if (bench_seed_opt->count() > 0) bench_spec.seed = bench_seed;
      return cmd_bench(bench_spec, bench_csv, bench_json);
    }
    if (gen->parsed()) {
      if (!gen_family_pos.empty()) gen_source.family = gen_family_pos;
      if (gen_k_pos > 0) gen_source.k = gen_k_pos;
      if (gen_p_pos >= 0.0) gen_source.p = gen_p_pos;
      if (gen_source.family.empty()) {
        std::cerr << "generate: --family is required\n";
        return kExitUsage;
      }
      if (gen_seed_opt->count() > 0) gen_source.seed = gen_seed;
      return cmd_generate(gen_source);
    }
  } catch (const relengine::NetworkError& e) {
    std::cerr << "invalid network: " << e.what() << '\n';
    return kExitInvalidNetwork;
  } catch (const relengine::OracleCapExceeded& e) {
    std::cerr << e.what() << '\n';
    return kExitOracleCap;
  } catch (const relengine::BudgetExceeded& e) {
    std::cerr << e.what() << '\n';
    return kExitTimeout;
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << '\n';
    return kExitUnsupported;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
