#include "relengine/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "relengine/deadline.hpp"
#include "relengine/qb2.hpp"
#include "relengine/quick_bat.hpp"

namespace relengine {

std::string_view to_string(Backend backend) {
  switch (backend) {
    case Backend::kOracle: return "oracle";
    case Backend::kBat: return "bat";
    case Backend::kQuickBat: return "qbat";
    case Backend::kQb2: return "qb2";
  }
  return "?";
}

std::optional<Backend> parse_backend(std::string_view name) {
  for (Backend b : kAllBackends) {
    if (to_string(b) == name) return b;
  }
  return std::nullopt;
}

std::string_view to_string(BenchStatus status) {
  switch (status) {
    case BenchStatus::kOk: return "ok";
    case BenchStatus::kTimeout: return "timeout";
    case BenchStatus::kSkippedCap: return "skipped-cap";
    case BenchStatus::kUnsupported: return "unsupported";
  }
  return "?";
}

RunResult run_backend(const Network& network, Backend backend, const RunOptions& options) {
  const Deadline deadline = options.budget > 0
                                ? Deadline::after(std::chrono::duration<double>(options.budget))
                                : Deadline{};
  RunResult result;
  result.backend = backend;
  result.network_digest = network_digest(network);
  RunCounters counters;

  const auto start = std::chrono::steady_clock::now();
  switch (backend) {
    case Backend::kOracle:
    case Backend::kBat: {
      ExhaustiveStats stats;
      result.reliability =
          backend == Backend::kOracle
              ? reliability_oracle(network, {.cap = options.oracle_cap, .deadline = deadline}, &stats)
              : reliability_bat(network, deadline, &stats);
      counters.values = {{"vectors", stats.vectors}, {"connected_vectors", stats.connected}};
      break;
    }
    case Backend::kQuickBat: {
      QuickBatCounters c;
      result.reliability = reliability_quick_bat(network, deadline, &c);
      counters.values = {{"visited_prefixes", c.visited_prefixes},
                         {"connectivity_checks", c.connectivity_checks},
                         {"connected_super_vectors", c.connected_super_vectors},
                         {"multiplications", c.multiplications},
                         {"summations", c.summations}};
      break;
    }
    case Backend::kQb2: {
      const Qb2Result r = reliability_qb2(network, deadline);
      result.reliability = r.reliability;
      counters.values = {{"stages", static_cast<std::uint64_t>(r.stage_count)},
                         {"convolution_products", r.counters.convolution_products},
                         {"multiplications", r.counters.multiplications},
                         {"summations", r.counters.summations}};
      counters.stms_per_stage = r.counters.stms_per_stage;
      break;
    }
  }
  result.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  result.counters = std::move(counters);
  return result;
}

CrosscheckReport crosscheck(const Network& network, double tolerance, const RunOptions& options) {
  CrosscheckReport report;
  for (Backend b : kAllBackends) report.runs.push_back(run_backend(network, b, options));
  for (std::size_t i = 0; i < report.runs.size(); ++i) {
    for (std::size_t j = i + 1; j < report.runs.size(); ++j) {
      report.max_delta = std::max(
          report.max_delta, std::abs(report.runs[i].reliability - report.runs[j].reliability));
    }
  }
  report.passed = report.max_delta <= tolerance;
  return report;
}

std::vector<BenchRow> run_bench(const BenchSpec& spec) {
  if (spec.k_min < 1 || spec.k_max < spec.k_min) throw std::invalid_argument("invalid k range");
  std::vector<BenchRow> rows;
  for (int k = spec.k_min; k <= spec.k_max; ++k) {
    const Network network =
        generate({.family = spec.family, .k = k, .uniform_p = spec.p, .seed = spec.seed});
    for (Backend backend : spec.backends) {
      BenchRow row;
      row.family = spec.family;
      row.k = k;
      row.nodes = network.node_count();
      row.arcs = network.arc_count();
      row.backend = backend;
      if (backend == Backend::kOracle && network.arc_count() > spec.oracle_cap) {
        row.status = BenchStatus::kSkippedCap;
        row.note = "oracle refuses m=" + std::to_string(network.arc_count()) +
                   " above cap " + std::to_string(spec.oracle_cap);
        rows.push_back(std::move(row));
        continue;
      }
      try {
        row.result = run_backend(network, backend, {.budget = spec.budget, .oracle_cap = spec.oracle_cap});
      } catch (const BudgetExceeded&) {
        row.status = BenchStatus::kTimeout;
        std::ostringstream note;
        note << "budget of " << spec.budget << " s exhausted";
        row.note = note.str();
      } catch (const std::invalid_argument& e) {
        row.status = BenchStatus::kUnsupported;
        row.note = e.what();
      }
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

}  // namespace relengine
