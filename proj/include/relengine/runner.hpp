#pragma once

// Backend dispatch, cross-checking and benchmark sweeps.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "relengine/bat.hpp"
#include "relengine/generators.hpp"
#include "relengine/graph.hpp"

namespace relengine {

enum class Backend { kOracle, kBat, kQuickBat, kQb2 };

inline constexpr Backend kAllBackends[] = {Backend::kOracle, Backend::kBat, Backend::kQuickBat,
                                           Backend::kQb2};

/// "oracle", "bat", "qbat", "qb2".
std::string_view to_string(Backend backend);
std::optional<Backend> parse_backend(std::string_view name);

/// Named work counters of one run, in a fixed order per backend.
struct RunCounters {
  std::vector<std::pair<std::string, std::uint64_t>> values;
  std::vector<std::size_t> stms_per_stage;  // qb2 only
};

struct RunResult {
  double reliability = 0.0;
  Backend backend = Backend::kOracle;
  double wall_time = 0.0;  // seconds
  std::optional<RunCounters> counters;
  std::uint64_t network_digest = 0;
};

struct RunOptions {
  /// Seconds; zero or negative means unbounded.
  double budget = 0.0;
  int oracle_cap = kDefaultOracleCap;
};

/// Throws OracleCapExceeded, BudgetExceeded, or std::invalid_argument when
/// the network is too wide for the chosen backend.
RunResult run_backend(const Network& network, Backend backend, const RunOptions& options = {});

struct CrosscheckReport {
  std::vector<RunResult> runs;  // kAllBackends order
  double max_delta = 0.0;
  bool passed = false;
};

inline constexpr double kCrosscheckTolerance = 1e-9;

CrosscheckReport crosscheck(const Network& network, double tolerance = kCrosscheckTolerance,
                            const RunOptions& options = {});

enum class BenchStatus { kOk, kTimeout, kSkippedCap, kUnsupported };
std::string_view to_string(BenchStatus status);

struct BenchRow {
  Family family = Family::kSeries;
  int k = 0;
  int nodes = 0;
  int arcs = 0;
  Backend backend = Backend::kOracle;
  BenchStatus status = BenchStatus::kOk;
  std::optional<RunResult> result;  // set when status is kOk
  std::string note;
};

inline constexpr double kDefaultBudgetSeconds = 60.0;

struct BenchSpec {
  Family family = Family::kBridgeChain;
  int k_min = 1;
  int k_max = 1;
  double p = 0.9;
  std::optional<std::uint64_t> seed;
  std::vector<Backend> backends{Backend::kQuickBat, Backend::kQb2};
  double budget = kDefaultBudgetSeconds;
  int oracle_cap = kDefaultOracleCap;
};

/// One row per (k, backend), k ascending, backends in the given order.
/// Timeouts and cap refusals become rows, not errors.
std::vector<BenchRow> run_bench(const BenchSpec& spec);

}  // namespace relengine
