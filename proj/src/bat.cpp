#include "relengine/bat.hpp"

#include <bit>
#include <cstdlib>
#include <string>
#include <vector>

#include "relengine/dsu.hpp"

namespace relengine {

namespace {

std::uint64_t width_mask(int width) {
  return width >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << width) - 1;
}

void require_width(const Network& network, const ArcStateVector& x) {
  if (x.width() != network.arc_count()) {
    throw std::invalid_argument("state vector width " + std::to_string(x.width()) +
                                " does not match arc count " +
                                std::to_string(network.arc_count()));
  }
}

}  // namespace

ArcStateVector::ArcStateVector(int width, std::uint64_t bits) : width_(width), bits_(bits) {
  if (width < 0 || width > kMaxWidth) {
    throw std::invalid_argument("state vector width must be in [0, 64]");
  }
  if ((bits & ~width_mask(width)) != 0) throw std::invalid_argument("bits beyond vector width");
}

ArcStateVector::ArcStateVector(std::initializer_list<int> coordinates)
    : ArcStateVector(static_cast<int>(coordinates.size())) {
  int i = 1;
  for (int c : coordinates) set(i++, c != 0);
}

ArcStateVector ArcStateVector::all_ones(int width) {
  return ArcStateVector(width, width_mask(width));
}

void ArcStateVector::set(int i, bool value) {
  if (i < 1 || i > width_) throw std::out_of_range("coordinate out of range");
  const std::uint64_t bit = std::uint64_t{1} << (i - 1);
  bits_ = value ? (bits_ | bit) : (bits_ & ~bit);
}

int ArcStateVector::count() const { return std::popcount(bits_); }

std::string ArcStateVector::to_string() const {
  std::string out = "(";
  for (int i = 1; i <= width_; ++i) {
    if (i > 1) out += ", ";
    out += (*this)[i] ? '1' : '0';
  }
  return out + ")";
}

bool dominated_by(const ArcStateVector& a, const ArcStateVector& b) {
  return a.width() == b.width() && (a.bits() & ~b.bits()) == 0;
}

bool strictly_dominated_by(const ArcStateVector& a, const ArcStateVector& b) {
  return dominated_by(a, b) && a.bits() != b.bits();
}

bool bat_after(const ArcStateVector& a, const ArcStateVector& b) {
  return a.width() == b.width() && a.bat_index() > b.bat_index();
}

std::optional<ArcStateVector> next_vector(const ArcStateVector& x) {
  ArcStateVector y = x;
  for (int i = 1; i <= x.width(); ++i) {
    if (!y[i]) {
      y.set(i, true);
      return y;
    }
    y.set(i, false);
  }
  return std::nullopt;
}

BatSequence enumerate_vectors(int width, std::optional<ArcStateVector> start) {
  if (start && start->width() != width) {
    throw std::invalid_argument("start vector width does not match");
  }
  return BatSequence(start.value_or(ArcStateVector(width)));
}

bool is_connected(const Network& network, const ArcStateVector& x) {
  require_width(network, x);
  const int n = network.node_count();
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
  std::vector<NodeId> stack{1};
  seen[1] = true;
  while (!stack.empty()) {
    const NodeId v = stack.back();
    stack.pop_back();
    if (v == n) return true;
    for (const Incidence& inc : network.incident(v)) {
      if (!seen[inc.neighbor] && x[inc.arc_index + 1]) {
        seen[inc.neighbor] = true;
        stack.push_back(inc.neighbor);
      }
    }
  }
  return false;
}

double vector_probability(const Network& network, const ArcStateVector& x) {
  require_width(network, x);
  double p = 1.0;
  for (const Arc& a : network.arcs()) p *= x[a.id] ? a.p : 1.0 - a.p;
  return p;
}

OracleCapExceeded::OracleCapExceeded(int arcs, int cap)
    : std::runtime_error("oracle refuses " + std::to_string(arcs) + " arcs (cap " +
                         std::to_string(cap) + ")"),
      arcs_(arcs),
      cap_(cap) {}

int oracle_cap_from_env() {
  if (const char* raw = std::getenv("RELENGINE_ORACLE_CAP")) {
    char* end = nullptr;
    const long value = std::strtol(raw, &end, 10);
    if (end != raw && *end == '\0' && value >= 0 && value <= 63) return static_cast<int>(value);
  }
  return kDefaultOracleCap;
}

double reliability_oracle(const Network& network, const OracleOptions& options,
                          ExhaustiveStats* stats) {
  const int m = network.arc_count();
  if (m > options.cap || m > 63) throw OracleCapExceeded(m, options.cap);
  BudgetGuard guard(options.deadline);
  const std::uint64_t total = std::uint64_t{1} << m;
  double reliability = 0.0;
  std::uint64_t connected = 0;
  for (std::uint64_t k = 0; k < total; ++k) {
    guard.tick();
    const ArcStateVector x(m, k);
    if (is_connected(network, x)) {
      reliability += vector_probability(network, x);
      ++connected;
    }
  }
  if (stats) *stats = {total, connected};
  return reliability;
}

double reliability_bat(const Network& network, const Deadline& deadline, ExhaustiveStats* stats) {
  const int m = network.arc_count();
  if (m > 63) throw std::invalid_argument("plain BAT is limited to 63 arcs");
  BudgetGuard guard(deadline);
  const auto arcs = network.arcs();
  DisjointSets sets;
  double reliability = 0.0;
  ExhaustiveStats local;
  for (const ArcStateVector& x : enumerate_vectors(m)) {
    guard.tick();
    ++local.vectors;
    sets.reset(network.node_count() + 1);
    for (const Arc& a : arcs) {
      if (x[a.id]) sets.unite(a.u, a.v);
    }
    if (!sets.same(network.source(), network.sink())) continue;
    ++local.connected;
    double p = 1.0;
    for (const Arc& a : arcs) p *= x[a.id] ? a.p : 1.0 - a.p;
    reliability += p;
  }
  if (stats) *stats = local;
  return reliability;
}

}  // namespace relengine
