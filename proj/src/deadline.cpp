#include "relengine/deadline.hpp"

namespace relengine {

Deadline Deadline::after(std::chrono::duration<double> budget) {
  Deadline d;
  d.limit_ = Clock::now() + std::chrono::duration_cast<Clock::duration>(budget);
  return d;
}

void Deadline::check() const {
  if (expired()) throw BudgetExceeded("time budget exhausted");
}

}  // namespace relengine
