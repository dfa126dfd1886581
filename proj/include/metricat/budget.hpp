#pragma once

#include <cstddef>
#include <cstdint>

namespace metricat {

/// Guards for the exponential operations. Exceeding either limit raises
/// BudgetExceeded; results are never silently truncated.
struct Budget {
  std::size_t max_points = 64;
  std::uint64_t max_nodes = 10'000'000;
};

/// Selects the serial reference kernel or its OpenMP counterpart. Both
/// produce identical output.
enum class Exec { Serial, Parallel };

}  // namespace metricat
