#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mqsolve/errors.hpp"
#include "mqsolve/system.hpp"

namespace mq {

// Cap on q^n before exhaustive enumeration refuses to run.
struct OracleBudget {
  std::uint64_t max_points = 1ull << 24;
};

// Number of points q^n, or nullopt when it overflows the budget comparison.
std::optional<std::uint64_t> enumeration_points(const MQSystem& sys);

// Every solution, in lexicographic canonical order ((0,..,0) first, last
// variable varying fastest). Throws BudgetExceededError when q^n exceeds the
// budget. Ground truth for cross-validation of the solver at small sizes.
std::vector<Assignment> all_solutions(const MQSystem& sys, OracleBudget budget = {});

// First solution in the same order, nullopt when unsatisfiable.
std::optional<Assignment> any_solution(const MQSystem& sys, OracleBudget budget = {});

}  // namespace mq
