#include "mqsolve/oracle.hpp"

#include <string>

namespace mq {

namespace {

void check_budget(const MQSystem& sys, const OracleBudget& budget) {
  const auto points = enumeration_points(sys);
  if (!points || *points > budget.max_points)
    throw BudgetExceededError("enumeration of q^n = " + std::to_string(sys.field.order()) + "^" +
                              std::to_string(sys.n) + " points exceeds the budget of " +
                              std::to_string(budget.max_points));
}

// Odometer increment in lexicographic order: last variable fastest.
bool advance(Assignment& x, Elem q) {
  for (std::size_t i = x.size(); i-- > 0;) {
    if (++x[i] < q) return true;
    x[i] = 0;
  }
  return false;
}

}  // namespace

std::optional<std::uint64_t> enumeration_points(const MQSystem& sys) {
  const std::uint64_t q = sys.field.order();
  std::uint64_t points = 1;
  for (std::size_t i = 0; i < sys.n; ++i) {
    if (points > (std::uint64_t{1} << 62) / q) return std::nullopt;
    points *= q;
  }
  return points;
}

std::vector<Assignment> all_solutions(const MQSystem& sys, OracleBudget budget) {
  check_budget(sys, budget);
  std::vector<Assignment> out;
  Assignment x(sys.n, 0);
  const Elem q = static_cast<Elem>(sys.field.order());
  do {
    if (is_solution(sys, x)) out.push_back(x);
  } while (advance(x, q));
  return out;
}

std::optional<Assignment> any_solution(const MQSystem& sys, OracleBudget budget) {
  check_budget(sys, budget);
  Assignment x(sys.n, 0);
  const Elem q = static_cast<Elem>(sys.field.order());
  do {
    if (is_solution(sys, x)) return x;
  } while (advance(x, q));
  return std::nullopt;
}

}  // namespace mq
