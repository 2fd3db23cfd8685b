#include <algorithm>
#include <set>
#include <vector>

#include <doctest.h>

#include "mqsolve/oracle.hpp"
#include "mqsolve/reducer.hpp"

#include "helpers.hpp"

using mq::Assignment;
using mq::CrossTermTarget;
using mq::Elem;
using mq::Field;
using mq::Matrix;
using mq::MQSystem;
using mq::QuadraticPolynomial;
using mq::RetryPolicy;
using mq::Rng;
using mq::Vec;

namespace {

// 1-based-step closed forms for the number of kill targets.
std::size_t odd_rows_1based(std::size_t m, std::size_t s) {
  return (m - s + 1) * (s - 1) + s * (s - 1) / 2;
}
std::size_t char2_rows_1based(std::size_t m, std::size_t s) {
  return (m - s + 1) * (s - 1) + (s - 1) * (s - 2) / 2;
}

MQSystem zero_system(const Field& f, std::size_t n, std::size_t m) {
  MQSystem sys{f, n, {}};
  for (std::size_t k = 0; k < m; ++k)
    sys.polys.push_back({Matrix(f, n, n), Vec(n, 0), 0});
  return sys;
}

// Assemble the full column vector of an elementary transform from the n-1
// unknowns, matching the constraint-system convention.
Vec assemble_column(std::size_t n, std::size_t t, const Vec& unknowns) {
  Vec column(n, 0);
  column[t] = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) column[(k < t) ? k : k + 1] = unknowns[k];
  return column;
}

}  // namespace

TEST_CASE("kill-target counts match the closed forms") {
  for (std::size_t m = 2; m <= 8; ++m) {
    for (std::size_t t = 1; t < m; ++t) {
      const std::size_t s = t + 1;  // 1-based step index
      CAPTURE(m);
      CAPTURE(t);
      CHECK(mq::cross_term_row_count(m, t, false) == odd_rows_1based(m, s));
      CHECK(mq::cross_term_row_count(m, t, true) == char2_rows_1based(m, s));
      CHECK(mq::cross_term_targets(m, t, false).size() ==
            mq::cross_term_row_count(m, t, false));
      CHECK(mq::cross_term_targets(m, t, true).size() ==
            mq::cross_term_row_count(m, t, true));
    }
  }
  // Spot values: the first substitution step needs one kill per equation
  // (minus the pivoted equation's guess pair in characteristic 2).
  CHECK(mq::cross_term_row_count(6, 1, false) == 6);
  CHECK(mq::cross_term_row_count(6, 1, true) == 5);
  CHECK(mq::cross_term_row_count(50, 2, false) == 99);
  CHECK(mq::cross_term_row_count(50, 2, true) == 97);
}

TEST_CASE("kill targets cover exactly the required pairs") {
  const std::size_t m = 5;
  for (const bool char2 : {false, true}) {
    for (std::size_t t = 1; t < m; ++t) {
      const auto targets = mq::cross_term_targets(m, t, char2);
      std::set<std::pair<std::size_t, std::size_t>> seen;
      for (const auto& tg : targets) {
        CHECK(seen.insert({tg.eq, tg.j}).second);  // no duplicates
        const bool pivoted = tg.eq + t >= m;
        if (pivoted) {
          const std::size_t p = m - 1 - tg.eq;
          CHECK(tg.j <= p);
          CHECK(tg.j >= (char2 ? 1u : 0u));
        } else {
          CHECK(tg.j < t);
        }
      }
      // Every unpivoted equation kills all j < t.
      for (std::size_t eq = 0; eq + t < m; ++eq)
        for (std::size_t j = 0; j < t; ++j)
          CHECK(seen.count({eq, j}) == 1);
    }
  }
  CHECK_THROWS(static_cast<void>(mq::cross_term_targets(5, 0, false)));
  CHECK_THROWS(static_cast<void>(mq::cross_term_targets(5, 5, false)));
}

TEST_CASE("expanded elementary transforms are unit-determinant shaped") {
  Rng rng(301);
  const Field f = Field::prime(7);
  const std::size_t n = 5;
  for (std::size_t t = 0; t < n; ++t) {
    Vec column(n);
    for (auto& v : column) v = f.random_element(rng);
    column[t] = 1;
    const Matrix e = mq::expand(mq::ElementaryTransform{t, column}, f);
    REQUIRE(e.rows() == n);
    REQUIRE(e.cols() == n);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(e(i, t) == column[i]);
      for (std::size_t j = 0; j < n; ++j)
        if (j != t) CHECK(e(i, j) == (i == j ? 1 : 0));
    }
    CHECK(mq::rref(e).rank == n);
  }
}

TEST_CASE("constraint probe reproduces the substituted coefficients") {
  Rng rng(307);
  for (const Field& f : {Field::prime(3), Field::binary(2), Field::prime(7)}) {
    CAPTURE(f.to_string());
    const std::size_t m = 3;
    const std::size_t n = 6;
    for (int round = 0; round < 10; ++round) {
      const MQSystem sys = mq::random_system(f, n, m, round % 2 == 0, rng);
      for (std::size_t t = 1; t < m; ++t) {
        const auto cons = mq::build_cross_term_constraints(sys, t);
        REQUIRE(cons.a.rows() == cons.targets.size());
        REQUIRE(cons.a.cols() == n - 1);
        // The affine map u -> coefficient is A u - b; check at a random u.
        Vec u(n - 1);
        for (auto& v : u) v = f.random_element(rng);
        const MQSystem sub = mq::substitute(
            sys, mq::expand(mq::ElementaryTransform{t, assemble_column(n, t, u)}, f));
        const Vec au = mq::mat_vec(cons.a, u);
        for (std::size_t r = 0; r < cons.targets.size(); ++r) {
          const auto& tg = cons.targets[r];
          CHECK(sub.polys[tg.eq].quad(tg.j, t) == f.sub(au[r], cons.b[r]));
        }
      }
    }
  }
}

TEST_CASE("apply_step kills every targeted coefficient") {
  Rng rng(311);
  for (const Field& f : {Field::prime(7), Field::binary(4)}) {
    const std::size_t m = 3;
    const std::size_t n = 7;
    const MQSystem sys = mq::random_system(f, n, m, false, rng);
    for (std::size_t t = 1; t < m; ++t) {
      const auto cons = mq::build_cross_term_constraints(sys, t);
      const auto lsr = mq::solve_linear(cons.a, cons.b);
      REQUIRE(lsr.consistent);
      const auto [next, et] = mq::apply_step(sys, t, *lsr.particular);
      for (const auto& tg : cons.targets) CHECK(next.polys[tg.eq].quad(tg.j, t) == 0);
      CHECK(et.column[t] == 1);
      // The step is a pure substitution by the expanded transform.
      CHECK(next == mq::substitute(sys, mq::expand(et, f)));
    }
  }
}

TEST_CASE("a conforming system admits the zero step solution") {
  Rng rng(313);
  const Field f = Field::prime(7);
  const std::size_t m = 3;
  const std::size_t n = 6;
  const std::size_t t = 1;
  MQSystem sys = mq::random_system(f, n, m, false, rng);
  for (const auto& tg : mq::cross_term_targets(m, t, f.characteristic() == 2))
    sys.polys[tg.eq].quad(tg.j, t) = 0;
  const auto cons = mq::build_cross_term_constraints(sys, t);
  for (const Elem v : cons.b) CHECK(v == 0);
  const auto [next, et] = mq::apply_step(sys, t, Vec(n - 1, 0));
  CHECK(next == sys);  // identity transform
}

TEST_CASE("pivot elimination with known multipliers") {
  // Three equations over GF(7) with x1^2 coefficients 2, 4, 3. The pivot row
  // is the last position; multipliers are 2/3 = 3 and 4/3 = 6.
  const Field f = Field::prime(7);
  MQSystem sys = zero_system(f, 3, 3);
  sys.polys[0].quad(0, 0) = 2;
  sys.polys[1].quad(0, 0) = 4;
  sys.polys[2].quad(0, 0) = 3;
  sys.polys[0].lin[1] = 1;
  sys.polys[2].lin[1] = 2;
  sys.polys[0].constant = 4;
  sys.polys[2].constant = 1;

  const auto elim = mq::eliminate_diagonal(sys, 0);
  REQUIRE(elim.has_value());
  const auto& [out, rec] = *elim;
  CHECK(rec.pivot_position == 2);
  CHECK(!rec.swapped.has_value());
  CHECK(rec.multipliers == Vec{3, 6});
  CHECK(out.polys[0].quad(0, 0) == 0);
  CHECK(out.polys[1].quad(0, 0) == 0);
  CHECK(out.polys[2].quad(0, 0) == 3);
  // Linear and constant parts are combined with the same multipliers.
  CHECK(out.polys[0].lin[1] == f.sub(1, f.mul(3, 2)));
  CHECK(out.polys[0].constant == f.sub(4, f.mul(3, 1)));
  // Row combinations preserve the solution set.
  for (const auto& x : mqtest::all_points(f, 3))
    CHECK(mq::is_solution(sys, x) == mq::is_solution(out, x));
}

TEST_CASE("pivot elimination swaps in the lowest candidate") {
  const Field f = Field::prime(7);
  MQSystem sys = zero_system(f, 3, 3);
  sys.polys[0].quad(0, 0) = 5;  // only candidate; pivot position holds zero
  const auto elim = mq::eliminate_diagonal(sys, 0);
  REQUIRE(elim.has_value());
  REQUIRE(elim->second.swapped.has_value());
  CHECK(*elim->second.swapped == std::pair<std::size_t, std::size_t>{0, 2});
  CHECK(elim->first.polys[2].quad(0, 0) == 5);
}

TEST_CASE("pivot elimination reports a degenerate column") {
  const Field f = Field::prime(7);
  CHECK(!mq::eliminate_diagonal(zero_system(f, 3, 3), 0).has_value());
}

TEST_CASE("applicability predicate and bounds") {
  CHECK(mq::applicability_ok(10, 4));
  CHECK(!mq::applicability_ok(9, 4));
  CHECK(mq::applicability_ok(1, 1));
  CHECK(mq::applicability_ok(1275, 50));
  CHECK(!mq::applicability_ok(1274, 50));

  Rng rng(317);
  const Field f = Field::prime(7);
  RetryPolicy policy;
  CHECK_THROWS_AS(
      static_cast<void>(mq::triangularize(mq::random_system(f, 9, 4, false, rng), policy, rng)),
      mq::ApplicabilityError);
  // Not underdefined: n <= m.
  CHECK_THROWS_AS(
      static_cast<void>(mq::triangularize(mq::random_system(f, 1, 1, false, rng), policy, rng)),
      mq::ApplicabilityError);
}

TEST_CASE("threshold table values") {
  const auto r50 = mq::thresholds_table(50);
  CHECK(r50.this_algo == 1275);
  CHECK(r50.miura == 1325);
  CHECK(r50.kipnis == 2550);
  CHECK(r50.courtois_even == 2550);

  CHECK(mq::thresholds_table(25).courtois_odd == 310);
  CHECK(mq::thresholds_table(25).this_algo == 325);
  CHECK(mq::thresholds_table(26).courtois_odd == 355);
  CHECK(mq::thresholds_table(26).this_algo == 351);

  const auto r1 = mq::thresholds_table(1);
  CHECK(r1.this_algo == 1);
  CHECK(r1.miura == 2);
  CHECK(r1.kipnis == 2);

  CHECK_THROWS(static_cast<void>(mq::thresholds_table(0)));
  CHECK_THROWS(static_cast<void>(mq::thresholds_table(257)));

  // Crossover: from m = 26 onward this requirement stays below the fitted
  // odd-characteristic curve; at m = 25 it does not.
  for (std::uint64_t m = 26; m <= 200; ++m) {
    const auto row = mq::thresholds_table(m);
    CHECK(row.this_algo < row.courtois_odd);
  }
  CHECK(mq::thresholds_table(25).this_algo >= mq::thresholds_table(25).courtois_odd);
}

TEST_CASE("triangularization yields the pivot pattern") {
  Rng rng(331);
  RetryPolicy policy;
  const std::vector<Field> fields = {Field::prime(7), Field::binary(4), Field::prime(13),
                                     Field::binary(2)};
  int successes = 0;
  for (const Field& f : fields) {
    CAPTURE(f.to_string());
    for (std::size_t m = 2; m <= 4; ++m) {
      const std::size_t n = m * (m + 1) / 2 + 2;
      for (int round = 0; round < 3; ++round) {
        const MQSystem base = mq::random_system(f, n, m, round % 2 == 0, rng);
        const Assignment target = mqtest::random_nonzero(f, n, rng);
        const MQSystem sys = mq::plant_solution(base, target);
        const auto tri = mq::triangularize(sys, policy, rng);
        ++successes;
        CHECK(mq::pivot_pattern_ok(tri.sys));
        REQUIRE(tri.betas.size() == m);
        for (std::size_t p = 0; p < m; ++p) {
          CHECK(tri.betas[p] != 0);
          CHECK(tri.sys.polys[m - 1 - p].quad(p, p) == tri.betas[p]);
        }
        CHECK(mq::rref(tri.transform).rank == n);
        // Diagonal elimination mixes equations linearly, so the reduced
        // system is not the plain substitution image; solutions still map
        // through the transform. Pull the planted point back and check it.
        const auto back = mq::solve_linear(tri.transform, target);
        REQUIRE(back.consistent);
        REQUIRE(back.particular.has_value());
        CHECK(mq::is_solution(tri.sys, *back.particular));
        CHECK(tri.preconditions_used <= policy.max_preconditions);
      }
    }
  }
  CHECK(successes == 4 * 3 * 3);
}

TEST_CASE("triangularization works at the exact variable threshold") {
  Rng rng(337);
  RetryPolicy policy;
  for (const Field& f : {Field::binary(4), Field::prime(7)}) {
    CAPTURE(f.to_string());
    for (std::size_t m = 2; m <= 4; ++m) {
      const std::size_t n = m * (m + 1) / 2;
      if (n <= m) continue;
      const MQSystem sys = mq::random_system(f, n, m, true, rng);
      const auto tri = mq::triangularize(sys, policy, rng);
      CHECK(mq::pivot_pattern_ok(tri.sys));
    }
  }
}

TEST_CASE("trace rows follow the characteristic-dependent schedule") {
  Rng rng(347);
  RetryPolicy policy;

  const auto check_schedule = [&](const Field& f, std::size_t m, std::size_t n) {
    const MQSystem sys = mq::random_system(f, n, m, false, rng);
    const auto tri = mq::triangularize(sys, policy, rng);
    const bool char2 = f.characteristic() == 2;
    std::size_t seen = 0;
    for (const auto& step : tri.trace.steps) {
      if (step.attempt != tri.trace.attempts || step.t == 0) continue;
      if (step.inconsistent || step.degenerate) continue;
      CHECK(step.constraint_rows == mq::cross_term_row_count(m, step.t, char2));
      CHECK(step.constraint_rank <= step.constraint_rows);
      CHECK(step.multipliers == m - 1 - step.t);
      ++seen;
    }
    CHECK(seen == m - 1);
  };

  check_schedule(Field::prime(7), 4, 11);
  check_schedule(Field::binary(4), 4, 12);
}

TEST_CASE("solutions transport through the triangular transform") {
  Rng rng(349);
  RetryPolicy policy;
  const Field f = Field::prime(7);
  const std::size_t m = 3;
  const std::size_t n = 7;
  Assignment s(n);
  for (auto& v : s) v = f.random_element(rng);
  const MQSystem sys = mq::plant_solution(mq::random_system(f, n, m, false, rng), s);
  const auto tri = mq::triangularize(sys, policy, rng);

  // y* = transform^-1 s solves the triangular system.
  const auto lsr = mq::solve_linear(tri.transform, s);
  REQUIRE(lsr.consistent);
  REQUIRE(lsr.nullspace_basis.empty());
  CHECK(mq::is_solution(tri.sys, *lsr.particular));
}

TEST_CASE("pattern check rejects a perturbed triangular form") {
  Rng rng(353);
  RetryPolicy policy;
  const Field f = Field::binary(4);
  const MQSystem sys = mq::random_system(f, 8, 3, false, rng);
  auto tri = mq::triangularize(sys, policy, rng);
  REQUIRE(mq::pivot_pattern_ok(tri.sys));
  // Equation at position 0 has pivot m-1; its (0,0) entry must be zero.
  tri.sys.polys[0].quad(0, 0) = 1;
  CHECK(!mq::pivot_pattern_ok(tri.sys));
}

TEST_CASE("reduction failure carries a trace") {
  // All-zero quadratic parts stay zero under any preconditioner, so every
  // attempt hits a degenerate pivot and the budget runs out.
  Rng rng(359);
  const Field f = Field::prime(7);
  MQSystem sys = zero_system(f, 4, 2);
  sys.polys[0].lin[0] = 1;  // keep it from being trivially empty
  try {
    static_cast<void>(mq::triangularize(sys, RetryPolicy{2, false}, rng));
    FAIL_CHECK("expected ReductionFailedError");
  } catch (const mq::ReductionFailedError& e) {
    CHECK(!e.trace_log().empty());
    CHECK(std::string(e.what()).find("triangularization failed") != std::string::npos);
  }
}
