#include "mqsolve/reducer.hpp"

#include <cassert>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace mq {

namespace {

// poly -= c * other, all three parts
void subtract_scaled(QuadraticPolynomial& poly, const QuadraticPolynomial& other, Elem c,
                     const Field& f) {
  if (c == 0) return;
  const std::size_t n = poly.quad.rows();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Elem o = other.quad(i, j);
      if (o != 0) poly.quad(i, j) = f.sub(poly.quad(i, j), f.mul(c, o));
    }
  for (std::size_t i = 0; i < n; ++i)
    if (other.lin[i] != 0) poly.lin[i] = f.sub(poly.lin[i], f.mul(c, other.lin[i]));
  poly.constant = f.sub(poly.constant, f.mul(c, other.constant));
}

void require_step_index(const MQSystem& sys, std::size_t t, bool substitution_step) {
  const std::size_t lo = substitution_step ? 1 : 0;
  if (t < lo || t >= sys.m() || t >= sys.n)
    throw std::invalid_argument("step index t out of range");
}

}  // namespace

Matrix expand(const ElementaryTransform& et, const Field& field) {
  const std::size_t n = et.column.size();
  if (et.t >= n || et.column[et.t] != 1)
    throw std::invalid_argument("elementary transform column invalid");
  Matrix m = Matrix::identity(field, n);
  for (std::size_t i = 0; i < n; ++i) m(i, et.t) = et.column[i];
  return m;
}

std::vector<CrossTermTarget> cross_term_targets(std::size_t m, std::size_t t, bool char2) {
  std::vector<CrossTermTarget> targets;
  if (t == 0 || t >= m) throw std::invalid_argument("step index t out of range");
  targets.reserve(cross_term_row_count(m, t, char2));
  for (std::size_t i = 0; i < m; ++i) {
    // positions m-t..m-1 already hold pivot rows for variables m-1-i < t
    const bool pivoted = i + t >= m;
    const std::size_t jmin = (pivoted && char2) ? 1 : 0;
    const std::size_t jmax = pivoted ? m - 1 - i : t - 1;
    for (std::size_t j = jmin; j <= jmax; ++j) targets.push_back({i, j});
  }
  return targets;
}

std::size_t cross_term_row_count(std::size_t m, std::size_t t, bool char2) {
  return (m - t) * t + (char2 ? t * (t - 1) / 2 : t * (t + 1) / 2);
}

CrossTermConstraints build_cross_term_constraints(const MQSystem& sys, std::size_t t) {
  require_step_index(sys, t, true);
  const Field& f = sys.field;
  const std::size_t n = sys.n;
  const std::size_t m = sys.m();

  const bool char2 = f.characteristic() == 2;
  std::vector<CrossTermTarget> targets = cross_term_targets(m, t, char2);
  assert(targets.size() == cross_term_row_count(m, t, char2));

  CrossTermConstraints out{t, Matrix(f, targets.size(), n - 1), Vec(targets.size(), 0),
                           std::move(targets)};

  // probe at zero: the current coefficients (transform = identity)
  Vec base(out.targets.size(), 0);
  for (std::size_t row = 0; row < out.targets.size(); ++row) {
    const auto [eq, j] = out.targets[row];
    base[row] = sys.polys[eq].quad(j, t);
    out.b[row] = f.neg(base[row]);
  }

  // probe at each unit vector; unknown k is the column-t entry of variable var
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const std::size_t var = (k < t) ? k : k + 1;
    Vec column(n, 0);
    column[t] = 1;
    column[var] = 1;
    std::size_t row = 0;
    for (std::size_t eq = 0; eq < m; ++eq) {
      if (row >= out.targets.size() || out.targets[row].eq != eq) continue;
      const Matrix probed = congruence_transform_elementary(sys.polys[eq].quad, t, column);
      while (row < out.targets.size() && out.targets[row].eq == eq) {
        const std::size_t j = out.targets[row].j;
        out.a(row, k) = f.sub(probed(j, t), base[row]);
        ++row;
      }
    }
  }
  return out;
}

std::pair<MQSystem, ElementaryTransform> apply_step(const MQSystem& sys, std::size_t t,
                                                    const Vec& solution) {
  require_step_index(sys, t, true);
  if (solution.size() != sys.n - 1)
    throw std::invalid_argument("step solution must have n-1 entries");
  Vec column(sys.n, 0);
  column[t] = 1;
  for (std::size_t k = 0; k + 1 < sys.n; ++k) {
    const std::size_t var = (k < t) ? k : k + 1;
    column[var] = solution[k];
  }
  ElementaryTransform et{t, column};
  MQSystem out = substitute(sys, expand(et, sys.field));
  for (const auto& [eq, j] : cross_term_targets(sys.m(), t, sys.field.characteristic() == 2)) {
    if (out.polys[eq].quad(j, t) != 0)
      throw std::logic_error("cross-term kill failed at step " + std::to_string(t));
  }
  return {std::move(out), std::move(et)};
}

std::optional<std::pair<MQSystem, PivotElimination>> eliminate_diagonal(const MQSystem& sys,
                                                                        std::size_t t) {
  require_step_index(sys, t, false);
  const Field& f = sys.field;
  const std::size_t last = sys.m() - 1 - t;  // pivot position

  MQSystem out = sys;
  PivotElimination rec{t, last, std::nullopt, Vec(last, 0)};
  if (out.polys[last].quad(t, t) == 0) {
    std::size_t cand = last;
    for (std::size_t i = 0; i < last; ++i) {
      if (out.polys[i].quad(t, t) != 0) {
        cand = i;
        break;
      }
    }
    if (cand == last) return std::nullopt;  // degenerate pivot
    std::swap(out.polys[cand], out.polys[last]);
    rec.swapped = {cand, last};
  }
  const Elem pivot_inv = f.inv(out.polys[last].quad(t, t));
  for (std::size_t i = 0; i < last; ++i) {
    const Elem c = f.mul(out.polys[i].quad(t, t), pivot_inv);
    rec.multipliers[i] = c;
    subtract_scaled(out.polys[i], out.polys[last], c, f);
    assert(out.polys[i].quad(t, t) == 0);
  }
  return std::make_pair(std::move(out), std::move(rec));
}

std::string ReduceTrace::to_string() const {
  std::ostringstream out;
  out << "attempts=" << attempts << "\n";
  for (const auto& s : steps) {
    out << "attempt " << s.attempt << " step " << s.t << ":";
    if (s.t > 0) {
      out << " rows=" << s.constraint_rows << " rank=" << s.constraint_rank;
      if (s.inconsistent) out << " inconsistent";
    }
    if (s.degenerate) out << " degenerate-pivot";
    if (s.swapped) out << " swap=" << s.swap_from << "->" << s.swap_to;
    out << " multipliers=" << s.multipliers << "\n";
  }
  return out.str();
}

bool pivot_pattern_ok(const MQSystem& sys) {
  const std::size_t m = sys.m();
  if (sys.n < m) return false;
  const bool char2 = sys.field.characteristic() == 2;
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t p = m - 1 - k;
    const Matrix& quad = sys.polys[k].quad;
    if (quad(p, p) == 0) return false;
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t l = j; l < m; ++l) {
        if (j == p && l == p) continue;
        if (j > p) continue;  // nested block, unconstrained
        if (char2 && j == 0 && l > p) continue;  // guess-to-known pair, left alive
        if (quad(j, l) != 0) return false;
      }
    }
  }
  return true;
}

bool applicability_ok(std::uint64_t n, std::uint64_t m) {
  return n >= m * (m + 1) / 2;
}

ThresholdRow thresholds_table(std::uint64_t m) {
  if (m < 1 || m > 256) throw std::invalid_argument("m must be in [1, 256]");
  ThresholdRow row{};
  row.this_algo = m * (m + 1) / 2;
  row.miura = m * (m + 3) / 2;
  row.kipnis = m * (m + 1);
  row.courtois_even = m * (m + 1);
  const long double fitted = std::exp2(static_cast<long double>(m) / 7.0L) *
                             static_cast<long double>(m + 1);
  row.courtois_odd = static_cast<std::uint64_t>(std::ceil(fitted));
  return row;
}

TriangularizedSystem triangularize(const MQSystem& sys, const RetryPolicy& policy, Rng& rng) {
  const std::size_t n = sys.n;
  const std::size_t m = sys.m();
  if (m == 0) throw std::invalid_argument("system has no equations");
  if (!applicability_ok(n, m))
    throw ApplicabilityError("n = " + std::to_string(n) + " below the applicable range " +
                             "n >= m(m+1)/2 = " + std::to_string(m * (m + 1) / 2));
  if (n <= m)
    throw ApplicabilityError("system must be underdefined (n > m)");

  ReduceTrace trace;
  std::size_t preconditions = 0;
  for (std::size_t attempt = 0;; ++attempt) {
    const bool precondition = policy.precondition_first || attempt > 0;
    if (precondition && preconditions >= policy.max_preconditions)
      throw ReductionFailedError("triangularization failed after " +
                                     std::to_string(preconditions) + " preconditioned retries",
                                 trace.to_string());

    Matrix transform = Matrix::identity(sys.field, n);
    MQSystem work = sys;
    if (precondition) {
      ++preconditions;
      transform = random_invertible(sys.field, n, rng);
      work = substitute(sys, transform);
    }
    ++trace.attempts;

    const auto record_fail = [&](std::size_t t, bool degenerate, bool inconsistent,
                                 std::size_t rows, std::size_t rank) {
      StepRecord rec;
      rec.attempt = trace.attempts;
      rec.t = t;
      rec.constraint_rows = rows;
      rec.constraint_rank = rank;
      rec.degenerate = degenerate;
      rec.inconsistent = inconsistent;
      trace.steps.push_back(rec);
    };

    bool failed = false;
    for (std::size_t t = 0; t < m && !failed; ++t) {
      StepRecord rec;
      rec.attempt = trace.attempts;
      rec.t = t;
      if (t > 0) {
        const CrossTermConstraints cons = build_cross_term_constraints(work, t);
        assert(cons.a.cols() == n - 1 && cons.a.rows() <= n - 1);
        const LinearSolveResult lsr = solve_linear(cons.a, cons.b);
        rec.constraint_rows = cons.a.rows();
        rec.constraint_rank = lsr.rank;
        if (!lsr.consistent) {
          record_fail(t, false, true, cons.a.rows(), lsr.rank);
          failed = true;
          break;
        }
        auto [next, et] = apply_step(work, t, *lsr.particular);
        work = std::move(next);
        transform = mat_mul(transform, expand(et, sys.field));
      }
      auto elim = eliminate_diagonal(work, t);
      if (!elim) {
        record_fail(t, true, false, rec.constraint_rows, rec.constraint_rank);
        failed = true;
        break;
      }
      work = std::move(elim->first);
      const PivotElimination& pe = elim->second;
      rec.swapped = pe.swapped.has_value();
      if (pe.swapped) {
        rec.swap_from = pe.swapped->first;
        rec.swap_to = pe.swapped->second;
      }
      rec.multipliers = pe.multipliers.size();
      trace.steps.push_back(rec);
    }
    if (failed) continue;

    if (!pivot_pattern_ok(work))
      throw std::logic_error("triangular form failed its structural zero-pattern check");
    Vec betas(m, 0);
    for (std::size_t p = 0; p < m; ++p) {
      betas[p] = work.polys[m - 1 - p].quad(p, p);
      assert(betas[p] != 0);
    }
    return TriangularizedSystem{std::move(work), std::move(transform), std::move(betas),
                                preconditions, std::move(trace)};
  }
}

}  // namespace mq
