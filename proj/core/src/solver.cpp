#include "mqsolve/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <chrono>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <vector>

namespace mq {
namespace {

// Reduce the equation at the given position to alpha*x_p^2 + gamma*x_p = delta
// under a partial assignment. Every variable other than the pivot p must be
// either known or have a vanishing total coefficient; anything else means the
// triangular invariants are broken.
struct Univariate {
  Elem alpha = 0;
  Elem gamma = 0;
  Elem delta = 0;
};

Univariate reduce_to_pivot(const QuadraticPolynomial& poly, const Field& f, std::size_t p,
                           const std::vector<char>& known, const Assignment& y) {
  const std::size_t n = y.size();
  Univariate out;
  out.alpha = poly.quad(p, p);
  out.gamma = poly.lin[p];
  Elem acc = poly.constant;       // fully determined contribution
  Vec residual(n, 0);             // total coefficient of each unknown non-pivot variable
  bool two_unknowns = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const Elem c = poly.quad(i, j);
      if (c == 0 || (i == p && j == p)) continue;
      const bool ki = known[i] != 0;
      const bool kj = known[j] != 0;
      if (ki && kj) {
        acc = f.add(acc, f.mul(c, f.mul(y[i], y[j])));
      } else if (ki) {
        if (j == p) out.gamma = f.add(out.gamma, f.mul(c, y[i]));
        else residual[j] = f.add(residual[j], f.mul(c, y[i]));
      } else if (kj) {
        if (i == p) out.gamma = f.add(out.gamma, f.mul(c, y[j]));
        else residual[i] = f.add(residual[i], f.mul(c, y[j]));
      } else {
        two_unknowns = true;
      }
    }
    if (i == p) continue;
    const Elem l = poly.lin[i];
    if (l == 0) continue;
    if (known[i]) acc = f.add(acc, f.mul(l, y[i]));
    else residual[i] = f.add(residual[i], l);
  }
  if (two_unknowns) throw std::logic_error("back-substitution: quadratic term in two unknowns");
  for (std::size_t i = 0; i < n; ++i) {
    if (residual[i] != 0) throw std::logic_error("back-substitution: unknown variable with nonzero coefficient");
  }
  out.delta = f.neg(acc);
  return out;
}

bool back_substitute_level(const MQSystem& sys, std::size_t position, std::vector<char>& known,
                           Assignment& y, BackSubStats& stats) {
  const std::size_t m = sys.m();
  const Field& f = sys.field;
  if (position == m - 1) {
    // Pivot here is the guessed x_0, already assigned: the equation is a pure
    // consistency check.
    return evaluate(sys.polys[position], f, y) == 0;
  }
  const std::size_t p = m - 1 - position;
  const Univariate uv = reduce_to_pivot(sys.polys[position], f, p, known, y);
  ++stats.univariate_calls;
  const bool gamma_zero = uv.gamma == 0;
  if (gamma_zero) ++stats.gamma_zero_calls;
  const std::vector<Elem> roots = f.solve_univariate_quadratic(uv.alpha, uv.gamma, uv.delta);
  if (roots.empty()) {
    ++stats.no_root;
    return false;
  }
  if (gamma_zero) ++stats.gamma_zero_with_root;
  known[p] = 1;
  for (const Elem root : roots) {
    y[p] = root;
    if (back_substitute_level(sys, position + 1, known, y, stats)) return true;
  }
  known[p] = 0;
  y[p] = 0;
  return false;
}

}  // namespace

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::kSolution: return "solution";
    case Outcome::kExhausted: return "exhausted";
    case Outcome::kReductionFailed: return "reduction_failed";
  }
  return "unknown";
}

std::string SolveReport::to_kv(bool include_timing) const {
  std::ostringstream os;
  os << "outcome=" << to_string(outcome) << '\n';
  os << "verified=" << (verified ? 1 : 0) << '\n';
  os << "seed=" << seed << '\n';
  os << "n=" << n << '\n';
  os << "m=" << m << '\n';
  os << "threads=" << threads << '\n';
  os << "guesses_tried=" << guesses_tried << '\n';
  os << "tail_resamples=" << tail_resamples << '\n';
  os << "univariate_calls=" << univariate_calls << '\n';
  os << "sqrt_failures=" << sqrt_failures << '\n';
  os << "gamma_zero_calls=" << gamma_zero_calls << '\n';
  os << "gamma_zero_with_root=" << gamma_zero_with_root << '\n';
  os << "preconditions_used=" << preconditions_used << '\n';
  if (solution) {
    os << "solution=";
    for (std::size_t i = 0; i < solution->size(); ++i) {
      if (i) os << ' ';
      os << (*solution)[i];
    }
    os << '\n';
  }
  if (include_timing) os << "wall_ms=" << wall_ms << '\n';
  return os.str();
}

TailSystem extract_tail_system(const TriangularizedSystem& tri) {
  const MQSystem& sys = tri.sys;
  const Field& f = sys.field;
  const std::size_t n = sys.n;
  const std::size_t m = sys.m();
  assert(n > m);
  const std::size_t tail_cols = n - m;
  const std::size_t rows = m * (m - 1) / 2;
  TailSystem out{Matrix(f, rows, tail_cols), Vec(rows, 0)};
  std::size_t row = 0;
  for (std::size_t i = 0; i + 1 < m; ++i) {
    const QuadraticPolynomial& poly = sys.polys[i];
    const std::size_t p = m - 1 - i;
    for (std::size_t j = 1; j <= p; ++j) {
      for (std::size_t s = m; s < n; ++s) out.a(row, s - m) = poly.quad(j, s);
      out.b[row] = f.neg(poly.lin[j]);
      ++row;
    }
  }
  assert(row == rows);
  return out;
}

TailSolution sample_tail(const LinearSolveResult& solved, const Field& field, Rng& rng) {
  if (!solved.consistent || !solved.particular) {
    throw std::invalid_argument("sample_tail: tail system is inconsistent");
  }
  TailSolution out;
  out.values = *solved.particular;
  out.nullspace_dim = solved.nullspace_basis.size();
  for (const Vec& basis : solved.nullspace_basis) {
    const Elem c = field.random_element(rng);
    if (c == 0) continue;
    for (std::size_t i = 0; i < out.values.size(); ++i) {
      out.values[i] = field.add(out.values[i], field.mul(c, basis[i]));
    }
  }
  return out;
}

TailSolution sample_tail(const TailSystem& ts, Rng& rng) {
  const LinearSolveResult solved = solve_linear(ts.a, ts.b);
  return sample_tail(solved, ts.a.field(), rng);
}

std::optional<Assignment> back_substitute(const TriangularizedSystem& tri, Elem guess,
                                          const Vec& tail_values, BackSubStats& stats) {
  const MQSystem& sys = tri.sys;
  const std::size_t n = sys.n;
  const std::size_t m = sys.m();
  if (tail_values.size() != n - m) throw std::invalid_argument("back_substitute: tail size mismatch");
  std::vector<char> known(n, 0);
  Assignment y(n, 0);
  y[0] = guess;
  known[0] = 1;
  for (std::size_t i = m; i < n; ++i) {
    y[i] = tail_values[i - m];
    known[i] = 1;
  }
  if (back_substitute_level(sys, 0, known, y, stats)) return y;
  return std::nullopt;
}

Assignment recover_original(const Matrix& transform, const Assignment& y) {
  if (transform.cols() != y.size())
    throw std::invalid_argument("recover_original: dimension mismatch");
  return mat_vec(transform, y);
}

SolveReport solve(const MQSystem& sys, const SolveConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  const Field& f = sys.field;
  const std::size_t n = sys.n;
  const std::size_t m = sys.m();

  SolveReport report;
  report.seed = cfg.seed;
  report.n = n;
  report.m = m;
  report.threads = std::max<std::size_t>(1, cfg.threads);

  const bool homogeneous = sys.homogeneous();
  const bool require_nonzero = cfg.require_nonzero.value_or(homogeneous);
  if (homogeneous && !require_nonzero) {
    report.outcome = Outcome::kSolution;
    report.solution = Assignment(n, 0);
    report.verified = is_solution(sys, *report.solution);
    report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return report;
  }

  Rng master(cfg.seed);
  std::size_t preconds_used = 0;
  std::size_t round = 0;

  for (;;) {
    RetryPolicy policy;
    policy.max_preconditions = cfg.precondition_retries - preconds_used;
    policy.precondition_first = round > 0;
    if (round > 0 && policy.max_preconditions == 0) {
      report.outcome = Outcome::kExhausted;
      break;
    }

    std::optional<TriangularizedSystem> tri_opt;
    try {
      tri_opt = triangularize(sys, policy, master);
    } catch (const ReductionFailedError&) {
      report.preconditions_used = cfg.precondition_retries;
      report.outcome = Outcome::kReductionFailed;
      break;
    }
    const TriangularizedSystem& tri = *tri_opt;
    preconds_used += tri.preconditions_used;
    report.preconditions_used = preconds_used;

    const TailSystem ts = extract_tail_system(tri);
    const LinearSolveResult tail_solved = solve_linear(ts.a, ts.b);
    if (!tail_solved.consistent) {
      // Only possible for inhomogeneous input; a fresh preconditioner
      // reshuffles the tail couplings.
      if (preconds_used >= cfg.precondition_retries) {
        report.outcome = Outcome::kReductionFailed;
        break;
      }
      ++round;
      continue;
    }

    std::vector<Elem> guesses = f.all_elements();
    if (cfg.guess_order == GuessOrder::kRandom) master.shuffle(guesses);
    const std::size_t resamples =
        tail_solved.nullspace_basis.empty() ? 1 : std::max<std::size_t>(1, cfg.tail_resamples_per_guess);

    std::atomic<bool> found{false};
    std::optional<Assignment> winner;
    std::mutex winner_mu;
    std::atomic<std::uint64_t> guesses_tried{0};
    std::atomic<std::uint64_t> tail_resamples{0};
    BackSubStats total_stats;

    const auto try_guess = [&](Elem guess, BackSubStats& stats) -> bool {
      guesses_tried.fetch_add(1, std::memory_order_relaxed);
      for (std::size_t r = 0; r < resamples; ++r) {
        if (found.load(std::memory_order_relaxed)) return false;
        Rng draw(mix_seed(mix_seed(cfg.seed, round), mix_seed(guess, r)));
        const TailSolution tail = sample_tail(tail_solved, f, draw);
        tail_resamples.fetch_add(1, std::memory_order_relaxed);
        const std::optional<Assignment> y = back_substitute(tri, guess, tail.values, stats);
        if (!y) continue;
        Assignment x = recover_original(tri.transform, *y);
        if (require_nonzero && std::all_of(x.begin(), x.end(), [](Elem v) { return v == 0; })) continue;
        if (!is_solution(sys, x)) throw std::logic_error("solve: candidate failed verification");
        std::lock_guard<std::mutex> lock(winner_mu);
        if (!winner) winner = std::move(x);
        found.store(true, std::memory_order_relaxed);
        return true;
      }
      return false;
    };

    const std::size_t threads = std::min<std::size_t>(report.threads, guesses.size());
    if (threads <= 1) {
      for (const Elem guess : guesses) {
        if (try_guess(guess, total_stats)) break;
      }
    } else {
      std::vector<BackSubStats> per_thread(threads);
      std::vector<std::thread> pool;
      pool.reserve(threads);
      for (std::size_t w = 0; w < threads; ++w) {
        pool.emplace_back([&, w] {
          for (std::size_t g = w; g < guesses.size(); g += threads) {
            if (found.load(std::memory_order_relaxed)) return;
            try_guess(guesses[g], per_thread[w]);
          }
        });
      }
      for (std::thread& t : pool) t.join();
      for (const BackSubStats& s : per_thread) {
        total_stats.univariate_calls += s.univariate_calls;
        total_stats.no_root += s.no_root;
        total_stats.gamma_zero_calls += s.gamma_zero_calls;
        total_stats.gamma_zero_with_root += s.gamma_zero_with_root;
      }
    }

    report.guesses_tried += guesses_tried.load();
    report.tail_resamples += tail_resamples.load();
    report.univariate_calls += total_stats.univariate_calls;
    report.sqrt_failures += total_stats.no_root;
    report.gamma_zero_calls += total_stats.gamma_zero_calls;
    report.gamma_zero_with_root += total_stats.gamma_zero_with_root;

    if (winner) {
      report.outcome = Outcome::kSolution;
      report.solution = std::move(winner);
      report.verified = true;
      break;
    }
    if (preconds_used >= cfg.precondition_retries) {
      report.outcome = Outcome::kExhausted;
      break;
    }
    ++round;
  }

  report.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace mq
