#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "mqsolve/reducer.hpp"

namespace mq {

// After triangularization the remaining work is: fix the tail variables
// x_m..x_{n-1} so that, in every equation, each not-yet-solved variable's
// total coefficient vanishes; guess x_0; then walk the equations from the
// most constrained down, each reducing to a univariate quadratic in its pivot
// variable; finally check the last equation, whose pivot is the guessed x_0.
//
// The tail constraints form one linear system A v = b with m(m-1)/2 rows
// (equation position i = 0..m-2 contributes rows for variables j = 1..m-1-i)
// over the n-m tail variables: the row is the equation's quadratic couplings
// of x_j to the tail, and b is the negated linear coefficient of x_j, so the
// kill covers inhomogeneous systems too (b = 0 exactly for homogeneous
// input). Tail draws are particular + random nullspace combination.

enum class GuessOrder {
  kSequential,  // canonical order 0, 1, ..., q-1
  kRandom,      // uniform permutation, no replacement
};

struct SolveConfig {
  GuessOrder guess_order = GuessOrder::kSequential;
  std::size_t tail_resamples_per_guess = 4;
  std::size_t precondition_retries = 8;
  std::uint64_t seed = 0;
  // Reject the all-zero solution; defaults to true for homogeneous input,
  // false otherwise. A homogeneous solve with this forced off returns the
  // trivial zero solution immediately.
  std::optional<bool> require_nonzero;
  std::size_t threads = 1;
};

enum class Outcome { kSolution, kExhausted, kReductionFailed };

std::string to_string(Outcome outcome);

struct SolveReport {
  Outcome outcome = Outcome::kExhausted;
  std::optional<Assignment> solution;  // original coordinates
  bool verified = false;               // solution re-checked against the input system
  std::uint64_t seed = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  std::size_t threads = 1;
  std::uint64_t guesses_tried = 0;
  std::uint64_t tail_resamples = 0;
  std::uint64_t univariate_calls = 0;
  std::uint64_t sqrt_failures = 0;  // univariate solves that had no roots
  std::uint64_t gamma_zero_calls = 0;
  std::uint64_t gamma_zero_with_root = 0;
  std::size_t preconditions_used = 0;
  double wall_ms = 0.0;

  // One key=value per line, fixed key order. Timing is excluded by default so
  // fixed-seed runs serialize byte-identically.
  std::string to_kv(bool include_timing = false) const;
};

struct TailSystem {
  Matrix a;  // m(m-1)/2 rows, n-m columns
  Vec b;     // negated linear coefficients; zero for homogeneous systems
};

TailSystem extract_tail_system(const TriangularizedSystem& tri);

struct TailSolution {
  Vec values;  // length n-m
  std::size_t nullspace_dim = 0;
};

// Draw from the affine solution space of the tail system. The solved form
// must be consistent (homogeneous systems always are).
TailSolution sample_tail(const LinearSolveResult& solved, const Field& field, Rng& rng);
TailSolution sample_tail(const TailSystem& ts, Rng& rng);

struct BackSubStats {
  std::uint64_t univariate_calls = 0;
  std::uint64_t no_root = 0;
  std::uint64_t gamma_zero_calls = 0;
  std::uint64_t gamma_zero_with_root = 0;
};

// Depth-first walk over the per-level univariate roots in canonical order,
// full backtracking; the last equation decides acceptance. Returns the full
// assignment in triangularized coordinates, or nullopt when every root chain
// fails verification. Throws std::logic_error if an equation fails to reduce
// to a univariate quadratic (broken pivot-purity invariant).
std::optional<Assignment> back_substitute(const TriangularizedSystem& tri, Elem guess,
                                          const Vec& tail_values, BackSubStats& stats);

// Maps a solution of the triangularized system back to input coordinates:
// x = transform * y.
Assignment recover_original(const Matrix& transform, const Assignment& y);

// Full pipeline: triangularize (with precondition retries), constrain the
// tail, sweep guesses x_0 = c with tail resampling, back-substitute, map any
// hit back through the transform and re-verify against the input system.
// After exhausting all q guesses the solver re-preconditions and retries
// while the precondition budget lasts. Throws ApplicabilityError when
// n < m(m+1)/2 or n <= m.
SolveReport solve(const MQSystem& sys, const SolveConfig& cfg);

}  // namespace mq
