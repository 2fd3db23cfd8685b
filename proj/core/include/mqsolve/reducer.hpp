#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mqsolve/errors.hpp"
#include "mqsolve/system.hpp"

namespace mq {

// Triangularization: a sequence of variable substitutions and equation
// combinations that leaves the system in a nested form solvable by guessing
// one variable. With equations listed by position k = 0..m-1, the final form
// gives position k the pivot variable x_p, p = m-1-k: its quadratic part on
// the first m variables is beta_p * x_p^2 plus terms x_j x_l with j > p only,
// and every first-m variable couples to the tail variables x_m..x_{n-1}
// through linear forms that the solver later constrains.
//
// Indices below are 0-based. Step t (variable index t) kills the cross terms
// x_j x_t: for not-yet-pivoted equations (positions 0..m-1-t) all j < t; for
// an already-pivoted equation with pivot p < t, all 1 <= j <= p in
// characteristic 2 and all 0 <= j <= p otherwise. The j = 0 coefficient in a
// pivoted equation sits between the guessed variable and an already-solved one
// at back-substitution time, so it folds into the constant term and never has
// to vanish. Dropping it matters in characteristic 2: there the probe matrix
// is alternating (substituting into x_j^2 contributes a factor 2 to x_j x_t),
// so every column cleared by earlier steps is dead as a probe direction and
// step t has only n-1-t usable columns. Keeping only the required targets
// makes every step system solvable exactly when n >= m(m+1)/2; in odd
// characteristic the 2*beta diagonal entries keep all n-1 columns alive and
// the full kill list fits as well. The kill is done by substituting an
// elementary transform that differs from the identity only in column t, whose
// entries are found by solving a linear system; then the (t,t) diagonal is
// eliminated against the pivot row.

// Identity except for column t; column[t] == 1, so the determinant is 1 and
// the transform is always invertible.
struct ElementaryTransform {
  std::size_t t = 0;
  Vec column;
};

Matrix expand(const ElementaryTransform& et, const Field& field);

struct PivotElimination {
  std::size_t t = 0;
  std::size_t pivot_position = 0;  // equation position holding the pivot row
  std::optional<std::pair<std::size_t, std::size_t>> swapped;
  Vec multipliers;  // per position 0..pivot_position-1
};

struct CrossTermTarget {
  std::size_t eq = 0;  // equation position
  std::size_t j = 0;   // kill coefficient of x_j x_t
  bool operator==(const CrossTermTarget&) const = default;
};

// The designated (equation, variable) pairs whose x_j x_t coefficients step t
// must kill. Size == (m-t)t + t(t+1)/2 in odd characteristic, which equals
// the 1-based-step formula (m-s+1)(s-1) + s(s-1)/2 at s = t+1; characteristic
// 2 skips the j = 0 target in pivoted equations, giving (m-t)t + t(t-1)/2.
std::vector<CrossTermTarget> cross_term_targets(std::size_t m, std::size_t t, bool char2);
std::size_t cross_term_row_count(std::size_t m, std::size_t t, bool char2);

struct CrossTermConstraints {
  std::size_t t = 0;
  Matrix a;  // rows x (n-1); unknown k is column-t entry of variable (k < t ? k : k+1)
  Vec b;
  std::vector<CrossTermTarget> targets;
};

// Builds the constraint system by probing: the coefficient of x_j x_t after
// substitution is affine in the transform column, so evaluating it at the
// zero vector (-> b, negated) and at each unit vector (-> columns of A)
// recovers it exactly. A solution a of A a = b zeroes every target.
CrossTermConstraints build_cross_term_constraints(const MQSystem& sys, std::size_t t);

// Substitutes the elementary transform assembled from a solution of the step-t
// constraint system and checks the targeted coefficients actually vanished.
std::pair<MQSystem, ElementaryTransform> apply_step(const MQSystem& sys, std::size_t t,
                                                    const Vec& solution);

// Makes (t,t) nonzero only in the pivot row (position m-1-t), swapping in the
// lowest-index candidate equation if needed, then subtracts multiples of the
// pivot row. Linear and constant parts are combined with the same
// multipliers, so the solution set is preserved for inhomogeneous systems.
// Returns nullopt when every candidate (t,t) entry is zero (degenerate pivot;
// the caller retries with a fresh preconditioner).
std::optional<std::pair<MQSystem, PivotElimination>> eliminate_diagonal(const MQSystem& sys,
                                                                        std::size_t t);

struct StepRecord {
  std::size_t attempt = 0;
  std::size_t t = 0;
  std::size_t constraint_rows = 0;
  std::size_t constraint_rank = 0;
  bool inconsistent = false;
  bool degenerate = false;
  bool swapped = false;
  std::size_t swap_from = 0;
  std::size_t swap_to = 0;
  std::size_t multipliers = 0;
};

struct ReduceTrace {
  std::size_t attempts = 0;
  std::vector<StepRecord> steps;
  std::string to_string() const;
};

struct TriangularizedSystem {
  MQSystem sys;      // triangular form; solutions are transform^-1 * (solutions of input)
  Matrix transform;  // x = transform * y, preconditioner included
  Vec betas;         // betas[p] = beta coefficient of pivot variable x_p, all nonzero
  std::size_t preconditions_used = 0;
  ReduceTrace trace;
};

struct RetryPolicy {
  std::size_t max_preconditions = 8;
  // Start from a random transform instead of the identity (used when a
  // previous triangularization of the same system must not be repeated).
  bool precondition_first = false;
};

// Whole pipeline with retries. On a degenerate pivot or an inconsistent
// constraint system the ORIGINAL system is preconditioned with a fresh random
// invertible transform (composed into the returned transform) and reduction
// restarts, up to the retry budget. Throws ApplicabilityError when
// n < m(m+1)/2 or n <= m, ReductionFailedError when the budget is exhausted.
TriangularizedSystem triangularize(const MQSystem& sys, const RetryPolicy& policy, Rng& rng);

// Structural zero-pattern check of the triangular form (asserted internally
// after every successful reduction, reusable by tests). The equation with
// pivot x_p must have quad(p,p) != 0 and zeros at every (j,l), j <= l < m,
// with j <= p, except (p,p) itself; in characteristic 2 the entries (0,l)
// with l > p are exempt, matching the reduced kill list.
bool pivot_pattern_ok(const MQSystem& sys);

// Applicability predicate n >= m(m+1)/2.
bool applicability_ok(std::uint64_t n, std::uint64_t m);

// Minimal n each algorithm needs to run, per published analyses.
struct ThresholdRow {
  std::uint64_t this_algo;       // m(m+1)/2
  std::uint64_t miura;           // m(m+3)/2
  std::uint64_t kipnis;          // m(m+1)
  std::uint64_t courtois_even;   // m(m+1)
  std::uint64_t courtois_odd;    // ceil(2^(m/7) (m+1))
};

ThresholdRow thresholds_table(std::uint64_t m);

}  // namespace mq
