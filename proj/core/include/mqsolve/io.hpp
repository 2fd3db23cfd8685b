#pragma once

#include <iosfwd>
#include <string>

#include "mqsolve/errors.hpp"
#include "mqsolve/system.hpp"

namespace mq {

// Line-oriented UTF-8 instance format ('#' starts a comment, blank lines are
// ignored, variable indices are 1-based):
//
//   MQ 1
//   field p=<p> e=<e> [mod=<integer>]      # mod present iff e > 1
//   vars <n>
//   eqs <m>
//   eq 1
//   q <i> <j> <c>                          # coefficient of x_i x_j, i <= j
//   l <i> <c>                              # linear coefficient of x_i
//   c <c>                                  # constant term
//   eq 2
//   ...
//
// Writers emit canonical output: terms in row-major upper-triangular order,
// zero coefficients omitted, so write/parse round-trips are byte-exact.
// Parsers throw ParseError with a 1-based line number on any violation
// (duplicate term lines included).

void write_instance(const MQSystem& sys, std::ostream& out);
void write_instance(const MQSystem& sys, const std::string& path);

MQSystem parse_instance(std::istream& in);
MQSystem parse_instance_file(const std::string& path);

// Solution files hold one line: sol <v_1> ... <v_n>.
void write_solution(const Assignment& x, std::ostream& out);
void write_solution(const Assignment& x, const std::string& path);

Assignment parse_solution(std::istream& in, std::size_t n, const Field& field);
Assignment parse_solution_file(const std::string& path, std::size_t n, const Field& field);

}  // namespace mq
