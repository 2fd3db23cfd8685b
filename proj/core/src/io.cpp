#include "mqsolve/io.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <vector>

namespace mq {

namespace {

struct Line {
  std::size_t number = 0;
  std::vector<std::string> tokens;
};

std::vector<Line> tokenize(std::istream& in) {
  std::vector<Line> lines;
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream ss(raw);
    Line line{number, {}};
    std::string tok;
    while (ss >> tok) line.tokens.push_back(tok);
    if (!line.tokens.empty()) lines.push_back(std::move(line));
  }
  return lines;
}

std::uint64_t parse_uint(const Line& line, const std::string& tok, const char* what) {
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw ParseError(line.number, std::string("expected ") + what + ", got '" + tok + "'");
  return value;
}

// "key=<uint>" with a fixed expected key
std::uint64_t parse_kv(const Line& line, const std::string& tok, const std::string& key) {
  if (tok.size() <= key.size() + 1 || tok.compare(0, key.size(), key) != 0 ||
      tok[key.size()] != '=')
    throw ParseError(line.number, "expected " + key + "=<integer>, got '" + tok + "'");
  return parse_uint(line, tok.substr(key.size() + 1), key.c_str());
}

Elem parse_coeff(const Line& line, const std::string& tok, const Field& f) {
  const std::uint64_t v = parse_uint(line, tok, "coefficient");
  if (v >= f.order())
    throw ParseError(line.number, "coefficient " + tok + " out of range for " + f.to_string());
  return static_cast<Elem>(v);
}

std::size_t parse_index(const Line& line, const std::string& tok, std::size_t n) {
  const std::uint64_t v = parse_uint(line, tok, "variable index");
  if (v < 1 || v > n)
    throw ParseError(line.number, "variable index " + tok + " outside 1.." + std::to_string(n));
  return static_cast<std::size_t>(v - 1);
}

}  // namespace

void write_instance(const MQSystem& sys, std::ostream& out) {
  const Field& f = sys.field;
  out << "MQ 1\n";
  out << "field p=" << f.characteristic() << " e=" << f.degree();
  if (f.is_extension()) out << " mod=" << f.modulus();
  out << "\n";
  out << "vars " << sys.n << "\n";
  out << "eqs " << sys.m() << "\n";
  for (std::size_t k = 0; k < sys.m(); ++k) {
    const auto& poly = sys.polys[k];
    out << "eq " << (k + 1) << "\n";
    for (std::size_t i = 0; i < sys.n; ++i)
      for (std::size_t j = i; j < sys.n; ++j)
        if (poly.quad(i, j) != 0)
          out << "q " << (i + 1) << " " << (j + 1) << " " << poly.quad(i, j) << "\n";
    for (std::size_t i = 0; i < sys.n; ++i)
      if (poly.lin[i] != 0) out << "l " << (i + 1) << " " << poly.lin[i] << "\n";
    if (poly.constant != 0) out << "c " << poly.constant << "\n";
  }
}

void write_instance(const MQSystem& sys, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_instance(sys, out);
}

MQSystem parse_instance(std::istream& in) {
  const std::vector<Line> lines = tokenize(in);
  std::size_t at = 0;
  const auto next = [&]() -> const Line& {
    if (at >= lines.size())
      throw ParseError(lines.empty() ? 1 : lines.back().number, "unexpected end of file");
    return lines[at++];
  };

  {
    const Line& magic = next();
    if (magic.tokens.size() != 2 || magic.tokens[0] != "MQ" || magic.tokens[1] != "1")
      throw ParseError(magic.number, "expected header 'MQ 1'");
  }

  const Line& field_line = next();
  if (field_line.tokens.size() < 3 || field_line.tokens.size() > 4 ||
      field_line.tokens[0] != "field")
    throw ParseError(field_line.number, "expected 'field p=<p> e=<e> [mod=<m>]'");
  const std::uint64_t p = parse_kv(field_line, field_line.tokens[1], "p");
  const std::uint64_t e = parse_kv(field_line, field_line.tokens[2], "e");
  std::optional<std::uint32_t> modulus;
  if (field_line.tokens.size() == 4)
    modulus = static_cast<std::uint32_t>(parse_kv(field_line, field_line.tokens[3], "mod"));
  Field field = Field::prime(2);
  try {
    field = Field::make(static_cast<std::uint32_t>(p), static_cast<std::uint32_t>(e), modulus);
  } catch (const std::invalid_argument& ex) {
    throw ParseError(field_line.number, ex.what());
  }

  const Line& vars_line = next();
  if (vars_line.tokens.size() != 2 || vars_line.tokens[0] != "vars")
    throw ParseError(vars_line.number, "expected 'vars <n>'");
  const std::uint64_t n = parse_uint(vars_line, vars_line.tokens[1], "n");
  if (n == 0) throw ParseError(vars_line.number, "n must be >= 1");

  const Line& eqs_line = next();
  if (eqs_line.tokens.size() != 2 || eqs_line.tokens[0] != "eqs")
    throw ParseError(eqs_line.number, "expected 'eqs <m>'");
  const std::uint64_t m = parse_uint(eqs_line, eqs_line.tokens[1], "m");
  if (m == 0) throw ParseError(eqs_line.number, "m = 0: at least one equation required");

  MQSystem sys{field, static_cast<std::size_t>(n), {}};
  sys.polys.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const Line& eq_line = next();
    if (eq_line.tokens.size() != 2 || eq_line.tokens[0] != "eq")
      throw ParseError(eq_line.number, "expected 'eq " + std::to_string(k + 1) + "'");
    const std::uint64_t idx = parse_uint(eq_line, eq_line.tokens[1], "equation index");
    if (idx != k + 1)
      throw ParseError(eq_line.number, "equations must appear in order; expected eq " +
                                           std::to_string(k + 1));

    QuadraticPolynomial poly{Matrix(field, sys.n, sys.n), Vec(sys.n, 0), 0};
    std::set<std::pair<std::size_t, std::size_t>> seen_quad;
    std::set<std::size_t> seen_lin;
    bool seen_const = false;
    while (at < lines.size() && lines[at].tokens[0] != "eq") {
      const Line& line = lines[at++];
      const std::string& kind = line.tokens[0];
      if (kind == "q") {
        if (line.tokens.size() != 4)
          throw ParseError(line.number, "expected 'q <i> <j> <c>'");
        const std::size_t i = parse_index(line, line.tokens[1], sys.n);
        const std::size_t j = parse_index(line, line.tokens[2], sys.n);
        if (j < i)
          throw ParseError(line.number,
                           "lower-triangular index: need i <= j in 'q <i> <j> <c>'");
        if (!seen_quad.insert({i, j}).second)
          throw ParseError(line.number, "duplicate quadratic term for (" +
                                            std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                                            ")");
        poly.quad(i, j) = parse_coeff(line, line.tokens[3], field);
      } else if (kind == "l") {
        if (line.tokens.size() != 3) throw ParseError(line.number, "expected 'l <i> <c>'");
        const std::size_t i = parse_index(line, line.tokens[1], sys.n);
        if (!seen_lin.insert(i).second)
          throw ParseError(line.number,
                           "duplicate linear term for variable " + std::to_string(i + 1));
        poly.lin[i] = parse_coeff(line, line.tokens[2], field);
      } else if (kind == "c") {
        if (line.tokens.size() != 2) throw ParseError(line.number, "expected 'c <c>'");
        if (seen_const) throw ParseError(line.number, "duplicate constant term");
        seen_const = true;
        poly.constant = parse_coeff(line, line.tokens[1], field);
      } else {
        throw ParseError(line.number, "unknown directive '" + kind + "'");
      }
    }
    sys.polys.push_back(std::move(poly));
  }
  if (at < lines.size())
    throw ParseError(lines[at].number, "unexpected content after last equation");
  return sys;
}

MQSystem parse_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_instance(in);
}

void write_solution(const Assignment& x, std::ostream& out) {
  out << "sol";
  for (const Elem v : x) out << " " << v;
  out << "\n";
}

void write_solution(const Assignment& x, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  write_solution(x, out);
}

Assignment parse_solution(std::istream& in, std::size_t n, const Field& field) {
  const std::vector<Line> lines = tokenize(in);
  if (lines.empty()) throw ParseError(1, "missing 'sol' line");
  if (lines.size() > 1) throw ParseError(lines[1].number, "expected a single 'sol' line");
  const Line& line = lines[0];
  if (line.tokens[0] != "sol")
    throw ParseError(line.number, "expected 'sol <v_1> ... <v_n>'");
  if (line.tokens.size() != n + 1)
    throw ParseError(line.number, "expected " + std::to_string(n) + " values, got " +
                                      std::to_string(line.tokens.size() - 1));
  Assignment x(n, 0);
  for (std::size_t i = 0; i < n; ++i) x[i] = parse_coeff(line, line.tokens[i + 1], field);
  return x;
}

Assignment parse_solution_file(const std::string& path, std::size_t n, const Field& field) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return parse_solution(in, n, field);
}

}  // namespace mq
