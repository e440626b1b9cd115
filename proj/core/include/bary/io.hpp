#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bary/measure.hpp"
#include "bary/transport.hpp"

namespace bary {

namespace iodetail {

/// Splits a line into whitespace-separated fields, dropping '#' comments.
std::vector<std::string> fields_of_line(const std::string& line);

[[noreturn]] void line_error(std::size_t line_no, const std::string& what);

}  // namespace iodetail

/// Measure file format: a `d <dim>` header line, then one `<mass> <c1> ...
/// <cd>` line per atom. Numbers are decimals or p/q rationals; `#` starts a
/// comment. Masses off 1 by at most 1e-6 are renormalized, anything worse is
/// rejected.
template <class T>
Measure<T> parse_measure(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::size_t dim = 0;
  bool have_dim = false;
  std::vector<Atom<T>> atoms;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> f = iodetail::fields_of_line(line);
    if (f.empty()) continue;
    if (!have_dim) {
      if (f.size() != 2 || f[0] != "d")
        iodetail::line_error(line_no, "expected header 'd <dim>'");
      try {
        dim = std::stoul(f[1]);
      } catch (const std::exception&) {
        iodetail::line_error(line_no, "bad dimension '" + f[1] + "'");
      }
      if (dim < 1) iodetail::line_error(line_no, "dimension must be at least 1");
      have_dim = true;
      continue;
    }
    if (f.size() != dim + 1)
      iodetail::line_error(line_no, "expected <mass> and " + std::to_string(dim) +
                                        " coordinates, got " + std::to_string(f.size()) +
                                        " fields");
    T mass;
    std::vector<T> coords;
    coords.reserve(dim);
    try {
      mass = parse_number<T>(f[0]);
      for (std::size_t t = 1; t <= dim; ++t) coords.push_back(parse_number<T>(f[t]));
    } catch (const data_error& e) {
      iodetail::line_error(line_no, e.what());
    }
    if (!num<T>::is_positive(mass)) iodetail::line_error(line_no, "nonpositive mass");
    atoms.push_back({Point<T>(std::move(coords)), std::move(mass)});
  }
  if (!have_dim) throw data_error("measure file has no header line");
  if (atoms.empty()) throw data_error("measure file has no atoms");

  T sum = T(0);
  for (const auto& a : atoms) sum += a.mass;
  if (!num<T>::eq(sum, T(1))) {
    T gap = sum - T(1);
    if (num<T>::is_negative(gap)) gap = -gap;
    if (gap * T(1000000) > T(1))
      throw data_error("masses sum to " + format_number(sum) + ", not 1");
    for (auto& a : atoms) a.mass /= sum;
  }
  return Measure<T>(std::move(atoms));
}

template <class T>
Measure<T> parse_measure_text(const std::string& text) {
  std::istringstream in(text);
  return parse_measure<T>(in);
}

template <class T>
void write_measure(std::ostream& out, const Measure<T>& measure) {
  out << "d " << measure.dim() << "\n";
  for (const auto& a : measure.atoms()) {
    out << format_number(a.mass);
    for (std::size_t t = 0; t < measure.dim(); ++t) out << " " << format_number(a.point[t]);
    out << "\n";
  }
}

template <class T>
std::string measure_to_text(const Measure<T>& measure) {
  std::ostringstream out;
  write_measure(out, measure);
  return out.str();
}

/// Transport file format: a `N <n>` header, then `i j k <mass>` lines with
/// 0-based indices (measure, source atom, target atom).
template <class T>
void write_transport(std::ostream& out, const TransportPlan<T>& plan) {
  out << "N " << plan.targets().size() << "\n";
  for (const auto& f : plan.flows())
    out << f.measure << " " << f.source_atom << " " << f.target_atom << " "
        << format_number(f.mass) << "\n";
}

template <class T>
TransportPlan<T> parse_transport(std::istream& in, const Measure<T>& source,
                                 const std::vector<Measure<T>>& targets) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<Flow<T>> flows;
  while (std::getline(in, line)) {
    ++line_no;
    std::vector<std::string> f = iodetail::fields_of_line(line);
    if (f.empty()) continue;
    if (!have_header) {
      if (f.size() != 2 || f[0] != "N")
        iodetail::line_error(line_no, "expected header 'N <count>'");
      std::size_t n = 0;
      try {
        n = std::stoul(f[1]);
      } catch (const std::exception&) {
        iodetail::line_error(line_no, "bad measure count '" + f[1] + "'");
      }
      if (n != targets.size())
        iodetail::line_error(line_no, "transport is for " + std::to_string(n) +
                                          " measures, expected " +
                                          std::to_string(targets.size()));
      have_header = true;
      continue;
    }
    if (f.size() != 4) iodetail::line_error(line_no, "expected 'i j k <mass>'");
    std::size_t i, j, k;
    T mass;
    try {
      i = std::stoul(f[0]);
      j = std::stoul(f[1]);
      k = std::stoul(f[2]);
      mass = parse_number<T>(f[3]);
    } catch (const data_error& e) {
      iodetail::line_error(line_no, e.what());
    } catch (const std::exception&) {
      iodetail::line_error(line_no, "bad index");
    }
    if (i >= targets.size()) iodetail::line_error(line_no, "measure index out of range");
    if (j >= source.size()) iodetail::line_error(line_no, "source atom index out of range");
    if (k >= targets[i].size()) iodetail::line_error(line_no, "target atom index out of range");
    if (!num<T>::is_positive(mass)) iodetail::line_error(line_no, "nonpositive flow mass");
    flows.push_back({i, j, k, std::move(mass)});
  }
  if (!have_header) throw data_error("transport file has no header line");
  return TransportPlan<T>(source, targets, std::move(flows));
}

}  // namespace bary
