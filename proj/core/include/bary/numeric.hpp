#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <gmpxx.h>

namespace bary {

/// Exact rational scalar. The default arithmetic mode of the library; every
/// operation on Rat values is exact.
using Rat = mpq_class;

struct data_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct cap_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct solver_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Relative comparison tolerance used by all double-mode comparisons.
/// Per-thread so concurrent computations with different settings don't race.
double& float_tolerance();

/// Comparison helpers for the two arithmetic modes. Rational comparisons are
/// exact; double comparisons are relative with threshold float_tolerance().
template <class T>
struct num;

template <>
struct num<Rat> {
  static bool eq(const Rat& a, const Rat& b) { return a == b; }
  static bool is_zero(const Rat& a) { return sgn(a) == 0; }
  static bool is_positive(const Rat& a) { return sgn(a) > 0; }
  static bool is_negative(const Rat& a) { return sgn(a) < 0; }
  static Rat from_fraction(long p, long q) {
    Rat r(p, q);
    r.canonicalize();
    return r;
  }
  static double to_double(const Rat& a) { return a.get_d(); }
};

template <>
struct num<double> {
  static bool eq(double a, double b) {
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= float_tolerance() * scale;
  }
  static bool is_zero(double a) { return std::fabs(a) <= float_tolerance(); }
  static bool is_positive(double a) { return a > float_tolerance(); }
  static bool is_negative(double a) { return a < -float_tolerance(); }
  static double from_fraction(long p, long q) {
    return static_cast<double>(p) / static_cast<double>(q);
  }
  static double to_double(double a) { return a; }
};

/// Parses "p/q", integers, plain decimals ("0.25") and decimals with a
/// ten-exponent ("2.5e-3") into an exact rational. Throws data_error on
/// malformed input or a zero denominator.
Rat parse_rational(const std::string& text);

/// Parses a number in the active representation of T.
template <class T>
T parse_number(const std::string& text);

template <>
inline Rat parse_number<Rat>(const std::string& text) {
  return parse_rational(text);
}
template <>
double parse_number<double>(const std::string& text);

/// Canonical text form: "p/q" for non-integers, "p" for integers.
std::string format_number(const Rat& value);
/// Shortest round-trip decimal.
std::string format_number(double value);

}  // namespace bary
