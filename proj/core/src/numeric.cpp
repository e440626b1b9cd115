#include "bary/numeric.hpp"

#include <charconv>
#include <cstdlib>

namespace bary {

double& float_tolerance() {
  thread_local double tol = 1e-9;
  return tol;
}

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// mpz_class(string) auto-detects octal/hex prefixes; force base 10.
mpz_class integer10(const std::string& s) {
  mpz_class v;
  if (mpz_set_str(v.get_mpz_t(), s.c_str(), 10) != 0)
    throw data_error("malformed integer: '" + s + "'");
  return v;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string s = text;
  bool negative = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    negative = s[0] == '-';
    s.erase(0, 1);
  }
  if (s.empty()) throw data_error("empty number: '" + text + "'");

  long exponent = 0;
  auto epos = s.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string etail = s.substr(epos + 1);
    s.erase(epos);
    try {
      exponent = std::stol(etail);
    } catch (const std::exception&) {
      throw data_error("bad exponent in number: '" + text + "'");
    }
  }

  Rat value;
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string p = s.substr(0, slash), q = s.substr(slash + 1);
    if (!all_digits(p) || !all_digits(q))
      throw data_error("malformed fraction: '" + text + "'");
    value = Rat(integer10(p), integer10(q));
    if (value.get_den() == 0) throw data_error("zero denominator: '" + text + "'");
    value.canonicalize();
  } else {
    auto dot = s.find('.');
    std::string digits = s;
    long frac_digits = 0;
    if (dot != std::string::npos) {
      frac_digits = static_cast<long>(s.size() - dot - 1);
      digits = s.substr(0, dot) + s.substr(dot + 1);
    }
    if (digits.empty()) digits = "0";
    if (!all_digits(digits)) throw data_error("malformed number: '" + text + "'");
    mpz_class den = 1;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, static_cast<unsigned long>(frac_digits));
    value = Rat(integer10(digits), den);
    value.canonicalize();
  }

  if (exponent != 0) {
    mpz_class pow10;
    mpz_ui_pow_ui(pow10.get_mpz_t(), 10,
                  static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent > 0)
      value *= Rat(pow10);
    else
      value /= Rat(pow10);
  }
  if (negative) value = -value;
  return value;
}

template <>
double parse_number<double>(const std::string& text) {
  // Route through the exact parser so "1/4" works in float mode too.
  return parse_rational(text).get_d();
}

std::string format_number(const Rat& value) {
  if (value.get_den() == 1) return value.get_num().get_str();
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string format_number(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

}  // namespace bary
