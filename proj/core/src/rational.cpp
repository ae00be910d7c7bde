#include "nlgame/rational.hpp"

#include <cctype>
#include <cmath>

namespace nlgame {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  }
  if (s.empty()) throw ParseError("empty rational literal");

  auto slash = s.find('/');
  if (slash != std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal: " + text);
    if (q.get_den() == 0) throw ParseError("zero denominator: " + text);
    q.canonicalize();
    return q;
  }

  auto dot = s.find('.');
  if (dot == std::string::npos) {
    mpq_class q;
    if (q.set_str(s, 10) != 0) throw ParseError("bad rational literal: " + text);
    q.canonicalize();
    return q;
  }

  // Decimal literal: digits '.' digits -> integer / 10^k.
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  std::size_t frac_len = s.size() - dot - 1;
  bool neg = false;
  if (!digits.empty() && (digits[0] == '+' || digits[0] == '-')) {
    neg = digits[0] == '-';
    digits.erase(digits.begin());
  }
  if (digits.empty()) throw ParseError("bad rational literal: " + text);
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c)))
      throw ParseError("bad rational literal: " + text);
  }
  mpz_class num(digits, 10);
  mpz_class den = 1;
  for (std::size_t i = 0; i < frac_len; ++i) den *= 10;
  mpq_class q(neg ? mpz_class(-num) : num, den);
  q.canonicalize();
  return q;
}

std::string rational_to_string(const Rational& q) {
  Rational canon = q;
  canon.canonicalize();
  if (canon.get_den() == 1) return canon.get_num().get_str();
  return canon.get_num().get_str() + "/" + canon.get_den().get_str();
}

Rational rational_from_double(double x) {
  if (!std::isfinite(x)) throw ShapeError("non-finite value has no rational image");
  mpq_class q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

}  // namespace nlgame
