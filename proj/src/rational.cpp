#include "adauction/rational.hpp"

#include <cctype>
#include <ostream>
#include <stdexcept>

namespace adauction {

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

[[noreturn]] void bad_number(std::string_view text) {
  throw std::invalid_argument("not a rational number: '" + std::string(text) + "'");
}

}  // namespace

Rat::Rat(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rat& Rat::operator/=(const Rat& o) {
  if (o.is_zero()) throw std::invalid_argument("rational division by zero");
  v_ /= o.v_;
  return *this;
}

Rat Rat::parse(std::string_view text) {
  std::string_view s = text;
  bool negative = false;
  if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (s.empty()) bad_number(text);

  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    std::string_view num = s.substr(0, slash);
    std::string_view den = s.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) bad_number(text);
    mpz_class n, d;
    if (mpz_set_str(n.get_mpz_t(), std::string(num).c_str(), 10) != 0) bad_number(text);
    if (mpz_set_str(d.get_mpz_t(), std::string(den).c_str(), 10) != 0) bad_number(text);
    if (d == 0) bad_number(text);
    mpq_class q(n, d);
    q.canonicalize();
    if (negative) q = -q;
    return Rat(q);
  }

  // Decimal form with optional fraction part and exponent.
  std::string digits;
  long scale = 0;  // value = digits * 10^scale
  std::size_t i = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) digits += s[i++];
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      digits += s[i++];
      --scale;
    }
  }
  if (digits.empty()) bad_number(text);
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    ++i;
    bool exp_neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) {
      exp_neg = s[i] == '-';
      ++i;
    }
    std::string_view exp = s.substr(i);
    if (!all_digits(exp) || exp.size() > 6) bad_number(text);
    long e = std::stol(std::string(exp));
    scale += exp_neg ? -e : e;
    i = s.size();
  }
  if (i != s.size()) bad_number(text);

  mpz_class n;
  if (mpz_set_str(n.get_mpz_t(), digits.c_str(), 10) != 0) bad_number(text);
  mpq_class q;
  if (scale >= 0) {
    mpz_class pow;
    mpz_ui_pow_ui(pow.get_mpz_t(), 10, static_cast<unsigned long>(scale));
    q = mpq_class(n * pow);
  } else {
    mpz_class pow;
    mpz_ui_pow_ui(pow.get_mpz_t(), 10, static_cast<unsigned long>(-scale));
    q = mpq_class(n, pow);
    q.canonicalize();
  }
  if (negative) q = -q;
  return Rat(q);
}

std::string Rat::str() const {
  if (v_.get_den() == 1) return v_.get_num().get_str();
  return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::string Rat::decimal_str(int places) const {
  if (places < 0) throw std::invalid_argument("negative decimal places");
  mpz_class pow;
  mpz_ui_pow_ui(pow.get_mpz_t(), 10, static_cast<unsigned long>(places));
  // round(|v| * 10^places), half away from zero
  mpz_class num = abs(v_.get_num()) * pow;
  mpz_class den = v_.get_den();
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  if (2 * r >= den) q += 1;
  std::string body = q.get_str();
  if (places > 0) {
    if (body.size() <= static_cast<std::size_t>(places))
      body.insert(0, static_cast<std::size_t>(places) + 1 - body.size(), '0');
    body.insert(body.size() - static_cast<std::size_t>(places), ".");
  }
  if (sign() < 0 && q != 0) body.insert(0, "-");
  return body;
}

std::ostream& operator<<(std::ostream& os, const Rat& r) { return os << r.str(); }

}  // namespace adauction
