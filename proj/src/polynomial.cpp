#include "loopm/polynomial.hpp"

namespace loopm {

Monomial Monomial::var(const std::string& name, unsigned exponent) {
  Monomial m;
  if (exponent > 0) m.factors_.emplace_back(name, exponent);
  return m;
}

Monomial Monomial::from_factors(std::vector<Factor> factors) {
  std::sort(factors.begin(), factors.end());
  Monomial m;
  for (auto& f : factors) {
    if (f.second == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == f.first)
      m.factors_.back().second += f.second;
    else
      m.factors_.push_back(std::move(f));
  }
  return m;
}

unsigned Monomial::degree() const {
  unsigned d = 0;
  for (const auto& f : factors_) d += f.second;
  return d;
}

unsigned Monomial::degree(const std::string& name) const {
  for (const auto& f : factors_)
    if (f.first == name) return f.second;
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial out;
  out.factors_.reserve(factors_.size() + other.factors_.size());
  auto a = factors_.begin(), b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.emplace_back(a->first, a->second + b->second);
      ++a;
      ++b;
    }
  }
  return out;
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const {
  Monomial out;
  auto a = factors_.begin();
  for (const auto& f : other.factors_) {
    while (a != factors_.end() && a->first < f.first) out.factors_.push_back(*a++);
    if (a == factors_.end() || a->first != f.first || a->second < f.second) return std::nullopt;
    if (a->second > f.second) out.factors_.emplace_back(f.first, a->second - f.second);
    ++a;
  }
  while (a != factors_.end()) out.factors_.push_back(*a++);
  return out;
}

Monomial Monomial::lcm(const Monomial& other) const {
  Monomial out;
  auto a = factors_.begin(), b = other.factors_.begin();
  while (a != factors_.end() || b != other.factors_.end()) {
    if (b == other.factors_.end() || (a != factors_.end() && a->first < b->first)) {
      out.factors_.push_back(*a++);
    } else if (a == factors_.end() || b->first < a->first) {
      out.factors_.push_back(*b++);
    } else {
      out.factors_.emplace_back(a->first, std::max(a->second, b->second));
      ++a;
      ++b;
    }
  }
  return out;
}

Monomial Monomial::without(const std::string& name) const {
  Monomial out;
  for (const auto& f : factors_)
    if (f.first != name) out.factors_.push_back(f);
  return out;
}

std::string Monomial::str() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& [name, e] : factors_) {
    if (!out.empty()) out += "*";
    out += name;
    if (e > 1) out += "**" + std::to_string(e);
  }
  return out;
}

bool display_greater(const Monomial& a, const Monomial& b) {
  unsigned da = a.degree(), db = b.degree();
  if (da != db) return da > db;
  auto ia = a.factors().begin(), ib = b.factors().begin();
  while (ia != a.factors().end() && ib != b.factors().end()) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia;
    ++ib;
  }
  return ia != a.factors().end() && ib == b.factors().end();
}

CoeffFormat format_coeff(const Rational& q) {
  CoeffFormat f;
  f.negative = sgn(q) < 0;
  f.content = abs(q);
  return f;
}

std::string render_term(const CoeffFormat& f, const Monomial& m) {
  std::string content = to_string(f.content);
  bool unit = f.content == 1;
  std::string prefix = unit ? "" : (is_integer(f.content) ? content : "(" + content + ")");
  std::string body;
  if (m.is_one()) {
    if (f.suffix.empty())
      body = (f.denominator.empty() || is_integer(f.content)) ? content : prefix;
    else
      body = unit ? f.suffix : prefix + "*" + f.suffix;
  } else {
    body = unit ? m.str() : prefix + "*" + m.str();
    if (!f.suffix.empty()) body += "*" + f.suffix;
  }
  if (!f.denominator.empty()) body += "/" + f.denominator;
  return body;
}

}  // namespace loopm
