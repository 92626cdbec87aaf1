#include "cproj/polynomial.hpp"

#include "cproj/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>

namespace cpg {

Polynomial Polynomial::constant(int nvars, double c) {
  Polynomial p(nvars);
  p.add_term(c, std::vector<int>(nvars, 0));
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  if (i < 0 || i >= nvars) throw UsageError("polynomial variable x" + std::to_string(i) + " out of range");
  std::vector<int> e(nvars, 0);
  e[i] = 1;
  Polynomial p(nvars);
  p.add_term(1.0, e);
  return p;
}

void Polynomial::add_term(double coef, std::vector<int> exps) {
  if (static_cast<int>(exps.size()) != nvars_) throw ConstructionError("polynomial term has wrong arity");
  terms_.push_back({coef, std::move(exps)});
  normalize();
}

void Polynomial::normalize() {
  std::map<std::vector<int>, double> acc;
  for (auto& t : terms_) acc[t.exps] += t.coef;
  terms_.clear();
  for (auto& [e, c] : acc)
    if (c != 0.0) terms_.push_back({c, e});
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r = *this;
  r.terms_.insert(r.terms_.end(), o.terms_.begin(), o.terms_.end());
  r.normalize();
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + o * -1.0; }

Polynomial Polynomial::operator*(double s) const {
  Polynomial r = *this;
  for (auto& t : r.terms_) t.coef *= s;
  r.normalize();
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial r(nvars_);
  for (auto& a : terms_)
    for (auto& b : o.terms_) {
      std::vector<int> e(nvars_);
      for (int i = 0; i < nvars_; ++i) e[i] = a.exps[i] + b.exps[i];
      r.terms_.push_back({a.coef * b.coef, e});
    }
  r.normalize();
  return r;
}

Polynomial Polynomial::pow(int k) const {
  if (k < 0) throw UsageError("negative polynomial exponent");
  Polynomial r = constant(nvars_, 1.0);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

double Polynomial::operator()(const std::vector<double>& x) const {
  double s = 0.0;
  for (auto& t : terms_) {
    double v = t.coef;
    for (int i = 0; i < nvars_; ++i)
      if (t.exps[i]) v *= std::pow(x[i], t.exps[i]);
    s += v;
  }
  return s;
}

Taylor Polynomial::jet(const std::vector<double>& x, int order) const {
  Taylor out(nvars_, order);
  if (terms_.empty()) return out;
  int maxe = 0;
  for (auto& t : terms_)
    for (int e : t.exps) maxe = std::max(maxe, e);
  // powers[i][k] = (x_i + dx_i)^k
  std::vector<std::vector<Taylor>> powers(nvars_);
  for (int i = 0; i < nvars_; ++i) {
    powers[i].push_back(Taylor(nvars_, order, 1.0));
    Taylor xi = Taylor::variable(nvars_, order, i, x[i]);
    for (int k = 1; k <= maxe; ++k) powers[i].push_back(powers[i].back() * xi);
  }
  for (auto& t : terms_) {
    Taylor v(nvars_, order, t.coef);
    for (int i = 0; i < nvars_; ++i)
      if (t.exps[i]) v = v * powers[i][t.exps[i]];
    out += v;
  }
  return out;
}

namespace {

class Parser {
 public:
  Parser(const std::string& s, int n) : s_(s), n_(n) {}

  Polynomial parse() {
    Polynomial p = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  [[noreturn]] void fail(const std::string& what) {
    throw UsageError("polynomial '" + s_ + "': " + what + " at offset " + std::to_string(pos_));
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  Polynomial expr() {
    Polynomial p = term();
    for (;;) {
      if (eat('+'))
        p = p + term();
      else if (eat('-'))
        p = p - term();
      else
        return p;
    }
  }
  Polynomial term() {
    Polynomial p = factor();
    while (eat('*')) p = p * factor();
    return p;
  }
  Polynomial factor() {
    if (eat('-')) return factor() * -1.0;
    if (eat('+')) return factor();
    Polynomial b = atom();
    if (eat('^')) {
      skip();
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected integer exponent");
      b = b.pow(std::stoi(s_.substr(start, pos_ - start)));
    }
    return b;
  }
  Polynomial atom() {
    skip();
    if (eat('(')) {
      Polynomial p = expr();
      if (!eat(')')) fail("expected ')'");
      return p;
    }
    if (pos_ < s_.size() && s_[pos_] == 'x') {
      ++pos_;
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected variable index");
      int i = std::stoi(s_.substr(start, pos_ - start));
      if (i >= n_) fail("variable index out of range");
      return Polynomial::variable(n_, i);
    }
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    if (start == pos_) fail("expected number, variable or '('");
    return Polynomial::constant(n_, std::stod(s_.substr(start, pos_ - start)));
  }

  const std::string& s_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text, int nvars) { return Parser(text, nvars).parse(); }

}  // namespace cpg
