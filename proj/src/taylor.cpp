#include "cproj/taylor.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace cpg {

namespace {

std::uint64_t encode(std::span<const int> e, int base) {
  std::uint64_t key = 0;
  for (int x : e) key = key * base + static_cast<std::uint64_t>(x);
  return key;
}

// all exponent vectors of total degree d, lexicographically descending
void monomials_of_degree(int n, int d, std::vector<int>& cur, int pos,
                         std::vector<std::vector<int>>& out) {
  if (pos == n - 1) {
    cur[pos] = d;
    out.push_back(cur);
    return;
  }
  for (int k = d; k >= 0; --k) {
    cur[pos] = k;
    monomials_of_degree(n, d - k, cur, pos + 1, out);
  }
}

struct Registry {
  std::mutex mu;
  std::map<std::pair<int, int>, std::unique_ptr<TaylorSpace>> spaces;
};

Registry& registry() {
  static Registry r;
  return r;
}

// last-used cache; spaces are never freed so raw pointers stay valid
thread_local const TaylorSpace* last_space = nullptr;

}  // namespace

const TaylorSpace& TaylorSpace::get(int nvars, int order) {
  if (last_space && last_space->nvars_ == nvars && last_space->order_ == order) return *last_space;
  if (nvars < 0 || order < 0 || nvars > 64) throw std::invalid_argument("TaylorSpace: bad dimensions");
  auto& reg = registry();
  std::lock_guard lock(reg.mu);
  auto& slot = reg.spaces[{nvars, order}];
  if (!slot) slot.reset(new TaylorSpace(nvars, order));
  last_space = slot.get();
  return *slot;
}

TaylorSpace::TaylorSpace(int nvars, int order) : nvars_(nvars), order_(order) {
  std::vector<std::vector<int>> mons;
  upto_.assign(order + 1, 0);
  for (int d = 0; d <= order; ++d) {
    if (nvars == 0) {
      if (d == 0) mons.emplace_back();
    } else {
      std::vector<int> cur(nvars, 0);
      monomials_of_degree(nvars, d, cur, 0, mons);
    }
    upto_[d] = static_cast<int>(mons.size());
  }
  const int base = order + 1;
  auto& index = index_;
  for (std::size_t k = 0; k < mons.size(); ++k) {
    int deg = 0;
    for (int x : mons[k]) {
      exps_.push_back(static_cast<std::uint8_t>(x));
      deg += x;
    }
    degree_.push_back(deg);
    index[encode(mons[k], base)] = static_cast<int>(k);
  }

  // product table grouped by result degree
  std::vector<std::vector<Term>> by_degree(order + 1);
  std::vector<int> e(nvars);
  for (std::size_t i = 0; i < mons.size(); ++i) {
    for (std::size_t j = 0; j < mons.size(); ++j) {
      int deg = degree_[i] + degree_[j];
      if (deg > order) continue;
      for (int v = 0; v < nvars; ++v) e[v] = mons[i][v] + mons[j][v];
      int k = index.at(encode(e, base));
      by_degree[deg].push_back({static_cast<std::uint16_t>(i), static_cast<std::uint16_t>(j),
                                static_cast<std::uint16_t>(k)});
    }
  }
  terms_upto_.assign(order + 1, 0);
  for (int d = 0; d <= order; ++d) {
    terms_.insert(terms_.end(), by_degree[d].begin(), by_degree[d].end());
    terms_upto_[d] = static_cast<int>(terms_.size());
  }

  deriv_.resize(nvars);
  for (int v = 0; v < nvars; ++v) {
    for (std::size_t dst = 0; dst < mons.size(); ++dst) {
      if (degree_[dst] >= order) continue;
      for (int w = 0; w < nvars; ++w) e[w] = mons[dst][w];
      e[v] += 1;
      int src = index.at(encode(e, base));
      deriv_[v].push_back({static_cast<std::uint16_t>(src), static_cast<std::uint16_t>(dst),
                           static_cast<double>(e[v])});
    }
  }
}

int TaylorSpace::index_of(std::span<const int> e) const {
  int deg = 0;
  for (int x : e) {
    if (x < 0) return -1;
    deg += x;
  }
  if (deg > order_) return -1;
  auto it = index_.find(encode(e, order_ + 1));
  return it == index_.end() ? -1 : it->second;
}

Taylor::Taylor(int nvars, int order, double value)
    : nvars_(static_cast<std::uint8_t>(nvars)), order_(static_cast<std::uint8_t>(order)) {
  c_.assign(TaylorSpace::get(nvars, order).size(), 0.0);
  c_[0] = value;
}

Taylor Taylor::variable(int nvars, int order, int var, double at) {
  Taylor t(nvars, order, at);
  if (order >= 1) t.c_[1 + var] = 1.0;
  return t;
}

double Taylor::d1(int i) const {
  if (order_ < 1) throw std::logic_error("Taylor::d1 needs order >= 1");
  return c_[1 + i];
}

double Taylor::d2(int i, int j) const {
  if (order_ < 2) throw std::logic_error("Taylor::d2 needs order >= 2");
  std::vector<int> e(nvars_, 0);
  e[i] += 1;
  e[j] += 1;
  int idx = space().index_of(e);
  return (i == j ? 2.0 : 1.0) * c_[idx];
}

Taylor Taylor::truncated(int order) const {
  if (order > order_) throw std::logic_error("Taylor::truncated cannot raise order");
  Taylor t = *this;
  t.shrink_to(order);
  return t;
}

void Taylor::shrink_to(int order) {
  if (order >= order_) return;
  order_ = static_cast<std::uint8_t>(order);
  c_.resize(TaylorSpace::get(nvars_, order).size());
}

Taylor Taylor::derivative(int var) const {
  if (order_ < 1) throw std::logic_error("Taylor::derivative of an order-0 jet");
  Taylor out(nvars_, order_ - 1);
  for (const auto& t : space().derivative(var)) out.c_[t.dst] = t.factor * c_[t.src];
  return out;
}

Taylor& Taylor::operator+=(const Taylor& o) {
  shrink_to(o.order_);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
  return *this;
}

Taylor& Taylor::operator-=(const Taylor& o) {
  shrink_to(o.order_);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
  return *this;
}

void Taylor::axpy(double s, const Taylor& b) {
  shrink_to(b.order_);
  for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += s * b.c_[k];
}

void Taylor::add_product(const Taylor& b, const Taylor& c) {
  int k = std::min<int>({order_, b.order_, c.order_});
  shrink_to(k);
  if (k == 0) {
    c_[0] += b.c_[0] * c.c_[0];
    return;
  }
  for (const auto& t : TaylorSpace::get(nvars_, k).products_upto(k)) c_[t.k] += b.c_[t.i] * c.c_[t.j];
}

Taylor& Taylor::operator*=(const Taylor& o) {
  *this = *this * o;
  return *this;
}

Taylor& Taylor::operator/=(const Taylor& o) {
  *this = *this * reciprocal(o);
  return *this;
}

Taylor& Taylor::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}

Taylor Taylor::operator-() const {
  Taylor t = *this;
  for (auto& x : t.c_) x = -x;
  return t;
}

Taylor operator+(Taylor a, const Taylor& b) { return a += b; }
Taylor operator-(Taylor a, const Taylor& b) { return a -= b; }
Taylor operator*(const Taylor& a, const Taylor& b) {
  Taylor out(a.nvars(), std::min(a.order(), b.order()));
  out.add_product(a, b);
  return out;
}
Taylor operator/(const Taylor& a, const Taylor& b) { return a * reciprocal(b); }
Taylor operator+(Taylor a, double s) { return a += s; }
Taylor operator+(double s, Taylor a) { return a += s; }
Taylor operator-(Taylor a, double s) { return a -= s; }
Taylor operator-(double s, const Taylor& a) { return (-a) += s; }
Taylor operator*(Taylor a, double s) { return a *= s; }
Taylor operator*(double s, Taylor a) { return a *= s; }
Taylor operator/(Taylor a, double s) { return a /= s; }
Taylor operator/(double s, const Taylor& a) { return reciprocal(a) *= s; }

namespace {

// f(a0 + u) = sum_k coef[k] u^k with u the non-constant part of a
Taylor compose(const Taylor& a, const std::vector<double>& coef) {
  Taylor u = a;
  u.coeff(0) = 0.0;
  Taylor out(a.nvars(), a.order(), coef[0]);
  Taylor pw = u;
  for (int k = 1; k <= a.order(); ++k) {
    out.axpy(coef[k], pw);
    if (k < a.order()) pw = pw * u;
  }
  return out;
}

}  // namespace

Taylor pow(const Taylor& a, double e) {
  double a0 = a.value();
  if (a0 == 0.0) throw std::domain_error("Taylor pow: expansion at zero");
  std::vector<double> coef(a.order() + 1);
  // (a0 + u)^e = sum binom(e,k) a0^(e-k) u^k
  double b = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    coef[k] = b * std::pow(a0, e - k);
    b *= (e - k) / (k + 1);
  }
  return compose(a, coef);
}

Taylor reciprocal(const Taylor& a) {
  double a0 = a.value();
  if (a0 == 0.0) throw std::domain_error("Taylor reciprocal of a jet with zero value");
  std::vector<double> coef(a.order() + 1);
  double p = 1.0 / a0;
  for (int k = 0; k <= a.order(); ++k) {
    coef[k] = (k % 2 ? -p : p);
    p /= a0;
  }
  return compose(a, coef);
}

Taylor sqrt(const Taylor& a) {
  if (a.value() <= 0.0) throw std::domain_error("Taylor sqrt of a non-positive jet");
  return pow(a, 0.5);
}

Taylor log(const Taylor& a) {
  double a0 = a.value();
  if (a0 <= 0.0) throw std::domain_error("Taylor log of a non-positive jet");
  std::vector<double> coef(a.order() + 1);
  coef[0] = std::log(a0);
  double p = 1.0 / a0;
  for (int k = 1; k <= a.order(); ++k) {
    coef[k] = (k % 2 ? 1.0 : -1.0) * p / k;
    p /= a0;
  }
  return compose(a, coef);
}

Taylor exp(const Taylor& a) {
  std::vector<double> coef(a.order() + 1);
  double e0 = std::exp(a.value());
  double f = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    coef[k] = e0 / f;
    f *= k + 1;
  }
  return compose(a, coef);
}

}  // namespace cpg
