#pragma once

#include "cproj/taylor.hpp"

#include <string>
#include <vector>

namespace cpg {

// Real polynomial in chart coordinates x0..x{n-1}.
class Polynomial {
 public:
  struct Term {
    double coef;
    std::vector<int> exps;
  };

  explicit Polynomial(int nvars = 0) : nvars_(nvars) {}
  static Polynomial constant(int nvars, double c);
  static Polynomial variable(int nvars, int i);
  // recursive-descent parser for + - * ^ ( ) with integer/decimal numbers and x<k>
  static Polynomial parse(const std::string& text, int nvars);

  int nvars() const { return nvars_; }
  const std::vector<Term>& terms() const { return terms_; }
  void add_term(double coef, std::vector<int> exps);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(double s) const;
  Polynomial pow(int k) const;

  double operator()(const std::vector<double>& x) const;
  // jet at x of the given order
  Taylor jet(const std::vector<double>& x, int order) const;

 private:
  void normalize();

  int nvars_;
  std::vector<Term> terms_;
};

}  // namespace cpg
