// Sparse real multivariate polynomials keyed by exponent vectors.

#ifndef UEIG_POLYNOMIAL_HPP
#define UEIG_POLYNOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <map>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ueig/tensor.hpp"

namespace ueig {

using Monomial = std::vector<int>;

inline int degree(const Monomial& a) { return std::accumulate(a.begin(), a.end(), 0); }

/// Graded-lex order: lower total degree first; within a degree, larger
/// exponents on earlier variables first (1, u1, u2, u1^2, u1 u2, u2^2, ...).
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    const int da = degree(a), db = degree(b);
    if (da != db) return da < db;
    return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
  }
};

/// All monomials in nvars variables of degree <= max_degree, graded-lex.
inline std::vector<Monomial> monomials_up_to(std::size_t nvars, int max_degree) {
  std::vector<Monomial> out;
  Monomial cur(nvars, 0);
  for (int d = 0; d <= max_degree; ++d) {
    // Lex-decreasing compositions of d into nvars parts.
    auto rec = [&](auto& self, std::size_t pos, int left) -> void {
      if (nvars == 0) {
        if (left == 0) out.push_back(cur);
        return;
      }
      if (pos + 1 == nvars) {
        cur[pos] = left;
        out.push_back(cur);
        cur[pos] = 0;
        return;
      }
      for (int e = left; e >= 0; --e) {
        cur[pos] = e;
        self(self, pos + 1, left - e);
      }
      cur[pos] = 0;
    };
    rec(rec, 0, d);
  }
  return out;
}

class Polynomial {
 public:
  using Terms = std::map<Monomial, double, GradedLexLess>;

  static constexpr double kDefaultDropTol = 1e-14;

  explicit Polynomial(std::size_t nvars, double drop_tol = kDefaultDropTol)
      : nvars_(nvars), drop_tol_(drop_tol) {}

  static Polynomial constant(std::size_t nvars, double c) {
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
  }

  static Polynomial variable(std::size_t nvars, std::size_t i) {
    if (i >= nvars) throw std::out_of_range("variable index out of range");
    Polynomial p(nvars);
    Monomial e(nvars, 0);
    e[i] = 1;
    p.add_term(e, 1.0);
    return p;
  }

  std::size_t nvars() const { return nvars_; }
  double drop_tolerance() const { return drop_tol_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  int degree() const { return terms_.empty() ? 0 : ueig::degree(terms_.rbegin()->first); }

  bool is_homogeneous() const {
    if (terms_.empty()) return true;
    const int d = ueig::degree(terms_.begin()->first);
    return ueig::degree(terms_.rbegin()->first) == d;
  }

  double coefficient(const Monomial& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? 0.0 : it->second;
  }

  /// Adds c * u^e; coefficients that fall below the drop tolerance are removed.
  void add_term(const Monomial& e, double c) {
    if (e.size() != nvars_) throw DimensionError("monomial has wrong number of variables");
    auto [it, inserted] = terms_.try_emplace(e, 0.0);
    it->second += c;
    if (std::abs(it->second) <= drop_tol_) terms_.erase(it);
  }

  double evaluate(std::span<const double> u) const {
    if (u.size() != nvars_) throw DimensionError("evaluate: point has wrong dimension");
    double s = 0.0;
    for (const auto& [e, c] : terms_) {
      double t = c;
      for (std::size_t i = 0; i < nvars_; ++i)
        for (int k = 0; k < e[i]; ++k) t *= u[i];
      s += t;
    }
    return s;
  }

  double evaluate(const Eigen::VectorXd& u) const {
    return evaluate(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())));
  }

  Polynomial& operator+=(const Polynomial& q) {
    check_same(q);
    for (const auto& [e, c] : q.terms_) add_term(e, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& q) {
    check_same(q);
    for (const auto& [e, c] : q.terms_) add_term(e, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    Polynomial r(nvars_, drop_tol_);
    for (const auto& [e, c] : terms_) r.add_term(e, c * s);
    return *this = std::move(r);
  }

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(Polynomial p, double s) { return p *= s; }
  friend Polynomial operator*(double s, Polynomial p) { return p *= s; }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    p.check_same(q);
    Polynomial r(p.nvars_, std::max(p.drop_tol_, q.drop_tol_));
    Monomial e(p.nvars_);
    for (const auto& [ea, ca] : p.terms_)
      for (const auto& [eb, cb] : q.terms_) {
        for (std::size_t i = 0; i < p.nvars_; ++i) e[i] = ea[i] + eb[i];
        r.terms_[e] += ca * cb;
      }
    r.prune();
    return r;
  }

  /// Formal derivative with respect to variable i.
  Polynomial partial(std::size_t i) const {
    if (i >= nvars_) throw std::out_of_range("partial: variable index out of range");
    Polynomial r(nvars_, drop_tol_);
    for (const auto& [e, c] : terms_) {
      if (e[i] == 0) continue;
      Monomial d = e;
      d[i] -= 1;
      r.add_term(d, c * e[i]);
    }
    return r;
  }

  /// Sets the listed variables to zero and removes them from the ring.
  Polynomial eliminate_zero(std::span<const std::size_t> vars) const {
    std::vector<bool> gone(nvars_, false);
    for (std::size_t v : vars) {
      if (v >= nvars_) throw std::out_of_range("eliminate_zero: variable index out of range");
      gone[v] = true;
    }
    const std::size_t kept = static_cast<std::size_t>(std::count(gone.begin(), gone.end(), false));
    Polynomial r(kept, drop_tol_);
    for (const auto& [e, c] : terms_) {
      bool vanishes = false;
      Monomial ne;
      ne.reserve(kept);
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (gone[i]) vanishes = vanishes || e[i] > 0;
        else ne.push_back(e[i]);
      }
      if (!vanishes) r.add_term(ne, c);
    }
    return r;
  }

  /// Debug form: one "coef * u1^a u2^b" line per term in graded-lex order.
  std::string to_string() const {
    std::string s;
    char buf[64];
    for (const auto& [e, c] : terms_) {
      std::snprintf(buf, sizeof buf, "%.12g", c);
      s += buf;
      bool any = false;
      for (std::size_t i = 0; i < nvars_; ++i) {
        if (e[i] == 0) continue;
        s += any ? " " : " * ";
        any = true;
        s += "u" + std::to_string(i + 1);
        if (e[i] > 1) s += "^" + std::to_string(e[i]);
      }
      s += "\n";
    }
    return s;
  }

 private:
  void check_same(const Polynomial& q) const {
    if (q.nvars_ != nvars_) throw DimensionError("polynomials have different variable counts");
  }
  void prune() {
    std::erase_if(terms_, [this](const auto& kv) { return std::abs(kv.second) <= drop_tol_; });
  }

  std::size_t nvars_;
  double drop_tol_;
  Terms terms_;
};

/// A contiguous range of variables [offset, offset + size).
struct VarRange {
  std::size_t offset = 0;
  std::size_t size = 0;
};

/// sum_{i in block} u_i^2 - 1.
inline Polynomial sphere_constraint(std::size_t nvars, VarRange block) {
  if (block.offset + block.size > nvars) throw std::out_of_range("sphere_constraint: block out of range");
  Polynomial g = Polynomial::constant(nvars, -1.0);
  for (std::size_t i = block.offset; i < block.offset + block.size; ++i) {
    Monomial e(nvars, 0);
    e[i] = 2;
    g.add_term(e, 1.0);
  }
  return g;
}

}  // namespace ueig

#endif  // UEIG_POLYNOMIAL_HPP
