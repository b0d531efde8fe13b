#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace ells {

/// Truncated formal power series Σ_{k=0}^{D} c_k q^k with complex
/// coefficients. All arithmetic is closed at order D; multiplication
/// discards terms beyond q^D. Operands must share the same order.
class QSeries {
 public:
  using C = std::complex<double>;

  explicit QSeries(int order) : c_(static_cast<std::size_t>(order) + 1) {
    if (order < 0) throw std::invalid_argument("series order must be >= 0");
  }
  static QSeries constant(int order, C value) {
    QSeries s(order);
    s.c_[0] = value;
    return s;
  }
  static QSeries monomial(int order, int k, C value) {
    QSeries s(order);
    if (k < 0) throw std::invalid_argument("monomial degree must be >= 0");
    if (k <= order) s.c_[static_cast<std::size_t>(k)] = value;
    return s;
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  C operator[](int k) const { return c_[static_cast<std::size_t>(k)]; }
  C& operator[](int k) { return c_[static_cast<std::size_t>(k)]; }

  QSeries& operator+=(const QSeries& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] += o.c_[k];
    return *this;
  }
  QSeries& operator-=(const QSeries& o) {
    check(o);
    for (std::size_t k = 0; k < c_.size(); ++k) c_[k] -= o.c_[k];
    return *this;
  }
  QSeries& operator*=(C s) {
    for (auto& v : c_) v *= s;
    return *this;
  }

  friend QSeries operator+(QSeries a, const QSeries& b) { return a += b; }
  friend QSeries operator-(QSeries a, const QSeries& b) { return a -= b; }
  friend QSeries operator*(QSeries a, C s) { return a *= s; }
  friend QSeries operator*(C s, QSeries a) { return a *= s; }

  friend QSeries operator*(const QSeries& a, const QSeries& b) {
    a.check(b);
    QSeries out(a.order());
    const int D = a.order();
    for (int i = 0; i <= D; ++i) {
      if (a.c_[static_cast<std::size_t>(i)] == C{}) continue;
      for (int j = 0; i + j <= D; ++j) {
        out.c_[static_cast<std::size_t>(i + j)] +=
            a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
      }
    }
    return out;
  }

  /// Multiplication by q^j (coefficients shifted up; overflow discarded).
  QSeries shifted(int j) const {
    QSeries out(order());
    if (j < 0) throw std::invalid_argument("shift must be >= 0");
    for (int k = 0; k + j <= order(); ++k)
      out.c_[static_cast<std::size_t>(k + j)] = c_[static_cast<std::size_t>(k)];
    return out;
  }

  /// Reciprocal of a unit (c₀ ≠ 0) series.
  QSeries inverse() const {
    if (c_[0] == C{}) throw std::domain_error("series is not a unit");
    QSeries out(order());
    out.c_[0] = 1.0 / c_[0];
    for (int k = 1; k <= order(); ++k) {
      C acc{};
      for (int j = 0; j < k; ++j)
        acc += out.c_[static_cast<std::size_t>(j)] *
               c_[static_cast<std::size_t>(k - j)];
      out.c_[static_cast<std::size_t>(k)] = -acc / c_[0];
    }
    return out;
  }

  friend QSeries operator/(const QSeries& a, const QSeries& b) {
    return a * b.inverse();
  }

  double max_abs() const {
    double m = 0.0;
    for (const auto& v : c_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  void check(const QSeries& o) const {
    if (o.c_.size() != c_.size())
      throw std::invalid_argument("series order mismatch");
  }
  std::vector<C> c_;
};

}  // namespace ells
