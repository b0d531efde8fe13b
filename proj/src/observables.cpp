#include "ells/observables.hpp"

#include <cmath>

#include "ells/elliptic.hpp"

namespace ells {

namespace {
constexpr double kPoleFlag = 1e-12;

Cx pow_int(Cx z, int n) {
  if (n < 0) return 1.0 / pow_int(z, -n);
  Cx r = 1.0;
  while (n--) r *= z;
  return r;
}
}  // namespace

YEvaluation y_eval(const Partition& lam, Cx x, double hbar) {
  YEvaluation ev;
  ev.x = x;
  auto [addable, removable] = lam.boundary();
  Cx num = 1.0, den = 1.0;
  for (const Box& b : addable) num *= x - hbar * double(content(b));
  for (const Box& b : removable) {
    const Cx d = x - hbar * double(content(b));
    if (std::abs(d) == 0.0)
      throw PoleError("Y evaluated exactly at a pole of content " +
                          std::to_string(content(b)),
                      b);
    if (std::abs(d) < kPoleFlag) ev.pole_flags.push_back(b);
    den *= d;
  }
  ev.value = num / den;

  Cx prod = x;
  for (const Box& b : lam.boxes()) {
    const Cx d = x - hbar * double(content(b));
    prod *= (d * d - hbar * hbar) / (d * d);
  }
  ev.value_product = prod;
  return ev;
}

Cx y_boundary(const Partition& lam, Cx x, double hbar) {
  auto [addable, removable] = lam.boundary();
  Cx num = 1.0, den = 1.0;
  for (const Box& b : addable) num *= x - hbar * double(content(b));
  for (const Box& b : removable) {
    const Cx d = x - hbar * double(content(b));
    if (std::abs(d) == 0.0)
      throw PoleError("Y evaluated exactly at a pole of content " +
                          std::to_string(content(b)),
                      b);
    den *= d;
  }
  return num / den;
}

Cx chi_rational(const Partition& lam, Cx x, double Lambda, double hbar) {
  const Cx y = y_boundary(lam, x, hbar);
  if (std::abs(y) == 0.0)
    throw std::domain_error("chi undefined where Y vanishes");
  return y + Lambda * Lambda / y;
}

bool TimesPolynomial::is_zero() const {
  for (double c : coeff)
    if (c != 0.0) return false;
  return true;
}

Cx TimesPolynomial::hat_at(Cx x) const {
  Cx acc = 0.0, xp = x;
  for (double c : coeff) {
    acc += c * xp;
    xp *= x;
  }
  return acc;
}

Cx TimesPolynomial::t_at(Cx x, Cx m) const { return hat_at(x) - hat_at(x - m); }

IdentityReport verify_chi_rational_identity(int D, const std::vector<Cx>& xs,
                                            double hbar, double tol) {
  IdentityReport rep;
  rep.identity = "rational-chi";
  rep.order = D;
  rep.tolerance = tol;
  const auto lams = partitions_up_to(D);

  for (const Cx& x : xs) {
    // reject samples sitting on the content lattice
    bool reject = false;
    for (int c = -(D + 1); c <= D + 1 && !reject; ++c) {
      if (std::abs(x - hbar * double(c)) < 1e-6) reject = true;
    }
    if (reject) {
      ++rep.rejected_samples;
      rep.notes.push_back("rejected sample too close to a pole");
      continue;
    }
    ++rep.samples;

    QSeries num(D), den(D);
    std::vector<double> mass(static_cast<std::size_t>(D) + 1, 0.0);
    for (const Partition& lam : lams) {
      const int n = static_cast<int>(lam.size());
      double a = 1.0;  // ħ^{-2N} ∏ 1/h²
      for (const Box& b : lam.boxes()) {
        const double hh = hbar * double(lam.hook(b));
        a /= hh * hh;
      }
      const Cx y = y_boundary(lam, x, hbar);
      num += QSeries::monomial(D, n, a * y);
      mass[static_cast<std::size_t>(n)] += std::abs(a * y);
      if (n + 1 <= D) {
        num += QSeries::monomial(D, n + 1, a / y);
        mass[static_cast<std::size_t>(n + 1)] += std::abs(a / y);
      }
      den += QSeries::monomial(D, n, a);
      mass[static_cast<std::size_t>(n)] += std::abs(x) * a;
    }
    const QSeries err = num - x * den;
    for (int k = 0; k <= D; ++k) {
      const double rel = std::abs(err[k]) / mass[static_cast<std::size_t>(k)];
      rep.max_residual = std::max(rep.max_residual, rel);
    }
  }
  rep.pass = rep.samples > 0 && rep.max_residual < tol;
  return rep;
}

QSeries chi_elliptic(const Partition& lam, Cx x, const EnsembleParams& p,
                     int D) {
  if (p.M == 0.0)
    throw std::domain_error("elliptic character needs a nonzero mass");
  const Cx m(0.0, p.M);
  const double swap_ratio2 = (p.hbar / p.M) * (p.hbar / p.M);
  QSeries out(D);
  for (const Partition& nu : partitions_up_to(D)) {
    double w = 1.0;
    for (const Box& b : nu.boxes()) {
      const double h = double(nu.hook(b));
      w *= 1.0 + swap_ratio2 / (h * h);
    }
    auto [addable, removable] = nu.boundary();
    Cx r = 1.0;
    for (const Box& b : addable) r *= y_boundary(lam, x + m * double(content(b)), p.hbar);
    for (const Box& b : removable) {
      const Cx y = y_boundary(lam, x + m * double(content(b)), p.hbar);
      if (std::abs(y) == 0.0)
        throw PoleError("Y vanishes at a shifted argument", b);
      r /= y;
    }
    out += QSeries::monomial(D, static_cast<int>(nu.size()), w * r);
  }
  return out;
}

IdentityReport verify_chi_elliptic_identity(const EnsembleParams& p, int D,
                                            const std::vector<Cx>& xs,
                                            double tol) {
  IdentityReport rep;
  rep.identity = "elliptic-chi";
  rep.order = D;
  rep.tolerance = tol;
  const auto lams = partitions_up_to(D);
  const double ratio2 = (p.M / p.hbar) * (p.M / p.hbar);
  const double swap_ratio2 = (p.hbar / p.M) * (p.hbar / p.M);

  // size-graded ensemble and auxiliary normalizations
  QSeries z_lam(D), z_aux(D);
  for (const Partition& lam : lams) {
    double w = 1.0, wa = 1.0;
    for (const Box& b : lam.boxes()) {
      const double h2 = double(lam.hook(b)) * double(lam.hook(b));
      w *= 1.0 + ratio2 / h2;
      wa *= 1.0 + swap_ratio2 / h2;
    }
    z_lam += QSeries::monomial(D, static_cast<int>(lam.size()), w);
    z_aux += QSeries::monomial(D, static_cast<int>(lam.size()), wa);
  }

  for (const Cx& x : xs) {
    ++rep.samples;
    QSeries num(D);
    std::vector<double> mass(static_cast<std::size_t>(D) + 1, 0.0);
    for (const Partition& lam : lams) {
      double w = 1.0;
      for (const Box& b : lam.boxes()) {
        const double h = double(lam.hook(b));
        w *= 1.0 + ratio2 / (h * h);
      }
      const QSeries chi = chi_elliptic(lam, x, p, D);
      const int n = static_cast<int>(lam.size());
      for (int k = 0; n + k <= D; ++k) {
        num[n + k] += w * chi[k];
        mass[static_cast<std::size_t>(n + k)] += w * std::abs(chi[k]);
      }
    }
    const QSeries rhs = x * (z_lam * z_aux);
    for (int k = 0; k <= D; ++k)
      mass[static_cast<std::size_t>(k)] += std::abs(rhs[k]);
    const QSeries err = num - rhs;
    for (int k = 0; k <= D; ++k) {
      const double rel = std::abs(err[k]) / mass[static_cast<std::size_t>(k)];
      rep.max_residual = std::max(rep.max_residual, rel);
    }
  }
  rep.pass = rep.samples > 0 && rep.max_residual < tol;
  return rep;
}

namespace {
Cx transform_prefactor(const TimesPolynomial& that, Cx x, Cx m, int n) {
  Cx s = 0.0;
  if (n > 0) {
    for (int j = 0; j <= n - 1; ++j) s += that.hat_at(x + double(j) * m);
  } else if (n < 0) {
    for (int j = 1; j <= -n; ++j) s -= that.hat_at(x - double(j) * m);
  }
  return std::exp(s);
}
}  // namespace

QSeries theta_transform(const std::function<QSeries(int)>& chi_shift, Cx z,
                        int D, const TimesPolynomial& that, Cx x, Cx m) {
  if (z == Cx{}) throw std::domain_error("theta transform needs z != 0");
  QSeries out(D);
  for (int n = -(D + 1);; ++n) {
    const long long e = (static_cast<long long>(n) * n - n) / 2;
    if (n > 0 && e > D) break;
    if (e > D) continue;  // negative n with too-high prefactor power
    const Cx scalar = pow_int(-z, n) * transform_prefactor(that, x, m, n);
    out += scalar * chi_shift(n).shifted(static_cast<int>(e));
  }
  return out;
}

QSeries factorization_lhs(const std::function<Cx(Cx)>& Y, Cx x, Cx z, int D,
                          const TimesPolynomial& that, Cx m,
                          int product_factors) {
  const int N = product_factors < 0 ? D : product_factors;
  auto safe_y = [&](Cx arg) {
    const Cx v = Y(arg);
    if (std::abs(v) == 0.0)
      throw std::domain_error("test function Y vanishes at a needed argument");
    return v;
  };
  QSeries out = QSeries::constant(D, safe_y(x));
  for (int n = 0; n <= N; ++n) {
    const Cx ratio = safe_y(x + double(n + 1) * m) / safe_y(x + double(n) * m);
    const Cx c = -z * std::exp(that.hat_at(x + double(n) * m)) * ratio;
    QSeries factor = QSeries::constant(D, 1.0);
    factor += QSeries::monomial(D, n, c);
    out = out * factor;
  }
  for (int n = 1; n <= N; ++n) {
    const Cx ratio = safe_y(x - double(n) * m) / safe_y(x - double(n - 1) * m);
    const Cx c = -(1.0 / z) * std::exp(-that.hat_at(x - double(n) * m)) * ratio;
    QSeries factor = QSeries::constant(D, 1.0);
    factor += QSeries::monomial(D, n, c);
    out = out * factor;
  }
  return out;
}

QSeries chi_series_column_form(const std::function<Cx(Cx)>& Y, Cx x, Cx m,
                               int D, const TimesPolynomial& that) {
  auto safe_y = [&](Cx arg) {
    const Cx v = Y(arg);
    if (std::abs(v) == 0.0)
      throw std::domain_error("test function Y vanishes at a needed argument");
    return v;
  };
  QSeries out(D);
  for (const Partition& lam : partitions_up_to(D)) {
    Cx val = 1.0;
    if (!that.is_zero()) {
      Cx s = 0.0;
      for (const Box& b : lam.boxes())
        s += that.t_at(x + double(content(b)) * m, m);
      val = std::exp(s);
    }
    const Partition lt = lam.transpose();
    const int lam1 = lam.row(1);
    for (int j = 1; j <= lam1; ++j) {
      val *= safe_y(x + double(lt.row(j) - j + 1) * m) /
             safe_y(x + double(lt.row(j) - j) * m);
    }
    val *= safe_y(x - double(lam1) * m);
    out += QSeries::monomial(D, static_cast<int>(lam.size()), val);
  }
  return out;
}

QSeries chi_series_boundary_form(const std::function<Cx(Cx)>& Y, Cx x, Cx m,
                                 int D, const TimesPolynomial& that) {
  auto safe_y = [&](Cx arg) {
    const Cx v = Y(arg);
    if (std::abs(v) == 0.0)
      throw std::domain_error("test function Y vanishes at a needed argument");
    return v;
  };
  QSeries out(D);
  for (const Partition& nu : partitions_up_to(D)) {
    Cx val = 1.0;
    if (!that.is_zero()) {
      Cx s = 0.0;
      for (const Box& b : nu.boxes())
        s += that.t_at(x + double(content(b)) * m, m);
      val = std::exp(s);
    }
    auto [addable, removable] = nu.boundary();
    for (const Box& b : addable) val *= safe_y(x + double(content(b)) * m);
    for (const Box& b : removable) val /= safe_y(x + double(content(b)) * m);
    out += QSeries::monomial(D, static_cast<int>(nu.size()), val);
  }
  return out;
}

IdentityReport verify_factorization(const std::function<Cx(Cx)>& Y, Cx x, Cx z,
                                    int D, const TimesPolynomial& that, Cx m,
                                    double tol) {
  IdentityReport rep;
  rep.identity = "factorization";
  rep.order = D;
  rep.samples = 1;
  rep.tolerance = tol;
  const QSeries lhs = factorization_lhs(Y, x, z, D, that, m);
  auto chi_at = [&](int n) {
    return chi_series_column_form(Y, x + double(n) * m, m, D, that);
  };
  const QSeries rhs = theta_transform(chi_at, z, D, that, x, m);
  for (int k = 0; k <= D; ++k) {
    const double scale =
        std::max({1.0, std::abs(lhs[k]), std::abs(rhs[k])});
    rep.max_residual =
        std::max(rep.max_residual, std::abs(lhs[k] - rhs[k]) / scale);
  }
  rep.pass = rep.max_residual < tol;
  return rep;
}

MasterEqReport verify_master_equation(const std::function<Cx(Cx)>& Y, double q,
                                      double M, const std::vector<Cx>& xs,
                                      const std::vector<Cx>& zs, double tol) {
  MasterEqReport rep;
  rep.q = q;
  rep.M = M;
  rep.tolerance = tol;
  const Nome nome(q);
  const Cx m(0.0, M);
  const double phi = euler_phi(nome);
  int ncut = 1;
  while (std::pow(q, double(ncut)) > 1e-17 && ncut < 4000) ++ncut;

  double max_abs_diff = 0.0;
  for (const Cx& x : xs) {
    for (const Cx& z : zs) {
      const Cx lhs = x * theta(z, nome) + m * theta_z_dz(z, nome);
      Cx rhs = phi * Y(x);
      for (int n = 0; n <= ncut; ++n) {
        rhs *= 1.0 - z * std::pow(q, double(n)) * Y(x + double(n + 1) * m) /
                         Y(x + double(n) * m);
      }
      for (int n = 1; n <= ncut; ++n) {
        rhs *= 1.0 - std::pow(q, double(n)) / z * Y(x - double(n) * m) /
                         Y(x - double(n - 1) * m);
      }
      ++rep.samples;
      rep.scale = std::max({rep.scale, std::abs(lhs), std::abs(rhs)});
      max_abs_diff = std::max(max_abs_diff, std::abs(lhs - rhs));
    }
  }
  rep.max_residual = rep.scale > 0.0 ? max_abs_diff / rep.scale : max_abs_diff;
  rep.pass = rep.max_residual < tol;
  return rep;
}

}  // namespace ells
