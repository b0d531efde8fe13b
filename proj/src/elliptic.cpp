#include "ells/elliptic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ells {

namespace {
constexpr double kTail = 1e-17;
constexpr long double kTailL = 1e-20L;
constexpr int kMaxTerms = 200000;
constexpr double kPi = std::numbers::pi;
using CxL = std::complex<long double>;

[[noreturn]] void no_convergence(const char* what) {
  throw std::runtime_error(std::string("series did not converge: ") + what);
}
}  // namespace

Nome::Nome(double q_) : q(q_) {
  if (!(q >= 0.0 && q < 1.0))
    throw std::domain_error("nome q must lie in [0,1)");
}

Cx Nome::tau() const {
  if (!(q > 0.0)) throw std::domain_error("tau undefined at q = 0");
  return Cx(0.0, -std::log(q) / (2.0 * kPi));
}

Cx theta(Cx z, Nome nome) {
  const long double q = nome.q;
  if (z == Cx{}) throw std::domain_error("theta undefined at z = 0");
  const CxL zl(z.real(), z.imag());
  CxL prod = 1.0L - zl;
  const CxL zi = 1.0L / zl;
  const long double zmax = std::max({std::abs(zl), std::abs(zi), 1.0L});
  long double qn = q;
  for (int n = 1; n <= kMaxTerms; ++n) {
    if (qn * zmax < kTailL) break;
    prod *= (1.0L - qn) * (1.0L - zl * qn) * (1.0L - zi * qn);
    qn *= q;
    if (n == kMaxTerms) no_convergence("theta product");
  }
  return Cx(double(prod.real()), double(prod.imag()));
}

// weighted two-sided sums Σ w(n) (-z)^n q^{(n²-n)/2} for w = 1 and w = n
namespace {
CxL theta_sum_weighted(Cx z, long double q, bool weight_by_n) {
  if (z == Cx{}) throw std::domain_error("theta undefined at z = 0");
  const CxL zl(z.real(), z.imag());
  CxL acc = weight_by_n ? CxL{} : CxL{1.0L, 0.0L};  // n = 0 term
  // n >= 1: exponent (n²-n)/2 grows by n when stepping n -> n+1
  CxL zp = -zl;
  long double qp = 1.0L;
  for (int n = 1; n <= kMaxTerms; ++n) {
    const CxL term = (weight_by_n ? (long double)(n) : 1.0L) * zp * qp;
    acc += term;
    if (std::abs(term) < kTailL * (1.0L + std::abs(acc)) && n > 1) break;
    for (int r = 0; r < n; ++r) qp *= q;
    zp *= -zl;
    if (qp == 0.0L) break;
  }
  // n <= -1: exponent (k²+k)/2 for k = -n grows by k+1
  CxL zm = -1.0L / zl;
  long double qm = q;  // k = 1 exponent is 1
  for (int k = 1; k <= kMaxTerms; ++k) {
    const CxL term = (weight_by_n ? (long double)(-k) : 1.0L) * zm * qm;
    acc += term;
    if (std::abs(term) < kTailL * (1.0L + std::abs(acc))) break;
    for (int r = 0; r < k + 1; ++r) qm *= q;
    zm *= -1.0L / zl;
    if (qm == 0.0L) break;
  }
  return acc;
}
}  // namespace

Cx theta_sum(Cx z, Nome nome) {
  const CxL acc = theta_sum_weighted(z, nome.q, false);
  return Cx(double(acc.real()), double(acc.imag()));
}

Cx theta_z_dz(Cx z, Nome nome) {
  const CxL acc = theta_sum_weighted(z, nome.q, true);
  return Cx(double(acc.real()), double(acc.imag()));
}

double euler_phi(Nome nome) {
  const double q = nome.q;
  double prod = 1.0;
  double qn = q;
  for (int n = 1; n <= kMaxTerms; ++n) {
    if (qn < kTail) return prod;
    prod *= 1.0 - qn;
    qn *= q;
  }
  no_convergence("euler phi product");
}

double euler_phi_pentagonal(Nome nome) {
  const double q = nome.q;
  double acc = 1.0;
  double sign = -1.0;
  for (long long k = 1; k <= kMaxTerms; ++k) {
    const double e1 = double(k) * (3.0 * double(k) - 1.0) / 2.0;
    const double e2 = double(k) * (3.0 * double(k) + 1.0) / 2.0;
    const double term = sign * (std::pow(q, e1) + std::pow(q, e2));
    acc += term;
    if (std::abs(term) < kTail) return acc;
    sign = -sign;
  }
  no_convergence("pentagonal series");
}

namespace {
Cx f_term(Cx w) { return w / ((1.0 - w) * (1.0 - w)); }

void check_f_pole(Cx w) {
  if (std::abs(1.0 - w) < 1e-13 * (1.0 + std::abs(w)))
    throw std::domain_error("F-kernel pole: z on the lattice {q^n}");
}
}  // namespace

Cx f_kernel(Cx z, Nome nome) {
  const double q = nome.q;
  if (z == Cx{}) throw std::domain_error("F-kernel undefined at z = 0");
  Cx acc = 0.0;
  // n >= 0 terms with w = z q^n
  Cx w = z;
  for (int n = 0; n <= kMaxTerms; ++n) {
    check_f_pole(w);
    acc += f_term(w);
    w *= q;
    if (std::abs(w) < kTail) break;
  }
  // n <= -1 terms transform to w = q^k / z
  w = q / z;
  for (int k = 1; k <= kMaxTerms; ++k) {
    check_f_pole(w);
    acc += f_term(w);
    w *= q;
    if (std::abs(w) < kTail) break;
  }
  return acc;
}

Cx f_kernel_theta_deriv(double theta, Nome nome) {
  const double q = nome.q;
  const double rq = std::sqrt(q);
  const Cx z = rq * std::polar(1.0, theta);
  const Cx i(0.0, 1.0);
  Cx acc = 0.0;
  Cx w = z;
  for (int n = 0; n <= kMaxTerms; ++n) {
    check_f_pole(w);
    const Cx d = 1.0 - w;
    acc += i * w * (1.0 + w) / (d * d * d);
    w *= q;
    if (std::abs(w) < kTail) break;
  }
  w = q / z;
  for (int k = 1; k <= kMaxTerms; ++k) {
    check_f_pole(w);
    const Cx d = 1.0 - w;
    acc += -i * w * (1.0 + w) / (d * d * d);
    w *= q;
    if (std::abs(w) < kTail) break;
  }
  return acc;
}

Cx x_from_z(Cx z, Nome nome, double M) {
  const double q = nome.q;
  const Cx m(0.0, M);
  if (std::abs(1.0 - z) < 1e-14 * (1.0 + std::abs(z)))
    throw std::domain_error("x(z) pole at z = 1");
  Cx acc = z / (1.0 - z);
  Cx zq = z * q;
  double qn = q;
  for (int n = 1; n <= kMaxTerms; ++n) {
    if (std::abs(1.0 - zq) < 1e-14 * (1.0 + std::abs(zq)) ||
        std::abs(qn - z) < 1e-14 * (qn + std::abs(z)))
      throw std::domain_error("x(z) pole: z on the lattice {q^n}");
    const Cx term = zq / (1.0 - zq) + qn / (qn - z);
    acc += term;
    if (std::abs(term) < kTail * (1.0 + std::abs(acc)) &&
        std::abs(zq) < kTail && qn < kTail * std::abs(z))
      break;
    zq *= q;
    qn *= q;
    if (qn == 0.0) break;
  }
  return m * acc;
}

double g_sum(double cos_theta, Nome nome) {
  const double q = nome.q;
  if (q == 0.0) return 0.0;
  const double rq = std::sqrt(q);
  double acc = 0.0;
  double qr = rq;  // r = 1/2
  for (int k = 0; k <= kMaxTerms; ++k) {
    const double den = 1.0 - 2.0 * qr * cos_theta + qr * qr;
    acc += qr / den;
    qr *= q;
    if (qr < kTail) break;
  }
  return 2.0 * acc;
}

double X_of_theta(double theta, Nome nome) {
  return std::sin(theta) * g_sum(std::cos(theta), nome);
}

namespace {
double demand_real(Cx v, const char* what) {
  if (std::abs(v.imag()) > 1e-12 * std::max(1.0, std::abs(v.real())))
    throw std::runtime_error(std::string(what) +
                             ": imaginary residue exceeds tolerance");
  return v.real();
}
}  // namespace

double X_prime(double theta, Nome nome) {
  if (nome.q == 0.0) return 0.0;
  const Cx z = std::sqrt(nome.q) * std::polar(1.0, theta);
  return demand_real(f_kernel(z, nome), "X_prime");
}

double X_second(double theta, Nome nome) {
  if (nome.q == 0.0) return 0.0;
  return demand_real(f_kernel_theta_deriv(theta, nome), "X_second");
}

Cx weierstrass_p(Cx v, Nome nome) {
  const Cx tau = nome.tau();
  auto inv_sin2 = [](Cx u) {
    const Cx s = std::sin(kPi * u);
    const Cx s2 = s * s;
    if (std::abs(s2) == 0.0)
      throw std::domain_error("weierstrass_p pole at a lattice point");
    const Cx r = 1.0 / s2;
    return std::isfinite(r.real()) && std::isfinite(r.imag()) ? r : Cx{};
  };
  Cx acc = inv_sin2(v);
  for (int n = 1; n <= kMaxTerms; ++n) {
    const Cx term = inv_sin2(v - double(n) * tau) + inv_sin2(v + double(n) * tau);
    acc += term;
    if (std::abs(term) < kTail * (1.0 + std::abs(acc))) break;
  }
  return kPi * kPi * acc;
}

double e6_inverse_quartic_root(Nome nome) {
  const double q = nome.q;
  double s = 0.0;
  double qn = q;
  for (int n = 1; n <= kMaxTerms; ++n) {
    const double term = std::pow(double(n), 5) * qn / (1.0 - qn);
    s += term;
    if (term < kTail * (1.0 + s)) break;
    qn *= q;
    if (qn == 0.0) break;
  }
  const double radicand = 1.0 - 504.0 * s;
  if (!(radicand > 0.0))
    throw std::domain_error("E6 radicand is not positive at this nome; the "
                            "closed-form edge prefactor has no real branch");
  return std::pow(radicand, -0.25);
}

std::pair<Cx, long> canonicalize_cylinder(Cx z, Nome nome) {
  const double q = nome.q;
  if (z == Cx{}) throw std::domain_error("cylinder point must be nonzero");
  if (!(q > 0.0)) throw std::domain_error("cylinder undefined at q = 0");
  const double u = -std::log(q);
  // n chosen so ln|z q^n| lands in (-u/2, u/2]: half-open at the inner edge
  const long n = static_cast<long>(std::ceil(std::log(std::abs(z)) / u - 0.5));
  return {z * std::pow(q, double(n)), n};
}

}  // namespace ells
