#include "ells/measures.hpp"

#include <cmath>
#include <stdexcept>

namespace ells {

EnsembleParams EnsembleParams::macrocanonical(double Q, double hbar) {
  EnsembleParams p;
  p.Q = Q;
  p.hbar = hbar;
  p.Lambda = std::sqrt(Q) * hbar;
  return p;
}

EnsembleParams EnsembleParams::elliptic(double q, double M, double hbar) {
  EnsembleParams p;
  p.q = q;
  p.M = M;
  p.hbar = hbar;
  return p;
}

EnsembleParams EnsembleParams::inozemtsev(double q, double Lambda, double hbar) {
  if (!(q > 0.0)) throw std::domain_error("Inozemtsev matching needs q > 0");
  EnsembleParams p;
  p.q = q;
  p.M = -Lambda / std::sqrt(q);
  p.hbar = hbar;
  p.Lambda = Lambda;
  return p;
}

void EnsembleParams::validate(MeasureKind kind) const {
  if (!(hbar > 0.0)) throw std::domain_error("hbar must be positive");
  switch (kind) {
    case MeasureKind::PlancherelFixedN:
      break;
    case MeasureKind::Macrocanonical:
      if (!(Q > 0.0)) throw std::domain_error("fugacity Q must be positive");
      break;
    case MeasureKind::Elliptic:
    case MeasureKind::BetaDeformed:
      if (!(q >= 0.0 && q < 1.0))
        throw std::domain_error("nome q must lie in [0,1)");
      break;
  }
}

BigRat plancherel_prob(const Partition& lam) {
  const BigInt d = dimension(lam);
  return BigRat(d * d, factorial(lam.size()));
}

double macrocanonical_weight(const Partition& lam, double Q) {
  if (!(Q > 0.0)) throw std::domain_error("fugacity Q must be positive");
  double w = std::pow(Q, double(lam.size()));
  for (const Box& b : lam.boxes()) {
    const double h = double(lam.hook(b));
    w /= h * h;
  }
  return w;
}

double elliptic_weight(const Partition& lam, const EnsembleParams& p) {
  if (!(p.q >= 0.0 && p.q < 1.0))
    throw std::domain_error("nome q must lie in [0,1)");
  double w = std::pow(p.q, double(lam.size()));
  const double ratio2 = (p.M / p.hbar) * (p.M / p.hbar);
  for (const Box& b : lam.boxes()) {
    const double h = double(lam.hook(b));
    w *= 1.0 + ratio2 / (h * h);
  }
  return w;
}

std::complex<double> beta_weight(const Partition& lam, const EnsembleParams& p) {
  const std::complex<double> m(0.0, p.M);
  std::complex<double> w = std::pow(p.q, double(lam.size()));
  if (lam.size() == 0) return {1.0, 0.0};
  for (const Box& b : lam.boxes()) {
    const double a = double(lam.arm(b));
    const double l = double(lam.leg(b));
    const double d1 = p.eps1 * (a + 1.0) - p.eps2 * l;
    const double d2 = -p.eps1 * a + p.eps2 * (l + 1.0);
    if (d1 == 0.0 || d2 == 0.0)
      throw std::domain_error("singular beta-ensemble parameters: vanishing "
                              "arm/leg denominator");
    w *= (1.0 + m / d1) * (1.0 + m / d2);
  }
  return w;
}

std::complex<double> measure_weight(MeasureKind kind, const Partition& lam,
                                    const EnsembleParams& p) {
  switch (kind) {
    case MeasureKind::PlancherelFixedN:
      return {static_cast<double>(plancherel_prob(lam)), 0.0};
    case MeasureKind::Macrocanonical:
      return {macrocanonical_weight(lam, p.Q), 0.0};
    case MeasureKind::Elliptic:
      return {elliptic_weight(lam, p), 0.0};
    case MeasureKind::BetaDeformed:
      return beta_weight(lam, p);
  }
  throw std::logic_error("unknown measure kind");
}

TruncatedSum partition_function(MeasureKind kind, const EnsembleParams& p, int D) {
  if (D < 0) throw std::domain_error("truncation order must be >= 0");
  p.validate(kind);
  TruncatedSum out;
  for (int n = 0; n <= D; ++n) {
    std::complex<double> inc{0.0, 0.0};
    for (const Partition& lam : partitions_of(n)) {
      inc += measure_weight(kind, lam, p);
    }
    out.value += inc;
    out.last_increment = std::abs(inc);
  }
  return out;
}

std::complex<double> expectation(
    MeasureKind kind, const EnsembleParams& p, int D,
    const std::function<std::complex<double>(const Partition&)>& observable) {
  p.validate(kind);
  std::complex<double> num{0.0, 0.0};
  std::complex<double> den{0.0, 0.0};
  for (int n = 0; n <= D; ++n) {
    for (const Partition& lam : partitions_of(n)) {
      const std::complex<double> w = measure_weight(kind, lam, p);
      den += w;
      num += w * observable(lam);
    }
  }
  if (std::abs(den) == 0.0)
    throw std::domain_error("degenerate measure: zero normalization");
  return num / den;
}

}  // namespace ells
