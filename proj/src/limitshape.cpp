#include "ells/limitshape.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "ells/rng.hpp"

namespace ells {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kQMax = 0.95;

// Bisection for a continuous monotone function; direction inferred from the
// bracket values.
template <typename F>
double bisect(F&& f, double lo, double hi, double flo, double fhi) {
  if (!((flo <= 0.0 && fhi >= 0.0) || (flo >= 0.0 && fhi <= 0.0)))
    throw std::domain_error("bisection bracket does not change sign");
  const bool increasing = flo <= fhi;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double fm = f(mid);
    if ((fm < 0.0) == increasing) {
      lo = mid;
    } else if (fm == 0.0) {
      return mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}
}  // namespace

double solve_theta_star(Nome nome) {
  if (!(nome.q > 0.0 && nome.q <= kQMax))
    throw std::domain_error("theta_star validated for q in (0, 0.95]");
  const double a = 1e-9, b = kPi - 1e-9;
  const double fa = X_prime(a, nome), fb = X_prime(b, nome);
  if (!(fa > 0.0 && fb < 0.0))
    throw std::domain_error("X' does not change sign on (0, pi)");
  return bisect([&](double t) { return X_prime(t, nome); }, a, b, fa, fb);
}

double cut_endpoint(Nome nome, double M) {
  if (!(M < 0.0))
    throw std::domain_error("cut endpoint convention requires M < 0");
  return -M * X_of_theta(solve_theta_star(nome), nome);
}

CutFrame solve_cut_frame(double q, double M) {
  const Nome nome(q);
  if (!(M < 0.0)) throw std::domain_error("mass convention requires M < 0");
  CutFrame fr;
  fr.q = q;
  fr.M = M;
  fr.theta_star = solve_theta_star(nome);
  fr.x_star = -M * X_of_theta(fr.theta_star, nome);
  return fr;
}

std::pair<double, double> invert_branches(double x, const CutFrame& frame) {
  if (!(std::abs(x) < frame.x_star))
    throw std::domain_error("x outside the open cut (-x*, x*)");
  const Nome nome(frame.q);
  const double target = x / (-frame.M);  // X(θ±) = x/|M|
  const double ts = frame.theta_star;
  auto X = [&](double t) { return X_of_theta(t, nome) - target; };
  // θ₊: X increasing on (-θ*, θ*)
  const double tp = bisect(X, -ts, ts, X(-ts), X(ts));
  // θ₋: X decreasing on (θ*, 2π-θ*) through π
  const double tm = bisect(X, ts, 2.0 * kPi - ts, X(ts), X(2.0 * kPi - ts));
  return {tp, tm};
}

double f_second(double x, const CutFrame& frame) {
  const auto [tp, tm] = invert_branches(x, frame);
  const Nome nome(frame.q);
  const double v = 1.0 / X_prime(tp, nome) - 1.0 / X_prime(tm, nome);
  return v / (kPi * (-frame.M));
}

LimitShape solve_limit_shape(double q, double M, int grid_n, int circle_n) {
  if (grid_n < 5) throw std::invalid_argument("grid too small");
  LimitShape shape;
  shape.frame_ = solve_cut_frame(q, M);
  const Nome nome(q);
  const CutFrame& fr = shape.frame_;
  shape.lambda_eff_ = std::sqrt(q) * (-M);

  const double xs = fr.x_star;
  const double x2s = X_second(fr.theta_star, nome);
  if (!(x2s < 0.0))
    throw std::runtime_error("X'' at the critical angle is not negative");
  shape.edge_coefficient_ = 2.0 / (kPi * std::sqrt(2.0 * (-M) * (-x2s)));

  // Chebyshev-Lobatto nodes x_j = x* cos(π j/(n-1)), stored ascending in x,
  // mirrored exactly so the grid is symmetric.
  const int n = grid_n;
  std::vector<LimitShape::Node> nodes(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double t = kPi * double(j) / double(n - 1);
    nodes[static_cast<std::size_t>(j)].x = xs * std::cos(t);  // descending
  }
  for (int j = 0; j < n / 2; ++j)
    nodes[static_cast<std::size_t>(n - 1 - j)].x =
        -nodes[static_cast<std::size_t>(j)].x;
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)].x = 0.0;

  // Solve branches on x >= 0 (j <= n/2 in the descending frame) and reflect.
  for (int j = 0; j <= (n - 1) / 2; ++j) {
    auto& nd = nodes[static_cast<std::size_t>(j)];
    if (j == 0) {
      nd.theta_plus = fr.theta_star;
      nd.theta_minus = fr.theta_star;
      nd.f2 = std::numeric_limits<double>::infinity();
      nd.f1 = 1.0;
    } else {
      const auto [tp, tm] = invert_branches(nd.x, fr);
      nd.theta_plus = tp;
      nd.theta_minus = tm;
      nd.f2 = (1.0 / X_prime(tp, nome) - 1.0 / X_prime(tm, nome)) /
              (kPi * (-M));
      nd.f1 = (tp - tm) / kPi + 1.0;
    }
    auto& md = nodes[static_cast<std::size_t>(n - 1 - j)];
    if (n - 1 - j != j) {
      md.theta_plus = -nd.theta_plus;
      md.theta_minus = 2.0 * kPi - nd.theta_minus;
      md.f2 = nd.f2;
      md.f1 = -nd.f1;
    }
  }

  // f by cumulative trapezoid in the Chebyshev angle from the +x* end with
  // the Euler-Maclaurin h²/12 endpoint correction (the integrand derivative
  // is available from f'' at the nodes), then exact symmetrization.
  std::vector<double> f(static_cast<std::size_t>(n));
  f[0] = xs;  // descending frame: node 0 is x = +x*
  const double h = kPi / double(n - 1);
  auto integrand = [&](int j) {
    const double t = kPi * double(j) / double(n - 1);
    return nodes[static_cast<std::size_t>(j)].f1 * (-xs * std::sin(t));
  };
  // d/dt [f'(x(t))·(-x* sin t)] = f''·x*² sin²t - f'·x* cos t; the singular
  // f'' term has a finite zero limit at both endpoints
  auto integrand_deriv = [&](int j) {
    const double t = kPi * double(j) / double(n - 1);
    const auto& nd = nodes[static_cast<std::size_t>(j)];
    if (j == 0 || j == n - 1) return -xs;
    const double s = std::sin(t);
    return nd.f2 * xs * xs * s * s - nd.f1 * xs * std::cos(t);
  };
  double prev = integrand(0);
  double trap = 0.0;
  const double gp0 = integrand_deriv(0);
  for (int j = 1; j < n; ++j) {
    const double cur = integrand(j);
    trap += 0.5 * h * (prev + cur);
    f[static_cast<std::size_t>(j)] =
        xs + trap - (h * h / 12.0) * (integrand_deriv(j) - gp0);
    prev = cur;
  }
  for (int j = 0; j <= (n - 1) / 2; ++j) {
    const double avg = 0.5 * (f[static_cast<std::size_t>(j)] +
                              f[static_cast<std::size_t>(n - 1 - j)]);
    f[static_cast<std::size_t>(j)] = avg;
    f[static_cast<std::size_t>(n - 1 - j)] = avg;
  }
  for (int j = 0; j < n; ++j)
    nodes[static_cast<std::size_t>(j)].f = f[static_cast<std::size_t>(j)];

  std::reverse(nodes.begin(), nodes.end());  // ascending in x
  shape.grid_ = std::move(nodes);

  // Uniform circle grid for quadrature against f'' dy.
  shape.circle_y_.resize(static_cast<std::size_t>(circle_n));
  for (int k = 0; k < circle_n; ++k) {
    const double t = 2.0 * kPi * double(k) / double(circle_n);
    shape.circle_y_[static_cast<std::size_t>(k)] =
        (-M) * X_of_theta(t, nome);
  }
  return shape;
}

double LimitShape::f_at(double x) const {
  const double xs = frame_.x_star;
  if (std::abs(x) >= xs) return std::abs(x);
  const auto& g = grid_;
  auto it = std::upper_bound(
      g.begin(), g.end(), x,
      [](double v, const Node& nd) { return v < nd.x; });
  const std::size_t k = static_cast<std::size_t>(it - g.begin());
  if (k == 0) return std::abs(x);
  const Node &a = g[k - 1], &b = g[k];
  const double w = (x - a.x) / (b.x - a.x);
  return a.f + w * (b.f - a.f);
}

double LimitShape::f1_at(double x) const {
  const double xs = frame_.x_star;
  if (std::abs(x) >= xs) return x >= 0.0 ? 1.0 : -1.0;
  const auto& g = grid_;
  auto it = std::upper_bound(
      g.begin(), g.end(), x,
      [](double v, const Node& nd) { return v < nd.x; });
  const std::size_t k = static_cast<std::size_t>(it - g.begin());
  if (k == 0) return -1.0;
  const Node &a = g[k - 1], &b = g[k];
  const double w = (x - a.x) / (b.x - a.x);
  return a.f1 + w * (b.f1 - a.f1);
}

namespace {
// ∫ f''(x) w(x) dx over the cut via x = x* cos t: the integrand
// f''(x(t)) w(x(t)) x* sin t extends analytically through the endpoints,
// where its value is edge_coefficient * sqrt(2 x*) * w(±x*).
double edge_moment(const LimitShape& shape, int quad_points,
                   const std::function<double(double)>& w) {
  const int n = quad_points;
  const double xs = shape.x_star();
  const double h = kPi / double(n - 1);
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    const double t = kPi * double(j) / double(n - 1);
    double g;
    if (j == 0 || j == n - 1) {
      const double x = (j == 0) ? xs : -xs;
      g = shape.edge_coefficient() * std::sqrt(2.0 * xs) * w(x);
    } else {
      const double x = xs * std::cos(t);
      g = shape.f2_at(x) * w(x) * xs * std::sin(t);
    }
    acc += (j == 0 || j == n - 1) ? 0.5 * g : g;
  }
  return acc * h;
}
}  // namespace

double LimitShape::mass(int quad_points) const {
  return edge_moment(*this, quad_points, [](double) { return 1.0; });
}

double LimitShape::second_moment(int quad_points) const {
  return edge_moment(*this, quad_points, [](double x) { return x * x; });
}

Cx LimitShape::Y_at(Cx x) const {
  // (1/2π) ∮ log(x - y(θ)) dθ on the uniform circle grid
  Cx acc = 0.0;
  for (double y : circle_y_) acc += std::log(x - y);
  return std::exp(acc / double(circle_y_.size()));
}

Cx LimitShape::z0_at(Cx x) const {
  const Cx m(0.0, frame_.M);
  return Y_at(x) / Y_at(x + m);
}

Cx LimitShape::z_branch(long n, Cx x) const {
  const Cx m(0.0, frame_.M);
  return std::pow(frame_.q, double(n)) * Y_at(x - double(n) * m) /
         Y_at(x + double(1 - n) * m);
}

Cx LimitShape::integrate_against_f2(const std::function<Cx(double)>& g) const {
  Cx acc = 0.0;
  for (double y : circle_y_) acc += g(y);
  return acc * (2.0 / double(circle_y_.size()));
}

VKShape vk_closed_form(double Lambda) {
  if (!(Lambda > 0.0)) throw std::domain_error("Lambda must be positive");
  return VKShape{Lambda};
}

double VKShape::f(double x) const {
  const double L2 = 2.0 * Lambda;
  if (std::abs(x) >= L2) return std::abs(x);
  return (2.0 / kPi) * (x * std::asin(x / L2) + std::sqrt(L2 * L2 - x * x));
}

double VKShape::f1(double x) const {
  const double L2 = 2.0 * Lambda;
  if (x >= L2) return 1.0;
  if (x <= -L2) return -1.0;
  return (2.0 / kPi) * std::asin(x / L2);
}

double VKShape::f2(double x) const {
  const double L2 = 2.0 * Lambda;
  if (std::abs(x) >= L2) return 0.0;
  const double u = x / L2;
  return 1.0 / (kPi * Lambda * std::sqrt(1.0 - u * u));
}

IntegralEqReport verify_integral_equation(const LimitShape& shape,
                                          int n_points, std::uint64_t seed,
                                          double tol) {
  IntegralEqReport rep;
  const Nome nome(shape.q());
  const double q = shape.q();
  const Cx m(0.0, shape.M());
  SplitMix64 rng(seed);

  auto rhs_at = [&](Cx x) {
    return 0.5 * m *
           shape.integrate_against_f2([&](double y) {
             return 1.0 / (x - y) - 1.0 / (x - y + m);
           });
  };

  for (int k = 0; k < n_points; ++k) {
    // z strictly inside the cylinder, away from both edges and z = 1
    const double r = std::pow(q, 0.15 + 0.20 * rng.uniform01());
    double phi = 2.0 * kPi * rng.uniform01();
    Cx z = std::polar(r, phi);
    if (std::abs(z - 1.0) < 0.25) z = std::polar(r, phi + 0.7);

    const Cx x = x_from_z(z, nome, shape.M());
    const Cx lhs = 1.0 / f_kernel(z, nome);
    const Cx rhs = rhs_at(x);
    const double rel =
        std::abs(lhs - rhs) / std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    rep.max_residual = std::max(rep.max_residual, rel);
    ++rep.samples;
  }

  rep.f2_mass = shape.mass();

  // tail behaviour at |x| = 10 x*: both sides ~ c/x², c ≈ m²
  const Cx xfar = 10.0 * shape.x_star() * std::polar(1.0, 0.25 * kPi);
  const Cx zfar = shape.z0_at(xfar);
  const Cx lhs_far = 1.0 / f_kernel(zfar, nome);
  const Cx rhs_far = rhs_at(xfar);
  rep.decay_ratio = std::abs(lhs_far / rhs_far);
  rep.decay_coefficient = std::abs(lhs_far * xfar * xfar / (m * m));

  rep.pass = rep.max_residual < tol && std::abs(rep.f2_mass - 2.0) < 1e-6 &&
             std::abs(rep.decay_ratio - 1.0) < 0.01;
  return rep;
}

namespace {
// Ordinary least squares for a tiny design matrix, long double QR via
// modified Gram-Schmidt on unit-normalized columns. Returns the solution
// and the R-diagonal condition proxy.
struct TinyFit {
  std::vector<double> beta;
  double rms = 0.0;
  double cond = 0.0;
};

TinyFit tiny_ls(const std::vector<std::vector<long double>>& cols,
                std::vector<long double> y) {
  const std::size_t m = y.size(), p = cols.size();
  std::vector<std::vector<long double>> qcols = cols;
  std::vector<long double> norms(p);
  for (std::size_t j = 0; j < p; ++j) {
    long double s = 0;
    for (auto v : qcols[j]) s += v * v;
    norms[j] = std::sqrt(s);
    for (auto& v : qcols[j]) v /= norms[j];
  }
  std::vector<std::vector<long double>> R(p, std::vector<long double>(p, 0));
  for (std::size_t j = 0; j < p; ++j) {
    for (std::size_t i = 0; i < j; ++i) {
      long double dot = 0;
      for (std::size_t k = 0; k < m; ++k) dot += qcols[i][k] * qcols[j][k];
      R[i][j] = dot;
      for (std::size_t k = 0; k < m; ++k) qcols[j][k] -= dot * qcols[i][k];
    }
    long double nrm = 0;
    for (std::size_t k = 0; k < m; ++k) nrm += qcols[j][k] * qcols[j][k];
    nrm = std::sqrt(nrm);
    R[j][j] = nrm;
    if (nrm == 0) throw std::domain_error("singular least-squares system");
    for (std::size_t k = 0; k < m; ++k) qcols[j][k] /= nrm;
  }
  // beta' = R^{-1} Qᵗ y (for normalized columns), then undo the scaling
  std::vector<long double> qty(p);
  for (std::size_t j = 0; j < p; ++j) {
    long double dot = 0;
    for (std::size_t k = 0; k < m; ++k) dot += qcols[j][k] * y[k];
    qty[j] = dot;
  }
  std::vector<long double> beta(p);
  for (std::size_t jj = p; jj-- > 0;) {
    long double acc = qty[jj];
    for (std::size_t k = jj + 1; k < p; ++k) acc -= R[jj][k] * beta[k];
    beta[jj] = acc / R[jj][jj];
  }
  TinyFit out;
  out.beta.resize(p);
  long double rmax = 0, rmin = 1e300L;
  for (std::size_t j = 0; j < p; ++j) {
    out.beta[j] = double(beta[j] / norms[j]);
    rmax = std::max(rmax, R[j][j]);
    rmin = std::min(rmin, R[j][j]);
  }
  out.cond = double(rmax / rmin);
  long double ss = 0;
  for (std::size_t k = 0; k < m; ++k) {
    long double pred = 0;
    for (std::size_t j = 0; j < p; ++j) pred += cols[j][k] * beta[j] / norms[j];
    ss += (y[k] - pred) * (y[k] - pred);
  }
  out.rms = std::sqrt(double(ss / (long double)m));
  return out;
}
}  // namespace

SeriesFit fit_series_coefficients(const std::vector<double>& q_list) {
  if (q_list.size() < 4)
    throw std::invalid_argument("need at least 4 nomes for the fit");
  for (double q : q_list) {
    if (!(q > 0.0 && q <= 1e-3))
      throw std::domain_error("fit nomes must lie in (0, 1e-3]");
  }
  const std::size_t m = q_list.size();
  std::vector<long double> th(m), ep(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double q = q_list[k];
    const Nome nome(q);
    const double ts = solve_theta_star(nome);
    th[k] = (long double)(ts)-kPi / 2.0;
    // Λ = 1: x*/(2Λ) = q^{-1/2} X(θ*) / 2
    ep[k] = (long double)(X_of_theta(ts, nome) / (2.0 * std::sqrt(q))) - 1.0L;
  }
  std::vector<std::vector<long double>> tc(3, std::vector<long double>(m));
  std::vector<std::vector<long double>> ec(2, std::vector<long double>(m));
  for (std::size_t k = 0; k < m; ++k) {
    const long double w = std::sqrt((long double)q_list[k]);
    tc[0][k] = w;
    tc[1][k] = w * w * w;
    tc[2][k] = w * w * w * w * w;
    ec[0][k] = q_list[k];
    ec[1][k] = (long double)q_list[k] * q_list[k] * q_list[k];
  }
  const TinyFit tfit = tiny_ls(tc, th);
  const TinyFit efit = tiny_ls(ec, ep);
  SeriesFit out;
  out.a1 = tfit.beta[0];
  out.a2 = tfit.beta[1];
  out.a3 = tfit.beta[2];
  out.b1 = efit.beta[0];
  out.b3 = efit.beta[1];
  out.theta_fit_rms = tfit.rms;
  out.endpoint_fit_rms = efit.rms;
  out.theta_cond = tfit.cond;
  out.endpoint_cond = efit.cond;
  return out;
}

LambertSolution lambert_solve(double t1, double Lambda) {
  if (!(Lambda > 0.0)) throw std::domain_error("Lambda must be positive");
  const double L2 = Lambda * Lambda;
  LambertSolution out;
  if (t1 == 0.0) {
    out.Lambda_tilde = Lambda;
    out.v_tilde = 0.0;
    out.residual = 0.0;
    return out;
  }
  auto h = [&](double u) { return u * std::exp(-2.0 * t1 * u); };
  double lo = 0.0, hi;
  if (t1 > 0.0) {
    const double u_max = 1.0 / (2.0 * t1);
    if (L2 > h(u_max))
      throw std::domain_error(
          "no principal-branch solution: Lambda^2 exceeds 1/(2 e t1)");
    hi = u_max;
  } else {
    hi = L2;
    while (h(hi) < L2) hi *= 2.0;
  }
  const double u = bisect([&](double v) { return h(v) - L2; }, lo, hi,
                          h(lo) - L2, h(hi) - L2);
  out.Lambda_tilde = std::sqrt(u);
  out.v_tilde = -t1 * u;
  out.residual = std::abs(L2 - h(u));
  return out;
}

}  // namespace ells
