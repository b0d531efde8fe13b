#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "ells/elliptic.hpp"
#include "ells/limitshape.hpp"
#include "ells/observables.hpp"

using namespace ells;
constexpr double kPi = std::numbers::pi;

TEST_SUITE_BEGIN("limitshape");

TEST_CASE("theta_star against the small-q expansion") {
  // θ* = π/2 - q^{1/2}(2 - 8/3 q + ...)
  const double q = 1e-4;
  const double ts = solve_theta_star(Nome(q));
  const double series = kPi / 2.0 - std::sqrt(q) * (2.0 - (8.0 / 3.0) * q);
  CHECK(std::abs(ts - series) < 1e-8);
  CHECK(std::abs(X_prime(ts, Nome(q))) < 1e-13);

  // monotone decreasing on (0, 0.3]
  double prev = kPi / 2.0;
  for (double qq : {0.001, 0.01, 0.05, 0.1, 0.2, 0.3}) {
    const double t = solve_theta_star(Nome(qq));
    CHECK(t < prev);
    prev = t;
  }
  CHECK_THROWS_AS(solve_theta_star(Nome(0.0)), std::domain_error);
  CHECK_THROWS_AS(solve_theta_star(Nome(0.97)), std::domain_error);
}

TEST_CASE("theta_star residual is tiny across the validated range") {
  for (double q : {1e-6, 1e-3, 0.05, 0.3, 0.6, 0.9}) {
    const double ts = solve_theta_star(Nome(q));
    CHECK(std::abs(X_prime(ts, Nome(q))) < 1e-13);
  }
}

TEST_CASE("cut endpoint") {
  // Inozemtsev-matched at q = 0.01: x*/(2Λ) = 1 + 2q + 8q³ - 29q⁴ + 162q⁵
  const double q = 0.01, Lambda = 1.0;
  const double M = -Lambda / std::sqrt(q);
  const double xs = cut_endpoint(Nome(q), M);
  const double series = 1.0 + 2.0 * q + 8.0 * std::pow(q, 3) -
                        29.0 * std::pow(q, 4) + 162.0 * std::pow(q, 5);
  CHECK(std::abs(xs / (2.0 * Lambda) - series) < 1e-7);

  // q → 0: x* → 2Λ
  const double q0 = 1e-8;
  CHECK(cut_endpoint(Nome(q0), -1.0 / std::sqrt(q0)) ==
        doctest::Approx(2.0).epsilon(1e-6));

  // linear scaling in |M| at fixed q
  const double a = cut_endpoint(Nome(0.2), -1.0);
  const double b = cut_endpoint(Nome(0.2), -3.5);
  CHECK(b == doctest::Approx(3.5 * a).epsilon(1e-13));

  CHECK_THROWS_AS(cut_endpoint(Nome(0.2), 1.0), std::domain_error);
}

TEST_CASE("branch inversion") {
  const CutFrame fr = solve_cut_frame(0.2, -1.4);
  // x = 0: (0, π) by oddness and the continuity convention
  const auto [tp0, tm0] = invert_branches(0.0, fr);
  CHECK(tp0 == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(tm0 == doctest::Approx(kPi).epsilon(1e-12));

  for (double frac : {-0.95, -0.5, -0.1, 0.3, 0.8, 0.999}) {
    const double x = frac * fr.x_star;
    const auto [tp, tm] = invert_branches(x, fr);
    CHECK(tp > -fr.theta_star);
    CHECK(tp < fr.theta_star);
    CHECK(tm > fr.theta_star);
    CHECK(tm < 2.0 * kPi - fr.theta_star);
    const Nome nome(fr.q);
    CHECK(std::abs(-fr.M * X_of_theta(tp, nome) - x) < 1e-11);
    CHECK(std::abs(-fr.M * X_of_theta(tm, nome) - x) < 1e-11);
  }
  // continuity endpoints: θ₋(-x*) - θ₊(-x*) -> 2π
  const auto [tpm, tmm] = invert_branches(-0.999999 * fr.x_star, fr);
  CHECK(tmm - tpm > 2.0 * kPi - 0.01);

  CHECK_THROWS_AS(invert_branches(fr.x_star, fr), std::domain_error);
  CHECK_THROWS_AS(invert_branches(-1.1 * fr.x_star, fr), std::domain_error);
}

TEST_CASE("branch inversion approaches the edge at a square-root rate") {
  const CutFrame fr = solve_cut_frame(0.15, -2.0);
  const Nome nome(fr.q);
  const double x2s = X_second(fr.theta_star, nome);
  for (double eps : {1e-4, 1e-6, 1e-8}) {
    const double x = fr.x_star * (1.0 - eps);
    const auto [tp, tm] = invert_branches(x, fr);
    // θ± = θ* ∓ sqrt(2(x*-x)/(|M| |X''|)) to leading order
    const double pred = std::sqrt(2.0 * (fr.x_star - x) / (-fr.M * (-x2s)));
    CHECK(std::abs(fr.theta_star - tp) ==
          doctest::Approx(pred).epsilon(5e-3));
    CHECK(std::abs(tm - fr.theta_star) ==
          doctest::Approx(pred).epsilon(5e-3));
  }
}

TEST_CASE("Vershik-Kerov angles in the confluent limit") {
  const double q = 1e-8, Lambda = 1.0;
  const CutFrame fr = solve_cut_frame(q, -Lambda / std::sqrt(q));
  for (double xi : {-0.8, -0.3, 0.2, 0.7}) {
    const double x = xi * 2.0 * Lambda;
    const auto [tp, tm] = invert_branches(x, fr);
    CHECK(tp == doctest::Approx(std::asin(xi)).epsilon(1e-3));
    CHECK(tm == doctest::Approx(kPi - std::asin(xi)).epsilon(1e-3));
  }
}

TEST_CASE("f'' symmetry, positivity, VK degeneration") {
  {
    const CutFrame fr = solve_cut_frame(0.2, -1.0);
    for (int k = 0; k <= 50; ++k) {
      const double x = (k / 50.0) * 0.999 * fr.x_star;
      const double a = f_second(x, fr);
      const double b = f_second(-x, fr);
      CHECK(a > 0.0);
      CHECK(std::abs(a - b) < 1e-9 * std::max(1.0, a));
    }
  }
  {
    // q = 1e-5, Inozemtsev matched: f'' -> VK pointwise, rel err < 5e-3
    const double q = 1e-5, Lambda = 1.0;
    const CutFrame fr = solve_cut_frame(q, -Lambda / std::sqrt(q));
    const VKShape vk = vk_closed_form(Lambda);
    for (double xi = -0.9; xi <= 0.9; xi += 0.15) {
      const double x = xi * 2.0 * Lambda;
      CHECK(std::abs(f_second(x, fr) / vk.f2(x) - 1.0) < 5e-3);
    }
  }
}

TEST_CASE("edge law: exponent and coefficient") {
  const LimitShape shape = solve_limit_shape(0.2, -1.3);
  const CutFrame& fr = shape.frame();

  // log f'' vs log(x*-x) slope -> -1/2
  std::vector<double> lx, lf;
  for (double e = 1e-4; e >= 1e-7 / 1.01; e /= 10.0) {
    const double x = fr.x_star * (1.0 - e);
    lx.push_back(std::log(fr.x_star - x));
    lf.push_back(std::log(f_second(x, fr)));
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = double(lx.size());
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += lf[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * lf[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  CHECK(std::abs(slope + 0.5) < 0.01);

  // f''(x) sqrt(x*-x) -> edge coefficient within 1% close to the edge
  for (double e : {1e-4, 1e-6}) {
    const double x = fr.x_star * (1.0 - e);
    const double gamma_obs = f_second(x, fr) * std::sqrt(fr.x_star - x);
    CHECK(std::abs(gamma_obs / shape.edge_coefficient() - 1.0) < 0.01);
  }

  // Inozemtsev limit of the edge coefficient is 1/(π sqrt(Λ))
  const double q = 1e-6, Lambda = 1.0;
  const LimitShape vk_like = solve_limit_shape(q, -Lambda / std::sqrt(q));
  CHECK(vk_like.edge_coefficient() ==
        doctest::Approx(1.0 / (kPi * std::sqrt(Lambda))).epsilon(1e-3));
}

TEST_CASE("VK closed form") {
  const VKShape vk = vk_closed_form(0.8);
  const double L2 = 1.6;
  CHECK(vk.f(L2) == doctest::Approx(L2));
  CHECK(vk.f1(L2) == doctest::Approx(1.0));
  CHECK(vk.f(0.0) == doctest::Approx(4.0 * 0.8 / kPi));
  CHECK(vk.f2(0.0) == doctest::Approx(1.0 / (kPi * 0.8)));
  CHECK(vk.f(2.0) == 2.0);
  // C¹ matching at the edge
  CHECK(vk.f1(L2 - 1e-9) == doctest::Approx(1.0).epsilon(1e-3));
  CHECK_THROWS_AS(vk_closed_form(0.0), std::domain_error);
}

TEST_CASE("limit shape invariants across nomes") {
  for (double q : {0.001, 0.01, 0.05, 0.1, 0.2}) {
    const double Lambda = 1.0;
    const LimitShape s = solve_limit_shape(q, -Lambda / std::sqrt(q));
    const auto& g = s.grid();
    const double xs = s.x_star();

    CHECK(std::abs(g.back().f1 - 1.0) < 1e-8);
    CHECK(std::abs(g.front().f1 + 1.0) < 1e-8);
    CHECK(std::abs(g.back().f - xs) < 1e-8);
    CHECK(std::abs(g.front().f - xs) < 1e-8);

    for (std::size_t j = 0; j < g.size(); ++j) {
      CHECK(g[j].f >= std::abs(g[j].x) - 1e-12);
      CHECK(g[j].f2 > 0.0);
      // exact evenness by construction
      const auto& m = g[g.size() - 1 - j];
      CHECK(std::abs(g[j].f - m.f) < 1e-8);
      CHECK(std::abs(g[j].x + m.x) < 1e-15);
    }
    CHECK(std::abs(s.mass() - 2.0) < 1e-6);
    // f'(0) = 0 at the symmetric middle
    CHECK(std::abs(s.f1_at(0.0)) < 1e-12);
  }
}

TEST_CASE("degeneration to the arcsin law") {
  // q = 1e-3: sup over the cut of |f - f_VK| < 0.01 Λ with the common-endpoint
  // rescaling Λ' = x*/2
  const double q = 1e-3, Lambda = 1.0;
  const LimitShape s = solve_limit_shape(q, -Lambda / std::sqrt(q));
  const VKShape vk = vk_closed_form(s.x_star() / 2.0);
  double sup = 0.0;
  for (const auto& nd : s.grid()) {
    sup = std::max(sup, std::abs(nd.f - vk.f(nd.x)));
  }
  CHECK(sup < 0.01 * Lambda);

  // f'(x) -> (2/π) asin(x/2Λ) and f(0) -> 4Λ/π as q -> 0
  const double q0 = 1e-7;
  const LimitShape s0 = solve_limit_shape(q0, -Lambda / std::sqrt(q0));
  for (double xi : {-0.7, -0.2, 0.4, 0.85}) {
    const double x = xi * 2.0 * Lambda;
    CHECK(s0.f1_at(x) ==
          doctest::Approx((2.0 / kPi) * std::asin(xi)).epsilon(2e-3));
  }
  CHECK(s0.f_at(0.0) == doctest::Approx(4.0 * Lambda / kPi).epsilon(1e-4));
}

TEST_CASE("improved expansion: leading q-correction profile of f'") {
  // At fixed y = x/x*: [f'(y x*; q) - (2/π) asin y]/q -> +(4/π) y sqrt(1-y²).
  // The shape 2y sqrt(1-y²) matches the y-frame expansion; the overall sign
  // follows from the fixed-ξ expansion f' = (2/π) asin ξ - (4q/π) ξ³/√(1-ξ²)
  // composed with ξ = y(1+2q), which both this solver and a hand expansion
  // of X(θ) = 2√q sinθ + 2q sin2θ + ... confirm.
  const double q = 1e-3, Lambda = 1.0;
  const LimitShape s = solve_limit_shape(q, -Lambda / std::sqrt(q));
  for (double y : {0.2, 0.4, 0.6, 0.8}) {
    const double x = y * s.x_star();
    const auto [tp, tm] = s.branches_at(x);
    const double f1 = (tp - tm) / kPi + 1.0;
    const double correction = (f1 - (2.0 / kPi) * std::asin(y)) / q;
    const double predicted = (4.0 / kPi) * y * std::sqrt(1.0 - y * y);
    CHECK(std::abs(correction / predicted - 1.0) < 0.05);
  }

  // fixed-ξ frame: f' = (2/π) asin ξ - (4q/π) ξ³/√(1-ξ²) + O(q²)
  for (double xi : {0.2, 0.5, 0.7}) {
    const double x = xi * 2.0 * Lambda;
    const double correction = (s.f1_at(x) - (2.0 / kPi) * std::asin(xi)) / q;
    const double predicted =
        -(4.0 / kPi) * xi * xi * xi / std::sqrt(1.0 - xi * xi);
    CHECK(std::abs(correction / predicted - 1.0) < 0.05);
  }
}

TEST_CASE("second moment matches the VK value in the confluent limit") {
  const double q = 1e-6, Lambda = 1.3;
  const LimitShape s = solve_limit_shape(q, -Lambda / std::sqrt(q));
  // ∫ f'' x² dx = 4Λ² for the arcsin law
  CHECK(s.second_moment() ==
        doctest::Approx(4.0 * Lambda * Lambda).epsilon(1e-4));
}

TEST_CASE("Y reconstruction against the rational curve") {
  const double q = 1e-7, Lambda = 1.0;
  const LimitShape s = solve_limit_shape(q, -Lambda / std::sqrt(q));
  for (double xr : {2.5, 3.0, 4.0}) {
    const Cx y = s.Y_at(Cx(xr, 0.0));
    const double expect = 0.5 * (xr + std::sqrt(xr * xr - 4.0 * Lambda * Lambda));
    CHECK(std::abs(y - expect) < 2e-4 * expect);
    // rational curve: x = Y + Λ²/Y
    CHECK(std::abs(y + Lambda * Lambda / y - xr) < 1e-3);
  }
}

TEST_CASE("integral equation residuals") {
  const LimitShape s = solve_limit_shape(0.2, -1.0);
  const auto rep = verify_integral_equation(s, 20, 99);
  CHECK(rep.samples == 20);
  CHECK(rep.max_residual < 1e-6);
  CHECK(std::abs(rep.f2_mass - 2.0) < 1e-6);
  CHECK(std::abs(rep.decay_ratio - 1.0) < 0.01);
  CHECK(rep.pass);
  // tail constant is m²(1 - m/x + ...): the O(m/x) term is ≈ 4% at 10 x*
  CHECK(std::abs(rep.decay_coefficient - 1.0) < 0.1);
}

TEST_CASE("master equation with the solved shape") {
  const double q = 0.2;
  const LimitShape s = solve_limit_shape(q, -1.0);
  auto Y = [&](Cx x) { return s.Y_at(x); };
  std::vector<Cx> xs = {Cx(1.2 * s.x_star(), 0.45),
                        Cx(-0.4 * s.x_star(), 0.6)};
  std::vector<Cx> zs;
  for (int k = 0; k < 16; ++k)
    zs.push_back(std::polar(1.0, 2.0 * kPi * (k + 0.5) / 16.0));
  const auto rep = verify_master_equation(Y, q, s.M(), xs, zs, 1e-6);
  CHECK(rep.pass);

  // at z = z₀(x) both sides vanish
  const Cx x0(1.4 * s.x_star(), 0.3);
  const Cx z0 = s.z0_at(x0);
  const auto rep0 = verify_master_equation(Y, q, s.M(), {x0}, {z0}, 1.0);
  CHECK(rep0.scale < 1e-4 * std::abs(x0));

  // diagnostic branches scale like q^n toward infinity
  const Cx zb = s.z_branch(1, x0);
  CHECK(std::abs(zb) < 1.5 * q);
  CHECK(std::abs(zb) > 0.5 * q * std::abs(z0));
}

TEST_CASE("series coefficient fits") {
  const std::vector<double> qs = {1e-6, 1e-5, 1e-4, 5e-4, 1e-3};
  const SeriesFit fit = fit_series_coefficients(qs);
  CHECK(std::abs(fit.a1 + 2.0) < 1e-3);
  CHECK(std::abs(fit.a2 - 8.0 / 3.0) < 1e-3);
  CHECK(std::abs(fit.b1 - 2.0) < 1e-3);
  CHECK(fit.theta_fit_rms < 1e-9);
  CHECK(fit.endpoint_fit_rms < 1e-9);
  CHECK(fit.theta_cond > 1.0);

  CHECK_THROWS_AS(fit_series_coefficients({1e-4, 1e-3}), std::invalid_argument);
  CHECK_THROWS_AS(fit_series_coefficients({1e-4, 1e-3, 1e-2, 1e-5}),
                  std::domain_error);
}

TEST_CASE("Lambert endpoint") {
  {
    const auto sol = lambert_solve(0.0, 1.7);
    CHECK(sol.Lambda_tilde == 1.7);
    CHECK(sol.v_tilde == 0.0);
  }
  {
    const double t1 = 0.1, Lambda = 1.0;
    const auto sol = lambert_solve(t1, Lambda);
    const double u = sol.Lambda_tilde * sol.Lambda_tilde;
    CHECK(std::abs(Lambda * Lambda - u * std::exp(-2.0 * t1 * u)) < 1e-12);
    CHECK(sol.v_tilde == doctest::Approx(-t1 * u));
    CHECK(2.0 * t1 * u <= 1.0);
    CHECK(sol.residual < 1e-12);
  }
  {
    // negative time direction also solves
    const auto sol = lambert_solve(-0.2, 1.0);
    const double u = sol.Lambda_tilde * sol.Lambda_tilde;
    CHECK(std::abs(1.0 - u * std::exp(0.4 * u)) < 1e-12);
  }
  // beyond the convergence radius
  CHECK_THROWS_AS(lambert_solve(2.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(lambert_solve(0.1, -1.0), std::domain_error);
}

TEST_SUITE_END();
