#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "doctest.h"
#include "ells/partition.hpp"
#include "ells/profile.hpp"

using namespace ells;

namespace {

// Independent tableau counter: branching recursion over removable corners.
BigInt syt_count(const Partition& lam) {
  if (lam.size() == 0) return 1;
  BigInt total = 0;
  auto [addable, removable] = lam.boundary();
  for (const Box& b : removable) {
    std::vector<int> rows = lam.rows();
    rows[static_cast<std::size_t>(b.i - 1)] -= 1;
    if (!rows.empty() && rows.back() == 0) rows.pop_back();
    total += syt_count(Partition(rows));
  }
  return total;
}

std::multiset<int> hook_multiset(const Partition& lam) {
  std::multiset<int> out;
  for (const Box& b : lam.boxes()) out.insert(lam.hook(b));
  return out;
}

}  // namespace

TEST_SUITE_BEGIN("partition");

TEST_CASE("partition construction and validation") {
  CHECK(Partition{}.size() == 0);
  CHECK(Partition({3, 2}).size() == 5);
  CHECK(Partition({3, 2}).to_string() == "[3,2]");
  CHECK(Partition{}.to_string() == "[]");
  CHECK_THROWS_AS(Partition({2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(Partition({1, 0}), std::invalid_argument);
}

TEST_CASE("content sign convention is i - j") {
  CHECK(content({1, 2}) == -1);
  CHECK(content({2, 1}) == 1);
  CHECK(content({1, 1}) == 0);
}

TEST_CASE("hook lengths") {
  const Partition lam21({2, 1});
  CHECK(lam21.hook({1, 1}) == 3);
  CHECK(Partition({1}).hook({1, 1}) == 1);

  const Partition lam32({3, 2});
  const std::map<std::pair<int, int>, int> expect = {
      {{1, 1}, 4}, {{1, 2}, 3}, {{1, 3}, 1}, {{2, 1}, 2}, {{2, 2}, 1}};
  for (const auto& [bj, h] : expect) {
    CHECK(lam32.hook({bj.first, bj.second}) == h);
  }
  CHECK_THROWS_AS(lam32.hook({3, 1}), std::domain_error);
  CHECK_THROWS_AS(lam32.hook({1, 4}), std::domain_error);

  // hook = arm + leg + 1 everywhere
  for (const Partition& lam : partitions_up_to(6)) {
    for (const Box& b : lam.boxes()) {
      CHECK(lam.hook(b) == lam.arm(b) + lam.leg(b) + 1);
    }
  }
}

TEST_CASE("dimension against brute-force tableau enumeration") {
  CHECK(dimension(Partition({2, 1})) == 2);
  CHECK(dimension(Partition{}) == 1);
  CHECK(dimension(Partition({2, 2})) == 2);
  for (const Partition& lam : partitions_up_to(8)) {
    CHECK(dimension(lam) == syt_count(lam));
  }
}

TEST_CASE("hook formula consistency up to size 12") {
  for (const Partition& lam : partitions_up_to(12)) {
    BigInt prod = dimension(lam);
    for (const Box& b : lam.boxes()) prod *= lam.hook(b);
    CHECK(prod == factorial(lam.size()));
  }
}

TEST_CASE("sum of squared dimensions is N!") {
  for (int n = 0; n <= 10; ++n) {
    BigInt acc = 0;
    for (const Partition& lam : partitions_of(n)) {
      const BigInt d = dimension(lam);
      acc += d * d;
    }
    CHECK(acc == factorial(n));
  }
}

TEST_CASE("boundary boxes") {
  auto [a0, r0] = Partition{}.boundary();
  CHECK(a0 == std::vector<Box>{{1, 1}});
  CHECK(r0.empty());

  auto [a1, r1] = Partition({1}).boundary();
  CHECK(a1 == std::vector<Box>{{1, 2}, {2, 1}});
  CHECK(r1 == std::vector<Box>{{1, 1}});

  auto [a2, r2] = Partition({2, 1}).boundary();
  CHECK(a2 == std::vector<Box>{{1, 3}, {2, 2}, {3, 1}});
  CHECK(r2 == std::vector<Box>{{1, 2}, {2, 1}});

  for (const Partition& lam : partitions_up_to(8)) {
    auto [add, rem] = lam.boundary();
    CHECK(add.size() == rem.size() + 1);
    // adding any addable box then removing it returns λ
    for (const Box& b : add) {
      std::vector<int> rows = lam.rows();
      if (b.i > lam.length()) rows.push_back(1);
      else rows[static_cast<std::size_t>(b.i - 1)] += 1;
      const Partition bigger(rows);
      auto [a2x, r2x] = bigger.boundary();
      CHECK(std::find(r2x.begin(), r2x.end(), b) != r2x.end());
      rows[static_cast<std::size_t>(b.i - 1)] -= 1;
      if (rows.back() == 0) rows.pop_back();
      CHECK(Partition(rows) == lam);
    }
  }
}

TEST_CASE("transpose properties") {
  CHECK(Partition({3, 2}).transpose() == Partition({2, 2, 1}));
  for (const Partition& lam : partitions_up_to(8)) {
    const Partition lt = lam.transpose();
    CHECK(lt.transpose() == lam);
    CHECK(lt.size() == lam.size());
    CHECK(hook_multiset(lt) == hook_multiset(lam));
  }
}

TEST_CASE("profile examples") {
  const Profile p0(Partition{}, 1.0);
  for (double x : {-2.0, -0.5, 0.0, 0.7, 3.0}) {
    CHECK(p0(x) == doctest::Approx(std::abs(x)).epsilon(1e-15));
  }

  const Profile p1(Partition({1}), 1.0);
  CHECK(p1(0.0) == doctest::Approx(2.0));
  CHECK(p1(1.0) == doctest::Approx(1.0));
  CHECK(p1(-1.0) == doctest::Approx(1.0));
  CHECK(p1(1.5) == doctest::Approx(1.5));
  CHECK(p1(-3.0) == doctest::Approx(3.0));
}

TEST_CASE("profile invariants and exact area") {
  for (const Partition& lam : partitions_up_to(6)) {
    for (double hbar : {1.0, 0.5}) {
      const Profile p(lam, hbar);
      // ∫(f - |x|) dx = 2 ħ² |λ| exactly
      CHECK(p.excess_area_units() == BigRat(2 * lam.size()));
      CHECK(p.excess_area() ==
            doctest::Approx(2.0 * hbar * hbar * double(lam.size())));
      // slopes alternate between +1 and -1 in ħ units
      for (std::size_t k = 1; k < p.kink_count(); ++k) {
        const long long dx = p.kink_x_units(k) - p.kink_x_units(k - 1);
        const long long df = p.kink_f_units(k) - p.kink_f_units(k - 1);
        CHECK(std::abs(df) == dx);
      }
      // f ≥ |x| at every integer point of the support
      for (long long t = p.kink_x_units(0) - 1;
           t <= p.kink_x_units(p.kink_count() - 1) + 1; ++t) {
        CHECK(Profile::eval_units(lam.rows(), t) >= std::llabs(t));
      }
      // 1-Lipschitz on a float grid
      double prev = p(-6.0);
      for (double x = -6.0 + 0.01; x <= 6.0; x += 0.01) {
        const double cur = p(x);
        CHECK(std::abs(cur - prev) <= 0.01 + 1e-12);
        prev = cur;
      }
    }
  }
}

TEST_CASE("profile transpose mirror") {
  for (const Partition& lam : partitions_up_to(6)) {
    const Profile p(lam, 1.0);
    const Profile pt(lam.transpose(), 1.0);
    for (double x = -7.0; x <= 7.0; x += 0.37) {
      CHECK(p(x) == doctest::Approx(pt(-x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("moments") {
  CHECK(moment_pk(Partition{}, 1) == BigRat(-1, 24));
  CHECK(moment_pk(Partition{}, 2) == BigRat(0));
  CHECK(moment_pk(Partition({1}), 1) == BigRat(23, 24));
  CHECK_THROWS_AS(moment_pk(Partition({1}), 13), std::out_of_range);
  CHECK(zeta_neg(1) == BigRat(-1, 12));
  CHECK(zeta_neg(2) == BigRat(0));
  CHECK(zeta_neg(3) == BigRat(1, 120));

  // p_1 - constant = |λ|
  for (const Partition& lam : partitions_up_to(6)) {
    CHECK(moment_pk_sum_part(lam, 1) == BigRat(lam.size()));
  }
}

TEST_CASE("moment transpose relation (observed: sum part flips by (-1)^{k+1})") {
  for (const Partition& lam : partitions_up_to(6)) {
    const Partition lt = lam.transpose();
    for (int k = 1; k <= 4; ++k) {
      const BigRat s = moment_pk_sum_part(lam, k);
      const BigRat st = moment_pk_sum_part(lt, k);
      if (k % 2 == 1) {
        CHECK(st == s);
      } else {
        CHECK(st == -s);
      }
    }
  }
}

TEST_CASE("partition enumeration") {
  CHECK(partitions_of(0).size() == 1);
  const std::vector<std::size_t> counts = {1, 1, 2, 3, 5};
  for (int n = 0; n <= 4; ++n) {
    CHECK(partitions_of(n).size() == counts[static_cast<std::size_t>(n)]);
  }
  // Σ p(n) for n ≤ 10: 1+1+2+3+5+7+11+15+22+30+42
  const auto all = partitions_up_to(10);
  CHECK(all.size() == 139);
  // grouped by size, each exactly once
  std::set<std::vector<int>> seen;
  long long prev_size = 0;
  for (const Partition& lam : all) {
    CHECK(lam.size() >= prev_size);
    prev_size = lam.size();
    CHECK(seen.insert(lam.rows()).second);
  }
}

TEST_SUITE_END();
