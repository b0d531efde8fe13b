#include "ells/partition.hpp"

#include <algorithm>
#include <stdexcept>

namespace ells {

Partition::Partition(std::vector<int> rows) : rows_(std::move(rows)) {
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (rows_[i] <= 0) {
      throw std::invalid_argument("Partition rows must be positive");
    }
    if (i > 0 && rows_[i] > rows_[i - 1]) {
      throw std::invalid_argument("Partition rows must be weakly decreasing");
    }
    size_ += rows_[i];
  }
}

int Partition::col(int j) const {
  if (j < 1) return 0;
  // rows_ is sorted decreasing: count entries >= j
  auto it = std::lower_bound(rows_.begin(), rows_.end(), j,
                             [](int row, int v) { return row >= v; });
  return static_cast<int>(it - rows_.begin());
}

Partition Partition::transpose() const {
  std::vector<int> t;
  if (!rows_.empty()) {
    t.resize(rows_[0]);
    for (int j = 1; j <= rows_[0]; ++j) t[j - 1] = col(j);
  }
  return Partition(std::move(t));
}

int Partition::arm(Box b) const {
  if (!contains(b)) throw std::domain_error("box outside diagram");
  return row(b.i) - b.j;
}

int Partition::leg(Box b) const {
  if (!contains(b)) throw std::domain_error("box outside diagram");
  return col(b.j) - b.i;
}

int Partition::hook(Box b) const {
  if (!contains(b)) throw std::domain_error("box outside diagram");
  return row(b.i) - b.j + col(b.j) - b.i + 1;
}

std::vector<Box> Partition::boxes() const {
  std::vector<Box> out;
  out.reserve(static_cast<std::size_t>(size_));
  for (int i = 1; i <= length(); ++i)
    for (int j = 1; j <= row(i); ++j) out.push_back({i, j});
  return out;
}

std::pair<std::vector<Box>, std::vector<Box>> Partition::boundary() const {
  std::vector<Box> addable, removable;
  const int ell = length();
  for (int i = 1; i <= ell + 1; ++i) {
    const int here = row(i);
    const int above = (i == 1) ? here + 1 : row(i - 1);
    if (here < above) addable.push_back({i, here + 1});
    if (i <= ell && here > row(i + 1)) removable.push_back({i, here});
  }
  return {std::move(addable), std::move(removable)};
}

std::string Partition::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(rows_[i]);
  }
  s += ']';
  return s;
}

BigInt factorial(long long n) {
  BigInt f = 1;
  for (long long k = 2; k <= n; ++k) f *= k;
  return f;
}

BigInt dimension(const Partition& lam) {
  BigInt prod = 1;
  for (const Box& b : lam.boxes()) prod *= lam.hook(b);
  return factorial(lam.size()) / prod;  // exact by the hook length formula
}

BigRat zeta_neg(int k) {
  // ζ(-k) = -B_{k+1}/(k+1); zero for even k.
  static const BigRat table[12] = {
      BigRat(-1, 12), BigRat(0),          BigRat(1, 120),  BigRat(0),
      BigRat(-1, 252), BigRat(0),         BigRat(1, 240),  BigRat(0),
      BigRat(-1, 132), BigRat(0),         BigRat(691, 32760), BigRat(0)};
  if (k < 1 || k > 12) {
    throw std::out_of_range("zeta_neg supports 1 <= k <= 12");
  }
  return table[k - 1];
}

static BigRat half_int_pow(long long twice, int k) {
  // (twice/2)^k as an exact rational
  BigInt num = 1;
  for (int t = 0; t < k; ++t) num *= twice;
  BigInt den = BigInt(1) << k;
  return BigRat(num, den);
}

BigRat moment_pk_sum_part(const Partition& lam, int k) {
  if (k < 1) throw std::out_of_range("moment order must be >= 1");
  BigRat sum = 0;
  for (int i = 1; i <= lam.length(); ++i) {
    sum += half_int_pow(2LL * lam.row(i) - 2 * i + 1, k);
    sum -= half_int_pow(-2LL * i + 1, k);
  }
  return sum;
}

BigRat moment_pk(const Partition& lam, int k) {
  const BigRat zk = zeta_neg(k);  // range check happens here
  BigRat prefactor = 1 - BigRat(1, BigInt(1) << k);
  return prefactor * zk + moment_pk_sum_part(lam, k);
}

static void enum_rec(int remaining, int max_row, std::vector<int>& acc,
                     std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back(Partition(acc));
    return;
  }
  for (int r = std::min(remaining, max_row); r >= 1; --r) {
    acc.push_back(r);
    enum_rec(remaining - r, r, acc, out);
    acc.pop_back();
  }
}

std::vector<Partition> partitions_of(int n) {
  if (n < 0) throw std::invalid_argument("partition size must be >= 0");
  std::vector<Partition> out;
  std::vector<int> acc;
  enum_rec(n, n, acc, out);
  return out;
}

std::vector<Partition> partitions_up_to(int max_size) {
  std::vector<Partition> out;
  for (int n = 0; n <= max_size; ++n) {
    auto part = partitions_of(n);
    out.insert(out.end(), std::make_move_iterator(part.begin()),
               std::make_move_iterator(part.end()));
  }
  return out;
}

}  // namespace ells
