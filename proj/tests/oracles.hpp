#pragma once

// Brute-force reference implementations used to check the library. Nothing here calls
// the code paths under test except for constructing inputs.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "confset/abelian.hpp"
#include "confset/integer.hpp"
#include "confset/matrix.hpp"

namespace oracle {

// ---- words in D_inf = <x, y | x^2 = y^2 = 1>

inline std::string reduce_xy(const std::string& w) {
  std::string out;
  for (char ch : w) {
    if (!out.empty() && out.back() == ch)
      out.pop_back();
    else
      out.push_back(ch);
  }
  return out;
}

/// All reduced words of length <= r, by expanding every word over {x, y}.
inline std::set<std::string> dihedral_words(unsigned r) {
  std::set<std::string> out{""};
  std::vector<std::string> frontier{""};
  for (unsigned len = 1; len <= r; ++len) {
    std::vector<std::string> next;
    for (const auto& w : frontier)
      for (char ch : {'x', 'y'}) next.push_back(w + ch);
    for (const auto& w : next) out.insert(reduce_xy(w));
    frontier = std::move(next);
  }
  return out;
}

/// Isometry t -> s*t + o of a word, acting right to left: x(t) = -t, y(t) = -t + 1.
inline std::pair<int, long> word_isometry(const std::string& w) {
  int s = 1;
  long o = 0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const long c = *it == 'x' ? 0 : 1;
    // apply letter after the current map: t -> -(s t + o) + c
    s = -s;
    o = -o + c;
  }
  return {s, o};
}

// ---- plain matrices

using Mat = std::vector<std::vector<confset::Integer>>;

inline Mat mat_identity(std::size_t n) {
  Mat m(n, std::vector<confset::Integer>(n, 0));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline Mat mat_mul(const Mat& a, const Mat& b) {
  const std::size_t r = a.size(), k = b.size(), c = b.empty() ? 0 : b[0].size();
  Mat out(r, std::vector<confset::Integer>(c, 0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t t = 0; t < k; ++t)
      for (std::size_t j = 0; j < c; ++j) out[i][j] += a[i][t] * b[t][j];
  return out;
}

inline Mat to_mat(const confset::IntMatrix& m) {
  Mat out(m.rows(), std::vector<confset::Integer>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = m(i, j);
  return out;
}

/// Bareiss fraction-free elimination.
inline confset::Integer det(Mat a) {
  const std::size_t n = a.size();
  if (n == 0) return 1;
  confset::Integer prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t swap = k + 1;
      while (swap < n && a[swap][k] == 0) ++swap;
      if (swap == n) return 0;
      std::swap(a[k], a[swap]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

// ---- finite abelian groups as Z_{d1} x ... x Z_{ds}, elements indexed by mixed radix

struct FiniteAbelian {
  std::vector<std::uint64_t> orders;
  std::vector<std::uint64_t> sums;  // addition table, filled by tabulate()

  void tabulate() {
    const auto n = size();
    sums.assign(n * n, 0);
    for (std::uint64_t a = 0; a < n; ++a)
      for (std::uint64_t b = 0; b < n; ++b) sums[a * n + b] = slow_add(a, b);
  }

  std::uint64_t size() const {
    std::uint64_t s = 1;
    for (auto d : orders) s *= d;
    return s;
  }
  std::vector<std::uint64_t> digits(std::uint64_t idx) const {
    std::vector<std::uint64_t> v(orders.size());
    for (std::size_t i = orders.size(); i-- > 0;) {
      v[i] = idx % orders[i];
      idx /= orders[i];
    }
    return v;
  }
  std::uint64_t index(const std::vector<std::uint64_t>& v) const {
    std::uint64_t idx = 0;
    for (std::size_t i = 0; i < orders.size(); ++i) idx = idx * orders[i] + v[i] % orders[i];
    return idx;
  }
  std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
    return sums.empty() ? slow_add(a, b) : sums[a * size() + b];
  }
  std::uint64_t slow_add(std::uint64_t a, std::uint64_t b) const {
    auto x = digits(a), y = digits(b);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (x[i] + y[i]) % orders[i];
    return index(x);
  }
  std::uint64_t scale(std::uint64_t a, std::uint64_t k) const {
    auto x = digits(a);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = (x[i] * (k % orders[i])) % orders[i];
    return index(x);
  }
};

using Mask = std::uint64_t;  // subgroup as a set of element indices (|G| <= 64)

inline Mask closure(const FiniteAbelian& g, Mask gens) {
  Mask s = 1;  // element 0
  bool grew = true;
  while (grew) {
    grew = false;
    for (std::uint64_t a = 0; a < g.size(); ++a) {
      if (!(s >> a & 1)) continue;
      for (std::uint64_t b = 0; b < g.size(); ++b) {
        if (!(gens >> b & 1)) continue;
        const auto c = g.add(a, b);
        if (!(s >> c & 1)) {
          s |= Mask{1} << c;
          grew = true;
        }
      }
    }
  }
  return s;
}

/// Every subgroup, as closures of growing generating sets.
inline std::set<Mask> all_subgroups(FiniteAbelian g) {
  g.tabulate();
  std::set<Mask> seen{1};
  std::vector<Mask> queue{1};
  while (!queue.empty()) {
    const Mask h = queue.back();
    queue.pop_back();
    for (std::uint64_t a = 0; a < g.size(); ++a) {
      if (h >> a & 1) continue;
      const Mask k = closure(g, h | (Mask{1} << a));
      if (seen.insert(k).second) queue.push_back(k);
    }
  }
  return seen;
}

/// Isomorphism type of G/N read off from |(G/N)[p^k]| = #{x : p^k x in N} / |N|.
/// |G| <= 64.
inline confset::FiniteAbelianType quotient_type(const FiniteAbelian& g, Mask n) {
  const auto n_size = static_cast<std::uint64_t>(std::popcount(n));
  const std::uint64_t q = g.size() / n_size;
  std::vector<std::uint64_t> cyclic;
  for (std::uint64_t p = 2; p <= q; ++p) {
    if (q % p) continue;
    bool prime = true;
    for (std::uint64_t d = 2; d * d <= p; ++d) prime = prime && p % d;
    if (!prime) continue;
    std::vector<unsigned> ge;  // ge[k-1] = number of cyclic p-parts of order >= p^k
    std::uint64_t prev = 1, pk = 1;
    for (;;) {
      pk *= p;
      std::uint64_t count = 0;
      for (std::uint64_t x = 0; x < g.size(); ++x)
        if (n >> g.scale(x, pk) & 1) ++count;
      const std::uint64_t cur = count / n_size;
      if (cur == prev) break;
      unsigned e = 0;
      for (std::uint64_t r = cur / prev; r > 1; r /= p) ++e;
      ge.push_back(e);
      prev = cur;
    }
    for (std::size_t k = 0; k < ge.size(); ++k) {
      const unsigned exactly = ge[k] - (k + 1 < ge.size() ? ge[k + 1] : 0);
      std::uint64_t order = 1;
      for (std::size_t t = 0; t <= k; ++t) order *= p;
      for (unsigned t = 0; t < exactly; ++t) cyclic.push_back(order);
    }
  }
  return confset::FiniteAbelianType::from_cyclic_orders(cyclic);
}

/// Isomorphism types of all quotients of a finite abelian group.
inline std::set<confset::FiniteAbelianType> quotient_types(const FiniteAbelian& g) {
  std::set<confset::FiniteAbelianType> out;
  for (Mask n : all_subgroups(g)) out.insert(quotient_type(g, n));
  return out;
}

/// Is the finite group L (cyclic orders `l`) a homomorphic image of Z^r x Z_{t1} x ...?
/// Tries every assignment of generator images into L; |L| <= 64.
inline bool finite_image_of(std::size_t r, const std::vector<std::uint64_t>& t, const std::vector<std::uint64_t>& l) {
  FiniteAbelian target{l, {}};
  target.tabulate();
  const std::uint64_t size = target.size();
  if (size > 64) throw std::invalid_argument("brute-force target larger than 64");
  std::vector<std::vector<std::uint64_t>> choices;
  for (std::size_t i = 0; i < r; ++i) {
    std::vector<std::uint64_t> all(size);
    std::iota(all.begin(), all.end(), 0);
    choices.push_back(all);
  }
  for (auto d : t) {
    std::vector<std::uint64_t> ok;
    for (std::uint64_t a = 0; a < size; ++a)
      if (target.scale(a, d) == 0) ok.push_back(a);
    choices.push_back(ok);
  }
  const Mask full = size == 64 ? ~Mask{0} : (Mask{1} << size) - 1;
  std::vector<std::size_t> pick(choices.size(), 0);
  for (;;) {
    Mask gens = 0;
    for (std::size_t i = 0; i < choices.size(); ++i) gens |= Mask{1} << choices[i][pick[i]];
    if (closure(target, gens) == full) return true;
    std::size_t pos = 0;
    while (pos < pick.size() && ++pick[pos] == choices[pos].size()) pick[pos++] = 0;
    if (pos == pick.size()) return false;
  }
}

/// Z^n x L is a quotient of Z^m x T iff n <= m and L is an image of Z^(m-n) x T: a surjection
/// onto Z^n splits off a free summand, and the preimage of L is its complement.
inline bool zn_l_quotient(std::size_t m, const std::vector<std::uint64_t>& t, std::size_t n,
                          const std::vector<std::uint64_t>& l) {
  if (n > m) return false;
  return finite_image_of(m - n, t, l);
}

}  // namespace oracle
