#include "confset/abelian.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "confset/smith.hpp"
#include "text_cursor.hpp"

namespace confset {

namespace {

std::uint64_t mul_checked(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("abelian group order exceeds 64 bits");
  return r;
}

std::uint64_t ipow(std::uint64_t p, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r = mul_checked(r, p);
  return r;
}

// (prime, exponent) of a prime power
std::pair<std::uint64_t, unsigned> split_prime_power(std::uint64_t q) {
  const auto f = factorize(q);
  return f.front();
}

std::string join_u64(const std::vector<std::uint64_t>& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + ")";
}

}  // namespace

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::uint64_t next_prime(std::uint64_t n) {
  std::uint64_t c = n + 1;
  while (!is_prime(c)) ++c;
  return c;
}

std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n) {
  if (n == 0) throw DomainError("cannot factorize 0");
  std::vector<std::pair<std::uint64_t, unsigned>> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d) continue;
    unsigned e = 0;
    while (n % d == 0) {
      n /= d;
      ++e;
    }
    out.emplace_back(d, e);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<std::uint64_t> primes_up_to(std::uint64_t bound) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p <= bound; ++p)
    if (is_prime(p)) out.push_back(p);
  return out;
}

// ---- FiniteAbelianType

FiniteAbelianType FiniteAbelianType::from_cyclic_orders(const std::vector<std::uint64_t>& orders) {
  FiniteAbelianType t;
  for (auto o : orders) {
    if (o == 0) throw DomainError("cyclic order 0 is not finite");
    for (auto [p, e] : factorize(o)) t.parts_.push_back(ipow(p, e));
  }
  std::sort(t.parts_.begin(), t.parts_.end(), [](std::uint64_t a, std::uint64_t b) {
    const auto pa = split_prime_power(a), pb = split_prime_power(b);
    return pa < pb;
  });
  return t;
}

std::uint64_t FiniteAbelianType::order() const {
  std::uint64_t r = 1;
  for (auto q : parts_) r = mul_checked(r, q);
  return r;
}

std::vector<std::uint64_t> FiniteAbelianType::primes() const {
  std::vector<std::uint64_t> ps;
  for (auto q : parts_) {
    const auto p = split_prime_power(q).first;
    if (ps.empty() || ps.back() != p) ps.push_back(p);
  }
  return ps;
}

std::vector<unsigned> FiniteAbelianType::primary_partition(std::uint64_t p) const {
  std::vector<unsigned> lambda;
  for (auto q : parts_) {
    const auto [r, e] = split_prime_power(q);
    if (r == p) lambda.push_back(e);
  }
  std::sort(lambda.rbegin(), lambda.rend());
  return lambda;
}

std::vector<std::uint64_t> FiniteAbelianType::invariant_factors() const {
  std::size_t count = 0;
  for (auto p : primes()) count = std::max(count, primary_partition(p).size());
  std::vector<std::uint64_t> d(count, 1);  // d[0] is the largest
  for (auto p : primes()) {
    const auto lambda = primary_partition(p);
    for (std::size_t i = 0; i < lambda.size(); ++i) d[i] = mul_checked(d[i], ipow(p, lambda[i]));
  }
  std::reverse(d.begin(), d.end());
  return d;
}

std::string FiniteAbelianType::to_string() const {
  if (parts_.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < parts_.size(); ++i) s += (i ? " x Z" : "Z") + std::to_string(parts_[i]);
  return s;
}

namespace {

void partitions_of(unsigned n, unsigned max_part, std::vector<unsigned>& cur, std::vector<std::vector<unsigned>>& out) {
  if (n == 0) {
    out.push_back(cur);
    return;
  }
  for (unsigned k = std::min(n, max_part); k >= 1; --k) {
    cur.push_back(k);
    partitions_of(n - k, k, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<FiniteAbelianType> finite_abelian_types_up_to(std::uint64_t bound) {
  std::vector<FiniteAbelianType> out;
  for (std::uint64_t n = 1; n <= bound; ++n) {
    std::vector<std::vector<std::uint64_t>> combos{{}};
    for (auto [p, e] : factorize(n)) {
      std::vector<std::vector<unsigned>> parts;
      std::vector<unsigned> cur;
      partitions_of(e, e, cur, parts);
      std::vector<std::vector<std::uint64_t>> next;
      for (const auto& base : combos)
        for (const auto& lambda : parts) {
          auto c = base;
          for (auto k : lambda) c.push_back(ipow(p, k));
          next.push_back(std::move(c));
        }
      combos = std::move(next);
    }
    std::vector<FiniteAbelianType> of_order;
    for (const auto& c : combos) of_order.push_back(FiniteAbelianType::from_cyclic_orders(c));
    std::sort(of_order.begin(), of_order.end());
    out.insert(out.end(), of_order.begin(), of_order.end());
  }
  return out;
}

// ---- AbelianGroup

AbelianGroup::AbelianGroup(std::size_t free_rank, const std::vector<std::uint64_t>& cyclic_orders)
    : rank_(free_rank), factors_(FiniteAbelianType::from_cyclic_orders(cyclic_orders).invariant_factors()) {}

AbelianGroup AbelianGroup::from_relations(const IntMatrix& relations) {
  const auto snf = smith_normal_form(relations);
  std::size_t nonzero = 0;
  std::vector<std::uint64_t> torsion;
  for (const auto& d : snf.factors) {
    if (d == 0) continue;
    ++nonzero;
    if (!d.fits_ulong_p()) throw OverflowError("invariant factor " + d.get_str() + " exceeds 64 bits");
    if (d != 1) torsion.push_back(d.get_ui());
  }
  return AbelianGroup(relations.cols() - nonzero, torsion);
}

AbelianGroup AbelianGroup::parse(std::string_view text) {
  detail::Cursor c(text);
  std::size_t rank = 0;
  std::vector<std::uint64_t> orders;
  do {
    if (c.accept('0') || c.accept('1')) continue;
    if (!c.accept('Z')) c.fail("expected Z, Zd or 0");
    c.accept('_');
    std::uint64_t order = 0;
    if (std::isdigit(static_cast<unsigned char>(c.peek_raw()))) {
      const auto v = c.integer();
      if (v < 1) c.fail("cyclic orders are positive");
      order = static_cast<std::uint64_t>(v);
    }
    std::int64_t copies = 1;
    if (c.accept('^')) {
      copies = c.integer();
      if (copies < 0) c.fail("negative exponent");
    }
    for (std::int64_t i = 0; i < copies; ++i) {
      if (order == 0)
        ++rank;
      else
        orders.push_back(order);
    }
  } while (c.accept('+') || c.accept_keyword("x"));
  if (!c.at_end()) c.fail("unexpected trailing input");
  return AbelianGroup(rank, orders);
}

std::uint64_t AbelianGroup::torsion_order() const {
  std::uint64_t r = 1;
  for (auto d : factors_) r = mul_checked(r, d);
  return r;
}

std::string AbelianGroup::to_string() const {
  std::vector<std::string> terms;
  if (rank_ == 1) terms.push_back("Z");
  if (rank_ > 1) terms.push_back("Z^" + std::to_string(rank_));
  for (auto d : factors_) terms.push_back("Z" + std::to_string(d));
  if (terms.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) s += (i ? " + " : "") + terms[i];
  return s;
}

std::string QuotientType::to_string() const {
  std::string s;
  if (rank == 1) s = "Z";
  if (rank > 1) s = "Z^" + std::to_string(rank);
  if (torsion.trivial()) return s.empty() ? "1" : s;
  return s.empty() ? torsion.to_string() : s + " x " + torsion.to_string();
}

std::string QuotientWitness::to_string() const { return join_u64(exponents); }

// ---- quotients

QuotientType quotient_of_witness(const AbelianGroup& g, const QuotientWitness& w) {
  const auto parts = g.torsion().parts();
  if (w.exponents.size() != g.free_rank() + parts.size())
    throw DomainError("witness has " + std::to_string(w.exponents.size()) + " exponents, basis has " +
                      std::to_string(g.free_rank() + parts.size()));
  QuotientType q;
  std::vector<std::uint64_t> cyclic;
  for (std::size_t i = 0; i < g.free_rank(); ++i) {
    if (w.exponents[i] == 0)
      ++q.rank;
    else
      cyclic.push_back(w.exponents[i]);
  }
  for (std::size_t j = 0; j < parts.size(); ++j)
    cyclic.push_back(std::gcd(w.exponents[g.free_rank() + j], parts[j]));
  q.torsion = FiniteAbelianType::from_cyclic_orders(cyclic);
  return q;
}

bool is_quotient(const AbelianGroup& g, const QuotientType& q) {
  if (q.rank > g.free_rank()) return false;
  const std::size_t r = g.free_rank() - q.rank;
  const auto tg = g.torsion();
  for (auto p : q.torsion.primes()) {
    const auto lambda = q.torsion.primary_partition(p);
    const auto mu = tg.primary_partition(p);
    for (std::size_t i = r; i < lambda.size(); ++i) {
      const unsigned bound = i - r < mu.size() ? mu[i - r] : 0;
      if (lambda[i] > bound) return false;
    }
  }
  return true;
}

namespace {

// Diagonal witness with free generators [0, keep) kept infinite, the target torsion hosted
// by free generators [keep, m) (largest parts first) and then by G's own torsion.
std::optional<QuotientWitness> build_witness(const AbelianGroup& g, std::size_t keep, const FiniteAbelianType& t) {
  if (!is_quotient(g, {keep, t})) return std::nullopt;
  const std::size_t m = g.free_rank();
  const auto parts = g.torsion().parts();
  QuotientWitness w;
  w.exponents.assign(m + parts.size(), 1);
  for (std::size_t i = 0; i < keep; ++i) w.exponents[i] = 0;
  const std::size_t r = m - keep;
  for (auto p : t.primes()) {
    const auto lambda = t.primary_partition(p);
    // G's p-torsion generators, largest first
    std::vector<std::size_t> hosts;
    for (std::size_t j = parts.size(); j-- > 0;)
      if (split_prime_power(parts[j]).first == p) hosts.push_back(m + j);
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      const std::uint64_t q = ipow(p, lambda[i]);
      if (i < r)
        w.exponents[keep + i] = mul_checked(w.exponents[keep + i], q);
      else
        w.exponents[hosts.at(i - r)] = q;
    }
  }
  if (!(quotient_of_witness(g, w) == QuotientType{keep, t}))
    throw std::logic_error("witness construction failed for " + g.to_string());
  return w;
}

}  // namespace

std::optional<QuotientWitness> quotient_witness(const AbelianGroup& g, const QuotientType& q) {
  if (q.rank > g.free_rank()) return std::nullopt;
  return build_witness(g, q.rank, q.torsion);
}

std::vector<QuotientEntry> quotient_types(const AbelianGroup& g, std::size_t rank_bound, std::uint64_t torsion_bound) {
  std::vector<QuotientEntry> out;
  const auto types = finite_abelian_types_up_to(torsion_bound);
  for (std::size_t a = 0; a <= std::min(rank_bound, g.free_rank()); ++a)
    for (const auto& t : types)
      if (auto w = quotient_witness(g, {a, t})) out.push_back({{a, t}, *w});
  std::sort(out.begin(), out.end(), [](const QuotientEntry& x, const QuotientEntry& y) { return x.type < y.type; });
  return out;
}

ZnLDecision decide_Zn_L_quotient(const AbelianGroup& g, std::size_t n, const FiniteAbelianType& l) {
  ZnLDecision d;
  if (n > g.free_rank()) return d;
  d.prime = next_prime(std::max(mul_checked(l.order(), g.torsion_order()), l.order()));

  // witness for Z_p^n x L with the Z_p factors on free generators 1..n
  const AbelianGroup rest(g.free_rank() - n, g.invariant_factors());
  const auto inner = build_witness(rest, 0, l);
  if (!inner) return d;
  QuotientWitness prime_witness;
  prime_witness.exponents.assign(n, d.prime);
  prime_witness.exponents.insert(prime_witness.exponents.end(), inner->exponents.begin(), inner->exponents.end());
  std::vector<std::uint64_t> target = l.parts();
  target.insert(target.end(), n, d.prime);
  if (!(quotient_of_witness(g, prime_witness) == QuotientType{0, FiniteAbelianType::from_cyclic_orders(target)}))
    throw std::logic_error("prime witness construction failed for " + g.to_string());

  QuotientWitness w = prime_witness;
  for (std::size_t i = 0; i < n; ++i) w.exponents[i] = 0;
  if (!(quotient_of_witness(g, w) == QuotientType{n, l}))
    throw std::logic_error("witness construction failed for " + g.to_string());
  d.quotient = true;
  d.witness = std::move(w);
  d.prime_witness = std::move(prime_witness);
  return d;
}

FaConsistencyReport fa_consistency(const AbelianGroup& g, std::size_t n, const FiniteAbelianType& l,
                                   const std::vector<std::uint64_t>& primes) {
  if (primes.empty()) throw DomainError("insufficient prime list: empty");
  for (auto p : primes)
    if (!is_prime(p)) throw DomainError("insufficient prime list: " + std::to_string(p) + " is not prime");
  const std::uint64_t need = mul_checked(l.order(), g.torsion_order());
  const std::uint64_t largest = *std::max_element(primes.begin(), primes.end());
  if (largest <= need)
    throw DomainError("insufficient prime list: largest prime " + std::to_string(largest) + " does not exceed |L|*|T_G| = " +
                      std::to_string(need));

  FaConsistencyReport r;
  r.all_primes = true;
  for (auto p : primes) {
    std::vector<std::uint64_t> target = l.parts();
    target.insert(target.end(), n, p);
    FaPrimeRow row;
    row.prime = p;
    row.witness = quotient_witness(g, {0, FiniteAbelianType::from_cyclic_orders(target)});
    row.quotient = row.witness.has_value();
    r.all_primes = r.all_primes && row.quotient;
    r.rows.push_back(std::move(row));
  }
  r.decided = decide_Zn_L_quotient(g, n, l).quotient;
  r.consistent = r.all_primes == r.decided;
  if (!r.consistent) {
    const std::string target = QuotientType{n, l}.to_string();
    if (r.all_primes) {
      r.discrepancies.push_back("Z_p^" + std::to_string(n) + " x " + l.to_string() +
                                " is a quotient for every listed prime but " + target + " is not a quotient of " +
                                g.to_string());
    } else {
      for (const auto& row : r.rows)
        if (!row.quotient)
          r.discrepancies.push_back(target + " is a quotient of " + g.to_string() + " but Z_" +
                                    std::to_string(row.prime) + "^" + std::to_string(n) + " x " + l.to_string() +
                                    " is not");
    }
  }
  return r;
}

std::string FaConsistencyReport::to_string() const {
  std::ostringstream os;
  for (const auto& row : rows) {
    os << "p=" << row.prime << ' ' << (row.quotient ? "yes" : "no");
    if (row.witness) os << " witness " << row.witness->to_string();
    os << '\n';
  }
  os << "all-primes " << (all_primes ? "yes" : "no") << '\n';
  os << "decided " << (decided ? "yes" : "no") << '\n';
  os << (consistent ? (decided ? "consistent-yes" : "consistent-no") : "inconsistent") << '\n';
  for (const auto& d : discrepancies) os << "discrepancy: " << d << '\n';
  return os.str();
}

}  // namespace confset
