#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confset/matrix.hpp"

namespace confset {

bool is_prime(std::uint64_t n);
/// Smallest prime strictly greater than n.
std::uint64_t next_prime(std::uint64_t n);
/// Prime factorization as ascending (prime, exponent) pairs; empty for 1.
std::vector<std::pair<std::uint64_t, unsigned>> factorize(std::uint64_t n);
std::vector<std::uint64_t> primes_up_to(std::uint64_t bound);

/// Finite abelian group as a multiset of prime-power cyclic orders, ascending by (p, p^a).
class FiniteAbelianType {
 public:
  FiniteAbelianType() = default;
  /// Any list of cyclic orders >= 1; each is split into prime powers, 1s are dropped.
  static FiniteAbelianType from_cyclic_orders(const std::vector<std::uint64_t>& orders);

  [[nodiscard]] const std::vector<std::uint64_t>& parts() const noexcept { return parts_; }
  [[nodiscard]] bool trivial() const noexcept { return parts_.empty(); }
  [[nodiscard]] std::uint64_t order() const;
  /// d_1 | d_2 | ... , each >= 2.
  [[nodiscard]] std::vector<std::uint64_t> invariant_factors() const;
  /// Exponents of the p-primary part, descending: the partition of the p-part.
  [[nodiscard]] std::vector<unsigned> primary_partition(std::uint64_t p) const;
  [[nodiscard]] std::vector<std::uint64_t> primes() const;
  /// "Z2 x Z4", or "1" when trivial.
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const FiniteAbelianType&, const FiniteAbelianType&) = default;
  friend auto operator<=>(const FiniteAbelianType& a, const FiniteAbelianType& b) { return a.parts_ <=> b.parts_; }

 private:
  std::vector<std::uint64_t> parts_;
};

/// All finite abelian types of order <= bound (order 1 included), sorted by (order, parts).
std::vector<FiniteAbelianType> finite_abelian_types_up_to(std::uint64_t bound);

/// Z^m + Z_{d_1} + ... + Z_{d_s} with d_1 | ... | d_s, each d_i >= 2.
class AbelianGroup {
 public:
  AbelianGroup() = default;
  /// Normalizes any list of cyclic orders (>= 1) into invariant-factor form.
  AbelianGroup(std::size_t free_rank, const std::vector<std::uint64_t>& cyclic_orders);
  /// Cokernel of the relation matrix: generators are columns, each row is a relation.
  static AbelianGroup from_relations(const IntMatrix& relations);
  /// `Z^2 + Z4 + Z8`, `Z + Z6`, `Z4^2`, `0`.
  static AbelianGroup parse(std::string_view text);

  [[nodiscard]] std::size_t free_rank() const noexcept { return rank_; }
  [[nodiscard]] const std::vector<std::uint64_t>& invariant_factors() const noexcept { return factors_; }
  [[nodiscard]] FiniteAbelianType torsion() const { return FiniteAbelianType::from_cyclic_orders(factors_); }
  [[nodiscard]] std::uint64_t torsion_order() const;
  [[nodiscard]] bool finite() const noexcept { return rank_ == 0; }
  /// Free generators first, then one generator per elementary divisor in torsion().parts() order.
  [[nodiscard]] std::size_t basis_size() const { return rank_ + torsion().parts().size(); }
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const AbelianGroup&, const AbelianGroup&) = default;

 private:
  std::size_t rank_ = 0;
  std::vector<std::uint64_t> factors_;
};

/// Z^rank x torsion.
struct QuotientType {
  std::size_t rank = 0;
  FiniteAbelianType torsion;

  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const QuotientType&, const QuotientType&) = default;
  friend auto operator<=>(const QuotientType& a, const QuotientType& b) {
    if (a.rank != b.rank) return a.rank <=> b.rank;
    return a.torsion <=> b.torsion;
  }
};

/// Exponents (d_1, ..., d_{m+k}) over the elementary-divisor basis (g_1..g_m free, h_1..h_k
/// torsion of order p_j^a_j). The subgroup M = <g_i^{d_i}, h_j^{d_{m+j}}> has
/// G/M = (+) Z/d_i (Z when d_i = 0) (+) (+) Z/gcd(d_{m+j}, p_j^a_j).
struct QuotientWitness {
  std::vector<std::uint64_t> exponents;

  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const QuotientWitness&, const QuotientWitness&) = default;
};

/// Quotient G/M for the witness above; throws DomainError on a length mismatch.
QuotientType quotient_of_witness(const AbelianGroup& g, const QuotientWitness& w);

/// Exact criterion: Z^a x T is a quotient of G iff a <= m and, for every prime p, the
/// partition lambda of T_p and mu of (T_G)_p satisfy lambda_{i+m-a} <= mu_i.
bool is_quotient(const AbelianGroup& g, const QuotientType& q);
/// Diagonal witness for a quotient type, or nullopt when it is not a quotient.
std::optional<QuotientWitness> quotient_witness(const AbelianGroup& g, const QuotientType& q);

struct QuotientEntry {
  QuotientType type;
  QuotientWitness witness;
};

/// Every Z^a x T with a <= rank_bound and |T| <= torsion_bound that is a quotient of G,
/// in canonical order, each with a checked witness.
std::vector<QuotientEntry> quotient_types(const AbelianGroup& g, std::size_t rank_bound, std::uint64_t torsion_bound);

struct ZnLDecision {
  bool quotient = false;
  std::optional<QuotientWitness> witness;
  /// Prime used for the intermediate Z_p^n x L witness (0 when undecided by size).
  std::uint64_t prime = 0;
  std::optional<QuotientWitness> prime_witness;
};

/// Is Z^n x L a quotient of G? The witness is obtained from one for Z_p^n x L with
/// p > |L| * |T_G| carried by n free generators, whose exponents are then set to 0.
ZnLDecision decide_Zn_L_quotient(const AbelianGroup& g, std::size_t n, const FiniteAbelianType& l);

struct FaPrimeRow {
  std::uint64_t prime = 0;
  bool quotient = false;  // is Z_p^n x L a quotient of G
  std::optional<QuotientWitness> witness;
};

struct FaConsistencyReport {
  std::vector<FaPrimeRow> rows;
  bool all_primes = false;   // Z_p^n x L quotient for every listed prime
  bool decided = false;      // decide_Zn_L_quotient verdict
  bool consistent = false;   // all_primes == decided
  std::vector<std::string> discrepancies;

  [[nodiscard]] std::string to_string() const;
};

/// Checks "Z^n x L is a quotient of G iff Z_p^n x L is for every prime p" on one instance.
/// Throws DomainError when the largest listed prime does not exceed |L| * |T_G|.
FaConsistencyReport fa_consistency(const AbelianGroup& g, std::size_t n, const FiniteAbelianType& l,
                                   const std::vector<std::uint64_t>& primes);

}  // namespace confset
