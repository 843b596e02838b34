#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confset/abelian.hpp"
#include "confset/group.hpp"

namespace confset {

/// Formal word: (variable, exponent) factors, variables 1-based. Empty means the identity.
using LawWord = std::vector<std::pair<unsigned, std::int64_t>>;

struct LawSpec {
  LawWord lhs;
  LawWord rhs;
  unsigned variables = 0;

  /// `v1 v2^3 = v2^3 v1`; `^-1` inverses; `1` or `e` for the empty word.
  static LawSpec parse(std::string_view text);
  /// Inverse-free on both sides.
  [[nodiscard]] bool semigroup_law() const;
  [[nodiscard]] std::string to_string() const;
};

GroupElement evaluate_word(const GroupDescriptor& g, const LawWord& w, const std::vector<GroupElement>& values);

struct LawCheckOptions {
  unsigned workers = 1;
};

struct LawResult {
  bool holds_on_ball = true;
  unsigned radius = 0;
  std::uint64_t tuples_checked = 0;
  /// First failing assignment (v1, ..., vt) in lexicographic ball order.
  std::optional<std::vector<GroupElement>> counterexample;
  /// Set only when the group's structure proves the law everywhere.
  std::optional<std::string> structural_proof;

  [[nodiscard]] std::string to_string(const GroupDescriptor& g) const;
};

/// Evaluates both sides on every t-tuple of ball(radius).
LawResult check_law(const GeneratingSequence& gens, const LawSpec& law, unsigned radius,
                    const LawCheckOptions& options = {});

struct NilpotencyResult {
  bool consistent = true;
  unsigned c = 0;
  unsigned radius = 0;
  /// Violation: a_1, ..., a_{c+1} with [...[[a_1,a_2],a_3],...,a_{c+1}] != 1.
  std::vector<GroupElement> chain;
  std::optional<GroupElement> value;
  /// Distinct left-normed commutators of each weight 1..c+1 (identity excluded).
  std::vector<std::size_t> level_sizes;

  [[nodiscard]] std::string to_string(const GroupDescriptor& g) const;
};

/// Are all (c+1)-fold left-normed commutators of ball elements trivial? [a,b] = a^-1 b^-1 a b.
NilpotencyResult nilpotency_witness(const GeneratingSequence& gens, unsigned c, unsigned radius);

/// Exact: a commutes with every standard generator.
bool center_membership(const GroupDescriptor& g, const GroupElement& a);

/// Number of finite-order elements, when finite (Z^n x F: |F|; Tr(n): 1; Dinf: infinite).
std::optional<std::uint64_t> torsion_count(const GroupDescriptor& g);

struct TorsionReport {
  std::vector<GroupElement> elements;  // finite-order elements of the ball, ball order
  bool complete = false;               // the listing is the whole torsion set
  std::string structure;               // structural description of the torsion set

  [[nodiscard]] std::string to_string(const GroupDescriptor& g) const;
};

TorsionReport torsion_elements(const GroupDescriptor& g, unsigned radius);

std::size_t hirsch_length(const GroupDescriptor& g);

/// Is a in the commutator subgroup G'? Structural per kind; for Tr(3) the membership is
/// confirmed by writing a as a power of [g12, g23].
bool derived_subgroup_membership(const GroupDescriptor& g, const GroupElement& a);

struct SWitness {
  GroupElement element;
  std::optional<std::uint64_t> s;  // smallest s <= bound with x^s in G'
  std::string proof;               // for elements outside the isolator
};

struct IsolatorReport {
  bool applicable = false;
  std::string reason;     // why not, when not applicable
  std::string predicate;  // membership predicate for tau(G)
  std::string generators;  // generators of tau(G)
  std::size_t n = 0;      // G / tau = Z^n
  std::size_t m = 0;      // tau = Z^m
  std::vector<SWitness> cross_check;

  [[nodiscard]] std::string tag() const;  // "I(n,m)" or "NotApplicable(reason)"
  [[nodiscard]] std::string to_string(const GroupDescriptor& g) const;
};

constexpr std::uint64_t kIsolatorSearchBound = 100;

/// Structural membership in tau(G); DomainError when the group is out of scope.
bool in_isolator(const GroupDescriptor& g, const GroupElement& a);
/// tau(G) for torsion-free class-2 builtins: Tr(3) factors and free-abelian factors.
IsolatorReport isolator_tau(const GroupDescriptor& g, std::uint64_t search_bound = kIsolatorSearchBound);

/// Smallest s in [1, bound] with x^s in G', by multiplication.
std::optional<std::uint64_t> isolator_s_witness(const GroupDescriptor& g, const GroupElement& x, std::uint64_t bound);

/// G / [G, G] for the builtins.
AbelianGroup abelianization(const GroupDescriptor& g);

/// G / Z(G) finite, decided structurally.
bool is_fc_group(const GroupDescriptor& g);

}  // namespace confset
