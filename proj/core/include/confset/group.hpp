#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "confset/integer.hpp"

namespace confset {

class GroupElement;

/// Element of Z^n.
struct IntVector {
  std::vector<std::int64_t> coords;
};

/// Element x_index of a finite group given by its table; 1-based, x_1 is the identity.
struct FinitePoint {
  std::uint32_t index = 1;
};

/// Isometry t -> (-1)^reflection * t + offset of the integer line.
/// The infinite dihedral generators are x = (reflection, 0) and y = (reflection, 1).
struct DihedralIsometry {
  bool reflection = false;
  std::int64_t offset = 0;
};

/// Upper unitriangular n x n matrix. Only the strictly upper entries are stored,
/// row-major: (1,2), (1,3), ..., (1,n), (2,3), ..., (n-1,n).
struct UnitriangularMatrix {
  std::size_t n = 0;
  std::vector<Integer> upper;

  static UnitriangularMatrix identity(std::size_t n);
  /// g_{i,j} = I + E_{i,j}, 1-based, i < j.
  static UnitriangularMatrix elementary(std::size_t n, std::size_t i, std::size_t j,
                                        const Integer& value = 1);

  /// 1-based entry access; returns 1 on the diagonal and 0 below it.
  [[nodiscard]] Integer entry(std::size_t i, std::size_t j) const;
  void set(std::size_t i, std::size_t j, const Integer& value);

  [[nodiscard]] static std::size_t slot(std::size_t n, std::size_t i, std::size_t j) {
    // 1-based (i, j) -> position in `upper`
    return (i - 1) * n - (i - 1) * i / 2 + (j - i - 1);
  }
};

struct ProductTuple {
  std::vector<GroupElement> parts;
};

/// Canonical-form group element. Equality is payload equality.
class GroupElement {
 public:
  using Payload = std::variant<IntVector, FinitePoint, DihedralIsometry, UnitriangularMatrix, ProductTuple>;

  GroupElement() = default;
  GroupElement(IntVector v) : payload_(std::move(v)) {}
  GroupElement(FinitePoint p) : payload_(p) {}
  GroupElement(DihedralIsometry d) : payload_(d) {}
  GroupElement(UnitriangularMatrix m) : payload_(std::move(m)) {}
  GroupElement(ProductTuple t) : payload_(std::move(t)) {}

  [[nodiscard]] const Payload& payload() const noexcept { return payload_; }

  template <class T>
  [[nodiscard]] const T& as() const {
    return std::get<T>(payload_);
  }
  template <class T>
  [[nodiscard]] bool is() const noexcept {
    return std::holds_alternative<T>(payload_);
  }

  friend bool operator==(const GroupElement& a, const GroupElement& b);
  friend bool operator<(const GroupElement& a, const GroupElement& b);
  friend bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }

 private:
  Payload payload_;
};

/// Three-way canonical comparison (<0, 0, >0).
int compare(const GroupElement& a, const GroupElement& b);

/// Multiplication table pi(i, j) = k whenever x_i x_j = x_k, 1-based.
class FiniteTable {
 public:
  /// Validates: identity at index 1, Latin square, associativity (exhaustive).
  static FiniteTable from_rows(const std::vector<std::vector<std::uint32_t>>& rows);
  static FiniteTable cyclic(std::uint32_t order);

  [[nodiscard]] std::uint32_t order() const noexcept { return order_; }
  [[nodiscard]] std::uint32_t product(std::uint32_t i, std::uint32_t j) const {
    return data_[(i - 1) * order_ + (j - 1)];
  }
  [[nodiscard]] std::uint32_t inverse(std::uint32_t i) const { return inverses_[i - 1]; }
  [[nodiscard]] bool is_abelian() const;
  /// Subgroup generated by the given indices (closure), sorted.
  [[nodiscard]] std::vector<std::uint32_t> closure(std::span<const std::uint32_t> gens) const;
  [[nodiscard]] bool is_automorphism(std::span<const std::uint32_t> perm) const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const FiniteTable& a, const FiniteTable& b) {
    return a.order_ == b.order_ && a.data_ == b.data_;
  }

 private:
  std::uint32_t order_ = 1;
  std::vector<std::uint32_t> data_{1};
  std::vector<std::uint32_t> inverses_{1};
};

enum class GroupKind { FreeAbelian, Finite, DihedralInfinite, Unitriangular, Product };

/// nullopt means infinite order.
using ElementOrder = std::optional<std::uint64_t>;

/// Which builtin group, its parameters and structural metadata. Immutable, cheap to copy.
class GroupDescriptor {
 public:
  static GroupDescriptor free_abelian(std::size_t rank);
  static GroupDescriptor finite(FiniteTable table);
  static GroupDescriptor dihedral();
  static GroupDescriptor unitriangular(std::size_t n);
  /// Single-factor products collapse to the factor; nested products are flattened.
  static GroupDescriptor product(std::vector<GroupDescriptor> factors);

  GroupDescriptor();  // trivial group Z^0

  [[nodiscard]] GroupKind kind() const noexcept;
  /// FreeAbelian: rank n. Unitriangular: matrix size n. Otherwise 0.
  [[nodiscard]] std::size_t dimension() const noexcept;
  [[nodiscard]] const FiniteTable& table() const;
  [[nodiscard]] std::span<const GroupDescriptor> factors() const;

  [[nodiscard]] GroupElement identity() const;
  [[nodiscard]] GroupElement multiply(const GroupElement& a, const GroupElement& b) const;
  [[nodiscard]] GroupElement invert(const GroupElement& a) const;
  [[nodiscard]] GroupElement power(const GroupElement& a, std::int64_t exponent) const;
  [[nodiscard]] GroupElement commutator(const GroupElement& a, const GroupElement& b) const;
  [[nodiscard]] ElementOrder order(const GroupElement& a) const;
  [[nodiscard]] bool is_identity(const GroupElement& a) const { return a == identity(); }

  /// Well-formedness of `a` as an element of this group.
  [[nodiscard]] bool contains(const GroupElement& a) const;
  /// Throws DomainError naming the element when !contains(a).
  void require(const GroupElement& a) const;

  /// Z^n: e_1..e_n. Finite: x_1..x_l (identity included). Dinf: x, y.
  /// UT(n): g_{i,j} in column order (1,2), (1,3), (2,3), ... . Product: each factor's
  /// generators embedded, factors in order.
  [[nodiscard]] std::vector<GroupElement> standard_generators() const;

  [[nodiscard]] bool is_abelian() const;
  [[nodiscard]] bool is_torsion_free() const;
  /// nullopt when not nilpotent.
  [[nodiscard]] std::optional<unsigned> nilpotency_class() const;
  [[nodiscard]] std::size_t hirsch_length() const;
  /// Total number of free-abelian coordinates across factors.
  [[nodiscard]] std::size_t free_rank() const;

  /// Canonical group spec text, e.g. "Z^2 x F[table: 1 2; 2 1]".
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] std::string format(const GroupElement& a) const;
  [[nodiscard]] GroupElement parse_element(std::string_view text) const;

  friend bool operator==(const GroupDescriptor& a, const GroupDescriptor& b);

 private:
  struct Impl;
  explicit GroupDescriptor(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// Generator-list literal: `std` for the standard generators, otherwise element
/// literals separated by whitespace, ',' or ';' at nesting depth 0.
std::vector<GroupElement> parse_element_list(const GroupDescriptor& group, std::string_view text);

/// Parse the group spec grammar: `Z^3`, `Dinf`, `UT(4)`, `C(4)`,
/// `F[table: 1 2; 2 1]`, and products joined by ` x `.
GroupDescriptor parse_group(std::string_view text);

// Component access for mixed products. Coordinates are concatenated over all
// free-abelian factors; the other accessors return the first factor of that kind.
std::vector<std::int64_t> free_coordinates(const GroupElement& a);
std::optional<std::uint32_t> finite_component(const GroupElement& a);
const DihedralIsometry* dihedral_component(const GroupElement& a);
const UnitriangularMatrix* unitriangular_component(const GroupElement& a);

/// Reduced alternating word in x, y of a dihedral element.
struct DihedralWord {
  char first = 0;  // 'x', 'y', or 0 for the identity
  std::uint64_t length = 0;
};
DihedralWord dihedral_word(const DihedralIsometry& d);
std::string dihedral_word_text(const DihedralIsometry& d);

/// Exponents a_{i,j} of the unique product (g_{1,n}^.. g_{n-1,n}^..)(g_{1,n-1}^..)...g_{1,2}^..,
/// obtained by peeling one column factor at a time from the right.
std::map<std::pair<std::size_t, std::size_t>, Integer> normal_form_exponents(const UnitriangularMatrix& a);
/// Recompose a matrix from normal-form exponents in the column-block order above.
UnitriangularMatrix from_normal_form(std::size_t n, const std::map<std::pair<std::size_t, std::size_t>, Integer>& exponents);

enum class GenerationStatus { VerifiedStructural, Unverified };

/// Ordered tuple (g_1, ..., g_k) of elements of one group.
class GeneratingSequence {
 public:
  GeneratingSequence(GroupDescriptor group, std::vector<GroupElement> elements);
  static GeneratingSequence standard(const GroupDescriptor& group);

  [[nodiscard]] const GroupDescriptor& group() const noexcept { return group_; }
  [[nodiscard]] const std::vector<GroupElement>& elements() const noexcept { return elements_; }
  [[nodiscard]] std::size_t size() const noexcept { return elements_.size(); }
  [[nodiscard]] const GroupElement& operator[](std::size_t i) const { return elements_[i]; }
  [[nodiscard]] GenerationStatus status() const noexcept { return status_; }
  [[nodiscard]] bool is_standard() const;

 private:
  GroupDescriptor group_;
  std::vector<GroupElement> elements_;
  GenerationStatus status_ = GenerationStatus::Unverified;
};

/// Sound structural proof that `elements` generate `group` (false means "unknown").
bool verify_generation(const GroupDescriptor& group, std::span<const GroupElement> elements);

/// layers[r] holds the elements of word length exactly r over the symmetric closure
/// of `gens`, in breadth-first discovery order.
std::vector<std::vector<GroupElement>> ball_layers(const GroupDescriptor& group,
                                                   std::span<const GroupElement> gens, unsigned radius);
/// Concatenated layers: the ball of radius r, breadth-first ordered.
std::vector<GroupElement> ball(const GroupDescriptor& group, std::span<const GroupElement> gens,
                               unsigned radius);
std::vector<GroupElement> ball(const GeneratingSequence& gens, unsigned radius);

}  // namespace confset
