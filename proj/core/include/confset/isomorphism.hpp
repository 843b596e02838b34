#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "confset/group.hpp"
#include "confset/matrix.hpp"

namespace confset {

/// v -> M v on the (first) free-abelian factor; M must be unimodular.
struct CoordinateChange {
  IntMatrix matrix;
};

/// x_j -> x_{permutation[j-1]} on the (first) finite factor; must preserve the table.
struct FiniteRelabel {
  std::vector<std::uint32_t> permutation;
};

/// Exchanges the involutions x and y of the (first) infinite dihedral factor.
struct DihedralSwap {};

/// Composite isomorphism; steps are applied left to right.
class Isomorphism {
 public:
  using Step = std::variant<CoordinateChange, FiniteRelabel, DihedralSwap>;

  Isomorphism() = default;
  static Isomorphism coordinate_change(IntMatrix m);
  static Isomorphism finite_relabel(std::vector<std::uint32_t> permutation);
  static Isomorphism dihedral_swap();
  static Isomorphism compose(const std::vector<Isomorphism>& parts);

  /// Throws DomainError if a step does not fit `group`.
  void validate(const GroupDescriptor& group) const;
  [[nodiscard]] GroupElement apply(const GroupDescriptor& group, const GroupElement& a) const;
  [[nodiscard]] Isomorphism inverse() const;
  [[nodiscard]] bool is_identity() const noexcept { return steps_.empty(); }
  [[nodiscard]] const std::vector<Step>& steps() const noexcept { return steps_; }
  [[nodiscard]] std::string to_string() const;

  /// `coord[[1,1],[0,1]]`, `relabel(1,3,2)`, `swap`, `id`, joined by `|`.
  static Isomorphism parse(std::string_view text);

 private:
  std::vector<Step> steps_;
};

}  // namespace confset
