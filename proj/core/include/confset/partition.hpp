#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confset/error.hpp"
#include "confset/group.hpp"
#include "confset/isomorphism.hpp"

namespace confset {

/// 1-based index of a partition cell.
using CellIndex = std::uint32_t;

enum class Sign : std::int8_t { Negative = -1, Zero = 0, Positive = 1 };

/// Decidable predicate over canonical elements, built from atoms and boolean combinators.
class CellPredicate {
 public:
  struct Node;

  static CellPredicate always();
  /// Sign of free-abelian coordinate `coordinate` (1-based, concatenated over factors).
  static CellPredicate sign(std::size_t coordinate, Sign s);
  /// Finite component equals x_index.
  static CellPredicate finite(std::uint32_t index);
  static CellPredicate element(GroupElement e);
  /// Reduced dihedral word starts with `first_letter` and has length >= min_length.
  static CellPredicate dihedral(char first_letter, std::uint64_t min_length);
  static CellPredicate matrix_sign(std::size_t row, std::size_t col, Sign s);
  static CellPredicate matrix_value(std::size_t row, std::size_t col, Integer value);
  static CellPredicate all_of(std::vector<CellPredicate> parts);
  static CellPredicate any_of(std::vector<CellPredicate> parts);
  static CellPredicate negate(CellPredicate inner);
  /// Holds at a iff `inner` holds at map(a).
  static CellPredicate mapped(Isomorphism map, CellPredicate inner);

  [[nodiscard]] bool holds(const GroupDescriptor& group, const GroupElement& a) const;
  [[nodiscard]] std::string to_string(const GroupDescriptor& group) const;

  friend CellPredicate operator&&(CellPredicate a, CellPredicate b) {
    return all_of({std::move(a), std::move(b)});
  }
  friend CellPredicate operator||(CellPredicate a, CellPredicate b) {
    return any_of({std::move(a), std::move(b)});
  }
  friend CellPredicate operator!(CellPredicate a) { return negate(std::move(a)); }

 private:
  explicit CellPredicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Parse one predicate expression (the right-hand side of a partition file line).
CellPredicate parse_predicate(const GroupDescriptor& group, std::string_view text);

struct Cell {
  std::string name;
  CellPredicate predicate;
};

enum class PartitionFamily { User, Orthant, DihedralFive, Trivial, Sign, Refined };

/// classify() failure: the partition is not total or not disjoint at `witness`.
class ClassificationError : public DomainError {
 public:
  enum class Kind { NoCell, AmbiguousCell };
  ClassificationError(Kind kind, std::string witness, std::vector<CellIndex> cells);

  [[nodiscard]] Kind kind() const noexcept { return kind_; }
  [[nodiscard]] const std::string& witness() const noexcept { return witness_; }
  [[nodiscard]] const std::vector<CellIndex>& cells() const noexcept { return cells_; }

 private:
  Kind kind_;
  std::string witness_;
  std::vector<CellIndex> cells_;
};

/// Cell layout of the orthant partition {E_(sigma,j)} of Z^n x F.
struct OrthantLayout {
  std::size_t rank = 0;        // n
  std::uint32_t finite_order = 1;  // l

  [[nodiscard]] std::size_t cell_count() const;
  /// sigma entries in {-1, 0, 1}; j in [1, l].
  [[nodiscard]] CellIndex index(const std::vector<int>& sigma, std::uint32_t j) const;
  [[nodiscard]] std::pair<std::vector<int>, std::uint32_t> cell(CellIndex index) const;
};

struct Refinement;

/// Ordered finite partition of a group into named cells.
class Partition {
 public:
  /// User partition. With `otherwise_last`, the final cell's predicate is replaced by
  /// "none of the previous cells".
  Partition(GroupDescriptor group, std::vector<Cell> cells, bool otherwise_last = false);

  /// E_(sigma,j) = sigma(1)N x ... x sigma(n)N x {x_j} for Z^n, F or Z^n x F, with
  /// N = {1,2,...} and 0N = {0}; 3^n * l cells in canonical order.
  static Partition orthant(const GroupDescriptor& group);
  /// {1}, {x}, {y}, reduced words of length >= 2 starting with x, starting with y.
  static Partition dihedral_five(const GroupDescriptor& group);
  static Partition trivial(const GroupDescriptor& group);
  /// Negative / zero / positive first free-abelian coordinate.
  static Partition sign(const GroupDescriptor& group);
  /// Builtin by name: orthant, dinf5, trivial, sign.
  static Partition builtin(std::string_view name, const GroupDescriptor& group);
  /// Partition file: one `name := <expr>` per line, `#` comments, `otherwise` once and last.
  static Partition parse(const GroupDescriptor& group, std::string_view text);

  [[nodiscard]] const GroupDescriptor& group() const noexcept { return group_; }
  [[nodiscard]] std::size_t size() const noexcept { return cells_.size(); }
  [[nodiscard]] const std::vector<Cell>& cells() const noexcept { return cells_; }
  [[nodiscard]] PartitionFamily family() const noexcept { return family_; }
  [[nodiscard]] bool structural() const noexcept { return static_cast<bool>(direct_); }
  [[nodiscard]] bool otherwise_terminated() const noexcept { return otherwise_; }
  [[nodiscard]] const std::optional<OrthantLayout>& orthant_layout() const noexcept { return layout_; }

  /// Unique cell containing a; throws ClassificationError.
  [[nodiscard]] CellIndex classify(const GroupElement& a) const;
  /// All cells whose predicate holds at a (predicate scan, ignores structural shortcuts).
  [[nodiscard]] std::vector<CellIndex> matching_cells(const GroupElement& a) const;

  /// Cells pulled back along iso^{-1}: a lies in cell k of the result iff iso^{-1}(a)
  /// lies in cell k of this partition.
  [[nodiscard]] Partition pullback(const Isomorphism& iso) const;
  /// New cell k is old cell order[k-1].
  [[nodiscard]] Partition permuted(const std::vector<CellIndex>& order) const;

  [[nodiscard]] std::string describe() const;

 private:
  friend struct Refinement;
  friend Refinement refine(const Partition& p, CellIndex cell, const CellPredicate& splitter,
                           unsigned validation_radius);
  Partition() = default;

  GroupDescriptor group_;
  std::vector<Cell> cells_;
  bool otherwise_ = false;
  PartitionFamily family_ = PartitionFamily::User;
  std::optional<OrthantLayout> layout_;
  std::function<CellIndex(const GroupElement&)> direct_;
};

enum class ValidationMethod { Structural, BallOnly };

struct ValidationReport {
  bool ok = true;
  ValidationMethod method = ValidationMethod::BallOnly;
  unsigned radius = 0;
  std::size_t elements_checked = 0;
  std::optional<ClassificationError::Kind> violation;
  std::optional<GroupElement> witness;
  std::vector<CellIndex> witness_cells;
  std::string detail;

  [[nodiscard]] std::string to_string(const GroupDescriptor& group) const;
};

constexpr unsigned kDefaultValidationRadius = 6;

/// Every element of the ball lies in exactly one cell; structural families additionally
/// cross-check their direct classifier against the predicate scan.
ValidationReport validate(const Partition& p, unsigned radius);
ValidationReport validate(const Partition& p, const GeneratingSequence& gens, unsigned radius);

struct Refinement {
  Partition partition;
  /// projection[k-1] is the original index of new cell k.
  std::vector<CellIndex> projection;
  /// EmptyPiece notes (piece empty on the validation ball).
  std::vector<std::string> warnings;
};

/// Replace cell `cell` by (cell and splitter, cell and not splitter).
Refinement refine(const Partition& p, CellIndex cell, const CellPredicate& splitter,
                  unsigned validation_radius = kDefaultValidationRadius);

}  // namespace confset
