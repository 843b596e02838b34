#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "confset/group.hpp"
#include "confset/isomorphism.hpp"
#include "confset/partition.hpp"

namespace confset {

/// (c_0, c_1, ..., c_k): x in E_{c_0} and g_i x in E_{c_i}.
using Configuration = std::vector<CellIndex>;

std::string format_configuration(const Configuration& c);
Configuration parse_configuration(std::string_view text);

/// Canonically ordered configuration set with enumeration metadata.
class ConfigurationSet {
 public:
  struct Entry {
    std::optional<GroupElement> witness;  // first ball element realizing the tuple
    std::size_t ordinal = 0;              // position of the witness in ball order
  };

  ConfigurationSet() = default;
  ConfigurationSet(std::size_t generators, std::size_t cells) : generators_(generators), cells_(cells) {}

  /// Returns true if the tuple is new; an existing entry keeps the smaller ordinal.
  bool insert(Configuration c, Entry e);

  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] bool contains(const Configuration& c) const { return entries_.count(c) != 0; }
  [[nodiscard]] const std::map<Configuration, Entry>& entries() const noexcept { return entries_; }
  [[nodiscard]] std::vector<Configuration> tuples() const;
  [[nodiscard]] const std::optional<GroupElement>& witness(const Configuration& c) const;

  [[nodiscard]] unsigned radius() const noexcept { return radius_; }
  /// Consecutive radii (ending at radius()) that added no tuple.
  [[nodiscard]] unsigned stability_streak() const noexcept { return streak_; }
  [[nodiscard]] std::size_t generator_count() const noexcept { return generators_; }
  [[nodiscard]] std::size_t cell_count() const noexcept { return cells_; }
  /// True only when a structural bound proves the set equals the full Con(g, E).
  [[nodiscard]] bool complete() const noexcept { return complete_; }

  void set_metadata(unsigned radius, unsigned streak, bool complete) {
    radius_ = radius;
    streak_ = streak;
    complete_ = complete;
  }

  /// Header `# radius=R streak=S generators=k cells=m complete=yes|no`, then one tuple per line.
  /// With a group, each line carries its witness as a trailing comment.
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] std::string to_string(const GroupDescriptor& witnesses_in) const;
  static ConfigurationSet parse(std::string_view text);

  /// Tuple equality; metadata and witnesses are ignored.
  [[nodiscard]] bool same_tuples(const ConfigurationSet& other) const;

 private:
  std::map<Configuration, Entry> entries_;
  unsigned radius_ = 0;
  unsigned streak_ = 0;
  std::size_t generators_ = 0;
  std::size_t cells_ = 0;
  bool complete_ = false;
};

struct ComputeOptions {
  /// Classification threads per ball layer; results do not depend on it.
  unsigned workers = 1;
};

/// Radius beyond which the set provably stops growing, for the pairs that ship a proof:
/// one-cell partitions, the orthant partition of Z^n x F with standard generators
/// (2n + [l > 1]), the sign partition of Z^n with standard generators (2) and the
/// dihedral five-cell partition with (x, y) (3).
std::optional<unsigned> structural_completeness_radius(const GeneratingSequence& gens, const Partition& p);

/// { (class(x), class(g_1 x), ..., class(g_k x)) : x in ball(radius) }.
ConfigurationSet compute_config_set(const GeneratingSequence& gens, const Partition& p, unsigned radius,
                                    const ComputeOptions& options = {});

struct ScanRow {
  unsigned radius = 0;
  std::size_t size = 0;
  bool grew = false;  // relative to radius - 1 (radius 0 grows from the empty set)
};

struct StabilityScan {
  std::vector<ScanRow> rows;
  /// Last radius <= r_max at which the set grew; no growth after it through r_max.
  unsigned stable_from = 0;
  ConfigurationSet final_set;
};

StabilityScan stability_scan(const GeneratingSequence& gens, const Partition& p, unsigned r_min, unsigned r_max,
                             const ComputeOptions& options = {});

/// projection[k-1] is the coarse index of fine cell k. Witness of each coarse tuple is the
/// earliest (in ball order) among its preimages.
ConfigurationSet project_config_set(const ConfigurationSet& s, const std::vector<CellIndex>& projection);

struct TransportedPair {
  GeneratingSequence gens;
  Partition partition;
};

/// gens' = iso(gens), partition' = pullback of the cells along iso^{-1}.
TransportedPair transport(const Isomorphism& iso, const GeneratingSequence& gens, const Partition& p);

struct SetComparison {
  bool equal = true;
  std::vector<Configuration> only_in_a;
  std::vector<Configuration> only_in_b;

  [[nodiscard]] std::string to_string() const;
};

SetComparison compare_sets(const ConfigurationSet& a, const ConfigurationSet& b);

struct OrthantPropertyReport {
  std::size_t tuples_checked = 0;
  /// One line per violated containment, naming the tuple and the property (I)-(IV).
  std::vector<std::string> violations;

  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

/// Containments for the orthant pair of Z^n x F with standard generators, tuple by tuple:
/// (I) sigma(i)=0: entry i in (sigma with i set to 1, j); (II) sigma(i)=1: entry i in (sigma, j);
/// (III) sigma(i)=-1: entry i in (sigma, j) or (sigma with i set to 0, j);
/// (IV) entry n+i is exactly (sigma, pi(i, j)).
OrthantPropertyReport check_orthant_properties(const ConfigurationSet& s, const Partition& p);

/// Height-one labeled tree: root labeled c_0, edge i to a leaf labeled c_i.
std::string export_tree(const Configuration& c, std::size_t k);
/// Every tuple of the set as its own cluster, in canonical order.
std::string export_forest(const ConfigurationSet& s);

}  // namespace confset
