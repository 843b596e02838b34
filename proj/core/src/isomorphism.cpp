#include "confset/isomorphism.hpp"

#include "confset/error.hpp"
#include "text_cursor.hpp"

namespace confset {
namespace {

/// Index of the factor of `kind` the step acts on; -1 means the group itself.
int target_factor(const GroupDescriptor& group, GroupKind kind) {
  if (group.kind() == kind) return -1;
  if (group.kind() == GroupKind::Product)
    for (std::size_t i = 0; i < group.factors().size(); ++i)
      if (group.factors()[i].kind() == kind) return static_cast<int>(i);
  return -2;
}

GroupElement apply_local(const Isomorphism::Step& step, const GroupElement& a) {
  return std::visit(
      [&](const auto& s) -> GroupElement {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, CoordinateChange>) {
          const auto& v = a.as<IntVector>().coords;
          IntVector out{std::vector<std::int64_t>(v.size(), 0)};
          for (std::size_t r = 0; r < v.size(); ++r) {
            Integer acc = 0;
            for (std::size_t c = 0; c < v.size(); ++c) acc += s.matrix(r, c) * Integer(static_cast<long>(v[c]));
            out.coords[r] = to_int64(acc);
          }
          return out;
        } else if constexpr (std::is_same_v<T, FiniteRelabel>) {
          return FinitePoint{s.permutation[a.as<FinitePoint>().index - 1]};
        } else {
          const auto& d = a.as<DihedralIsometry>();
          // x <-> y: translations t+o -> t-o, reflections -t+o -> -t+(1-o)
          if (d.reflection) return DihedralIsometry{true, checked_sub(1, d.offset)};
          return DihedralIsometry{false, checked_neg(d.offset)};
        }
      },
      step);
}

GroupKind step_kind(const Isomorphism::Step& step) {
  if (std::holds_alternative<CoordinateChange>(step)) return GroupKind::FreeAbelian;
  if (std::holds_alternative<FiniteRelabel>(step)) return GroupKind::Finite;
  return GroupKind::DihedralInfinite;
}

}  // namespace

Isomorphism Isomorphism::coordinate_change(IntMatrix m) {
  if (m.rows() != m.cols()) throw DomainError("coordinate change matrix must be square");
  const Integer det = determinant(m);
  if (det != 1 && det != -1) throw DomainError("coordinate change " + m.to_string() + " is not unimodular");
  Isomorphism iso;
  iso.steps_.emplace_back(CoordinateChange{std::move(m)});
  return iso;
}

Isomorphism Isomorphism::finite_relabel(std::vector<std::uint32_t> permutation) {
  Isomorphism iso;
  iso.steps_.emplace_back(FiniteRelabel{std::move(permutation)});
  return iso;
}

Isomorphism Isomorphism::dihedral_swap() {
  Isomorphism iso;
  iso.steps_.emplace_back(DihedralSwap{});
  return iso;
}

Isomorphism Isomorphism::compose(const std::vector<Isomorphism>& parts) {
  Isomorphism iso;
  for (const auto& p : parts) iso.steps_.insert(iso.steps_.end(), p.steps_.begin(), p.steps_.end());
  return iso;
}

void Isomorphism::validate(const GroupDescriptor& group) const {
  for (const auto& step : steps_) {
    const int f = target_factor(group, step_kind(step));
    if (f == -2) throw DomainError("isomorphism " + to_string() + " does not act on group " + group.to_string());
    const GroupDescriptor& local = f < 0 ? group : group.factors()[static_cast<std::size_t>(f)];
    if (const auto* cc = std::get_if<CoordinateChange>(&step)) {
      if (cc->matrix.rows() != local.dimension())
        throw DomainError("coordinate change of size " + std::to_string(cc->matrix.rows()) + " on Z^" +
                          std::to_string(local.dimension()));
    } else if (const auto* fr = std::get_if<FiniteRelabel>(&step)) {
      if (!local.table().is_automorphism(fr->permutation))
        throw DomainError("relabeling " + to_string() + " is not an automorphism of the table");
    }
  }
}

GroupElement Isomorphism::apply(const GroupDescriptor& group, const GroupElement& a) const {
  group.require(a);
  GroupElement out = a;
  for (const auto& step : steps_) {
    const int f = target_factor(group, step_kind(step));
    if (f == -2) throw DomainError("isomorphism " + to_string() + " does not act on group " + group.to_string());
    if (f < 0) {
      out = apply_local(step, out);
    } else {
      ProductTuple t = out.as<ProductTuple>();
      t.parts[static_cast<std::size_t>(f)] = apply_local(step, t.parts[static_cast<std::size_t>(f)]);
      out = std::move(t);
    }
  }
  return out;
}

Isomorphism Isomorphism::inverse() const {
  Isomorphism inv;
  for (auto it = steps_.rbegin(); it != steps_.rend(); ++it) {
    std::visit(
        [&](const auto& s) {
          using T = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<T, CoordinateChange>) {
            inv.steps_.emplace_back(CoordinateChange{unimodular_inverse(s.matrix)});
          } else if constexpr (std::is_same_v<T, FiniteRelabel>) {
            std::vector<std::uint32_t> p(s.permutation.size());
            for (std::size_t j = 0; j < p.size(); ++j) p[s.permutation[j] - 1] = static_cast<std::uint32_t>(j + 1);
            inv.steps_.emplace_back(FiniteRelabel{std::move(p)});
          } else {
            inv.steps_.emplace_back(DihedralSwap{});
          }
        },
        *it);
  }
  return inv;
}

std::string Isomorphism::to_string() const {
  if (steps_.empty()) return "id";
  std::string s;
  for (const auto& step : steps_) {
    if (!s.empty()) s += " | ";
    if (const auto* cc = std::get_if<CoordinateChange>(&step)) {
      s += "coord" + cc->matrix.to_string();
    } else if (const auto* fr = std::get_if<FiniteRelabel>(&step)) {
      s += "relabel(";
      for (std::size_t j = 0; j < fr->permutation.size(); ++j) {
        if (j) s += ',';
        s += std::to_string(fr->permutation[j]);
      }
      s += ')';
    } else {
      s += "swap";
    }
  }
  return s;
}

Isomorphism Isomorphism::parse(std::string_view text) {
  detail::Cursor c(text);
  std::vector<Isomorphism> parts;
  do {
    if (c.accept_keyword("id")) {
      parts.emplace_back();
    } else if (c.accept_keyword("swap")) {
      parts.push_back(dihedral_swap());
    } else if (c.accept("relabel(")) {
      std::vector<std::uint32_t> perm;
      do {
        const auto v = c.integer();
        if (v < 1) c.fail("relabel indices are 1-based");
        perm.push_back(static_cast<std::uint32_t>(v));
      } while (c.accept(','));
      c.expect(')');
      parts.push_back(finite_relabel(std::move(perm)));
    } else if (c.accept("coord")) {
      c.expect('[');
      std::vector<std::vector<long>> rows;
      do {
        c.expect('[');
        rows.emplace_back();
        do rows.back().push_back(static_cast<long>(c.integer()));
        while (c.accept(','));
        c.expect(']');
      } while (c.accept(','));
      c.expect(']');
      IntMatrix m(rows.size(), rows.front().size());
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols()) c.fail("ragged coordinate change matrix");
        for (std::size_t k = 0; k < m.cols(); ++k) m(r, k) = rows[r][k];
      }
      parts.push_back(coordinate_change(std::move(m)));
    } else {
      c.fail("expected coord[[...]], relabel(...), swap or id");
    }
  } while (c.accept('|'));
  if (!c.at_end()) c.fail("trailing text after isomorphism");
  return compose(parts);
}

}  // namespace confset
