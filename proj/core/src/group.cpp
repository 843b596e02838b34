#include "confset/group.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "confset/error.hpp"
#include "confset/smith.hpp"

namespace confset {

// ---------------------------------------------------------------------------
// UnitriangularMatrix

UnitriangularMatrix UnitriangularMatrix::identity(std::size_t n) {
  UnitriangularMatrix m;
  m.n = n;
  m.upper.assign(n * (n - 1) / 2, Integer(0));
  return m;
}

UnitriangularMatrix UnitriangularMatrix::elementary(std::size_t n, std::size_t i, std::size_t j,
                                                    const Integer& value) {
  if (!(1 <= i && i < j && j <= n)) throw DomainError("g_{i,j} requires 1 <= i < j <= n");
  auto m = identity(n);
  m.upper[slot(n, i, j)] = value;
  return m;
}

Integer UnitriangularMatrix::entry(std::size_t i, std::size_t j) const {
  if (i == j) return 1;
  if (i > j) return 0;
  return upper[slot(n, i, j)];
}

void UnitriangularMatrix::set(std::size_t i, std::size_t j, const Integer& value) {
  if (!(i < j)) throw DomainError("only strictly upper entries of a unitriangular matrix are free");
  upper[slot(n, i, j)] = value;
}

namespace {

UnitriangularMatrix ut_multiply(const UnitriangularMatrix& a, const UnitriangularMatrix& b) {
  const std::size_t n = a.n;
  UnitriangularMatrix c = UnitriangularMatrix::identity(n);
  Integer acc;
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = i + 1; j <= n; ++j) {
      acc = a.upper[UnitriangularMatrix::slot(n, i, j)];
      acc += b.upper[UnitriangularMatrix::slot(n, i, j)];
      for (std::size_t k = i + 1; k < j; ++k) {
        const Integer& aik = a.upper[UnitriangularMatrix::slot(n, i, k)];
        if (aik == 0) continue;
        const Integer& bkj = b.upper[UnitriangularMatrix::slot(n, k, j)];
        if (bkj == 0) continue;
        mpz_addmul(acc.get_mpz_t(), aik.get_mpz_t(), bkj.get_mpz_t());
      }
      c.upper[UnitriangularMatrix::slot(n, i, j)] = acc;
    }
  return c;
}

UnitriangularMatrix ut_invert(const UnitriangularMatrix& a) {
  // Solve A X = I by increasing distance from the diagonal.
  const std::size_t n = a.n;
  UnitriangularMatrix x = UnitriangularMatrix::identity(n);
  for (std::size_t span = 1; span < n; ++span)
    for (std::size_t i = 1; i + span <= n; ++i) {
      const std::size_t j = i + span;
      Integer acc = -a.upper[UnitriangularMatrix::slot(n, i, j)];
      for (std::size_t k = i + 1; k < j; ++k)
        mpz_submul(acc.get_mpz_t(), a.upper[UnitriangularMatrix::slot(n, i, k)].get_mpz_t(),
                   x.upper[UnitriangularMatrix::slot(n, k, j)].get_mpz_t());
      x.upper[UnitriangularMatrix::slot(n, i, j)] = acc;
    }
  return x;
}

template <class T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

// ---------------------------------------------------------------------------
// GroupElement ordering

int compare(const GroupElement& a, const GroupElement& b) {
  if (a.payload().index() != b.payload().index())
    return a.payload().index() < b.payload().index() ? -1 : 1;
  return std::visit(
      [&](const auto& lhs) -> int {
        using T = std::decay_t<decltype(lhs)>;
        const auto& rhs = std::get<T>(b.payload());
        if constexpr (std::is_same_v<T, IntVector>) {
          return three_way(lhs.coords, rhs.coords);
        } else if constexpr (std::is_same_v<T, FinitePoint>) {
          return three_way(lhs.index, rhs.index);
        } else if constexpr (std::is_same_v<T, DihedralIsometry>) {
          if (lhs.reflection != rhs.reflection) return lhs.reflection ? 1 : -1;
          return three_way(lhs.offset, rhs.offset);
        } else if constexpr (std::is_same_v<T, UnitriangularMatrix>) {
          if (lhs.n != rhs.n) return lhs.n < rhs.n ? -1 : 1;
          for (std::size_t i = 0; i < lhs.upper.size(); ++i) {
            const int c = cmp(lhs.upper[i], rhs.upper[i]);
            if (c != 0) return c < 0 ? -1 : 1;
          }
          return 0;
        } else {
          const std::size_t common = std::min(lhs.parts.size(), rhs.parts.size());
          for (std::size_t i = 0; i < common; ++i)
            if (const int c = compare(lhs.parts[i], rhs.parts[i]); c != 0) return c;
          return three_way(lhs.parts.size(), rhs.parts.size());
        }
      },
      a.payload());
}

bool operator==(const GroupElement& a, const GroupElement& b) { return compare(a, b) == 0; }
bool operator<(const GroupElement& a, const GroupElement& b) { return compare(a, b) < 0; }

// ---------------------------------------------------------------------------
// FiniteTable

FiniteTable FiniteTable::from_rows(const std::vector<std::vector<std::uint32_t>>& rows) {
  const auto l = static_cast<std::uint32_t>(rows.size());
  if (l == 0) throw DomainError("finite group table must be nonempty");
  FiniteTable t;
  t.order_ = l;
  t.data_.assign(static_cast<std::size_t>(l) * l, 0);
  for (std::uint32_t i = 0; i < l; ++i) {
    if (rows[i].size() != l)
      throw DomainError("finite group table row " + std::to_string(i + 1) + " has " +
                        std::to_string(rows[i].size()) + " entries, expected " + std::to_string(l));
    for (std::uint32_t j = 0; j < l; ++j) {
      const std::uint32_t v = rows[i][j];
      if (v < 1 || v > l)
        throw DomainError("table entry (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                          ") = " + std::to_string(v) + " outside [1," + std::to_string(l) + "]");
      t.data_[static_cast<std::size_t>(i) * l + j] = v;
    }
  }
  for (std::uint32_t i = 1; i <= l; ++i)
    if (t.product(1, i) != i || t.product(i, 1) != i)
      throw DomainError("index 1 is not the identity of the table (fails at " + std::to_string(i) + ")");
  for (std::uint32_t i = 1; i <= l; ++i) {
    std::vector<bool> row_seen(l + 1, false), col_seen(l + 1, false);
    for (std::uint32_t j = 1; j <= l; ++j) {
      if (row_seen[t.product(i, j)]) throw DomainError("table row " + std::to_string(i) + " is not a permutation");
      if (col_seen[t.product(j, i)]) throw DomainError("table column " + std::to_string(i) + " is not a permutation");
      row_seen[t.product(i, j)] = true;
      col_seen[t.product(j, i)] = true;
    }
  }
  for (std::uint32_t a = 1; a <= l; ++a)
    for (std::uint32_t b = 1; b <= l; ++b)
      for (std::uint32_t c = 1; c <= l; ++c)
        if (t.product(t.product(a, b), c) != t.product(a, t.product(b, c)))
          throw DomainError("table is not associative at (" + std::to_string(a) + "," + std::to_string(b) +
                            "," + std::to_string(c) + ")");
  t.inverses_.assign(l, 0);
  for (std::uint32_t a = 1; a <= l; ++a)
    for (std::uint32_t b = 1; b <= l; ++b)
      if (t.product(a, b) == 1) t.inverses_[a - 1] = b;
  return t;
}

FiniteTable FiniteTable::cyclic(std::uint32_t order) {
  if (order == 0) throw DomainError("cyclic group order must be positive");
  std::vector<std::vector<std::uint32_t>> rows(order, std::vector<std::uint32_t>(order));
  for (std::uint32_t i = 0; i < order; ++i)
    for (std::uint32_t j = 0; j < order; ++j) rows[i][j] = (i + j) % order + 1;
  return from_rows(rows);
}

bool FiniteTable::is_abelian() const {
  for (std::uint32_t a = 1; a <= order_; ++a)
    for (std::uint32_t b = a + 1; b <= order_; ++b)
      if (product(a, b) != product(b, a)) return false;
  return true;
}

std::vector<std::uint32_t> FiniteTable::closure(std::span<const std::uint32_t> gens) const {
  std::vector<bool> in(order_ + 1, false);
  std::vector<std::uint32_t> members{1};
  in[1] = true;
  for (std::size_t k = 0; k < members.size(); ++k)
    for (std::uint32_t g : gens) {
      const std::uint32_t v = product(members[k], g);
      if (!in[v]) {
        in[v] = true;
        members.push_back(v);
      }
    }
  std::sort(members.begin(), members.end());
  return members;
}

bool FiniteTable::is_automorphism(std::span<const std::uint32_t> perm) const {
  if (perm.size() != order_) return false;
  std::vector<bool> seen(order_ + 1, false);
  for (std::uint32_t v : perm) {
    if (v < 1 || v > order_ || seen[v]) return false;
    seen[v] = true;
  }
  for (std::uint32_t a = 1; a <= order_; ++a)
    for (std::uint32_t b = 1; b <= order_; ++b)
      if (perm[product(a, b) - 1] != product(perm[a - 1], perm[b - 1])) return false;
  return true;
}

std::string FiniteTable::to_string() const {
  std::ostringstream os;
  os << "F[table: ";
  for (std::uint32_t i = 1; i <= order_; ++i) {
    if (i > 1) os << "; ";
    for (std::uint32_t j = 1; j <= order_; ++j) {
      if (j > 1) os << ' ';
      os << product(i, j);
    }
  }
  os << ']';
  return os.str();
}

// ---------------------------------------------------------------------------
// GroupDescriptor

struct GroupDescriptor::Impl {
  GroupKind kind = GroupKind::FreeAbelian;
  std::size_t dimension = 0;
  FiniteTable table;
  std::vector<GroupDescriptor> factors;
  std::optional<unsigned> finite_class;  // lower central series length for Finite
};

namespace {

std::optional<unsigned> finite_nilpotency_class(const FiniteTable& t) {
  const std::uint32_t l = t.order();
  std::vector<std::uint32_t> all(l);
  std::iota(all.begin(), all.end(), 1u);
  std::vector<std::uint32_t> term = all;
  unsigned c = 0;
  while (term.size() > 1) {
    std::set<std::uint32_t> comms;
    for (std::uint32_t a : term)
      for (std::uint32_t b : all) {
        const std::uint32_t ab = t.product(a, b);
        const std::uint32_t ba = t.product(b, a);
        comms.insert(t.product(t.inverse(ba), ab));  // (ba)^-1 ab = a^-1 b^-1 a b
      }
    const std::vector<std::uint32_t> gens(comms.begin(), comms.end());
    auto next = t.closure(gens);
    if (next.size() == term.size()) return std::nullopt;
    term = std::move(next);
    ++c;
  }
  return c;
}

}  // namespace

GroupDescriptor::GroupDescriptor() : impl_(std::make_shared<const Impl>()) {}

GroupDescriptor GroupDescriptor::free_abelian(std::size_t rank) {
  Impl impl;
  impl.kind = GroupKind::FreeAbelian;
  impl.dimension = rank;
  return GroupDescriptor(std::make_shared<const Impl>(std::move(impl)));
}

GroupDescriptor GroupDescriptor::finite(FiniteTable table) {
  Impl impl;
  impl.kind = GroupKind::Finite;
  impl.finite_class = finite_nilpotency_class(table);
  impl.table = std::move(table);
  return GroupDescriptor(std::make_shared<const Impl>(std::move(impl)));
}

GroupDescriptor GroupDescriptor::dihedral() {
  Impl impl;
  impl.kind = GroupKind::DihedralInfinite;
  return GroupDescriptor(std::make_shared<const Impl>(std::move(impl)));
}

GroupDescriptor GroupDescriptor::unitriangular(std::size_t n) {
  if (n < 2) throw DomainError("UT(n) requires n >= 2");
  Impl impl;
  impl.kind = GroupKind::Unitriangular;
  impl.dimension = n;
  return GroupDescriptor(std::make_shared<const Impl>(std::move(impl)));
}

GroupDescriptor GroupDescriptor::product(std::vector<GroupDescriptor> factors) {
  std::vector<GroupDescriptor> flat;
  for (auto& f : factors) {
    if (f.kind() == GroupKind::Product)
      for (const auto& g : f.factors()) flat.push_back(g);
    else
      flat.push_back(std::move(f));
  }
  if (flat.empty()) return free_abelian(0);
  if (flat.size() == 1) return flat.front();
  Impl impl;
  impl.kind = GroupKind::Product;
  impl.factors = std::move(flat);
  return GroupDescriptor(std::make_shared<const Impl>(std::move(impl)));
}

GroupKind GroupDescriptor::kind() const noexcept { return impl_->kind; }
std::size_t GroupDescriptor::dimension() const noexcept { return impl_->dimension; }

const FiniteTable& GroupDescriptor::table() const {
  if (impl_->kind != GroupKind::Finite) throw DomainError("descriptor " + to_string() + " has no table");
  return impl_->table;
}

std::span<const GroupDescriptor> GroupDescriptor::factors() const { return impl_->factors; }

bool operator==(const GroupDescriptor& a, const GroupDescriptor& b) {
  if (a.impl_ == b.impl_) return true;
  if (a.kind() != b.kind() || a.dimension() != b.dimension()) return false;
  switch (a.kind()) {
    case GroupKind::Finite:
      return a.impl_->table == b.impl_->table;
    case GroupKind::Product:
      return std::equal(a.factors().begin(), a.factors().end(), b.factors().begin(), b.factors().end());
    default:
      return true;
  }
}

GroupElement GroupDescriptor::identity() const {
  switch (kind()) {
    case GroupKind::FreeAbelian:
      return IntVector{std::vector<std::int64_t>(dimension(), 0)};
    case GroupKind::Finite:
      return FinitePoint{1};
    case GroupKind::DihedralInfinite:
      return DihedralIsometry{false, 0};
    case GroupKind::Unitriangular:
      return UnitriangularMatrix::identity(dimension());
    case GroupKind::Product: {
      ProductTuple t;
      for (const auto& f : factors()) t.parts.push_back(f.identity());
      return t;
    }
  }
  return {};
}

bool GroupDescriptor::contains(const GroupElement& a) const {
  switch (kind()) {
    case GroupKind::FreeAbelian:
      return a.is<IntVector>() && a.as<IntVector>().coords.size() == dimension();
    case GroupKind::Finite:
      return a.is<FinitePoint>() && a.as<FinitePoint>().index >= 1 &&
             a.as<FinitePoint>().index <= impl_->table.order();
    case GroupKind::DihedralInfinite:
      return a.is<DihedralIsometry>();
    case GroupKind::Unitriangular:
      return a.is<UnitriangularMatrix>() && a.as<UnitriangularMatrix>().n == dimension() &&
             a.as<UnitriangularMatrix>().upper.size() == dimension() * (dimension() - 1) / 2;
    case GroupKind::Product: {
      if (!a.is<ProductTuple>()) return false;
      const auto& parts = a.as<ProductTuple>().parts;
      if (parts.size() != factors().size()) return false;
      for (std::size_t i = 0; i < parts.size(); ++i)
        if (!factors()[i].contains(parts[i])) return false;
      return true;
    }
  }
  return false;
}

void GroupDescriptor::require(const GroupElement& a) const {
  if (!contains(a)) throw DomainError("element does not belong to group " + to_string());
}

GroupElement GroupDescriptor::multiply(const GroupElement& a, const GroupElement& b) const {
  require(a);
  require(b);
  switch (kind()) {
    case GroupKind::FreeAbelian: {
      IntVector r = a.as<IntVector>();
      const auto& bv = b.as<IntVector>().coords;
      for (std::size_t i = 0; i < r.coords.size(); ++i) r.coords[i] = checked_add(r.coords[i], bv[i]);
      return r;
    }
    case GroupKind::Finite:
      return FinitePoint{impl_->table.product(a.as<FinitePoint>().index, b.as<FinitePoint>().index)};
    case GroupKind::DihedralInfinite: {
      // (a o b)(t) = s_a (s_b t + o_b) + o_a
      const auto& da = a.as<DihedralIsometry>();
      const auto& db = b.as<DihedralIsometry>();
      const std::int64_t moved = da.reflection ? checked_neg(db.offset) : db.offset;
      return DihedralIsometry{da.reflection != db.reflection, checked_add(da.offset, moved)};
    }
    case GroupKind::Unitriangular:
      return ut_multiply(a.as<UnitriangularMatrix>(), b.as<UnitriangularMatrix>());
    case GroupKind::Product: {
      ProductTuple t;
      const auto& pa = a.as<ProductTuple>().parts;
      const auto& pb = b.as<ProductTuple>().parts;
      t.parts.reserve(pa.size());
      for (std::size_t i = 0; i < pa.size(); ++i) t.parts.push_back(factors()[i].multiply(pa[i], pb[i]));
      return t;
    }
  }
  return {};
}

GroupElement GroupDescriptor::invert(const GroupElement& a) const {
  require(a);
  switch (kind()) {
    case GroupKind::FreeAbelian: {
      IntVector r = a.as<IntVector>();
      for (auto& c : r.coords) c = checked_neg(c);
      return r;
    }
    case GroupKind::Finite:
      return FinitePoint{impl_->table.inverse(a.as<FinitePoint>().index)};
    case GroupKind::DihedralInfinite: {
      const auto& d = a.as<DihedralIsometry>();
      // reflections are involutions; translations invert their offset
      if (d.reflection) return d;
      return DihedralIsometry{false, checked_neg(d.offset)};
    }
    case GroupKind::Unitriangular:
      return ut_invert(a.as<UnitriangularMatrix>());
    case GroupKind::Product: {
      ProductTuple t;
      const auto& pa = a.as<ProductTuple>().parts;
      for (std::size_t i = 0; i < pa.size(); ++i) t.parts.push_back(factors()[i].invert(pa[i]));
      return t;
    }
  }
  return {};
}

GroupElement GroupDescriptor::power(const GroupElement& a, std::int64_t exponent) const {
  GroupElement base = exponent < 0 ? invert(a) : a;
  std::uint64_t e = exponent < 0 ? static_cast<std::uint64_t>(-(exponent + 1)) + 1 : static_cast<std::uint64_t>(exponent);
  GroupElement result = identity();
  while (e) {
    if (e & 1) result = multiply(result, base);
    e >>= 1;
    if (e) base = multiply(base, base);
  }
  return result;
}

GroupElement GroupDescriptor::commutator(const GroupElement& a, const GroupElement& b) const {
  return multiply(multiply(invert(a), invert(b)), multiply(a, b));
}

ElementOrder GroupDescriptor::order(const GroupElement& a) const {
  require(a);
  switch (kind()) {
    case GroupKind::FreeAbelian:
      return is_identity(a) ? ElementOrder{1} : std::nullopt;
    case GroupKind::Finite: {
      const std::uint32_t x = a.as<FinitePoint>().index;
      std::uint32_t acc = x;
      std::uint64_t k = 1;
      while (acc != 1) {
        acc = impl_->table.product(acc, x);
        ++k;
      }
      return k;
    }
    case GroupKind::DihedralInfinite: {
      const auto& d = a.as<DihedralIsometry>();
      if (d.reflection) return 2;
      return d.offset == 0 ? ElementOrder{1} : std::nullopt;
    }
    case GroupKind::Unitriangular:
      return is_identity(a) ? ElementOrder{1} : std::nullopt;
    case GroupKind::Product: {
      std::uint64_t l = 1;
      const auto& parts = a.as<ProductTuple>().parts;
      for (std::size_t i = 0; i < parts.size(); ++i) {
        const auto o = factors()[i].order(parts[i]);
        if (!o) return std::nullopt;
        l = std::lcm(l, *o);
      }
      return l;
    }
  }
  return std::nullopt;
}

std::vector<GroupElement> GroupDescriptor::standard_generators() const {
  std::vector<GroupElement> gens;
  switch (kind()) {
    case GroupKind::FreeAbelian:
      for (std::size_t i = 0; i < dimension(); ++i) {
        IntVector v{std::vector<std::int64_t>(dimension(), 0)};
        v.coords[i] = 1;
        gens.emplace_back(std::move(v));
      }
      break;
    case GroupKind::Finite:
      for (std::uint32_t j = 1; j <= impl_->table.order(); ++j) gens.emplace_back(FinitePoint{j});
      break;
    case GroupKind::DihedralInfinite:
      gens.emplace_back(DihedralIsometry{true, 0});
      gens.emplace_back(DihedralIsometry{true, 1});
      break;
    case GroupKind::Unitriangular:
      for (std::size_t j = 2; j <= dimension(); ++j)
        for (std::size_t i = 1; i < j; ++i) gens.emplace_back(UnitriangularMatrix::elementary(dimension(), i, j));
      break;
    case GroupKind::Product: {
      const auto id = identity().as<ProductTuple>();
      for (std::size_t f = 0; f < factors().size(); ++f)
        for (auto& g : factors()[f].standard_generators()) {
          ProductTuple t = id;
          t.parts[f] = std::move(g);
          gens.emplace_back(std::move(t));
        }
      break;
    }
  }
  return gens;
}

bool GroupDescriptor::is_abelian() const {
  switch (kind()) {
    case GroupKind::FreeAbelian:
      return true;
    case GroupKind::Finite:
      return impl_->table.is_abelian();
    case GroupKind::DihedralInfinite:
      return false;
    case GroupKind::Unitriangular:
      return dimension() == 2;
    case GroupKind::Product:
      return std::all_of(factors().begin(), factors().end(), [](const auto& f) { return f.is_abelian(); });
  }
  return false;
}

bool GroupDescriptor::is_torsion_free() const {
  switch (kind()) {
    case GroupKind::FreeAbelian:
    case GroupKind::Unitriangular:
      return true;
    case GroupKind::Finite:
      return impl_->table.order() == 1;
    case GroupKind::DihedralInfinite:
      return false;
    case GroupKind::Product:
      return std::all_of(factors().begin(), factors().end(), [](const auto& f) { return f.is_torsion_free(); });
  }
  return false;
}

std::optional<unsigned> GroupDescriptor::nilpotency_class() const {
  switch (kind()) {
    case GroupKind::FreeAbelian:
      return dimension() == 0 ? 0u : 1u;
    case GroupKind::Finite:
      return impl_->finite_class;
    case GroupKind::DihedralInfinite:
      return std::nullopt;
    case GroupKind::Unitriangular:
      return static_cast<unsigned>(dimension() - 1);
    case GroupKind::Product: {
      unsigned c = 0;
      for (const auto& f : factors()) {
        const auto fc = f.nilpotency_class();
        if (!fc) return std::nullopt;
        c = std::max(c, *fc);
      }
      return c;
    }
  }
  return std::nullopt;
}

std::size_t GroupDescriptor::hirsch_length() const {
  switch (kind()) {
    case GroupKind::FreeAbelian:
      return dimension();
    case GroupKind::Finite:
      return 0;
    case GroupKind::DihedralInfinite:
      return 1;
    case GroupKind::Unitriangular:
      return dimension() * (dimension() - 1) / 2;
    case GroupKind::Product: {
      std::size_t h = 0;
      for (const auto& f : factors()) h += f.hirsch_length();
      return h;
    }
  }
  return 0;
}

std::size_t GroupDescriptor::free_rank() const {
  if (kind() == GroupKind::FreeAbelian) return dimension();
  if (kind() != GroupKind::Product) return 0;
  std::size_t r = 0;
  for (const auto& f : factors()) r += f.free_rank();
  return r;
}

// ---------------------------------------------------------------------------
// Component access

std::vector<std::int64_t> free_coordinates(const GroupElement& a) {
  if (a.is<IntVector>()) return a.as<IntVector>().coords;
  std::vector<std::int64_t> out;
  if (a.is<ProductTuple>())
    for (const auto& p : a.as<ProductTuple>().parts)
      if (p.is<IntVector>()) {
        const auto& c = p.as<IntVector>().coords;
        out.insert(out.end(), c.begin(), c.end());
      }
  return out;
}

std::optional<std::uint32_t> finite_component(const GroupElement& a) {
  if (a.is<FinitePoint>()) return a.as<FinitePoint>().index;
  if (a.is<ProductTuple>())
    for (const auto& p : a.as<ProductTuple>().parts)
      if (p.is<FinitePoint>()) return p.as<FinitePoint>().index;
  return std::nullopt;
}

const DihedralIsometry* dihedral_component(const GroupElement& a) {
  if (a.is<DihedralIsometry>()) return &a.as<DihedralIsometry>();
  if (a.is<ProductTuple>())
    for (const auto& p : a.as<ProductTuple>().parts)
      if (p.is<DihedralIsometry>()) return &p.as<DihedralIsometry>();
  return nullptr;
}

const UnitriangularMatrix* unitriangular_component(const GroupElement& a) {
  if (a.is<UnitriangularMatrix>()) return &a.as<UnitriangularMatrix>();
  if (a.is<ProductTuple>())
    for (const auto& p : a.as<ProductTuple>().parts)
      if (p.is<UnitriangularMatrix>()) return &p.as<UnitriangularMatrix>();
  return nullptr;
}

// ---------------------------------------------------------------------------
// Dihedral words
//
// Translation t -> t + o: o < 0 is (xy)^|o|, o > 0 is (yx)^o.
// Reflection t -> -t + o: o <= 0 is (xy)^|o| x, o >= 1 is (yx)^(o-1) y.

DihedralWord dihedral_word(const DihedralIsometry& d) {
  const auto mag = [](std::int64_t v) {
    return v < 0 ? static_cast<std::uint64_t>(-(v + 1)) + 1 : static_cast<std::uint64_t>(v);
  };
  if (!d.reflection) {
    if (d.offset == 0) return {};
    return {d.offset < 0 ? 'x' : 'y', 2 * mag(d.offset)};
  }
  if (d.offset <= 0) return {'x', 2 * mag(d.offset) + 1};
  return {'y', 2 * mag(d.offset) - 1};
}

std::string dihedral_word_text(const DihedralIsometry& d) {
  const auto w = dihedral_word(d);
  if (w.length == 0) return "1";
  std::string s;
  s.reserve(w.length);
  char c = w.first;
  for (std::uint64_t i = 0; i < w.length; ++i) {
    s.push_back(c);
    c = c == 'x' ? 'y' : 'x';
  }
  return s;
}

// ---------------------------------------------------------------------------
// Unitriangular normal form

std::map<std::pair<std::size_t, std::size_t>, Integer> normal_form_exponents(const UnitriangularMatrix& a) {
  const std::size_t n = a.n;
  std::map<std::pair<std::size_t, std::size_t>, Integer> exps;
  // A = C_n C_{n-1} ... C_2 with C_j = prod_i g_{i,j}^{e_{i,j}}. Read C_2 off column 2,
  // strip it (A <- A C_2^{-1}), then continue with column 3, ...
  UnitriangularMatrix rest = a;
  for (std::size_t j = 2; j <= n; ++j) {
    UnitriangularMatrix column = UnitriangularMatrix::identity(n);
    for (std::size_t i = 1; i < j; ++i) {
      exps[{i, j}] = rest.entry(i, j);
      column.set(i, j, rest.entry(i, j));
    }
    rest = ut_multiply(rest, ut_invert(column));
  }
  return exps;
}

UnitriangularMatrix from_normal_form(std::size_t n,
                                     const std::map<std::pair<std::size_t, std::size_t>, Integer>& exponents) {
  auto exponent = [&](std::size_t i, std::size_t j) {
    const auto it = exponents.find({i, j});
    return it == exponents.end() ? Integer(0) : it->second;
  };
  UnitriangularMatrix result = UnitriangularMatrix::identity(n);
  for (std::size_t j = n; j >= 2; --j)
    for (std::size_t i = 1; i < j; ++i)
      result = ut_multiply(result, UnitriangularMatrix::elementary(n, i, j, exponent(i, j)));
  return result;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

bool free_parts_span(std::size_t n, std::span<const std::vector<std::int64_t>> vectors) {
  if (n == 0) return true;
  if (vectors.size() < n) return false;
  IntMatrix m(vectors.size(), n);
  for (std::size_t r = 0; r < vectors.size(); ++r)
    for (std::size_t c = 0; c < n; ++c) m(r, c) = static_cast<long>(vectors[r][c]);
  const auto snf = smith_normal_form(m);
  return std::all_of(snf.factors.begin(), snf.factors.end(), [](const Integer& d) { return d == 1; });
}

std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b); }

}  // namespace

bool verify_generation(const GroupDescriptor& group, std::span<const GroupElement> elements) {
  for (const auto& e : elements) group.require(e);
  switch (group.kind()) {
    case GroupKind::FreeAbelian: {
      std::vector<std::vector<std::int64_t>> vs;
      for (const auto& e : elements) vs.push_back(e.as<IntVector>().coords);
      return free_parts_span(group.dimension(), vs);
    }
    case GroupKind::Finite: {
      std::vector<std::uint32_t> idx;
      for (const auto& e : elements) idx.push_back(e.as<FinitePoint>().index);
      return group.table().closure(idx).size() == group.table().order();
    }
    case GroupKind::DihedralInfinite: {
      // Translation subgroup of <S> is d Z with d = gcd(translations, reflection offset differences).
      std::optional<std::int64_t> reflection;
      std::int64_t d = 0;
      for (const auto& e : elements) {
        const auto& iso = e.as<DihedralIsometry>();
        if (iso.reflection) {
          if (reflection) d = gcd64(d, checked_sub(iso.offset, *reflection));
          else reflection = iso.offset;
        } else {
          d = gcd64(d, iso.offset);
        }
      }
      return reflection.has_value() && d == 1;
    }
    case GroupKind::Unitriangular: {
      // The superdiagonal g_{i,i+1} (or inverses) generate UT(n).
      const std::size_t n = group.dimension();
      for (std::size_t i = 1; i < n; ++i) {
        const GroupElement g = UnitriangularMatrix::elementary(n, i, i + 1);
        const GroupElement gi = UnitriangularMatrix::elementary(n, i, i + 1, -1);
        if (std::none_of(elements.begin(), elements.end(),
                         [&](const GroupElement& e) { return e == g || e == gi; }))
          return false;
      }
      return true;
    }
    case GroupKind::Product: {
      const auto fs = group.factors();
      if (fs.size() == 2 && fs[0].kind() == GroupKind::FreeAbelian && fs[1].kind() == GroupKind::Finite) {
        // Z^n x F: the elements with zero free part give {0} x F, then the free parts must span Z^n.
        std::vector<std::uint32_t> pure_finite;
        std::vector<std::vector<std::int64_t>> free_parts;
        for (const auto& e : elements) {
          const auto& parts = e.as<ProductTuple>().parts;
          const auto& v = parts[0].as<IntVector>().coords;
          free_parts.push_back(v);
          if (std::all_of(v.begin(), v.end(), [](std::int64_t c) { return c == 0; }))
            pure_finite.push_back(parts[1].as<FinitePoint>().index);
        }
        if (fs[1].table().closure(pure_finite).size() == fs[1].table().order() &&
            free_parts_span(fs[0].dimension(), free_parts))
          return true;
      }
      // Generic sufficient test: each factor is generated by the elements supported on it.
      for (std::size_t f = 0; f < fs.size(); ++f) {
        std::vector<GroupElement> local;
        for (const auto& e : elements) {
          const auto& parts = e.as<ProductTuple>().parts;
          bool pure = true;
          for (std::size_t k = 0; k < parts.size() && pure; ++k)
            if (k != f && !fs[k].is_identity(parts[k])) pure = false;
          if (pure) local.push_back(parts[f]);
        }
        if (!verify_generation(fs[f], local)) return false;
      }
      return true;
    }
  }
  return false;
}

GeneratingSequence::GeneratingSequence(GroupDescriptor group, std::vector<GroupElement> elements)
    : group_(std::move(group)), elements_(std::move(elements)) {
  for (const auto& e : elements_) group_.require(e);
  status_ = verify_generation(group_, elements_) ? GenerationStatus::VerifiedStructural
                                                 : GenerationStatus::Unverified;
}

GeneratingSequence GeneratingSequence::standard(const GroupDescriptor& group) {
  return GeneratingSequence(group, group.standard_generators());
}

bool GeneratingSequence::is_standard() const { return elements_ == group_.standard_generators(); }

// ---------------------------------------------------------------------------
// Balls

std::vector<std::vector<GroupElement>> ball_layers(const GroupDescriptor& group,
                                                   std::span<const GroupElement> gens, unsigned radius) {
  std::vector<GroupElement> symmetric;
  for (const auto& g : gens) {
    group.require(g);
    for (GroupElement s : {g, group.invert(g)})
      if (std::find(symmetric.begin(), symmetric.end(), s) == symmetric.end()) symmetric.push_back(std::move(s));
  }
  std::vector<std::vector<GroupElement>> layers;
  layers.push_back({group.identity()});
  std::set<GroupElement> seen{group.identity()};
  for (unsigned r = 1; r <= radius; ++r) {
    std::vector<GroupElement> next;
    for (const auto& w : layers.back())
      for (const auto& s : symmetric) {
        GroupElement v = group.multiply(w, s);
        if (seen.insert(v).second) next.push_back(std::move(v));
      }
    layers.push_back(std::move(next));
  }
  return layers;
}

std::vector<GroupElement> ball(const GroupDescriptor& group, std::span<const GroupElement> gens, unsigned radius) {
  std::vector<GroupElement> out;
  for (auto& layer : ball_layers(group, gens, radius))
    for (auto& e : layer) out.push_back(std::move(e));
  return out;
}

std::vector<GroupElement> ball(const GeneratingSequence& gens, unsigned radius) {
  return ball(gens.group(), gens.elements(), radius);
}

}  // namespace confset
