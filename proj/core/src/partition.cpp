#include "confset/partition.hpp"

#include <algorithm>
#include <sstream>

#include "text_cursor.hpp"

namespace confset {

struct CellPredicate::Node {
  enum class Kind { Always, SignAtom, FiniteAtom, ElementAtom, DihedralAtom, MatrixSign, MatrixValue, And, Or, Not, Mapped };
  Kind kind = Kind::Always;
  std::size_t a = 0, b = 0;
  Sign sign = Sign::Zero;
  std::uint32_t index = 0;
  GroupElement element;
  char letter = 0;
  std::uint64_t min_length = 0;
  Integer value;
  std::vector<CellPredicate> children;
  Isomorphism map;
};

namespace {

using Kind = CellPredicate::Node::Kind;

int sign_of(std::int64_t v) { return (v > 0) - (v < 0); }
int sign_of(const Integer& v) { return sgn(v); }

}  // namespace

CellPredicate CellPredicate::always() { return CellPredicate(std::make_shared<Node>()); }

CellPredicate CellPredicate::sign(std::size_t coordinate, Sign s) {
  if (coordinate == 0) throw DomainError("coordinate indices are 1-based");
  auto n = std::make_shared<Node>();
  n->kind = Kind::SignAtom;
  n->a = coordinate;
  n->sign = s;
  return CellPredicate(n);
}

CellPredicate CellPredicate::finite(std::uint32_t index) {
  if (index == 0) throw DomainError("finite indices are 1-based");
  auto n = std::make_shared<Node>();
  n->kind = Kind::FiniteAtom;
  n->index = index;
  return CellPredicate(n);
}

CellPredicate CellPredicate::element(GroupElement e) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ElementAtom;
  n->element = std::move(e);
  return CellPredicate(n);
}

CellPredicate CellPredicate::dihedral(char first_letter, std::uint64_t min_length) {
  if (first_letter != 'x' && first_letter != 'y') throw DomainError("dihedral words start with x or y");
  auto n = std::make_shared<Node>();
  n->kind = Kind::DihedralAtom;
  n->letter = first_letter;
  n->min_length = std::max<std::uint64_t>(min_length, 1);
  return CellPredicate(n);
}

CellPredicate CellPredicate::matrix_sign(std::size_t row, std::size_t col, Sign s) {
  if (row == 0 || row >= col) throw DomainError("matrix atoms need 1 <= i < j");
  auto n = std::make_shared<Node>();
  n->kind = Kind::MatrixSign;
  n->a = row;
  n->b = col;
  n->sign = s;
  return CellPredicate(n);
}

CellPredicate CellPredicate::matrix_value(std::size_t row, std::size_t col, Integer value) {
  if (row == 0 || row >= col) throw DomainError("matrix atoms need 1 <= i < j");
  auto n = std::make_shared<Node>();
  n->kind = Kind::MatrixValue;
  n->a = row;
  n->b = col;
  n->value = std::move(value);
  return CellPredicate(n);
}

CellPredicate CellPredicate::all_of(std::vector<CellPredicate> parts) {
  if (parts.empty()) return always();
  if (parts.size() == 1) return parts.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(parts);
  return CellPredicate(n);
}

CellPredicate CellPredicate::any_of(std::vector<CellPredicate> parts) {
  if (parts.size() == 1) return parts.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(parts);
  return CellPredicate(n);
}

CellPredicate CellPredicate::negate(CellPredicate inner) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children.push_back(std::move(inner));
  return CellPredicate(n);
}

CellPredicate CellPredicate::mapped(Isomorphism map, CellPredicate inner) {
  if (map.is_identity()) return inner;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Mapped;
  n->map = std::move(map);
  n->children.push_back(std::move(inner));
  return CellPredicate(n);
}

bool CellPredicate::holds(const GroupDescriptor& group, const GroupElement& a) const {
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Always:
      return true;
    case Kind::SignAtom: {
      const auto coords = free_coordinates(a);
      if (n.a > coords.size())
        throw DomainError("sign atom on coordinate " + std::to_string(n.a) + " but the free rank is " +
                          std::to_string(coords.size()));
      return sign_of(coords[n.a - 1]) == static_cast<int>(n.sign);
    }
    case Kind::FiniteAtom: {
      const auto j = finite_component(a);
      if (!j) throw DomainError("finite atom on a group without a finite factor");
      return *j == n.index;
    }
    case Kind::ElementAtom:
      return a == n.element;
    case Kind::DihedralAtom: {
      const auto* d = dihedral_component(a);
      if (!d) throw DomainError("word atom on a group without a dihedral factor");
      const auto w = dihedral_word(*d);
      return w.first == n.letter && w.length >= n.min_length;
    }
    case Kind::MatrixSign:
    case Kind::MatrixValue: {
      const auto* m = unitriangular_component(a);
      if (!m) throw DomainError("entry atom on a group without a unitriangular factor");
      if (n.b > m->n) throw DomainError("entry atom outside the matrix");
      const Integer e = m->entry(n.a, n.b);
      if (n.kind == Kind::MatrixValue) return e == n.value;
      return sign_of(e) == static_cast<int>(n.sign);
    }
    case Kind::And:
      return std::all_of(n.children.begin(), n.children.end(),
                         [&](const CellPredicate& c) { return c.holds(group, a); });
    case Kind::Or:
      return std::any_of(n.children.begin(), n.children.end(),
                         [&](const CellPredicate& c) { return c.holds(group, a); });
    case Kind::Not:
      return !n.children.front().holds(group, a);
    case Kind::Mapped:
      return n.children.front().holds(group, n.map.apply(group, a));
  }
  return false;
}

std::string CellPredicate::to_string(const GroupDescriptor& group) const {
  const Node& n = *node_;
  auto join = [&](const char* op) {
    std::string s = "(";
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) s += op;
      s += n.children[i].to_string(group);
    }
    return s + ")";
  };
  switch (n.kind) {
    case Kind::Always:
      return "all";
    case Kind::SignAtom: {
      const char* name = n.sign == Sign::Positive ? "pos" : n.sign == Sign::Negative ? "neg" : "zero";
      return std::string(name) + "(" + std::to_string(n.a) + ")";
    }
    case Kind::FiniteAtom:
      return "fin(" + std::to_string(n.index) + ")";
    case Kind::ElementAtom:
      return "elem(" + group.format(n.element) + ")";
    case Kind::DihedralAtom:
      return std::string("word(") + n.letter + "," + std::to_string(n.min_length) + ")";
    case Kind::MatrixSign:
      return "entry(" + std::to_string(n.a) + "," + std::to_string(n.b) + ")" +
             (n.sign == Sign::Positive ? ">0" : n.sign == Sign::Negative ? "<0" : "=0");
    case Kind::MatrixValue:
      return "entry(" + std::to_string(n.a) + "," + std::to_string(n.b) + ")=" + n.value.get_str();
    case Kind::And:
      return join(" and ");
    case Kind::Or:
      return n.children.empty() ? "not all" : join(" or ");
    case Kind::Not:
      return "not " + n.children.front().to_string(group);
    case Kind::Mapped:
      return "map(" + n.map.to_string() + "; " + n.children.front().to_string(group) + ")";
  }
  return "?";
}

// ---- predicate parser

namespace {

class PredicateParser {
 public:
  PredicateParser(const GroupDescriptor& g, std::string_view text, std::size_t base) : g_(g), c_(text, base) {}

  CellPredicate parse_all() {
    auto p = parse_or();
    if (!c_.at_end()) c_.fail("unexpected trailing input");
    return p;
  }

 private:
  CellPredicate parse_or() {
    std::vector<CellPredicate> parts{parse_and()};
    while (c_.accept_keyword("or") || c_.accept("||")) parts.push_back(parse_and());
    return CellPredicate::any_of(std::move(parts));
  }

  CellPredicate parse_and() {
    std::vector<CellPredicate> parts{parse_unary()};
    while (c_.accept_keyword("and") || c_.accept("&&")) parts.push_back(parse_unary());
    return CellPredicate::all_of(std::move(parts));
  }

  CellPredicate parse_unary() {
    if (c_.accept_keyword("not") || c_.accept('!')) return CellPredicate::negate(parse_unary());
    if (c_.accept('(')) {
      auto p = parse_or();
      c_.expect(')');
      return p;
    }
    return parse_atom();
  }

  std::size_t index_arg() {
    const auto v = c_.integer();
    if (v < 1) c_.fail("indices are 1-based");
    return static_cast<std::size_t>(v);
  }

  CellPredicate parse_atom() {
    const std::size_t at = c_.position();
    const std::string word = c_.identifier();
    if (word == "all" || word == "true") return CellPredicate::always();
    if (word == "pos" || word == "neg" || word == "zero") {
      c_.expect('(');
      const auto i = index_arg();
      c_.expect(')');
      if (i > g_.free_rank())
        throw ParseError("coordinate " + std::to_string(i) + " exceeds the free rank " + std::to_string(g_.free_rank()), at);
      const Sign s = word == "pos" ? Sign::Positive : word == "neg" ? Sign::Negative : Sign::Zero;
      return CellPredicate::sign(i, s);
    }
    if (word == "fin") {
      c_.expect('(');
      c_.accept('x');
      const auto j = index_arg();
      c_.expect(')');
      const GroupDescriptor* f = finite_factor();
      if (!f) throw ParseError("fin() needs a finite factor", at);
      if (j > f->table().order()) throw ParseError("finite index " + std::to_string(j) + " out of range", at);
      return CellPredicate::finite(static_cast<std::uint32_t>(j));
    }
    if (word == "elem") {
      c_.expect('(');
      const std::size_t inner_at = c_.position();
      const auto inner = c_.balanced_until_close();
      try {
        return CellPredicate::element(g_.parse_element(inner));
      } catch (const ParseError& e) {
        throw ParseError(std::string("bad element literal: ") + e.what(), inner_at + e.position());
      }
    }
    if (word == "word") {
      if (!has_kind(GroupKind::DihedralInfinite)) throw ParseError("word() needs a dihedral factor", at);
      c_.expect('(');
      const char letter = c_.get();
      if (letter != 'x' && letter != 'y') c_.fail("word() starts with x or y");
      std::uint64_t len = 1;
      if (c_.accept(',')) len = index_arg();
      c_.expect(')');
      return CellPredicate::dihedral(letter, len);
    }
    if (word == "entry") {
      if (!has_kind(GroupKind::Unitriangular)) throw ParseError("entry() needs a unitriangular factor", at);
      c_.expect('(');
      const auto i = index_arg();
      c_.expect(',');
      const auto j = index_arg();
      c_.expect(')');
      if (i >= j) throw ParseError("entry(i,j) needs i < j", at);
      if (c_.accept('>')) {
        c_.expect('0');
        return CellPredicate::matrix_sign(i, j, Sign::Positive);
      }
      if (c_.accept('<')) {
        c_.expect('0');
        return CellPredicate::matrix_sign(i, j, Sign::Negative);
      }
      c_.expect('=');
      return CellPredicate::matrix_value(i, j, Integer(c_.integer_text()));
    }
    if (word == "map") {
      c_.expect('(');
      const std::size_t inner_at = c_.position();
      const auto inner = c_.balanced_until_close();
      int depth = 0;
      std::size_t split = std::string_view::npos;
      for (std::size_t i = 0; i < inner.size() && split == std::string_view::npos; ++i) {
        if (inner[i] == '(' || inner[i] == '[') ++depth;
        if (inner[i] == ')' || inner[i] == ']') --depth;
        if (inner[i] == ';' && depth == 0) split = i;
      }
      if (split == std::string_view::npos) throw ParseError("map() needs 'iso; expr'", inner_at);
      auto iso = Isomorphism::parse(inner.substr(0, split));
      iso.validate(g_);
      PredicateParser sub(g_, inner.substr(split + 1), inner_at + split + 1);
      return CellPredicate::mapped(std::move(iso), sub.parse_all());
    }
    if (word == "otherwise") throw ParseError("'otherwise' must be the whole expression of the last cell", at);
    throw ParseError("unknown atom '" + word + "'", at);
  }

  bool has_kind(GroupKind k) const {
    if (g_.kind() == k) return true;
    if (g_.kind() != GroupKind::Product) return false;
    for (const auto& f : g_.factors())
      if (f.kind() == k) return true;
    return false;
  }

  const GroupDescriptor* finite_factor() const {
    if (g_.kind() == GroupKind::Finite) return &g_;
    if (g_.kind() != GroupKind::Product) return nullptr;
    for (const auto& f : g_.factors())
      if (f.kind() == GroupKind::Finite) return &f;
    return nullptr;
  }

  const GroupDescriptor& g_;
  detail::Cursor c_;
};

}  // namespace

CellPredicate parse_predicate(const GroupDescriptor& group, std::string_view text) {
  return PredicateParser(group, text, 0).parse_all();
}

// ---- errors and layout

namespace {

std::string classification_message(ClassificationError::Kind kind, const std::string& witness,
                                   const std::vector<CellIndex>& cells) {
  if (kind == ClassificationError::Kind::NoCell) return "partition is not total: " + witness + " lies in no cell";
  std::string s = "partition is not disjoint: " + witness + " lies in cells";
  for (std::size_t i = 0; i < cells.size(); ++i) s += (i ? ", " : " ") + std::to_string(cells[i]);
  return s;
}

}  // namespace

ClassificationError::ClassificationError(Kind kind, std::string witness, std::vector<CellIndex> cells)
    : DomainError(classification_message(kind, witness, cells)),
      kind_(kind),
      witness_(std::move(witness)),
      cells_(std::move(cells)) {}

std::size_t OrthantLayout::cell_count() const {
  std::size_t c = finite_order;
  for (std::size_t i = 0; i < rank; ++i) c *= 3;
  return c;
}

CellIndex OrthantLayout::index(const std::vector<int>& sigma, std::uint32_t j) const {
  if (sigma.size() != rank) throw DomainError("sign pattern length differs from the free rank");
  if (j < 1 || j > finite_order) throw DomainError("finite index out of range");
  std::size_t code = 0;
  for (int s : sigma) {
    if (s < -1 || s > 1) throw DomainError("sign pattern entries are -1, 0 or 1");
    code = code * 3 + static_cast<std::size_t>(s + 1);
  }
  return static_cast<CellIndex>(code * finite_order + j);
}

std::pair<std::vector<int>, std::uint32_t> OrthantLayout::cell(CellIndex index) const {
  if (index < 1 || index > cell_count()) throw DomainError("cell index out of range");
  const std::size_t zero_based = index - 1;
  const auto j = static_cast<std::uint32_t>(zero_based % finite_order) + 1;
  std::size_t code = zero_based / finite_order;
  std::vector<int> sigma(rank);
  for (std::size_t i = rank; i-- > 0;) {
    sigma[i] = static_cast<int>(code % 3) - 1;
    code /= 3;
  }
  return {sigma, j};
}

// ---- partition

Partition::Partition(GroupDescriptor group, std::vector<Cell> cells, bool otherwise_last)
    : group_(std::move(group)), cells_(std::move(cells)), otherwise_(otherwise_last) {
  if (cells_.empty()) throw DomainError("a partition needs at least one cell");
  if (otherwise_) {
    std::vector<CellPredicate> previous;
    for (std::size_t i = 0; i + 1 < cells_.size(); ++i) previous.push_back(cells_[i].predicate);
    cells_.back().predicate = previous.empty() ? CellPredicate::always()
                                               : CellPredicate::negate(CellPredicate::any_of(std::move(previous)));
  }
}

namespace {

bool orthant_shape(const GroupDescriptor& g, std::size_t& n, std::uint32_t& l) {
  switch (g.kind()) {
    case GroupKind::FreeAbelian:
      n = g.dimension();
      l = 1;
      return true;
    case GroupKind::Finite:
      n = 0;
      l = g.table().order();
      return true;
    case GroupKind::Product: {
      const auto f = g.factors();
      if (f.size() == 2 && f[0].kind() == GroupKind::FreeAbelian && f[1].kind() == GroupKind::Finite) {
        n = f[0].dimension();
        l = f[1].table().order();
        return true;
      }
      return false;
    }
    default:
      return false;
  }
}

}  // namespace

Partition Partition::orthant(const GroupDescriptor& group) {
  std::size_t n = 0;
  std::uint32_t l = 1;
  if (!orthant_shape(group, n, l))
    throw DomainError("orthant partition needs Z^n, a finite group or Z^n x F, got " + group.to_string());
  const bool has_finite = group.kind() != GroupKind::FreeAbelian;
  OrthantLayout layout{n, l};

  Partition p;
  p.group_ = group;
  p.family_ = PartitionFamily::Orthant;
  p.layout_ = layout;
  const std::size_t count = layout.cell_count();
  p.cells_.reserve(count);
  for (CellIndex k = 1; k <= count; ++k) {
    const auto [sigma, j] = layout.cell(k);
    std::vector<CellPredicate> atoms;
    std::string name = "E(";
    for (std::size_t i = 0; i < n; ++i) {
      atoms.push_back(CellPredicate::sign(i + 1, static_cast<Sign>(sigma[i])));
      name += (i ? "," : "") + std::to_string(sigma[i]);
    }
    if (has_finite) atoms.push_back(CellPredicate::finite(j));
    name += ";" + std::to_string(j) + ")";
    p.cells_.push_back({name, CellPredicate::all_of(std::move(atoms))});
  }
  p.direct_ = [layout, has_finite](const GroupElement& a) -> CellIndex {
    const auto coords = free_coordinates(a);
    std::size_t code = 0;
    for (std::size_t i = 0; i < layout.rank; ++i) code = code * 3 + static_cast<std::size_t>(sign_of(coords[i]) + 1);
    const std::uint32_t j = has_finite ? *finite_component(a) : 1;
    return static_cast<CellIndex>(code * layout.finite_order + j);
  };
  return p;
}

Partition Partition::dihedral_five(const GroupDescriptor& group) {
  if (group.kind() != GroupKind::DihedralInfinite)
    throw DomainError("the five-cell partition needs Dinf, got " + group.to_string());
  Partition p;
  p.group_ = group;
  p.family_ = PartitionFamily::DihedralFive;
  p.cells_ = {
      {"E1", CellPredicate::element(DihedralIsometry{false, 0})},
      {"E2", CellPredicate::element(DihedralIsometry{true, 0})},
      {"E3", CellPredicate::element(DihedralIsometry{true, 1})},
      {"E4", CellPredicate::dihedral('x', 2)},
      {"E5", CellPredicate::dihedral('y', 2)},
  };
  p.direct_ = [](const GroupElement& a) -> CellIndex {
    const auto w = dihedral_word(a.as<DihedralIsometry>());
    if (w.length == 0) return 1;
    if (w.length == 1) return w.first == 'x' ? 2 : 3;
    return w.first == 'x' ? 4 : 5;
  };
  return p;
}

Partition Partition::trivial(const GroupDescriptor& group) {
  Partition p;
  p.group_ = group;
  p.family_ = PartitionFamily::Trivial;
  p.cells_ = {{"G", CellPredicate::always()}};
  p.direct_ = [](const GroupElement&) -> CellIndex { return 1; };
  return p;
}

Partition Partition::sign(const GroupDescriptor& group) {
  if (group.free_rank() == 0) throw DomainError("sign partition needs a free-abelian coordinate, got " + group.to_string());
  Partition p;
  p.group_ = group;
  p.family_ = PartitionFamily::Sign;
  p.cells_ = {
      {"neg", CellPredicate::sign(1, Sign::Negative)},
      {"zero", CellPredicate::sign(1, Sign::Zero)},
      {"pos", CellPredicate::sign(1, Sign::Positive)},
  };
  p.direct_ = [](const GroupElement& a) -> CellIndex {
    return static_cast<CellIndex>(sign_of(free_coordinates(a).front()) + 2);
  };
  return p;
}

Partition Partition::builtin(std::string_view name, const GroupDescriptor& group) {
  if (name == "orthant") return orthant(group);
  if (name == "dinf5") return dihedral_five(group);
  if (name == "trivial") return trivial(group);
  if (name == "sign") return sign(group);
  throw ParseError("unknown builtin partition '" + std::string(name) + "' (expected orthant, dinf5, trivial or sign)");
}

Partition Partition::parse(const GroupDescriptor& group, std::string_view text) {
  std::vector<Cell> cells;
  bool has_otherwise = false;
  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    const std::size_t base = line_start;
    line_start = line_end + 1;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const auto def = line.find(":=");
    if (def == std::string_view::npos) throw ParseError("expected 'name := expression'", base);
    if (has_otherwise) throw ParseError("'otherwise' must be the last cell", base);

    std::string_view name = line.substr(0, def);
    const auto first = name.find_first_not_of(" \t");
    if (first == std::string_view::npos) throw ParseError("missing cell name", base);
    name = name.substr(first, name.find_last_not_of(" \t") - first + 1);
    for (const auto& c : cells)
      if (c.name == name) throw ParseError("duplicate cell name '" + std::string(name) + "'", base);

    const std::string_view rhs = line.substr(def + 2);
    detail::Cursor probe(rhs, base + def + 2);
    if (probe.accept_keyword("otherwise") && probe.at_end()) {
      has_otherwise = true;
      cells.push_back({std::string(name), CellPredicate::always()});
      continue;
    }
    cells.push_back({std::string(name), PredicateParser(group, rhs, base + def + 2).parse_all()});
  }
  if (cells.empty()) throw ParseError("partition file defines no cells");
  return Partition(group, std::move(cells), has_otherwise);
}

std::vector<CellIndex> Partition::matching_cells(const GroupElement& a) const {
  std::vector<CellIndex> out;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    if (cells_[i].predicate.holds(group_, a)) out.push_back(static_cast<CellIndex>(i + 1));
  return out;
}

CellIndex Partition::classify(const GroupElement& a) const {
  group_.require(a);
  if (direct_) return direct_(a);
  auto hits = matching_cells(a);
  if (hits.size() == 1) return hits.front();
  throw ClassificationError(hits.empty() ? ClassificationError::Kind::NoCell : ClassificationError::Kind::AmbiguousCell,
                            group_.format(a), std::move(hits));
}

Partition Partition::pullback(const Isomorphism& iso) const {
  iso.validate(group_);
  const Isomorphism inv = iso.inverse();
  Partition p;
  p.group_ = group_;
  // builtin cell semantics (and completeness bounds) do not survive a nontrivial pullback
  p.family_ = iso.is_identity() ? family_ : PartitionFamily::User;
  if (iso.is_identity()) p.layout_ = layout_;
  for (const auto& c : cells_) p.cells_.push_back({c.name, CellPredicate::mapped(inv, c.predicate)});
  if (direct_) {
    p.direct_ = [inv, inner = direct_, g = group_](const GroupElement& a) { return inner(inv.apply(g, a)); };
  }
  return p;
}

Partition Partition::permuted(const std::vector<CellIndex>& order) const {
  if (order.size() != cells_.size()) throw DomainError("cell permutation has the wrong length");
  std::vector<CellIndex> new_of_old(cells_.size() + 1, 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const CellIndex old = order[k];
    if (old < 1 || old > cells_.size() || new_of_old[old] != 0) throw DomainError("not a permutation of the cells");
    new_of_old[old] = static_cast<CellIndex>(k + 1);
  }
  Partition p;
  p.group_ = group_;
  p.family_ = PartitionFamily::User;
  for (CellIndex old : order) p.cells_.push_back(cells_[old - 1]);
  if (direct_) {
    p.direct_ = [new_of_old, inner = direct_](const GroupElement& a) { return new_of_old[inner(a)]; };
  }
  return p;
}

std::string Partition::describe() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < cells_.size(); ++i)
    os << (i + 1) << ' ' << cells_[i].name << " := " << cells_[i].predicate.to_string(group_) << '\n';
  return os.str();
}

// ---- validation and refinement

std::string ValidationReport::to_string(const GroupDescriptor& group) const {
  std::ostringstream os;
  if (ok) {
    os << "ok";
  } else {
    os << (violation == ClassificationError::Kind::NoCell ? "NoCell" : "AmbiguousCell");
    if (witness) os << " witness " << group.format(*witness);
    if (!witness_cells.empty()) {
      os << " cells";
      for (auto c : witness_cells) os << ' ' << c;
    }
  }
  os << " (" << (method == ValidationMethod::Structural ? "structural" : "verified on ball only") << ", radius "
     << radius << ", " << elements_checked << " elements)";
  if (!detail.empty()) os << ": " << detail;
  return os.str();
}

ValidationReport validate(const Partition& p, unsigned radius) {
  return validate(p, GeneratingSequence::standard(p.group()), radius);
}

ValidationReport validate(const Partition& p, const GeneratingSequence& gens, unsigned radius) {
  ValidationReport r;
  r.radius = radius;
  r.method = p.structural() ? ValidationMethod::Structural : ValidationMethod::BallOnly;
  if (!(gens.group() == p.group())) {
    r.ok = false;
    r.detail = "generators and partition belong to different groups";
    return r;
  }
  for (const auto& a : ball(gens, radius)) {
    ++r.elements_checked;
    auto hits = p.matching_cells(a);
    if (hits.size() != 1) {
      r.ok = false;
      r.violation = hits.empty() ? ClassificationError::Kind::NoCell : ClassificationError::Kind::AmbiguousCell;
      r.witness = a;
      r.witness_cells = std::move(hits);
      return r;
    }
    if (p.structural()) {
      const CellIndex direct = p.classify(a);
      if (direct != hits.front()) {
        r.ok = false;
        r.violation = ClassificationError::Kind::AmbiguousCell;
        r.witness = a;
        r.witness_cells = {direct, hits.front()};
        r.detail = "structural classifier disagrees with the cell predicates";
        return r;
      }
    }
  }
  return r;
}

Refinement refine(const Partition& p, CellIndex cell, const CellPredicate& splitter, unsigned validation_radius) {
  if (cell < 1 || cell > p.size())
    throw DomainError("cell " + std::to_string(cell) + " out of range 1.." + std::to_string(p.size()));
  Refinement out;
  Partition& q = out.partition;
  q.group_ = p.group_;
  q.family_ = PartitionFamily::Refined;
  for (CellIndex k = 1; k <= p.size(); ++k) {
    const Cell& c = p.cells_[k - 1];
    if (k != cell) {
      q.cells_.push_back(c);
      out.projection.push_back(k);
      continue;
    }
    q.cells_.push_back({c.name + ":A", c.predicate && splitter});
    q.cells_.push_back({c.name + ":B", c.predicate && !splitter});
    out.projection.push_back(k);
    out.projection.push_back(k);
  }
  if (p.direct_) {
    q.direct_ = [inner = p.direct_, cell, splitter, g = p.group_](const GroupElement& a) -> CellIndex {
      const CellIndex c = inner(a);
      if (c < cell) return c;
      if (c > cell) return c + 1;
      return splitter.holds(g, a) ? cell : cell + 1;
    };
  }

  bool seen_a = false, seen_b = false;
  for (const auto& a : ball(GeneratingSequence::standard(p.group_), validation_radius)) {
    if (!p.cells_[cell - 1].predicate.holds(p.group_, a)) continue;
    (splitter.holds(p.group_, a) ? seen_a : seen_b) = true;
    if (seen_a && seen_b) break;
  }
  if (!seen_a)
    out.warnings.push_back("EmptyPiece: " + q.cells_[cell - 1].name + " is empty on the ball of radius " +
                           std::to_string(validation_radius));
  if (!seen_b)
    out.warnings.push_back("EmptyPiece: " + q.cells_[cell].name + " is empty on the ball of radius " +
                           std::to_string(validation_radius));
  return out;
}

}  // namespace confset
