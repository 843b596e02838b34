#include <sstream>

#include "confset/error.hpp"
#include "confset/group.hpp"
#include "text_cursor.hpp"

namespace confset {
namespace {

using detail::Cursor;

GroupDescriptor parse_factor(Cursor& c) {
  if (c.accept_keyword("Dinf") || c.accept_keyword("D_inf")) return GroupDescriptor::dihedral();
  if (c.accept("UT(") || c.accept("Tr(")) {
    const auto n = c.integer();
    c.expect(')');
    if (n < 2) c.fail("UT(n) requires n >= 2");
    return GroupDescriptor::unitriangular(static_cast<std::size_t>(n));
  }
  if (c.accept("C(")) {
    const auto n = c.integer();
    c.expect(')');
    if (n < 1) c.fail("C(n) requires n >= 1");
    return GroupDescriptor::finite(FiniteTable::cyclic(static_cast<std::uint32_t>(n)));
  }
  if (c.accept("F[")) {
    c.accept("table:");
    std::vector<std::vector<std::uint32_t>> rows(1);
    while (!c.accept(']')) {
      if (c.accept(';')) {
        rows.emplace_back();
        continue;
      }
      const auto v = c.integer();
      if (v < 1) c.fail("table entries are 1-based indices");
      rows.back().push_back(static_cast<std::uint32_t>(v));
    }
    try {
      return GroupDescriptor::finite(FiniteTable::from_rows(rows));
    } catch (const DomainError& e) {
      c.fail(e.what());
    }
  }
  if (c.accept('Z')) {
    if (c.peek_raw() == '^') {
      c.get();
      const auto n = c.integer();
      if (n < 0) c.fail("Z^n requires n >= 0");
      return GroupDescriptor::free_abelian(static_cast<std::size_t>(n));
    }
    return GroupDescriptor::free_abelian(1);
  }
  c.fail("expected a group factor (Z^n, Dinf, UT(n), C(n), F[table: ...])");
}

std::string join_coords(const std::vector<std::int64_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(v[i]);
  }
  return s;
}

std::string format_inner(const GroupDescriptor& g, const GroupElement& a) {
  if (g.kind() == GroupKind::FreeAbelian) return join_coords(a.as<IntVector>().coords);
  return g.format(a);
}

/// Split at depth-0 occurrences of any separator character.
std::vector<std::string_view> split_top(std::string_view text, std::string_view seps, bool drop_empty) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    const char ch = i < text.size() ? text[i] : seps.front();
    if (ch == '(' || ch == '[') ++depth;
    if (ch == ')' || ch == ']') --depth;
    if ((depth == 0 && seps.find(ch) != std::string_view::npos) || i == text.size()) {
      auto piece = text.substr(start, i - start);
      while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.front()))) piece.remove_prefix(1);
      while (!piece.empty() && std::isspace(static_cast<unsigned char>(piece.back()))) piece.remove_suffix(1);
      if (!piece.empty() || !drop_empty) out.push_back(piece);
      start = i + 1;
    }
  }
  return out;
}

GroupElement parse_free(const GroupDescriptor& g, std::string_view inner, std::size_t base) {
  IntVector v;
  if (!inner.empty() && inner.find_first_not_of(" \t") != std::string_view::npos) {
    for (auto piece : split_top(inner, ",", false)) {
      Cursor c(piece, base);
      v.coords.push_back(c.integer());
      if (!c.at_end()) c.fail("trailing characters in coordinate");
    }
  }
  if (v.coords.size() != g.dimension())
    throw ParseError("element of Z^" + std::to_string(g.dimension()) + " needs " + std::to_string(g.dimension()) +
                         " coordinates, got " + std::to_string(v.coords.size()) + " in \"" + std::string(inner) + "\"",
                     base);
  return v;
}

GroupElement parse_standalone(const GroupDescriptor& g, std::string_view text);

GroupElement parse_inner(const GroupDescriptor& g, std::string_view text) {
  if (g.kind() == GroupKind::FreeAbelian) return parse_free(g, text, 0);
  return parse_standalone(g, text);
}

GroupElement parse_standalone(const GroupDescriptor& g, std::string_view text) {
  Cursor c(text);
  if (c.accept_keyword("e")) {
    if (!c.at_end()) c.fail("trailing characters after identity");
    return g.identity();
  }
  switch (g.kind()) {
    case GroupKind::FreeAbelian: {
      c.expect('(');
      const auto inner = c.balanced_until_close();
      if (!c.at_end()) c.fail("trailing characters after vector");
      return parse_free(g, inner, 1);
    }
    case GroupKind::Finite: {
      c.accept('x');
      const auto j = c.integer();
      if (!c.at_end()) c.fail("trailing characters after finite element");
      if (j < 1 || j > g.table().order())
        c.fail("finite element index " + std::to_string(j) + " outside [1," + std::to_string(g.table().order()) + "]");
      return FinitePoint{static_cast<std::uint32_t>(j)};
    }
    case GroupKind::DihedralInfinite: {
      if (c.accept("dih(")) {
        const auto f = c.integer();
        c.expect(',');
        const auto o = c.integer();
        c.expect(')');
        if (!c.at_end()) c.fail("trailing characters after dih(...)");
        if (f != 0 && f != 1) c.fail("reflection flag must be 0 or 1");
        return DihedralIsometry{f == 1, o};
      }
      if (c.accept_keyword("1")) {
        if (!c.at_end()) c.fail("trailing characters");
        return g.identity();
      }
      GroupElement acc = g.identity();
      const GroupElement x = DihedralIsometry{true, 0};
      const GroupElement y = DihedralIsometry{true, 1};
      bool any = false;
      while (!c.at_end()) {
        const char ch = c.get();
        if (ch == 'x') acc = g.multiply(acc, x);
        else if (ch == 'y') acc = g.multiply(acc, y);
        else c.fail("dihedral words use the letters x and y");
        any = true;
      }
      if (!any) c.fail("empty dihedral element");
      return acc;
    }
    case GroupKind::Unitriangular: {
      const std::size_t n = g.dimension();
      if (c.accept_keyword("I") || c.accept_keyword("1")) {
        if (!c.at_end()) c.fail("trailing characters");
        return g.identity();
      }
      if (c.accept("ut[")) {
        UnitriangularMatrix m = UnitriangularMatrix::identity(n);
        for (std::size_t i = 1; i <= n; ++i) {
          if (i > 1) c.expect(',');
          c.expect('[');
          for (std::size_t j = 1; j <= n; ++j) {
            if (j > 1) c.expect(',');
            const Integer v(c.integer_text());
            if (i < j) {
              m.set(i, j, v);
            } else if (v != (i == j ? 1 : 0)) {
              throw DomainError("matrix entry (" + std::to_string(i) + "," + std::to_string(j) + ") = " +
                                v.get_str() + " violates unitriangularity");
            }
          }
          c.expect(']');
        }
        c.expect(']');
        if (!c.at_end()) c.fail("trailing characters after ut[[...]]");
        return m;
      }
      if (c.accept('g')) {
        std::int64_t i = 0, j = 0;
        if (c.accept('(')) {
          i = c.integer();
          c.expect(',');
          j = c.integer();
          c.expect(')');
        } else {
          const std::string digits = c.identifier();
          if (digits.size() != 2 || !std::isdigit(static_cast<unsigned char>(digits[0])) ||
              !std::isdigit(static_cast<unsigned char>(digits[1])))
            c.fail("use g(i,j) for generator indices above 9");
          i = digits[0] - '0';
          j = digits[1] - '0';
        }
        std::int64_t exponent = 1;
        if (c.accept('^')) exponent = c.integer();
        if (!c.at_end()) c.fail("trailing characters after generator");
        if (!(1 <= i && i < j && j <= static_cast<std::int64_t>(n))) c.fail("generator g(i,j) needs 1 <= i < j <= n");
        return UnitriangularMatrix::elementary(n, static_cast<std::size_t>(i), static_cast<std::size_t>(j),
                                               Integer(static_cast<long>(exponent)));
      }
      c.fail("expected ut[[...]], g(i,j) or I");
    }
    case GroupKind::Product: {
      c.expect('(');
      const auto inner = c.balanced_until_close();
      if (!c.at_end()) c.fail("trailing characters after product element");
      const auto pieces = split_top(inner, ";", false);
      if (pieces.size() != g.factors().size())
        c.fail("product element needs " + std::to_string(g.factors().size()) + " ';'-separated parts");
      ProductTuple t;
      for (std::size_t i = 0; i < pieces.size(); ++i) t.parts.push_back(parse_inner(g.factors()[i], pieces[i]));
      return t;
    }
  }
  c.fail("unsupported element");
}

}  // namespace

GroupDescriptor parse_group(std::string_view text) {
  Cursor c(text);
  std::vector<GroupDescriptor> factors;
  do {
    factors.push_back(parse_factor(c));
  } while (c.accept_keyword("x"));
  if (!c.at_end()) c.fail("unexpected trailing text in group spec");
  return GroupDescriptor::product(std::move(factors));
}

std::string GroupDescriptor::to_string() const {
  switch (kind()) {
    case GroupKind::FreeAbelian:
      return "Z^" + std::to_string(dimension());
    case GroupKind::Finite:
      return table().to_string();
    case GroupKind::DihedralInfinite:
      return "Dinf";
    case GroupKind::Unitriangular:
      return "UT(" + std::to_string(dimension()) + ")";
    case GroupKind::Product: {
      std::string s;
      for (std::size_t i = 0; i < factors().size(); ++i) {
        if (i) s += " x ";
        s += factors()[i].to_string();
      }
      return s;
    }
  }
  return {};
}

std::string GroupDescriptor::format(const GroupElement& a) const {
  require(a);
  switch (kind()) {
    case GroupKind::FreeAbelian:
      return "(" + join_coords(a.as<IntVector>().coords) + ")";
    case GroupKind::Finite:
      return "x" + std::to_string(a.as<FinitePoint>().index);
    case GroupKind::DihedralInfinite: {
      const auto& d = a.as<DihedralIsometry>();
      return "dih(" + std::to_string(d.reflection ? 1 : 0) + "," + std::to_string(d.offset) + ")";
    }
    case GroupKind::Unitriangular: {
      const auto& m = a.as<UnitriangularMatrix>();
      std::ostringstream os;
      os << "ut[";
      for (std::size_t i = 1; i <= m.n; ++i) {
        if (i > 1) os << ',';
        os << '[';
        for (std::size_t j = 1; j <= m.n; ++j) {
          if (j > 1) os << ',';
          os << m.entry(i, j).get_str();
        }
        os << ']';
      }
      os << ']';
      return os.str();
    }
    case GroupKind::Product: {
      const auto& parts = a.as<ProductTuple>().parts;
      std::string s = "(";
      for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) s += "; ";
        s += format_inner(factors()[i], parts[i]);
      }
      return s + ")";
    }
  }
  return {};
}

GroupElement GroupDescriptor::parse_element(std::string_view text) const { return parse_standalone(*this, text); }

std::vector<GroupElement> parse_element_list(const GroupDescriptor& group, std::string_view text) {
  {
    Cursor c(text);
    if (c.accept_keyword("std") && c.at_end()) return group.standard_generators();
  }
  std::vector<GroupElement> out;
  for (auto piece : split_top(text, " \t,;", true)) out.push_back(group.parse_element(piece));
  if (out.empty()) throw ParseError("empty generator list");
  return out;
}

}  // namespace confset
