#include <doctest.h>

#include <random>
#include <set>

#include "confset/error.hpp"
#include "confset/group.hpp"
#include "oracles.hpp"

using namespace confset;

namespace {

GroupElement g_ij(std::size_t n, std::size_t i, std::size_t j, long e = 1) {
  return UnitriangularMatrix::elementary(n, i, j, e);
}

std::vector<GroupDescriptor> all_builtins() {
  return {parse_group("Z^1"),
          parse_group("Z^3"),
          parse_group("C(6)"),
          parse_group("F[table: 1 2 3 4 5 6; 2 1 5 6 3 4; 3 4 1 2 6 5; 4 3 6 5 1 2; 5 6 2 1 4 3; 6 5 4 3 2 1]"),
          GroupDescriptor::dihedral(),
          GroupDescriptor::unitriangular(3),
          GroupDescriptor::unitriangular(4),
          parse_group("Z^2 x C(2)"),
          parse_group("UT(3) x Z^1")};
}

}  // namespace

TEST_SUITE("groups") {
  TEST_CASE("dihedral multiplication and inversion") {
    const auto d = GroupDescriptor::dihedral();
    const auto x = d.parse_element("x"), y = d.parse_element("y");
    CHECK(d.is_identity(d.multiply(x, x)));
    CHECK(d.is_identity(d.multiply(y, y)));
    const auto xy = d.multiply(x, y), yx = d.multiply(y, x);
    CHECK(d.invert(xy) == yx);
    CHECK(d.order(x) == ElementOrder{2});
    CHECK_FALSE(d.order(xy).has_value());
    // isometry t -> -(-t+1) = t-1
    CHECK(d.format(xy) == "dih(0,-1)");
  }

  TEST_CASE("dihedral words match the isometry oracle") {
    const auto d = GroupDescriptor::dihedral();
    for (const auto& w : oracle::dihedral_words(6)) {
      const auto [s, o] = oracle::word_isometry(w);
      const auto e = w.empty() ? d.identity() : d.parse_element(w);
      const auto& iso = e.as<DihedralIsometry>();
      CHECK(iso.reflection == (s == -1));
      CHECK(iso.offset == o);
      CHECK(dihedral_word_text(iso) == (w.empty() ? "1" : w));
      // finite order iff odd length
      CHECK(d.order(e).has_value() == (w.size() % 2 == 1 || w.empty()));
    }
  }

  TEST_CASE("Tr(3) product of g23 and g12") {
    const auto t = GroupDescriptor::unitriangular(3);
    const auto p = t.multiply(g_ij(3, 2, 3), g_ij(3, 1, 2));
    const auto& m = p.as<UnitriangularMatrix>();
    CHECK(m.entry(1, 2) == 1);
    CHECK(m.entry(2, 3) == 1);
    CHECK(m.entry(1, 3) == 0);
    const auto rhs = t.multiply(t.multiply(g_ij(3, 1, 2), t.invert(g_ij(3, 1, 3))), g_ij(3, 2, 3));
    CHECK(p == rhs);
    const auto inv = t.invert(g_ij(3, 1, 2)).as<UnitriangularMatrix>();
    CHECK(inv.entry(1, 2) == -1);
    CHECK(inv.entry(1, 3) == 0);
    CHECK(inv.entry(2, 3) == 0);
  }

  TEST_CASE("product with a finite factor") {
    const auto g = parse_group("Z^2 x C(2)");
    const auto a = g.parse_element("(1,0; x2)"), b = g.parse_element("(0,1; x2)");
    CHECK(g.format(g.multiply(a, b)) == "(1,1; x1)");
    CHECK(g.order(g.parse_element("(0,0; x2)")) == ElementOrder{2});
    CHECK_FALSE(g.order(a).has_value());
    CHECK(g.order(g.identity()) == ElementOrder{1});
  }

  TEST_CASE("normal form exponents") {
    UnitriangularMatrix m = UnitriangularMatrix::identity(3);
    m.set(1, 2, 2);
    m.set(1, 3, 3);
    m.set(2, 3, 4);
    const auto ex = normal_form_exponents(m);
    CHECK(ex.at({1, 3}) == 3);
    CHECK(ex.at({2, 3}) == 4);
    CHECK(ex.at({1, 2}) == 2);
    // (g13^3 g23^4)(g12^2) by plain matrix products
    oracle::Mat e13 = oracle::mat_identity(3), e23 = oracle::mat_identity(3), e12 = oracle::mat_identity(3);
    e13[0][2] = 3;
    e23[1][2] = 4;
    e12[0][1] = 2;
    const auto prod = oracle::mat_mul(oracle::mat_mul(e13, e23), e12);
    for (std::size_t i = 1; i <= 3; ++i)
      for (std::size_t j = 1; j <= 3; ++j) CHECK(prod[i - 1][j - 1] == m.entry(i, j));

    for (const auto& [k, v] : normal_form_exponents(UnitriangularMatrix::identity(4))) CHECK(v == 0);
    const auto g12 = normal_form_exponents(g_ij(3, 1, 2).as<UnitriangularMatrix>());
    for (const auto& [k, v] : g12) CHECK(v == (k == std::pair<std::size_t, std::size_t>{1, 2} ? 1 : 0));
  }

  TEST_CASE("normal form round trip on random Tr(3) and Tr(4)") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<long> dist(-9, 9);
    for (std::size_t n : {3u, 4u}) {
      for (int rep = 0; rep < 500; ++rep) {
        auto m = UnitriangularMatrix::identity(n);
        for (std::size_t i = 1; i <= n; ++i)
          for (std::size_t j = i + 1; j <= n; ++j) m.set(i, j, dist(rng));
        const auto back = from_normal_form(n, normal_form_exponents(m));
        REQUIRE(GroupElement(back) == GroupElement(m));
      }
    }
  }

  TEST_CASE("balls") {
    const auto d = GroupDescriptor::dihedral();
    const auto gens = GeneratingSequence::standard(d);
    const auto b2 = ball(gens, 2);
    CHECK(b2.size() == 5);
    std::set<std::string> words;
    for (const auto& e : b2) words.insert(dihedral_word_text(e.as<DihedralIsometry>()));
    CHECK(words == std::set<std::string>{"1", "x", "y", "xy", "yx"});
    for (unsigned r = 1; r <= 8; ++r) {
      const auto b = ball(gens, r);
      CHECK(b.size() == 2 * r + 1);
      CHECK(b.size() == oracle::dihedral_words(r).size());
    }
    const auto z = parse_group("Z^1");
    const auto bz = ball(GeneratingSequence(z, parse_element_list(z, "(1)")), 3);
    std::set<long> vals;
    for (const auto& e : bz) vals.insert(e.as<IntVector>().coords[0]);
    CHECK(vals == std::set<long>{-3, -2, -1, 0, 1, 2, 3});
    for (const auto& g : all_builtins()) CHECK(ball(GeneratingSequence::standard(g), 0).size() == 1);
  }

  TEST_CASE("ball layers nest") {
    for (const auto& g : all_builtins()) {
      const auto gens = GeneratingSequence::standard(g);
      const auto b2 = ball(gens, 2), b3 = ball(gens, 3);
      REQUIRE(b2.size() <= b3.size());
      for (std::size_t i = 0; i < b2.size(); ++i) CHECK(b2[i] == b3[i]);
    }
  }

  TEST_CASE("group axioms on radius-3 balls") {
    for (const auto& g : all_builtins()) {
      auto b = ball(GeneratingSequence::standard(g), g.kind() == GroupKind::Product ? 2 : 3);
      if (b.size() > 40) b.resize(40);
      for (const auto& a : b) {
        CHECK(g.multiply(a, g.identity()) == a);
        CHECK(g.multiply(g.identity(), a) == a);
        CHECK(g.is_identity(g.multiply(a, g.invert(a))));
        CHECK(g.is_identity(g.multiply(g.invert(a), a)));
        for (const auto& c : b)
          for (std::size_t k = 0; k < b.size(); k += 3)
            CHECK(g.multiply(g.multiply(a, c), b[k]) == g.multiply(a, g.multiply(c, b[k])));
      }
    }
  }

  TEST_CASE("Tr(n) relations") {
    for (std::size_t n : {3u, 4u, 5u}) {
      const auto t = GroupDescriptor::unitriangular(n);
      for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
          for (std::size_t k = 1; k <= n; ++k)
            for (std::size_t s = k + 1; s <= n; ++s) {
              if (i != s && j != k)
                CHECK(t.multiply(g_ij(n, i, j), g_ij(n, k, s)) == t.multiply(g_ij(n, k, s), g_ij(n, i, j)));
              if (j == k) {
                // g_{k,t} g_{i,k} = g_{i,k} g_{i,t}^{-1} g_{k,t}
                const auto lhs = t.multiply(g_ij(n, k, s), g_ij(n, i, k));
                const auto rhs = t.multiply(t.multiply(g_ij(n, i, k), t.invert(g_ij(n, i, s))), g_ij(n, k, s));
                CHECK(lhs == rhs);
              }
            }
    }
  }

  TEST_CASE("orders agree with repeated multiplication in finite groups") {
    for (auto spec : {"C(6)", "C(2) x C(4)",
                      "F[table: 1 2 3 4 5 6; 2 1 5 6 3 4; 3 4 1 2 6 5; 4 3 6 5 1 2; 5 6 2 1 4 3; 6 5 4 3 2 1]"}) {
      const auto g = parse_group(spec);
      for (const auto& a : ball(GeneratingSequence::standard(g), 10)) {
        std::uint64_t k = 1;
        auto p = a;
        while (!g.is_identity(p)) {
          p = g.multiply(p, a);
          ++k;
        }
        CHECK(g.order(a) == ElementOrder{k});
      }
    }
  }

  TEST_CASE("text round trips") {
    for (const auto& g : all_builtins())
      for (const auto& a : ball(GeneratingSequence::standard(g), 2)) CHECK(g.parse_element(g.format(a)) == a);
    const auto g = parse_group("Z^2 x C(2)");
    CHECK(g.to_string() == "Z^2 x F[table: 1 2; 2 1]");
    CHECK(parse_group(g.to_string()) == g);
  }

  TEST_CASE("generation verification") {
    const auto z2 = parse_group("Z^2");
    CHECK(GeneratingSequence(z2, parse_element_list(z2, "(1,0) (1,1)")).status() == GenerationStatus::VerifiedStructural);
    CHECK(GeneratingSequence(z2, parse_element_list(z2, "(2,0) (0,1)")).status() == GenerationStatus::Unverified);
    const auto d = GroupDescriptor::dihedral();
    CHECK(GeneratingSequence(d, parse_element_list(d, "x y")).status() == GenerationStatus::VerifiedStructural);
    CHECK(GeneratingSequence(d, parse_element_list(d, "x xyxy")).status() == GenerationStatus::Unverified);
    CHECK(GeneratingSequence::standard(GroupDescriptor::unitriangular(4)).status() ==
          GenerationStatus::VerifiedStructural);
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(parse_group("Q^2"), ParseError);
    CHECK_THROWS_AS(parse_group("UT(1)"), ParseError);
    CHECK_THROWS_AS(parse_group("F[table: 1 2; 1 2]"), ParseError);
    const auto z = parse_group("Z^2");
    CHECK_THROWS_AS((void)z.parse_element("(1,2,3)"), ParseError);
    CHECK_THROWS_AS((void)z.multiply(z.identity(), GroupDescriptor::dihedral().identity()), DomainError);
    try {
      parse_group("Z^2 x Q");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 6);
    }
  }
}
