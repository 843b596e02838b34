#include <doctest.h>

#include <random>

#include "confset/error.hpp"
#include "confset/partition.hpp"
#include "oracles.hpp"

using namespace confset;

TEST_SUITE("partition") {
  TEST_CASE("orthant classification and layout") {
    const auto g = parse_group("Z^3 x C(2)");
    const auto p = Partition::orthant(g);
    REQUIRE(p.orthant_layout().has_value());
    const auto& lay = *p.orthant_layout();
    CHECK(p.size() == 54);
    CHECK(p.classify(g.parse_element("(2,-1,0; x2)")) == lay.index({1, -1, 0}, 2));
    CHECK(p.classify(g.identity()) == lay.index({0, 0, 0}, 1));
    // canonical order: sigma as a base-3 string with -1 < 0 < 1, then j
    CHECK(lay.index({-1, -1, -1}, 1) == 1);
    CHECK(lay.index({-1, -1, -1}, 2) == 2);
    CHECK(lay.index({-1, -1, 0}, 1) == 3);
    CHECK(lay.index({1, 1, 1}, 2) == 54);
    for (CellIndex k = 1; k <= 54; ++k) {
      const auto [sigma, j] = lay.cell(k);
      CHECK(lay.index(sigma, j) == k);
    }
    CHECK(Partition::orthant(parse_group("Z^1")).size() == 3);
    CHECK(Partition::orthant(parse_group("Z^2 x C(2)")).size() == 18);
    CHECK_THROWS_AS(Partition::orthant(GroupDescriptor::dihedral()), DomainError);
  }

  TEST_CASE("orthant classifier agrees with the predicates") {
    const auto g = parse_group("Z^2 x C(3)");
    const auto p = Partition::orthant(g);
    for (const auto& a : ball(GeneratingSequence::standard(g), 4)) {
      const auto hits = p.matching_cells(a);
      REQUIRE(hits.size() == 1);
      CHECK(hits.front() == p.classify(a));
      const auto [sigma, j] = p.orthant_layout()->cell(hits.front());
      const auto v = free_coordinates(a);
      for (std::size_t i = 0; i < 2; ++i) CHECK(sigma[i] == (v[i] > 0) - (v[i] < 0));
      CHECK(j == *finite_component(a));
    }
    CHECK(validate(p, 4).ok);
    CHECK(validate(p, 4).method == ValidationMethod::Structural);
  }

  TEST_CASE("dihedral five-cell partition") {
    const auto d = GroupDescriptor::dihedral();
    const auto p = Partition::dihedral_five(d);
    CHECK(p.classify(d.identity()) == 1);
    CHECK(p.classify(d.parse_element("x")) == 2);
    CHECK(p.classify(d.parse_element("y")) == 3);
    CHECK(p.classify(d.parse_element("yxy")) == 5);
    CHECK(p.classify(d.parse_element("xy")) == 4);
    for (const auto& w : oracle::dihedral_words(7)) {
      CellIndex expect = 1;
      if (w == "x") expect = 2;
      else if (w == "y") expect = 3;
      else if (w.size() >= 2) expect = w[0] == 'x' ? 4 : 5;
      CHECK(p.classify(w.empty() ? d.identity() : d.parse_element(w)) == expect);
    }
    const auto v = validate(p, 4);
    CHECK(v.ok);
  }

  TEST_CASE("validation finds ambiguity and gaps") {
    const auto z = parse_group("Z^1");
    const auto both = Partition::parse(z, "a := pos(1) or zero(1)\nb := not neg(1)\n");
    auto v = validate(both, 3);
    CHECK_FALSE(v.ok);
    CHECK(v.violation == ClassificationError::Kind::AmbiguousCell);
    CHECK(z.format(*v.witness) == "(0)");
    CHECK(v.method == ValidationMethod::BallOnly);

    const auto gap = Partition::parse(z, "p := pos(1)\nn := neg(1)\n");
    v = validate(gap, 3);
    CHECK_FALSE(v.ok);
    CHECK(v.violation == ClassificationError::Kind::NoCell);
    CHECK(z.format(*v.witness) == "(0)");
    try {
      (void)gap.classify(z.identity());
      FAIL("expected a classification error");
    } catch (const ClassificationError& e) {
      CHECK(e.kind() == ClassificationError::Kind::NoCell);
      CHECK(e.witness() == "(0)");
      CHECK(std::string(e.what()).find("(0)") != std::string::npos);
    }
  }

  TEST_CASE("partition files") {
    const auto g = parse_group("Z^2 x C(2)");
    const auto p = Partition::parse(g,
                                    "# quadrant split\n"
                                    "origin := elem((0,0; x1))\n"
                                    "upper := pos(2) and fin(2)   # note\n"
                                    "rest := otherwise\n");
    CHECK(p.size() == 3);
    CHECK(p.otherwise_terminated());
    CHECK(p.classify(g.identity()) == 1);
    CHECK(p.classify(g.parse_element("(5,1; x2)")) == 2);
    CHECK(p.classify(g.parse_element("(5,1; x1)")) == 3);
    CHECK(validate(p, 5).ok);

    CHECK_THROWS_AS(Partition::parse(g, "a := otherwise\nb := pos(1)\n"), ParseError);
    CHECK_THROWS_AS(Partition::parse(g, "a := pos(1)\na := neg(1)\n"), ParseError);
    CHECK_THROWS_AS(Partition::parse(g, "a := pos(3)\n"), ParseError);
    CHECK_THROWS_AS(Partition::parse(g, "a := pos(1) and\n"), ParseError);
    CHECK_THROWS_AS(Partition::parse(g, "just text\n"), ParseError);
    try {
      Partition::parse(g, "a := pos(1) xor neg(1)\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.position() == 12);
    }
  }

  TEST_CASE("other atoms") {
    const auto t = GroupDescriptor::unitriangular(3);
    const auto e = parse_predicate(t, "entry(1,2)=0 and entry(2,3)=0");
    CHECK(e.holds(t, t.parse_element("g13^5")));
    CHECK_FALSE(e.holds(t, t.parse_element("g12")));
    CHECK(parse_predicate(t, "entry(1,3)>0").holds(t, t.parse_element("g13")));
    CHECK(parse_predicate(t, "entry(1,3)<0").holds(t, t.parse_element("g13^-2")));
    const auto d = GroupDescriptor::dihedral();
    CHECK(parse_predicate(d, "word(x,3)").holds(d, d.parse_element("xyx")));
    CHECK_FALSE(parse_predicate(d, "word(x,3)").holds(d, d.parse_element("xy")));
    const auto z2 = parse_group("Z^2");
    const auto m = parse_predicate(z2, "map(coord[[1,1],[0,1]]; pos(1))");
    // (1,-1) maps to (0,-1)
    CHECK_FALSE(m.holds(z2, z2.parse_element("(1,-1)")));
    CHECK(m.holds(z2, z2.parse_element("(1,0)")));
  }

  TEST_CASE("refinement into a singleton and its complement") {
    const auto g = parse_group("Z^2");
    const auto p = Partition::orthant(g);
    const auto cell = p.orthant_layout()->index({1, 0}, 1);
    const auto g1 = g.parse_element("(1,0)");
    const auto r = refine(p, cell, CellPredicate::element(g1));
    CHECK(r.partition.size() == p.size() + 1);
    CHECK(r.warnings.empty());
    const auto a = r.partition.classify(g1);
    const auto b = r.partition.classify(g.parse_element("(2,0)"));
    CHECK(a != b);
    CHECK(r.projection[a - 1] == cell);
    CHECK(r.projection[b - 1] == cell);
    CHECK(r.partition.cells()[a - 1].name == p.cells()[cell - 1].name + ":A");

    std::mt19937_64 rng(11);
    const auto pts = ball(GeneratingSequence::standard(g), 6);
    for (int i = 0; i < 200; ++i) {
      const auto& x = pts[rng() % pts.size()];
      CHECK(r.projection[r.partition.classify(x) - 1] == p.classify(x));
    }

    const auto z = parse_group("Z^1");
    const auto t = refine(Partition::trivial(z), 1, CellPredicate::element(z.identity()));
    CHECK(t.partition.size() == 2);
    CHECK(t.partition.classify(z.identity()) == 1);
    CHECK(t.partition.classify(z.parse_element("(4)")) == 2);

    const auto empty = refine(Partition::trivial(z), 1, CellPredicate::element(z.parse_element("(100)")), 3);
    REQUIRE(empty.warnings.size() == 1);
    CHECK(empty.warnings[0].rfind("EmptyPiece", 0) == 0);
  }

  TEST_CASE("pullback and permutation") {
    const auto g = parse_group("Z^2");
    const auto p = Partition::orthant(g);
    const auto iso = Isomorphism::parse("coord[[1,1],[0,1]]");
    const auto q = p.pullback(iso);
    CHECK(q.family() == PartitionFamily::User);
    for (const auto& a : ball(GeneratingSequence::standard(g), 3))
      CHECK(q.classify(iso.apply(g, a)) == p.classify(a));
    const auto perm = p.permuted({9, 8, 7, 6, 5, 4, 3, 2, 1});
    for (const auto& a : ball(GeneratingSequence::standard(g), 3)) CHECK(perm.classify(a) == 10 - p.classify(a));
  }
}
