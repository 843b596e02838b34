#include <doctest.h>

#include <set>

#include "confset/config.hpp"
#include "confset/error.hpp"
#include "oracles.hpp"

using namespace confset;

namespace {

std::set<Configuration> as_set(const ConfigurationSet& s) {
  const auto t = s.tuples();
  return {t.begin(), t.end()};
}

const std::set<Configuration> kDihedralSet = {{1, 2, 3}, {2, 1, 5}, {3, 4, 1}, {4, 5, 5},
                                              {4, 3, 5}, {5, 4, 2}, {5, 4, 4}};

GeneratingSequence z1_gens() {
  const auto z = parse_group("Z^1");
  return GeneratingSequence(z, parse_element_list(z, "(1)"));
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("dihedral example") {
    const auto d = GroupDescriptor::dihedral();
    const auto gens = GeneratingSequence::standard(d);
    const auto p = Partition::dihedral_five(d);
    const auto s = compute_config_set(gens, p, 3);
    CHECK(as_set(s) == kDihedralSet);
    CHECK(s.complete());
    CHECK(s.generator_count() == 2);
    CHECK(s.cell_count() == 5);
    // witnesses reproduce their tuples
    for (const auto& [c, e] : s.entries()) {
      REQUIRE(e.witness.has_value());
      Configuration back{p.classify(*e.witness)};
      for (const auto& g : gens.elements()) back.push_back(p.classify(d.multiply(g, *e.witness)));
      CHECK(back == c);
    }
    // tuples are sorted
    const auto t = s.tuples();
    CHECK(std::is_sorted(t.begin(), t.end()));
  }

  TEST_CASE("dihedral oracle from reduced words") {
    // c0 from the word, c_i from the reduced word of (letter_i)(word)
    auto cls = [](const std::string& w) -> CellIndex {
      if (w.empty()) return 1;
      if (w == "x") return 2;
      if (w == "y") return 3;
      return w[0] == 'x' ? 4 : 5;
    };
    for (unsigned r = 1; r <= 6; ++r) {
      std::set<Configuration> expect;
      for (const auto& w : oracle::dihedral_words(r))
        expect.insert({cls(w), cls(oracle::reduce_xy("x" + w)), cls(oracle::reduce_xy("y" + w))});
      const auto d = GroupDescriptor::dihedral();
      CHECK(as_set(compute_config_set(GeneratingSequence::standard(d), Partition::dihedral_five(d), r)) == expect);
    }
  }

  TEST_CASE("sign partition of Z") {
    const auto gens = z1_gens();
    const auto p = Partition::sign(gens.group());
    const auto s = compute_config_set(gens, p, 3);
    // brute force over x in -3..3
    std::set<Configuration> expect;
    auto cls = [](long v) -> CellIndex { return v < 0 ? 1 : v == 0 ? 2 : 3; };
    for (long x = -3; x <= 3; ++x) expect.insert({cls(x), cls(x + 1)});
    CHECK(as_set(s) == expect);
    CHECK(expect == std::set<Configuration>{{1, 1}, {1, 2}, {2, 3}, {3, 3}});
    const auto scan = stability_scan(gens, p, 0, 5);
    CHECK(scan.stable_from == 2);
    CHECK(scan.rows.size() == 6);
  }

  TEST_CASE("one-cell partitions") {
    for (auto spec : {"Z^2", "Dinf", "UT(3)", "Z^1 x C(3)"}) {
      const auto g = parse_group(spec);
      const auto gens = GeneratingSequence::standard(g);
      for (unsigned r : {0u, 2u}) {
        const auto s = compute_config_set(gens, Partition::trivial(g), r);
        REQUIRE(s.size() == 1);
        CHECK(s.tuples()[0] == Configuration(gens.size() + 1, 1));
        CHECK(s.complete());
      }
      CHECK(stability_scan(gens, Partition::trivial(g), 0, 3).stable_from == 0);
    }
  }

  TEST_CASE("scan and diff") {
    const auto d = GroupDescriptor::dihedral();
    const auto gens = GeneratingSequence::standard(d);
    const auto p = Partition::dihedral_five(d);
    const auto scan = stability_scan(gens, p, 1, 6);
    CHECK(scan.stable_from == 3);
    for (std::size_t i = 1; i < scan.rows.size(); ++i) CHECK(scan.rows[i - 1].size <= scan.rows[i].size);
    const auto diff = compare_sets(compute_config_set(gens, p, 2), compute_config_set(gens, p, 3));
    CHECK_FALSE(diff.equal);
    CHECK(diff.only_in_a.empty());
    // (5,4,4) is realised first by yxy, also of length 3
    CHECK(diff.only_in_b == std::vector<Configuration>{{4, 5, 5}, {5, 4, 4}});
    CHECK(compare_sets(scan.final_set, compute_config_set(gens, p, 3)).equal);
    CHECK_THROWS_AS(compare_sets(compute_config_set(gens, p, 2), compute_config_set(z1_gens(), Partition::trivial(parse_group("Z^1")), 2)),
                    DomainError);
  }

  TEST_CASE("monotone in the radius") {
    const auto g = parse_group("Z^2 x C(2)");
    const auto gens = GeneratingSequence::standard(g);
    const auto p = Partition::orthant(g);
    auto prev = compute_config_set(gens, p, 0);
    for (unsigned r = 1; r <= 6; ++r) {
      const auto cur = compute_config_set(gens, p, r);
      for (const auto& c : prev.tuples()) CHECK(cur.contains(c));
      prev = cur;
    }
    CHECK(prev.complete());
    CHECK(check_orthant_properties(prev, p).ok());
  }

  TEST_CASE("completeness bound") {
    const auto g = parse_group("Z^2 x C(2)");
    const auto gens = GeneratingSequence::standard(g);
    const auto p = Partition::orthant(g);
    const auto bound = structural_completeness_radius(gens, p);
    REQUIRE(bound.has_value());
    CHECK(*bound == 5);
    CHECK(compare_sets(compute_config_set(gens, p, *bound), compute_config_set(gens, p, 9)).equal);
    CHECK_FALSE(compute_config_set(gens, p, *bound - 1).complete());
    const auto z3 = parse_group("Z^3");
    const auto s3 = GeneratingSequence::standard(z3);
    CHECK(compare_sets(compute_config_set(s3, Partition::orthant(z3), 6), compute_config_set(s3, Partition::orthant(z3), 8)).equal);
    const auto odd = GeneratingSequence(z3, parse_element_list(z3, "(1,1,0) (0,1,0) (0,0,1)"));
    CHECK_FALSE(structural_completeness_radius(odd, Partition::orthant(z3)).has_value());
  }

  TEST_CASE("refinement projects back") {
    const auto d = GroupDescriptor::dihedral();
    const auto gens = GeneratingSequence::standard(d);
    const auto coarse = Partition::parse(d, "all := true\n");
    const auto r = refine(coarse, 1, CellPredicate::element(d.identity()));
    CHECK(compare_sets(project_config_set(compute_config_set(gens, r.partition, 4), r.projection),
                       compute_config_set(gens, coarse, 4))
              .equal);
    const auto z2 = parse_group("Z^2");
    const auto zg = GeneratingSequence::standard(z2);
    const auto o = Partition::orthant(z2);
    const auto ro = refine(o, o.orthant_layout()->index({1, 0}, 1), CellPredicate::element(z2.parse_element("(1,0)")));
    const auto fine = compute_config_set(zg, ro.partition, 5);
    const auto proj = project_config_set(fine, ro.projection);
    const auto direct = compute_config_set(zg, o, 5);
    CHECK(compare_sets(proj, direct).equal);
    for (const auto& [c, e] : proj.entries()) CHECK(e.witness == direct.witness(c));
    CHECK(compare_sets(project_config_set(direct, [] {
                         std::vector<CellIndex> id(9);
                         for (CellIndex i = 0; i < 9; ++i) id[i] = i + 1;
                         return id;
                       }()),
                       direct)
              .equal);
    CHECK_THROWS_AS(project_config_set(fine, {1, 2}), DomainError);
  }

  TEST_CASE("transport") {
    const auto z2 = parse_group("Z^2");
    const auto gens = GeneratingSequence::standard(z2);
    const auto p = Partition::orthant(z2);
    for (auto text : {"id", "coord[[1,1],[0,1]]", "coord[[0,1],[1,0]] | coord[[2,1],[1,1]]"}) {
      const auto iso = Isomorphism::parse(text);
      const auto moved = transport(iso, gens, p);
      CHECK(compare_sets(compute_config_set(gens, p, 4), compute_config_set(moved.gens, moved.partition, 4)).equal);
    }
    // Z x C(3): relabelling the two generators of C(3) is a table automorphism
    const auto g = parse_group("Z^1 x C(3)");
    const auto gg = GeneratingSequence::standard(g);
    const auto og = Partition::orthant(g);
    const auto moved = transport(Isomorphism::parse("relabel(1,3,2)"), gg, og);
    CHECK(compare_sets(compute_config_set(gg, og, 4), compute_config_set(moved.gens, moved.partition, 4)).equal);
    CHECK_THROWS_AS(transport(Isomorphism::parse("coord[[2,0],[0,1]]"), gens, p), DomainError);
    CHECK_THROWS_AS(transport(Isomorphism::parse("relabel(2,1,3)"), gg, og), DomainError);
  }

  TEST_CASE("cell permutation equivariance") {
    const auto g = parse_group("Z^1 x C(2)");
    const auto gens = GeneratingSequence::standard(g);
    const auto p = Partition::orthant(g);
    const std::vector<CellIndex> order{6, 1, 5, 2, 4, 3};
    const auto q = p.permuted(order);
    std::vector<CellIndex> inverse(7);
    for (CellIndex k = 1; k <= 6; ++k) inverse[order[k - 1]] = k;
    std::set<Configuration> relabeled;
    for (auto c : compute_config_set(gens, p, 4).tuples()) {
      for (auto& v : c) v = inverse[v];
      relabeled.insert(c);
    }
    CHECK(as_set(compute_config_set(gens, q, 4)) == relabeled);
  }

  TEST_CASE("worker counts do not change results") {
    const auto g = parse_group("Z^2 x C(2)");
    const auto gens = GeneratingSequence::standard(g);
    const auto p = Partition::orthant(g);
    const auto one = compute_config_set(gens, p, 6, {1});
    for (unsigned w : {2u, 3u, 8u}) {
      const auto many = compute_config_set(gens, p, 6, {w});
      CHECK(many.to_string(g) == one.to_string(g));
    }
  }

  TEST_CASE("text form") {
    const auto d = GroupDescriptor::dihedral();
    const auto s = compute_config_set(GeneratingSequence::standard(d), Partition::dihedral_five(d), 3);
    const auto text = s.to_string();
    CHECK(text.rfind("# radius=3 streak=0 generators=2 cells=5 complete=yes\n1,2,3\n", 0) == 0);
    const auto back = ConfigurationSet::parse(text);
    CHECK(back.same_tuples(s));
    CHECK(back.radius() == 3);
    CHECK(ConfigurationSet::parse(s.to_string(d)).same_tuples(s));
    CHECK_THROWS_AS(ConfigurationSet::parse("1,2\n1,2,3\n"), ParseError);
    CHECK_THROWS_AS(ConfigurationSet::parse("1,a\n"), ParseError);
    CHECK(format_configuration({1, 2, 3}) == "1,2,3");
  }

  TEST_CASE("DOT export") {
    const auto dot = export_tree({1, 2, 3}, 2);
    CHECK(dot == export_tree({1, 2, 3}, 2));
    CHECK(dot.find("c0 [label=\"1\"]") != std::string::npos);
    CHECK(dot.find("c1 [label=\"2\"]") != std::string::npos);
    CHECK(dot.find("c2 [label=\"3\"]") != std::string::npos);
    CHECK(dot.find("c0 -> c1 [label=\"1\"]") != std::string::npos);
    CHECK(dot.find("c0 -> c2 [label=\"2\"]") != std::string::npos);
    const auto small = export_tree({1, 1}, 1);
    CHECK(small.find("c2") == std::string::npos);
    CHECK_THROWS_AS(export_tree({1, 2}, 2), DomainError);
  }
}
