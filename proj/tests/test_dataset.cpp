#include <cmath>

#include "doctest.h"
#include "dmt/dataset.hpp"
#include "dmt/error.hpp"
#include "support/synth.hpp"
#include "support/tmpdir.hpp"

using namespace dmt;

TEST_CASE("load infers continuous columns from all-numeric cells") {
  synth::TempDir tmp;
  const auto path = tmp.write("a.csv", "g1,g2,y\n1,2.5,a\n2,3.5,b\n3,4.5,a\n");
  const Dataset d = load_dataset(path, "y");
  REQUIRE(d.attribute_count() == 2);
  CHECK(d.attribute(0).name == "g1");
  CHECK(d.is_continuous(0));
  CHECK(d.is_continuous(1));
  CHECK(d.row_count() == 3);
  CHECK(d.classes() == std::vector<std::string>{"a", "b"});
  CHECK(d.value(1, 1) == 3.5);
  CHECK(d.name() == "a");
}

TEST_CASE("a single non-numeric token makes the whole column categorical") {
  synth::TempDir tmp;
  const auto path = tmp.write("b.csv", "g1,y\n1,p\na,q\n3,p\n");
  const Dataset d = load_dataset(path, "y");
  REQUIRE(d.attribute_count() == 1);
  CHECK(d.attribute(0).kind == AttrKind::Categorical);
  CHECK(d.attribute(0).categories == std::vector<std::string>{"1", "3", "a"});
  CHECK(d.token(1, 0) == "a");
}

TEST_CASE("missing marker and empty cells stay missing") {
  synth::TempDir tmp;
  const auto path = tmp.write("m.csv", "g1,g2,y\n?,u,a\n2,,b\n3,v,a\n");
  const Dataset d = load_dataset(path, "y");
  CHECK(d.is_missing(0, 0));
  CHECK(d.is_missing(1, 1));
  CHECK_FALSE(d.is_missing(2, 0));
}

TEST_CASE("CRLF line endings and a UTF-8 BOM are tolerated") {
  synth::TempDir tmp;
  const auto path =
      tmp.write("w.csv", "\xEF\xBB\xBFg1,y\r\n1,a\r\n2,b\r\n");
  const Dataset d = load_dataset(path, "y");
  CHECK(d.attribute(0).name == "g1");
  CHECK(d.row_count() == 2);
  CHECK(d.value(1, 0) == 2.0);
}

TEST_CASE("load errors carry enough context") {
  synth::TempDir tmp;
  SUBCASE("short row names the line number") {
    const auto path = tmp.write("bad.csv", "g1,g2,y\n1,2,a\n1,b\n");
    CHECK_THROWS_WITH_AS(load_dataset(path, "y"),
                         doctest::Contains("line 3"), Error);
  }
  SUBCASE("absent class column") {
    const auto path = tmp.write("bad.csv", "g1,g2,y\n1,2,a\n2,3,b\n");
    CHECK_THROWS_WITH_AS(load_dataset(path, "label"),
                         doctest::Contains("label"), Error);
  }
  SUBCASE("fewer than two rows") {
    const auto path = tmp.write("bad.csv", "g1,y\n1,a\n");
    CHECK_THROWS_AS(load_dataset(path, "y"), Error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_dataset(tmp.file("nope.csv"), "y"), Error);
  }
  SUBCASE("duplicate column name") {
    const auto path = tmp.write("bad.csv", "g1,g1,y\n1,2,a\n2,3,b\n");
    CHECK_THROWS_AS(load_dataset(path, "y"), Error);
  }
  SUBCASE("missing class label") {
    const auto path = tmp.write("bad.csv", "g1,y\n1,a\n2,?\n");
    CHECK_THROWS_WITH_AS(load_dataset(path, "y"),
                         doctest::Contains("line 3"), Error);
  }
  SUBCASE("single-class data is permitted at load") {
    const auto path = tmp.write("one.csv", "g1,y\n1,a\n2,a\n");
    CHECK(load_dataset(path, "y").class_count() == 1);
  }
}

TEST_CASE("align keeps exactly the shared attributes in lexicographic order") {
  const Dataset a = synth::continuous_dataset(
      {"g1", "g3", "g2"}, {{1, 2}, {3, 4}, {5, 6}}, {"x", "y"});
  const Dataset b = synth::continuous_dataset(
      {"g4", "g2", "g3"}, {{7, 8, 9}, {10, 11, 12}, {13, 14, 15}}, {"y", "x", "x"});

  const auto [pa, pb] = align_datasets(a, b);
  REQUIRE(pa.attribute_count() == 2);
  CHECK(pa.attribute(0).name == "g2");
  CHECK(pa.attribute(1).name == "g3");
  CHECK(pa.schema() == pb.schema());  // equal as ordered lists
  // rows and labels untouched
  CHECK(pa.row_count() == 2);
  CHECK(pb.row_count() == 3);
  CHECK(pa.value(0, 0) == 5);   // g2 of a
  CHECK(pb.value(0, 1) == 13);  // g3 of b
  CHECK(pa.labels() == a.labels());
}

TEST_CASE("align of identical schemas is the identity up to ordering") {
  const Dataset a = synth::continuous_dataset({"b", "a"}, {{1, 2}, {3, 4}}, {"x", "y"});
  const auto [pa, pb] = align_datasets(a, a);
  CHECK(pa.attribute(0).name == "a");
  CHECK(pa.attribute(1).name == "b");
  CHECK(pa.equals(pb));
}

TEST_CASE("align errors") {
  const Dataset a = synth::continuous_dataset({"g1"}, {{1, 2}}, {"x", "y"});
  SUBCASE("kind conflict") {
    synth::MixedBuilder mb;
    mb.categorical("g1", {"u", "v"});
    mb.with_labels({"x", "y"});
    CHECK_THROWS_WITH_AS(align_datasets(a, mb.build()), doctest::Contains("g1"), Error);
  }
  SUBCASE("empty intersection") {
    const Dataset b = synth::continuous_dataset({"h1"}, {{1, 2}}, {"x", "y"});
    CHECK_THROWS_AS(align_datasets(a, b), Error);
  }
  SUBCASE("class sets differ") {
    const Dataset b = synth::continuous_dataset({"g1"}, {{1, 2}}, {"x", "z"});
    CHECK_THROWS_AS(align_datasets(a, b), Error);
  }
}

TEST_CASE("znormalize fixed points") {
  SUBCASE("[1,2,3] -> [-1,0,1]") {
    const Dataset d = synth::continuous_dataset({"g"}, {{1, 2, 3}}, {"a", "b", "a"});
    const auto [z, stats] = znormalize(d);
    CHECK(z.value(0, 0) == doctest::Approx(-1.0));
    CHECK(z.value(1, 0) == doctest::Approx(0.0));
    CHECK(z.value(2, 0) == doctest::Approx(1.0));
    CHECK(stats.entries[0].mean == doctest::Approx(2.0));
    CHECK(stats.entries[0].stddev == doctest::Approx(1.0));
  }
  SUBCASE("constant column maps to zeros") {
    const Dataset d = synth::continuous_dataset({"g"}, {{5, 5, 5}}, {"a", "b", "a"});
    const auto [z, stats] = znormalize(d);
    for (std::size_t r = 0; r < 3; ++r) CHECK(z.value(r, 0) == 0.0);
  }
  SUBCASE("[2,4] -> +-1/sqrt(2)") {
    const Dataset d = synth::continuous_dataset({"g"}, {{2, 4}}, {"a", "b"});
    const auto [z, stats] = znormalize(d);
    CHECK(z.value(0, 0) == doctest::Approx(-0.7071067811865475).epsilon(1e-9));
    CHECK(z.value(1, 0) == doctest::Approx(0.7071067811865475).epsilon(1e-9));
  }
  SUBCASE("fewer than 2 rows is rejected") {
    const Dataset d = synth::continuous_dataset({"g"}, {{2.0}}, {"a"});
    CHECK_THROWS_AS(znormalize(d), Error);
  }
}

TEST_CASE("znormalize leaves missing cells and categoricals untouched") {
  synth::MixedBuilder b;
  b.continuous("x", {1.0, std::nan(""), 3.0, 5.0});
  b.categorical("c", {"u", "v", "u", "v"});
  b.with_labels({"a", "b", "a", "b"});
  const Dataset d = b.build();
  const auto [z, stats] = znormalize(d);
  CHECK(z.is_missing(1, 0));
  CHECK(z.token(0, 1) == "u");
  REQUIRE(stats.entries.size() == 1);  // one entry per continuous attribute
  CHECK(stats.entries[0].mean == doctest::Approx(3.0));
}

TEST_CASE("after znormalize every non-constant attribute has mean 0 and sd 1") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Pcg32 rng = make_stream(seed, 99);
    std::vector<std::vector<double>> cols;
    std::vector<std::string> names;
    for (int c = 0; c < 5; ++c) {
      std::vector<double> col;
      for (int r = 0; r < 40; ++r) col.push_back(10.0 * uniform_closed_open(rng) - 3.0);
      if (c == 2) col[7] = std::nan("");  // one missing cell
      cols.push_back(col);
      names.push_back("x" + std::to_string(c));
    }
    std::vector<std::string> labels(40, "a");
    labels[0] = "b";
    const Dataset d = synth::continuous_dataset(names, cols, labels);
    const auto [z, stats] = znormalize(d);

    for (std::size_t c = 0; c < z.attribute_count(); ++c) {
      double sum = 0.0;
      int n = 0;
      for (std::size_t r = 0; r < z.row_count(); ++r)
        if (!z.is_missing(r, c)) {
          sum += z.value(r, c);
          ++n;
        }
      const double mean = sum / n;
      double ss = 0.0;
      for (std::size_t r = 0; r < z.row_count(); ++r)
        if (!z.is_missing(r, c)) ss += (z.value(r, c) - mean) * (z.value(r, c) - mean);
      const double sd = std::sqrt(ss / (n - 1));
      CHECK(std::fabs(mean) < 1e-9);
      CHECK(std::fabs(sd - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("apply_normalization") {
  const Dataset d = synth::continuous_dataset({"g", "h"}, {{1, 2, 3}, {4, 6, 8}},
                                              {"a", "b", "a"});
  const auto [z, stats] = znormalize(d);

  SUBCASE("training stats applied to the training set reproduce znormalize") {
    CHECK(apply_normalization(d, stats).equals(z));
  }
  SUBCASE("a row of means maps to zeros") {
    const Dataset row = synth::continuous_dataset({"g", "h"}, {{2, 2}, {6, 6}},
                                                  {"a", "b"});
    const Dataset out = apply_normalization(row, stats);
    CHECK(out.value(0, 0) == 0.0);
    CHECK(out.value(0, 1) == 0.0);
  }
  SUBCASE("missing stats entry names the attribute") {
    const Dataset other = synth::continuous_dataset({"g7"}, {{1, 2}}, {"a", "b"});
    CHECK_THROWS_WITH_AS(apply_normalization(other, stats), doctest::Contains("g7"),
                         Error);
  }
}

TEST_CASE("load -> save -> load round-trips to an equal dataset") {
  synth::TempDir tmp;
  const auto path = tmp.write(
      "r.csv", "g1,g2,tag,y\n1.25,?,u,a\n-3.5e-2,2,v,b\n7,3,?,a\n0.1,4,u,b\n");
  const Dataset d1 = load_dataset(path, "y");
  save_dataset(d1, tmp.file("r2.csv"));
  const Dataset d2 = load_dataset(tmp.file("r2.csv"), "y");
  CHECK(d1.equals(d2));
}

TEST_CASE("normalization sidecar round-trips") {
  synth::TempDir tmp;
  const Dataset d = synth::continuous_dataset({"g", "h"}, {{1, 2, 4}, {0, 1, 5}},
                                              {"a", "b", "a"});
  const auto [z, stats] = znormalize(d);
  save_normalization(stats, tmp.file("n.norm"));
  const NormalizationStats loaded = load_normalization(tmp.file("n.norm"));
  REQUIRE(loaded.entries.size() == stats.entries.size());
  for (std::size_t i = 0; i < stats.entries.size(); ++i) {
    CHECK(loaded.entries[i].attribute == stats.entries[i].attribute);
    CHECK(loaded.entries[i].mean == stats.entries[i].mean);
    CHECK(loaded.entries[i].stddev == stats.entries[i].stddev);
  }
}
