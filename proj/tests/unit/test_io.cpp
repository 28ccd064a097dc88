#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qwig/examples.hpp"
#include "qwig/geometry.hpp"
#include "qwig/grid.hpp"
#include "qwig/io.hpp"
#include "qwig/operators.hpp"

using namespace qwig;

namespace {

// Unique scratch path under the build-tree working directory.
std::string scratch(const std::string& name) {
  return "io_scratch_" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("tuple documents round-trip bit-exactly") {
  Rng rng(601);
  const auto a = OperatorTuple::validate(
      {random_hermitian(3, rng), random_hermitian(3, rng)});
  Matrix raw = random_psd(3, rng);
  raw /= raw.trace().real();
  const auto rho = DensityMatrix::validate(raw);

  const std::string text = dump_tuple_json(a, rho);
  const auto doc = parse_tuple_json(text);
  REQUIRE(doc.tuple.n() == 2);
  REQUIRE(doc.tuple.d() == 3);
  for (int k = 0; k < 2; ++k) {
    CHECK((doc.tuple.op(k) - a.op(k)).cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK((doc.state.matrix() - rho.matrix()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("a missing state defaults to maximally mixed") {
  const std::string text = R"({
    "n": 1, "d": 2,
    "operators": [[[[0,0],[1,0]],[[1,0],[0,0]]]]
  })";
  const auto doc = parse_tuple_json(text);
  CHECK((doc.state.matrix() - 0.5 * Matrix::Identity(2, 2))
            .cwiseAbs()
            .maxCoeff() == 0.0);
}

TEST_CASE("malformed tuple documents are rejected") {
  CHECK_THROWS_AS((void)parse_tuple_json("not json at all"), IoError);
  CHECK_THROWS_AS((void)parse_tuple_json("{}"), IoError);
  // n disagrees with the operator count.
  CHECK_THROWS_AS((void)parse_tuple_json(R"({
    "n": 2, "d": 2,
    "operators": [[[[0,0],[1,0]],[[1,0],[0,0]]]]
  })"),
                  IoError);
  // Entry is not an [re, im] pair.
  CHECK_THROWS_AS((void)parse_tuple_json(R"({
    "n": 1, "d": 2,
    "operators": [[[0.0, [1,0]],[[1,0],[0,0]]]]
  })"),
                  IoError);
  // Wrong row count.
  CHECK_THROWS_AS((void)parse_tuple_json(R"({
    "n": 1, "d": 2,
    "operators": [[[[0,0],[1,0]]]]
  })"),
                  IoError);
}

TEST_CASE("tuple files save and load; missing files throw") {
  const auto ex = make_example("heart");
  const std::string path = scratch("tuple.json");
  save_tuple_json(path, ex.tuple, ex.state);
  const auto doc = load_tuple_json(path);
  CHECK((doc.tuple.op(0) - ex.tuple.op(0)).cwiseAbs().maxCoeff() == 0.0);
  std::remove(path.c_str());
  CHECK_THROWS_AS((void)load_tuple_json(path), IoError);
}

TEST_CASE("grid CSV round-trips spec and values bit-exactly") {
  const auto ex = make_example("pauli2");
  GridSpec spec;
  spec.lo = RealVector::Constant(2, -2.0);
  spec.hi = RealVector::Constant(2, 2.0);
  spec.samples = {16, 16};
  spec.epsilon = 0.0625;
  const auto grid = compute_wigner_grid(ex.tuple, ex.state, spec);

  const auto parsed = parse_grid_csv(grid_to_csv(grid));
  REQUIRE(parsed.values.size() == grid.values.size());
  CHECK(parsed.spec.epsilon == spec.epsilon);
  CHECK(parsed.spec.lo(0) == spec.lo(0));
  CHECK(parsed.spec.hi(1) == spec.hi(1));
  REQUIRE(parsed.spec.samples == spec.samples);
  for (std::size_t i = 0; i < grid.values.size(); ++i) {
    CHECK(parsed.values[i] == grid.values[i]);
  }

  // Truncated payloads are rejected.
  std::string text = grid_to_csv(grid);
  text.resize(text.size() / 2);
  CHECK_THROWS_AS((void)parse_grid_csv(text), IoError);
}

TEST_CASE("PGM export writes a P5 payload with sidecar metadata") {
  const auto ex = make_example("pauli2");
  GridSpec spec;
  spec.lo = RealVector::Constant(2, -2.0);
  spec.hi = RealVector::Constant(2, 2.0);
  spec.samples = {32, 16};
  spec.epsilon = 0.05;
  const auto grid = compute_wigner_grid(ex.tuple, ex.state, spec);

  const std::string path = scratch("grid.pgm");
  save_grid_pgm(path, grid);
  const std::string data = slurp(path);
  CHECK(data.substr(0, 2) == "P5");
  CHECK(data.find("32 16") != std::string::npos);
  // Payload: width * height bytes after the maxval line.
  const auto header_end = data.find("255\n");
  REQUIRE(header_end != std::string::npos);
  CHECK(data.size() - (header_end + 4) == 32u * 16u);

  const std::string meta = slurp(path + ".meta");
  CHECK(meta.find("min") != std::string::npos);
  CHECK(meta.find("max") != std::string::npos);
  std::remove(path.c_str());
  std::remove((path + ".meta").c_str());

  // A 3-D grid needs a slice; a 2-D grid must not get one.
  CHECK_THROWS_AS(save_grid_pgm(scratch("bad.pgm"), grid, 0, 3), Error);
}

TEST_CASE("singular CSV has one row per sample plus a header") {
  const auto ex = make_example("heart");
  const auto samples = singular_set(ex.tuple, 40);
  const std::string text = singular_to_csv(samples);
  const auto lines = std::count(text.begin(), text.end(), '\n');
  CHECK(static_cast<std::size_t>(lines) == samples.size() + 1);
  CHECK(text.find("branch") != std::string::npos);
}

TEST_CASE("check reports aggregate rows into a final verdict") {
  CheckReport report;
  report.add("alpha", 0.5, 1.0, true);
  report.add_bound("beta", -0.25, 0.3);
  CHECK(report.all_passed());
  CHECK(report.size() == 2);
  std::string tsv = report.to_tsv();
  CHECK(tsv.find("alpha") != std::string::npos);
  CHECK(tsv.find("pass") != std::string::npos);
  CHECK(tsv.rfind("PASS") != std::string::npos);
  CHECK(tsv.rfind("FAIL") == std::string::npos);

  report.add_bound("gamma", 2.0, 0.5);
  CHECK(!report.all_passed());
  tsv = report.to_tsv();
  CHECK(tsv.find("fail") != std::string::npos);
  const auto last_newline = tsv.find_last_not_of('\n');
  (void)last_newline;
  CHECK(tsv.rfind("FAIL") != std::string::npos);

  const std::string path = scratch("report.tsv");
  report.save(path);
  CHECK(slurp(path) == tsv);
  std::remove(path.c_str());
}

TEST_CASE("bound checks include the boundary") {
  CheckReport report;
  report.add_bound("edge", 0.5, 0.5);
  CHECK(report.all_passed());
}

TEST_SUITE_END();
