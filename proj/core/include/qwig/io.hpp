#pragma once

#include <string>
#include <vector>

#include "qwig/geometry.hpp"
#include "qwig/grid.hpp"
#include "qwig/operators.hpp"

namespace qwig {

// An operator tuple plus state as read from a matrix-tuple JSON document:
//   {"n": ..., "d": ..., "operators": [d x d arrays of [re, im] pairs],
//    "state": d x d array of [re, im] pairs}   (state optional: I/d).
struct TupleDocument {
  OperatorTuple tuple;
  DensityMatrix state;
};

TupleDocument parse_tuple_json(const std::string& text,
                               const Tolerances& tol = {});
TupleDocument load_tuple_json(const std::string& path,
                              const Tolerances& tol = {});
std::string dump_tuple_json(const OperatorTuple& tuple,
                            const DensityMatrix& state);
void save_tuple_json(const std::string& path, const OperatorTuple& tuple,
                     const DensityMatrix& state);

// Grid CSV: one header row (n, lo, hi, N, epsilon) followed by the values in
// row-major order, one per line, printed with enough digits to round-trip
// doubles bit-exactly.
std::string grid_to_csv(const WignerGrid& grid);
WignerGrid parse_grid_csv(const std::string& text);
void save_grid_csv(const std::string& path, const WignerGrid& grid);
WignerGrid load_grid_csv(const std::string& path);

// 8-bit grayscale P5 image of a 2-D slice, min -> 0 and max -> 255, with the
// affine scaling and slice position recorded in `path`.meta. For 2-D grids
// pass slice_axis = -1; for higher n fix one axis at slice_index (the
// remaining two axes in ascending order become image x and y; y points up).
void save_grid_pgm(const std::string& path, const WignerGrid& grid,
                   int slice_axis = -1, int slice_index = -1);

// Singular-set point cloud CSV: u components, branch, a components, gap.
std::string singular_to_csv(const std::vector<SingularSample>& samples);
void save_singular_csv(const std::string& path,
                       const std::vector<SingularSample>& samples);

// TSV check report: one row per check (name, value, threshold, pass/fail)
// and a final machine-parsable PASS or FAIL line covering all rows.
class CheckReport {
 public:
  void add(const std::string& name, double value, double threshold,
           bool passed);
  // Convenience: pass iff |value| <= threshold.
  void add_bound(const std::string& name, double value, double threshold);

  bool all_passed() const;
  std::size_t size() const { return rows_.size(); }
  std::string to_tsv() const;
  void save(const std::string& path) const;

 private:
  struct Row {
    std::string name;
    double value;
    double threshold;
    bool passed;
  };
  std::vector<Row> rows_;
};

}  // namespace qwig
