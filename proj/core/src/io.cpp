#include "qwig/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace qwig {

namespace {

using nlohmann::json;

// Shortest representation that parses back to the identical double.
std::string exact_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open '" + path + "' for reading");
  }
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << content;
  if (!out) {
    throw IoError("failed writing '" + path + "'");
  }
}

Matrix matrix_from_json(const json& rows, int d, const std::string& what) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != d) {
    throw IoError(what + ": expected " + std::to_string(d) + " rows");
  }
  Matrix m(d, d);
  for (int i = 0; i < d; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != d) {
      throw IoError(what + ": row " + std::to_string(i) + " must have " +
                    std::to_string(d) + " entries");
    }
    for (int j = 0; j < d; ++j) {
      const json& entry = row.at(j);
      if (!entry.is_array() || entry.size() != 2) {
        throw IoError(what + ": entry (" + std::to_string(i) + "," +
                      std::to_string(j) + ") must be an [re, im] pair");
      }
      m(i, j) = Complex(entry.at(0).get<double>(), entry.at(1).get<double>());
    }
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TupleDocument parse_tuple_json(const std::string& text,
                               const Tolerances& tol) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("bad JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("d") ||
      !doc.contains("operators")) {
    throw IoError("tuple document needs fields n, d, operators");
  }
  const int n = doc.at("n").get<int>();
  const int d = doc.at("d").get<int>();
  if (n < 1 || d < 1) {
    throw IoError("tuple document: n and d must be positive");
  }
  const json& ops = doc.at("operators");
  if (!ops.is_array() || static_cast<int>(ops.size()) != n) {
    throw IoError("tuple document: expected " + std::to_string(n) +
                  " operators");
  }
  std::vector<Matrix> matrices;
  matrices.reserve(n);
  for (int k = 0; k < n; ++k) {
    matrices.push_back(
        matrix_from_json(ops.at(k), d, "operator " + std::to_string(k)));
  }
  OperatorTuple tuple = OperatorTuple::validate(std::move(matrices), tol);
  DensityMatrix state =
      doc.contains("state")
          ? DensityMatrix::validate(
                matrix_from_json(doc.at("state"), d, "state"), tol)
          : DensityMatrix::maximally_mixed(d);
  return TupleDocument{std::move(tuple), std::move(state)};
}

TupleDocument load_tuple_json(const std::string& path,
                              const Tolerances& tol) {
  return parse_tuple_json(read_file(path), tol);
}

std::string dump_tuple_json(const OperatorTuple& tuple,
                            const DensityMatrix& state) {
  json doc;
  doc["n"] = tuple.n();
  doc["d"] = tuple.d();
  json ops = json::array();
  for (int k = 0; k < tuple.n(); ++k) {
    ops.push_back(matrix_to_json(tuple.op(k)));
  }
  doc["operators"] = std::move(ops);
  doc["state"] = matrix_to_json(state.matrix());
  return doc.dump(2) + "\n";
}

void save_tuple_json(const std::string& path, const OperatorTuple& tuple,
                     const DensityMatrix& state) {
  write_file(path, dump_tuple_json(tuple, state));
}

std::string grid_to_csv(const WignerGrid& grid) {
  const int n = grid.spec.n();
  std::ostringstream os;
  os << "n," << n;
  for (int k = 0; k < n; ++k) {
    os << ",lo" << k << "," << exact_double(grid.spec.lo(k));
  }
  for (int k = 0; k < n; ++k) {
    os << ",hi" << k << "," << exact_double(grid.spec.hi(k));
  }
  for (int k = 0; k < n; ++k) {
    os << ",N" << k << "," << grid.spec.samples[k];
  }
  os << ",epsilon," << exact_double(grid.spec.epsilon) << "\n";
  for (const double v : grid.values) {
    os << exact_double(v) << "\n";
  }
  return os.str();
}

WignerGrid parse_grid_csv(const std::string& text) {
  std::istringstream in(text);
  std::string header;
  if (!std::getline(in, header)) {
    throw IoError("grid CSV: empty input");
  }
  std::vector<std::string> fields;
  {
    std::istringstream hs(header);
    std::string field;
    while (std::getline(hs, field, ',')) {
      fields.push_back(field);
    }
  }
  auto need = [&fields](std::size_t i) -> const std::string& {
    if (i >= fields.size()) {
      throw IoError("grid CSV: truncated header");
    }
    return fields[i];
  };
  if (need(0) != "n") {
    throw IoError("grid CSV: header must start with n");
  }
  const int n = std::stoi(need(1));
  if (n < 1) {
    throw IoError("grid CSV: invalid dimension");
  }
  GridSpec spec;
  spec.lo.resize(n);
  spec.hi.resize(n);
  spec.samples.resize(n);
  std::size_t pos = 2;
  auto labeled_value = [&](const std::string& label) -> std::string {
    if (need(pos) != label) {
      throw IoError("grid CSV: expected header field '" + label + "', got '" +
                    need(pos) + "'");
    }
    const std::string& value = need(pos + 1);
    pos += 2;
    return value;
  };
  for (int k = 0; k < n; ++k) {
    spec.lo(k) = std::stod(labeled_value("lo" + std::to_string(k)));
  }
  for (int k = 0; k < n; ++k) {
    spec.hi(k) = std::stod(labeled_value("hi" + std::to_string(k)));
  }
  for (int k = 0; k < n; ++k) {
    spec.samples[k] = std::stoi(labeled_value("N" + std::to_string(k)));
  }
  spec.epsilon = std::stod(labeled_value("epsilon"));

  WignerGrid grid;
  grid.spec = spec;
  grid.values.reserve(spec.total_cells());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    grid.values.push_back(std::stod(line));
  }
  if (grid.values.size() != spec.total_cells()) {
    throw IoError("grid CSV: expected " + std::to_string(spec.total_cells()) +
                  " values, got " + std::to_string(grid.values.size()));
  }
  return grid;
}

void save_grid_csv(const std::string& path, const WignerGrid& grid) {
  write_file(path, grid_to_csv(grid));
}

WignerGrid load_grid_csv(const std::string& path) {
  return parse_grid_csv(read_file(path));
}

void save_grid_pgm(const std::string& path, const WignerGrid& grid,
                   int slice_axis, int slice_index) {
  const int n = grid.spec.n();
  std::vector<int> idx(n, 0);
  int ax = -1, ay = -1;
  if (n == 2) {
    if (slice_axis != -1) {
      throw IoError("grid PGM: a 2-D grid has no slice axis");
    }
    ax = 0;
    ay = 1;
  } else {
    if (slice_axis < 0 || slice_axis >= n) {
      throw IoError("grid PGM: slice axis required for n > 2");
    }
    if (slice_index < 0 || slice_index >= grid.spec.samples[slice_axis]) {
      throw IoError("grid PGM: slice index out of range");
    }
    idx[slice_axis] = slice_index;
    for (int k = 0; k < n; ++k) {
      if (k == slice_axis) {
        continue;
      }
      (ax < 0 ? ax : ay) = k;
    }
  }
  if (n < 2) {
    throw IoError("grid PGM: needs at least two axes");
  }

  const int width = grid.spec.samples[ax];
  const int height = grid.spec.samples[ay];
  double lo = grid.values.empty() ? 0.0 : grid.values.front();
  double hi = lo;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      idx[ax] = x;
      idx[ay] = y;
      const double v = grid.values[grid.index(idx)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi - lo;

  std::ostringstream os;
  os << "P5\n" << width << " " << height << "\n255\n";
  // Image y runs downward; flip so increasing grid coordinate points up.
  for (int y = height - 1; y >= 0; --y) {
    for (int x = 0; x < width; ++x) {
      idx[ax] = x;
      idx[ay] = y;
      const double v = grid.values[grid.index(idx)];
      const double t = span > 0.0 ? (v - lo) / span : 0.0;
      os << static_cast<char>(
          static_cast<unsigned char>(std::max(0.0, std::min(255.0,
                                                            t * 255.0))));
    }
  }
  write_file(path, os.str());

  std::ostringstream meta;
  meta << "format P5 grayscale\n"
       << "width " << width << "\nheight " << height << "\n"
       << "axis_x " << ax << "\naxis_y " << ay << "\n"
       << "row_order top-to-bottom decreasing axis_y coordinate\n"
       << "min " << exact_double(lo) << "\nmax " << exact_double(hi) << "\n"
       << "value_of_pixel min + (max - min) * pixel / 255\n";
  if (slice_axis >= 0) {
    const double coord = grid.spec.lo(slice_axis) +
                         (slice_index + 0.5) * grid.spec.delta(slice_axis);
    meta << "slice_axis " << slice_axis << "\nslice_index " << slice_index
         << "\nslice_coordinate " << exact_double(coord) << "\n";
  }
  write_file(path + ".meta", meta.str());
}

std::string singular_to_csv(const std::vector<SingularSample>& samples) {
  std::ostringstream os;
  if (samples.empty()) {
    return "";
  }
  const int n = static_cast<int>(samples.front().u.size());
  for (int k = 0; k < n; ++k) {
    os << "u" << k << ",";
  }
  os << "branch";
  for (int k = 0; k < n; ++k) {
    os << ",a" << k;
  }
  os << ",gap\n";
  for (const auto& s : samples) {
    for (int k = 0; k < n; ++k) {
      os << exact_double(s.u(k)) << ",";
    }
    os << s.branch;
    for (int k = 0; k < n; ++k) {
      os << "," << exact_double(s.a(k));
    }
    os << "," << exact_double(s.gap) << "\n";
  }
  return os.str();
}

void save_singular_csv(const std::string& path,
                       const std::vector<SingularSample>& samples) {
  write_file(path, singular_to_csv(samples));
}

void CheckReport::add(const std::string& name, double value, double threshold,
                      bool passed) {
  rows_.push_back(Row{name, value, threshold, passed});
}

void CheckReport::add_bound(const std::string& name, double value,
                            double threshold) {
  add(name, value, threshold, std::abs(value) <= threshold);
}

bool CheckReport::all_passed() const {
  for (const auto& row : rows_) {
    if (!row.passed) {
      return false;
    }
  }
  return true;
}

std::string CheckReport::to_tsv() const {
  std::ostringstream os;
  os << "check\tvalue\tthreshold\tresult\n";
  for (const auto& row : rows_) {
    os << row.name << "\t" << exact_double(row.value) << "\t"
       << exact_double(row.threshold) << "\t"
       << (row.passed ? "pass" : "fail") << "\n";
  }
  os << (all_passed() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

void CheckReport::save(const std::string& path) const {
  write_file(path, to_tsv());
}

}  // namespace qwig
