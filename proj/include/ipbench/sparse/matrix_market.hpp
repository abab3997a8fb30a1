#ifndef IPBENCH_SPARSE_MATRIX_MARKET_HPP
#define IPBENCH_SPARSE_MATRIX_MARKET_HPP

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "ipbench/sparse/sym_csc.hpp"

namespace ipbench::sparse {

inline constexpr const char* kMatrixMarketHeader = "%%MatrixMarket matrix coordinate real symmetric";

// Reads "coordinate real symmetric" files. Entries given in the upper
// triangle are mirrored into the lower triangle; indices are 1-based.
inline SymCsc read_matrix_market(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidInput("matrix market: empty input");
  std::string lowered = line;
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  std::istringstream header(lowered);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%matrixmarket" || object != "matrix" || format != "coordinate") {
    throw InvalidInput("matrix market: expected a coordinate matrix header");
  }
  if (field != "real" && field != "integer") throw InvalidInput("matrix market: unsupported field " + field);
  if (symmetry != "symmetric") throw InvalidInput("matrix market: expected symmetric storage");

  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '%') break;
  }
  std::istringstream size_line(line);
  Index rows = 0, cols = 0, nnz = 0;
  if (!(size_line >> rows >> cols >> nnz) || rows != cols || rows < 0 || nnz < 0) {
    throw InvalidInput("matrix market: bad size line");
  }

  SymTriplet t;
  t.n = rows;
  t.entries.reserve(static_cast<std::size_t>(nnz));
  for (Index k = 0; k < nnz; ++k) {
    Index i = 0, j = 0;
    double v = 0.0;
    if (!(in >> i >> j >> v)) throw InvalidInput("matrix market: truncated entry list");
    --i;
    --j;
    if (i < j) std::swap(i, j);
    t.entries.push_back({i, j, v});
  }
  return from_triplets(t);
}

inline SymCsc read_matrix_market(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  return read_matrix_market(in);
}

inline void write_matrix_market(std::ostream& out, const SymCsc& a) {
  out << kMatrixMarketHeader << '\n';
  out << a.n << ' ' << a.n << ' ' << a.nnz() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index j = 0; j < a.n; ++j) {
    for (Index p = a.col_start[j]; p < a.col_start[j + 1]; ++p) {
      out << a.row_idx[p] + 1 << ' ' << j + 1 << ' ' << a.values[p] << '\n';
    }
  }
}

inline void write_matrix_market(const std::string& path, const SymCsc& a) {
  std::ofstream out(path);
  if (!out) throw InvalidInput("cannot write " + path);
  write_matrix_market(out, a);
}

}  // namespace ipbench::sparse

#endif  // IPBENCH_SPARSE_MATRIX_MARKET_HPP
