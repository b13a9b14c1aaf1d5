#include "gtrs/mmio.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>

#include "gtrs/error.hpp"

namespace gtrs {

namespace {

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

[[noreturn]] void bad(const std::string& name, std::size_t line, const std::string& what) {
  fail(ErrorKind::InvalidInput, name + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

SparseSymmetric read_matrix_market(std::istream& in, const std::string& name) {
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) bad(name, 0, "empty file");
  ++lineno;
  std::istringstream banner(line);
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%MatrixMarket") bad(name, lineno, "missing %%MatrixMarket banner");
  object = lower(object);
  format = lower(format);
  field = lower(field);
  symmetry = lower(symmetry);
  if (object != "matrix" || format != "coordinate") bad(name, lineno, "only coordinate matrices are supported");
  if (field != "real" && field != "integer" && field != "double") bad(name, lineno, "unsupported field '" + field + "'");
  const bool general = symmetry == "general";
  if (!general && symmetry != "symmetric") bad(name, lineno, "unsupported symmetry '" + symmetry + "'");

  long long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream size(line);
    if (!(size >> rows >> cols >> nnz)) bad(name, lineno, "malformed size line");
    break;
  }
  if (rows < 0) bad(name, lineno, "missing size line");
  if (rows != cols) bad(name, lineno, "matrix is not square");
  if (nnz < 0) bad(name, lineno, "negative entry count");

  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(nnz));
  std::map<std::pair<int, int>, double> upper;  // general files: for the symmetry check
  long long read = 0;
  while (read < nnz && std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream es(line);
    long long i, j;
    double v;
    if (!(es >> i >> j >> v)) bad(name, lineno, "malformed entry");
    if (i < 1 || j < 1 || i > rows || j > rows) bad(name, lineno, "index out of range");
    if (!std::isfinite(v)) bad(name, lineno, "non-finite value");
    ++read;
    if (general) {
      if (i >= j) entries.push_back({static_cast<std::int32_t>(i - 1), static_cast<std::int32_t>(j - 1), v});
      if (i <= j) upper[{static_cast<int>(j - 1), static_cast<int>(i - 1)}] += v;
    } else {
      if (i < j) bad(name, lineno, "symmetric file stores an upper-triangle entry");
      entries.push_back({static_cast<std::int32_t>(i - 1), static_cast<std::int32_t>(j - 1), v});
    }
  }
  if (read != nnz) bad(name, lineno, "expected " + std::to_string(nnz) + " entries, found " + std::to_string(read));

  auto a = SparseSymmetric::from_triplets(static_cast<std::size_t>(rows), std::move(entries));
  if (general) {
    // Every mirrored upper entry must match the lower one.
    std::map<std::pair<int, int>, double> low;
    for (const auto& t : a.entries()) low[{t.row, t.col}] = t.value;
    for (auto& [k, v] : low) {
      if (k.first == k.second) continue;
      auto it = upper.find(k);
      const double u = it == upper.end() ? 0.0 : it->second;
      if (std::fabs(u - v) > 1e-12 * std::max(1.0, std::fabs(v))) bad(name, lineno, "general matrix is not symmetric");
    }
    for (auto& [k, v] : upper)
      if (k.first != k.second && !low.count(k) && v != 0.0) bad(name, lineno, "general matrix is not symmetric");
  }
  return a;
}

SparseSymmetric read_matrix_market(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path.string());
  return read_matrix_market(in, path.string());
}

void write_matrix_market(std::ostream& out, const SparseSymmetric& a) {
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.n() << ' ' << a.n() << ' ' << a.entries().size() << '\n';
  char buf[64];
  for (const auto& t : a.entries()) {
    std::snprintf(buf, sizeof buf, "%.17g", t.value);
    out << t.row + 1 << ' ' << t.col + 1 << ' ' << buf << '\n';
  }
}

void write_matrix_market(const std::filesystem::path& path, const SparseSymmetric& a) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path.string());
  write_matrix_market(out, a);
  if (!out) fail(ErrorKind::InvalidInput, "write failed for " + path.string());
}

}  // namespace gtrs
