#pragma once

#include <filesystem>
#include <iosfwd>

#include "gtrs/sparse.hpp"

namespace gtrs {

/// Reads a square `coordinate real|integer symmetric|general` Matrix Market
/// file (1-based). General files must be numerically symmetric.
SparseSymmetric read_matrix_market(const std::filesystem::path& path);
SparseSymmetric read_matrix_market(std::istream& in, const std::string& name = "<stream>");

/// Writes `coordinate real symmetric`, lower triangle, 17 significant digits.
void write_matrix_market(const std::filesystem::path& path, const SparseSymmetric& a);
void write_matrix_market(std::ostream& out, const SparseSymmetric& a);

}  // namespace gtrs
