#pragma once

// Plain-text matrix files.
//
//   dims: 2 2          (bipartite, A outer)   or   dim: 4
//   0.5+0j 0+0j 0+0j 0.5+0j
//   ...
//
// One row per line, entries as `re+imj` / `re-imj` tokens (a bare real is also
// accepted). Blank lines and lines starting with '#' are ignored.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

#include "skewlqu/quantum.hpp"

namespace skewlqu {

using LoadedState = std::variant<DensityMatrix, BipartiteState>;

Complex parse_complex_token(const std::string& token);
std::string format_complex_token(Complex z);

struct MatrixFile {
  CMatrix matrix;
  std::optional<BipartiteDims> dims;  // present when the header is `dims:`
};

MatrixFile parse_matrix_file(std::istream& in, const std::string& source = "<stream>");
MatrixFile read_matrix_file(const std::filesystem::path& path);

/// Throws ParseError for malformed files and InvalidState when the matrix is not a density matrix.
LoadedState load_state(const std::filesystem::path& path);

void write_matrix_file(std::ostream& out, const CMatrix& m, std::optional<BipartiteDims> dims = std::nullopt);

}  // namespace skewlqu
