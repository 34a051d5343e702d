#include "skewlqu/state_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

namespace skewlqu {

namespace {

bool parse_real(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

Complex parse_complex_token(const std::string& token) {
  const auto bad = [&] { return Error(ErrorKind::ParseError, "malformed complex token '" + token + "'"); };
  if (token.empty()) throw bad();
  double re = 0.0;
  if (token.back() != 'j') {
    if (!parse_real(token, re)) throw bad();
    return {re, 0.0};
  }
  const std::string body = token.substr(0, token.size() - 1);
  // Split at the last sign that is not the leading sign or an exponent sign.
  std::size_t split = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re_part = split == std::string::npos ? "" : body.substr(0, split);
  std::string im_part = split == std::string::npos ? body : body.substr(split);
  if (im_part.empty() || im_part == "+") im_part = "1";
  if (im_part == "-") im_part = "-1";
  double im = 0.0;
  if (!parse_real(im_part, im)) throw bad();
  if (!re_part.empty() && !parse_real(re_part, re)) throw bad();
  return {re, im};
}

std::string format_complex_token(Complex z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

MatrixFile parse_matrix_file(std::istream& in, const std::string& source) {
  const auto fail = [&](std::size_t line, const std::string& why) {
    return Error(ErrorKind::ParseError, source + ":" + std::to_string(line) + ": " + why);
  };
  MatrixFile file;
  Eigen::Index n = 0;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::vector<Complex>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    if (n == 0) {
      std::istringstream header(line);
      std::string key;
      header >> key;
      if (key == "dims:") {
        long na = 0, nb = 0;
        if (!(header >> na >> nb) || na < 1 || nb < 1) throw fail(line_no, "expected 'dims: n_A n_B'");
        file.dims = BipartiteDims{na, nb};
        n = na * nb;
      } else if (key == "dim:") {
        long d = 0;
        if (!(header >> d) || d < 1) throw fail(line_no, "expected 'dim: n'");
        n = d;
      } else {
        throw fail(line_no, "first line must be 'dims: n_A n_B' or 'dim: n'");
      }
      std::string extra;
      if (header >> extra) throw fail(line_no, "trailing text after header");
      if (n > kMaxDimension) throw fail(line_no, "dimension exceeds 32");
      continue;
    }
    std::istringstream row_in(line);
    std::vector<Complex> row;
    std::string token;
    while (row_in >> token) {
      try {
        row.push_back(parse_complex_token(token));
      } catch (const Error& e) {
        throw fail(line_no, e.what());
      }
    }
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw fail(line_no, "expected " + std::to_string(n) + " entries, got " + std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  if (n == 0) throw fail(line_no, "missing header");
  if (static_cast<Eigen::Index>(rows.size()) != n) {
    throw fail(line_no, "expected " + std::to_string(n) + " rows, got " + std::to_string(rows.size()));
  }
  file.matrix.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) file.matrix(i, j) = rows[i][j];
  }
  return file;
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  return parse_matrix_file(in, path.string());
}

LoadedState load_state(const std::filesystem::path& path) {
  auto file = read_matrix_file(path);
  DensityMatrix rho(std::move(file.matrix));
  if (file.dims) return BipartiteState(std::move(rho), *file.dims);
  return rho;
}

void write_matrix_file(std::ostream& out, const CMatrix& m, std::optional<BipartiteDims> dims) {
  if (dims) {
    out << "dims: " << dims->n_a << ' ' << dims->n_b << '\n';
  } else {
    out << "dim: " << m.rows() << '\n';
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << format_complex_token(m(i, j));
    out << '\n';
  }
}

}  // namespace skewlqu
