#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "skewlqu/cli.hpp"
#include "skewlqu/state_io.hpp"

using namespace skewlqu;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "skewlqu_test_cli";
  fs::create_directories(dir);
  return dir / name;
}

fs::path write_state(const std::string& name, const CMatrix& m, std::optional<BipartiteDims> dims) {
  const auto path = scratch(name);
  std::ofstream out(path);
  write_matrix_file(out, m, dims);
  return path;
}

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int status = cli::main_entry(args, out, err);
  return {status, out.str(), err.str()};
}

std::string value_of(const std::string& text, const std::string& key) {
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind(key + "=", 0) == 0) return line.substr(key.size() + 1);
  }
  return {};
}

ErrorKind kind_of(const auto& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an Error");
  return ErrorKind::IoError;
}

}  // namespace

TEST_CASE("parse_args") {
  const auto cfg = cli::parse_args({"verify", "claim1", "--dim-a", "2", "--dim-b", "3", "--trials", "1000", "--spectrum",
                                    "-1,1", "--restarts", "16", "--tol", "1e-7", "--seed", "42", "--out",
                                    "claim1.jsonl"});
  CHECK(cfg.command == cli::Command::VerifyClaim1);
  CHECK(cfg.n_a == 2);
  CHECK(cfg.n_b == 3);
  CHECK(cfg.trials == 1000);
  REQUIRE(cfg.spectrum);
  CHECK(cfg.spectrum->size() == 2);
  CHECK((*cfg.spectrum)(0) == -1.0);
  CHECK(cfg.restarts == 16);
  CHECK(cfg.tol == 1e-7);
  CHECK(cfg.master_seed == 42);
  CHECK(cfg.out_path == "claim1.jsonl");
  CHECK(cfg.out_format == ReportFormat::JsonLines);

  const auto c2 = cli::parse_args({"verify", "claim2", "--mode", "random", "--format", "csv"});
  CHECK(c2.mode == Claim2Mode::RandomK);
  CHECK(c2.out_format == ReportFormat::Csv);
  CHECK(cli::parse_args({"lqu", "--side", "B"}).side == Subsystem::B);
  CHECK(cli::parse_args({"--help"}).command == cli::Command::Help);

  CHECK(kind_of([] { cli::parse_args({"verify", "claim1", "--spectrum", "1,1"}); }) == ErrorKind::UsageError);
  CHECK(kind_of([] { cli::parse_args({}); }) == ErrorKind::UsageError);
  CHECK(kind_of([] { cli::parse_args({"frobnicate"}); }) == ErrorKind::UsageError);
  CHECK(kind_of([] { cli::parse_args({"verify", "claim1", "--dim-a", "two"}); }) == ErrorKind::UsageError);
}

TEST_CASE("parse_spectrum") {
  const auto s = cli::parse_spectrum("-1,0,2.5");
  REQUIRE(s.size() == 3);
  CHECK(s(2) == 2.5);
  CHECK_THROWS_AS(cli::parse_spectrum("1,0"), Error);
  CHECK_THROWS_AS(cli::parse_spectrum("a,b"), Error);
  CHECK_THROWS_AS(cli::parse_spectrum(""), Error);
}

TEST_CASE("exit statuses") {
  CHECK(invoke({}).status == cli::kExitUsage);
  CHECK_FALSE(invoke({}).err.empty());
  CHECK(invoke({"--help"}).status == cli::kExitOk);
  CHECK(invoke({"lqu", "--state-file", scratch("missing.txt").string()}).status == cli::kExitError);
}

TEST_CASE("complex tokens") {
  CHECK(parse_complex_token("0.5") == Complex(0.5, 0));
  CHECK(parse_complex_token("0.5+0.25j") == Complex(0.5, 0.25));
  CHECK(parse_complex_token("-1e-3-2E+2j") == Complex(-1e-3, -200));
  CHECK(parse_complex_token("2j") == Complex(0, 2));
  CHECK(parse_complex_token("-j") == Complex(0, -1));
  CHECK_THROWS_AS(parse_complex_token("1+x"), Error);
  CHECK_THROWS_AS(parse_complex_token("1++2j"), Error);
  const Complex z(0.1, -1.0 / 3.0);
  CHECK(parse_complex_token(format_complex_token(z)) == z);
}

TEST_CASE("load_state") {
  const auto mixed = write_state("mixed.txt", CMatrix::Identity(2, 2) / 2.0, std::nullopt);
  CHECK(std::holds_alternative<DensityMatrix>(load_state(mixed)));

  const auto bell = write_state("bell.txt", oracle::bell_density(), BipartiteDims{2, 2});
  const auto loaded = load_state(bell);
  REQUIRE(std::holds_alternative<BipartiteState>(loaded));
  CHECK(std::get<BipartiteState>(loaded).n_a() == 2);

  const auto bad = write_state("bad.txt", CMatrix::Identity(2, 2), std::nullopt);
  CHECK(kind_of([&] { load_state(bad); }) == ErrorKind::InvalidState);

  std::istringstream ragged("dim: 2\n1 0\n0\n");
  CHECK(kind_of([&] { parse_matrix_file(ragged, "ragged"); }) == ErrorKind::ParseError);
  std::istringstream no_header("0.5 0\n0 0.5\n");
  CHECK(kind_of([&] { parse_matrix_file(no_header, "nh"); }) == ErrorKind::ParseError);
  std::istringstream commented("# a comment\ndim: 1\n\n1+0j\n");
  CHECK(parse_matrix_file(commented, "c").matrix(0, 0) == Complex(1, 0));
  CHECK(kind_of([] { load_state(scratch("nope.txt")); }) == ErrorKind::IoError);
}

TEST_CASE("run examples") {
  const auto claim2 = invoke({"verify", "claim2", "--trials", "50", "--seed", "3", "--restarts", "4"});
  CHECK(claim2.status == cli::kExitOk);
  CHECK(value_of(claim2.out, "violations") == "0");
  CHECK(value_of(claim2.out, "result") == "PASS");

  const auto bell = write_state("bell.txt", oracle::bell_density(), BipartiteDims{2, 2});
  const auto lqu = invoke({"lqu", "--state-file", bell.string(), "--spectrum", "-1,1"});
  CHECK(lqu.status == cli::kExitOk);
  CHECK(std::abs(std::stod(value_of(lqu.out, "lqu")) - 1.0) < 1e-6);
  CHECK(std::abs(std::stod(value_of(lqu.out, "lqu_closed_form")) - 1.0) < 1e-6);

  const auto mixed = write_state("mixed.txt", CMatrix::Identity(2, 2) / 2.0, std::nullopt);
  const auto skew = invoke({"skew", "--state-file", mixed.string()});
  CHECK(skew.status == cli::kExitOk);
  CHECK(std::stod(value_of(skew.out, "skew_information")) == 0.0);

  const auto q = invoke({"q", "--state-file", bell.string()});
  CHECK(std::abs(std::stod(value_of(q.out, "q_local_B")) - 1.5) < 1e-6);

  const auto steer = invoke({"steer", "--state-file", bell.string(), "--restarts", "4"});
  CHECK(steer.status == cli::kExitOk);
  CHECK(std::abs(std::stod(value_of(steer.out, "average_steering_induced_q")) - 1.0) < 1e-6);

  const auto wrong_dims = invoke({"lqu", "--state-file", mixed.string()});
  CHECK(wrong_dims.status == cli::kExitError);
  CHECK(std::count(wrong_dims.err.begin(), wrong_dims.err.end(), '\n') == 1);
}

TEST_CASE("same command line gives identical output and files") {
  const auto out1 = scratch("run1.csv");
  const auto out2 = scratch("run2.csv");
  const std::vector<std::string> base{"verify", "avg", "--trials", "5", "--bases", "4", "--seed", "11", "--format", "csv"};
  auto a = base;
  a.insert(a.end(), {"--out", out1.string()});
  auto b = base;
  b.insert(b.end(), {"--out", out2.string()});
  const auto r1 = invoke(a);
  const auto r2 = invoke(b);
  CHECK(r1.status == cli::kExitOk);
  CHECK(r1.out == r2.out);
  std::ifstream f1(out1), f2(out2);
  std::stringstream s1, s2;
  s1 << f1.rdbuf();
  s2 << f2.rdbuf();
  CHECK(s1.str() == s2.str());
  CHECK(s1.str().rfind(csv_header(), 0) == 0);

  CHECK(invoke({"lqu", "--seed", "4"}).out == invoke({"lqu", "--seed", "4"}).out);
}
