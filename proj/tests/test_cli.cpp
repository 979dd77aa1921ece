#include <doctest.h>

#include <cli.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "pleig/sweep_csv.hpp"

using namespace pleig;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "pleig");
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> row;
    std::istringstream fields(line);
    std::string f;
    while (std::getline(fields, f, ',')) row.push_back(f);
    rows.push_back(row);
  }
  return rows;
}

std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::string kept;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] == '#') continue;
    kept += line + "\n";
  }
  return kept;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("pleig_test_cli_" + name);
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const std::vector<std::string> kAnnulus{"--p", "2", "--N", "3", "--R", "1", "--Rbar", "2"};

std::vector<std::string> with_annulus(std::vector<std::string> head, std::vector<std::string> tail = {}) {
  head.insert(head.end(), kAnnulus.begin(), kAnnulus.end());
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

}  // namespace

TEST_CASE("pip") {
  CHECK(run({"pip", "--p", "2"}).out == "3.14159265358979\n");
  const Run r3 = run({"pip", "--p", "3"});
  CHECK(r3.code == cli::kExitOk);
  CHECK(r3.out.rfind("3.04699", 0) == 0);
  CHECK(run({"pip", "--p", "3", "--format", "human"}).out.rfind("pi_p(3) = 3.04699", 0) == 0);
  CHECK(run({"pip", "--p", "1"}).code == cli::kExitUsage);
  CHECK(run({"pip", "--p", "0.5"}).code == cli::kExitUsage);
  CHECK(run({"pip"}).code == cli::kExitUsage);
  CHECK(run({"pip", "--p", "two"}).code == cli::kExitUsage);
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == cli::kExitUsage);
  CHECK(run({"frobnicate"}).code == cli::kExitUsage);
  CHECK(run({"pip", "--p", "2", "--bogus"}).code == cli::kExitUsage);
  CHECK(run({"--help"}).code == cli::kExitOk);
  CHECK(run({"eigen", "--help"}).code == cli::kExitOk);
  CHECK(run({"weight", "--p", "3", "--N", "2", "--R", "1", "--Rbar", "2"}).code == cli::kExitUsage);
  CHECK(run({"weight", "--p", "2", "--N", "3", "--R", "2", "--Rbar", "1"}).code == cli::kExitUsage);
  CHECK(run(with_annulus({"weight"}, {"--samples", "1"})).code == cli::kExitUsage);
  CHECK(run(with_annulus({"eigen"}, {"--k", "1", "--format", "xml"})).code == cli::kExitUsage);
}

TEST_CASE("weight") {
  SUBCASE("p = N = 2, two samples") {
    const Run r = run({"weight", "--p", "2", "--N", "2", "--R", "1", "--Rbar", "2", "--samples", "2"});
    REQUIRE(r.code == cli::kExitOk);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 3);
    CHECK(rows[0] == std::vector<std::string>{"t", "q", "dq"});
    const double ln2 = std::log(2.0);
    CHECK(std::stod(rows[1][0]) == 0.0);
    CHECK(std::stod(rows[1][1]) == doctest::Approx(ln2 * ln2).epsilon(1e-15));
    CHECK(std::stod(rows[2][0]) == 1.0);
    CHECK(std::stod(rows[2][1]) == doctest::Approx(4 * ln2 * ln2).epsilon(1e-15));
  }
  SUBCASE("q increases down the file and starts at the closed-form q(0)") {
    const Run r = run({"weight", "--p", "2", "--N", "5", "--R", "10", "--Rbar", "11", "--samples", "21"});
    REQUIRE(r.code == cli::kExitOk);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 22);
    // (1/(N-2)^2) R^2 ((R+1)^{N-2} - R^{N-2})^2 / (R+1)^{2(N-2)}
    const double q0 = 100.0 * std::pow(1331.0 - 1000.0, 2) / (9.0 * std::pow(11.0, 6));
    CHECK(std::stod(rows[1][1]) == doctest::Approx(q0).epsilon(1e-13));
    for (std::size_t i = 2; i < rows.size(); ++i) {
      CHECK(std::stod(rows[i][1]) > std::stod(rows[i - 1][1]));
      CHECK(std::stod(rows[i][2]) > 0.0);
    }
  }
  SUBCASE("--out writes the same table to a file") {
    const auto path = temp_file("weight.csv");
    const Run to_file = run(with_annulus({"weight"}, {"--out", path.string()}));
    REQUIRE(to_file.code == cli::kExitOk);
    CHECK(to_file.out.empty());
    CHECK(slurp(path) == run(with_annulus({"weight"})).out);
    std::filesystem::remove(path);
  }
}

TEST_CASE("bracket") {
  const Run r = run(with_annulus({"bracket"}, {"--k", "1"}));
  REQUIRE(r.code == cli::kExitOk);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == std::vector<std::string>{"k", "q_minus", "q_plus", "lower", "upper"});
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(std::stod(rows[1][3]) < pi2);
  CHECK(std::stod(rows[1][4]) > pi2);
  CHECK(run(with_annulus({"bracket"}, {"--k", "0"})).code == cli::kExitUsage);
}

TEST_CASE("eigen") {
  const double pi2 = std::numbers::pi * std::numbers::pi;
  for (int k : {1, 2}) {
    const Run r = run(with_annulus({"eigen"}, {"--k", std::to_string(k)}));
    REQUIRE(r.code == cli::kExitOk);
    const auto rows = csv_rows(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0] == std::vector<std::string>{"k", "lambda", "lower", "upper", "zero_count", "residual"});
    const double lambda = std::stod(rows[1][1]);
    CHECK(lambda == doctest::Approx(k * k * pi2).epsilon(1e-8));
    CHECK(std::stod(rows[1][2]) <= lambda);
    CHECK(lambda <= std::stod(rows[1][3]));
    CHECK(std::stoi(rows[1][4]) == k - 1);
  }
  CHECK(run(with_annulus({"eigen"}, {"--k", "0"})).code == cli::kExitUsage);
  CHECK(run(with_annulus({"eigen"})).code == cli::kExitUsage);
  CHECK(run(with_annulus({"eigen"}, {"--k", "1", "--tol", "-1"})).code == cli::kExitUsage);

  SUBCASE("plot file") {
    const auto path = temp_file("plot.csv");
    const Run r = run(with_annulus({"eigen"}, {"--k", "3", "--samples", "101", "--plot-out", path.string()}));
    REQUIRE(r.code == cli::kExitOk);
    const auto rows = csv_rows(slurp(path));
    REQUIRE(rows.size() == 102);
    CHECK(rows[0] == std::vector<std::string>{"t", "v"});
    int changes = 0;
    for (std::size_t i = 3; i + 1 < rows.size(); ++i) {
      if (std::stod(rows[i][1]) * std::stod(rows[i - 1][1]) < 0.0) ++changes;
    }
    CHECK(changes == 2);
    std::filesystem::remove(path);
  }
  SUBCASE("human format") {
    const Run r = run(with_annulus({"eigen"}, {"--k", "1", "--format", "human"}));
    CHECK(r.out.rfind("lambda_1 = 9.869604", 0) == 0);
  }
  SUBCASE("tolerances from the environment") {
    ::setenv("PLEIG_ANGLE_TOL", "1e-4", 1);
    const Run loose = run(with_annulus({"eigen"}, {"--k", "1"}));
    ::setenv("PLEIG_ANGLE_TOL", "not-a-number", 1);
    const Run bad = run(with_annulus({"eigen"}, {"--k", "1"}));
    ::unsetenv("PLEIG_ANGLE_TOL");
    const Run tight = run(with_annulus({"eigen"}, {"--k", "1"}));
    CHECK(loose.code == cli::kExitOk);
    CHECK(bad.code == cli::kExitUsage);
    CHECK(loose.out != tight.out);
  }
}

TEST_CASE("numerical failures exit with status 3") {
  // q spans more than thirty orders of magnitude on this annulus; the
  // solver reports rather than returning a doubtful value.
  const Run r = run({"eigen", "--p", "1.05", "--N", "10", "--R", "1", "--Rbar", "1.5", "--k", "1"});
  CHECK(r.code == cli::kExitNumerical);
  CHECK(r.err.find("numerical failure") != std::string::npos);
  // Not representable at all: rejected as invalid input.
  CHECK(run({"eigen", "--p", "1.05", "--N", "10", "--R", "1", "--Rbar", "100", "--k", "1"}).code ==
        cli::kExitUsage);
}

TEST_CASE("sweep") {
  SUBCASE("p = 2, N = 3: every gap at solver tolerance") {
    const Run r = run({"sweep", "--family", "p2", "--N", "3"});
    REQUIRE(r.code == cli::kExitOk);
    std::istringstream in(r.out);
    const auto recs = read_sweep_csv(in);
    REQUIRE(recs.size() == 12);
    for (const SweepRecord& rec : recs) CHECK(rec.gap <= 1e-6 * rec.target);
    CHECK(r.err.find("exact") != std::string::npos);
  }
  SUBCASE("p = N = 2: gap decreases for each k") {
    const Run r = run({"sweep", "--family", "pn", "--p", "2"});
    REQUIRE(r.code == cli::kExitOk);
    std::istringstream in(r.out);
    const auto recs = read_sweep_csv(in);
    REQUIRE(recs.size() == 12);
    for (std::size_t i = 0; i < recs.size(); ++i) {
      if (i % 4 > 0) CHECK(recs[i].gap < recs[i - 1].gap);
    }
  }
  SUBCASE("r = 1 and p = 2, N = 3 agree") {
    std::istringstream a(run({"sweep", "--family", "rfam", "--r", "1"}).out);
    std::istringstream b(run({"sweep", "--family", "p2", "--N", "3"}).out);
    const auto ra = read_sweep_csv(a);
    const auto rb = read_sweep_csv(b);
    REQUIRE(ra.size() == rb.size());
    for (std::size_t i = 0; i < ra.size(); ++i) {
      CHECK(std::abs(ra[i].lambda - rb[i].lambda) <= 1e-10 * rb[i].lambda);
    }
  }
  SUBCASE("output is deterministic apart from the comment line") {
    const std::vector<std::string> args{"sweep", "--family", "rfam", "--r", "2", "--R", "10,100,1000",
                                        "--kmax", "2"};
    const Run first = run(args);
    auto threaded = args;
    threaded.insert(threaded.end(), {"--threads", "2"});
    const Run second = run(threaded);
    REQUIRE(first.code == cli::kExitOk);
    CHECK(first.out.rfind("# pleig sweep ", 0) == 0);
    CHECK(strip_comments(first.out) == strip_comments(second.out));
  }
  SUBCASE("--out file round trips") {
    const auto path = temp_file("sweep.csv");
    const Run r = run({"sweep", "--family", "pn", "--p", "3", "--R", "10,100", "--kmax", "2", "--out",
                       path.string()});
    REQUIRE(r.code == cli::kExitOk);
    CHECK(r.out.find("pass") != std::string::npos);  // summary moves to stdout
    const std::string text = slurp(path);
    std::istringstream in(text);
    const auto recs = read_sweep_csv(in);
    REQUIRE(recs.size() == 4);
    std::ostringstream again;
    write_sweep_csv(again, recs);
    CHECK(strip_comments(text) == again.str());
    std::filesystem::remove(path);
  }
  SUBCASE("bad arguments") {
    CHECK(run({"sweep", "--family", "xx"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--family", "pn"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--family", "p2", "--N", "2"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--family", "pn", "--p", "2", "--R", "100,10"}).code == cli::kExitUsage);
    CHECK(run({"sweep", "--family", "pn", "--p", "2", "--kmax", "0"}).code == cli::kExitUsage);
  }
}
