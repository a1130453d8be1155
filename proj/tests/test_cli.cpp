#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace {

constexpr double kPi = 3.14159265358979323846;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

// Run the CLI with stderr dropped; stdout captured.
RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(HETPHASE_BIN) + " " + args + " 2>/dev/null";
  RunResult result;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) result.out.append(buf.data(), got);
  const int status = pclose(pipe);
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return result;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.push_back("");
  return fields;
}

} // namespace

TEST_CASE("density: format, center value, determinism") {
  const std::string args = "density --lambda 0.5 --w-re 0 --w-im 0 --grid-points 3";
  const RunResult first = run_cli(args);
  CHECK(first.exit_code == 0);
  const RunResult second = run_cli(args);
  CHECK(first.out == second.out); // byte-identical reruns

  const std::vector<std::string> lines = lines_of(first.out);
  REQUIRE(lines.size() == 2 + 9);
  CHECK(lines[0].rfind("# hetphase density", 0) == 0);
  CHECK(lines[1] == "re_z,im_z,density_closed,density_series");

  bool found_center = false;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::vector<std::string> f = split_csv(lines[i]);
    REQUIRE(f.size() == 4);
    if (std::stod(f[0]) == 0.0 && std::stod(f[1]) == 0.0) {
      found_center = true;
      CHECK(std::stod(f[2]) == doctest::Approx(3.0 / kPi).epsilon(1e-10));
      CHECK(std::stod(f[3]) == doctest::Approx(3.0 / kPi).epsilon(1e-10));
    }
  }
  CHECK(found_center);
}

TEST_CASE("density: vacuum center and blank series column at eta < 1") {
  const RunResult vac = run_cli("density --lambda 0 --grid-points 3");
  CHECK(vac.exit_code == 0);
  const std::vector<std::string> lines = lines_of(vac.out);
  const std::vector<std::string> center = split_csv(lines[2 + 4]); // middle of 3x3
  CHECK(std::stod(center[2]) == doctest::Approx(1.0 / kPi).epsilon(1e-10));

  const RunResult lossy = run_cli("density --lambda 0.5 --eta 0.8 --grid-points 3");
  CHECK(lossy.exit_code == 0);
  for (std::size_t i = 2; i < lines_of(lossy.out).size(); ++i) {
    const std::vector<std::string> f = split_csv(lines_of(lossy.out)[i]);
    REQUIRE(f.size() == 4);
    CHECK(f[3].empty());
  }
}

TEST_CASE("phase-dist: uniform at zero signal, integral comment, symmetry") {
  const RunResult r = run_cli("phase-dist --lambda 0.7 --grid-points 64");
  CHECK(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 2 + 64 + 1);
  CHECK(lines[1] == "phi,p_exact,p_gaussian");
  for (std::size_t i = 2; i < lines.size() - 1; ++i) {
    const std::vector<std::string> f = split_csv(lines[i]);
    REQUIRE(f.size() == 3);
    CHECK(std::stod(f[1]) == doctest::Approx(1.0 / (2.0 * kPi)).epsilon(1e-12));
    CHECK(f[2].empty()); // Gaussian regime guard fails at |w| = 0
  }
  const std::string& tail = lines.back();
  CHECK(tail.rfind("# integral ", 0) == 0);
  CHECK(std::stod(tail.substr(11)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("phase-dist: gaussian column present and grid mirror-symmetric") {
  const RunResult r = run_cli("phase-dist --lambda 0.9 --w-re 5 --grid-points 256");
  CHECK(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 2 + 256 + 1);
  std::vector<double> p;
  for (std::size_t i = 2; i < lines.size() - 1; ++i) {
    const std::vector<std::string> f = split_csv(lines[i]);
    REQUIRE(f.size() == 3);
    CHECK_FALSE(f[2].empty());
    p.push_back(std::stod(f[1]));
  }
  // mirrored indices about the peak: j and N-2-j
  for (int j = 0; j < 127; ++j)
    CHECK(std::abs(p[j] - p[254 - j]) <= 1e-12 * std::max(1.0, p[j]));
}

TEST_CASE("sample: reproducible, seeded metadata") {
  const std::string args = "sample --lambda 0.5 --w-re 1 --count 5 --seed 7";
  const RunResult a = run_cli(args);
  const RunResult b = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
  const std::vector<std::string> lines = lines_of(a.out);
  REQUIRE(lines.size() == 2 + 5);
  CHECK(lines[0].find("seed=7") != std::string::npos);
  CHECK(lines[0].find("lambda=0.5") != std::string::npos);
  CHECK(lines[1] == "index,re_z,im_z,arg_z");
  const std::vector<std::string> row = split_csv(lines[2]);
  REQUIRE(row.size() == 4);
  const double re = std::stod(row[1]), im = std::stod(row[2]);
  CHECK(std::stod(row[3]) == doctest::Approx(std::atan2(im, re)).epsilon(1e-10));
}

TEST_CASE("sensitivity: sweep rows and definitional gain column") {
  const RunResult r =
      run_cli("sensitivity --nbar-min 10 --nbar-max 1000 --nbar-points 5 --precision 15");
  CHECK(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 2 + 5);
  CHECK(lines[1] ==
        "nbar,w_sq_opt,lambda_opt,gain,delta_phi_gauss,delta_phi_exact,product");
  double prev_nbar = 0.0;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::vector<std::string> f = split_csv(lines[i]);
    REQUIRE(f.size() == 7);
    const double nbar = std::stod(f[0]);
    CHECK(nbar > prev_nbar);
    prev_nbar = nbar;
    const double w_sq = std::stod(f[1]), lambda = std::stod(f[2]), gain = std::stod(f[3]);
    CHECK(w_sq > 0.0);
    CHECK(w_sq < nbar);
    CHECK(gain == doctest::Approx(1.0 / (1.0 - lambda * lambda)).epsilon(1e-12));
    CHECK(std::stod(f[6]) <= 1.0);
  }
}

TEST_CASE("optimize: single-budget row") {
  const RunResult r = run_cli("optimize --nbar 200");
  CHECK(r.exit_code == 0);
  const std::vector<std::string> lines = lines_of(r.out);
  REQUIRE(lines.size() == 3);
  const std::vector<std::string> f = split_csv(lines[2]);
  REQUIRE(f.size() == 7);
  CHECK(std::stod(f[1]) == doctest::Approx(100.0).epsilon(0.03));
  CHECK(std::stod(f[6]) == doctest::Approx(0.995).epsilon(0.01));
}

TEST_CASE("exit codes: usage and validation errors") {
  CHECK(run_cli("density --lambda 1.5 --grid-points 3").exit_code == 1);  // lambda out of range
  CHECK(run_cli("density --lambda 0.5 --eta 0 --grid-points 3").exit_code == 1);
  CHECK(run_cli("sample --lambda 0.5").exit_code == 1);                   // missing --count
  CHECK(run_cli("density --no-such-flag 3").exit_code == 1);
  CHECK(run_cli("sensitivity --nbar-min -1 --nbar-max 10").exit_code == 1);
  CHECK(run_cli("optimize --nbar 0").exit_code == 1);
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("verify: clean pass, and the perturbation hook trips the moment suite") {
  const RunResult good = run_cli("verify");
  CHECK(good.exit_code == 0);
  int pass_lines = 0;
  for (const std::string& line : lines_of(good.out))
    if (line.rfind("PASS", 0) == 0) ++pass_lines;
  CHECK(pass_lines == 5); // four suites plus the summary line

  const RunResult broken = run_cli("verify --perturb-variance 1e-3");
  CHECK(broken.exit_code == 2);
  bool moment_failed = false;
  for (const std::string& line : lines_of(broken.out))
    if (line.rfind("FAIL", 0) == 0 && line.find("fock-moment-oracle") != std::string::npos)
      moment_failed = true;
  CHECK(moment_failed);
}
