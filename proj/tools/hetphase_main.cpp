#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "hetphase/errors.hpp"
#include "hetphase/fock.hpp"
#include "hetphase/heterodyne.hpp"
#include "hetphase/phase.hpp"
#include "hetphase/verify.hpp"

namespace {

using hetphase::Amplitude;
using hetphase::HeterodyneModel;
using hetphase::TwinBeamParam;

constexpr double kPi = 3.14159265358979323846;

struct RunConfig {
  double lambda = 0.0;
  double w_re = 0.0;
  double w_im = 0.0;
  double eta = 1.0;
  double nbar = 0.0;
  double nbar_min = 0.0;
  double nbar_max = 0.0;
  int nbar_points = 20;
  int grid_points = 1024;
  long long count = 0;
  unsigned long long seed = 1;
  int precision = 12;
  std::string out_path;
  double perturb_variance = 0.0; // hidden hook for exercising verify
};

std::string fmt_g(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

// CSV emission: one '#' metadata line with the config, one header line,
// then comma-separated rows with `precision` significant digits.
class CsvWriter {
public:
  CsvWriter(std::ostream& os, int precision) : os_(os), precision_(precision) {}

  void comment(const std::string& text) { os_ << "# " << text << "\n"; }
  void header(const std::string& columns) { os_ << columns << "\n"; }

  void begin_row() { first_ = true; }
  void field(double v) {
    sep();
    os_ << fmt_g(v, precision_);
  }
  void field(long long v) {
    sep();
    os_ << v;
  }
  void blank_field() { sep(); }
  void end_row() { os_ << "\n"; }

private:
  void sep() {
    if (!first_) os_ << ',';
    first_ = false;
  }
  std::ostream& os_;
  int precision_;
  bool first_ = true;
};

HeterodyneModel make_model(const RunConfig& cfg) {
  return HeterodyneModel(TwinBeamParam(cfg.lambda), Amplitude(cfg.w_re, cfg.w_im), cfg.eta);
}

std::string model_meta(const RunConfig& cfg) {
  return "lambda=" + fmt_g(cfg.lambda, cfg.precision) + " w_re=" + fmt_g(cfg.w_re, cfg.precision) +
         " w_im=" + fmt_g(cfg.w_im, cfg.precision) + " eta=" + fmt_g(cfg.eta, cfg.precision);
}

int run_density(const RunConfig& cfg, std::ostream& os) {
  if (cfg.grid_points < 2) throw std::invalid_argument("density: grid-points must be >= 2");
  const HeterodyneModel model = make_model(cfg);
  const double delta = std::sqrt(hetphase::variance(model.p(), model.eta()));
  const int g = cfg.grid_points;
  CsvWriter csv(os, cfg.precision);
  csv.comment("hetphase density " + model_meta(cfg) + " grid_points=" + std::to_string(g) +
              " precision=" + std::to_string(cfg.precision));
  csv.header("re_z,im_z,density_closed,density_series");
  const double side = 8.0 * delta;
  for (int i = 0; i < g; ++i) {
    const double re = cfg.w_re - 0.5 * side + side * i / (g - 1);
    for (int j = 0; j < g; ++j) {
      const double im = cfg.w_im - 0.5 * side + side * j / (g - 1);
      const Amplitude z(re, im);
      csv.begin_row();
      csv.field(re);
      csv.field(im);
      csv.field(hetphase::density_closed(z, model));
      if (cfg.eta == 1.0)
        csv.field(hetphase::density_series(z, model, 1e-10));
      else
        csv.blank_field();
      csv.end_row();
    }
  }
  return 0;
}

int run_phase_dist(const RunConfig& cfg, std::ostream& os) {
  if (cfg.grid_points < 2) throw std::invalid_argument("phase-dist: grid-points must be >= 2");
  const HeterodyneModel model = make_model(cfg);
  const hetphase::PhaseDistribution dist =
      hetphase::make_phase_distribution(model, cfg.grid_points);
  const bool gauss_ok = hetphase::gaussian_regime_ok(model);
  CsvWriter csv(os, cfg.precision);
  csv.comment("hetphase phase-dist " + model_meta(cfg) +
              " grid_points=" + std::to_string(cfg.grid_points) +
              " precision=" + std::to_string(cfg.precision));
  csv.header("phi,p_exact,p_gaussian");
  double sum = 0.0;
  for (std::size_t j = 0; j < dist.grid.size(); ++j) {
    csv.begin_row();
    csv.field(dist.grid[j]);
    csv.field(dist.density[j]);
    if (gauss_ok)
      csv.field(hetphase::phase_density_gaussian(dist.grid[j], model));
    else
      csv.blank_field();
    csv.end_row();
    sum += dist.density[j];
  }
  const double integral = sum * 2.0 * kPi / static_cast<double>(cfg.grid_points);
  csv.comment("integral " + fmt_g(integral, 15));
  return 0;
}

int run_sample(const RunConfig& cfg, std::ostream& os) {
  if (cfg.count < 1) throw std::invalid_argument("sample: count must be >= 1");
  const HeterodyneModel model = make_model(cfg);
  const hetphase::SampleBatch batch = hetphase::sample(model, cfg.count, cfg.seed);
  CsvWriter csv(os, cfg.precision);
  csv.comment("hetphase sample " + model_meta(cfg) + " count=" + std::to_string(cfg.count) +
              " seed=" + std::to_string(cfg.seed) + " precision=" + std::to_string(cfg.precision));
  csv.header("index,re_z,im_z,arg_z");
  for (std::int64_t i = 0; i < batch.count; ++i) {
    const Amplitude z = batch.outcomes[static_cast<std::size_t>(i)];
    csv.begin_row();
    csv.field(static_cast<long long>(i));
    csv.field(z.real());
    csv.field(z.imag());
    csv.field(std::arg(z));
    csv.end_row();
  }
  return 0;
}

void sensitivity_row(CsvWriter& csv, const hetphase::SensitivityResult& r) {
  csv.begin_row();
  csv.field(r.nbar);
  csv.field(r.w_sq_opt);
  csv.field(r.lambda_opt);
  csv.field(r.gain);
  csv.field(r.delta_phi_gauss);
  csv.field(r.delta_phi_exact);
  csv.field(r.product);
  csv.end_row();
}

constexpr const char* kSensitivityHeader =
    "nbar,w_sq_opt,lambda_opt,gain,delta_phi_gauss,delta_phi_exact,product";

int run_sensitivity(const RunConfig& cfg, std::ostream& os) {
  if (!(cfg.nbar_min > 0.0) || !(cfg.nbar_max >= cfg.nbar_min) || cfg.nbar_points < 1)
    throw std::invalid_argument("sensitivity: need 0 < nbar-min <= nbar-max and nbar-points >= 1");
  CsvWriter csv(os, cfg.precision);
  csv.comment("hetphase sensitivity eta=" + fmt_g(cfg.eta, cfg.precision) +
              " nbar_min=" + fmt_g(cfg.nbar_min, cfg.precision) +
              " nbar_max=" + fmt_g(cfg.nbar_max, cfg.precision) +
              " nbar_points=" + std::to_string(cfg.nbar_points) +
              " precision=" + std::to_string(cfg.precision));
  csv.header(kSensitivityHeader);
  const double log_min = std::log(cfg.nbar_min), log_max = std::log(cfg.nbar_max);
  for (int i = 0; i < cfg.nbar_points; ++i) {
    const double frac = cfg.nbar_points == 1
                            ? 0.0
                            : static_cast<double>(i) / (cfg.nbar_points - 1);
    const double nbar = std::exp(log_min + frac * (log_max - log_min));
    sensitivity_row(csv, hetphase::optimize_signal_split(nbar, cfg.eta));
  }
  return 0;
}

int run_optimize(const RunConfig& cfg, std::ostream& os) {
  if (!(cfg.nbar > 0.0)) throw std::invalid_argument("optimize: need --nbar > 0");
  CsvWriter csv(os, cfg.precision);
  csv.comment("hetphase optimize nbar=" + fmt_g(cfg.nbar, cfg.precision) +
              " eta=" + fmt_g(cfg.eta, cfg.precision) +
              " precision=" + std::to_string(cfg.precision));
  csv.header(kSensitivityHeader);
  sensitivity_row(csv, hetphase::optimize_signal_split(cfg.nbar, cfg.eta));
  return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& os) {
  const auto start = std::chrono::steady_clock::now();
  hetphase::VerifyOptions opts;
  opts.variance_perturbation = cfg.perturb_variance;
  const std::vector<hetphase::SuiteResult> results = hetphase::run_verify_suites(opts);
  bool all_pass = true;
  for (const hetphase::SuiteResult& r : results) {
    os << (r.pass ? "PASS" : "FAIL") << "  " << r.name << "  worst " << fmt_g(r.worst_ratio, 6)
       << " of tolerance";
    if (!r.detail.empty()) os << "  (" << r.detail << ")";
    os << "\n";
    all_pass = all_pass && r.pass;
  }
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  os << (all_pass ? "PASS" : "FAIL") << "  verify complete in " << fmt_g(seconds, 4) << " s\n";
  if (seconds > 60.0)
    std::cerr << "warning: verify exceeded its 60 s runtime budget (" << fmt_g(seconds, 4)
              << " s)\n";
  return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"hetphase: two-mode heterodyne phase detection simulator"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_model_flags = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", cfg.lambda, "twin-beam parameter in [0, 1)");
    cmd->add_option("--w-re", cfg.w_re, "signal displacement, real part");
    cmd->add_option("--w-im", cfg.w_im, "signal displacement, imaginary part");
    cmd->add_option("--eta", cfg.eta, "detector quantum efficiency in (0, 1]");
  };
  const auto add_common_flags = [&](CLI::App* cmd) {
    cmd->add_option("--precision", cfg.precision, "significant digits in CSV floats")
        ->check(CLI::Range(1, 17));
    cmd->add_option("--out", cfg.out_path, "output path (default: standard output)");
  };

  CLI::App* density = app.add_subcommand("density", "outcome density on a grid centered at w");
  add_model_flags(density);
  add_common_flags(density);
  density->add_option("--grid-points", cfg.grid_points, "grid points per axis");

  CLI::App* phase_dist = app.add_subcommand("phase-dist", "marginal phase density over one period");
  add_model_flags(phase_dist);
  add_common_flags(phase_dist);
  phase_dist->add_option("--grid-points", cfg.grid_points, "phase grid points");

  CLI::App* sample_cmd = app.add_subcommand("sample", "draw heterodyne outcomes");
  add_model_flags(sample_cmd);
  add_common_flags(sample_cmd);
  sample_cmd->add_option("--count", cfg.count, "number of samples")->required();
  sample_cmd->add_option("--seed", cfg.seed, "generator seed");

  CLI::App* sensitivity = app.add_subcommand("sensitivity", "optimized sensitivity sweep over nbar");
  add_common_flags(sensitivity);
  sensitivity->add_option("--eta", cfg.eta, "detector quantum efficiency in (0, 1]");
  sensitivity->add_option("--nbar-min", cfg.nbar_min, "sweep start")->required();
  sensitivity->add_option("--nbar-max", cfg.nbar_max, "sweep end")->required();
  sensitivity->add_option("--nbar-points", cfg.nbar_points, "log-spaced sweep points");

  CLI::App* optimize = app.add_subcommand("optimize", "optimize the photon split at one budget");
  add_common_flags(optimize);
  optimize->add_option("--eta", cfg.eta, "detector quantum efficiency in (0, 1]");
  optimize->add_option("--nbar", cfg.nbar, "total mean photon number")->required();

  CLI::App* verify = app.add_subcommand("verify", "run the self-verification oracle suites");
  verify->add_option("--perturb-variance", cfg.perturb_variance, "")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!cfg.out_path.empty()) {
    file.open(cfg.out_path);
    if (!file) {
      std::cerr << "error: cannot open output path " << cfg.out_path << "\n";
      return 1;
    }
    os = &file;
  }

  try {
    if (density->parsed()) return run_density(cfg, *os);
    if (phase_dist->parsed()) return run_phase_dist(cfg, *os);
    if (sample_cmd->parsed()) return run_sample(cfg, *os);
    if (sensitivity->parsed()) return run_sensitivity(cfg, *os);
    if (optimize->parsed()) return run_optimize(cfg, *os);
    if (verify->parsed()) return run_verify(cfg, *os);
  } catch (const hetphase::ConvergenceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const hetphase::TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
