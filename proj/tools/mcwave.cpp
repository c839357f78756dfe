// mcwave: reproducible multicarrier waveform experiments.
//
//   mcwave <subcommand> [--config PATH] [--seed U64] [--out DIR] [--threads N] [--dry-run]
//
// Each run writes its CSV/JSON outputs plus manifest.json into --out.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mcw/analysis.hpp"
#include "mcw/config.hpp"
#include "mcw/fdma.hpp"
#include "mcw/fft.hpp"
#include "mcw/noise.hpp"
#include "mcw/report.hpp"
#include "mcw/sim.hpp"
#include "mcw/waveform.hpp"

namespace fs = std::filesystem;
using mcw::Index;
using mcw::config::Json;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string subcommand;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  std::string out_dir = "out";
  bool dry_run = false;
};

// Built-in configurations; configs/*.json ship the same values.
Json default_config(const std::string& cmd) {
  if (cmd == "analyze-noise") {
    return Json::parse(R"({
      "n": 64,
      "sigma": 1.0,
      "waveforms": [{"kind": "ofdm"}, {"kind": "otfs", "doppler_bins": 8}, {"kind": "afdm", "q": -4, "alpha": 0.1}],
      "profiles": ["impulse", "interferer", "equalized"]
    })");
  }
  if (cmd == "sparsity") {
    return Json::parse(R"({
      "n": 64,
      "tolerance": 1e-9,
      "waveforms": [{"kind": "ofdm"}, {"kind": "otfs", "doppler_bins": 8}, {"kind": "afdm", "q": -4, "alpha": 0.1},
                    {"kind": "afdm", "q": 0.5, "alpha": 0.1}, {"kind": "afdm", "q": -4.01, "alpha": 0.1}]
    })");
  }
  if (cmd == "ber") {
    return Json::parse(R"({
      "n": 120,
      "waveforms": [{"kind": "ofdm"}, {"kind": "otfs", "doppler_bins": 10}, {"kind": "otfs", "doppler_bins": 20},
                    {"kind": "afdm", "q": -4, "alpha": 0.1}],
      "channel": {"taps": 8, "max_doppler": 0.0},
      "noise": "white",
      "qam": 16,
      "equalizer": "mmse",
      "snr_db": [0, 5, 10, 15, 20, 25, 30],
      "bits_per_point": 200000,
      "seed": 1
    })");
  }
  if (cmd == "sweep-l") {
    return Json::parse(R"({
      "n": 120,
      "doppler_bins": [1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 24, 30, 40, 60, 120],
      "channel": {"taps": 8, "max_doppler": 0.0},
      "snr_db": 25,
      "bits_per_point": 200000,
      "seed": 1
    })");
  }
  if (cmd == "sweep-q") {
    return Json::parse(R"({
      "n": 120,
      "q": [-8, -6, -4, -2, -1, 1, 2, 4, 6, 8],
      "alpha": 0.1,
      "channel": {"taps": 8, "max_doppler": 0.0},
      "snr_db": 25,
      "bits_per_point": 200000,
      "seed": 1
    })");
  }
  if (cmd == "fdma-demo") {
    return Json::parse(R"({
      "layout": [{"kind": "ofdm", "n": 24}, {"kind": "otfs", "n": 24, "doppler_bins": 4},
                 {"kind": "afdm", "n": 24, "q": -4, "alpha": 0.1}],
      "noise": {"kind": "interferer", "start": 52, "width": 4},
      "sigma": 1.0,
      "channel": {"taps": 4, "max_doppler": 0.0},
      "snr_db": [10, 20, 30],
      "bits_per_point": 100000,
      "seed": 1
    })");
  }
  if (cmd == "verify-appendix") {
    return Json::parse(R"({
      "n": [8, 12, 16],
      "a": [1, 3],
      "b": [1, 2, 4],
      "tolerance": 1e-9
    })");
  }
  throw mcw::ConfigError("unknown subcommand '" + cmd + "'");
}

// Files written by one run, recorded in its manifest.
class OutputSet {
 public:
  OutputSet(fs::path dir, bool dry_run) : dir_(std::move(dir)), dry_run_(dry_run) {}

  template <typename Writer>
  void write(const std::string& name, Writer&& writer) {
    names_.push_back(name);
    if (dry_run_) return;
    std::ofstream os(dir_ / name, std::ios::binary);
    if (!os) throw mcw::ConfigError("cannot write '" + (dir_ / name).string() + "'");
    writer(os);
  }

  const std::vector<std::string>& names() const { return names_; }

 private:
  fs::path dir_;
  bool dry_run_;
  std::vector<std::string> names_;
};

struct Run {
  Options opts;
  Json cfg;
  OutputSet out;
  Json plan = Json::object();
};

std::uint64_t resolved_seed(const Run& run) {
  return run.opts.seed ? *run.opts.seed : mcw::config::get_or<std::uint64_t>(run.cfg, "seed", 1);
}

unsigned resolved_threads(const Run& run) {
  unsigned t = run.opts.threads ? *run.opts.threads : mcw::config::get_or<unsigned>(run.cfg, "threads", 1);
  if (t == 0) t = std::max(1u, std::thread::hardware_concurrency());
  return t;
}

mcw::SimConfig sim_for(const Run& run, const mcw::BlockLayout& layout) {
  mcw::SimConfig sim = mcw::config::parse_sim(run.cfg, layout);
  sim.seed = resolved_seed(run);
  sim.threads = resolved_threads(run);
  return sim;
}

Index config_n(const Json& cfg) {
  const auto n = mcw::config::get_or<Index>(cfg, "n", 0);
  if (n < 1) throw mcw::ConfigError("config: 'n' must be a positive integer");
  return n;
}

std::string noise_file(const mcw::WaveformConfig& w, mcw::NoiseKind kind) {
  return "noise_" + mcw::report::slug(w.label()) + "_" + to_string(kind) + ".csv";
}

void cmd_analyze_noise(Run& run) {
  const Index n = config_n(run.cfg);
  const double sigma = mcw::config::get_or<double>(run.cfg, "sigma", 1.0);
  const auto waveforms = mcw::config::parse_waveforms(run.cfg.at("waveforms"), n);
  if (!run.cfg.contains("profiles") || !run.cfg.at("profiles").is_array()) {
    throw mcw::ConfigError("config: 'profiles' must be an array");
  }
  std::vector<mcw::NoiseSpec> specs;
  for (const auto& p : run.cfg.at("profiles")) {
    mcw::NoiseSpec s = mcw::config::parse_noise(p);
    // --seed drives the seeded equalized-profile channel unless taps are given.
    if (run.opts.seed) s.params.equalized.seed = *run.opts.seed;
    specs.push_back(s);
  }
  std::vector<mcw::NoiseProfile> profiles;
  for (const auto& s : specs) profiles.push_back(mcw::make_profile(s.kind, n, s.params));
  run.plan["curves"] = waveforms.size() * specs.size();
  if (run.opts.dry_run) {
    for (const auto& w : waveforms)
      for (const auto& s : specs) run.out.write(noise_file(w, s.kind), [](auto&) {});
    run.out.write("whitening_summary.csv", [](auto&) {});
    return;
  }

  std::vector<mcw::report::SummaryRow> rows;
  for (std::size_t pi = 0; pi < specs.size(); ++pi) {
    for (const auto& w : waveforms) {
      const mcw::CMatrix q_inv = mcw::build_precoder(w).inverse;
      const mcw::RVector v = mcw::demod_noise_variance(q_inv, profiles[pi], sigma);
      const auto r = mcw::whitening_report(v, w.label());
      run.out.write(noise_file(w, specs[pi].kind), [&](std::ostream& os) { mcw::report::write_variance_csv(os, v); });
      rows.push_back({w.label(), to_string(specs[pi].kind), r.mean, r.std_dev});
    }
  }
  run.out.write("whitening_summary.csv", [&](std::ostream& os) { mcw::report::write_whitening_summary(os, rows); });
}

void cmd_sparsity(Run& run) {
  const Index n = config_n(run.cfg);
  const double tol = mcw::config::get_or<double>(run.cfg, "tolerance", mcw::kNonzeroTolerance);
  if (!(tol > 0.0)) throw mcw::ConfigError("config: 'tolerance' must be positive");
  const auto waveforms = mcw::config::parse_waveforms(run.cfg.at("waveforms"), n);
  if (run.opts.dry_run) {
    run.out.write("sparsity.csv", [](auto&) {});
    run.out.write("sparsity.json", [](auto&) {});
    return;
  }
  std::vector<mcw::SparsityReport> reports;
  Json records = Json::array();
  for (const auto& w : waveforms) {
    const auto r = mcw::sparsity_profile(mcw::build_precoder(w).inverse, tol, w.label());
    records.push_back({{"waveform", r.label},
                       {"n", w.size},
                       {"tolerance", r.tolerance},
                       {"nonzeros", r.nonzeros},
                       {"density", r.density},
                       {"min_row", r.min_row_count()},
                       {"max_row", r.max_row_count()},
                       {"row_counts", r.row_counts}});
    reports.push_back(r);
  }
  run.out.write("sparsity.csv", [&](std::ostream& os) { mcw::report::write_sparsity_csv(os, reports); });
  run.out.write("sparsity.json", [&](std::ostream& os) { os << records.dump(2) << '\n'; });
}

void cmd_ber(Run& run) {
  const Index n = config_n(run.cfg);
  const auto waveforms = mcw::config::parse_waveforms(run.cfg.at("waveforms"), n);
  std::vector<mcw::SimConfig> sims;
  for (const auto& w : waveforms) {
    sims.push_back(sim_for(run, mcw::BlockLayout::single(w)));
    sims.back().validate();
  }
  Json curves = Json::array();
  for (std::size_t i = 0; i < sims.size(); ++i) {
    const std::string name = "ber_" + mcw::report::slug(waveforms[i].label()) + ".csv";
    curves.push_back({{"waveform", waveforms[i].label()},
                      {"config_hash", mcw::config_hash(mcw::describe(sims[i]))},
                      {"frames_per_point", mcw::LinkSimulator(sims[i]).frames_per_point()},
                      {"file", name}});
    if (run.opts.dry_run) {
      run.out.write(name, [](auto&) {});
      continue;
    }
    const mcw::BerCurve curve = mcw::run_ber(sims[i]).front();
    run.out.write(name, [&](std::ostream& os) { mcw::report::write_ber_csv(os, curve); });
  }
  run.plan["curves"] = curves;
}

void cmd_sweep(Run& run, bool over_l) {
  const Index n = config_n(run.cfg);
  mcw::SimConfig tmpl = sim_for(run, mcw::BlockLayout::single(mcw::WaveformConfig::ofdm(n)));
  tmpl.validate();
  std::vector<mcw::SweepPoint> points;
  if (over_l) {
    const auto ls = mcw::config::get_or<std::vector<Index>>(run.cfg, "doppler_bins", {});
    if (ls.empty()) throw mcw::ConfigError("config: 'doppler_bins' must be a non-empty array");
    for (Index l : ls) mcw::WaveformConfig::otfs_with_doppler(n, l);  // validates L | N up front
    run.plan["values"] = ls;
    if (!run.opts.dry_run) points = mcw::sweep_L(tmpl, ls);
  } else {
    const auto qs = mcw::config::get_or<std::vector<double>>(run.cfg, "q", {});
    if (qs.empty()) throw mcw::ConfigError("config: 'q' must be a non-empty array");
    for (double q : qs) {
      if (q == 0.0) throw mcw::ConfigError("config: q values must be nonzero");
    }
    const double alpha = mcw::config::get_or<double>(run.cfg, "alpha", 0.1);
    run.plan["values"] = qs;
    if (!run.opts.dry_run) points = mcw::sweep_q(tmpl, qs, alpha);
  }
  run.plan["frames_per_point"] = mcw::LinkSimulator(tmpl).frames_per_point();
  run.out.write(over_l ? "sweep_l.csv" : "sweep_q.csv",
                [&](std::ostream& os) { mcw::report::write_sweep_csv(os, points); });
}

void cmd_fdma_demo(Run& run) {
  if (!run.cfg.contains("layout")) throw mcw::ConfigError("config: missing 'layout'");
  const mcw::BlockLayout layout = mcw::config::parse_layout(run.cfg.at("layout"));
  const double sigma = mcw::config::get_or<double>(run.cfg, "sigma", 1.0);
  const mcw::NoiseSpec noise =
      run.cfg.contains("noise") ? mcw::config::parse_noise(run.cfg.at("noise")) : mcw::NoiseSpec{};
  const mcw::NoiseProfile profile = mcw::make_profile(noise.kind, layout.size(), noise.params);
  const bool simulate = run.cfg.contains("snr_db");
  std::optional<mcw::SimConfig> sim;
  if (simulate) {
    sim = sim_for(run, layout);
    sim->validate();
  }
  std::vector<std::string> ber_names;
  for (std::size_t i = 0; i < layout.block_count(); ++i) {
    ber_names.push_back("fdma_ber_" + std::to_string(i) + "_" +
                        mcw::report::slug(layout.blocks()[i].waveform.label()) + ".csv");
  }
  run.plan["size"] = layout.size();
  if (run.opts.dry_run) {
    run.out.write("fdma_blocks.csv", [](auto&) {});
    run.out.write("fdma_variance.csv", [](auto&) {});
    if (simulate)
      for (const auto& name : ber_names) run.out.write(name, [](auto&) {});
    return;
  }

  // Noiseless roundtrip and leakage with seeded Gaussian data.
  mcw::Rng rng = mcw::make_stream(resolved_seed(run), 0);
  std::vector<mcw::CVector> data;
  for (const auto& b : layout.blocks()) data.push_back(mcw::complex_gaussian_vector(rng, b.width()));
  const auto back = mcw::decompose_fdma(mcw::compose_fdma(layout, data), layout);
  std::vector<double> roundtrip(layout.block_count()), leakage(layout.block_count(), 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    roundtrip[i] = (back[i] - data[i]).cwiseAbs().maxCoeff();
    std::vector<mcw::CVector> lone;
    for (std::size_t j = 0; j < data.size(); ++j) {
      lone.push_back(i == j ? data[j] : mcw::CVector::Zero(data[j].size()).eval());
    }
    const auto rx = mcw::decompose_fdma(mcw::compose_fdma(layout, lone), layout);
    for (std::size_t j = 0; j < rx.size(); ++j) {
      if (j != i) leakage[j] = std::max(leakage[j], rx[j].cwiseAbs().maxCoeff());
    }
  }
  const mcw::RVector v = mcw::fdma_noise_variance(layout, profile, sigma);

  run.out.write("fdma_blocks.csv", [&](std::ostream& os) {
    os << "block,waveform,start,width,roundtrip_error,leakage,mean,std\n";
    for (std::size_t i = 0; i < layout.block_count(); ++i) {
      const auto& b = layout.blocks()[i];
      const auto r = mcw::whitening_report(mcw::RVector(v.segment(b.start, b.width())), b.waveform.label());
      os << i << ",\"" << b.waveform.label() << "\"," << b.start << ',' << b.width() << ','
         << mcw::report::format_double(roundtrip[i]) << ',' << mcw::report::format_double(leakage[i]) << ','
         << mcw::report::format_double(r.mean) << ',' << mcw::report::format_double(r.std_dev) << '\n';
    }
  });
  run.out.write("fdma_variance.csv", [&](std::ostream& os) { mcw::report::write_variance_csv(os, v); });
  if (simulate) {
    const auto curves = mcw::run_ber(*sim);
    for (std::size_t i = 0; i < curves.size(); ++i) {
      run.out.write(ber_names[i], [&](std::ostream& os) { mcw::report::write_ber_csv(os, curves[i]); });
    }
  }
}

template <typename T>
std::vector<T> int_list(const Json& cfg, const char* key) {
  const auto v = mcw::config::get_or<std::vector<T>>(cfg, key, {});
  if (v.empty()) throw mcw::ConfigError(std::string("config: '") + key + "' must be a non-empty array");
  return v;
}

void cmd_verify_appendix(Run& run) {
  const auto ns = int_list<Index>(run.cfg, "n");
  const auto as = int_list<std::int64_t>(run.cfg, "a");
  const auto bs = int_list<std::int64_t>(run.cfg, "b");
  const double tol = mcw::config::get_or<double>(run.cfg, "tolerance", 1e-9);
  for (Index n : ns)
    if (n < 1) throw mcw::ConfigError("config: 'n' entries must be positive");
  for (auto b : bs)
    if (b < 1) throw mcw::ConfigError("config: 'b' entries must be positive");
  run.plan["cases"] = ns.size() * as.size() * bs.size();
  if (run.opts.dry_run) {
    run.out.write("appendix.csv", [](auto&) {});
    run.out.write("appendix.json", [](auto&) {});
    return;
  }

  Json records = Json::array();
  double worst = 0.0;
  for (Index n : ns) {
    for (auto a : as) {
      for (auto b : bs) {
        const mcw::RationalChirp chirp{a, b, 0.0};
        const double decimation = mcw::verify_decimation_identity(n, chirp);
        const mcw::CVector direct = mcw::afdm_inverse_column(n, chirp.value());
        const double convolution = (mcw::decimated_convolution_column(n, chirp) - direct).cwiseAbs().maxCoeff();
        const Index len = n * static_cast<Index>(b);
        mcw::CVector window = mcw::CVector::Zero(len);
        window.head(n).setOnes();
        const mcw::CVector spectrum = mcw::unitary_fft(window);
        double dirichlet = 0.0;
        for (Index u = 0; u < len; ++u) {
          dirichlet = std::max(dirichlet, std::abs(mcw::rect_window_spectrum(n, static_cast<Index>(b), u) - spectrum(u)));
        }
        const double density = mcw::sparsity_profile(mcw::build_precoder(mcw::WaveformConfig::afdm(n, chirp.value(), 0.0)).inverse).density;
        const bool pass = decimation < tol && convolution < tol && dirichlet < tol;
        worst = std::max({worst, decimation, convolution, dirichlet});
        records.push_back({{"n", n},
                           {"a", a},
                           {"b", b},
                           {"decimation_error", decimation},
                           {"convolution_error", convolution},
                           {"dirichlet_error", dirichlet},
                           {"density", density},
                           {"pass", pass}});
      }
    }
  }
  run.out.write("appendix.csv", [&](std::ostream& os) {
    os << "n,a,b,decimation_error,convolution_error,dirichlet_error,density,pass\n";
    for (const auto& r : records) {
      os << r["n"].get<Index>() << ',' << r["a"].get<std::int64_t>() << ',' << r["b"].get<std::int64_t>() << ','
         << mcw::report::format_double(r["decimation_error"]) << ','
         << mcw::report::format_double(r["convolution_error"]) << ','
         << mcw::report::format_double(r["dirichlet_error"]) << ',' << mcw::report::format_double(r["density"])
         << ',' << (r["pass"].get<bool>() ? 1 : 0) << '\n';
    }
  });
  run.out.write("appendix.json", [&](std::ostream& os) { os << records.dump(2) << '\n'; });
  run.plan["max_error"] = worst;
  if (!(worst < tol)) {
    throw NumericalFailure("appendix identity error " + mcw::report::format_double(worst) + " exceeds tolerance " +
                           mcw::report::format_double(tol));
  }
}

void write_manifest(Run& run, double seconds) {
  Json m = {{"subcommand", run.opts.subcommand},
            {"config", run.cfg},
            {"config_source", run.opts.config_path.empty() ? "built-in" : run.opts.config_path},
            {"seed", resolved_seed(run)},
            {"threads", resolved_threads(run)},
            {"version", MCWAVE_VERSION},
            {"duration_s", seconds},
            {"outputs", run.out.names()},
            {"plan", run.plan}};
  std::ofstream os(fs::path(run.opts.out_dir) / "manifest.json");
  os << m.dump(2) << '\n';
}

int execute(const Options& opts) {
  Json cfg = opts.config_path.empty() ? default_config(opts.subcommand) : mcw::config::load_file(opts.config_path);
  if (!cfg.is_object()) throw mcw::ConfigError("config: top level must be an object");
  if (!opts.dry_run) fs::create_directories(opts.out_dir);
  Run run{opts, cfg, OutputSet(opts.out_dir, opts.dry_run)};

  const auto start = std::chrono::steady_clock::now();
  int status = 0;
  std::string failure;
  try {
    const std::string& c = opts.subcommand;
    if (c == "analyze-noise") cmd_analyze_noise(run);
    else if (c == "sparsity") cmd_sparsity(run);
    else if (c == "ber") cmd_ber(run);
    else if (c == "sweep-l") cmd_sweep(run, true);
    else if (c == "sweep-q") cmd_sweep(run, false);
    else if (c == "fdma-demo") cmd_fdma_demo(run);
    else if (c == "verify-appendix") cmd_verify_appendix(run);
    else throw mcw::ConfigError("unknown subcommand '" + c + "'");
  } catch (const NumericalFailure& e) {
    status = kExitNumerical;
    failure = e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (opts.dry_run) {
    const Json plan = {{"subcommand", opts.subcommand}, {"config", run.cfg},     {"seed", resolved_seed(run)},
                       {"threads", resolved_threads(run)}, {"out", opts.out_dir}, {"outputs", run.out.names()},
                       {"plan", run.plan}};
    std::cout << plan.dump(2) << '\n';
    return status;
  }
  run.plan["status"] = status;
  if (!failure.empty()) run.plan["failure"] = failure;
  write_manifest(run, seconds);
  std::cerr << opts.subcommand << ": " << run.out.names().size() << " file(s) in " << opts.out_dir << " ("
            << seconds << " s)\n";
  if (status) std::cerr << "mcwave: " << failure << '\n';
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multicarrier waveform experiments: OFDM, OTFS and AFDM under colored noise"};
  app.set_version_flag("--version", std::string(MCWAVE_VERSION));
  app.require_subcommand(1);

  Options opts;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"analyze-noise", "demodulated noise variance per subcarrier and whitening summary"},
      {"sparsity", "nonzero structure of demodulation matrices"},
      {"ber", "Monte-Carlo BER versus SNR"},
      {"sweep-l", "OTFS BER versus the number of Doppler bins L"},
      {"sweep-q", "AFDM BER versus the chirp parameter q"},
      {"fdma-demo", "multi-waveform FDMA roundtrip, leakage, noise and BER"},
      {"verify-appendix", "numerical checks of the Gauss-sum decimation identities"}};
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config_path, "JSON configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", seed, "master seed (overrides the config)");
    sub->add_option("--out", opts.out_dir, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "worker threads, 0 = all cores");
    sub->add_flag("--dry-run", opts.dry_run, "validate and print the plan without computing");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  CLI::App* sub = app.get_subcommands().front();
  opts.subcommand = sub->get_name();
  if (sub->count("--seed")) opts.seed = seed;
  if (sub->count("--threads")) opts.threads = threads;

  try {
    return execute(opts);
  } catch (const mcw::EqualizationError& e) {
    std::cerr << "mcwave: numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const mcw::Error& e) {
    std::cerr << "mcwave: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "mcwave: config: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "mcwave: " << e.what() << '\n';
    return 1;
  }
}
