// Command-line front end: filter tables, seeded simulations, estimators and
// analysis sweeps. Every output file gets a JSON sidecar `<file>.json`.

#include "CLI11.hpp"
#include "json.hpp"

#include "regp/ecf.hpp"
#include "regp/errors.hpp"
#include "regp/filters.hpp"
#include "regp/io.hpp"
#include "regp/parallel.hpp"
#include "regp/process.hpp"
#include "regp/sampling.hpp"
#include "regp/states.hpp"
#include "regp/syserr.hpp"

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#ifndef REGP_VERSION
#define REGP_VERSION "0.0.0"
#endif

using namespace regp;
using json = nlohmann::ordered_json;
using Complex = std::complex<double>;

namespace {

using Clock = std::chrono::steady_clock;

struct StateOpts {
  std::string kind = "vacuum";
  double xi = 0.5;
  double alpha_re = 0.0;
  double alpha_im = 0.0;
  double nbar = 1.0;

  void add(CLI::App* app) {
    app->add_option("--state", kind, "vacuum | squeezed | coherent | thermal")
        ->check(CLI::IsMember({"vacuum", "squeezed", "coherent", "thermal"}));
    app->add_option("--xi", xi, "squeezing parameter");
    app->add_option("--alpha0-re", alpha_re, "coherent amplitude, real part");
    app->add_option("--alpha0-im", alpha_im, "coherent amplitude, imaginary part");
    app->add_option("--nbar", nbar, "thermal mean photon number");
  }

  states::StateModel build() const {
    if (kind == "squeezed") return states::StateModel::squeezed_vacuum(xi);
    if (kind == "coherent") return states::StateModel::coherent({alpha_re, alpha_im});
    if (kind == "thermal") return states::StateModel::thermal(nbar);
    return states::StateModel::vacuum();
  }

  json to_json() const {
    json j{{"kind", kind}};
    if (kind == "squeezed") j["xi"] = xi;
    if (kind == "coherent") j["alpha0"] = {alpha_re, alpha_im};
    if (kind == "thermal") j["nbar"] = nbar;
    return j;
  }
};

struct EcfOpts {
  std::string q = "inf";
  double w = 1.3;
  double w_gamma_c = 100.0;
  double tr_ratio = 10.0;
  bool off = false;

  void add(CLI::App* app) {
    app->add_option("--q", q, "filter exponent, a number >= 2 or inf");
    app->add_option("--w", w, "filter width");
    app->add_option("--wgc", w_gamma_c, "field cutoff as the product w * gamma_c");
    app->add_option("--tr", tr_ratio, "beam-splitter ratio |T|/|R|");
    app->add_flag("--no-ecf", off, "skip the engineered classical field");
  }

  ecf::ECFConfig build() const { return ecf::ECFConfig::from_product(filters::FilterSpec::parse(q, w), w_gamma_c, tr_ratio); }

  json to_json() const {
    if (off) return json{{"enabled", false}};
    return json{{"enabled", true}, {"q", q}, {"w", w}, {"w_gamma_c", w_gamma_c}, {"tr_ratio", tr_ratio}};
  }
};

struct GridOpts {
  std::string kind = "cross";
  double half_width = 3.0;
  double step = 0.05;
  int m = 10;
  double alpha_re = 0.0;
  double alpha_im = 0.0;

  void add(CLI::App* app) {
    app->add_option("--grid", kind, "cross | axis-re | axis-im | square | point")
        ->check(CLI::IsMember({"cross", "axis-re", "axis-im", "square", "point"}));
    app->add_option("--half-width", half_width, "grid half width");
    app->add_option("--step", step, "grid step (cross, axis)");
    app->add_option("--m", m, "points per half side (square)");
    app->add_option("--alpha-re", alpha_re, "grid point, real part (point)");
    app->add_option("--alpha-im", alpha_im, "grid point, imaginary part (point)");
  }

  std::vector<Complex> build() const {
    if (kind == "axis-re") return sampling::axis_grid(sampling::Axis::real, half_width, step);
    if (kind == "axis-im") return sampling::axis_grid(sampling::Axis::imag, half_width, step);
    if (kind == "square") return sampling::square_grid(half_width, m);
    if (kind == "point") return {Complex(alpha_re, alpha_im)};
    return sampling::cross_grid(half_width, step);
  }

  json to_json() const {
    json j{{"kind", kind}};
    if (kind == "point") {
      j["alpha"] = {alpha_re, alpha_im};
    } else {
      j["half_width"] = half_width;
      if (kind == "square") j["m"] = m;
      else j["step"] = step;
    }
    return j;
  }
};

/// Where a command writes its table: a file with sidecar, or stdout.
struct Output {
  std::string path;

  void add(CLI::App* app, bool required) {
    auto* opt = app->add_option("-o,--out", path, "output CSV path");
    if (required) opt->required();
  }

  void write(const std::function<void(std::ostream&)>& body, const json& meta) const {
    if (path.empty()) {
      body(std::cout);
      return;
    }
    {
      auto f = io::open_output(path);
      body(f);
      if (!f) throw std::runtime_error("write to '" + path + "' failed");
    }
    auto side = io::open_output(path + ".json");
    side << meta.dump(2) << '\n';
  }
};

json make_meta(const std::string& command, json config, std::optional<std::uint64_t> seed, Clock::time_point start) {
  json j;
  j["command"] = command;
  j["version"] = REGP_VERSION;
  j["config"] = std::move(config);
  if (seed) j["seed"] = *seed;
  j["wall_time_s"] = std::chrono::duration<double>(Clock::now() - start).count();
  return j;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

/// Seed of the k-th grid point in a multi-point run.
std::uint64_t point_seed(std::uint64_t seed, std::size_t k) { return seed + 0x9E3779B97F4A7C15ULL * k; }

template <class T>
void preset_value(CLI::App* app, const char* flag, T& target, T value) {
  if (app->count(flag) == 0) target = value;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? a : a + (b - a) * i / (n - 1.0);
  return v;
}

/// Filter width recorded in a data file's sidecar, if any.
std::optional<double> sidecar_width(const std::string& data) {
  std::ifstream f(data + ".json");
  if (!f) return std::nullopt;
  try {
    const auto j = json::parse(f);
    const auto& e = j.at("config").at("ecf");
    if (e.value("enabled", false)) return e.at("w").get<double>();
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

void print_significance(const sampling::QuasiprobEstimate& est) {
  const std::size_t i = est.argmax_significance();
  if (i >= est.value.size()) {
    std::cout << "max negativity significance: none (zero standard errors)\n";
    return;
  }
  std::cout << "max negativity significance: " << est.significance(i) << " sigma at alpha = (" << est.grid[i].real()
            << ", " << est.grid[i].imag() << "), P_w = " << est.value[i] << " +- " << est.std_error[i] << '\n';
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized P-function toolkit: filters, simulation and sampling estimators"};
  app.require_subcommand(1);
  app.set_version_flag("--version", REGP_VERSION);
  unsigned threads = parallel::default_threads();
  app.add_option("--threads", threads, "worker threads (default: $REGP_THREADS or all cores)")
      ->check(CLI::PositiveNumber);
  const auto start = Clock::now();

  // ---- filter ----
  auto* filter = app.add_subcommand("filter", "tabulate a filter or its Fourier transform");
  filter->require_subcommand(1);
  struct {
    std::string q = "inf";
    double w = 1.0, rmax = 4.0;
    int points = 401;
    std::string preset;
    Output out;
  } fo;
  for (const char* name : {"eval", "ft"}) {
    auto* sub = filter->add_subcommand(name, std::string(name) == "eval" ? "Omega(|beta|)" : "Fourier transform");
    sub->add_option("--q", fo.q, "filter exponent, a number >= 2 or inf");
    sub->add_option("--w", fo.w, "filter width");
    sub->add_option("--rmax", fo.rmax, "largest radius");
    sub->add_option("--points", fo.points, "number of radii");
    sub->add_option("--preset", fo.preset, "fig1: sweep q over 2, 3, 4, 20, inf")->check(CLI::IsMember({"fig1"}));
    fo.out.add(sub, false);
    sub->callback([&, sub, name] {
      const bool ft = std::string(name) == "ft";
      if (!(fo.rmax > 0.0) || fo.points < 2) throw InvalidArgument("bad range: need --rmax > 0 and --points >= 2");
      std::vector<std::string> qs = {fo.q};
      if (fo.preset == "fig1") {
        qs = {"2", "3", "4", "20", "inf"};
        preset_value(sub, "--w", fo.w, 1.0);
      }
      std::vector<filters::FilterSpec> specs;
      std::vector<std::string> header = {"r"};
      for (const auto& q : qs) {
        specs.push_back(filters::FilterSpec::parse(q, fo.w));
        header.push_back(qs.size() == 1 ? "value" : "q" + q);
      }
      std::vector<std::vector<double>> rows;
      for (double r : linspace(0.0, fo.rmax, fo.points)) {
        std::vector<double> row = {r};
        for (const auto& s : specs) row.push_back(ft ? filters::ft_filter(r, s) : filters::filter_value(r, s));
        rows.push_back(std::move(row));
      }
      const json cfg{{"table", name}, {"q", qs}, {"w", fo.w}, {"rmax", fo.rmax}, {"points", fo.points}};
      fo.out.write([&](std::ostream& o) { io::write_table(o, header, rows); },
                   make_meta(std::string("filter ") + name, cfg, std::nullopt, start));
    });
  }

  // ---- simulate ----
  auto* simulate = app.add_subcommand("simulate", "seeded simulation of the regularization process");
  simulate->require_subcommand(1);
  StateOpts so;
  EcfOpts eo;
  GridOpts go;
  std::optional<std::uint64_t> seed;
  std::size_t n_events = 0;
  double eta = 1.0;
  std::string phase = "uniform", preset, disp_path;
  Output sim_out;

  auto* bhd = simulate->add_subcommand("bhd", "balanced homodyne data: index,phi,x");
  so.add(bhd);
  eo.add(bhd);
  bhd->add_option("-n,--events", n_events, "number of events");
  bhd->add_option("--seed", seed, "RNG seed (generated and recorded when omitted)");
  bhd->add_option("--eta", eta, "signal transmission in (0, 1]");
  bhd->add_option("--phase", phase, "uniform or a fixed phase in radians");
  bhd->add_option("--preset", preset, "fig4: xi=0.5, w=1.3, w*gamma_c=100, N=3e6")->check(CLI::IsMember({"fig4"}));
  bhd->add_option("--displacements", disp_path, "also write the field displacements (index,re_gamma,im_gamma)");
  sim_out.add(bhd, true);
  bhd->callback([&] {
    if (preset == "fig4") {
      preset_value(bhd, "--state", so.kind, std::string("squeezed"));
      preset_value(bhd, "--xi", so.xi, 0.5);
      preset_value(bhd, "--q", eo.q, std::string("inf"));
      preset_value(bhd, "--w", eo.w, 1.3);
      preset_value(bhd, "--wgc", eo.w_gamma_c, 100.0);
      preset_value(bhd, "--events", n_events, std::size_t{3000000});
    }
    if (n_events == 0) throw Refusal("empty data: the number of events must be positive");
    const std::uint64_t s = resolve_seed(seed);
    const auto mode = phase == "uniform" ? states::PhaseMode::uniform() : states::PhaseMode::fixed(std::stod(phase));
    const auto sig = states::sample_quadratures(so.build(), n_events, s, mode, threads);
    std::vector<ecf::DisplacementSample> disp(n_events, ecf::DisplacementSample{Complex{}});
    if (!eo.off) disp = ecf::sample_displacements(eo.build(), n_events, s, threads);
    const auto data = (eo.off && eta == 1.0) ? sig : process::apply_process_bhd(sig, disp, eta, s);
    json cfg{{"detection", "balanced"}, {"state", so.to_json()}, {"ecf", eo.to_json()}, {"events", n_events},
             {"eta", eta}, {"phase", phase}};
    if (!preset.empty()) cfg["preset"] = preset;
    sim_out.write([&](std::ostream& o) { io::write_quadratures(o, data); }, make_meta("simulate bhd", cfg, s, start));
    if (!disp_path.empty()) {
      Output d{disp_path};
      d.write([&](std::ostream& o) { io::write_displacements(o, disp); },
              make_meta("simulate bhd displacements", cfg, s, start));
    }
  });

  auto* uhd = simulate->add_subcommand("uhd", "unbalanced detection counts: alpha_re,alpha_im,n");
  so.add(uhd);
  eo.add(uhd);
  go.add(uhd);
  uhd->add_option("-n,--events", n_events, "events per grid point");
  uhd->add_option("--seed", seed, "RNG seed (generated and recorded when omitted)");
  sim_out.add(uhd, true);
  uhd->callback([&] {
    if (n_events == 0) throw Refusal("empty data: the number of events must be positive");
    const auto state = so.build();
    if (state.classify() != states::Classicality::classical) {
      throw Refusal("unbalanced simulation needs a classical signal, got " + state.describe());
    }
    const std::uint64_t s = resolve_seed(seed);
    const auto grid = go.build();
    std::vector<io::CountBlock> blocks(grid.size());
    const std::vector<ecf::DisplacementSample> none(n_events, ecf::DisplacementSample{Complex{}});
    std::optional<ecf::DisplacementSampler> sampler;
    if (!eo.off) sampler.emplace(eo.build());
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto ks = point_seed(s, k);
      const auto disp = sampler ? sampler->sample(n_events, ks, threads) : none;
      blocks[k] = {grid[k], process::apply_process_uhd(state, disp, grid[k], ks)};
    }
    const json cfg{{"detection", "unbalanced"}, {"state", so.to_json()}, {"ecf", eo.to_json()},
                   {"events_per_point", n_events}, {"grid", go.to_json()}};
    sim_out.write([&](std::ostream& o) { io::write_counts(o, blocks); }, make_meta("simulate uhd", cfg, s, start));
  });

  // ---- estimate ----
  auto* estimate = app.add_subcommand("estimate", "sample the regularized P function from data");
  estimate->require_subcommand(1);
  std::string data_path;
  std::optional<double> b_c, est_w;
  Output est_out;
  auto resolve_bc = [&]() {
    if (b_c) return *b_c;
    const auto w = est_w ? est_w : sidecar_width(data_path);
    if (!w) throw InvalidArgument("pass --bc, or --w for the default b_c = 2w");
    return 2.0 * *w;
  };
  auto est_meta = [&](const char* cmd, double bc, const sampling::QuasiprobEstimate& est) {
    json cfg{{"data", data_path}, {"grid", go.to_json()}, {"b_c", bc}, {"events", est.meta.n_events}};
    return make_meta(cmd, cfg, std::nullopt, start);
  };

  auto* bal = estimate->add_subcommand("balanced", "pattern-function estimator on index,phi,x data");
  bal->add_option("--data", data_path, "quadrature CSV")->required();
  bal->add_option("--bc", b_c, "post-detection cutoff (default 2w)");
  bal->add_option("--w", est_w, "filter width used to default b_c (else read from the data sidecar)");
  go.add(bal);
  est_out.add(bal, false);
  bal->callback([&] {
    auto in = io::open_input(data_path);
    const auto data = io::read_quadratures(in);
    if (data.empty()) throw Refusal("empty data: '" + data_path + "' has no events");
    const double bc = resolve_bc();
    const auto grid = go.build();
    const auto est = sampling::estimate_Pw_balanced(data, grid, bc, threads);
    est_out.write([&](std::ostream& o) { io::write_estimate(o, est); }, est_meta("estimate balanced", bc, est));
    print_significance(est);
  });

  auto* unb = estimate->add_subcommand("unbalanced", "Laguerre estimator on alpha_re,alpha_im,n data");
  unb->add_option("--data", data_path, "counts CSV")->required();
  unb->add_option("--bc", b_c, "post-detection cutoff (default 2w)");
  unb->add_option("--w", est_w, "filter width used to default b_c (else read from the data sidecar)");
  est_out.add(unb, false);
  unb->callback([&] {
    auto in = io::open_input(data_path);
    const auto blocks = io::read_counts(in);
    if (blocks.empty()) throw Refusal("empty data: '" + data_path + "' has no events");
    const double bc = resolve_bc();
    std::vector<Complex> grid;
    std::vector<std::vector<std::uint32_t>> counts;
    for (const auto& b : blocks) {
      grid.push_back(b.alpha);
      counts.push_back(b.counts);
    }
    const auto est = sampling::estimate_Pw_unbalanced(counts, grid, bc, threads);
    json cfg{{"data", data_path}, {"grid_points", grid.size()}, {"b_c", bc}, {"events", est.meta.n_events}};
    est_out.write([&](std::ostream& o) { io::write_estimate(o, est); },
                  make_meta("estimate unbalanced", cfg, std::nullopt, start));
    print_significance(est);
  });

  // ---- analyze ----
  auto* analyze = app.add_subcommand("analyze", "deterministic sweeps");
  analyze->require_subcommand(1);
  Output an_out;
  std::string an_q = "2.5";
  std::vector<std::string> q_list = {"2", "2.5", "4", "20"};
  double an_w = 4.0, xi = 0.5, w_max = 0.0;
  std::optional<double> v_in, an_bc;
  int steps = 100;
  std::vector<double> wgc_list;
  std::string an_preset;

  auto input_variance = [&] { return v_in ? *v_in : std::exp(-2.0 * xi); };

  auto* var = analyze->add_subcommand("variance", "minimal output quadrature variance");
  var->add_option("--q", an_q, "filter exponent (finite)");
  var->add_option("--w", an_w, "filter width, or sweep start with --wmax");
  var->add_option("--wmax", w_max, "sweep w from --w to --wmax");
  var->add_option("--steps", steps, "sweep points");
  var->add_option("--xi", xi, "squeezing of the input state (v_in = e^{-2 xi})");
  var->add_option("--v-in", v_in, "input minimal variance, overrides --xi");
  var->add_option("--preset", an_preset, "fig3: w from 0.5 to 8 for q = 2.5, 4, 20")->check(CLI::IsMember({"fig3"}));
  an_out.add(var, false);
  var->callback([&] {
    const double v = input_variance();
    std::vector<std::string> qs = {an_q};
    if (an_preset == "fig3") {
      qs = {"2.5", "4", "20"};
      preset_value(var, "--w", an_w, 0.5);
      preset_value(var, "--wmax", w_max, 8.0);
      preset_value(var, "--steps", steps, 151);
    }
    if (w_max == 0.0 && qs.size() == 1) {
      const double r = process::output_min_variance(v, filters::FilterSpec::parse(an_q, an_w));
      std::cout << io::format_double(r) << '\n';
      return;
    }
    if (!(w_max > an_w) || steps < 2) throw InvalidArgument("bad range: need --wmax > --w and --steps >= 2");
    std::vector<std::string> header = {"w"};
    for (const auto& q : qs) header.push_back("q" + q);
    std::vector<std::vector<double>> rows;
    for (double w : linspace(an_w, w_max, steps)) {
      std::vector<double> row = {w};
      for (const auto& q : qs) row.push_back(process::output_min_variance(v, filters::FilterSpec::parse(q, w)));
      rows.push_back(std::move(row));
    }
    const json cfg{{"q", qs}, {"w", {an_w, w_max}}, {"steps", steps}, {"v_in", v}};
    an_out.write([&](std::ostream& o) { io::write_table(o, header, rows); },
                 make_meta("analyze variance", cfg, std::nullopt, start));
  });

  auto* wcrit = analyze->add_subcommand("wcrit", "critical filter width per q");
  wcrit->add_option("--q", q_list, "filter exponents")->delimiter(',');
  wcrit->add_option("--xi", xi, "squeezing of the input state (v_in = e^{-2 xi})");
  wcrit->add_option("--v-in", v_in, "input minimal variance, overrides --xi");
  an_out.add(wcrit, false);
  wcrit->callback([&] {
    const double v = input_variance();
    std::vector<std::vector<double>> rows;
    for (const auto& q : q_list) {
      const double qv = std::stod(q);
      rows.push_back({qv, process::critical_width(qv, v)});
    }
    an_out.write([&](std::ostream& o) { io::write_table(o, {"q", "w_crit"}, rows); },
                 make_meta("analyze wcrit", json{{"q", q_list}, {"v_in", v}}, std::nullopt, start));
  });

  auto* eerr = analyze->add_subcommand("ecf-error", "probability mass lost by truncating the field");
  eerr->add_option("--wgc", wgc_list, "values of w * gamma_c")->delimiter(',')->required();
  eerr->add_option("--q", an_q, "filter exponent, a number >= 2 or inf");
  an_out.add(eerr, false);
  eerr->callback([&] {
    if (eerr->count("--q") == 0) an_q = "inf";
    const auto spec = filters::FilterSpec::parse(an_q, 1.0);
    std::vector<std::vector<double>> rows;
    for (double x : wgc_list) {
      rows.push_back({x, ecf::truncation_error(x, spec.exponent()), ecf::truncation_error_asymptote(x)});
    }
    if (wgc_list.size() == 1 && an_out.path.empty()) {
      std::cout << io::format_double(rows[0][1]) << '\n';
      return;
    }
    an_out.write([&](std::ostream& o) { io::write_table(o, {"w_gamma_c", "error", "asymptote"}, rows); },
                 make_meta("analyze ecf-error", json{{"q", an_q}, {"w_gamma_c", wgc_list}}, std::nullopt, start));
  });

  auto* syse = analyze->add_subcommand("syserr", "fake-negativity bound versus the field cutoff");
  double se_w = 1.3;
  syse->add_option("--w", se_w, "filter width");
  syse->add_option("--wgc", wgc_list, "values of w * gamma_c (default 25,50,100,200,400)")->delimiter(',');
  syse->add_option("--bc", an_bc, "post-detection cutoff (default 2w)");
  an_out.add(syse, false);
  syse->callback([&] {
    if (wgc_list.empty()) wgc_list = {25.0, 50.0, 100.0, 200.0, 400.0};
    const double bc = an_bc ? *an_bc : 2.0 * se_w;
    std::vector<std::vector<double>> rows;
    for (double x : wgc_list) {
      const auto rep = syserr::fake_negativity_bound(se_w, x / se_w, bc, 5.0, 200, threads);
      rows.push_back({rep.gamma_c, rep.bound});
    }
    const json cfg{{"w", se_w}, {"b_c", bc}, {"w_gamma_c", wgc_list}};
    an_out.write([&](std::ostream& o) { io::write_table(o, {"gamma_c", "bound"}, rows); },
                 make_meta("analyze syserr", cfg, std::nullopt, start));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Refusal& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return 3;
  } catch (const io::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
