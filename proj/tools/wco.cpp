// wco: command-line front end. Every command writes one JSON document
// (config echo, version, seed, timings, result); `spectrum scan` can also
// write the CSV table.
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>

#include "wco/errors.hpp"
#include "wco/json_io.hpp"

using namespace wco;
using json_io::json;

namespace {

enum Exit { kOk = 0, kValidation = 2, kComputation = 3, kUndecided = 4 };

struct RunConfig {
  std::string command;
  std::string blaschke, weight, csv, weight_out;
  int degree = 2;
  int max_period = 0;
  int depth = 10;
  int grid = 0;
  int grid_m = 0;
  int iters = 40;
  int k = 1;
  int nmax = 4;
  int n_trunc = 1;
  int layers = 4;
  int spot_depth = 8;
  double zero_tol = 1e-10;
  double synth_tol = 2e-3;
  double parabolic_band = 1e-9;
  double tol = 1e-9;
  std::vector<double> lambdas;
  std::vector<double> radii;
  std::uint64_t seed = 0;

  json echo() const {
    return {{"command", command},     {"blaschke", blaschke},   {"weight", weight},
            {"degree", degree},       {"max_period", max_period}, {"depth", depth},
            {"grid", grid},           {"grid_M", grid_m},       {"iters", iters},
            {"k", k},                 {"nmax", nmax},           {"n_trunc", n_trunc},
            {"layers", layers},       {"spot_depth", spot_depth}, {"zero_tol", zero_tol},
            {"synth_tol", synth_tol}, {"parabolic_band", parabolic_band},
            {"tol", tol},             {"lambdas", lambdas},     {"radii", radii},
            {"seed", seed}};
  }

  void validate() const {
    auto positive = [](double v, const char* name) {
      if (!(v > 0.0)) fail(ErrorCode::InvalidArgument, std::string(name) + " must be positive");
    };
    positive(zero_tol, "--zero-tol");
    positive(synth_tol, "--synth-tol");
    positive(parabolic_band, "--parabolic-band");
    positive(tol, "--tol");
    if (degree < 2) fail(ErrorCode::InvalidArgument, "--degree must be >= 2");
    if (depth < 1 || depth > 24) fail(ErrorCode::InvalidArgument, "--depth must be in [1, 24]");
    if (max_period < 0) fail(ErrorCode::InvalidArgument, "--max-period must be >= 0");
    if (grid_m != 0 && (grid_m < 4 || grid_m > 20))
      fail(ErrorCode::InvalidArgument, "--grid-m must be in [4, 20]");
    if (nmax < 1 || nmax > 8) fail(ErrorCode::InvalidArgument, "--nmax must be in [1, 8]");
  }
};

/// A path, or the JSON text itself when it starts with '{'.
json load(const std::string& source, const char* what) {
  if (source.empty()) fail(ErrorCode::InvalidArgument, std::string("missing --") + what);
  try {
    if (!source.empty() && source.front() == '{') return json::parse(source);
    std::ifstream in(source);
    if (!in) fail(ErrorCode::InvalidArgument, std::string("cannot open ") + what + " file " + source);
    return json::parse(in);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidArgument, std::string("bad ") + what + " JSON: " + e.what());
  }
}

// written next to the target then renamed, so readers never see half a file
void write_atomically(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) fail(ErrorCode::InvalidArgument, "cannot write " + path);
    out << text;
  }
  std::filesystem::rename(tmp, path);
}

WcoSpec spec_from(const RunConfig& c) {
  Weight w = json_io::weight_from_json(load(c.weight, "weight"));
  if (c.blaschke.empty()) return WcoSpec::model(c.degree, std::move(w));
  const auto b = json_io::blaschke_from_json(load(c.blaschke, "blaschke"));
  return WcoSpec::from_blaschke(b, std::move(w), c.grid > 0 ? c.grid : 4096, c.iters);
}

SpectrumOptions spectrum_options(const RunConfig& c) {
  SpectrumOptions o;
  o.max_period = c.max_period;
  o.depth = c.depth;
  o.zero_tol = c.zero_tol;
  o.lambda_rel_tol = c.synth_tol;
  return o;
}

BuildOptions build_options(const RunConfig& c) {
  BuildOptions o;
  o.grid_m = c.grid_m;
  o.spectrum = spectrum_options(c);
  return o;
}

std::vector<double> scan_radii(const RunConfig& c, const WcoSpec& spec) {
  if (!c.radii.empty()) return c.radii;
  // default: 20 evenly spaced radii up to a little past the upper estimate
  const auto est = spectral_radius(spec, c.max_period > 0 ? c.max_period : 8, 1 << 14);
  std::vector<double> r;
  for (int i = 1; i <= 20; ++i) r.push_back(1.1 * est.rho_grid_upper * i / 20.0);
  return r;
}

int run(const RunConfig& c, json& result) {
  c.validate();
  if (c.command == "classify") {
    ClassifyOptions o;
    o.parabolic_band = c.parabolic_band;
    result = json_io::to_json(classify(json_io::blaschke_from_json(load(c.blaschke, "blaschke")), o));
  } else if (c.command == "conjugacy") {
    const auto b = json_io::blaschke_from_json(load(c.blaschke, "blaschke"));
    result = json_io::to_json(shub_semiconjugacy(b, c.grid > 0 ? c.grid : 4096, c.iters));
  } else if (c.command == "spectral-radius") {
    const auto spec = spec_from(c);
    const int mp = c.max_period > 0 ? c.max_period : default_max_period(spec.degree);
    result = json_io::to_json(spectral_radius(spec, mp, c.grid > 0 ? c.grid : 1 << 16));
  } else if (c.command == "assemble") {
    result = json_io::to_json(assemble_spectrum(spec_from(c), spectrum_options(c)));
  } else if (c.command == "scan") {
    const auto spec = spec_from(c);
    const auto report = conjecture1_scan(spec, scan_radii(c, spec), c.depth, spectrum_options(c));
    result = json_io::to_json(report);
    if (!c.csv.empty()) write_atomically(c.csv, report.csv());
    const bool decisive = std::any_of(report.rows.begin(), report.rows.end(),
                                      [](const RadiusVerdict& v) { return v.verdict != Verdict::Undecided; });
    if (!decisive) return kUndecided;
  } else if (c.command == "verify-example6") {
    const auto rep = verify_example6(c.k, c.nmax, c.grid > 0 ? static_cast<std::size_t>(c.grid) : 200000, c.tol);
    result = json_io::to_json(rep);
    double slack = std::numeric_limits<double>::infinity();
    for (const auto& p : rep.products) slack = std::min(slack, p.bound - p.brute_max);
    result["min_slack"] = slack;
    result["verdict"] = rep.all_ok() ? "PASS" : "FAIL";
    if (!rep.all_ok()) return kComputation;
  } else if (c.command == "build-t6") {
    std::vector<cplx> lambdas(c.lambdas.begin(), c.lambdas.end());
    const auto built = theorem6_build_weight(c.degree, lambdas, c.max_period > 0 ? c.max_period : 6,
                                             build_options(c));
    result = json_io::to_json(built);
    if (!c.weight_out.empty()) write_atomically(c.weight_out, result["weight"].dump(2) + "\n");
  } else if (c.command == "build-t11") {
    const auto rep = theorem11_build_weight(c.degree, c.lambdas, c.n_trunc, c.layers,
                                            c.max_period > 0 ? c.max_period : 8, build_options(c));
    result = json_io::to_json(rep);
    if (!c.weight_out.empty()) write_atomically(c.weight_out, result["weight"].dump(2) + "\n");
  } else if (c.command == "annulus") {
    const auto b = json_io::blaschke_from_json(load(c.blaschke, "blaschke"));
    const auto w = json_io::weight_from_json(load(c.weight, "weight"));
    result = json_io::to_json(proposition1_annulus(b, w, c.grid > 0 ? c.grid : 4096, c.spot_depth));
  }
  return kOk;
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::PoleProximity:
    case ErrorCode::Unsupported:
      return kValidation;
    default:
      return kComputation;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra of weighted composition operators f -> w * f(B)"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;
  std::string output;
  app.add_option("-o,--output", output, "Write the JSON document here instead of stdout");
  app.add_option("--seed", c.seed, "Recorded in the output for reproducibility");

  auto weight_opt = [&](CLI::App* s) {
    s->add_option("--weight", c.weight, "Weight JSON file or literal")->required();
    s->add_option("--degree", c.degree, "Model degree d of z^d");
    s->add_option("--blaschke", c.blaschke, "Blaschke product JSON; transported to z^d");
    s->add_option("--max-period", c.max_period, "Largest orbit period (0: default)");
    s->add_option("--zero-tol", c.zero_tol);
  };

  auto* classify_cmd = app.add_subcommand("classify", "Wolff-Denjoy point and dynamical kind");
  classify_cmd->add_option("--blaschke", c.blaschke)->required();
  classify_cmd->add_option("--parabolic-band", c.parabolic_band);

  auto* conj = app.add_subcommand("conjugacy", "Shub semiconjugacy table onto z^d");
  conj->add_option("--blaschke", c.blaschke)->required();
  conj->add_option("--grid", c.grid, "Grid size N (default 4096)");
  conj->add_option("--iters", c.iters);

  auto* sr = app.add_subcommand("spectral-radius", "Orbit lower bound and grid estimate of rho");
  weight_opt(sr);
  sr->add_option("--grid", c.grid, "Grid for the upper estimate (default 2^16)");

  auto* spectrum = app.add_subcommand("spectrum", "Spectrum assembly and radius scans");
  spectrum->require_subcommand(1);
  spectrum->fallthrough();
  auto* assemble = spectrum->add_subcommand("assemble", "Certified spectrum description");
  weight_opt(assemble);
  assemble->add_option("--depth", c.depth);
  assemble->add_option("--synth-tol", c.synth_tol, "Relative tolerance on orbit means");
  auto* scan = spectrum->add_subcommand("scan", "ACCEPT / REJECT / UNDECIDED per radius");
  weight_opt(scan);
  scan->add_option("--depth", c.depth);
  scan->add_option("--radii", c.radii)->delimiter(',');
  scan->add_option("--csv", c.csv, "Also write the CSV table here");
  scan->add_option("--synth-tol", c.synth_tol);

  auto* ex6 = app.add_subcommand("verify-example6", "Brute force of the sine-product bound");
  ex6->add_option("--k", c.k)->required();
  ex6->add_option("--nmax", c.nmax);
  ex6->add_option("--grid", c.grid, "Mesh size (default 200000)");
  ex6->add_option("--tol", c.tol);

  auto build_opts = [&](CLI::App* s) {
    s->add_option("--degree", c.degree);
    s->add_option("--lambdas", c.lambdas)->delimiter(',')->required();
    s->add_option("--max-period", c.max_period);
    s->add_option("--grid-m", c.grid_m, "log2 of the synthesis grid");
    s->add_option("--depth", c.depth);
    s->add_option("--weight-out", c.weight_out, "Write the synthesized weight JSON here");
  };
  auto* t6 = app.add_subcommand("build-t6", "Weight with prescribed circles, increasing lambdas");
  build_opts(t6);
  auto* t11 = app.add_subcommand("build-t11", "Layered weight, decreasing lambdas");
  build_opts(t11);
  t11->add_option("--ntrunc", c.n_trunc);
  t11->add_option("--layers", c.layers);

  auto* ann = app.add_subcommand("annulus", "Annulus of spectrum for boundary attractors");
  ann->add_option("--blaschke", c.blaschke)->required();
  ann->add_option("--weight", c.weight)->required();
  ann->add_option("--grid", c.grid);
  ann->add_option("--spot-depth", c.spot_depth);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }
  for (auto* s : app.get_subcommands()) {
    c.command = s->get_name();
    for (auto* inner : s->get_subcommands()) c.command = inner->get_name();
  }

  json doc = {{"version", WCO_VERSION}, {"config", c.echo()}, {"seed", c.seed}};
  json result;
  int code = kOk;
  const auto start = std::chrono::steady_clock::now();
  try {
    code = run(c, result);
    doc["result"] = result;
  } catch (const Error& e) {
    code = exit_code_for(e.code());
    doc["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    code = kComputation;
    doc["error"] = {{"code", "Internal"}, {"message", e.what()}};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  doc["timings"] = {{"seconds", secs}};
  doc["exit_code"] = code;

  const std::string text = doc.dump(2) + "\n";
  try {
    if (output.empty()) std::cout << text;
    else write_atomically(output, text);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  }
  return code;
}
