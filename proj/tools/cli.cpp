#include "cli.hpp"

#include "csmri/config.hpp"
#include "csmri/denoisers.hpp"
#include "csmri/fft.hpp"
#include "csmri/io.hpp"
#include "csmri/mask.hpp"
#include "csmri/metrics.hpp"
#include "csmri/parallel_imaging.hpp"
#include "csmri/problem.hpp"
#include "csmri/rician.hpp"
#include "csmri/solver.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

namespace csmri::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Flag name -> config key. Every reconstruction command accepts all of them.
constexpr std::array<std::pair<char const *, char const *>, 26> setting_flags{{
  {"--lambda", "lambda"},
  {"--p", "p"},
  {"--rho", "rho"},
  {"--eta1", "eta1"},
  {"--eta2", "eta2"},
  {"--lipschitz", "lipschitz"},
  {"--eps-mode", "eps_mode"},
  {"--epsilon", "epsilon"},
  {"--eps-fraction", "eps_fraction"},
  {"--max-iters", "max_iters"},
  {"--stop-tol", "stop_tol"},
  {"--denoiser", "denoiser"},
  {"--noise-hi", "noise_hi"},
  {"--noise-lo", "noise_lo"},
  {"--unsafe-steps", "unsafe_steps"},
  {"--levels", "levels"},
  {"--gaussian-ppu", "gaussian_ppu"},
  {"--shrink-factor", "shrink_factor"},
  {"--pi-mode", "pi_mode"},
  {"--lambda1", "lambda1"},
  {"--lambda2", "lambda2"},
  {"--rho1", "rho1"},
  {"--rho2", "rho2"},
  {"--outer-iters", "outer_iters"},
  {"--inner-iters", "inner_iters"},
  {"--noise-mode", "noise_mode"},
}};

struct Global
{
  std::uint64_t seed = 1;
  std::string config;
  std::string out_dir = ".";
  std::string trace;
};

/// What a command did, for the manifest.
struct Record
{
  std::string stem;
  std::vector<fs::path> inputs;
  std::vector<fs::path> outputs;
  json parameters = json::object();
};

class Context
{
public:
  Context(Global const &global, std::ostream &out)
    : global_(global)
    , out_(out)
  {
  }

  std::ostream &out() const { return out_; }
  Global const &global() const { return global_; }

  fs::path output(Record &rec, std::string const &suffix) const
  {
    fs::path const dir(global_.out_dir);
    fs::create_directories(dir);
    fs::path p = dir / (rec.stem + suffix);
    rec.outputs.push_back(p);
    return p;
  }

private:
  Global const &global_;
  std::ostream &out_;
};

std::map<std::string, std::optional<std::string>> setting_storage()
{
  std::map<std::string, std::optional<std::string>> storage;
  for (auto const &[flag, key] : setting_flags) { storage[key]; }
  return storage;
}

void bind_setting_flags(CLI::App *cmd, std::map<std::string, std::optional<std::string>> &storage)
{
  for (auto const &[flag, key] : setting_flags) {
    cmd->add_option(flag, storage.at(key), std::string("overrides config key ") + key);
  }
}

Settings resolve_settings(Global const &global, std::map<std::string, std::optional<std::string>> const &flags)
{
  Settings s;
  s.denoiser_options.seed = global.seed;
  if (!global.config.empty()) { apply_settings(read_config_file(global.config), s); }
  KeyValues overrides;
  for (auto const &[key, value] : flags) {
    if (value) { overrides[key] = *value; }
  }
  apply_settings(overrides, s);
  return s;
}

json settings_json(Settings const &s)
{
  json j = json::object();
  for (auto const &[k, v] : settings_to_values(s)) { j[k] = v; }
  return j;
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace(fs::path const &path, IterateTrace const &trace)
{
  std::ofstream os(path);
  if (!os) { throw FormatError("cannot open '" + path.string() + "' for writing"); }
  trace.write_csv(os);
}

// Rician traces: one file per subproblem, the usual columns prefixed by the outer index.
void write_outer_traces(fs::path const &path, std::vector<RicianOuterRecord> const &outer, bool z_side)
{
  std::ofstream os(path);
  if (!os) { throw FormatError("cannot open '" + path.string() + "' for writing"); }
  bool header = true;
  for (auto const &rec : outer) {
    std::ostringstream body;
    (z_side ? rec.z_trace : rec.x_trace).write_csv(body);
    std::istringstream lines(body.str());
    std::string line;
    std::getline(lines, line);
    if (header) {
      os << "outer," << line << '\n';
      header = false;
    }
    while (std::getline(lines, line)) { os << rec.outer << ',' << line << '\n'; }
  }
}

ComplexImage load_image(Record &rec, std::string const &path)
{
  rec.inputs.emplace_back(path);
  return read_cimg(fs::path(path));
}

SamplingMask load_mask(Record &rec, std::string const &path)
{
  rec.inputs.emplace_back(path);
  return read_mask(fs::path(path));
}

std::vector<ComplexImage> load_cpim(Record &rec, std::string const &path)
{
  rec.inputs.emplace_back(path);
  return read_cpim(fs::path(path));
}

void write_manifest(Context const &ctx, Record &rec, std::string const &command, std::vector<std::string> const &args,
                    double seconds, int code)
{
  json j;
  j["version"] = version_string;
  j["command"] = command;
  j["argv"] = args;
  j["cwd"] = fs::current_path().string();
  j["seed"] = ctx.global().seed;
  j["config"] = ctx.global().config;
  j["parameters"] = rec.parameters;
  json inputs = json::array();
  for (auto const &p : rec.inputs) { inputs.push_back(p.string()); }
  json outputs = json::array();
  for (auto const &p : rec.outputs) { outputs.push_back(p.string()); }
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  j["duration_seconds"] = seconds;
  j["exit_code"] = code;
  fs::path const path = fs::path(ctx.global().out_dir) / (rec.stem + ".manifest.json");
  std::ofstream os(path);
  if (!os) { throw FormatError("cannot write manifest '" + path.string() + "'"); }
  os << j.dump(2) << '\n';
}

void report_run(std::ostream &out, IterateTrace const &trace, ComplexImage const *truth, ComplexImage const &image)
{
  out << "iterations " << trace.records.size() << ", stop " << trace.stop_reason << ", Phi " << fmt(trace.phi_initial)
      << " -> " << fmt(trace.phi_final()) << ", accepted " << trace.accepted_count() << '\n';
  if (truth) {
    MetricReport const m = evaluate(*truth, image);
    out << "psnr " << fmt(m.psnr) << " rlne " << fmt(m.rlne) << " ssim " << fmt(m.ssim) << '\n';
  }
}

std::optional<ComplexImage> load_truth(Record &rec, std::string const &path)
{
  if (path.empty()) { return std::nullopt; }
  return load_image(rec, path);
}

fs::path trace_path(Context const &ctx, Record &rec)
{
  if (ctx.global().trace.empty()) { return ctx.output(rec, ".trace.csv"); }
  fs::path p(ctx.global().trace);
  rec.outputs.push_back(p);
  return p;
}

} // namespace

int run(std::vector<std::string> const &args, std::ostream &out, std::ostream &err)
{
  CLI::App app{"Compressed-sensing MRI reconstruction with a safeguarded plug-in denoiser", "csmri"};
  app.require_subcommand(1);
  app.set_version_flag("--version", version_string);

  Global global;
  app.add_option("--seed", global.seed, "seed for masks, noise, coil maps and the adversarial plug-in");
  app.add_option("--config", global.config, "key=value parameter file (flags override it)");
  app.add_option("--out-dir", global.out_dir, "directory for outputs")->capture_default_str();
  app.add_option("--trace", global.trace, "trace CSV path for reconstruct commands");

  std::string stem;

  // mask
  auto *mask_cmd = app.add_subcommand("mask", "generate a k-space sampling mask");
  std::string mask_kind;
  std::size_t mask_rows = 256, mask_cols = 256;
  double mask_ratio = 0.3;
  mask_cmd->add_option("--kind", mask_kind, "cartesian | radial | gaussian | full")->required();
  mask_cmd->add_option("--rows", mask_rows)->capture_default_str();
  mask_cmd->add_option("--cols", mask_cols)->capture_default_str();
  auto *ratio_opt = mask_cmd->add_option("--ratio", mask_ratio, "kept fraction (full: 1)")->capture_default_str();
  mask_cmd->add_option("--out", stem, "output name")->required();

  // phantom
  auto *phantom_cmd = app.add_subcommand("phantom", "write a Shepp-Logan phantom");
  std::size_t phantom_size = 256;
  phantom_cmd->add_option("--size", phantom_size)->capture_default_str();
  phantom_cmd->add_option("--out", stem, "output name")->required();

  // simulate
  auto *sim_cmd = app.add_subcommand("simulate", "simulate undersampled k-space from an image");
  std::string sim_image, sim_mask;
  double sim_sigma = 0.0;
  std::size_t sim_coils = 0;
  int sim_levels = default_wavelet_levels;
  sim_cmd->add_option("--image", sim_image, "ground truth CIMG")->required();
  sim_cmd->add_option("--mask", sim_mask, "CMSK mask")->required();
  sim_cmd->add_option("--sigma", sim_sigma, "Rician noise level (intensity units)")->capture_default_str();
  sim_cmd->add_option("--coils", sim_coils, "simulate this many coils with synthetic maps (0: single coil)");
  sim_cmd->add_option("--levels", sim_levels)->capture_default_str();
  sim_cmd->add_option("--out", stem, "output name")->required();

  // reconstruct
  auto *rec_cmd = app.add_subcommand("reconstruct", "single-coil reconstruction");
  std::string rec_y, rec_mask, rec_truth;
  rec_cmd->add_option("--y", rec_y, "zero-filled k-space CIMG")->required();
  rec_cmd->add_option("--mask", rec_mask, "CMSK mask")->required();
  rec_cmd->add_option("--truth", rec_truth, "ground truth CIMG for PSNR/RLNE columns");
  rec_cmd->add_option("--out", stem, "output name")->required();
  auto rec_flags = setting_storage();
  bind_setting_flags(rec_cmd, rec_flags);

  // reconstruct-pi
  auto *pi_cmd = app.add_subcommand("reconstruct-pi", "multi-coil reconstruction");
  std::string pi_y, pi_maps, pi_mask, pi_truth;
  pi_cmd->add_option("--y", pi_y, "per-coil k-space CPIM")->required();
  pi_cmd->add_option("--maps", pi_maps, "sensitivity maps CPIM")->required();
  pi_cmd->add_option("--mask", pi_mask, "CMSK mask")->required();
  pi_cmd->add_option("--truth", pi_truth, "ground truth CIMG");
  pi_cmd->add_option("--out", stem, "output name")->required();
  auto pi_flags = setting_storage();
  bind_setting_flags(pi_cmd, pi_flags);

  // reconstruct-rician
  auto *ric_cmd = app.add_subcommand("reconstruct-rician", "reconstruction under Rician noise");
  std::string ric_y, ric_mask, ric_truth, ric_n1, ric_n2;
  ric_cmd->add_option("--y", ric_y, "zero-filled k-space CIMG of the noisy magnitude")->required();
  ric_cmd->add_option("--mask", ric_mask, "CMSK mask")->required();
  ric_cmd->add_option("--n1", ric_n1, "noise field n1 CIMG (oracle mode)");
  ric_cmd->add_option("--n2", ric_n2, "noise field n2 CIMG (oracle mode)");
  ric_cmd->add_option("--truth", ric_truth, "ground truth CIMG");
  ric_cmd->add_option("--out", stem, "output name")->required();
  auto ric_flags = setting_storage();
  bind_setting_flags(ric_cmd, ric_flags);

  // metrics
  auto *met_cmd = app.add_subcommand("metrics", "print psnr,rlne,ssim of test against ref");
  std::string met_ref, met_test;
  bool met_header = false;
  met_cmd->add_option("--ref", met_ref, "reference CIMG")->required();
  met_cmd->add_option("--test", met_test, "test CIMG")->required();
  met_cmd->add_flag("--header", met_header, "print the column header first");
  met_cmd->add_option("--out", stem, "also write the line to <out>.csv");

  // rerun
  auto *rerun_cmd = app.add_subcommand("rerun", "repeat a command from its manifest");
  std::string manifest_path;
  rerun_cmd->add_option("--manifest", manifest_path, "manifest JSON")->required();

  std::vector<std::string> argv_store{"csmri"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char *> argv;
  for (auto &a : argv_store) { argv.push_back(a.data()); }

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (CLI::CallForHelp const &e) {
    return app.exit(e, out, err);
  } catch (CLI::CallForAllHelp const &e) {
    return app.exit(e, out, err);
  } catch (CLI::CallForVersion const &e) {
    return app.exit(e, out, err);
  } catch (CLI::ParseError const &e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  auto const started = std::chrono::steady_clock::now();
  Context const ctx(global, out);
  Record rec;
  rec.stem = stem;
  std::string command;
  int code = exit_ok;

  try {
    if (rerun_cmd->parsed()) {
      std::ifstream is(manifest_path);
      if (!is) { throw FormatError("cannot open manifest '" + manifest_path + "'"); }
      json const j = json::parse(is);
      auto const saved = j.at("argv").get<std::vector<std::string>>();
      if (!saved.empty() && saved.front() == "rerun") { throw ParameterError("manifest records a rerun"); }
      fs::path const previous = fs::current_path();
      fs::current_path(j.at("cwd").get<std::string>());
      int const rc = run(saved, out, err);
      fs::current_path(previous);
      return rc;
    }

    if (mask_cmd->parsed()) {
      command = "mask";
      if (mask_kind == "full" && ratio_opt->count() == 0) { mask_ratio = 1.0; }
      SamplingMask const m = make_mask(parse_mask_kind(mask_kind), mask_rows, mask_cols, mask_ratio, global.seed);
      write_mask(ctx.output(rec, ".cmsk"), m);
      write_pgm(ctx.output(rec, ".pgm"), m);
      rec.parameters = {{"kind", mask_kind}, {"rows", mask_rows}, {"cols", mask_cols}, {"ratio", mask_ratio}};
      out << "kept " << m.count() << " of " << m.keep.size() << " samples (ratio " << fmt(m.ratio) << ")\n";
    } else if (phantom_cmd->parsed()) {
      command = "phantom";
      ComplexImage const x = shepp_logan(phantom_size, phantom_size);
      write_cimg(ctx.output(rec, ".cimg"), x);
      write_pgm(ctx.output(rec, ".pgm"), x);
      rec.parameters = {{"size", phantom_size}};
    } else if (sim_cmd->parsed()) {
      command = "simulate";
      ComplexImage const x = load_image(rec, sim_image);
      SamplingMask const m = load_mask(rec, sim_mask);
      require_same_shape(x, m, "simulate");
      rec.parameters = {{"sigma", sim_sigma}, {"coils", sim_coils}, {"levels", sim_levels}};
      if (sim_sigma > 0.0 && sim_coils > 0) { throw ParameterError("--sigma and --coils cannot be combined"); }
      if (sim_coils > 0) {
        SensitivityMaps const maps = synth_sensitivity_maps(x.rows, x.cols, sim_coils, global.seed);
        PIProblem const pb = simulate_pi_problem(x, m, maps, sim_levels);
        write_cpim(ctx.output(rec, "_y.cpim"), pb.y);
        write_cpim(ctx.output(rec, "_maps.cpim"), maps.maps);
        ComplexImage const sos = zero_filled_sos(pb);
        write_pgm(ctx.output(rec, "_zf.pgm"), sos);
        out << "zero-filled SoS psnr " << fmt(psnr(x, sos)) << '\n';
      } else if (sim_sigma > 0.0) {
        RicianSample const s = rician_forward(x, sim_sigma, global.seed);
        ComplexImage const y = apply_mask(fft2_centered(s.z), m);
        write_cimg(ctx.output(rec, "_y.cimg"), y);
        write_cimg(ctx.output(rec, "_z.cimg"), s.z);
        write_cimg(ctx.output(rec, "_n1.cimg"), s.n1);
        write_cimg(ctx.output(rec, "_n2.cimg"), s.n2);
        ComplexImage const zf = rician_baseline(y);
        write_pgm(ctx.output(rec, "_zf.pgm"), zf);
        out << "zero-filled magnitude psnr " << fmt(psnr(x, zf)) << '\n';
      } else {
        Problem const pb = simulate_problem(x, m, sim_levels);
        write_cimg(ctx.output(rec, "_y.cimg"), pb.y);
        ComplexImage const zf = zero_filled_image(pb);
        write_cimg(ctx.output(rec, "_zf.cimg"), zf);
        write_pgm(ctx.output(rec, "_zf.pgm"), zf);
        out << "zero-filled psnr " << fmt(psnr(x, zf)) << '\n';
      }
    } else if (rec_cmd->parsed()) {
      command = "reconstruct";
      Settings const s = resolve_settings(global, rec_flags);
      rec.parameters = settings_json(s);
      Problem pb{load_image(rec, rec_y), load_mask(rec, rec_mask), s.denoiser_options.levels};
      std::optional<ComplexImage> const truth = load_truth(rec, rec_truth);
      auto denoiser = make_denoiser(s.denoiser, s.denoiser_options);
      RunOptions opts;
      if (truth) { opts.ground_truth = &*truth; }
      Reconstruction const r = reconstruct(pb, s.solver, *denoiser, opts);
      write_cimg(ctx.output(rec, ".cimg"), r.image);
      write_pgm(ctx.output(rec, ".pgm"), r.image);
      write_trace(trace_path(ctx, rec), r.trace);
      report_run(out, r.trace, truth ? &*truth : nullptr, r.image);
      code = r.trace.converged ? exit_ok : exit_not_converged;
    } else if (pi_cmd->parsed()) {
      command = "reconstruct-pi";
      Settings const s = resolve_settings(global, pi_flags);
      rec.parameters = settings_json(s);
      PIProblem pb;
      pb.y = load_cpim(rec, pi_y);
      pb.maps.maps = load_cpim(rec, pi_maps);
      pb.mask = load_mask(rec, pi_mask);
      pb.levels = s.denoiser_options.levels;
      std::optional<ComplexImage> const truth = load_truth(rec, pi_truth);
      auto denoiser = make_denoiser(s.denoiser, s.denoiser_options);
      RunOptions opts;
      if (truth) { opts.ground_truth = &*truth; }
      Reconstruction const r = pi_reconstruct(pb, s.solver, *denoiser, opts, s.pi_mode);
      write_cimg(ctx.output(rec, ".cimg"), r.image);
      write_pgm(ctx.output(rec, ".pgm"), r.image);
      write_trace(trace_path(ctx, rec), r.trace);
      report_run(out, r.trace, truth ? &*truth : nullptr, r.image);
      code = r.trace.converged ? exit_ok : exit_not_converged;
    } else if (ric_cmd->parsed()) {
      command = "reconstruct-rician";
      Settings const s = resolve_settings(global, ric_flags);
      rec.parameters = settings_json(s);
      ComplexImage const y = load_image(rec, ric_y);
      SamplingMask const m = load_mask(rec, ric_mask);
      std::optional<RicianSample> noise;
      if (s.noise_mode == NoiseMode::oracle) {
        if (ric_n1.empty() || ric_n2.empty()) { throw ParameterError("oracle noise mode needs --n1 and --n2"); }
        noise = RicianSample{ComplexImage(), load_image(rec, ric_n1), load_image(rec, ric_n2)};
      }
      std::optional<ComplexImage> const truth = load_truth(rec, ric_truth);
      auto denoiser = make_denoiser(s.denoiser, s.denoiser_options);
      RicianResult const r = rician_reconstruct(y, m, s.rician(), *denoiser, noise ? &*noise : nullptr);
      write_cimg(ctx.output(rec, ".cimg"), r.x);
      write_pgm(ctx.output(rec, ".pgm"), r.x);
      write_cimg(ctx.output(rec, "_z.cimg"), r.z);
      write_outer_traces(ctx.output(rec, ".z.trace.csv"), r.outer, true);
      write_outer_traces(ctx.output(rec, ".x.trace.csv"), r.outer, false);
      {
        std::ofstream os(ctx.output(rec, ".outer.csv"));
        os << "outer,rel_change,consistency\n";
        for (auto const &o : r.outer) { os << o.outer << ',' << fmt(o.rel_change) << ',' << fmt(o.consistency) << '\n'; }
      }
      out << "outer iterations " << r.outer.size() << (r.converged ? ", converged" : ", not converged") << '\n';
      if (truth) {
        out << "psnr " << fmt(psnr(*truth, r.x)) << " baseline " << fmt(psnr(*truth, rician_baseline(y))) << '\n';
      }
      code = r.converged ? exit_ok : exit_not_converged;
    } else if (met_cmd->parsed()) {
      command = "metrics";
      ComplexImage const ref = load_image(rec, met_ref);
      ComplexImage const test = load_image(rec, met_test);
      MetricReport const m = evaluate(ref, test);
      std::string const line = fmt(m.psnr) + "," + fmt(m.rlne) + "," + fmt(m.ssim);
      if (met_header) { out << "psnr,rlne,ssim\n"; }
      out << line << '\n';
      if (stem.empty()) { return exit_ok; }
      std::ofstream os(ctx.output(rec, ".csv"));
      os << "psnr,rlne,ssim\n" << line << '\n';
    }

    double const seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_manifest(ctx, rec, command, args, seconds, code);
    return code;
  } catch (std::exception const &e) {
    err << "error: " << e.what() << '\n';
    return exit_error;
  }
}

} // namespace csmri::cli
