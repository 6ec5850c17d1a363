#include "csmri/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace csmri {

namespace {

std::string trim(std::string const &s)
{
  auto const b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) { return {}; }
  auto const e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string const &key, std::string const &v)
{
  double out = 0.0;
  auto const [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) { throw ParameterError("bad number for " + key + ": '" + v + "'"); }
  return out;
}

int to_int(std::string const &key, std::string const &v)
{
  int out = 0;
  auto const [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) { throw ParameterError("bad integer for " + key + ": '" + v + "'"); }
  return out;
}

bool to_bool(std::string const &key, std::string const &v)
{
  if (v == "true" || v == "1" || v == "yes") { return true; }
  if (v == "false" || v == "0" || v == "no") { return false; }
  throw ParameterError("bad boolean for " + key + ": '" + v + "'");
}

std::string fmt(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

RicianConfig Settings::rician() const
{
  RicianConfig r;
  r.inner = solver;
  r.inner.max_iters = inner_iters;
  r.lambda1 = lambda1;
  r.lambda2 = lambda2;
  r.rho1 = rho1;
  r.rho2 = rho2;
  r.outer_iters = outer_iters;
  r.stop_tol = solver.stop_tol;
  r.noise = noise_mode;
  r.levels = denoiser_options.levels;
  return r;
}

KeyValues parse_key_values(std::istream &is)
{
  KeyValues out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (auto const hash = line.find('#'); hash != std::string::npos) { line.erase(hash); }
    line = trim(line);
    if (line.empty()) { continue; }
    auto const eq = line.find('=');
    if (eq == std::string::npos) { throw ParameterError("config line " + std::to_string(lineno) + ": expected key=value"); }
    std::string const key = trim(line.substr(0, eq));
    std::string const value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw ParameterError("config line " + std::to_string(lineno) + ": empty key or value");
    }
    if (!out.emplace(key, value).second) { throw ParameterError("config key '" + key + "' repeated"); }
  }
  return out;
}

KeyValues read_config_file(std::filesystem::path const &path)
{
  std::ifstream is(path);
  if (!is) { throw ParameterError("cannot open config '" + path.string() + "'"); }
  return parse_key_values(is);
}

void apply_settings(KeyValues const &values, Settings &s)
{
  for (auto const &[key, v] : values) {
    if (key == "lambda") { s.solver.lambda = to_double(key, v); }
    else if (key == "p") { s.solver.p = to_double(key, v); }
    else if (key == "rho") { s.solver.rho = to_double(key, v); }
    else if (key == "eta1") { s.solver.eta1 = to_double(key, v); }
    else if (key == "eta2") { s.solver.eta2 = to_double(key, v); }
    else if (key == "lipschitz") { s.solver.lipschitz = to_double(key, v); }
    else if (key == "eps_mode") { s.solver.condition = parse_error_condition(v); }
    else if (key == "epsilon") {
      if (v == "auto") { s.solver.epsilon.reset(); }
      else { s.solver.epsilon = to_double(key, v); }
    }
    else if (key == "eps_fraction") { s.solver.eps_fraction = to_double(key, v); }
    else if (key == "max_iters") { s.solver.max_iters = to_int(key, v); }
    else if (key == "stop_tol") { s.solver.stop_tol = to_double(key, v); }
    else if (key == "denoiser") { s.denoiser = v; }
    else if (key == "noise_hi") { s.solver.noise_hi = to_double(key, v); }
    else if (key == "noise_lo") { s.solver.noise_lo = to_double(key, v); }
    else if (key == "unsafe_steps") { s.solver.unsafe_steps = to_bool(key, v); }
    else if (key == "levels") { s.denoiser_options.levels = to_int(key, v); }
    else if (key == "gaussian_ppu") { s.denoiser_options.gaussian_pixels_per_unit = to_double(key, v); }
    else if (key == "shrink_factor") { s.denoiser_options.shrink_factor = to_double(key, v); }
    else if (key == "pi_mode") { s.pi_mode = parse_pi_mode(v); }
    else if (key == "lambda1") { s.lambda1 = to_double(key, v); }
    else if (key == "lambda2") { s.lambda2 = to_double(key, v); }
    else if (key == "rho1") { s.rho1 = to_double(key, v); }
    else if (key == "rho2") { s.rho2 = to_double(key, v); }
    else if (key == "outer_iters") { s.outer_iters = to_int(key, v); }
    else if (key == "inner_iters") { s.inner_iters = to_int(key, v); }
    else if (key == "noise_mode") { s.noise_mode = parse_noise_mode(v); }
    else { throw ParameterError("unknown config key '" + key + "'"); }
  }
}

KeyValues settings_to_values(Settings const &s)
{
  KeyValues out;
  out["lambda"] = fmt(s.solver.lambda);
  out["p"] = fmt(s.solver.p);
  out["rho"] = fmt(s.solver.rho);
  out["eta1"] = fmt(s.solver.eta1);
  out["eta2"] = fmt(s.solver.eta2);
  out["lipschitz"] = fmt(s.solver.lipschitz);
  out["eps_mode"] = to_string(s.solver.condition);
  out["epsilon"] = s.solver.epsilon ? fmt(*s.solver.epsilon) : "auto";
  out["eps_fraction"] = fmt(s.solver.eps_fraction);
  out["max_iters"] = std::to_string(s.solver.max_iters);
  out["stop_tol"] = fmt(s.solver.stop_tol);
  out["denoiser"] = s.denoiser;
  out["noise_hi"] = fmt(s.solver.noise_hi);
  out["noise_lo"] = fmt(s.solver.noise_lo);
  out["unsafe_steps"] = s.solver.unsafe_steps ? "true" : "false";
  out["levels"] = std::to_string(s.denoiser_options.levels);
  out["gaussian_ppu"] = fmt(s.denoiser_options.gaussian_pixels_per_unit);
  out["shrink_factor"] = fmt(s.denoiser_options.shrink_factor);
  out["pi_mode"] = to_string(s.pi_mode);
  out["lambda1"] = fmt(s.lambda1);
  out["lambda2"] = fmt(s.lambda2);
  out["rho1"] = fmt(s.rho1);
  out["rho2"] = fmt(s.rho2);
  out["outer_iters"] = std::to_string(s.outer_iters);
  out["inner_iters"] = std::to_string(s.inner_iters);
  out["noise_mode"] = to_string(s.noise_mode);
  return out;
}

} // namespace csmri
