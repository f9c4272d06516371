#include "gradflow/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

#include "gradflow/io.hpp"

namespace gradflow {

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Solve: return "solve";
    case Command::Tw: return "tw";
    case Command::Acceptance: return "acceptance";
  }
  return "unknown";
}

std::string_view to_string(Preset preset) {
  switch (preset) {
    case Preset::Bump: return "bump";
    case Preset::ExplicitWave: return "explicit_wave";
    case Preset::LemmaSubsolution: return "lemma_subsolution";
    case Preset::Sandpile: return "sandpile_W";
    case Preset::Zero: return "zero";
  }
  return "unknown";
}

namespace {

[[noreturn]] void config_error(const std::string& key, const std::string& what) {
  throw Error(ErrorKind::ConfigError, key + ": " + what);
}

std::string trim(std::string s) {
  const auto not_space = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char ch) { return std::tolower(ch); });
  return s;
}

double to_real(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(x)) {
    config_error(key, "expected a finite number, got '" + text + "'");
  }
  return x;
}

long long to_integer(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc() || ptr != t.data() + t.size()) {
    config_error(key, "expected an integer, got '" + text + "'");
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  config_error(key, "expected a boolean, got '" + text + "'");
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) parts.push_back(item);
  }
  return parts;
}

EquationForm to_form(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "original" || t == "u") return EquationForm::Original;
  if (t == "rescaled_v" || t == "rescaledv" || t == "v") return EquationForm::RescaledV;
  if (t == "rescaled_w" || t == "rescaledw" || t == "w") return EquationForm::RescaledW;
  config_error("form", "unknown equation form '" + text + "'");
}

Command to_command(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "solve") return Command::Solve;
  if (t == "tw") return Command::Tw;
  if (t == "acceptance") return Command::Acceptance;
  config_error("command", "unknown command '" + text + "'");
}

Preset to_preset(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "bump") return Preset::Bump;
  if (t == "explicit_wave" || t == "wave") return Preset::ExplicitWave;
  if (t == "lemma_subsolution") return Preset::LemmaSubsolution;
  if (t == "sandpile_w" || t == "sandpile") return Preset::Sandpile;
  if (t == "zero") return Preset::Zero;
  config_error("preset", "unknown preset '" + text + "'");
}

GridKind to_grid(const std::string& text) {
  const std::string t = lower(trim(text));
  if (t == "radial") return GridKind::Radial;
  if (t == "line") return GridKind::Line;
  config_error("grid", "unknown grid kind '" + text + "'");
}

void validate(const RunConfig& c, const KeyValues& given) {
  if (!(c.p > 2)) config_error("p", "p must exceed 2");
  if (c.N < 1) config_error("N", "N must be at least 1");
  if (auto it = given.find("q"); it != given.end()) {
    const double q = to_real("q", it->second);
    if (std::abs(q - (c.p - 1)) > 1e-12 * std::max(1.0, std::abs(c.p))) {
      config_error("q", "only the critical case q = p-1 is supported");
    }
  }
  if (c.grid_cells < 8) config_error("grid_cells", "need at least 8 cells");
  if (!(c.r_max > 0)) config_error("r_max", "r_max must be positive");
  if (c.x_min && c.grid == GridKind::Radial) config_error("x_min", "x_min applies to line grids only");
  if (c.x_min && !(*c.x_min < c.r_max)) config_error("x_min", "x_min must lie below r_max");
  if (c.grid == GridKind::Line && c.N != 1) config_error("grid", "line grids are one-dimensional; use radial for N >= 2");
  if (!(c.t_end >= 0)) config_error("t_end", "t_end must be >= 0");
  if (c.samples < 1) config_error("samples", "samples must be positive");
  for (double t : c.output_times) {
    if (!(t >= 0) || t > c.t_end) config_error("output_times", "output times must lie in [0, t_end]");
  }
  if (!(c.R0 > 0)) config_error("R0", "R0 must be positive");
  if (!(c.amplitude >= 0)) config_error("amplitude", "amplitude must be >= 0");
  if (c.center != 0 && c.grid == GridKind::Radial) config_error("center", "radial grids need a centred bump");
  if (c.preset == Preset::ExplicitWave && c.grid != GridKind::Line) config_error("grid", "explicit_wave needs a line grid");
  if (c.preset == Preset::ExplicitWave && c.form != EquationForm::RescaledV) {
    config_error("form", "explicit_wave data solves the rescaled_v form only");
  }
  if (c.R < 0) config_error("R", "R must be >= 0");
  if (c.T < 0) config_error("T", "T must be >= 0");
  if (!(c.c > 0)) config_error("c", "wave speed must be positive");
  if (!(c.alpha >= 0)) config_error("alpha", "alpha must be >= 0");
  if (!(c.z_extent > 0)) config_error("z_extent", "z_extent must be positive");
  for (int id : c.only) {
    if (id < 1 || id > 11) config_error("only", "criteria are numbered 1 to 11");
  }
  if (c.out.empty()) config_error("out", "output directory must not be empty");
}

}  // namespace

Grid<double> RunConfig::make_grid() const {
  if (grid == GridKind::Radial) return gradflow::make_grid(GridKind::Radial, r_max, grid_cells);
  return make_line_grid(x_min.value_or(-r_max), r_max, grid_cells);
}

InitialData<double> RunConfig::initial_data() const {
  switch (preset) {
    case Preset::Bump: return BumpData<double>{R0, amplitude, center};
    case Preset::ExplicitWave: return ExplicitWaveData<double>{K};
    case Preset::LemmaSubsolution: {
      const auto pr = params();
      return LemmaSubsolutionData<double>{R > 0 ? R : profiles::lemma_radius_bound(pr),
                                          T > 0 ? T : profiles::lemma_time_bound(pr)};
    }
    case Preset::Sandpile: return SandpileData{};
    case Preset::Zero: return BumpData<double>{R0, 0.0, center};
  }
  return BumpData<double>{};
}

std::vector<double> RunConfig::resolved_output_times() const {
  if (!output_times.empty()) return output_times;
  std::vector<double> t;
  for (int k = 1; k <= samples; ++k) t.push_back(t_end * k / samples);
  return t;
}

std::string RunConfig::canonical() const {
  std::ostringstream os;
  auto num = [](double x) { return io::format_number(x); };
  os << "command=" << to_string(command) << '\n'
     << "p=" << num(p) << '\n'
     << "N=" << N << '\n'
     << "form=" << to_string(form) << '\n'
     << "grid=" << to_string(grid) << '\n'
     << "grid_cells=" << grid_cells << '\n'
     << "r_max=" << num(r_max) << '\n'
     << "x_min=" << (x_min ? num(*x_min) : std::string("default")) << '\n'
     << "preset=" << to_string(preset) << '\n'
     << "R0=" << num(R0) << '\n'
     << "amplitude=" << num(amplitude) << '\n'
     << "center=" << num(center) << '\n'
     << "R=" << num(R) << '\n'
     << "T=" << num(T) << '\n'
     << "t_end=" << num(t_end) << '\n'
     << "output_times=";
  for (double t : resolved_output_times()) os << num(t) << ';';
  os << '\n'
     << "snapshots=" << snapshots << '\n'
     << "c=" << num(c) << '\n'
     << "alpha=" << num(alpha) << '\n'
     << "K=" << num(K) << '\n'
     << "z_extent=" << num(z_extent) << '\n'
     << "only=";
  for (int id : only) os << id << ';';
  os << '\n';
  return os.str();
}

std::string RunConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016zx", std::hash<std::string>{}(canonical()));
  return buf;
}

KeyValues parse_key_values(const std::string& text) {
  KeyValues kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      config_error("line " + std::to_string(lineno), "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) config_error("line " + std::to_string(lineno), "empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_config_file(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) config_error("config", "cannot read " + path.string());
  std::ostringstream ss;
  ss << is.rdbuf();
  return parse_key_values(ss.str());
}

RunConfig parse_config(const KeyValues& values) {
  RunConfig c;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"command", [&](auto&, auto& v) { c.command = to_command(v); }},
      {"p", [&](auto& k, auto& v) { c.p = to_real(k, v); }},
      {"N", [&](auto& k, auto& v) { c.N = static_cast<int>(to_integer(k, v)); }},
      {"q", [&](auto& k, auto& v) { to_real(k, v); }},  // checked in validate
      {"form", [&](auto&, auto& v) { c.form = to_form(v); }},
      {"grid", [&](auto&, auto& v) { c.grid = to_grid(v); }},
      {"grid_cells", [&](auto& k, auto& v) { c.grid_cells = to_integer(k, v); }},
      {"r_max", [&](auto& k, auto& v) { c.r_max = to_real(k, v); }},
      {"x_min", [&](auto& k, auto& v) { c.x_min = to_real(k, v); }},
      {"preset", [&](auto&, auto& v) { c.preset = to_preset(v); }},
      {"R0", [&](auto& k, auto& v) { c.R0 = to_real(k, v); }},
      {"amplitude", [&](auto& k, auto& v) { c.amplitude = to_real(k, v); }},
      {"center", [&](auto& k, auto& v) { c.center = to_real(k, v); }},
      {"R", [&](auto& k, auto& v) { c.R = to_real(k, v); }},
      {"T", [&](auto& k, auto& v) { c.T = to_real(k, v); }},
      {"t_end", [&](auto& k, auto& v) { c.t_end = to_real(k, v); }},
      {"output_times",
       [&](auto& k, auto& v) {
         c.output_times.clear();
         for (const auto& item : split_list(v)) c.output_times.push_back(to_real(k, item));
         std::sort(c.output_times.begin(), c.output_times.end());
       }},
      {"samples", [&](auto& k, auto& v) { c.samples = static_cast<int>(to_integer(k, v)); }},
      {"snapshots", [&](auto& k, auto& v) { c.snapshots = to_bool(k, v); }},
      {"c", [&](auto& k, auto& v) { c.c = to_real(k, v); }},
      {"alpha", [&](auto& k, auto& v) { c.alpha = to_real(k, v); }},
      {"K", [&](auto& k, auto& v) { c.K = to_real(k, v); }},
      {"z_extent", [&](auto& k, auto& v) { c.z_extent = to_real(k, v); }},
      {"only",
       [&](auto& k, auto& v) {
         c.only.clear();
         for (const auto& item : split_list(v)) c.only.push_back(static_cast<int>(to_integer(k, item)));
       }},
      {"out", [&](auto&, auto& v) { c.out = trim(v); }},
  };
  for (const auto& [key, value] : values) {
    const auto it = setters.find(key);
    if (it == setters.end()) config_error(key, "unknown key");
    it->second(key, value);
  }
  validate(c, values);
  return c;
}

RunConfig resolve_config(const KeyValues& file_values, const KeyValues& flag_values) {
  KeyValues merged = file_values;
  for (const auto& [k, v] : flag_values) merged[k] = v;
  if (const char* env = std::getenv("GRADFLOW_OUT"); env && *env) merged["out"] = env;
  return parse_config(merged);
}

}  // namespace gradflow
