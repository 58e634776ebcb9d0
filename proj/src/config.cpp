#include "tpi/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "tpi/errors.hpp"

namespace tpi {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::optional<double> to_double(const std::string& s) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) return std::nullopt;
  return v;
}

struct Entry {
  std::string value;
  std::size_t line;
};

class Table {
 public:
  explicit Table(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    while (std::getline(in, raw)) {
      ++line;
      const auto hash = raw.find('#');
      const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
      if (s.empty()) continue;
      const auto eq = s.find('=');
      if (eq == std::string::npos) throw ParseError("expected 'key = value'", line);
      const std::string key = trim(s.substr(0, eq));
      const std::string value = trim(s.substr(eq + 1));
      if (key.empty() || key.find_first_of(" \t") != std::string::npos)
        throw ParseError("malformed key", line, key);
      if (value.empty()) throw ParseError("missing value", line, key);
      if (entries_.count(key)) throw ParseError("duplicate key", line, key);
      entries_[key] = {value, line};
    }
  }

  bool has(const std::string& key) const { return entries_.count(key) > 0; }

  std::optional<std::string> text(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) return std::nullopt;
    used_.insert(key);
    return it->second.value;
  }

  std::optional<double> number(const std::string& key) {
    auto s = text(key);
    if (!s) return std::nullopt;
    auto v = to_double(*s);
    if (!v) throw ParseError("expected a number", line(key), key);
    return v;
  }

  std::optional<std::size_t> count(const std::string& key) {
    auto v = number(key);
    if (!v) return std::nullopt;
    if (*v < 0 || std::floor(*v) != *v || *v > 1e9)
      throw ParseError("expected a non-negative integer", line(key), key);
    return static_cast<std::size_t>(*v);
  }

  std::vector<double> list(const std::string& key) {
    std::vector<double> out;
    auto s = text(key);
    if (!s) return out;
    std::stringstream ss(*s);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto v = to_double(trim(item));
      if (!v) throw ParseError("expected a comma-separated list of numbers", line(key), key);
      out.push_back(*v);
    }
    return out;
  }

  std::size_t line(const std::string& key) const {
    auto it = entries_.find(key);
    return it == entries_.end() ? 0 : it->second.line;
  }

  void reject_unused() const {
    for (const auto& [key, e] : entries_) {
      if (!used_.count(key)) throw ParseError("unknown key", e.line, key);
    }
  }

 private:
  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
};

[[noreturn]] void invalid(const std::string& key, const std::string& what) {
  throw ValidationError(key + ": " + what, key);
}

double positive(Table& t, const std::string& key) {
  auto v = t.number(key);
  if (!v) invalid(key, "required");
  if (!(*v > 0.0)) invalid(key, "must be positive");
  return *v;
}

SpectralDensity load_tabulated(const std::filesystem::path& file, double offset,
                               const std::string& key) {
  std::ifstream in(file);
  if (!in) invalid(key, "cannot open " + file.string());
  std::vector<double> grid, values;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    for (char& ch : s) {
      if (ch == ',' || ch == '\t') ch = ' ';
    }
    std::istringstream fields(s);
    std::string a, b, extra;
    fields >> a >> b;
    auto x = to_double(a);
    auto y = to_double(b);
    if (!x || !y || (fields >> extra))
      throw ParseError("expected two numeric columns in " + file.string(), line, key);
    grid.push_back(*x);
    values.push_back(*y);
  }
  try {
    return normalize(SpectralDensity::tabulated(std::move(grid), std::move(values), offset));
  } catch (const std::invalid_argument& e) {
    invalid(key, e.what());
  }
}

SpectralDensity density(Table& t, const std::string& prefix, const std::filesystem::path& base) {
  const std::string shape_key = prefix + ".shape";
  auto shape = t.text(shape_key);
  if (!shape) invalid(shape_key, "required");
  const double offset = t.number(prefix + ".center_offset").value_or(0.0);
  if (*shape == "tabulated") {
    auto file = t.text(prefix + ".file");
    if (!file) invalid(prefix + ".file", "required for tabulated densities");
    std::filesystem::path p(*file);
    if (p.is_relative()) p = base / p;
    return load_tabulated(p, offset, prefix + ".file");
  }
  const double w = positive(t, prefix + ".width");
  if (*shape == "gaussian") return SpectralDensity::gaussian(w, offset);
  if (*shape == "lorentzian") return SpectralDensity::lorentzian(w, offset);
  if (*shape == "sinc2") return SpectralDensity::sinc_squared(w, offset);
  invalid(shape_key, "unknown shape '" + *shape + "' (gaussian|lorentzian|sinc2|tabulated)");
}

JointSpectralDensity joint(Table& t, const std::filesystem::path& base) {
  const std::string kind = t.text("source.pm.kind").value_or("separable");
  if (kind == "separable") {
    return JointSpectralDensity::separable(density(t, "source.pm.prime", base),
                                           density(t, "source.pm.dprime", base));
  }
  if (kind == "correlated_gaussian") {
    const double sp = positive(t, "source.pm.sigma_prime");
    const double sd = positive(t, "source.pm.sigma_dprime");
    const double rho = t.number("source.pm.correlation").value_or(0.0);
    if (!(std::abs(rho) < 1.0)) invalid("source.pm.correlation", "must lie in (-1, 1)");
    return JointSpectralDensity::correlated_gaussian(
        sp, sd, rho, t.number("source.pm.center_prime").value_or(0.0),
        t.number("source.pm.center_dprime").value_or(0.0));
  }
  invalid("source.pm.kind", "unknown kind '" + kind + "' (separable|correlated_gaussian)");
}

const char* const kSuffixes[] = {"a1", "b1", "c1", "p1", "a2", "b2", "c2", "p2"};

PathConfiguration path_from(Table& t) {
  double lengths[8];
  double phases[8];
  for (int i = 0; i < 8; ++i) {
    const std::string lk = std::string("geometry.length_") + kSuffixes[i];
    auto l = t.number(lk);
    if (!l) invalid(lk, "required in the eight-length form");
    if (*l < 0.0) invalid(lk, "must be >= 0");
    lengths[i] = *l;
    phases[i] = t.number(std::string("geometry.phase_") + kSuffixes[i]).value_or(0.0);
  }
  PathConfiguration p;
  p.l_a1 = lengths[0], p.l_b1 = lengths[1], p.l_c1 = lengths[2], p.l_p1 = lengths[3];
  p.l_a2 = lengths[4], p.l_b2 = lengths[5], p.l_c2 = lengths[6], p.l_p2 = lengths[7];
  p.phi_a1 = phases[0], p.phi_b1 = phases[1], p.phi_c1 = phases[2], p.phi_p1 = phases[3];
  p.phi_a2 = phases[4], p.phi_b2 = phases[5], p.phi_c2 = phases[6], p.phi_p2 = phases[7];
  return p;
}

SweepVariable sweep_variable(const std::string& s) {
  if (s == "delta_phi") return SweepVariable::DeltaPhi;
  if (s == "delta_L") return SweepVariable::DeltaL;
  if (s == "delta_L_prime") return SweepVariable::DeltaLPrime;
  if (s == "delta_L_dprime") return SweepVariable::DeltaLDPrime;
  if (s == "diagonal") return SweepVariable::Diagonal;
  invalid("sweep.variable",
          "unknown variable '" + s +
              "' (delta_phi|delta_L|delta_L_prime|delta_L_dprime|diagonal)");
}

}  // namespace

std::string fnv1a_hex(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir) {
  Table t(text);

  // Source.
  auto type = t.text("source.type");
  if (!type) invalid("source.type", "required");
  SourceKind kind;
  if (*type == "cpdc") {
    kind = SourceKind::Cpdc;
  } else if (*type == "topdc") {
    kind = SourceKind::Topdc;
  } else {
    invalid("source.type", "must be cpdc or topdc");
  }
  const double la = positive(t, "source.wavelength_a_nm") * 1e-9;
  const double lb = positive(t, "source.wavelength_b_nm") * 1e-9;
  const double lc = positive(t, "source.wavelength_c_nm") * 1e-9;
  const auto centrals = CentralFrequencies::from_wavelengths(la, lb, lc);
  SpectralDensity pump = density(t, "source.pump", base_dir);
  JointSpectralDensity pm = joint(t, base_dir);
  SourceModel source = kind == SourceKind::Cpdc ? SourceModel::cpdc(centrals, pump, pm)
                                                : SourceModel::topdc(centrals, pump, pm);

  // Geometry: exactly one of the two forms.
  TopdcChoice choice = TopdcChoice::One;
  if (auto c = t.number("geometry.choice")) {
    if (*c == 1) {
      choice = TopdcChoice::One;
    } else if (*c == 2) {
      choice = TopdcChoice::Two;
    } else if (*c == 3) {
      choice = TopdcChoice::Three;
    } else {
      invalid("geometry.choice", "must be 1, 2 or 3");
    }
    if (kind == SourceKind::Cpdc && choice != TopdcChoice::One)
      invalid("geometry.choice", "only choice 1 exists for cpdc sources");
  }
  bool eight = false, direct = false;
  for (const char* s : kSuffixes) {
    eight = eight || t.has(std::string("geometry.length_") + s) ||
            t.has(std::string("geometry.phase_") + s);
  }
  for (const char* k : {"geometry.delta_L", "geometry.delta_L_prime", "geometry.delta_L_dprime",
                        "geometry.delta_phi"}) {
    direct = direct || t.has(k);
  }
  if (eight && direct) invalid("geometry", "geometry overspecified");
  if (!eight && !direct) invalid("geometry", "geometry missing");

  std::optional<PathConfiguration> path;
  ReducedParameters reduced;
  if (eight) {
    path = path_from(t);
    reduced = reduce(*path, kind, choice);
  } else {
    reduced.delta_L = t.number("geometry.delta_L").value_or(0.0);
    reduced.delta_L_prime = t.number("geometry.delta_L_prime").value_or(0.0);
    reduced.delta_L_dprime = t.number("geometry.delta_L_dprime").value_or(0.0);
    reduced.delta_phi = t.number("geometry.delta_phi").value_or(0.0);
    reduced.choice = choice;
  }
  reduced = attach_carriers(reduced, centrals, kind);

  // Amplitudes: the overall scale is either |c|^2 or the baseline C.
  AlternativeAmplitudes amps;
  amps.K1_mag = t.number("amplitudes.K1").value_or(1.0);
  amps.K2_mag = t.number("amplitudes.K2").value_or(1.0);
  if (amps.K1_mag < 0) invalid("amplitudes.K1", "must be >= 0");
  if (amps.K2_mag < 0) invalid("amplitudes.K2", "must be >= 0");
  const double sum_sq = amps.K1_mag * amps.K1_mag + amps.K2_mag * amps.K2_mag;
  if (t.has("amplitudes.c_mag_sq") && t.has("amplitudes.C"))
    invalid("amplitudes", "give either c_mag_sq or C, not both");
  if (t.has("amplitudes.c_mag_sq")) {
    amps.c_mag_sq = positive(t, "amplitudes.c_mag_sq");
  } else {
    const double C = t.has("amplitudes.C") ? positive(t, "amplitudes.C") : 1.0;
    if (!(sum_sq > 0.0)) invalid("amplitudes", "K1 and K2 cannot both be zero");
    amps.c_mag_sq = C / sum_sq;
  }

  // Sweep.
  std::optional<SweepSettings> sweep;
  if (auto v = t.text("sweep.variable")) {
    SweepSettings s;
    s.variable = sweep_variable(*v);
    auto start = t.number("sweep.start");
    auto stop = t.number("sweep.stop");
    auto n = t.count("sweep.n_points");
    if (!start) invalid("sweep.start", "required");
    if (!stop) invalid("sweep.stop", "required");
    if (!n) invalid("sweep.n_points", "required");
    if (!(*start < *stop)) invalid("sweep.stop", "must exceed sweep.start");
    if (*n < 3) invalid("sweep.n_points", "must be >= 3");
    s.start = *start;
    s.stop = *stop;
    s.n_points = *n;
    sweep = s;
  }

  // Oracle validation.
  ValidateSettings val;
  val.oracle.choice = choice;
  if (auto n = t.count("validate.n_pump")) val.oracle.n_pump = *n;
  if (auto n = t.count("validate.n_prime")) val.oracle.n_prime = *n;
  if (auto n = t.count("validate.n_dprime")) val.oracle.n_dprime = *n;
  if (auto m = t.number("validate.support_multiplier")) val.oracle.support_multiplier = *m;
  const std::string coupling = t.text("validate.coupling").value_or("none");
  if (coupling == "linear_shift") {
    auto slope = t.number("validate.slope");
    if (!slope) invalid("validate.slope", "required for linear_shift coupling");
    val.oracle.coupling = PumpCoupling::linear_shift(*slope);
  } else if (coupling != "none") {
    invalid("validate.coupling", "must be none or linear_shift");
  }
  for (const char* k : {"validate.n_pump", "validate.n_prime", "validate.n_dprime"}) {
    if (t.has(k) && t.count(k).value() < 32) invalid(k, "must be >= 32");
  }
  if (val.oracle.support_multiplier < 4.0) invalid("validate.support_multiplier", "must be >= 4");
  val.ratios = t.list("validate.ratios");
  for (double r : val.ratios) {
    if (!(r > 0.0)) invalid("validate.ratios", "ratios must be positive");
  }
  if (auto n = t.count("validate.delay_points")) {
    if (*n < 1) invalid("validate.delay_points", "must be >= 1");
    val.delay_points = *n;
  }
  if (auto s = t.number("validate.delay_span")) {
    if (*s < 0.0) invalid("validate.delay_span", "must be >= 0");
    val.delay_span = *s;
  }

  // Output.
  std::filesystem::path out_dir = t.text("output.directory").value_or("out");
  int precision = 12;
  if (auto p = t.count("output.precision")) {
    if (*p < 1 || *p > 17) invalid("output.precision", "must be between 1 and 17");
    precision = static_cast<int>(*p);
  }

  t.reject_unused();
  return RunConfig{std::move(source), path,   reduced,   amps,         sweep,
                   val,               out_dir, precision, fnv1a_hex(text)};
}

RunConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ValidationError("cannot open config file " + file.string(), "--config");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), file.parent_path().empty() ? "." : file.parent_path());
}

}  // namespace tpi
