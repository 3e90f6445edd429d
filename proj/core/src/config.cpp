#include "squidbec/config.hpp"

#include <cctype>
#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "squidbec/constants.hpp"
#include "squidbec/errors.hpp"

namespace squidbec {

namespace {

enum class Dim {
  None,
  Length,
  Time,
  Frequency,
  Inductance,
  Capacitance,
  Current,
  Mass,
  Moment,
};

const std::map<std::string, double>& unit_table(Dim d) {
  static const std::map<std::string, double> none{};
  static const std::map<std::string, double> length{
      {"nm", 1e-9}, {"um", 1e-6}, {"mm", 1e-3}, {"m", 1.0}};
  static const std::map<std::string, double> time{
      {"ns", 1e-9}, {"us", 1e-6}, {"ms", 1e-3}, {"s", 1.0}};
  static const std::map<std::string, double> freq{{"Hz", kTwoPi},
                                                  {"kHz", kTwoPi * 1e3},
                                                  {"MHz", kTwoPi * 1e6},
                                                  {"GHz", kTwoPi * 1e9},
                                                  {"rad/s", 1.0}};
  static const std::map<std::string, double> ind{
      {"pH", 1e-12}, {"nH", 1e-9}, {"uH", 1e-6}, {"H", 1.0}};
  static const std::map<std::string, double> cap{
      {"fF", 1e-15}, {"pF", 1e-12}, {"nF", 1e-9}, {"F", 1.0}};
  static const std::map<std::string, double> cur{
      {"nA", 1e-9}, {"uA", 1e-6}, {"mA", 1e-3}, {"A", 1.0}};
  static const std::map<std::string, double> mass{{"u", kAtomicMassUnit},
                                                  {"kg", 1.0}};
  static const std::map<std::string, double> moment{{"muB", 1.0}};
  switch (d) {
    case Dim::Length: return length;
    case Dim::Time: return time;
    case Dim::Frequency: return freq;
    case Dim::Inductance: return ind;
    case Dim::Capacitance: return cap;
    case Dim::Current: return cur;
    case Dim::Mass: return mass;
    case Dim::Moment: return moment;
    default: return none;
  }
}

const char* dim_name(Dim d) {
  switch (d) {
    case Dim::Length: return "length";
    case Dim::Time: return "time";
    case Dim::Frequency: return "frequency";
    case Dim::Inductance: return "inductance";
    case Dim::Capacitance: return "capacitance";
    case Dim::Current: return "current";
    case Dim::Mass: return "mass";
    case Dim::Moment: return "magnetic moment";
    default: return "dimensionless";
  }
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

struct Parser {
  RunConfig cfg;
  std::string origin;
  int line_no = 0;
  std::set<std::string> seen;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(origin + ":" + std::to_string(line_no) + ": " + msg);
  }

  bool is_number(const std::string& tok) const {
    char* end = nullptr;
    std::strtod(tok.c_str(), &end);
    return end == tok.c_str() + tok.size() && !tok.empty();
  }

  double number(const std::string& tok) const {
    char* end = nullptr;
    const double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size() || tok.empty()) {
      fail("expected a number, got '" + tok + "'");
    }
    if (!std::isfinite(v)) fail("value '" + tok + "' is not finite");
    return v;
  }

  std::vector<std::string> tokens(const std::string& value) const {
    std::string v = value;
    for (char& c : v) {
      if (c == ',') c = ' ';
    }
    std::istringstream in(v);
    std::vector<std::string> out;
    std::string t;
    while (in >> t) out.push_back(t);
    return out;
  }

  // Splits `toks` into numbers plus a trailing unit factor for the key's
  // dimension; enforces the expected count.
  std::vector<double> numbers(const std::vector<std::string>& toks, Dim dim,
                              std::size_t count, const std::string& key) const {
    std::vector<std::string> nums = toks;
    double factor = 1.0;
    if (dim != Dim::None) {
      if (nums.empty() || is_number(nums.back())) {
        fail("key '" + key + "' needs a " + std::string(dim_name(dim)) +
             " unit suffix");
      }
      const auto& table = unit_table(dim);
      const auto it = table.find(nums.back());
      if (it == table.end()) {
        fail("'" + nums.back() + "' is not a " + dim_name(dim) + " unit");
      }
      factor = it->second;
      nums.pop_back();
    } else if (!nums.empty() && !is_number(nums.back())) {
      fail("key '" + key + "' is dimensionless, got unit '" + nums.back() +
           "'");
    }
    if (nums.size() != count) {
      fail("key '" + key + "' expects " + std::to_string(count) +
           " value(s), got " + std::to_string(nums.size()));
    }
    std::vector<double> out;
    out.reserve(count);
    for (const auto& t : nums) out.push_back(number(t) * factor);
    return out;
  }

  double scalar(const std::string& value, Dim dim, const std::string& key) {
    return numbers(tokens(value), dim, 1, key)[0];
  }

  Eigen::Vector3d vec3(const std::string& value, Dim dim,
                       const std::string& key) {
    const auto v = numbers(tokens(value), dim, 3, key);
    return Eigen::Vector3d(v[0], v[1], v[2]);
  }

  std::uint64_t integer(const std::string& value, const std::string& key) {
    const auto toks = tokens(value);
    if (toks.size() != 1) fail("key '" + key + "' expects one integer");
    const std::string& t = toks[0];
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos) {
      fail("key '" + key + "' expects a non-negative integer, got '" + t +
           "'");
    }
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size()) {
      fail("integer '" + t + "' out of range");
    }
    return v;
  }

  std::string word(const std::string& value, const std::string& key) {
    const auto toks = tokens(value);
    if (toks.size() != 1) fail("key '" + key + "' expects a single word");
    return toks[0];
  }

  void positive(double v, const std::string& key) {
    if (!(v > 0.0)) fail("key '" + key + "' must be positive");
  }

  void apply(const std::string& section, const std::string& key,
             const std::string& value) {
    if (!seen.insert(section + "." + key).second) {
      fail("duplicate key '" + key + "' in [" + section + "]");
    }
    if (section == "squid") {
      if (key == "inductance") {
        positive(cfg.squid.inductance = scalar(value, Dim::Inductance, key),
                 key);
      } else if (key == "capacitance") {
        positive(cfg.squid.capacitance = scalar(value, Dim::Capacitance, key),
                 key);
      } else if (key == "critical_current") {
        positive(
            cfg.squid.critical_current = scalar(value, Dim::Current, key),
            key);
      } else if (key == "phi_ex") {
        cfg.squid.phi_ex = scalar(value, Dim::None, key);
      } else {
        fail("unknown key '" + key + "' in [squid]");
      }
    } else if (section == "loop") {
      if (key == "radius") {
        positive(cfg.loop.radius = scalar(value, Dim::Length, key), key);
      } else if (key == "wire_radius") {
        positive(cfg.loop.wire_radius = scalar(value, Dim::Length, key), key);
      } else if (key == "center") {
        cfg.loop.center = vec3(value, Dim::Length, key);
      } else if (key == "axis") {
        cfg.loop.axis = vec3(value, Dim::None, key);
        if (cfg.loop.axis.norm() == 0.0) fail("loop axis must be nonzero");
      } else if (key == "current") {
        cfg.loop.current = scalar(value, Dim::Current, key);
        if (*cfg.loop.current == 0.0) fail("loop current must be nonzero");
      } else {
        fail("unknown key '" + key + "' in [loop]");
      }
    } else if (section == "bec") {
      if (key == "atom_number") {
        cfg.bec.atom_number = scalar(value, Dim::None, key);
        if (!(cfg.bec.atom_number >= 1.0)) fail("atom_number must be >= 1");
      } else if (key == "trap_frequency") {
        positive(cfg.bec.trap_frequency = scalar(value, Dim::Frequency, key),
                 key);
      } else if (key == "atom_mass") {
        positive(cfg.bec.atom_mass = scalar(value, Dim::Mass, key), key);
      } else if (key == "trap_center") {
        cfg.bec.trap_center = vec3(value, Dim::Length, key);
      } else if (key == "e_hfs") {
        positive(cfg.bec.e_hfs = scalar(value, Dim::Frequency, key), key);
      } else if (key == "mu_uu") {
        cfg.bec.mu_uu = vec3(value, Dim::Moment, key);
      } else if (key == "mu_dd") {
        cfg.bec.mu_dd = vec3(value, Dim::Moment, key);
      } else if (key == "mu_du_re") {
        cfg.bec.mu_du.real() = vec3(value, Dim::Moment, key);
      } else if (key == "mu_du_im") {
        cfg.bec.mu_du.imag() = vec3(value, Dim::Moment, key);
      } else {
        fail("unknown key '" + key + "' in [bec]");
      }
    } else if (section == "dynamics") {
      if (key == "profile") {
        cfg.dynamics.profile = word(value, key);
        if (cfg.dynamics.profile != "fast" && cfg.dynamics.profile != "desk") {
          fail("profile must be 'fast' or 'desk'");
        }
      } else if (key == "rabi_override") {
        cfg.dynamics.rabi_override = scalar(value, Dim::Frequency, key);
        positive(*cfg.dynamics.rabi_override, key);
      } else if (key == "ramp_time") {
        positive(cfg.dynamics.ramp_time = scalar(value, Dim::Time, key), key);
      } else if (key == "w_off") {
        cfg.dynamics.w_off = scalar(value, Dim::None, key);
        if (!(cfg.dynamics.w_off > 0.0 && cfg.dynamics.w_off < 1.0)) {
          fail("w_off must lie in (0, 1)");
        }
      } else if (key == "frame") {
        cfg.dynamics.frame = word(value, key);
        if (cfg.dynamics.frame != "rotating" && cfg.dynamics.frame != "lab") {
          fail("frame must be 'rotating' or 'lab'");
        }
      } else if (key == "step_fraction") {
        cfg.dynamics.step_fraction = scalar(value, Dim::None, key);
        if (!(cfg.dynamics.step_fraction > 0.0 &&
              cfg.dynamics.step_fraction <= 0.5)) {
          fail("step_fraction must lie in (0, 0.5]");
        }
      } else if (key == "protocol") {
        cfg.dynamics.protocol = word(value, key);
        if (cfg.dynamics.protocol != "transfer" &&
            cfg.dynamics.protocol != "entangle") {
          fail("protocol must be 'transfer' or 'entangle'");
        }
      } else if (key == "alpha_re") {
        cfg.dynamics.alpha.real(scalar(value, Dim::None, key));
      } else if (key == "alpha_im") {
        cfg.dynamics.alpha.imag(scalar(value, Dim::None, key));
      } else if (key == "beta_re") {
        cfg.dynamics.beta.real(scalar(value, Dim::None, key));
      } else if (key == "beta_im") {
        cfg.dynamics.beta.imag(scalar(value, Dim::None, key));
      } else if (key == "sweep_ramps") {
        const auto toks = tokens(value);
        if (toks.size() < 2) fail("sweep_ramps needs values and a time unit");
        const auto vals =
            numbers(toks, Dim::Time, toks.size() - 1, key);
        for (double v : vals) positive(v, key);
        cfg.dynamics.sweep_ramps = vals;
      } else {
        fail("unknown key '" + key + "' in [dynamics]");
      }
    } else if (section == "tomography") {
      if (key == "shots") {
        cfg.tomography.shots = integer(value, key);
        if (cfg.tomography.shots == 0) fail("shots must be >= 1");
      } else if (key == "seed") {
        cfg.tomography.seed = integer(value, key);
      } else {
        fail("unknown key '" + key + "' in [tomography]");
      }
    } else if (section == "field") {
      if (key == "grid_min") {
        cfg.field.grid_min = vec3(value, Dim::Length, key);
      } else if (key == "grid_max") {
        cfg.field.grid_max = vec3(value, Dim::Length, key);
      } else if (key == "grid_n") {
        const auto v = numbers(tokens(value), Dim::None, 3, key);
        for (int i = 0; i < 3; ++i) {
          if (v[i] < 1.0 || v[i] != std::floor(v[i])) {
            fail("grid_n components must be integers >= 1");
          }
          cfg.field.grid_n(i) = static_cast<int>(v[i]);
        }
      } else {
        fail("unknown key '" + key + "' in [field]");
      }
    } else if (section == "output") {
      if (key == "dir") {
        cfg.output.dir = trim(value);
        if (cfg.output.dir.empty()) fail("output dir must be nonempty");
      } else {
        fail("unknown key '" + key + "' in [output]");
      }
    } else {
      fail("unknown section [" + section + "]");
    }
  }

  void finish_checks() {
    line_no = 0;
    for (int i = 0; i < 3; ++i) {
      if (cfg.field.grid_min(i) > cfg.field.grid_max(i)) {
        throw ConfigError(origin + ": field grid_min exceeds grid_max");
      }
    }
  }
};

}  // namespace

RunConfig parse_config_text(const std::string& text,
                            const std::string& origin) {
  Parser p;
  p.origin = origin;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  bool skipping = false;
  while (std::getline(in, raw)) {
    ++p.line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') p.fail("malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) p.fail("empty section name");
      // Emitted run manifests carry [run]/[derived] bookkeeping sections;
      // both are ignored so a manifest round-trips as a config.
      skipping = (section == "run" || section == "derived");
      continue;
    }
    if (skipping) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) p.fail("expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) p.fail("empty key");
    if (value.empty()) p.fail("empty value for key '" + key + "'");
    if (section.empty()) p.fail("key '" + key + "' outside any section");
    p.apply(section, key, value);
  }
  p.finish_checks();
  return p.cfg;
}

RunConfig parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path);
}

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt(const Eigen::Vector3d& v) {
  return fmt(v(0)) + " " + fmt(v(1)) + " " + fmt(v(2));
}

}  // namespace

std::string config_to_text(const RunConfig& c) {
  std::ostringstream out;
  out << "[squid]\n";
  out << "inductance = " << fmt(c.squid.inductance) << " H\n";
  out << "capacitance = " << fmt(c.squid.capacitance) << " F\n";
  out << "critical_current = " << fmt(c.squid.critical_current) << " A\n";
  out << "phi_ex = " << fmt(c.squid.phi_ex) << "\n";
  out << "\n[loop]\n";
  out << "radius = " << fmt(c.loop.radius) << " m\n";
  out << "wire_radius = " << fmt(c.loop.wire_radius) << " m\n";
  out << "center = " << fmt(c.loop.center) << " m\n";
  out << "axis = " << fmt(c.loop.axis) << "\n";
  if (c.loop.current) {
    out << "current = " << fmt(*c.loop.current) << " A\n";
  }
  out << "\n[bec]\n";
  out << "atom_number = " << fmt(c.bec.atom_number) << "\n";
  out << "trap_frequency = " << fmt(c.bec.trap_frequency) << " rad/s\n";
  out << "atom_mass = " << fmt(c.bec.atom_mass) << " kg\n";
  out << "trap_center = " << fmt(c.bec.trap_center) << " m\n";
  out << "e_hfs = " << fmt(c.bec.e_hfs) << " rad/s\n";
  out << "mu_uu = " << fmt(c.bec.mu_uu) << " muB\n";
  out << "mu_dd = " << fmt(c.bec.mu_dd) << " muB\n";
  out << "mu_du_re = " << fmt(c.bec.mu_du.real().eval()) << " muB\n";
  out << "mu_du_im = " << fmt(c.bec.mu_du.imag().eval()) << " muB\n";
  out << "\n[dynamics]\n";
  out << "profile = " << c.dynamics.profile << "\n";
  if (c.dynamics.rabi_override) {
    out << "rabi_override = " << fmt(*c.dynamics.rabi_override) << " rad/s\n";
  }
  out << "ramp_time = " << fmt(c.dynamics.ramp_time) << " s\n";
  out << "w_off = " << fmt(c.dynamics.w_off) << "\n";
  out << "frame = " << c.dynamics.frame << "\n";
  out << "step_fraction = " << fmt(c.dynamics.step_fraction) << "\n";
  out << "protocol = " << c.dynamics.protocol << "\n";
  out << "alpha_re = " << fmt(c.dynamics.alpha.real()) << "\n";
  out << "alpha_im = " << fmt(c.dynamics.alpha.imag()) << "\n";
  out << "beta_re = " << fmt(c.dynamics.beta.real()) << "\n";
  out << "beta_im = " << fmt(c.dynamics.beta.imag()) << "\n";
  out << "sweep_ramps =";
  for (double v : c.dynamics.sweep_ramps) out << " " << fmt(v);
  out << " s\n";
  out << "\n[tomography]\n";
  out << "shots = " << c.tomography.shots << "\n";
  out << "seed = " << c.tomography.seed << "\n";
  out << "\n[field]\n";
  out << "grid_min = " << fmt(c.field.grid_min) << " m\n";
  out << "grid_max = " << fmt(c.field.grid_max) << " m\n";
  out << "grid_n = " << c.field.grid_n(0) << " " << c.field.grid_n(1) << " "
      << c.field.grid_n(2) << "\n";
  out << "\n[output]\n";
  out << "dir = " << c.output.dir << "\n";
  return out.str();
}

}  // namespace squidbec
