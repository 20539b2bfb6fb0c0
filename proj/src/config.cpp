#include "mstefan/config.hpp"

#include "mstefan/errors.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace mstefan {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

double to_double(const KeyValue& kv, const std::string& s) {
  const std::string t = trim(s);
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(t.c_str(), &end);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE || !std::isfinite(v)) {
    throw ValidationError(kv.key, "'" + t + "' is not a finite number");
  }
  return v;
}

long long to_integer(const KeyValue& kv) {
  const std::string t = trim(kv.value);
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(t.c_str(), &end, 10);
  if (t.empty() || end != t.c_str() + t.size() || errno == ERANGE) {
    throw ValidationError(kv.key, "'" + t + "' is not an integer");
  }
  return v;
}

bool to_bool(const KeyValue& kv) {
  const std::string t = trim(kv.value);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ValidationError(kv.key, "'" + t + "' is not a boolean");
}

Vector to_vector(const KeyValue& kv) {
  const auto parts = split(kv.value, ',');
  Vector v(static_cast<int>(parts.size()));
  for (size_t k = 0; k < parts.size(); ++k) v(static_cast<int>(k)) = to_double(kv, parts[k]);
  return v;
}

/// Composition lists may give N or N+1 entries; N entries imply the last.
Vector composition(const KeyValue& kv, int n_species) {
  Vector v = to_vector(kv);
  if (v.size() == n_species - 1) {
    Vector full(n_species);
    full.head(n_species - 1) = v;
    full(n_species - 1) = 1.0 - v.sum();
    v = full;
  }
  if (v.size() != n_species) {
    throw ValidationError(kv.key, "expected " + std::to_string(n_species - 1) + " or " +
                                      std::to_string(n_species) + " entries");
  }
  if ((v.array() < 0.0).any() || std::abs(v.sum() - 1.0) > 1e-12) {
    throw ValidationError(kv.key, "composition must be nonnegative and sum to 1");
  }
  return v;
}

std::vector<CustomTerm> parse_custom_terms(const KeyValue& kv, int n_species) {
  std::vector<CustomTerm> terms;
  for (const auto& item : split(kv.value, ';')) {
    if (item.empty()) continue;
    const auto f = split(item, ':');
    if (f.size() != 3) throw ValidationError(kv.key, "term '" + item + "' must be species:coefficient:exponents");
    CustomTerm t;
    KeyValue sub{kv.key, f[0], kv.line};
    t.species = static_cast<int>(to_integer(sub)) - 1;
    if (t.species < 0 || t.species >= n_species - 1) {
      throw ValidationError(kv.key, "term species must lie in 1.." + std::to_string(n_species - 1));
    }
    t.coefficient = to_double(kv, f[1]);
    std::istringstream es(f[2]);
    double e;
    while (es >> e) t.exponents.push_back(e);
    if (static_cast<int>(t.exponents.size()) != n_species) {
      throw ValidationError(kv.key, "term needs " + std::to_string(n_species) + " space-separated exponents");
    }
    terms.push_back(std::move(t));
  }
  if (terms.empty()) throw ValidationError(kv.key, "no terms given");
  return terms;
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = {
      "scenario",     "species",        "D",           "production",      "custom_terms",  "length",
      "cells",        "tau",            "eps",         "picard_tol",      "picard_max",    "damping_theta",
      "eta_floor",    "t_end",          "audit_mode",  "initial",         "initial_mean",  "initial_amplitude",
      "initial_left", "initial_right",  "initial_split", "output_dir",    "emit_timeseries", "emit_snapshots",
      "emit_audit",   "emit_certify",   "snapshot_every", "samples",      "seed"};
  return keys;
}

}  // namespace

std::vector<KeyValue> parse_key_values(const std::string& text) {
  std::vector<KeyValue> out;
  std::istringstream is(text);
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key=value");
    KeyValue kv{trim(s.substr(0, eq)), trim(s.substr(eq + 1)), line};
    if (kv.key.empty()) throw ParseError(line, "empty key");
    out.push_back(std::move(kv));
  }
  return out;
}

KeyValue parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || trim(text.substr(0, eq)).empty()) {
    throw ParseError(0, "override '" + text + "' must be KEY=VALUE");
  }
  return KeyValue{trim(text.substr(0, eq)), trim(text.substr(eq + 1)), 0};
}

RunConfig parse_config(const std::string& text) { return make_config(parse_key_values(text)); }

RunConfig make_config(const std::vector<KeyValue>& file, const std::vector<KeyValue>& overrides) {
  std::map<std::string, KeyValue> merged;
  auto apply = [&merged](const std::vector<KeyValue>& layer, bool reject_duplicates) {
    std::set<std::string> seen;
    for (const auto& kv : layer) {
      if (!known_keys().count(kv.key)) {
        if (kv.line > 0) throw ParseError(kv.line, "unknown key '" + kv.key + "'");
        throw ValidationError(kv.key, "unknown key");
      }
      if (reject_duplicates && !seen.insert(kv.key).second) {
        throw ParseError(kv.line, "duplicate key '" + kv.key + "'");
      }
      merged[kv.key] = kv;
    }
  };

  // Preset selection: overrides win over the file.
  std::string scenario;
  for (const auto& layer : {&file, &overrides}) {
    for (const auto& kv : *layer) {
      if (kv.key == "scenario") scenario = kv.value;
    }
  }
  if (!scenario.empty() && scenario != "custom") {
    const Preset* p = find_preset(scenario);
    if (!p) throw ValidationError("scenario", "unknown preset '" + scenario + "'");
    apply(parse_key_values(p->text), true);
  }
  apply(file, true);
  apply(overrides, false);

  auto get = [&merged](const std::string& key) -> const KeyValue* {
    auto it = merged.find(key);
    return it == merged.end() ? nullptr : &it->second;
  };

  RunConfig cfg;
  if (const auto* kv = get("scenario")) cfg.scenario = kv->value;

  const auto* species = get("species");
  if (!species) throw ValidationError("species", "required key missing");
  const long long n = to_integer(*species);
  if (n < 3 || n > 64) throw ValidationError("species", "must lie in 3..64");
  cfg.species = static_cast<int>(n);

  const auto* dkv = get("D");
  if (!dkv) throw ValidationError("D", "required key missing");
  {
    const Vector upper = to_vector(*dkv);
    const int expect = cfg.species * (cfg.species - 1) / 2;
    if (upper.size() != expect) {
      throw ValidationError("D", "expected " + std::to_string(expect) + " upper-triangle entries");
    }
    cfg.D = Matrix::Zero(cfg.species, cfg.species);
    int k = 0;
    for (int i = 0; i < cfg.species; ++i) {
      for (int j = i + 1; j < cfg.species; ++j, ++k) cfg.D(i, j) = cfg.D(j, i) = upper(k);
    }
  }

  if (const auto* kv = get("production")) {
    if (kv->value == "zero") {
      cfg.production = ProductionLaw::zero();
    } else if (kv->value == "quaternary") {
      cfg.production = ProductionLaw::quaternary_reversible();
    } else if (kv->value == "custom") {
      const auto* terms = get("custom_terms");
      if (!terms) throw ValidationError("custom_terms", "required when production=custom");
      cfg.production = ProductionLaw::custom(parse_custom_terms(*terms, cfg.species));
    } else {
      throw ValidationError("production", "must be zero, quaternary or custom");
    }
  }

  if (const auto* kv = get("length")) cfg.length = to_double(*kv, kv->value);
  if (!(cfg.length > 0.0)) throw ValidationError("length", "must be positive");
  if (const auto* kv = get("cells")) cfg.cells = static_cast<int>(to_integer(*kv));
  if (cfg.cells < 2) throw ValidationError("cells", "must be at least 2");

  SchemeParams& sp = cfg.scheme;
  if (const auto* kv = get("tau")) sp.tau = to_double(*kv, kv->value);
  if (!(sp.tau > 0.0)) throw ValidationError("tau", "must be positive");
  if (const auto* kv = get("eps")) sp.eps = to_double(*kv, kv->value);
  if (!(sp.eps > 0.0)) throw ValidationError("eps", "must be positive");
  if (const auto* kv = get("picard_tol")) sp.picard_tol = to_double(*kv, kv->value);
  if (!(sp.picard_tol > 0.0)) throw ValidationError("picard_tol", "must be positive");
  if (const auto* kv = get("picard_max")) sp.picard_max = static_cast<int>(to_integer(*kv));
  if (sp.picard_max < 1) throw ValidationError("picard_max", "must be at least 1");
  if (const auto* kv = get("damping_theta")) sp.damping_theta = to_double(*kv, kv->value);
  if (!(sp.damping_theta > 0.0 && sp.damping_theta <= 1.0)) {
    throw ValidationError("damping_theta", "must lie in (0, 1]");
  }
  if (const auto* kv = get("eta_floor")) sp.eta_floor = to_double(*kv, kv->value);
  if (!(sp.eta_floor > 0.0 && sp.eta_floor < 1.0 / cfg.species)) {
    throw ValidationError("eta_floor", "must lie in (0, 1/species)");
  }
  if (const auto* kv = get("t_end")) sp.t_end = to_double(*kv, kv->value);
  if (!(sp.t_end >= 0.0)) throw ValidationError("t_end", "must be nonnegative");
  if (const auto* kv = get("audit_mode")) {
    if (kv->value == "enforce") {
      sp.audit_mode = AuditMode::Enforce;
    } else if (kv->value == "warn") {
      sp.audit_mode = AuditMode::Warn;
    } else {
      throw ValidationError("audit_mode", "must be enforce or warn");
    }
  }

  // Initial data; the default is a cosine perturbation of the uniform state.
  const int ns = cfg.species;
  InitialCondition& ic = cfg.initial;
  ic.kind = InitialKind::Cosine;
  ic.first = Vector::Constant(ns, 1.0 / ns);
  ic.second = Vector::Zero(ns);
  ic.second(0) = 0.25 / ns;
  ic.second(ns - 1) = -0.25 / ns;
  if (const auto* kv = get("initial")) {
    if (kv->value == "uniform") {
      ic.kind = InitialKind::Uniform;
    } else if (kv->value == "cosine") {
      ic.kind = InitialKind::Cosine;
    } else if (kv->value == "step") {
      ic.kind = InitialKind::Step;
    } else {
      throw ValidationError("initial", "must be uniform, cosine or step");
    }
  }
  if (ic.kind == InitialKind::Step) {
    const auto* l = get("initial_left");
    const auto* r = get("initial_right");
    if (!l || !r) throw ValidationError("initial_left", "step initial data needs initial_left and initial_right");
    ic.first = composition(*l, ns);
    ic.second = composition(*r, ns);
    if (const auto* kv = get("initial_split")) ic.split = to_double(*kv, kv->value);
    if (!(ic.split > 0.0 && ic.split < 1.0)) throw ValidationError("initial_split", "must lie in (0, 1)");
  } else {
    if (const auto* kv = get("initial_mean")) ic.first = composition(*kv, ns);
    if (ic.kind == InitialKind::Uniform) {
      ic.second = Vector::Zero(ns);
    } else if (const auto* kv = get("initial_amplitude")) {
      Vector a = to_vector(*kv);
      if (a.size() == ns - 1) {
        Vector full(ns);
        full.head(ns - 1) = a;
        full(ns - 1) = -a.sum();
        a = full;
      }
      if (a.size() != ns || std::abs(a.sum()) > 1e-12) {
        throw ValidationError("initial_amplitude", "needs one entry per species summing to 0");
      }
      ic.second = a;
    }
    if (((ic.first - ic.second.cwiseAbs()).array() < 0.0).any()) {
      throw ValidationError("initial_amplitude", "perturbation leaves the simplex");
    }
  }

  if (const auto* kv = get("output_dir")) cfg.output_dir = kv->value;
  if (const auto* kv = get("emit_timeseries")) cfg.emit.timeseries = to_bool(*kv);
  if (const auto* kv = get("emit_snapshots")) cfg.emit.snapshots = to_bool(*kv);
  if (const auto* kv = get("emit_audit")) cfg.emit.audit_json = to_bool(*kv);
  if (const auto* kv = get("emit_certify")) cfg.emit.certify_json = to_bool(*kv);
  if (const auto* kv = get("snapshot_every")) cfg.snapshot_every = static_cast<int>(to_integer(*kv));
  if (cfg.snapshot_every < 0) throw ValidationError("snapshot_every", "must be nonnegative");
  if (const auto* kv = get("samples")) cfg.samples = static_cast<int>(to_integer(*kv));
  if (cfg.samples < 0) throw ValidationError("samples", "must be nonnegative");
  if (const auto* kv = get("seed")) {
    const long long s = to_integer(*kv);
    if (s < 0) throw ValidationError("seed", "must be nonnegative");
    cfg.seed = static_cast<unsigned long long>(s);
  }

  // Module-level validation before any run starts.
  try {
    (void)cfg.mixture();
  } catch (const Error& e) {
    throw ValidationError(e.code() == ErrorCode::WrongSpeciesCount ? "production" : "D", e.what());
  }
  return cfg;
}

MixtureSpec RunConfig::mixture() const { return MixtureSpec(species, D, production); }

Grid1D RunConfig::grid() const { return Grid1D(length, cells); }

ConcentrationField RunConfig::initial_field() const {
  const Grid1D g = grid();
  ConcentrationField c(g.cells(), species);
  constexpr double kPi = 3.14159265358979323846;
  for (int m = 0; m < g.cells(); ++m) {
    const double x = g.center(m);
    Vector cm;
    switch (initial.kind) {
      case InitialKind::Uniform: cm = initial.first; break;
      case InitialKind::Cosine: cm = initial.first + initial.second * std::cos(kPi * x / length); break;
      case InitialKind::Step: cm = x < initial.split * length ? initial.first : initial.second; break;
    }
    c.row(m) = cm.transpose();
  }
  return c;
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = {
      {"heat_check", "three species, all D = 1: each species obeys the heat equation",
       "scenario=heat_check\n"
       "species=3\n"
       "D=1,1,1\n"
       "production=zero\n"
       "length=1\n"
       "cells=128\n"
       "tau=1e-3\n"
       "eps=1e-8\n"
       "t_end=0.1\n"
       "initial=cosine\n"
       "initial_mean=0.4,0.3,0.3\n"
       "initial_amplitude=0.1,-0.05,-0.05\n"},
      {"ternary_uphill", "H2/N2/CO2-like ternary mixture with step initial data (uphill diffusion of species 2)",
       "scenario=ternary_uphill\n"
       "species=3\n"
       "D=0.0833,0.680,0.168\n"
       "production=zero\n"
       "length=1\n"
       "cells=128\n"
       "tau=1e-3\n"
       "eps=1e-8\n"
       "t_end=2\n"
       "initial=step\n"
       "initial_left=0.50,0.49,0.01\n"
       "initial_right=0.01,0.50,0.49\n"
       "initial_split=0.5\n"},
      {"quaternary_reaction", "five species with a reversible mass-action reaction, spatially uniform start",
       "scenario=quaternary_reaction\n"
       "species=5\n"
       "D=1,2,1,1,1,2,1,1,1,1\n"
       "production=quaternary\n"
       "length=1\n"
       "cells=128\n"
       "tau=1e-3\n"
       "eps=1e-8\n"
       "t_end=1\n"
       "initial=uniform\n"
       "initial_mean=0.3,0.1,0.25,0.15,0.2\n"},
  };
  return list;
}

const Preset* find_preset(const std::string& name) {
  for (const auto& p : presets()) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

std::string config_keys_help() {
  return R"(Configuration keys (key=value, one per line, '#' starts a comment):
  scenario=NAME           preset supplying defaults (heat_check, ternary_uphill, quaternary_reaction)
  species=INT             number of species N+1, >= 3 (required)
  D=LIST                  upper triangle of D, row-major, comma separated (required)
  production=KIND         zero | quaternary | custom               [zero]
  custom_terms=TERMS      i:k:e1 e2 .. e_{N+1};...  adds k*prod c_j^e_j to r_i (i <= N)
  length=X                domain length L                          [1]
  cells=INT               number of cells M                        [128]
  tau=X                   time step                                [1e-3]
  eps=X                   regularization weight                    [1e-8]
  picard_tol=X            fixed-point increment tolerance          [1e-10]
  picard_max=INT          fixed-point iteration budget             [200]
  damping_theta=X         initial damping in (0,1]                 [1]
  eta_floor=X             floor applied to initial data            [1e-8]
  t_end=X                 final time                               [1]
  audit_mode=MODE         enforce | warn                           [enforce]
  initial=KIND            uniform | cosine | step                  [cosine]
  initial_mean=LIST       mean composition (N or N+1 entries)      [uniform]
  initial_amplitude=LIST  cosine amplitudes summing to 0           [0.25/(N+1) on species 1, minus on N+1]
  initial_left=LIST       step: composition on the left
  initial_right=LIST      step: composition on the right
  initial_split=X         step: interface as a fraction of L       [0.5]
  output_dir=PATH         output directory                         [output]
  emit_timeseries=BOOL    write timeseries.csv                     [true]
  emit_snapshots=BOOL     write snapshot_NNNN.csv                  [false]
  emit_audit=BOOL         write audit.json                         [true]
  emit_certify=BOOL       write certify.json from 'certify'        [true]
  snapshot_every=INT      snapshot interval in steps, 0 = first/last only [0]
  samples=INT             certify: number of random states         [100]
  seed=INT                certify: random seed                     [1]
)";
}

}  // namespace mstefan
