#include "kpwave/wave_model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kpw {

using nlohmann::json;

const char* family_name(BreatherFamily f) {
  switch (f) {
    case BreatherFamily::Harmonic:
      return "harmonic_breather";
    case BreatherFamily::Hyperbolic:
      return "hyperbolic_breather";
    case BreatherFamily::Cosh:
      return "cosh_breather";
  }
  return "?";
}

double PhysicalContext::alpha2_phys() const {
  return 2.0 * rho_density * g / (rho_density * g * h * h - 3.0 * s_tension);
}

std::string ValidationReport::to_string() const {
  std::ostringstream os;
  for (const auto& v : violations) os << v.where << ": " << v.what << "\n";
  return os.str();
}

namespace {

constexpr double kDenomTol = 1e-12;

bool denom_ok(double value, double scale) {
  return std::abs(value) > kDenomTol * std::max(1.0, scale);
}

void check_wall(const SolitonWallParams& w, const std::string& where,
                ValidationReport& r) {
  if (!std::isfinite(w.p) || !std::isfinite(w.q) || !std::isfinite(w.c))
    r.violations.push_back({where, "non-finite parameter"});
  if (!denom_ok(w.p + w.q, std::abs(w.p) + std::abs(w.q)))
    r.violations.push_back({where, "p+q = 0"});
}

void check_breather(const BreatherParams& b, const std::string& where,
                    ValidationReport& r) {
  if (!std::isfinite(b.lambda) || !std::isfinite(b.mu) || !std::isfinite(b.chi) ||
      !std::isfinite(b.gamma) || !std::isfinite(b.rho))
    r.violations.push_back({where, "non-finite parameter"});
  if (b.lambda == 0.0) r.violations.push_back({where, "lambda = 0"});
  if (b.gamma_half_pi_shift && b.family != BreatherFamily::Cosh)
    r.violations.push_back({where, "gamma_half_pi_shift is only defined for the cosh family"});
}

}  // namespace

ValidationReport validate(const WaveSpec& spec) {
  ValidationReport r;
  if (const auto* w = std::get_if<SolitonWallParams>(&spec.params)) {
    check_wall(*w, "wall", r);
  } else if (const auto* ws = std::get_if<WallSuperpositionParams>(&spec.params)) {
    if (ws->walls.empty()) r.violations.push_back({"walls", "empty superposition"});
    for (size_t n = 0; n < ws->walls.size(); ++n)
      check_wall(ws->walls[n], "walls[" + std::to_string(n) + "]", r);
    for (size_t n = 0; n < ws->walls.size(); ++n)
      for (size_t m = 0; m < ws->walls.size(); ++m) {
        double d = ws->walls[n].p + ws->walls[m].q;
        if (!denom_ok(d, std::abs(ws->walls[n].p) + std::abs(ws->walls[m].q)))
          r.violations.push_back({"walls(" + std::to_string(n) + "," + std::to_string(m) + ")",
                                  "p_n + q_m = 0"});
      }
  } else if (const auto* b = std::get_if<BreatherParams>(&spec.params)) {
    check_breather(*b, "breather", r);
    if (b->family == BreatherFamily::Cosh && spec.alpha != AlphaSign::PlusOne)
      r.violations.push_back({"breather", "cosh family requires alpha_squared = +1"});
  } else if (const auto* bs = std::get_if<BreatherSuperpositionParams>(&spec.params)) {
    if (bs->breathers.empty()) r.violations.push_back({"breathers", "empty superposition"});
    for (size_t n = 0; n < bs->breathers.size(); ++n) {
      check_breather(bs->breathers[n], "breathers[" + std::to_string(n) + "]", r);
      if (n > 0 && bs->breathers[n].family != bs->breathers[0].family)
        r.violations.push_back({"breathers[" + std::to_string(n) + "]", "mixed families"});
    }
    if (!bs->breathers.empty()) {
      BreatherFamily fam = bs->breathers[0].family;
      if (fam == BreatherFamily::Cosh && bs->breathers.size() > 1)
        r.violations.push_back({"breathers", "cosh family has no N>1 superposition"});
      if (fam == BreatherFamily::Cosh && spec.alpha != AlphaSign::PlusOne)
        r.violations.push_back({"breathers", "cosh family requires alpha_squared = +1"});
      double a = alpha_squared(spec.alpha);
      int sgn = fam == BreatherFamily::Hyperbolic ? -1 : 1;
      if (fam != BreatherFamily::Cosh) {
        for (size_t n = 0; n < bs->breathers.size(); ++n)
          for (size_t k = 0; k < n; ++k) {
            double dm = bs->breathers[n].mu - bs->breathers[k].mu;
            for (double lsum : {bs->breathers[n].lambda - bs->breathers[k].lambda,
                                bs->breathers[n].lambda + bs->breathers[k].lambda}) {
              double denom = a * dm * dm + sgn * lsum * lsum;
              if (!denom_ok(denom, dm * dm + lsum * lsum))
                r.violations.push_back(
                    {"breathers(" + std::to_string(n) + "," + std::to_string(k) + ")",
                     "vanishing pair denominator"});
            }
          }
      }
    }
  }
  if (spec.grid) {
    const GridSpec& g = *spec.grid;
    if (!(g.x_min < g.x_max)) r.violations.push_back({"grid", "x_min >= x_max"});
    if (!(g.y_min < g.y_max)) r.violations.push_back({"grid", "y_min >= y_max"});
    if (g.nx < 2) r.violations.push_back({"grid", "nx < 2"});
    if (g.ny < 2) r.violations.push_back({"grid", "ny < 2"});
  }
  if (spec.physical) {
    const PhysicalContext& c = *spec.physical;
    if (!(c.g > 0)) r.violations.push_back({"physical", "g <= 0"});
    if (!(c.h > 0)) r.violations.push_back({"physical", "h <= 0"});
    if (!(c.rho_density > 0)) r.violations.push_back({"physical", "rho <= 0"});
    if (c.s_tension < 0) r.violations.push_back({"physical", "s < 0"});
    if (!(c.epsilon > 0)) r.violations.push_back({"physical", "epsilon <= 0"});
    double denom = c.rho_density * c.g * c.h * c.h - 3.0 * c.s_tension;
    if (!denom_ok(denom, c.rho_density * c.g * c.h * c.h + 3.0 * c.s_tension))
      r.violations.push_back({"physical", "rho*g*h^2 = 3*s (alpha2_phys undefined)"});
  }
  return r;
}

namespace {

int line_of_offset(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

BreatherFamily family_from_name(const std::string& name) {
  if (name == "harmonic_breather") return BreatherFamily::Harmonic;
  if (name == "hyperbolic_breather") return BreatherFamily::Hyperbolic;
  if (name == "cosh_breather") return BreatherFamily::Cosh;
  throw ParseError("unknown family \"" + name + "\"");
}

double num_field(const json& j, const char* key, std::optional<double> def = {}) {
  if (!j.contains(key)) {
    if (def) return *def;
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  if (!j[key].is_number()) throw ParseError(std::string("field \"") + key + "\" is not a number");
  return j[key].get<double>();
}

SolitonWallParams wall_from_json(const json& j) {
  SolitonWallParams w;
  w.p = num_field(j, "p");
  w.q = num_field(j, "q");
  w.c = num_field(j, "c");
  return w;
}

BreatherParams breather_from_json(const json& j, BreatherFamily fam) {
  BreatherParams b;
  b.family = fam;
  b.lambda = num_field(j, "lambda");
  b.mu = num_field(j, "mu");
  b.chi = num_field(j, "chi", 0.0);
  b.gamma = num_field(j, "gamma", 0.0);
  b.rho = num_field(j, "rho", 0.0);
  if (j.contains("gamma_half_pi_shift")) {
    if (!j["gamma_half_pi_shift"].is_boolean())
      throw ParseError("field \"gamma_half_pi_shift\" is not a boolean");
    b.gamma_half_pi_shift = j["gamma_half_pi_shift"].get<bool>();
  }
  return b;
}

json wall_to_json(const SolitonWallParams& w) {
  return json{{"p", w.p}, {"q", w.q}, {"c", w.c}};
}

json breather_to_json(const BreatherParams& b) {
  json j{{"lambda", b.lambda}, {"mu", b.mu}, {"chi", b.chi},
         {"gamma", b.gamma},   {"rho", b.rho}};
  if (b.gamma_half_pi_shift) j["gamma_half_pi_shift"] = true;
  return j;
}

}  // namespace

WaveSpec load_spec(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError("parse error at line " + std::to_string(line_of_offset(text, e.byte)) +
                     ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError("top level is not an object");
  if (!doc.contains("family")) throw ParseError("missing field \"family\"");
  std::string fam = doc["family"].get<std::string>();

  WaveSpec spec;
  if (doc.contains("alpha_squared")) {
    int a = doc["alpha_squared"].get<int>();
    if (a != 1 && a != -1) throw ParseError("alpha_squared must be +1 or -1");
    spec.alpha = a == 1 ? AlphaSign::PlusOne : AlphaSign::MinusOne;
  }

  if (!doc.contains("params")) throw ParseError("missing field \"params\"");
  const json& p = doc["params"];
  if (fam == "soliton_wall") {
    if (p.is_object()) {
      spec.params = wall_from_json(p);
    } else if (p.is_array()) {
      WallSuperpositionParams ws;
      for (const auto& e : p) ws.walls.push_back(wall_from_json(e));
      spec.params = std::move(ws);
    } else {
      throw ParseError("\"params\" must be an object or an array of objects");
    }
  } else {
    BreatherFamily f = family_from_name(fam);
    if (p.is_object()) {
      spec.params = breather_from_json(p, f);
    } else if (p.is_array()) {
      BreatherSuperpositionParams bs;
      for (const auto& e : p) bs.breathers.push_back(breather_from_json(e, f));
      spec.params = std::move(bs);
    } else {
      throw ParseError("\"params\" must be an object or an array of objects");
    }
  }

  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    GridSpec gs;
    gs.x_min = num_field(g, "x_min");
    gs.x_max = num_field(g, "x_max");
    gs.y_min = num_field(g, "y_min");
    gs.y_max = num_field(g, "y_max");
    gs.nx = static_cast<int>(num_field(g, "nx"));
    gs.ny = static_cast<int>(num_field(g, "ny"));
    gs.t = num_field(g, "t", 0.0);
    spec.grid = gs;
  }
  if (doc.contains("physical")) {
    const json& f = doc["physical"];
    PhysicalContext ctx;
    ctx.g = num_field(f, "g");
    ctx.h = num_field(f, "h");
    ctx.rho_density = num_field(f, "rho");
    ctx.s_tension = num_field(f, "s", 0.0);
    ctx.epsilon = num_field(f, "epsilon");
    spec.physical = ctx;
  }
  return spec;
}

std::string save_spec(const WaveSpec& spec) {
  json doc;
  doc["alpha_squared"] = alpha_squared(spec.alpha);
  if (const auto* w = std::get_if<SolitonWallParams>(&spec.params)) {
    doc["family"] = "soliton_wall";
    doc["params"] = wall_to_json(*w);
  } else if (const auto* ws = std::get_if<WallSuperpositionParams>(&spec.params)) {
    doc["family"] = "soliton_wall";
    doc["params"] = json::array();
    for (const auto& w2 : ws->walls) doc["params"].push_back(wall_to_json(w2));
  } else if (const auto* b = std::get_if<BreatherParams>(&spec.params)) {
    doc["family"] = family_name(b->family);
    doc["params"] = breather_to_json(*b);
  } else {
    const auto& bs = std::get<BreatherSuperpositionParams>(spec.params);
    doc["family"] = family_name(bs.breathers.empty() ? BreatherFamily::Harmonic
                                                     : bs.breathers[0].family);
    doc["params"] = json::array();
    for (const auto& b2 : bs.breathers) doc["params"].push_back(breather_to_json(b2));
  }
  if (spec.grid) {
    const GridSpec& g = *spec.grid;
    doc["grid"] = json{{"x_min", g.x_min}, {"x_max", g.x_max}, {"y_min", g.y_min},
                       {"y_max", g.y_max}, {"nx", g.nx},       {"ny", g.ny},
                       {"t", g.t}};
  }
  if (spec.physical) {
    const PhysicalContext& c = *spec.physical;
    doc["physical"] = json{{"g", c.g},
                           {"h", c.h},
                           {"rho", c.rho_density},
                           {"s", c.s_tension},
                           {"epsilon", c.epsilon}};
  }
  return doc.dump(2) + "\n";
}

WaveSpec load_spec_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open \"" + path + "\"");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_spec(buf.str());
}

void save_spec_file(const WaveSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
  out << save_spec(spec);
}

}  // namespace kpw
