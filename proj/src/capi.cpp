#include "kpwave.h"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <string>

#include "json.hpp"
#include "kpwave/grid_io.hpp"
#include "kpwave/kinematics.hpp"
#include "kpwave/linear_theory.hpp"
#include "kpwave/otin.hpp"
#include "kpwave/solutions.hpp"
#include "kpwave/verification.hpp"
#include "kpwave/wave_model.hpp"

struct kpw_spec {
  kpw::WaveSpec spec;
};

struct kpw_field {
  kpw::Field field;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& msg) { g_last_error = msg; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Runs fn, mapping exceptions onto status codes.
template <typename Fn>
kpw_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const kpw::ParseError& e) {
    set_error(e.what());
    return KPW_EINVAL;
  } catch (const std::invalid_argument& e) {
    set_error(e.what());
    return KPW_EINVAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return KPW_ERUNTIME;
  }
}

kpw::GridSpec resolve_grid(const kpw_spec* spec, const kpw_grid* grid) {
  if (grid) {
    kpw::GridSpec g;
    g.x_min = grid->x_min;
    g.x_max = grid->x_max;
    g.y_min = grid->y_min;
    g.y_max = grid->y_max;
    g.nx = grid->nx;
    g.ny = grid->ny;
    g.t = grid->t;
    return g;
  }
  if (spec && spec->spec.grid) return *spec->spec.grid;
  throw std::invalid_argument("no grid given and the spec has no grid block");
}

kpw::Quantity resolve_quantity(kpw_quantity q, double clamp_m) {
  switch (q) {
    case KPW_QUANTITY_RAW:
      return kpw::Quantity::raw();
    case KPW_QUANTITY_LOG:
      return kpw::Quantity::log();
    case KPW_QUANTITY_CLAMP:
      return kpw::Quantity::clamped(clamp_m);
  }
  throw std::invalid_argument("unknown quantity");
}

}  // namespace

extern "C" {

const char* kpw_version(void) { return "kpwave 1.0.0"; }

const char* kpw_last_error(void) { return g_last_error.c_str(); }

void kpw_free(void* ptr) { std::free(ptr); }

kpw_status kpw_spec_parse(const char* json_text, kpw_spec** out) {
  return guarded([&]() {
    if (!json_text || !out) throw std::invalid_argument("null argument");
    *out = new kpw_spec{kpw::load_spec(json_text)};
    return KPW_OK;
  });
}

kpw_status kpw_spec_load_file(const char* path, kpw_spec** out) {
  return guarded([&]() {
    if (!path || !out) throw std::invalid_argument("null argument");
    *out = new kpw_spec{kpw::load_spec_file(path)};
    return KPW_OK;
  });
}

void kpw_spec_free(kpw_spec* spec) { delete spec; }

kpw_status kpw_spec_save(const kpw_spec* spec, char** out_json) {
  return guarded([&]() {
    if (!spec || !out_json) throw std::invalid_argument("null argument");
    *out_json = dup_string(kpw::save_spec(spec->spec));
    return KPW_OK;
  });
}

kpw_status kpw_spec_validate(const kpw_spec* spec, char** out_report,
                             int* n_violations) {
  return guarded([&]() {
    if (!spec) throw std::invalid_argument("null argument");
    kpw::ValidationReport rep = kpw::validate(spec->spec);
    if (out_report) *out_report = dup_string(rep.to_string());
    if (n_violations) *n_violations = static_cast<int>(rep.violations.size());
    return KPW_OK;
  });
}

kpw_status kpw_spec_grid(const kpw_spec* spec, kpw_grid* out) {
  return guarded([&]() {
    if (!spec || !out) throw std::invalid_argument("null argument");
    if (!spec->spec.grid) throw std::invalid_argument("spec has no grid block");
    const kpw::GridSpec& g = *spec->spec.grid;
    *out = kpw_grid{g.x_min, g.x_max, g.y_min, g.y_max, g.nx, g.ny, g.t};
    return KPW_OK;
  });
}

kpw_status kpw_spec_scale(const kpw_spec* spec, double delta, kpw_spec** out) {
  return guarded([&]() {
    if (!spec || !out) throw std::invalid_argument("null argument");
    *out = new kpw_spec{kpw::scale_spec(spec->spec, delta)};
    return KPW_OK;
  });
}

kpw_status kpw_eval_f(const kpw_spec* spec, double x, double y, double t,
                      double* value, int* near_singular) {
  return guarded([&]() {
    if (!spec || !value) throw std::invalid_argument("null argument");
    kpw::EvalResult r = kpw::eval_f(spec->spec, x, y, t);
    *value = r.value;
    if (near_singular) *near_singular = r.near_singular ? 1 : 0;
    return KPW_OK;
  });
}

kpw_status kpw_eval_half_cut(const kpw_spec* spec, int side, double x, double y,
                             double t, double* value) {
  return guarded([&]() {
    if (!spec || !value) throw std::invalid_argument("null argument");
    if (side != 1 && side != -1) throw std::invalid_argument("side must be +1 or -1");
    *value = kpw::eval_half_cut(spec->spec,
                                side > 0 ? kpw::HalfCutSide::TauPositive
                                         : kpw::HalfCutSide::TauNegative,
                                x, y, t);
    return KPW_OK;
  });
}

double kpw_regularize_log(double f) { return kpw::regularize_log(f); }

double kpw_clamp_renormalize(double f, double m) {
  return kpw::clamp_renormalize(f, m);
}

kpw_status kpw_sample_field(const kpw_spec* spec, const kpw_grid* grid,
                            kpw_quantity quantity, double clamp_m, int workers,
                            kpw_field** out) {
  return guarded([&]() {
    if (!spec || !out) throw std::invalid_argument("null argument");
    kpw::ValidationReport rep = kpw::validate(spec->spec);
    if (!rep.ok()) throw std::invalid_argument("invalid spec: " + rep.to_string());
    kpw::GridSpec g = resolve_grid(spec, grid);
    *out = new kpw_field{
        kpw::sample_field(spec->spec, g, resolve_quantity(quantity, clamp_m), workers)};
    return KPW_OK;
  });
}

void kpw_field_free(kpw_field* field) { delete field; }

kpw_status kpw_field_size(const kpw_field* field, int* nx, int* ny) {
  return guarded([&]() {
    if (!field) throw std::invalid_argument("null argument");
    if (nx) *nx = field->field.grid.nx;
    if (ny) *ny = field->field.grid.ny;
    return KPW_OK;
  });
}

kpw_status kpw_field_value(const kpw_field* field, int i, int j, double* value,
                           int* masked) {
  return guarded([&]() {
    if (!field || !value) throw std::invalid_argument("null argument");
    const kpw::Field& f = field->field;
    if (i < 0 || i >= f.grid.ny || j < 0 || j >= f.grid.nx)
      throw std::invalid_argument("index out of range");
    *value = f.at(i, j);
    if (masked) *masked = f.masked(i, j) ? 1 : 0;
    return KPW_OK;
  });
}

kpw_status kpw_field_raw_max(const kpw_field* field, double* value, double* x,
                             double* y) {
  return guarded([&]() {
    if (!field || !value) throw std::invalid_argument("null argument");
    int i = 0, j = 0;
    *value = field->field.raw_max(&i, &j);
    if (x) *x = field->field.grid.x_at(j);
    if (y) *y = field->field.grid.y_at(i);
    return KPW_OK;
  });
}

kpw_status kpw_field_export(const kpw_field* field, kpw_format format,
                            char** out_bytes) {
  return guarded([&]() {
    if (!field || !out_bytes) throw std::invalid_argument("null argument");
    *out_bytes = dup_string(format == KPW_FORMAT_CSV ? kpw::export_csv(field->field)
                                                     : kpw::export_pgm(field->field));
    return KPW_OK;
  });
}

kpw_status kpw_field_save(const kpw_field* field, kpw_format format,
                          const char* path) {
  return guarded([&]() {
    if (!field || !path) throw std::invalid_argument("null argument");
    kpw::write_file(path, format == KPW_FORMAT_CSV ? kpw::export_csv(field->field)
                                                   : kpw::export_pgm(field->field));
    return KPW_OK;
  });
}

kpw_status kpw_contour_band(const kpw_field* field, double lower, double upper,
                            int* n_cells, char** out_csv) {
  return guarded([&]() {
    if (!field) throw std::invalid_argument("null argument");
    kpw::ContourBand band = kpw::contour_band(field->field, lower, upper);
    if (n_cells) *n_cells = static_cast<int>(band.cells.size());
    if (out_csv) {
      std::string csv = "i,j,x,y,value\n";
      for (auto [i, j] : band.cells) {
        char line[160];
        std::snprintf(line, sizeof(line), "%d,%d,%.17g,%.17g,%.17g\n", i, j,
                      field->field.grid.x_at(j), field->field.grid.y_at(i),
                      field->field.at(i, j));
        csv += line;
      }
      *out_csv = dup_string(csv);
    }
    return KPW_OK;
  });
}

kpw_status kpw_velocity(const kpw_spec* spec, kpw_velocity_result* out) {
  return guarded([&]() {
    if (!spec || !out) throw std::invalid_argument("null argument");
    const kpw::WaveSpec& s = spec->spec;
    kpw::VelocityResult r;
    if (const auto* w = std::get_if<kpw::SolitonWallParams>(&s.params)) {
      r = kpw::wall_velocity(*w, s.alpha);
    } else if (const auto* ws = std::get_if<kpw::WallSuperpositionParams>(&s.params)) {
      if (ws->walls.size() == 1) {
        r = kpw::wall_velocity(ws->walls[0], s.alpha);
      } else if (ws->walls.size() == 2) {
        r = kpw::two_wall_velocity(ws->walls[0], ws->walls[1], s.alpha);
      } else {
        throw std::invalid_argument(
            "no profile velocity is defined for three or more walls");
      }
    } else if (const auto* b = std::get_if<kpw::BreatherParams>(&s.params)) {
      r = kpw::breather_velocity(*b, s.alpha);
    } else {
      const auto& bs = std::get<kpw::BreatherSuperpositionParams>(s.params);
      if (bs.breathers.size() != 1)
        throw std::invalid_argument(
            "no profile velocity is defined for breather superpositions");
      r = kpw::breather_velocity(bs.breathers[0], s.alpha);
    }
    out->kind = static_cast<int>(r.kind);
    out->vx = r.vx;
    out->vy = r.vy;
    out->dir_x = r.dir_x;
    out->dir_y = r.dir_y;
    std::snprintf(out->reason, sizeof(out->reason), "%s", r.reason.c_str());
    return KPW_OK;
  });
}

kpw_status kpw_to_physical(const kpw_spec* spec, double x, double y, double t,
                           double f, double* x_prime, double* y_prime,
                           double* t_prime, double* eta0, double* height_m) {
  return guarded([&]() {
    if (!spec) throw std::invalid_argument("null argument");
    if (!spec->spec.physical)
      throw std::invalid_argument("spec has no physical block");
    kpw::FrameMap map(*spec->spec.physical);
    kpw::PhysicalPoint p = kpw::to_physical(x, y, t, f, map);
    if (x_prime) *x_prime = p.x_prime;
    if (y_prime) *y_prime = p.y_prime;
    if (t_prime) *t_prime = p.t_prime;
    if (eta0) *eta0 = p.eta0;
    if (height_m) *height_m = p.height_m;
    return KPW_OK;
  });
}

kpw_status kpw_residual_json(const kpw_spec* spec, const kpw_grid* grid,
                             double fd_step, char** out_json) {
  return guarded([&]() {
    if (!spec || !out_json) throw std::invalid_argument("null argument");
    if (!(fd_step > 0)) throw std::invalid_argument("fd_step must be positive");
    kpw::ValidationReport rep = kpw::validate(spec->spec);
    if (!rep.ok()) throw std::invalid_argument("invalid spec: " + rep.to_string());
    kpw::ResidualReport r =
        kpw::kp_residual(spec->spec, resolve_grid(spec, grid), fd_step);
    *out_json = dup_string(r.to_json());
    return KPW_OK;
  });
}

kpw_status kpw_dispersion_csv(const kpw_spec* spec, double k_min, double k_max,
                              int n, double l, char** out_csv) {
  return guarded([&]() {
    if (!spec || !out_csv) throw std::invalid_argument("null argument");
    if (!spec->spec.physical)
      throw std::invalid_argument("spec has no physical block");
    if (n < 2 || !(k_min < k_max) || k_min == 0.0)
      throw std::invalid_argument("bad k range");
    const kpw::PhysicalContext& ctx = *spec->spec.physical;
    std::string csv = "k,omega_exact,omega_kp\n";
    for (int i = 0; i < n; ++i) {
      double k = k_min + (k_max - k_min) * i / (n - 1);
      char line[128];
      std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", k,
                    kpw::dispersion_exact(k, l, ctx), kpw::dispersion_kp(k, l, ctx));
      csv += line;
    }
    *out_csv = dup_string(csv);
    return KPW_OK;
  });
}

kpw_status kpw_singular_curve_csv(const kpw_spec* spec, const kpw_grid* grid,
                                  char** out_csv) {
  return guarded([&]() {
    if (!spec || !out_csv) throw std::invalid_argument("null argument");
    kpw::SingularCurve curve =
        kpw::extract_singular_curve(spec->spec, resolve_grid(spec, grid));
    std::string csv = "chain,x,y\n";
    for (size_t c = 0; c < curve.chains.size(); ++c)
      for (const auto& pt : curve.chains[c]) {
        char line[128];
        std::snprintf(line, sizeof(line), "%zu,%.17g,%.17g\n", c, pt[0], pt[1]);
        csv += line;
      }
    *out_csv = dup_string(csv);
    return KPW_OK;
  });
}

kpw_status kpw_otin_scan_json(const kpw_spec* spec, const kpw_grid* grid,
                              const double* t_values, int n_t,
                              kpw_quantity render_quantity, double clamp_m,
                              const char* export_dir, char** out_json) {
  return guarded([&]() {
    if (!spec || !out_json) throw std::invalid_argument("null argument");
    kpw::ValidationReport vrep = kpw::validate(spec->spec);
    if (!vrep.ok()) throw std::invalid_argument("invalid spec: " + vrep.to_string());

    std::vector<double> peak_ts = kpw::default_peak_times();
    std::vector<double> bg_ts = kpw::default_background_times();
    std::vector<double> ts;
    if (t_values && n_t > 0) {
      ts.assign(t_values, t_values + n_t);
    } else {
      ts = bg_ts;
      ts.insert(ts.end(), peak_ts.begin(), peak_ts.end());
      std::sort(ts.begin(), ts.end());
    }

    kpw::SweepConfig cfg;
    cfg.spec = spec->spec;
    cfg.window = resolve_grid(spec, grid);
    cfg.t_values = ts;
    cfg.quantity = resolve_quantity(render_quantity, clamp_m);
    std::vector<kpw::SweepFrame> frames = kpw::sweep(cfg);

    if (export_dir) {
      std::filesystem::create_directories(export_dir);
      for (size_t i = 0; i < frames.size(); ++i) {
        char name[64];
        std::snprintf(name, sizeof(name), "frame_%03zu.csv", i);
        kpw::write_file(std::string(export_dir) + "/" + name,
                        kpw::export_csv(frames[i].field));
      }
    }

    nlohmann::json j;
    j["frames"] = nlohmann::json::array();
    for (const auto& fr : frames)
      j["frames"].push_back({{"t", fr.t},
                             {"raw_max", fr.raw_max},
                             {"x", fr.max_x},
                             {"y", fr.max_y}});
    if (!t_values) {
      kpw::OtinEvent ev = kpw::detect_otin(frames, bg_ts, peak_ts);
      j["event"] = {{"t_peak", ev.t_peak},       {"x", ev.x},
                    {"y", ev.y},                 {"peak_value", ev.peak_value},
                    {"background_value", ev.background_value},
                    {"ratio", ev.ratio}};
    }
    *out_json = dup_string(j.dump(2) + "\n");
    return KPW_OK;
  });
}

}  // extern "C"
