// Command-line front end; links the kpwave C API only.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kpwave.h"

namespace {

struct Options {
  std::string spec_path;
  std::string out_path;
  std::string quantity = "raw";
  std::string grid_csv;
  std::string t_csv;
};

int fail(kpw_status st) {
  std::fprintf(stderr, "error: %s\n", kpw_last_error());
  return st == KPW_EINVAL ? 1 : 2;
}

struct SpecHandle {
  kpw_spec* ptr = nullptr;
  ~SpecHandle() { kpw_spec_free(ptr); }
};

struct FieldHandle {
  kpw_field* ptr = nullptr;
  ~FieldHandle() { kpw_field_free(ptr); }
};

struct CStr {
  char* ptr = nullptr;
  ~CStr() { kpw_free(ptr); }
};

int load_and_validate(const Options& opt, SpecHandle& spec) {
  if (opt.spec_path.empty()) {
    std::fprintf(stderr, "error: --spec is required\n");
    return 1;
  }
  kpw_status st = kpw_spec_load_file(opt.spec_path.c_str(), &spec.ptr);
  if (st != KPW_OK) return fail(st);
  CStr report;
  int violations = 0;
  st = kpw_spec_validate(spec.ptr, &report.ptr, &violations);
  if (st != KPW_OK) return fail(st);
  if (violations > 0) {
    std::fprintf(stderr, "invalid spec:\n%s", report.ptr);
    return 1;
  }
  return 0;
}

bool parse_doubles(const std::string& csv, std::vector<double>& out) {
  out.clear();
  size_t pos = 0;
  while (pos <= csv.size()) {
    size_t comma = csv.find(',', pos);
    std::string tok = csv.substr(pos, comma == std::string::npos ? std::string::npos
                                                                 : comma - pos);
    if (tok.empty()) return false;
    char* end = nullptr;
    out.push_back(std::strtod(tok.c_str(), &end));
    if (end == tok.c_str() || *end != '\0') return false;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return !out.empty();
}

// --grid x0,x1,y0,y1,nx,ny (+ optional --t); falls back to the spec's block.
int resolve_grid(const Options& opt, const SpecHandle& spec, kpw_grid& grid,
                 bool& have) {
  have = false;
  if (!opt.grid_csv.empty()) {
    std::vector<double> v;
    if (!parse_doubles(opt.grid_csv, v) || v.size() != 6) {
      std::fprintf(stderr, "error: --grid expects x0,x1,y0,y1,nx,ny\n");
      return 1;
    }
    grid = kpw_grid{v[0], v[1], v[2], v[3], static_cast<int>(v[4]),
                    static_cast<int>(v[5]), 0.0};
    have = true;
  } else if (kpw_spec_grid(spec.ptr, &grid) == KPW_OK) {
    have = true;
  }
  if (have && !opt.t_csv.empty()) {
    std::vector<double> ts;
    if (!parse_doubles(opt.t_csv, ts) || ts.size() != 1) {
      std::fprintf(stderr, "error: --t expects a single value here\n");
      return 1;
    }
    grid.t = ts[0];
  }
  return 0;
}

int parse_quantity(const std::string& q, kpw_quantity& kind, double& clamp_m) {
  if (q == "raw") {
    kind = KPW_QUANTITY_RAW;
  } else if (q == "log") {
    kind = KPW_QUANTITY_LOG;
  } else if (q.rfind("clamp:", 0) == 0) {
    kind = KPW_QUANTITY_CLAMP;
    clamp_m = std::atof(q.c_str() + 6);
    if (!(clamp_m > 0)) {
      std::fprintf(stderr, "error: clamp level must be positive\n");
      return 1;
    }
  } else {
    std::fprintf(stderr, "error: --quantity must be raw, log or clamp:<M>\n");
    return 1;
  }
  return 0;
}

int write_or_print(const Options& opt, const char* bytes) {
  if (opt.out_path.empty()) {
    std::fputs(bytes, stdout);
    return 0;
  }
  FILE* f = std::fopen(opt.out_path.c_str(), "wb");
  if (!f) {
    std::fprintf(stderr, "error: cannot open %s\n", opt.out_path.c_str());
    return 2;
  }
  std::fputs(bytes, f);
  std::fclose(f);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpwave: explicit singular KP wave fields, kinematics and analysis"};
  app.require_subcommand(0, 1);
  app.fallthrough();

  Options opt;
  app.add_option("--spec", opt.spec_path, "parameter file (JSON)");
  app.add_option("--out", opt.out_path, "output path (default: stdout)");
  app.add_option("--quantity", opt.quantity, "raw | log | clamp:<M>");
  app.add_option("--grid", opt.grid_csv, "x0,x1,y0,y1,nx,ny");
  app.add_option("--t", opt.t_csv, "time value (or list for otin-scan)");

  std::string point_csv, format = "auto";
  double delta = 1.0, fd_step = 1e-2, f_override = 0.0;
  bool have_f_override = false;
  double k_min = 0.01, k_max = 1.0, l_transverse = 0.0;
  int n_samples = 50;
  double band_lo = 0.0, band_hi = 0.6;

  CLI::App* c_eval = app.add_subcommand("eval", "evaluate f at a point");
  c_eval->add_option("--point", point_csv, "x,y,t")->required();

  CLI::App* c_render = app.add_subcommand("render", "sample a field and export it");
  c_render->add_option("--format", format, "csv | pgm | auto (from --out suffix)");

  CLI::App* c_res = app.add_subcommand("residual", "KP residual report (JSON)");
  c_res->add_option("--fd-step", fd_step, "finite-difference step (default 1e-2)");

  app.add_subcommand("velocity", "profile velocity of the spec");

  CLI::App* c_disp = app.add_subcommand("dispersion", "dispersion table (CSV)");
  c_disp->add_option("--k-min", k_min, "lowest wavenumber");
  c_disp->add_option("--k-max", k_max, "highest wavenumber");
  c_disp->add_option("--n", n_samples, "number of samples");
  c_disp->add_option("--l", l_transverse, "transverse wavenumber");

  CLI::App* c_otin = app.add_subcommand("otin-scan", "time sweep + event summary");
  c_otin->add_option("--frames-dir", opt.out_path,
                     "directory for per-frame CSV exports")
      ->ignore_case();

  app.add_subcommand("singular-curve", "marching-squares tau = 0 set (CSV)");

  CLI::App* c_scale = app.add_subcommand("scale", "apply the parameter scaling map");
  c_scale->add_option("--delta", delta, "scaling factor")->required();

  CLI::App* c_phys = app.add_subcommand("to-physical", "map a point to primed frame");
  c_phys->add_option("--point", point_csv, "x,y,t")->required();
  c_phys->add_option("--f", f_override, "use this f instead of evaluating")
      ->each([&](const std::string&) { have_f_override = true; });

  CLI::App* c_band = app.add_subcommand("contour-band", "cells with lo < f < hi");
  c_band->add_option("--lower", band_lo, "band lower bound");
  c_band->add_option("--upper", band_hi, "band upper bound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  if (app.get_subcommands().empty()) {
    std::fputs(app.help().c_str(), stderr);
    return 1;
  }
  CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();

  SpecHandle spec;
  if (int rc = load_and_validate(opt, spec); rc != 0) return rc;

  kpw_quantity qkind = KPW_QUANTITY_RAW;
  double clamp_m = 10.0;
  if (int rc = parse_quantity(opt.quantity, qkind, clamp_m); rc != 0) return rc;

  if (name == "eval") {
    std::vector<double> pt;
    if (!parse_doubles(point_csv, pt) || pt.size() != 3) {
      std::fprintf(stderr, "error: --point expects x,y,t\n");
      return 1;
    }
    double value = 0;
    int near = 0;
    kpw_status st = kpw_eval_f(spec.ptr, pt[0], pt[1], pt[2], &value, &near);
    if (st != KPW_OK) return fail(st);
    std::printf("%.17g%s\n", value, near ? " (near-singular)" : "");
    return 0;
  }

  if (name == "render") {
    kpw_grid grid;
    bool have = false;
    if (int rc = resolve_grid(opt, spec, grid, have); rc != 0) return rc;
    if (!have) {
      std::fprintf(stderr, "error: render needs --grid or a grid block\n");
      return 1;
    }
    FieldHandle field;
    kpw_status st =
        kpw_sample_field(spec.ptr, &grid, qkind, clamp_m, 0, &field.ptr);
    if (st != KPW_OK) return fail(st);
    kpw_format fmt = KPW_FORMAT_PGM;
    if (format == "csv") fmt = KPW_FORMAT_CSV;
    else if (format == "pgm") fmt = KPW_FORMAT_PGM;
    else if (opt.out_path.size() >= 4 &&
             opt.out_path.substr(opt.out_path.size() - 4) == ".csv")
      fmt = KPW_FORMAT_CSV;
    if (opt.out_path.empty()) {
      CStr bytes;
      st = kpw_field_export(field.ptr, fmt, &bytes.ptr);
      if (st != KPW_OK) return fail(st);
      std::fputs(bytes.ptr, stdout);
    } else {
      st = kpw_field_save(field.ptr, fmt, opt.out_path.c_str());
      if (st != KPW_OK) return fail(st);
      std::printf("wrote %s\n", opt.out_path.c_str());
    }
    return 0;
  }

  if (name == "residual") {
    kpw_grid grid;
    bool have = false;
    if (int rc = resolve_grid(opt, spec, grid, have); rc != 0) return rc;
    CStr json;
    kpw_status st = kpw_residual_json(spec.ptr, have ? &grid : nullptr, fd_step,
                                      &json.ptr);
    if (st != KPW_OK) return fail(st);
    return write_or_print(opt, json.ptr);
  }

  if (name == "velocity") {
    kpw_velocity_result v;
    kpw_status st = kpw_velocity(spec.ptr, &v);
    if (st != KPW_OK) return fail(st);
    if (v.kind == 0)
      std::printf("unique: vx=%.17g vy=%.17g\n", v.vx, v.vy);
    else if (v.kind == 1)
      std::printf("line: base=(%.17g, %.17g) direction=(%.17g, %.17g)\n", v.vx,
                  v.vy, v.dir_x, v.dir_y);
    else
      std::printf("degenerate: %s\n", v.reason);
    return 0;
  }

  if (name == "dispersion") {
    CStr csv;
    kpw_status st = kpw_dispersion_csv(spec.ptr, k_min, k_max, n_samples,
                                       l_transverse, &csv.ptr);
    if (st != KPW_OK) return fail(st);
    return write_or_print(opt, csv.ptr);
  }

  if (name == "otin-scan") {
    kpw_grid grid;
    bool have = false;
    std::string save_t = opt.t_csv;
    opt.t_csv.clear();  // --t is a frame list here, not a grid override
    if (int rc = resolve_grid(opt, spec, grid, have); rc != 0) return rc;
    std::vector<double> ts;
    if (!save_t.empty() && !parse_doubles(save_t, ts)) {
      std::fprintf(stderr, "error: --t expects a comma-separated list\n");
      return 1;
    }
    CStr json;
    kpw_status st = kpw_otin_scan_json(
        spec.ptr, have ? &grid : nullptr, ts.empty() ? nullptr : ts.data(),
        static_cast<int>(ts.size()), qkind, clamp_m,
        opt.out_path.empty() ? nullptr : opt.out_path.c_str(), &json.ptr);
    if (st != KPW_OK) return fail(st);
    std::fputs(json.ptr, stdout);
    return 0;
  }

  if (name == "singular-curve") {
    kpw_grid grid;
    bool have = false;
    if (int rc = resolve_grid(opt, spec, grid, have); rc != 0) return rc;
    CStr csv;
    kpw_status st =
        kpw_singular_curve_csv(spec.ptr, have ? &grid : nullptr, &csv.ptr);
    if (st != KPW_OK) return fail(st);
    return write_or_print(opt, csv.ptr);
  }

  if (name == "scale") {
    kpw_spec* scaled = nullptr;
    kpw_status st = kpw_spec_scale(spec.ptr, delta, &scaled);
    if (st != KPW_OK) return fail(st);
    SpecHandle holder;
    holder.ptr = scaled;
    CStr json;
    st = kpw_spec_save(scaled, &json.ptr);
    if (st != KPW_OK) return fail(st);
    return write_or_print(opt, json.ptr);
  }

  if (name == "to-physical") {
    std::vector<double> pt;
    if (!parse_doubles(point_csv, pt) || pt.size() != 3) {
      std::fprintf(stderr, "error: --point expects x,y,t\n");
      return 1;
    }
    double f = f_override;
    if (!have_f_override) {
      int near = 0;
      kpw_status st = kpw_eval_f(spec.ptr, pt[0], pt[1], pt[2], &f, &near);
      if (st != KPW_OK) return fail(st);
    }
    double xp, yp, tp, eta0, height;
    kpw_status st =
        kpw_to_physical(spec.ptr, pt[0], pt[1], pt[2], f, &xp, &yp, &tp, &eta0, &height);
    if (st != KPW_OK) return fail(st);
    std::printf("x'=%.17g y'=%.17g t'=%.17g eta0=%.17g height_m=%.17g\n", xp, yp,
                tp, eta0, height);
    return 0;
  }

  if (name == "contour-band") {
    kpw_grid grid;
    bool have = false;
    if (int rc = resolve_grid(opt, spec, grid, have); rc != 0) return rc;
    if (!have) {
      std::fprintf(stderr, "error: contour-band needs --grid or a grid block\n");
      return 1;
    }
    FieldHandle field;
    kpw_status st = kpw_sample_field(spec.ptr, &grid, qkind, clamp_m, 0, &field.ptr);
    if (st != KPW_OK) return fail(st);
    int n = 0;
    CStr csv;
    st = kpw_contour_band(field.ptr, band_lo, band_hi, &n, &csv.ptr);
    if (st != KPW_OK) return fail(st);
    std::fprintf(stderr, "# %d cells in band\n", n);
    return write_or_print(opt, csv.ptr);
  }

  std::fputs(app.help().c_str(), stderr);
  return 1;
}
