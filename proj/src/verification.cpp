#include "kpwave/verification.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <thread>

#include "json.hpp"
#include "kpwave/solutions.hpp"
#include "kpwave/tau_kernel.hpp"

namespace kpw {

std::string ResidualReport::to_json() const {
  nlohmann::json j{{"fd_step", fd_step},
                   {"stencil_order", stencil_order},
                   {"residual_linf", residual_linf},
                   {"residual_l2", residual_l2},
                   {"residual_linf_half_step", residual_linf_half},
                   {"residual_l2_half_step", residual_l2_half},
                   {"observed_order", observed_order},
                   {"included_cells", included_cells},
                   {"excluded_cells", excluded_cells},
                   {"step_warning", step_warning},
                   {"field_scale", field_scale},
                   {"grid", {{"x_min", grid.x_min},
                             {"x_max", grid.x_max},
                             {"y_min", grid.y_min},
                             {"y_max", grid.y_max},
                             {"nx", grid.nx},
                             {"ny", grid.ny},
                             {"t", grid.t}}}};
  return j.dump(2) + "\n";
}

namespace {

struct OperatorCoeffs {
  double c_tx;     // mixed d2/dtdx
  double c_xx;     // d2/dx2
  double c_xxxx;   // d4/dx4
  double c_nl;     // times (f_x^2 + f f_xx)
  double c_yy;     // d2/dy2
};

double residual_at(const FieldFn& f, const OperatorCoeffs& op, double x, double y,
                   double t, double h, bool* ok, double* f_center = nullptr) {
  bool good = true;
  auto ev = [&](double xx, double yy, double tt) {
    bool pt_ok = true;
    double v = f(xx, yy, tt, &pt_ok);
    if (!pt_ok || !std::isfinite(v)) good = false;
    return v;
  };
  double fm3 = ev(x - 3 * h, y, t), fm2 = ev(x - 2 * h, y, t), fm1 = ev(x - h, y, t);
  double f0 = ev(x, y, t);
  double fp1 = ev(x + h, y, t), fp2 = ev(x + 2 * h, y, t), fp3 = ev(x + 3 * h, y, t);

  double fx = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
  double fxx = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
  double fxxxx = (-fm3 / 6.0 + 2.0 * fm2 - 6.5 * fm1 + (28.0 / 3.0) * f0 - 6.5 * fp1 +
                  2.0 * fp2 - fp3 / 6.0) /
                 (h * h * h * h);

  double ftx = (ev(x + h, y, t + h) - ev(x - h, y, t + h) - ev(x + h, y, t - h) +
                ev(x - h, y, t - h)) /
               (4.0 * h * h);
  double fyy = (ev(x, y - h, t) - 2.0 * f0 + ev(x, y + h, t)) / (h * h);

  if (ok) *ok = good;
  if (f_center) *f_center = f0;
  return op.c_tx * ftx + op.c_xx * fxx + op.c_xxxx * fxxxx +
         op.c_nl * (fx * fx + f0 * fxx) + op.c_yy * fyy;
}

// Chebyshev dilation of the mask by `radius` cells.
std::vector<std::uint8_t> dilate(const std::vector<std::uint8_t>& mask, int ny,
                                 int nx, int radius) {
  std::vector<std::uint8_t> cur = mask;
  std::vector<std::uint8_t> next(mask.size());
  for (int r = 0; r < radius; ++r) {
    for (int i = 0; i < ny; ++i)
      for (int j = 0; j < nx; ++j) {
        std::uint8_t v = 0;
        for (int di = -1; di <= 1 && !v; ++di)
          for (int dj = -1; dj <= 1 && !v; ++dj) {
            int ii = i + di, jj = j + dj;
            if (ii >= 0 && ii < ny && jj >= 0 && jj < nx && cur[ii * nx + jj]) v = 1;
          }
        next[i * nx + j] = v;
      }
    cur.swap(next);
  }
  return cur;
}

ResidualReport scan(const FieldFn& f, const OperatorCoeffs& op, const GridSpec& grid,
                    double fd_step, const std::vector<std::uint8_t>& singular_mask,
                    int margin) {
  ResidualReport rep;
  rep.grid = grid;
  rep.fd_step = fd_step;
  rep.step_warning = fd_step < 1e-6;

  std::vector<std::uint8_t> excluded =
      singular_mask.empty()
          ? std::vector<std::uint8_t>(static_cast<size_t>(grid.nx) * grid.ny, 0)
          : dilate(singular_mask, grid.ny, grid.nx, margin);

  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> center_f;
  auto run = [&](double h, std::vector<double>& out, std::vector<double>* centers) {
    out.assign(static_cast<size_t>(grid.nx) * grid.ny, nan);
    if (centers) centers->assign(out.size(), nan);
    int nthreads = std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    nthreads = std::min(nthreads, grid.ny);
    auto rows = [&](int i0, int i1) {
      for (int i = i0; i < i1; ++i)
        for (int j = 0; j < grid.nx; ++j) {
          if (excluded[i * grid.nx + j]) continue;
          bool ok = true;
          double fc = 0.0;
          double r = residual_at(f, op, grid.x_at(j), grid.y_at(i), grid.t, h, &ok, &fc);
          if (ok && std::isfinite(r)) {
            out[i * grid.nx + j] = r;
            if (centers) (*centers)[i * grid.nx + j] = fc;
          }
        }
    };
    if (nthreads <= 1) {
      rows(0, grid.ny);
    } else {
      std::vector<std::thread> pool;
      int chunk = (grid.ny + nthreads - 1) / nthreads;
      for (int w = 0; w < nthreads; ++w) {
        int i0 = w * chunk, i1 = std::min(grid.ny, i0 + chunk);
        if (i0 < i1) pool.emplace_back(rows, i0, i1);
      }
      for (auto& th : pool) th.join();
    }
  };

  std::vector<double> full, half;
  run(fd_step, full, &center_f);
  run(fd_step / 2.0, half, nullptr);

  // deterministic reduction in row-major order; a node counts only when both
  // step sizes produced a value there
  double linf = 0.0, l2 = 0.0, linf_h = 0.0, l2_h = 0.0;
  int included = 0;
  for (size_t idx = 0; idx < full.size(); ++idx) {
    if (std::isnan(full[idx]) || std::isnan(half[idx])) continue;
    ++included;
    if (!std::isnan(center_f[idx]))
      rep.field_scale = std::max(rep.field_scale, std::abs(center_f[idx]));
    linf = std::max(linf, std::abs(full[idx]));
    l2 += full[idx] * full[idx];
    linf_h = std::max(linf_h, std::abs(half[idx]));
    l2_h += half[idx] * half[idx];
  }
  rep.included_cells = included;
  rep.excluded_cells = static_cast<int>(full.size()) - included;
  if (included > 0) {
    rep.residual_linf = linf;
    rep.residual_l2 = std::sqrt(l2 / included);
    rep.residual_linf_half = linf_h;
    rep.residual_l2_half = std::sqrt(l2_h / included);
    if (linf > 0 && linf_h > 0) rep.observed_order = std::log2(linf / linf_h);
  }
  return rep;
}

// Cells flagged near-singular plus cells straddling a sign change of tau;
// the margin dilation then measures distance from the singular set itself.
std::vector<std::uint8_t> singular_set_mask(const std::vector<double>& tau_sign,
                                            const std::vector<std::uint8_t>& near,
                                            int ny, int nx) {
  std::vector<std::uint8_t> mask = near;
  auto pos = [&](int i, int j) { return tau_sign[i * nx + j] > 0.0; };
  for (int i = 0; i < ny; ++i)
    for (int j = 0; j < nx; ++j) {
      if (j + 1 < nx && pos(i, j) != pos(i, j + 1))
        mask[i * nx + j] = mask[i * nx + j + 1] = 1;
      if (i + 1 < ny && pos(i, j) != pos(i + 1, j))
        mask[i * nx + j] = mask[(i + 1) * nx + j] = 1;
    }
  return mask;
}

std::vector<std::uint8_t> spec_singular_mask(const WaveSpec& spec,
                                             const GridSpec& grid) {
  std::vector<std::uint8_t> near(static_cast<size_t>(grid.nx) * grid.ny, 0);
  std::vector<double> sign(near.size());
  for (int i = 0; i < grid.ny; ++i)
    for (int j = 0; j < grid.nx; ++j) {
      TauEvaluation ev = tau_of_spec(spec, grid.x_at(j), grid.y_at(i), grid.t);
      near[i * grid.nx + j] = ev.near_singular ? 1 : 0;
      sign[i * grid.nx + j] = ev.tau;
    }
  return singular_set_mask(sign, near, grid.ny, grid.nx);
}

int stencil_margin(const GridSpec& grid, double fd_step, int extra) {
  double cell = std::min(grid.dx(), grid.dy());
  return extra + static_cast<int>(std::ceil(3.0 * fd_step / cell));
}

}  // namespace

double kp_residual_at(const FieldFn& f, double alpha2, double x, double y,
                      double t, double h, bool* ok) {
  OperatorCoeffs op{1.0, 0.0, 1.0, 6.0, 3.0 * alpha2};
  return residual_at(f, op, x, y, t, h, ok);
}

ResidualReport kp_residual_of(const FieldFn& f, double alpha2, const GridSpec& grid,
                              double fd_step,
                              const std::vector<std::uint8_t>& singular_mask,
                              int extra_margin_cells) {
  OperatorCoeffs op{1.0, 0.0, 1.0, 6.0, 3.0 * alpha2};
  return scan(f, op, grid, fd_step, singular_mask,
              stencil_margin(grid, fd_step, extra_margin_cells));
}

ResidualReport kp_residual(const WaveSpec& spec, const GridSpec& grid,
                           double fd_step) {
  FieldFn f = [&spec](double x, double y, double t, bool* ok) {
    EvalResult r = eval_f(spec, x, y, t);
    if (ok) *ok = !r.near_singular && std::isfinite(r.value);
    return r.value;
  };
  return kp_residual_of(f, alpha_squared(spec.alpha), grid, fd_step,
                        spec_singular_mask(spec, grid));
}

ResidualReport physical_kp_residual(const WaveSpec& spec, const FrameMap& map,
                                    const GridSpec& grid_primed, double fd_step) {
  const PhysicalContext& c = map.ctx;
  double a = map.alpha2;
  double root_gh = std::sqrt(c.g * c.h);
  double amp = 4.0 / (3.0 * c.epsilon * a);

  FieldFn eta = [&spec, a, root_gh, amp](double xp, double yp, double tp, bool* ok) {
    double t = root_gh * tp / (3.0 * a);
    double x = xp - root_gh * tp;
    double y = yp * std::sqrt(2.0);
    EvalResult r = eval_f(spec, x, y, t);
    if (ok) *ok = !r.near_singular && std::isfinite(r.value);
    return amp * r.value;
  };

  OperatorCoeffs op{1.0 / root_gh, 1.0,
                    (c.rho_density * c.g * c.h * c.h - 3.0 * c.s_tension) /
                        (6.0 * c.rho_density * c.g),
                    1.5 * c.epsilon, 0.5};

  // singular mask in primed coordinates
  std::vector<std::uint8_t> near(static_cast<size_t>(grid_primed.nx) * grid_primed.ny, 0);
  std::vector<double> sign(near.size());
  for (int i = 0; i < grid_primed.ny; ++i)
    for (int j = 0; j < grid_primed.nx; ++j) {
      double tp = grid_primed.t;
      double t = root_gh * tp / (3.0 * a);
      double x = grid_primed.x_at(j) - root_gh * tp;
      double y = grid_primed.y_at(i) * std::sqrt(2.0);
      TauEvaluation ev = tau_of_spec(spec, x, y, t);
      near[i * grid_primed.nx + j] = ev.near_singular ? 1 : 0;
      sign[i * grid_primed.nx + j] = ev.tau;
    }

  return scan(eta, op, grid_primed, fd_step,
              singular_set_mask(sign, near, grid_primed.ny, grid_primed.nx),
              stencil_margin(grid_primed, fd_step, 5));
}

namespace {

struct SegmentEnd {
  std::int64_t edge_key;
  std::array<double, 2> pt;
};

std::int64_t hkey(int i, int j) { return (std::int64_t(i) << 22 | j) << 1; }
std::int64_t vkey(int i, int j) { return ((std::int64_t(i) << 22 | j) << 1) | 1; }

}  // namespace

SingularCurve extract_singular_curve(const WaveSpec& spec, const GridSpec& grid) {
  // normalized tau: sign-correct, scale-free, never overflows
  std::vector<double> w(static_cast<size_t>(grid.nx) * grid.ny);
  for (int i = 0; i < grid.ny; ++i)
    for (int j = 0; j < grid.nx; ++j) {
      TauEvaluation ev = tau_of_spec(spec, grid.x_at(j), grid.y_at(i), grid.t);
      w[i * grid.nx + j] = ev.scale > 0 ? ev.tau / ev.scale : ev.tau;
    }

  auto interp = [](double xa, double ya, double wa, double xb, double yb,
                   double wb) -> std::array<double, 2> {
    double s = wa / (wa - wb);
    return {xa + s * (xb - xa), ya + s * (yb - ya)};
  };

  std::vector<std::array<SegmentEnd, 2>> segments;
  for (int i = 0; i + 1 < grid.ny; ++i) {
    double y0 = grid.y_at(i), y1 = grid.y_at(i + 1);
    for (int j = 0; j + 1 < grid.nx; ++j) {
      double x0 = grid.x_at(j), x1 = grid.x_at(j + 1);
      double w00 = w[i * grid.nx + j], w10 = w[i * grid.nx + j + 1];
      double w01 = w[(i + 1) * grid.nx + j], w11 = w[(i + 1) * grid.nx + j + 1];
      int code = (w00 > 0) | (w10 > 0) << 1 | (w11 > 0) << 2 | (w01 > 0) << 3;
      if (code == 0 || code == 15) continue;

      SegmentEnd bottom{hkey(i, j), interp(x0, y0, w00, x1, y0, w10)};
      SegmentEnd top{hkey(i + 1, j), interp(x0, y1, w01, x1, y1, w11)};
      SegmentEnd left{vkey(i, j), interp(x0, y0, w00, x0, y1, w01)};
      SegmentEnd right{vkey(i, j + 1), interp(x1, y0, w10, x1, y1, w11)};

      auto add = [&](const SegmentEnd& a, const SegmentEnd& b) {
        segments.push_back({a, b});
      };
      switch (code) {
        case 1: case 14: add(left, bottom); break;
        case 2: case 13: add(bottom, right); break;
        case 3: case 12: add(left, right); break;
        case 4: case 11: add(right, top); break;
        case 6: case 9: add(bottom, top); break;
        case 7: case 8: add(left, top); break;
        case 5: {  // + at c00 and c11
          double center = 0.25 * (w00 + w10 + w01 + w11);
          if (center > 0) { add(left, top); add(bottom, right); }
          else { add(left, bottom); add(right, top); }
          break;
        }
        case 10: {  // + at c10 and c01
          double center = 0.25 * (w00 + w10 + w01 + w11);
          if (center > 0) { add(left, bottom); add(right, top); }
          else { add(left, top); add(bottom, right); }
          break;
        }
        default: break;
      }
    }
  }

  // chain segments through shared edges
  std::multimap<std::int64_t, size_t> by_edge;
  for (size_t s = 0; s < segments.size(); ++s) {
    by_edge.insert({segments[s][0].edge_key, s});
    by_edge.insert({segments[s][1].edge_key, s});
  }
  std::vector<bool> used(segments.size(), false);

  auto next_segment = [&](std::int64_t edge, size_t self) -> long {
    auto range = by_edge.equal_range(edge);
    for (auto it = range.first; it != range.second; ++it)
      if (it->second != self && !used[it->second]) return static_cast<long>(it->second);
    return -1;
  };

  SingularCurve curve;
  auto push_back_pt = [](std::vector<std::array<double, 2>>& chain,
                         const std::array<double, 2>& pt) {
    if (chain.empty() || chain.back() != pt) chain.push_back(pt);
  };
  auto push_front_pt = [](std::vector<std::array<double, 2>>& chain,
                          const std::array<double, 2>& pt) {
    if (chain.empty() || chain.front() != pt) chain.insert(chain.begin(), pt);
  };
  for (size_t s0 = 0; s0 < segments.size(); ++s0) {
    if (used[s0]) continue;
    used[s0] = true;
    std::vector<std::array<double, 2>> chain{segments[s0][0].pt};
    push_back_pt(chain, segments[s0][1].pt);
    std::int64_t head_edge = segments[s0][0].edge_key;
    std::int64_t tail_edge = segments[s0][1].edge_key;

    for (;;) {  // extend at the tail
      long nxt = next_segment(tail_edge, SIZE_MAX);
      if (nxt < 0) break;
      used[nxt] = true;
      const auto& seg = segments[nxt];
      if (seg[0].edge_key == tail_edge) {
        push_back_pt(chain, seg[1].pt);
        tail_edge = seg[1].edge_key;
      } else {
        push_back_pt(chain, seg[0].pt);
        tail_edge = seg[0].edge_key;
      }
    }
    for (;;) {  // extend at the head
      long nxt = next_segment(head_edge, SIZE_MAX);
      if (nxt < 0) break;
      used[nxt] = true;
      const auto& seg = segments[nxt];
      if (seg[0].edge_key == head_edge) {
        push_front_pt(chain, seg[1].pt);
        head_edge = seg[1].edge_key;
      } else {
        push_front_pt(chain, seg[0].pt);
        head_edge = seg[0].edge_key;
      }
    }
    curve.chains.push_back(std::move(chain));
  }
  return curve;
}

}  // namespace kpw
