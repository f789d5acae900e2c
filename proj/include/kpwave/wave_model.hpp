// Domain types, validation and (de)serialization for the wave families
// evaluated by this library: soliton walls, their N-fold superpositions,
// and the three breather families (harmonic / hyperbolic / cosh), plus
// grid and physical-context descriptions.

#ifndef KPWAVE_WAVE_MODEL_HPP
#define KPWAVE_WAVE_MODEL_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace kpw {

// Sign of the dispersion coefficient in the KP operator
// dx(f_t + f_xxx + 6 f f_x) + 3 a f_yy.  Only a = +1 or a = -1 occur; the
// formal imaginary parameter device is never represented directly, all
// evaluators are expanded per sign and stay real.
enum class AlphaSign : int { PlusOne = 1, MinusOne = -1 };

inline int alpha_squared(AlphaSign a) { return static_cast<int>(a); }

enum class BreatherFamily { Harmonic, Hyperbolic, Cosh };

const char* family_name(BreatherFamily f);

struct SolitonWallParams {
  double p = 0.0;
  double q = 0.0;
  double c = 0.0;
};

struct WallSuperpositionParams {
  std::vector<SolitonWallParams> walls;  // N >= 1
};

struct BreatherParams {
  double lambda = 0.0;
  double mu = 0.0;
  double chi = 0.0;
  double gamma = 0.0;
  double rho = 0.0;
  // Cosh family only: represents the half-period imaginary offset of gamma,
  // realized as cosh(2*Gamma) -> -cosh(2*Gamma).
  bool gamma_half_pi_shift = false;
  BreatherFamily family = BreatherFamily::Harmonic;
};

struct BreatherSuperpositionParams {
  std::vector<BreatherParams> breathers;  // N >= 1, all same family
};

// Grid of sample points, endpoints inclusive: x_j = x_min + j*dx with
// dx = (x_max-x_min)/(nx-1), likewise in y.  t is the frame time.
struct GridSpec {
  double x_min = -1.0, x_max = 1.0;
  double y_min = -1.0, y_max = 1.0;
  int nx = 2, ny = 2;
  double t = 0.0;

  double dx() const { return (x_max - x_min) / (nx - 1); }
  double dy() const { return (y_max - y_min) / (ny - 1); }
  double x_at(int j) const { return x_min + j * dx(); }
  double y_at(int i) const { return y_min + i * dy(); }
};

// Dimensional constants for the physical-coordinate maps.
struct PhysicalContext {
  double g = 9.81;         // m/s^2
  double h = 1.0;          // layer depth, m
  double rho_density = 1000.0;  // kg/m^3
  double s_tension = 0.0;  // N/m
  double epsilon = 0.1;    // small-amplitude parameter

  // 2*rho*g / (rho*g*h^2 - 3*s); must be finite and nonzero.
  double alpha2_phys() const;
};

struct WaveSpec {
  std::variant<SolitonWallParams, WallSuperpositionParams, BreatherParams,
               BreatherSuperpositionParams>
      params;
  AlphaSign alpha = AlphaSign::PlusOne;
  std::optional<GridSpec> grid;
  std::optional<PhysicalContext> physical;

  bool is_superposition() const {
    return std::holds_alternative<WallSuperpositionParams>(params) ||
           std::holds_alternative<BreatherSuperpositionParams>(params);
  }
};

// One violated invariant; `where` names the offending field or pair.
struct Violation {
  std::string where;
  std::string what;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

// Total: never throws, reports every violated invariant.
ValidationReport validate(const WaveSpec& spec);

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Parses the JSON parameter document (see README for the schema).
// Throws ParseError with line/field diagnostics on malformed input.
WaveSpec load_spec(const std::string& text);

// Serializes with sorted keys and round-trip float formatting;
// save(load(save(s))) == save(s) byte for byte.
std::string save_spec(const WaveSpec& spec);

WaveSpec load_spec_file(const std::string& path);
void save_spec_file(const WaveSpec& spec, const std::string& path);

}  // namespace kpw

#endif  // KPWAVE_WAVE_MODEL_HPP
