#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "clusterexp/quadrature.hpp"

namespace clusterexp {

// φ(r) = strength · (zero_radius⁶/r⁶ − 1) / r⁶.
struct LennardJones {
  double strength = 1.0;
  double zero_radius = 1.0;
};

// +∞ below core_radius; strength_inner·(r^{-s} − zero_radius^{-s}) up to
// zero_radius; −strength_outer·r^{-(d+tail_excess)}·(1 − zero_radius/r) beyond.
// tail_radius only enters the assumption check on the attractive tail.
struct HardCorePowerTail {
  double core_radius = 1.0;
  double zero_radius = 1.5;
  double tail_radius = 2.0;
  double strength_inner = 1.0;
  double strength_outer = 1.0;
  double inner_exponent = 12.0;
  double tail_excess = 1.0;
};

// +∞ for r < radius, 0 otherwise. radius = 0 is the ideal gas (φ(0) = +∞ only).
struct HardCore {
  double radius = 1.0;
};

// Piecewise-linear profile through (radius[i], energy[i]); +∞ below core_radius,
// energy[0] on [core_radius, radius[0]), 0 beyond the last node.
struct TabulatedProfile {
  std::vector<double> radius;
  std::vector<double> energy;
  double core_radius = 0.0;
};

using PotentialShape = std::variant<LennardJones, HardCorePowerTail, HardCore, TabulatedProfile>;

class PairPotential {
 public:
  PairPotential(PotentialShape shape, int dimension);

  // φ(r); r must be ≥ 0. Returns +∞ inside hard cores and at r = 0.
  double operator()(double r) const;
  double positive_part(double r) const;
  double negative_part(double r) const;

  int dimension() const { return dimension_; }
  const PotentialShape& shape() const { return shape_; }
  std::string kind_name() const;

  bool purely_repulsive() const;
  double hard_core_radius() const;
  // Radii where φ jumps or has a kink; used as quadrature breakpoints.
  std::vector<double> feature_radii() const;
  // sup_r φ⁻(r).
  double max_attraction() const;

 private:
  PotentialShape shape_;
  int dimension_;
};

double evaluate(const PairPotential& pot, double r);

// e^{−β·energy}, exactly 0 for energy = +∞.
double boltzmann_factor(double beta, double energy);

// e^{−βφ(r)} − 1, exactly −1 when φ(r) = +∞.
double mayer_factor(const PairPotential& pot, double beta, double r);

// |e^{−βφ(r)} − 1|.
double mayer_magnitude(const PairPotential& pot, double beta, double r);

// Polynomial domination |e^{−βφ(|x|)} − 1| ≤ constant / (1 + |x|^exponent).
struct PolynomialDecay {
  double constant = 0.0;
  double exponent = 0.0;
};

struct PotentialSummary {
  double beta = 0.0;
  double stability = 0.0;       // B with U(γ) ≥ −B|γ|
  double mayer_sup = 0.0;       // sup |e^{−βφ} − 1|
  double mayer_integral = 0.0;  // ∫_{R^d} |e^{−βφ} − 1|
  double mayer_integral_error = 0.0;
  std::optional<PolynomialDecay> decay;
};

struct SummaryOptions {
  QuadratureSpec quad{1e-10, 1e-14, 4000};
  std::optional<double> stability;      // user-supplied B
  std::optional<double> decay_exponent; // request a polynomial-decay constant
  int max_points = 10;                  // configuration size covered by the default B
};

// Documented default B: 0 when φ ≥ 0 everywhere; otherwise (max_points − 1)/2 ·
// sup φ⁻, which bounds U(γ) ≥ −B|γ| for every configuration of at most
// max_points points (each of the |γ|(|γ|−1)/2 pairs contributes ≥ −sup φ⁻).
double default_stability_constant(const PairPotential& pot, int max_points);

PotentialSummary compute_summary(const PairPotential& pot, double beta, const SummaryOptions& options);

// Smallest constant C with |e^{−βφ(r)} − 1| ≤ C/(1 + r^exponent), estimated on a
// log grid that includes left limits at every feature radius, with a 1e-9
// relative safety margin. Throws NumericError if the ratio grows at the grid end.
double polynomial_decay_constant(const PairPotential& pot, double beta, double exponent);

struct AssumptionCheck {
  bool repulsive_core_ok = true;  // φ⁺ ≥ strength_inner·r^{−s} for r < core_radius
  bool attractive_tail_ok = true; // φ⁻ ≤ strength_outer·r^{−d−ε} for r > tail_radius
};

// Grid check of the two power-law conditions for a HardCorePowerTail potential.
AssumptionCheck check_power_law_assumptions(const PairPotential& pot, int grid_points = 2000);

// Reads a two-column CSV (r, φ) with strictly increasing r; a header line is
// skipped when its first field is not numeric.
TabulatedProfile read_profile_csv(const std::string& path, double core_radius);

}  // namespace clusterexp
