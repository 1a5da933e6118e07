#include "clusterexp/potentials.hpp"

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "clusterexp/errors.hpp"

namespace clusterexp {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

void validate(const PotentialShape& shape, int dimension) {
  require(dimension >= 1 && dimension <= kMaxDimension, "dimension must be 1, 2 or 3");
  std::visit(
      Overloaded{
          [](const LennardJones& p) {
            require(p.strength > 0.0, "lennard_jones.strength must be > 0");
            require(p.zero_radius > 0.0, "lennard_jones.zero_radius must be > 0");
          },
          [dimension](const HardCorePowerTail& p) {
            require(p.core_radius > 0.0 && p.core_radius < p.zero_radius &&
                        p.zero_radius < p.tail_radius,
                    "hard_core_power_tail requires 0 < core_radius < zero_radius < tail_radius");
            require(p.inner_exponent >= dimension, "hard_core_power_tail.inner_exponent must be >= d");
            require(p.tail_excess > 0.0, "hard_core_power_tail.tail_excess must be > 0");
            require(p.strength_inner >= 0.0, "hard_core_power_tail.strength_inner must be >= 0");
            require(p.strength_outer >= 0.0, "hard_core_power_tail.strength_outer must be >= 0");
          },
          [](const HardCore& p) { require(p.radius >= 0.0, "hard_core.radius must be >= 0"); },
          [](const TabulatedProfile& p) {
            require(!p.radius.empty() && p.radius.size() == p.energy.size(),
                    "tabulated profile needs matching, nonempty radius/energy columns");
            require(p.core_radius >= 0.0, "tabulated profile core_radius must be >= 0");
            for (std::size_t i = 0; i < p.radius.size(); ++i) {
              require(std::isfinite(p.radius[i]) && std::isfinite(p.energy[i]),
                      "tabulated profile entries must be finite");
              if (i > 0) require(p.radius[i] > p.radius[i - 1], "tabulated radii must be strictly increasing");
            }
            require(p.radius.front() >= 0.0, "tabulated radii must be >= 0");
          },
      },
      shape);
}

double tabulated(const TabulatedProfile& p, double r) {
  if (r < p.core_radius) return kInf;
  if (r < p.radius.front()) return p.energy.front();
  if (r >= p.radius.back()) return 0.0;
  const auto it = std::upper_bound(p.radius.begin(), p.radius.end(), r);
  const std::size_t hi = static_cast<std::size_t>(it - p.radius.begin());
  const std::size_t lo = hi - 1;
  const double t = (r - p.radius[lo]) / (p.radius[hi] - p.radius[lo]);
  return p.energy[lo] + t * (p.energy[hi] - p.energy[lo]);
}

}  // namespace

PairPotential::PairPotential(PotentialShape shape, int dimension)
    : shape_(std::move(shape)), dimension_(dimension) {
  validate(shape_, dimension_);
}

double PairPotential::operator()(double r) const {
  if (!(r >= 0.0)) throw DomainError("pair distance must be >= 0");
  if (r == 0.0) return kInf;
  return std::visit(
      Overloaded{
          [r](const LennardJones& p) {
            const double q = std::pow(p.zero_radius / r, 6);
            return p.strength * (q - 1.0) / std::pow(r, 6);
          },
          [r, this](const HardCorePowerTail& p) {
            if (r < p.core_radius) return kInf;
            if (r <= p.zero_radius) {
              return p.strength_inner *
                     (std::pow(r, -p.inner_exponent) - std::pow(p.zero_radius, -p.inner_exponent));
            }
            const double decay = dimension_ + p.tail_excess;
            return -p.strength_outer * std::pow(r, -decay) * (1.0 - p.zero_radius / r);
          },
          [r](const HardCore& p) { return r < p.radius ? kInf : 0.0; },
          [r](const TabulatedProfile& p) { return tabulated(p, r); },
      },
      shape_);
}

double PairPotential::positive_part(double r) const { return std::max((*this)(r), 0.0); }

double PairPotential::negative_part(double r) const { return std::max(-(*this)(r), 0.0); }

std::string PairPotential::kind_name() const {
  return std::visit(Overloaded{
                        [](const LennardJones&) { return std::string("lennard_jones"); },
                        [](const HardCorePowerTail&) { return std::string("hard_core_power_tail"); },
                        [](const HardCore&) { return std::string("hard_core"); },
                        [](const TabulatedProfile&) { return std::string("tabulated"); },
                    },
                    shape_);
}

bool PairPotential::purely_repulsive() const {
  return std::visit(Overloaded{
                        [](const LennardJones&) { return false; },
                        [](const HardCorePowerTail& p) { return p.strength_outer == 0.0; },
                        [](const HardCore&) { return true; },
                        [](const TabulatedProfile& p) {
                          return std::all_of(p.energy.begin(), p.energy.end(),
                                             [](double e) { return e >= 0.0; });
                        },
                    },
                    shape_);
}

double PairPotential::hard_core_radius() const {
  return std::visit(Overloaded{
                        [](const LennardJones&) { return 0.0; },
                        [](const HardCorePowerTail& p) { return p.core_radius; },
                        [](const HardCore& p) { return p.radius; },
                        [](const TabulatedProfile& p) { return p.core_radius; },
                    },
                    shape_);
}

std::vector<double> PairPotential::feature_radii() const {
  std::vector<double> out = std::visit(
      Overloaded{
          [](const LennardJones& p) {
            return std::vector<double>{p.zero_radius, p.zero_radius * std::pow(2.0, 1.0 / 6.0)};
          },
          [](const HardCorePowerTail& p) { return std::vector<double>{p.core_radius, p.zero_radius}; },
          [](const HardCore& p) { return p.radius > 0.0 ? std::vector<double>{p.radius} : std::vector<double>{}; },
          [](const TabulatedProfile& p) {
            std::vector<double> v = p.radius;
            if (p.core_radius > 0.0) v.push_back(p.core_radius);
            return v;
          },
      },
      shape_);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double PairPotential::max_attraction() const {
  return std::visit(
      Overloaded{
          // minimum of u(q·u − 1) with u = r^{-6}, q = r0^6, is −1/(4q)
          [](const LennardJones& p) { return p.strength / (4.0 * std::pow(p.zero_radius, 6)); },
          [this](const HardCorePowerTail& p) {
            if (p.strength_outer == 0.0) return 0.0;
            // r^{-a}(1 − r0/r) peaks at r = r0 (a+1)/a
            const double a = dimension_ + p.tail_excess;
            const double r = p.zero_radius * (a + 1.0) / a;
            return p.strength_outer * std::pow(r, -a) * (1.0 - p.zero_radius / r);
          },
          [](const HardCore&) { return 0.0; },
          [](const TabulatedProfile& p) {
            double m = 0.0;
            for (double e : p.energy) m = std::max(m, -e);
            return m;
          },
      },
      shape_);
}

double evaluate(const PairPotential& pot, double r) {
  if (!(r >= 0.0)) throw DomainError("distance must be >= 0");
  return pot(r);
}

double boltzmann_factor(double beta, double energy) {
  if (energy == kInf) return 0.0;
  return std::exp(-beta * energy);
}

double mayer_factor(const PairPotential& pot, double beta, double r) {
  const double phi = evaluate(pot, r);
  if (phi == kInf) return -1.0;
  return std::expm1(-beta * phi);
}

double mayer_magnitude(const PairPotential& pot, double beta, double r) {
  return std::abs(mayer_factor(pot, beta, r));
}

double default_stability_constant(const PairPotential& pot, int max_points) {
  if (max_points < 1) throw DomainError("max_points must be >= 1");
  if (pot.purely_repulsive()) return 0.0;
  return 0.5 * (max_points - 1) * pot.max_attraction();
}

namespace {

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  const double a = std::log(lo);
  const double b = std::log(hi);
  for (int i = 0; i < count; ++i) g[i] = std::exp(a + (b - a) * i / (count - 1));
  return g;
}

// Sample radii covering the interesting scales of φ, plus left and right
// limits at every feature radius.
std::vector<double> probe_radii(const PairPotential& pot, double hi) {
  std::vector<double> f = pot.feature_radii();
  const double scale = f.empty() ? 1.0 : f.back();
  std::vector<double> g = log_grid(scale * 1e-4, std::max(hi, scale * 10.0), 6000);
  for (double r : f) {
    g.push_back(std::nextafter(r, 0.0));
    g.push_back(r);
  }
  std::sort(g.begin(), g.end());
  return g;
}

double maximize_locally(const std::function<double(double)>& f, double lo, double hi) {
  const auto res = boost::math::tools::brent_find_minima([&](double r) { return -f(r); }, lo, hi, 52);
  return -res.second;
}

}  // namespace

PotentialSummary compute_summary(const PairPotential& pot, double beta, const SummaryOptions& options) {
  if (!(beta > 0.0)) throw DomainError("beta must be > 0");
  PotentialSummary s;
  s.beta = beta;
  if (options.stability) {
    if (!(*options.stability >= 0.0)) throw DomainError("stability constant must be >= 0");
    s.stability = *options.stability;
  } else {
    s.stability = default_stability_constant(pot, options.max_points);
  }

  auto magnitude = [&](double r) { return mayer_magnitude(pot, beta, r); };

  // sup over a grid, refined by Brent search around the best grid cell.
  const std::vector<double> grid = probe_radii(pot, 1e3);
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = magnitude(grid[i]);
    if (v > best_value) {
      best_value = v;
      best = i;
    }
  }
  if (best > 0 && best + 1 < grid.size()) {
    const double lo = grid[best - 1];
    const double hi = grid[best + 1];
    const std::vector<double> f = pot.feature_radii();
    const bool straddles_feature =
        std::any_of(f.begin(), f.end(), [&](double r) { return r > lo && r < hi; });
    if (!straddles_feature) best_value = std::max(best_value, maximize_locally(magnitude, lo, hi));
  }
  s.mayer_sup = best_value;

  // ν integral: ω_d ∫_0^∞ r^{d−1}|e^{−βφ(r)} − 1| dr.
  const int d = pot.dimension();
  const double sphere = d == 1 ? 2.0 : (d == 2 ? 2.0 * M_PI : 4.0 * M_PI);
  const std::vector<double> cuts = pot.feature_radii();
  const IntegralEstimate est = integrate(
      [&](double r) { return sphere * std::pow(r, d - 1) * magnitude(r); }, 0.0,
      std::numeric_limits<double>::infinity(), cuts, options.quad);
  if (!est.converged || !std::isfinite(est.value)) {
    throw NumericError("regularity integral of |exp(-beta*phi) - 1| did not converge (non-integrable tail?)");
  }
  s.mayer_integral = est.value;
  s.mayer_integral_error = est.error;
  // ν_1 = 0 is the ideal gas: every expansion term beyond the first vanishes.

  if (options.decay_exponent) {
    s.decay = PolynomialDecay{polynomial_decay_constant(pot, beta, *options.decay_exponent),
                              *options.decay_exponent};
  }
  return s;
}

double polynomial_decay_constant(const PairPotential& pot, double beta, double exponent) {
  if (!(exponent > pot.dimension())) throw DomainError("decay exponent must exceed the dimension");
  auto ratio = [&](double r) { return mayer_magnitude(pot, beta, r) * (1.0 + std::pow(r, exponent)); };
  const std::vector<double> grid = probe_radii(pot, 1e6);
  double best = 0.0;
  for (double r : grid) best = std::max(best, ratio(r));
  // The ratio may still creep up towards a finite limit at the far end (tails
  // like r^{-exponent}(1 − c/r)); a decade of growth above 1e-3 means it diverges.
  const double far = ratio(1e6);
  const double farther = ratio(1e7);
  if (farther > far * (1.0 + 1e-3) && farther > 1e-300) {
    throw NumericError("|exp(-beta*phi) - 1| decays slower than 1/(1+r^exponent)");
  }
  // For a limit approached like 1/r the remaining gap is at most (farther − far)/9.
  best = std::max(best, farther + std::max(0.0, farther - far));
  return best * (1.0 + 1e-9);
}

AssumptionCheck check_power_law_assumptions(const PairPotential& pot, int grid_points) {
  const auto* p = std::get_if<HardCorePowerTail>(&pot.shape());
  if (p == nullptr) throw DomainError("power-law assumption check applies to hard_core_power_tail only");
  AssumptionCheck out;
  for (double r : log_grid(p->core_radius * 1e-6, p->core_radius * (1.0 - 1e-12), grid_points)) {
    if (!(pot.positive_part(r) >= p->strength_inner * std::pow(r, -p->inner_exponent))) {
      out.repulsive_core_ok = false;
    }
  }
  const double decay = pot.dimension() + p->tail_excess;
  for (double r : log_grid(p->tail_radius * (1.0 + 1e-12), p->tail_radius * 1e6, grid_points)) {
    if (!(pot.negative_part(r) <= p->strength_outer * std::pow(r, -decay))) out.attractive_tail_ok = false;
  }
  return out;
}

TabulatedProfile read_profile_csv(const std::string& path, double core_radius) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open potential table '" + path + "'");
  TabulatedProfile t;
  t.core_radius = core_radius;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a;
    std::string b;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b)) {
      throw DomainError("potential table '" + path + "': expected two columns in line '" + line + "'");
    }
    try {
      std::size_t used = 0;
      const double r = std::stod(a, &used);
      const double e = std::stod(b);
      t.radius.push_back(r);
      t.energy.push_back(e);
    } catch (const std::exception&) {
      if (first) {
        first = false;
        continue;
      }
      throw DomainError("potential table '" + path + "': non-numeric line '" + line + "'");
    }
    first = false;
  }
  PairPotential check(t, 1);  // validates ordering and finiteness
  return t;
}

}  // namespace clusterexp
