#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "nwinterp/dataset.hpp"
#include "nwinterp/rng.hpp"

namespace nwinterp {

// Target regression function with declared Holder smoothness. The gradient
// evaluator is required when beta > 1.
struct TargetFunction {
    std::string name;
    double beta = 1.0;              // smoothness, in (0, 2]
    double holder_constant = 1.0;   // declared L_f
    std::function<double(std::span<const double>)> value;
    std::function<std::vector<double>(std::span<const double>)> gradient;
};

// Marginal density of X on an axis-aligned box, bounded between p_min and
// p_max (assumption on the design density).
struct MarginalDensity {
    std::vector<double> lo, hi;   // box corners
    double p_min = 1.0, p_max = 1.0;
    double holder_constant_p = 0.0;  // L_p; 0 for the uniform density
    bool uniform = true;
    std::function<double(std::span<const double>)> density;
    std::function<void(Stream&, std::span<double>)> draw;

    bool contains(std::span<const double> x) const;
    double volume() const;
};

enum class NoiseKind { Gaussian, BoundedUniform, BinaryLabels };

struct NoiseModel {
    NoiseKind kind = NoiseKind::Gaussian;
    double param = 0.1;        // sigma or half-width; unused for binary labels
    double sigma_xi_sq = 0.0;  // declared conditional-variance bound
};

struct Scenario {
    int dim = 1;
    TargetFunction target;
    MarginalDensity marginal;
    NoiseModel noise;
};

// Catalog scenarios: lipschitz-cone, holder-cusp, smooth-sine,
// constant-zero, binary-sine. Recognized params: c (center coordinate),
// beta (holder-cusp), amp (sine amplitude), sigma (Gaussian noise std),
// uniform_halfwidth (switch to bounded uniform noise), triangular_marginal
// (use the sloped product density instead of the uniform one).
// Declared Holder constants are certified empirically at build time.
Scenario make_scenario(const std::string& name, int d,
                       const std::map<std::string, double>& params = {});

// n i.i.d. draws, deterministic in (scenario, n, seed).
Dataset sample_dataset(const Scenario& scenario, std::size_t n, std::uint64_t seed);

// Draw Y given the design point x (conditional noise resampling).
double sample_response(const Scenario& scenario, std::span<const double> x,
                       Stream& stream);

// Exact f(x); throws OutOfSupport outside the marginal's box.
double true_regression(const Scenario& scenario, std::span<const double> x);

// Max over all distinct grid-pair ratios of the Holder increment; m points
// per axis. Uses the first-order Taylor remainder when beta > 1.
double empirical_holder_constant(const TargetFunction& target,
                                 std::span<const double> lo,
                                 std::span<const double> hi, int m);

// Shift a scenario so that the probe location maps to the origin.
Scenario recenter_scenario(const Scenario& scenario, std::span<const double> x0);

}  // namespace nwinterp
