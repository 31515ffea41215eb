#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "nwinterp/datagen.hpp"
#include "nwinterp/estimator.hpp"
#include "nwinterp/kernels.hpp"

namespace nwinterp {

struct EvalSpec {
    bool pointwise = false;
    std::vector<double> x0;   // pointwise probe location
    bool integrated = false;
    int n_eval = 1000;        // fresh draws per replicate for the L2 estimate
};

struct RateExperimentConfig {
    Scenario scenario;
    KernelSpec kernel;
    std::vector<std::size_t> n_grid;  // strictly increasing, length >= 3
    int replicates = 100;
    EvalSpec eval;
    std::uint64_t seed = 1;
    bool report_excess_risk = false;
    bool override_kernel_validation = false;
};

struct PerSampleSizeStats {
    std::size_t n = 0;
    double mean_mse = 0.0;
    double stderr_mse = 0.0;
    double empty_freq = 0.0;
    double excess_mean = 0.0;
    double excess_stderr = 0.0;
};

struct PowerLawFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;
};

struct RateFitResult {
    std::vector<PerSampleSizeStats> per_n;
    PowerLawFit fit;
    double theoretical_exponent = 0.0;  // -2 beta / (2 beta + d)
    bool degenerate = false;            // some per-n mean MSE was exactly 0
};

// OLS of log y on log n (natural logs). Exact on log-linear input; the
// slope standard error is the usual OLS formula (0 when only two points).
PowerLawFit fit_power_law(std::span<const std::pair<double, double>> pairs);

// Monte Carlo estimate of the MSE decay across the sample-size grid, with
// h = n^{-1/(2 beta + d)} refit per replicate. Replicates carry
// pre-assigned RNG substreams and may run on any number of threads; the
// aggregation order is fixed, so results are bit-identical regardless of
// scheduling.
RateFitResult run_rate_experiment(const RateExperimentConfig& config);

struct BiasVarianceReport {
    double h = 0.0;
    double bias_sq = 0.0;      // estimate of the squared bias term at the probe
    double variance = 0.0;     // estimate of the noise-variance term
    double sigma_x_sq = 0.0;   // n E[K_h^2(X_1)/(sum K_h)^2 on the event]
    double bias_bound = 0.0;   // L_f^2 h^{2 beta}
    double variance_scale = 0.0;  // variance * n * h^d
    double empty_freq = 0.0;   // fraction of designs with no point within h
};

// Conditional bias/variance decomposition at x0 (the scenario is recentered
// so the probe sits at the origin). Each design draws X once and resamples
// the response noise noise_reps times.
BiasVarianceReport bias_variance_probe(const Scenario& scenario,
                                       const KernelSpec& kernel, std::size_t n,
                                       std::span<const double> x0,
                                       int design_reps, int noise_reps,
                                       std::uint64_t seed);

struct EmptyEventResult {
    double frequency = 0.0;
    std::optional<double> analytic;  // exact (1 - vol(B cap box)/vol)^n when available
};

// Empirical probability that no design point lands within h of x0.
EmptyEventResult empty_event_frequency(const Scenario& scenario, std::size_t n,
                                       double h, int reps,
                                       std::span<const double> x0,
                                       std::uint64_t seed);

}  // namespace nwinterp
