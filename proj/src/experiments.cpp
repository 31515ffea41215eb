#include "nwinterp/experiments.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include "nwinterp/errors.hpp"

namespace nwinterp {

namespace {

// Runs body(i) for i in [0, count) on all available cores. Exceptions are
// rethrown on the calling thread.
template <typename F>
void parallel_for(std::size_t count, F&& body) {
    unsigned threads = std::thread::hardware_concurrency();
    if (threads == 0) threads = 1;
    threads = static_cast<unsigned>(
        std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

double mean_of(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

double stderr_of(const std::vector<double>& v, double mean) {
    if (v.size() < 2) return 0.0;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const auto m = static_cast<double>(v.size());
    return std::sqrt(ss / (m - 1.0) / m);
}

double unit_ball_volume(int d) {
    return std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

}  // namespace

PowerLawFit fit_power_law(std::span<const std::pair<double, double>> pairs) {
    if (pairs.size() < 2) throw InsufficientPoints("need at least 2 points");
    const auto k = static_cast<double>(pairs.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::vector<double> lx(pairs.size()), ly(pairs.size());
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (!(pairs[i].first > 0.0) || !(pairs[i].second > 0.0)) {
            throw NonPositiveValue("power-law fit requires positive coordinates");
        }
        lx[i] = std::log(pairs[i].first);
        ly[i] = std::log(pairs[i].second);
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double sxx_c = sxx - sx * sx / k;
    const double sxy_c = sxy - sx * sy / k;
    PowerLawFit fit;
    fit.slope = sxy_c / sxx_c;
    fit.intercept = (sy - fit.slope * sx) / k;
    if (pairs.size() > 2) {
        double ssr = 0.0;
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            const double resid = ly[i] - fit.intercept - fit.slope * lx[i];
            ssr += resid * resid;
        }
        fit.slope_stderr = std::sqrt(ssr / (k - 2.0) / sxx_c);
    }
    return fit;
}

RateFitResult run_rate_experiment(const RateExperimentConfig& config) {
    const Scenario& sc = config.scenario;
    const int d = sc.dim;
    const double beta = sc.target.beta;

    if (config.n_grid.size() < 3) throw InvalidParams("n_grid needs length >= 3");
    for (std::size_t i = 1; i < config.n_grid.size(); ++i) {
        if (config.n_grid[i] <= config.n_grid[i - 1]) {
            throw InvalidParams("n_grid must be strictly increasing");
        }
    }
    if (config.replicates < 1) throw InvalidParams("replicates must be >= 1");
    if (!config.eval.pointwise && !config.eval.integrated) {
        throw InvalidParams("at least one of pointwise/integrated evaluation");
    }
    if (config.eval.pointwise) {
        if (static_cast<int>(config.eval.x0.size()) != d) {
            throw DimensionMismatch("x0 dimension mismatch");
        }
        if (!sc.marginal.contains(config.eval.x0)) {
            throw OutOfSupport("x0 outside the scenario support");
        }
    }
    if (!config.override_kernel_validation) {
        validate_for_dimension(config.kernel, d);
    }

    struct ReplicateOut {
        double pointwise_se = 0.0;
        double integrated_mse = 0.0;
        double excess = 0.0;
        double empty_frac = 0.0;
    };

    RateFitResult result;
    result.theoretical_exponent = -2.0 * beta / (2.0 * beta + d);

    const auto M = static_cast<std::size_t>(config.replicates);
    for (std::size_t n : config.n_grid) {
        const double h = bandwidth_for_rate(n, beta, d);
        std::vector<ReplicateOut> reps(M);
        parallel_for(M, [&](std::size_t m) {
            const std::uint64_t rep_seed =
                derive_stream(config.seed, "replicate", n, m).next_u64();
            Dataset data = sample_dataset(sc, n, rep_seed);
            FittedInterpolator model = fit(std::move(data), config.kernel, h);

            ReplicateOut& out = reps[m];
            double empty_events = 0.0;
            double empty_total = 0.0;
            if (config.eval.pointwise) {
                const PredictionOutcome pred = model.predict(config.eval.x0);
                const double truth = sc.target.value(config.eval.x0);
                out.pointwise_se = (pred.value - truth) * (pred.value - truth);
                empty_total += 1.0;
                if (pred.kind == PredictionCase::EmptyNeighborhood) {
                    empty_events += 1.0;
                }
            }
            if (config.eval.integrated) {
                Stream eval = derive_stream(config.seed, "eval", n, m);
                std::vector<double> z(d);
                double se_sum = 0.0, excess_sum = 0.0;
                for (int q = 0; q < config.eval.n_eval; ++q) {
                    sc.marginal.draw(eval, z);
                    const PredictionOutcome pred = model.predict(z);
                    const double truth = sc.target.value(z);
                    const double err = pred.value - truth;
                    se_sum += err * err;
                    empty_total += 1.0;
                    if (pred.kind == PredictionCase::EmptyNeighborhood) {
                        empty_events += 1.0;
                    }
                    if (config.report_excess_risk) {
                        const double w = sample_response(sc, z, eval);
                        excess_sum += (pred.value - w) * (pred.value - w) -
                                      (truth - w) * (truth - w);
                    }
                }
                out.integrated_mse = se_sum / config.eval.n_eval;
                out.excess = excess_sum / config.eval.n_eval;
            }
            out.empty_frac = empty_total > 0.0 ? empty_events / empty_total : 0.0;
        });

        // Fixed-order aggregation keeps results independent of scheduling.
        std::vector<double> metric(M), excess(M), empties(M);
        for (std::size_t m = 0; m < M; ++m) {
            metric[m] = config.eval.integrated ? reps[m].integrated_mse
                                               : reps[m].pointwise_se;
            excess[m] = reps[m].excess;
            empties[m] = reps[m].empty_frac;
        }
        PerSampleSizeStats stats;
        stats.n = n;
        stats.mean_mse = mean_of(metric);
        stats.stderr_mse = stderr_of(metric, stats.mean_mse);
        stats.empty_freq = mean_of(empties);
        if (config.report_excess_risk) {
            stats.excess_mean = mean_of(excess);
            stats.excess_stderr = stderr_of(excess, stats.excess_mean);
        }
        result.per_n.push_back(stats);
    }

    std::vector<std::pair<double, double>> pairs;
    for (const auto& s : result.per_n) {
        if (s.mean_mse > 0.0) {
            pairs.emplace_back(static_cast<double>(s.n), s.mean_mse);
        } else {
            result.degenerate = true;
        }
    }
    if (pairs.size() >= 2) {
        result.fit = fit_power_law(pairs);
    } else {
        result.degenerate = true;
        result.fit.slope = std::numeric_limits<double>::quiet_NaN();
        result.fit.intercept = std::numeric_limits<double>::quiet_NaN();
        result.fit.slope_stderr = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

BiasVarianceReport bias_variance_probe(const Scenario& scenario,
                                       const KernelSpec& kernel, std::size_t n,
                                       std::span<const double> x0,
                                       int design_reps, int noise_reps,
                                       std::uint64_t seed) {
    if (design_reps < 1 || noise_reps < 1) {
        throw InvalidParams("design_reps and noise_reps must be >= 1");
    }
    const int d = scenario.dim;
    const double beta = scenario.target.beta;
    const double h = bandwidth_for_rate(n, beta, d);
    const Scenario sc = recenter_scenario(scenario, x0);
    const std::vector<double> origin(d, 0.0);
    const double f0 = sc.target.value(origin);

    struct DesignOut {
        double bias_contrib = 0.0;
        double var_contrib = 0.0;
        double sigma_x_contrib = 0.0;
        bool empty = false;
    };
    std::vector<DesignOut> designs(design_reps);

    parallel_for(static_cast<std::size_t>(design_reps), [&](std::size_t rep) {
        Stream design = derive_stream(seed, "bv-design", n, rep);
        Stream noise = derive_stream(seed, "bv-noise", n, rep);
        std::vector<double> x(d);
        std::vector<double> rho;    // normalized kernel weights of in-range points
        std::vector<double> fvals;  // f at those points
        rho.reserve(64);
        fvals.reserve(64);
        double w_max = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            sc.marginal.draw(design, x);
            double r2 = 0.0;
            for (double v : x) r2 += v * v;
            const double w = eval_radial(kernel, std::sqrt(r2) / h);
            if (w > 0.0) {
                rho.push_back(w);
                fvals.push_back(sc.target.value(x));
                w_max = std::max(w, w_max);
            }
        }
        DesignOut& out = designs[rep];
        if (rho.empty() || w_max <= 0.0) {
            out.empty = true;
            return;  // the event fails; indicator zeroes every contribution
        }
        if (!std::isfinite(w_max)) {
            // A design point essentially at the origin; the ratio collapses
            // onto that point.
            for (std::size_t j = 0; j < rho.size(); ++j) {
                rho[j] = std::isfinite(rho[j]) ? 0.0 : 1.0;
            }
            w_max = 1.0;
        }
        double sum_rho = 0.0, sum_rho_f = 0.0;
        for (std::size_t j = 0; j < rho.size(); ++j) {
            rho[j] /= w_max;
            sum_rho += rho[j];
            sum_rho_f += rho[j] * fvals[j];
        }
        const double ey_fbar = sum_rho_f / sum_rho;
        out.bias_contrib = (ey_fbar - f0) * (ey_fbar - f0);
        // n E[q_1^2] = E[sum_i q_i^2] by exchangeability; the summed form
        // has far lower Monte Carlo variance.
        for (double r : rho) {
            const double q = r / sum_rho;
            out.sigma_x_contrib += q * q;
        }

        // Conditional variance: resample the response noise with the design
        // held fixed. fbar - E_Y fbar = sum xi_i rho_i / sum rho_i exactly.
        double var_sum = 0.0;
        for (int t = 0; t < noise_reps; ++t) {
            double xi_rho = 0.0;
            for (std::size_t j = 0; j < rho.size(); ++j) {
                double xi = 0.0;
                switch (sc.noise.kind) {
                    case NoiseKind::Gaussian:
                        xi = sc.noise.param * noise.normal();
                        break;
                    case NoiseKind::BoundedUniform:
                        xi = noise.uniform(-sc.noise.param, sc.noise.param);
                        break;
                    case NoiseKind::BinaryLabels: {
                        const double y =
                            noise.bernoulli(0.5 * (1.0 + fvals[j])) ? 1.0 : -1.0;
                        xi = y - fvals[j];
                        break;
                    }
                }
                xi_rho += xi * rho[j];
            }
            const double dev = xi_rho / sum_rho;
            var_sum += dev * dev;
        }
        out.var_contrib = var_sum / noise_reps;
    });

    BiasVarianceReport report;
    report.h = h;
    double bias = 0.0, var = 0.0, sx = 0.0, empty = 0.0;
    for (const auto& o : designs) {
        bias += o.bias_contrib;
        var += o.var_contrib;
        sx += o.sigma_x_contrib;
        if (o.empty) empty += 1.0;
    }
    report.bias_sq = bias / design_reps;
    report.variance = var / design_reps;
    report.sigma_x_sq = sx / design_reps;
    report.empty_freq = empty / design_reps;
    const double lf = scenario.target.holder_constant;
    report.bias_bound = lf * lf * std::pow(h, 2.0 * beta);
    report.variance_scale =
        report.variance * static_cast<double>(n) * std::pow(h, d);
    return report;
}

EmptyEventResult empty_event_frequency(const Scenario& scenario, std::size_t n,
                                       double h, int reps,
                                       std::span<const double> x0,
                                       std::uint64_t seed) {
    if (reps < 1) throw InvalidParams("reps must be >= 1");
    if (!(h > 0.0)) throw InvalidBandwidth("h must be positive");
    const int d = scenario.dim;
    if (static_cast<int>(x0.size()) != d) {
        throw DimensionMismatch("x0 dimension mismatch");
    }

    std::vector<std::uint8_t> empty(reps, 0);
    parallel_for(static_cast<std::size_t>(reps), [&](std::size_t rep) {
        Stream design = derive_stream(seed, "empty-event", n, rep);
        std::vector<double> x(d);
        const double h2 = h * h;
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            scenario.marginal.draw(design, x);
            double r2 = 0.0;
            for (int k = 0; k < d; ++k) {
                const double diff = x[k] - x0[k];
                r2 += diff * diff;
            }
            if (r2 <= h2) {
                any = true;
                // keep drawing so the stream layout stays fixed per design
            }
        }
        empty[rep] = any ? 0 : 1;
    });
    EmptyEventResult result;
    double cnt = 0.0;
    for (auto e : empty) cnt += e;
    result.frequency = cnt / reps;

    if (scenario.marginal.uniform) {
        const auto& lo = scenario.marginal.lo;
        const auto& hi = scenario.marginal.hi;
        double cap_vol = 0.0;
        bool available = true;
        if (d == 1) {
            cap_vol = std::min(hi[0], x0[0] + h) - std::max(lo[0], x0[0] - h);
            cap_vol = std::max(cap_vol, 0.0);
        } else {
            bool inside = true;
            for (int k = 0; k < d; ++k) {
                inside = inside && x0[k] - h >= lo[k] && x0[k] + h <= hi[k];
            }
            if (inside) {
                cap_vol = unit_ball_volume(d) * std::pow(h, d);
            } else {
                available = false;  // ball/box intersection has no simple form
            }
        }
        if (available) {
            const double q = cap_vol / scenario.marginal.volume();
            result.analytic = std::pow(1.0 - q, static_cast<double>(n));
        }
    }
    return result;
}

}  // namespace nwinterp
