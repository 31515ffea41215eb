#include "nwinterp/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "nwinterp/errors.hpp"

namespace nwinterp {

namespace {

double norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return std::sqrt(s);
}

std::vector<double> offset_from_center(std::span<const double> x, double c) {
    std::vector<double> u(x.begin(), x.end());
    for (double& v : u) v -= c;
    return u;
}

MarginalDensity uniform_box(int d) {
    MarginalDensity m;
    m.lo.assign(d, 0.0);
    m.hi.assign(d, 1.0);
    m.p_min = m.p_max = 1.0;
    m.holder_constant_p = 0.0;
    m.uniform = true;
    m.density = [](std::span<const double>) { return 1.0; };
    m.draw = [](Stream& s, std::span<double> out) {
        for (double& v : out) v = s.uniform01();
    };
    return m;
}

// Product of per-axis sloped densities p(t) = 1/2 + t on [0,1]; sampled by
// inverting the per-axis CDF F(t) = t/2 + t^2/2.
MarginalDensity triangular_box(int d) {
    MarginalDensity m;
    m.lo.assign(d, 0.0);
    m.hi.assign(d, 1.0);
    m.p_min = std::pow(0.5, d);
    m.p_max = std::pow(1.5, d);
    m.holder_constant_p = std::sqrt(static_cast<double>(d)) * std::pow(1.5, d - 1);
    m.uniform = false;
    m.density = [](std::span<const double> x) {
        double p = 1.0;
        for (double v : x) p *= 0.5 + v;
        return p;
    };
    m.draw = [](Stream& s, std::span<double> out) {
        for (double& v : out) {
            v = std::sqrt(0.25 + 2.0 * s.uniform01()) - 0.5;
        }
    };
    return m;
}

int certification_grid(int d) {
    if (d == 1) return 201;
    if (d == 2) return 21;
    return 7;
}

void certify(const TargetFunction& target, const MarginalDensity& marginal, int d) {
    const double emp = empirical_holder_constant(target, marginal.lo, marginal.hi,
                                                 certification_grid(d));
    if (emp > target.holder_constant * (1.0 + 1e-9)) {
        throw InvalidParams("declared Holder constant " +
                            std::to_string(target.holder_constant) + " for '" +
                            target.name + "' violated empirically (" +
                            std::to_string(emp) + ")");
    }
}

}  // namespace

bool MarginalDensity::contains(std::span<const double> x) const {
    if (x.size() != lo.size()) return false;
    for (std::size_t k = 0; k < lo.size(); ++k) {
        if (x[k] < lo[k] || x[k] > hi[k]) return false;
    }
    return true;
}

double MarginalDensity::volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < lo.size(); ++k) v *= hi[k] - lo[k];
    return v;
}

Scenario make_scenario(const std::string& name, int d,
                       const std::map<std::string, double>& params) {
    if (d < 1) throw InvalidParams("dimension must be >= 1");

    static const std::set<std::string> known_names = {
        "lipschitz-cone", "holder-cusp", "smooth-sine", "constant-zero",
        "binary-sine"};
    if (!known_names.count(name)) throw UnknownScenario("unknown scenario: " + name);

    static const std::set<std::string> known_params = {
        "c", "beta", "amp", "sigma", "uniform_halfwidth", "triangular_marginal"};
    for (const auto& [key, _] : params) {
        if (!known_params.count(key)) {
            throw InvalidParams("unknown scenario param: " + key);
        }
    }
    auto get = [&](const std::string& key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };

    Scenario sc;
    sc.dim = d;
    sc.marginal = get("triangular_marginal", 0.0) != 0.0 ? triangular_box(d)
                                                         : uniform_box(d);

    const double c = get("c", 0.5);
    const double amp = get("amp", name == "binary-sine" ? 0.8 : 1.0);

    TargetFunction& t = sc.target;
    t.name = name;
    if (name == "lipschitz-cone") {
        t.beta = 1.0;
        t.holder_constant = 1.0;
        t.value = [c](std::span<const double> x) {
            return norm(offset_from_center(x, c));
        };
    } else if (name == "holder-cusp") {
        const double beta = get("beta", 0.5);
        if (!(beta > 0.0) || beta >= 1.0) {
            throw InvalidParams("holder-cusp requires beta in (0,1)");
        }
        t.beta = beta;
        t.holder_constant = 1.0;
        t.value = [c, beta](std::span<const double> x) {
            return std::pow(norm(offset_from_center(x, c)), beta);
        };
    } else if (name == "smooth-sine" || name == "binary-sine") {
        if (!(amp > 0.0) || !std::isfinite(amp)) {
            throw InvalidParams("amp must be positive and finite");
        }
        if (name == "binary-sine" && amp > 1.0) {
            throw InvalidParams("binary-sine requires amp <= 1 so |E[Y|X]| <= 1");
        }
        t.beta = 2.0;
        // Taylor-remainder bound: sup ||Hessian|| <= amp * pi^2 * d.
        t.holder_constant = amp * std::numbers::pi * std::numbers::pi * d / 2.0;
        t.value = [amp](std::span<const double> x) {
            double p = amp;
            for (double v : x) p *= std::sin(std::numbers::pi * v);
            return p;
        };
        t.gradient = [amp](std::span<const double> x) {
            std::vector<double> g(x.size());
            for (std::size_t k = 0; k < x.size(); ++k) {
                double p = amp * std::numbers::pi * std::cos(std::numbers::pi * x[k]);
                for (std::size_t j = 0; j < x.size(); ++j) {
                    if (j != k) p *= std::sin(std::numbers::pi * x[j]);
                }
                g[k] = p;
            }
            return g;
        };
    } else {  // constant-zero
        t.beta = get("beta", 1.0);
        if (!(t.beta > 0.0) || t.beta > 2.0) {
            throw InvalidParams("beta must lie in (0,2]");
        }
        t.holder_constant = 0.0;
        t.value = [](std::span<const double>) { return 0.0; };
        t.gradient = [](std::span<const double> x) {
            return std::vector<double>(x.size(), 0.0);
        };
    }

    NoiseModel& nm = sc.noise;
    if (name == "binary-sine") {
        if (params.count("sigma") || params.count("uniform_halfwidth")) {
            throw InvalidParams("binary-sine has label noise only");
        }
        nm.kind = NoiseKind::BinaryLabels;
        nm.param = 0.0;
        nm.sigma_xi_sq = 1.0;  // Var(Y|X) = 1 - f(x)^2 <= 1
    } else if (params.count("uniform_halfwidth")) {
        const double w = params.at("uniform_halfwidth");
        if (!(w >= 0.0)) throw InvalidParams("uniform_halfwidth must be >= 0");
        nm.kind = NoiseKind::BoundedUniform;
        nm.param = w;
        nm.sigma_xi_sq = w * w / 3.0;
    } else {
        const double sigma = get("sigma", 0.1);
        if (!(sigma >= 0.0)) throw InvalidParams("sigma must be >= 0");
        nm.kind = NoiseKind::Gaussian;
        nm.param = sigma;
        nm.sigma_xi_sq = sigma * sigma;
    }

    certify(sc.target, sc.marginal, d);
    return sc;
}

double sample_response(const Scenario& scenario, std::span<const double> x,
                       Stream& stream) {
    const double f = scenario.target.value(x);
    switch (scenario.noise.kind) {
        case NoiseKind::Gaussian:
            return f + scenario.noise.param * stream.normal();
        case NoiseKind::BoundedUniform:
            return f + stream.uniform(-scenario.noise.param, scenario.noise.param);
        case NoiseKind::BinaryLabels:
            if (std::abs(f) > 1.0) {
                throw InvalidParams("binary labels require |f(x)| <= 1");
            }
            return stream.bernoulli(0.5 * (1.0 + f)) ? 1.0 : -1.0;
    }
    return f;
}

Dataset sample_dataset(const Scenario& scenario, std::size_t n, std::uint64_t seed) {
    if (n < 1) throw InvalidParams("n must be >= 1");
    Stream design = derive_stream(seed, "design", n);
    Stream noise = derive_stream(seed, "noise", n);
    Dataset data;
    data.dim = scenario.dim;
    data.points.resize(n * static_cast<std::size_t>(scenario.dim));
    data.responses.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::span<double> x{data.points.data() + i * scenario.dim,
                            static_cast<std::size_t>(scenario.dim)};
        scenario.marginal.draw(design, x);
        data.responses[i] = sample_response(scenario, x, noise);
    }
    return data;
}

double true_regression(const Scenario& scenario, std::span<const double> x) {
    if (!scenario.marginal.contains(x)) {
        throw OutOfSupport("query outside the marginal's support box");
    }
    return scenario.target.value(x);
}

double empirical_holder_constant(const TargetFunction& target,
                                 std::span<const double> lo,
                                 std::span<const double> hi, int m) {
    if (m < 2) throw InvalidParams("grid resolution must be >= 2");
    const int d = static_cast<int>(lo.size());
    const bool taylor = target.beta > 1.0;
    if (taylor && !target.gradient) {
        throw MissingGradient("beta > 1 requires a gradient evaluator");
    }

    // Enumerate the m^d grid.
    std::size_t total = 1;
    for (int k = 0; k < d; ++k) total *= static_cast<std::size_t>(m);
    std::vector<std::vector<double>> grid(total, std::vector<double>(d));
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (int k = d - 1; k >= 0; --k) {
            const auto step = rem % m;
            rem /= m;
            grid[idx][k] = lo[k] + (hi[k] - lo[k]) * step / (m - 1);
        }
    }

    std::vector<double> fvals(total);
    for (std::size_t i = 0; i < total; ++i) fvals[i] = target.value(grid[i]);

    double best = 0.0;
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < total; ++i) {
        const auto gi = taylor ? target.gradient(grid[i]) : std::vector<double>{};
        for (std::size_t j = 0; j < total; ++j) {
            if (i == j) continue;
            double dist2 = 0.0;
            for (int k = 0; k < d; ++k) {
                diff[k] = grid[j][k] - grid[i][k];
                dist2 += diff[k] * diff[k];
            }
            double num = fvals[j] - fvals[i];
            if (taylor) {
                for (int k = 0; k < d; ++k) num -= gi[k] * diff[k];
            }
            const double ratio =
                std::abs(num) / std::pow(dist2, 0.5 * target.beta);
            best = std::max(best, ratio);
        }
    }
    return best;
}

Scenario recenter_scenario(const Scenario& scenario, std::span<const double> x0) {
    if (static_cast<int>(x0.size()) != scenario.dim) {
        throw DimensionMismatch("x0 dimension does not match scenario");
    }
    std::vector<double> shift(x0.begin(), x0.end());
    Scenario out = scenario;
    for (int k = 0; k < out.dim; ++k) {
        out.marginal.lo[k] -= shift[k];
        out.marginal.hi[k] -= shift[k];
    }
    auto translate = [shift](std::span<const double> z) {
        std::vector<double> x(z.begin(), z.end());
        for (std::size_t k = 0; k < x.size(); ++k) x[k] += shift[k];
        return x;
    };
    auto base_value = scenario.target.value;
    out.target.value = [base_value, translate](std::span<const double> z) {
        return base_value(translate(z));
    };
    if (scenario.target.gradient) {
        auto base_grad = scenario.target.gradient;
        out.target.gradient = [base_grad, translate](std::span<const double> z) {
            return base_grad(translate(z));
        };
    }
    auto base_density = scenario.marginal.density;
    out.marginal.density = [base_density, translate](std::span<const double> z) {
        return base_density(translate(z));
    };
    auto base_draw = scenario.marginal.draw;
    out.marginal.draw = [base_draw, shift](Stream& s, std::span<double> z) {
        base_draw(s, z);
        for (std::size_t k = 0; k < z.size(); ++k) z[k] -= shift[k];
    };
    return out;
}

}  // namespace nwinterp
