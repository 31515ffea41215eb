#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "nwinterp/dataset.hpp"
#include "nwinterp/errors.hpp"
#include "nwinterp/estimator.hpp"
#include "nwinterp/kernels.hpp"
#include "nwinterp/rng.hpp"

using namespace nwinterp;

namespace {

Dataset random_dataset(int d, std::size_t n, Stream& s, double y_lo = -2.0,
                       double y_hi = 2.0) {
    Dataset data;
    data.dim = d;
    for (std::size_t i = 0; i < n; ++i) {
        for (int k = 0; k < d; ++k) data.points.push_back(s.uniform01());
        data.responses.push_back(s.uniform(y_lo, y_hi));
    }
    return data;
}

// Brute-force Nadaraya-Watson ratio, no spatial index, no max-weight trick.
double brute_force_value(const Dataset& data, const KernelSpec& kernel, double h,
                         std::span<const double> x) {
    double sw = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto p = data.point(i);
        double d2 = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            d2 += (x[k] - p[k]) * (x[k] - p[k]);
        }
        const double w = eval_radial(kernel, std::sqrt(d2) / h);
        sw += w;
        swy += w * data.responses[i];
    }
    return sw == 0.0 ? 0.0 : swy / sw;
}

std::vector<std::size_t> brute_force_neighbors(const Dataset& data,
                                               std::span<const double> x,
                                               double radius) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < data.size(); ++i) {
        auto p = data.point(i);
        double d2 = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            d2 += (x[k] - p[k]) * (x[k] - p[k]);
        }
        if (d2 <= radius * radius) out.push_back(i);
    }
    return out;
}

const std::vector<KernelSpec> kAllKernels = {
    KernelSpec::singular_indicator(0.49), KernelSpec::singular_trunc_poly(0.49),
    KernelSpec::singular_cos_sq(0.49), KernelSpec::epanechnikov(),
    KernelSpec::gaussian()};

}  // namespace

TEST_CASE("bandwidth_for_rate") {
    CHECK(bandwidth_for_rate(1000, 1.0, 1) == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(bandwidth_for_rate(1, 0.7, 3) == 1.0);
    CHECK(bandwidth_for_rate(64, 2.0, 2) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK_THROWS_AS(bandwidth_for_rate(100, 0.0, 1), DomainError);
    CHECK_THROWS_AS(bandwidth_for_rate(100, 2.5, 1), DomainError);
}

TEST_CASE("fit validates inputs") {
    Stream s(1);
    Dataset data = random_dataset(1, 10, s);
    CHECK_NOTHROW(fit(data, KernelSpec::singular_indicator(0.49), 0.2));
    CHECK_THROWS_AS(fit(data, KernelSpec::singular_indicator(0.49), 0.0),
                    InvalidBandwidth);
    CHECK_THROWS_AS(fit(data, KernelSpec::singular_indicator(0.49),
                        std::nan("")),
                    InvalidBandwidth);
    Dataset empty;
    empty.dim = 1;
    CHECK_THROWS_AS(fit(empty, KernelSpec::singular_indicator(0.49), 0.2),
                    EmptyDataset);
}

TEST_CASE("predict: exact match returns the training response bit-exactly") {
    Stream s(2);
    Dataset data = random_dataset(2, 25, s);
    for (const auto& k : kAllKernels) {
        FittedInterpolator model = fit(data, k, 0.13);
        const auto out = model.predict(data.point(3));
        CHECK(out.kind == PredictionCase::ExactMatch);
        CHECK(out.match_index == 3);
        CHECK(out.value == data.responses[3]);
    }
}

TEST_CASE("predict: duplicate training points resolve to the smallest index") {
    Dataset data;
    data.dim = 1;
    data.points = {0.4, 0.7, 0.4};
    data.responses = {1.0, 2.0, 3.0};
    FittedInterpolator model = fit(data, KernelSpec::singular_indicator(0.49), 0.1);
    const double q = 0.4;
    const auto out = model.predict(std::span{&q, 1});
    CHECK(out.kind == PredictionCase::ExactMatch);
    CHECK(out.match_index == 0);
    CHECK(out.value == 1.0);
}

TEST_CASE("predict: empty neighborhood pins the value to zero") {
    Dataset data;
    data.dim = 1;
    data.points = {0.1, 0.2};
    data.responses = {5.0, -5.0};
    FittedInterpolator model = fit(data, KernelSpec::singular_indicator(0.49), 0.05);
    const double q = 0.9;
    const auto out = model.predict(std::span{&q, 1});
    CHECK(out.kind == PredictionCase::EmptyNeighborhood);
    CHECK(out.value == 0.0);
}

TEST_CASE("predict: a lone in-range neighbor wins regardless of distance") {
    Dataset data;
    data.dim = 1;
    data.points = {0.5, 0.9};
    data.responses = {7.25, -3.0};
    FittedInterpolator model = fit(data, KernelSpec::singular_indicator(0.3), 0.2);
    const double q = 0.45;
    const auto out = model.predict(std::span{&q, 1});
    CHECK(out.kind == PredictionCase::WeightedAverage);
    CHECK(out.value == 7.25);
}

TEST_CASE("predict: equidistant neighbors average by symmetry") {
    Dataset data;
    data.dim = 1;
    data.points = {0.4, 0.6};
    data.responses = {1.0, 3.0};
    for (const auto& k : kAllKernels) {
        FittedInterpolator model = fit(data, k, 0.5);
        const double q = 0.5;
        const auto out = model.predict(std::span{&q, 1});
        CHECK(out.value == doctest::Approx(2.0).epsilon(1e-14));
    }
}

TEST_CASE("predict matches the brute-force ratio on random data") {
    Stream s(3);
    Dataset data = random_dataset(2, 20, s);
    for (const auto& k : kAllKernels) {
        FittedInterpolator model = fit(data, k, 0.25);
        for (int q = 0; q < 50; ++q) {
            const std::vector<double> x = {s.uniform01(), s.uniform01()};
            const double want = brute_force_value(data, k, 0.25, x);
            const auto got = model.predict(x);
            CHECK(got.value ==
                  doctest::Approx(want).epsilon(1e-12).scale(std::abs(want) + 1.0));
        }
    }
}

TEST_CASE("interpolation holds at every training point for every kernel and h") {
    Stream s(4);
    for (int d : {1, 2, 3}) {
        Dataset data = random_dataset(d, 80, s);
        for (const auto& k : kAllKernels) {
            for (double h : {0.01, 0.2, 1.5}) {
                FittedInterpolator model = fit(data, k, h);
                for (std::size_t i = 0; i < data.size(); ++i) {
                    CHECK(model.predict(data.point(i)).value == data.responses[i]);
                }
            }
        }
    }
}

TEST_CASE("weighted-average values stay within the neighbor response range") {
    Stream s(5);
    Dataset data = random_dataset(2, 150, s);
    FittedInterpolator model = fit(data, KernelSpec::singular_trunc_poly(0.49), 0.3);
    for (int q = 0; q < 300; ++q) {
        const std::vector<double> x = {s.uniform01(), s.uniform01()};
        const auto out = model.predict(x);
        if (out.kind != PredictionCase::WeightedAverage) continue;
        auto nbrs = model.radius_neighbors(x, 0.3);
        double lo = 1e300, hi = -1e300;
        for (auto i : nbrs) {
            lo = std::min(lo, data.responses[i]);
            hi = std::max(hi, data.responses[i]);
        }
        CHECK(out.value >= lo - 1e-12);
        CHECK(out.value <= hi + 1e-12);
    }
}

TEST_CASE("locality: far points do not affect compact-kernel predictions") {
    Stream s(6);
    Dataset data = random_dataset(1, 100, s);
    const KernelSpec k = KernelSpec::singular_indicator(0.49);
    const double h = 0.07;
    FittedInterpolator model = fit(data, k, h);
    for (int q = 0; q < 100; ++q) {
        const std::vector<double> x = {s.uniform01()};
        const auto before = model.predict(x);
        if (before.kind == PredictionCase::ExactMatch) continue;
        // Perturb every point outside the support ball and refit.
        Dataset mutated = data;
        for (std::size_t i = 0; i < data.size(); ++i) {
            const double dist = std::abs(data.points[i] - x[0]);
            if (dist > h) {
                mutated.points[i] += 3.0;
                mutated.responses[i] = -99.0;
            }
        }
        const auto after = fit(mutated, k, h).predict(x);
        CHECK(after.kind == before.kind);
        CHECK(after.value == before.value);
    }
}

TEST_CASE("response affine equivariance") {
    Stream s(7);
    Dataset data = random_dataset(2, 60, s);
    const double a = -1.7, b = 0.35;
    Dataset scaled = data;
    for (double& y : scaled.responses) y = a * y + b;
    for (const auto& k : kAllKernels) {
        FittedInterpolator base = fit(data, k, 0.2);
        FittedInterpolator tran = fit(scaled, k, 0.2);
        for (int q = 0; q < 60; ++q) {
            const std::vector<double> x = {s.uniform01(), s.uniform01()};
            const auto o1 = base.predict(x);
            const auto o2 = tran.predict(x);
            if (o1.kind == PredictionCase::EmptyNeighborhood) continue;
            CHECK(o2.value == doctest::Approx(a * o1.value + b)
                                  .epsilon(1e-12)
                                  .scale(std::abs(o2.value) + 1.0));
        }
    }
}

TEST_CASE("continuity at data points for truncpoly and cossq kernels") {
    // The residual gap at X_i + eps scales like (eps / d_j)^a where d_j is
    // the distance to the nearest other point, so reaching small absolute
    // gaps with a < 1/2 needs well-separated data: a jittered coarse grid.
    Stream s(8);
    Dataset data;
    data.dim = 1;
    for (std::size_t i = 0; i < 11; ++i) {
        data.points.push_back(0.25 * static_cast<double>(i) +
                              s.uniform(-0.01, 0.01));
        data.responses.push_back(s.uniform(-1.0, 1.0));
    }
    for (auto k : {KernelSpec::singular_trunc_poly(0.49),
                   KernelSpec::singular_cos_sq(0.49)}) {
        FittedInterpolator model = fit(data, k, 0.28);
        for (std::size_t i = 0; i < 10; ++i) {
            double prev_gap = 1e300;
            double gap = 0.0;
            for (double eps : {1e-2, 1e-3, 1e-4, 1e-5, 1e-6}) {
                const double x = data.points[i] + eps;
                gap = std::abs(model.predict(std::span{&x, 1}).value -
                               data.responses[i]);
                CHECK(gap <= prev_gap + 1e-15);
                prev_gap = gap;
            }
            CHECK(gap < 1e-3);
        }
    }
}

TEST_CASE("radius_neighbors equals the linear-scan oracle") {
    Stream s(9);
    Dataset data = random_dataset(3, 400, s);
    FittedInterpolator model = fit(data, KernelSpec::singular_indicator(0.49), 0.2);
    for (int q = 0; q < 500; ++q) {
        const std::vector<double> x = {s.uniform01(), s.uniform01(), s.uniform01()};
        const double radius = s.uniform(0.01, 1.2);
        CHECK(model.radius_neighbors(x, radius) ==
              brute_force_neighbors(data, x, radius));
    }
    // Radius covering everything / nothing.
    const std::vector<double> x = {0.5, 0.5, 0.5};
    CHECK(model.radius_neighbors(x, 10.0).size() == data.size());
    const std::vector<double> far = {50.0, 50.0, 50.0};
    CHECK(model.radius_neighbors(far, 0.5).empty());
}

TEST_CASE("predict_batch equals sequential predicts and preserves order") {
    Stream s(10);
    Dataset data = random_dataset(2, 40, s);
    FittedInterpolator model = fit(data, KernelSpec::singular_cos_sq(0.49), 0.2);
    std::vector<double> queries;
    const std::size_t count = 30;
    for (std::size_t i = 0; i < 2 * count; ++i) queries.push_back(s.uniform01());
    const auto batch = model.predict_batch(queries, count);
    REQUIRE(batch.size() == count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto single = model.predict(
            std::span<const double>{queries.data() + 2 * i, 2});
        CHECK(batch[i] == single);
    }
    CHECK(model.predict_batch({}, 0).empty());

    // Training points come back as exact matches.
    const auto on_data = model.predict_batch(data.points, data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(on_data[i].kind == PredictionCase::ExactMatch);
        CHECK(on_data[i].value == data.responses[i]);
    }
}

TEST_CASE("predict_class") {
    Dataset data;
    data.dim = 1;
    data.points = {0.1, 0.2, 0.8};
    data.responses = {-1.0, -1.0, 1.0};
    FittedInterpolator model = fit(data, KernelSpec::singular_trunc_poly(0.49), 0.15);
    double q = 0.1;
    CHECK(model.predict_class(std::span{&q, 1}) == -1);
    q = 0.85;
    CHECK(model.predict_class(std::span{&q, 1}) == 1);
    q = 0.5;  // empty neighborhood, sign(0) = +1
    CHECK(model.predict_class(std::span{&q, 1}) == 1);

    Dataset reg = data;
    reg.responses = {0.3, -1.0, 1.0};
    FittedInterpolator bad = fit(reg, KernelSpec::singular_trunc_poly(0.49), 0.15);
    CHECK_THROWS_AS(bad.predict_class(std::span{&q, 1}), NonBinaryResponses);
}

TEST_CASE("query validation") {
    Stream s(12);
    Dataset data = random_dataset(2, 10, s);
    FittedInterpolator model = fit(data, KernelSpec::epanechnikov(), 0.2);
    const std::vector<double> wrong_dim = {0.5};
    CHECK_THROWS_AS(model.predict(wrong_dim), DimensionMismatch);
    const std::vector<double> non_finite = {0.5, std::nan("")};
    CHECK_THROWS_AS(model.predict(non_finite), NonFiniteQuery);
}

TEST_CASE("gaussian far-query underflow yields the empty-neighborhood case") {
    Dataset data;
    data.dim = 1;
    data.points = {0.0};
    data.responses = {4.0};
    FittedInterpolator model = fit(data, KernelSpec::gaussian(), 1e-3);
    const double q = 5.0;  // exp(-(5000)^2) underflows to zero
    const auto out = model.predict(std::span{&q, 1});
    CHECK(out.kind == PredictionCase::EmptyNeighborhood);
    CHECK(out.value == 0.0);
}

TEST_CASE("near-singularity underflow falls back to the nearest point") {
    Dataset data;
    data.dim = 1;
    data.points = {0.5, 0.6};
    data.responses = {2.0, -2.0};
    FittedInterpolator model = fit(data, KernelSpec::singular_indicator(0.49), 0.2);
    const double q = std::nextafter(0.5, 1.0);  // tiny but nonzero distance
    const auto out = model.predict(std::span{&q, 1});
    // Either the ratio stays finite (weighted average hugging Y_0) or the
    // implementation falls back to the nearest point; both must be ~2.
    CHECK(out.value == doctest::Approx(2.0).epsilon(1e-6));
}

TEST_CASE("dataset CSV round-trip and parse errors") {
    Stream s(13);
    Dataset data = random_dataset(2, 17, s);
    std::stringstream buf;
    write_dataset_csv(buf, data);
    const Dataset back = read_dataset_csv(buf, "roundtrip");
    CHECK(back.dim == data.dim);
    CHECK(back.points == data.points);
    CHECK(back.responses == data.responses);

    std::stringstream bad_header("a,b\n1,2\n");
    CHECK_THROWS_AS(read_dataset_csv(bad_header), CsvParseError);
    std::stringstream bad_field("x1,y\n1,2\n3,oops\n");
    CHECK_THROWS_WITH_AS(read_dataset_csv(bad_field, "f"),
                         doctest::Contains("row 3"), CsvParseError);
    std::stringstream bad_count("x1,y\n1,2,3\n");
    CHECK_THROWS_AS(read_dataset_csv(bad_count), CsvParseError);
}
