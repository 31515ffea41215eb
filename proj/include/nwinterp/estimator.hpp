#pragma once

#include <cstddef>
#include <limits>
#include <span>
#include <unordered_map>
#include <vector>

#include "nwinterp/dataset.hpp"
#include "nwinterp/kernels.hpp"

namespace nwinterp {

enum class PredictionCase {
    ExactMatch,         // query coincides with a training point
    EmptyNeighborhood,  // total kernel weight is zero; value pinned to 0
    WeightedAverage,
};

struct PredictionOutcome {
    static constexpr std::size_t kNoIndex = std::numeric_limits<std::size_t>::max();

    double value = 0.0;
    PredictionCase kind = PredictionCase::EmptyNeighborhood;
    std::size_t match_index = kNoIndex;   // ExactMatch only
    std::size_t neighbor_count = 0;       // WeightedAverage only

    bool operator==(const PredictionOutcome&) const = default;
};

// Rate-optimal bandwidth n^{-1/(2 beta + d)}. Throws DomainError for
// beta outside (0,2].
double bandwidth_for_rate(std::size_t n, double beta, int d);

namespace detail {

// Exact fixed-radius neighbor index: uniform grid over the data bounding
// box with cell edge equal to the query radius h. Falls back to a linear
// scan for small n or unbounded-support kernels.
class GridIndex {
public:
    GridIndex() = default;
    GridIndex(const Dataset& data, double cell_edge);

    bool active() const { return !cells_.empty(); }

    // Appends candidate indices whose cell intersects the ball B(x, radius).
    // Candidates still need an exact distance check.
    void gather(std::span<const double> x, double radius,
                std::vector<std::uint32_t>& out) const;

private:
    double cell_edge_ = 0.0;
    int dim_ = 0;
    std::vector<long long> cell_lo_, cell_hi_;  // per-dim integer cell range
    std::unordered_map<long long, std::vector<std::uint32_t>> cells_;

    long long flat_id(const std::vector<long long>& c) const;
};

}  // namespace detail

// The fitted interpolating estimator. Immutable after construction; all
// prediction entry points are const and safe to call concurrently.
class FittedInterpolator {
public:
    FittedInterpolator(Dataset data, KernelSpec kernel, double h);

    PredictionOutcome predict(std::span<const double> x) const;
    std::vector<PredictionOutcome> predict_batch(
        std::span<const double> xs_flat, std::size_t count) const;

    // Plug-in classifier sign(f_n) with sign(0) := +1. Requires the fitted
    // responses to all lie in {-1,+1}.
    int predict_class(std::span<const double> x) const;

    // Exactly { i : ||x - X_i|| <= radius }, ascending.
    std::vector<std::size_t> radius_neighbors(std::span<const double> x,
                                              double radius) const;

    const Dataset& dataset() const { return data_; }
    const KernelSpec& kernel() const { return kernel_; }
    double bandwidth() const { return h_; }

private:
    Dataset data_;
    KernelSpec kernel_;
    double h_;
    double query_radius_;  // support_radius * h; +inf for Gaussian
    bool binary_responses_;
    detail::GridIndex index_;

    void check_query(std::span<const double> x) const;
    void gather_candidates(std::span<const double> x, double radius,
                           std::vector<std::uint32_t>& out) const;
};

inline FittedInterpolator fit(Dataset data, KernelSpec kernel, double h) {
    return FittedInterpolator(std::move(data), kernel, h);
}

}  // namespace nwinterp
