#include "nwinterp/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "nwinterp/errors.hpp"

namespace nwinterp {

double bandwidth_for_rate(std::size_t n, double beta, int d) {
    if (n < 1) throw DomainError("n must be >= 1");
    if (d < 1) throw DomainError("d must be >= 1");
    if (!(beta > 0.0) || beta > 2.0 || !std::isfinite(beta)) {
        throw DomainError("beta must lie in (0, 2]");
    }
    return std::pow(static_cast<double>(n), -1.0 / (2.0 * beta + d));
}

namespace detail {

namespace {
constexpr std::size_t kLinearScanThreshold = 64;

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        const double diff = a[k] - b[k];
        s += diff * diff;
    }
    return s;
}
}  // namespace

GridIndex::GridIndex(const Dataset& data, double cell_edge)
    : cell_edge_(cell_edge), dim_(data.dim) {
    const std::size_t n = data.size();
    std::vector<double> lo(dim_), hi(dim_);
    for (int k = 0; k < dim_; ++k) lo[k] = hi[k] = data.points[k];
    for (std::size_t i = 1; i < n; ++i) {
        auto x = data.point(i);
        for (int k = 0; k < dim_; ++k) {
            lo[k] = std::min(lo[k], x[k]);
            hi[k] = std::max(hi[k], x[k]);
        }
    }
    cell_lo_.resize(dim_);
    cell_hi_.resize(dim_);
    double total_cells = 1.0;
    for (int k = 0; k < dim_; ++k) {
        cell_lo_[k] = static_cast<long long>(std::floor(lo[k] / cell_edge_));
        cell_hi_[k] = static_cast<long long>(std::floor(hi[k] / cell_edge_));
        total_cells *= static_cast<double>(cell_hi_[k] - cell_lo_[k] + 1);
    }
    if (total_cells > 9e15) {
        // Flat ids would overflow; caller falls back to a linear scan.
        cell_lo_.clear();
        cell_hi_.clear();
        return;
    }
    std::vector<long long> c(dim_);
    for (std::size_t i = 0; i < n; ++i) {
        auto x = data.point(i);
        for (int k = 0; k < dim_; ++k) {
            c[k] = static_cast<long long>(std::floor(x[k] / cell_edge_));
        }
        cells_[flat_id(c)].push_back(static_cast<std::uint32_t>(i));
    }
}

long long GridIndex::flat_id(const std::vector<long long>& c) const {
    long long id = 0;
    for (int k = 0; k < dim_; ++k) {
        id = id * (cell_hi_[k] - cell_lo_[k] + 1) + (c[k] - cell_lo_[k]);
    }
    return id;
}

void GridIndex::gather(std::span<const double> x, double radius,
                       std::vector<std::uint32_t>& out) const {
    std::vector<long long> q_lo(dim_), q_hi(dim_);
    double visit = 1.0;
    for (int k = 0; k < dim_; ++k) {
        q_lo[k] = std::max(cell_lo_[k],
                           static_cast<long long>(std::floor((x[k] - radius) / cell_edge_)));
        q_hi[k] = std::min(cell_hi_[k],
                           static_cast<long long>(std::floor((x[k] + radius) / cell_edge_)));
        if (q_lo[k] > q_hi[k]) return;  // ball misses the data bounding box
        visit *= static_cast<double>(q_hi[k] - q_lo[k] + 1);
    }
    if (visit > static_cast<double>(cells_.size())) {
        // Cheaper to enumerate occupied cells than the full query window.
        for (const auto& [id, idxs] : cells_) {
            long long rem = id;
            bool inside = true;
            for (int k = dim_ - 1; k >= 0; --k) {
                const long long span = cell_hi_[k] - cell_lo_[k] + 1;
                const long long coord = cell_lo_[k] + rem % span;
                rem /= span;
                if (coord < q_lo[k] || coord > q_hi[k]) {
                    inside = false;
                    break;
                }
            }
            if (inside) out.insert(out.end(), idxs.begin(), idxs.end());
        }
        return;
    }
    std::vector<long long> c = q_lo;
    while (true) {
        auto it = cells_.find(flat_id(c));
        if (it != cells_.end()) {
            out.insert(out.end(), it->second.begin(), it->second.end());
        }
        int k = dim_ - 1;
        while (k >= 0) {
            if (++c[k] <= q_hi[k]) break;
            c[k] = q_lo[k];
            --k;
        }
        if (k < 0) break;
    }
}

}  // namespace detail

FittedInterpolator::FittedInterpolator(Dataset data, KernelSpec kernel, double h)
    : data_(std::move(data)), kernel_(kernel), h_(h) {
    if (!(h > 0.0) || !std::isfinite(h)) {
        throw InvalidBandwidth("bandwidth must be positive and finite");
    }
    data_.validate();
    query_radius_ = support_radius(kernel_) * h_;
    binary_responses_ = std::all_of(data_.responses.begin(), data_.responses.end(),
                                    [](double y) { return y == 1.0 || y == -1.0; });
    if (std::isfinite(query_radius_) && data_.size() >= detail::kLinearScanThreshold) {
        index_ = detail::GridIndex(data_, query_radius_);
    }
}

void FittedInterpolator::check_query(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != data_.dim) {
        throw DimensionMismatch("query dimension does not match fitted dataset");
    }
    for (double v : x) {
        if (!std::isfinite(v)) throw NonFiniteQuery("non-finite query coordinate");
    }
}

void FittedInterpolator::gather_candidates(std::span<const double> x, double radius,
                                           std::vector<std::uint32_t>& out) const {
    if (index_.active() && std::isfinite(radius)) {
        index_.gather(x, radius, out);
    } else {
        out.resize(data_.size());
        for (std::size_t i = 0; i < data_.size(); ++i) {
            out[i] = static_cast<std::uint32_t>(i);
        }
    }
}

PredictionOutcome FittedInterpolator::predict(std::span<const double> x) const {
    check_query(x);

    thread_local std::vector<std::uint32_t> candidates;
    candidates.clear();
    gather_candidates(x, query_radius_, candidates);

    // Case 1: exact match (zero Euclidean distance), smallest index wins.
    std::size_t exact = PredictionOutcome::kNoIndex;
    thread_local std::vector<double> dists;
    dists.clear();
    dists.reserve(candidates.size());
    for (std::uint32_t i : candidates) {
        const double d2 = detail::squared_distance(x, data_.point(i));
        dists.push_back(d2);
        if (d2 == 0.0 && i < exact) exact = i;
    }
    if (exact != PredictionOutcome::kNoIndex) {
        return {data_.responses[exact], PredictionCase::ExactMatch, exact, 0};
    }

    const double r2 = query_radius_ * query_radius_;
    thread_local std::vector<double> weights;
    thread_local std::vector<std::uint32_t> kept;
    weights.clear();
    kept.clear();
    double w_max = 0.0;
    for (std::size_t j = 0; j < candidates.size(); ++j) {
        if (std::isfinite(query_radius_) && dists[j] > r2) continue;
        const double w = eval_radial(kernel_, std::sqrt(dists[j]) / h_);
        if (w <= 0.0) continue;
        weights.push_back(w);
        kept.push_back(candidates[j]);
        w_max = std::max(w_max, w);
    }
    if (weights.empty()) {
        return {0.0, PredictionCase::EmptyNeighborhood, PredictionOutcome::kNoIndex, 0};
    }
    if (!std::isfinite(w_max)) {
        // Distance underflowed inside the singularity: treat the nearest
        // point as an exact match rather than dividing infinities.
        std::size_t best = 0;
        double best_d2 = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < candidates.size(); ++j) {
            if (dists[j] < best_d2 ||
                (dists[j] == best_d2 && candidates[j] < candidates[best])) {
                best_d2 = dists[j];
                best = j;
            }
        }
        const std::size_t idx = candidates[best];
        return {data_.responses[idx], PredictionCase::ExactMatch, idx, 0};
    }

    // Case 3: weighted average with max-weight normalization, every ratio
    // in [0,1].
    double sum_w = 0.0, sum_wy = 0.0;
    for (std::size_t j = 0; j < weights.size(); ++j) {
        const double rho = weights[j] / w_max;
        sum_w += rho;
        sum_wy += rho * data_.responses[kept[j]];
    }
    return {sum_wy / sum_w, PredictionCase::WeightedAverage,
            PredictionOutcome::kNoIndex, weights.size()};
}

std::vector<PredictionOutcome> FittedInterpolator::predict_batch(
    std::span<const double> xs_flat, std::size_t count) const {
    const auto d = static_cast<std::size_t>(data_.dim);
    if (xs_flat.size() != count * d) {
        throw DimensionMismatch("batch buffer size does not match count * dim");
    }
    std::vector<PredictionOutcome> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        try {
            out.push_back(predict(xs_flat.subspan(i * d, d)));
        } catch (const Error& e) {
            throw Error("batch query " + std::to_string(i) + ": " + e.what());
        }
    }
    return out;
}

int FittedInterpolator::predict_class(std::span<const double> x) const {
    if (!binary_responses_) {
        throw NonBinaryResponses("predict_class requires responses in {-1,+1}");
    }
    return predict(x).value < 0.0 ? -1 : 1;
}

std::vector<std::size_t> FittedInterpolator::radius_neighbors(
    std::span<const double> x, double radius) const {
    check_query(x);
    if (!(radius > 0.0)) throw DomainError("radius must be positive");
    std::vector<std::uint32_t> candidates;
    if (index_.active() && radius <= query_radius_) {
        index_.gather(x, radius, candidates);
    } else {
        candidates.resize(data_.size());
        for (std::size_t i = 0; i < data_.size(); ++i) {
            candidates[i] = static_cast<std::uint32_t>(i);
        }
    }
    const double r2 = radius * radius;
    std::vector<std::size_t> out;
    for (std::uint32_t i : candidates) {
        if (detail::squared_distance(x, data_.point(i)) <= r2) out.push_back(i);
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace nwinterp
