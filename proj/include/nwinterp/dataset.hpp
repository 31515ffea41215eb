#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace nwinterp {

// A sample of n points in R^d with scalar responses. Points are stored
// row-major; every coordinate and response must be finite.
struct Dataset {
    int dim = 0;
    std::vector<double> points;     // size() * dim, row-major
    std::vector<double> responses;  // size()

    std::size_t size() const { return responses.size(); }

    std::span<const double> point(std::size_t i) const {
        return {points.data() + i * static_cast<std::size_t>(dim),
                static_cast<std::size_t>(dim)};
    }

    void push_back(std::span<const double> x, double y);

    // Throws EmptyDataset / DimensionMismatch / NonFiniteQuery on violation.
    void validate() const;
};

// CSV with header "x1,...,x<d>,y", one observation per row. Parse errors
// report 1-based row numbers.
Dataset read_dataset_csv(std::istream& in, const std::string& source_name = "<stream>");
Dataset read_dataset_csv_file(const std::string& path);
void write_dataset_csv(std::ostream& out, const Dataset& data);
void write_dataset_csv_file(const std::string& path, const Dataset& data);

}  // namespace nwinterp
