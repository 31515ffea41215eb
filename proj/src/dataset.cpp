#include "nwinterp/dataset.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nwinterp/errors.hpp"

namespace nwinterp {

void Dataset::push_back(std::span<const double> x, double y) {
    if (static_cast<int>(x.size()) != dim) {
        throw DimensionMismatch("point dimension does not match dataset");
    }
    points.insert(points.end(), x.begin(), x.end());
    responses.push_back(y);
}

void Dataset::validate() const {
    if (dim < 1) throw DimensionMismatch("dataset dimension must be >= 1");
    if (responses.empty()) throw EmptyDataset("dataset has no rows");
    if (points.size() != responses.size() * static_cast<std::size_t>(dim)) {
        throw DimensionMismatch("points/responses length mismatch");
    }
    for (double v : points) {
        if (!std::isfinite(v)) throw NonFiniteQuery("non-finite coordinate in dataset");
    }
    for (double v : responses) {
        if (!std::isfinite(v)) throw NonFiniteQuery("non-finite response in dataset");
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, const std::string& where, std::size_t row) {
    const char* b = s.data();
    const char* e = b + s.size();
    while (b < e && (*b == ' ' || *b == '\t')) ++b;
    while (e > b && (e[-1] == ' ' || e[-1] == '\t' || e[-1] == '\r')) --e;
    double v;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc() || p != e) {
        throw CsvParseError(where + ": row " + std::to_string(row) +
                            ": cannot parse number '" + s + "'");
    }
    return v;
}

}  // namespace

Dataset read_dataset_csv(std::istream& in, const std::string& source_name) {
    std::string line;
    if (!std::getline(in, line)) {
        throw CsvParseError(source_name + ": empty input, expected header");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    auto header = split_csv_line(line);
    if (header.size() < 2 || header.back() != "y") {
        throw CsvParseError(source_name + ": header must be x1,...,x<d>,y");
    }
    const int d = static_cast<int>(header.size()) - 1;
    for (int k = 0; k < d; ++k) {
        if (header[k] != "x" + std::to_string(k + 1)) {
            throw CsvParseError(source_name + ": unexpected header column '" +
                                header[k] + "'");
        }
    }

    Dataset data;
    data.dim = d;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = split_csv_line(line);
        if (static_cast<int>(fields.size()) != d + 1) {
            throw CsvParseError(source_name + ": row " + std::to_string(row) +
                                ": expected " + std::to_string(d + 1) +
                                " fields, got " + std::to_string(fields.size()));
        }
        for (int k = 0; k < d; ++k) {
            data.points.push_back(parse_double(fields[k], source_name, row));
        }
        data.responses.push_back(parse_double(fields[d], source_name, row));
    }
    data.validate();
    return data;
}

Dataset read_dataset_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CsvParseError("cannot open file: " + path);
    return read_dataset_csv(in, path);
}

void write_dataset_csv(std::ostream& out, const Dataset& data) {
    data.validate();
    for (int k = 1; k <= data.dim; ++k) out << "x" << k << ",";
    out << "y\n";
    std::ostringstream buf;
    buf.precision(17);
    for (std::size_t i = 0; i < data.size(); ++i) {
        buf.str("");
        auto x = data.point(i);
        for (double v : x) buf << v << ",";
        buf << data.responses[i] << "\n";
        out << buf.str();
    }
}

void write_dataset_csv_file(const std::string& path, const Dataset& data) {
    std::ofstream out(path);
    if (!out) throw CsvParseError("cannot open file for writing: " + path);
    write_dataset_csv(out, data);
}

}  // namespace nwinterp
