// Python bindings for the core operations: kernels, the interpolating
// estimator, scenario sampling, and the power-law fitter.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <span>

#include "nwinterp/datagen.hpp"
#include "nwinterp/errors.hpp"
#include "nwinterp/estimator.hpp"
#include "nwinterp/experiments.hpp"
#include "nwinterp/kernels.hpp"

namespace py = pybind11;
using namespace nwinterp;

namespace {

Dataset dataset_from_arrays(py::array_t<double, py::array::c_style | py::array::forcecast> x,
                            py::array_t<double, py::array::c_style | py::array::forcecast> y) {
    if (x.ndim() != 2) throw py::value_error("points must be a 2-D array (n, d)");
    if (y.ndim() != 1 || y.shape(0) != x.shape(0)) {
        throw py::value_error("responses must be 1-D with length matching points");
    }
    Dataset data;
    data.dim = static_cast<int>(x.shape(1));
    data.points.assign(x.data(), x.data() + x.size());
    data.responses.assign(y.data(), y.data() + y.size());
    data.validate();
    return data;
}

std::string case_str(PredictionCase c) {
    switch (c) {
        case PredictionCase::ExactMatch: return "exact-match";
        case PredictionCase::EmptyNeighborhood: return "empty-neighborhood";
        case PredictionCase::WeightedAverage: return "weighted-average";
    }
    return "?";
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Interpolating Nadaraya-Watson estimator with singular kernels";
    m.attr("__version__") = "0.1.0";

    py::register_exception<Error>(m, "NwinterpError", PyExc_RuntimeError);

    py::class_<KernelSpec>(m, "Kernel")
        .def(py::init([](const std::string& name, std::optional<double> a) {
                 return kernel_from_name(name, a);
             }),
             py::arg("name"), py::arg("a") = std::nullopt)
        .def_property_readonly("name", [](const KernelSpec& k) { return kernel_name(k); })
        .def_property_readonly("exponent", [](const KernelSpec& k) { return k.exponent; })
        .def("eval_radial", [](const KernelSpec& k, double r) { return eval_radial(k, r); })
        .def("support_radius", [](const KernelSpec& k) { return support_radius(k); })
        .def("squared_norm_integral",
             [](const KernelSpec& k, int d) { return squared_norm_integral(k, d); })
        .def("valid_for_dimension",
             [](const KernelSpec& k, int d) { return valid_for_dimension(k, d); })
        .def("__repr__", [](const KernelSpec& k) { return "Kernel(" + kernel_name(k) + ")"; });

    m.def("bandwidth_for_rate", &bandwidth_for_rate, py::arg("n"), py::arg("beta"),
          py::arg("d"));

    py::class_<FittedInterpolator>(m, "Interpolator")
        .def(py::init([](py::array_t<double> x, py::array_t<double> y,
                         const KernelSpec& kernel, double h) {
                 return FittedInterpolator(dataset_from_arrays(x, y), kernel, h);
             }),
             py::arg("points"), py::arg("responses"), py::arg("kernel"), py::arg("h"))
        .def_property_readonly("h", &FittedInterpolator::bandwidth)
        .def_property_readonly("n",
                               [](const FittedInterpolator& f) { return f.dataset().size(); })
        .def("predict",
             [](const FittedInterpolator& f, std::vector<double> x) {
                 const auto out = f.predict(x);
                 return py::make_tuple(out.value, case_str(out.kind));
             })
        .def("predict_batch",
             [](const FittedInterpolator& f,
                py::array_t<double, py::array::c_style | py::array::forcecast> xs) {
                 if (xs.ndim() != 2) throw py::value_error("queries must be 2-D (m, d)");
                 const auto count = static_cast<std::size_t>(xs.shape(0));
                 const auto outs = f.predict_batch(
                     std::span<const double>(xs.data(), xs.size()), count);
                 py::array_t<double> values(
                     py::array::ShapeContainer{static_cast<py::ssize_t>(count)});
                 py::list cases;
                 auto* v = values.mutable_data();
                 for (std::size_t i = 0; i < count; ++i) {
                     v[i] = outs[i].value;
                     cases.append(case_str(outs[i].kind));
                 }
                 return py::make_tuple(values, cases);
             })
        .def("predict_class",
             [](const FittedInterpolator& f, std::vector<double> x) {
                 return f.predict_class(x);
             })
        .def("radius_neighbors",
             [](const FittedInterpolator& f, std::vector<double> x, double radius) {
                 return f.radius_neighbors(x, radius);
             });

    m.def(
        "sample_scenario",
        [](const std::string& name, int d, std::size_t n, std::uint64_t seed,
           const std::map<std::string, double>& params) {
            const Scenario sc = make_scenario(name, d, params);
            const Dataset data = sample_dataset(sc, n, seed);
            py::array_t<double> x({static_cast<py::ssize_t>(n), static_cast<py::ssize_t>(d)});
            py::array_t<double> y(
                py::array::ShapeContainer{static_cast<py::ssize_t>(n)});
            std::copy(data.points.begin(), data.points.end(), x.mutable_data());
            std::copy(data.responses.begin(), data.responses.end(), y.mutable_data());
            return py::make_tuple(x, y);
        },
        py::arg("name"), py::arg("d"), py::arg("n"), py::arg("seed"),
        py::arg("params") = std::map<std::string, double>{});

    m.def(
        "true_regression",
        [](const std::string& name, int d, std::vector<double> x,
           const std::map<std::string, double>& params) {
            return true_regression(make_scenario(name, d, params), x);
        },
        py::arg("name"), py::arg("d"), py::arg("x"),
        py::arg("params") = std::map<std::string, double>{});

    m.def("fit_power_law", [](std::vector<std::pair<double, double>> pairs) {
        const PowerLawFit fit = fit_power_law(pairs);
        py::dict out;
        out["slope"] = fit.slope;
        out["intercept"] = fit.intercept;
        out["slope_stderr"] = fit.slope_stderr;
        return out;
    });
}
