#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "modalmatrix/datagen.hpp"
#include "modalmatrix/evaluation.hpp"
#include "modalmatrix/meanshift.hpp"
#include "modalmatrix/mvd.hpp"

namespace py = pybind11;
namespace mm = modalmatrix;

namespace {

mm::Matrix matrix_from_array(const py::array_t<double, py::array::c_style |
                                                           py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw mm::DimensionError("expected a 2-d array");
    const int p = static_cast<int>(arr.shape(0));
    const int t = static_cast<int>(arr.shape(1));
    std::vector<double> entries(arr.data(), arr.data() + static_cast<std::size_t>(p) * t);
    return mm::Matrix(p, t, std::move(entries));
}

py::array_t<double> matrix_to_array(const mm::Matrix& m) {
    py::array_t<double> out({m.rows(), m.cols()});
    std::copy(m.data(), m.data() + m.size(), out.mutable_data());
    return out;
}

mm::Dataset dataset_from_array(const py::array_t<double, py::array::c_style |
                                                             py::array::forcecast>& arr) {
    if (arr.ndim() != 3) throw mm::DimensionError("expected an (N, P, T) array");
    const int n = static_cast<int>(arr.shape(0));
    const int p = static_cast<int>(arr.shape(1));
    const int t = static_cast<int>(arr.shape(2));
    std::vector<mm::Matrix> obs;
    obs.reserve(static_cast<std::size_t>(n));
    const double* base = arr.data();
    const std::size_t stride = static_cast<std::size_t>(p) * t;
    for (int i = 0; i < n; ++i) {
        std::vector<double> entries(base + i * stride, base + (i + 1) * stride);
        obs.emplace_back(p, t, std::move(entries));
    }
    return mm::Dataset(std::move(obs));
}

py::array_t<double> dataset_to_array(const mm::Dataset& data) {
    py::array_t<double> out({data.size(), data.rows(), data.cols()});
    double* dst = out.mutable_data();
    const std::size_t stride = static_cast<std::size_t>(data.dim());
    for (int i = 0; i < data.size(); ++i)
        std::copy(data[i].data(), data[i].data() + data.dim(), dst + i * stride);
    return out;
}

py::array_t<double> modes_to_array(const std::vector<mm::Matrix>& modes) {
    const int m = static_cast<int>(modes.size());
    py::array_t<double> out({m, modes.front().rows(), modes.front().cols()});
    double* dst = out.mutable_data();
    const std::size_t stride = static_cast<std::size_t>(modes.front().size());
    for (int i = 0; i < m; ++i)
        std::copy(modes[static_cast<std::size_t>(i)].data(),
                  modes[static_cast<std::size_t>(i)].data() + static_cast<int>(stride),
                  dst + i * stride);
    return out;
}

mm::EstimatorConfig make_config(const std::string& estimator,
                                std::optional<double> h, std::optional<int> k,
                                const mm::Dataset& data) {
    mm::EstimatorConfig config;
    if (estimator == "fixed") {
        config.bandwidth = mm::FixedBandwidth{
            h ? *h : mm::normal_scale_gradient_bandwidth(data)};
        config.kernel = mm::KernelFamily::GaussianMatrixNormal;
    } else if (estimator == "balloon") {
        config.bandwidth = mm::BalloonBandwidth{
            k ? *k : mm::choose_k(mm::KnnRule::Five, data.size())};
        config.kernel = mm::KernelFamily::UniformBall;
    } else if (estimator == "samplepoint") {
        config.bandwidth = mm::SamplePointBandwidth{
            k ? *k : mm::choose_k(mm::KnnRule::Five, data.size()),
            h ? *h : mm::normal_scale_gradient_bandwidth(data)};
        config.kernel = mm::KernelFamily::GaussianMatrixNormal;
    } else {
        throw mm::ParameterError("estimator must be fixed, balloon or samplepoint");
    }
    return config;
}

using InputArray =
    py::array_t<double, py::array::c_style | py::array::forcecast>;

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Modal clustering of matrix-variate data";

    py::register_exception<mm::DimensionError>(m, "DimensionError", PyExc_ValueError);
    py::register_exception<mm::ParameterError>(m, "ParameterError", PyExc_ValueError);
    py::register_exception<mm::DegenerateBandwidthError>(m, "DegenerateBandwidthError",
                                                         PyExc_RuntimeError);
    py::register_exception<mm::MetricError>(m, "MetricError", PyExc_ValueError);

    m.attr("RNG_ALGORITHM") = mm::kRngAlgorithmId;

    m.def(
        "generate",
        [](const std::string& preset, int n, int p, int t, double rho, double sigma,
           std::uint64_t seed, std::optional<std::vector<double>> weights) {
            mm::PresetSpec spec = mm::resolve_preset(preset, p, t);
            mm::GenConfig cfg;
            cfg.prototypes = std::move(spec.prototypes);
            cfg.weights = weights ? *weights : spec.weights;
            cfg.rho = rho;
            cfg.sigma = sigma;
            cfg.n = n;
            cfg.seed = seed;
            const mm::GeneratedSample sample = mm::generate(cfg);
            return py::make_tuple(dataset_to_array(sample.data),
                                  py::array_t<int>(py::cast(sample.labels)));
        },
        py::arg("preset"), py::arg("n"), py::arg("p") = 5, py::arg("t") = 5,
        py::arg("rho") = 1.0, py::arg("sigma") = 1.0, py::arg("seed") = 1,
        py::arg("weights") = py::none(),
        "Sample a synthetic dataset from a named preset; returns (data, labels).");

    m.def(
        "preset_prototype",
        [](const std::string& name, int p, int t) {
            if (name.size() != 1) throw mm::ParameterError("prototype name is one letter");
            return matrix_to_array(mm::preset_prototype(name[0], p, t).values);
        },
        py::arg("name"), py::arg("p") = 5, py::arg("t") = 5);

    m.def(
        "cluster",
        [](const InputArray& data_arr, const std::string& estimator,
           std::optional<double> h, std::optional<int> k, double tol, int max_iter,
           double merge_factor, int threads) {
            const mm::Dataset data = dataset_from_array(data_arr);
            const mm::EstimatorConfig config = make_config(estimator, h, k, data);
            mm::MeanShiftConfig ms;
            ms.tol = tol;
            ms.max_iter = max_iter;
            ms.merge_radius_factor = merge_factor;
            const mm::ClusterResult result = mm::cluster(data, config, ms, threads);

            py::dict out;
            out["labels"] = py::array_t<int>(py::cast(result.labels));
            out["modes"] = modes_to_array(result.modes);
            out["iterations"] = py::array_t<int>(py::cast(result.iterations));
            out["converged"] = py::cast(result.converged);
            out["mode_log_density"] = py::cast(result.mode_log_density);
            return out;
        },
        py::arg("data"), py::arg("estimator") = "balloon", py::arg("h") = py::none(),
        py::arg("k") = py::none(), py::arg("tol") = 1e-7, py::arg("max_iter") = 500,
        py::arg("merge_factor") = 0.5, py::arg("threads") = 1,
        "Modal clustering via mean-shift; returns labels, modes and diagnostics.");

    m.def(
        "log_density",
        [](const InputArray& data_arr, const InputArray& query_arr,
           const std::string& estimator, std::optional<double> h,
           std::optional<int> k) {
            const mm::Dataset data = dataset_from_array(data_arr);
            const mm::Dataset queries = dataset_from_array(query_arr);
            const mm::FittedEstimator fitted =
                mm::fit(make_config(estimator, h, k, data), data);
            std::vector<double> out(static_cast<std::size_t>(queries.size()));
            for (int i = 0; i < queries.size(); ++i)
                out[static_cast<std::size_t>(i)] = fitted.log_density_at(queries[i]);
            return py::array_t<double>(py::cast(out));
        },
        py::arg("data"), py::arg("query"), py::arg("estimator") = "fixed",
        py::arg("h") = py::none(), py::arg("k") = py::none(),
        "Pointwise log-density of query matrices under a fitted estimator.");

    m.def(
        "mean_shift_step",
        [](const InputArray& data_arr, const InputArray& y_arr,
           const std::string& estimator, std::optional<double> h,
           std::optional<int> k) {
            const mm::Dataset data = dataset_from_array(data_arr);
            const mm::FittedEstimator fitted =
                mm::fit(make_config(estimator, h, k, data), data);
            return matrix_to_array(mm::ms_step(fitted, matrix_from_array(y_arr)));
        },
        py::arg("data"), py::arg("y"), py::arg("estimator") = "fixed",
        py::arg("h") = py::none(), py::arg("k") = py::none());

    m.def(
        "dct2",
        [](const InputArray& arr) { return matrix_to_array(mm::dct2_forward(matrix_from_array(arr))); },
        py::arg("m"), "Orthonormal 2-d type-II DCT.");
    m.def(
        "idct2",
        [](const InputArray& arr) { return matrix_to_array(mm::dct2_inverse(matrix_from_array(arr))); },
        py::arg("omega"), "Inverse of dct2.");

    m.def(
        "fowlkes_mallows",
        [](const std::vector<int>& a, const std::vector<int>& b) {
            return mm::fowlkes_mallows(a, b);
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "confusion_table",
        [](const std::vector<int>& a, const std::vector<int>& b) {
            const mm::ConfusionTable table = mm::confusion_table(a, b);
            return py::make_tuple(table.row_labels, table.col_labels, table.counts);
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "kmeans",
        [](const InputArray& data_arr, int k, std::uint64_t seed, int restarts) {
            const mm::Dataset data = dataset_from_array(data_arr);
            const mm::KMeansResult result = mm::kmeans(data, k, seed, restarts);
            return py::make_tuple(py::array_t<int>(py::cast(result.labels)),
                                  result.objective);
        },
        py::arg("data"), py::arg("k"), py::arg("seed") = 1, py::arg("restarts") = 10);

    m.def(
        "silhouette",
        [](const InputArray& data_arr, const std::vector<int>& labels) {
            return mm::silhouette(dataset_from_array(data_arr), labels);
        },
        py::arg("data"), py::arg("labels"));

    m.def(
        "select_k_silhouette",
        [](const InputArray& data_arr, int kmin, int kmax, std::uint64_t seed) {
            const mm::KSelection sel =
                mm::select_k_silhouette(dataset_from_array(data_arr), kmin, kmax, seed);
            return py::make_tuple(sel.k, py::array_t<int>(py::cast(sel.labels)),
                                  sel.score);
        },
        py::arg("data"), py::arg("kmin") = 2, py::arg("kmax") = 9, py::arg("seed") = 1);

    m.def(
        "amise_bandwidth",
        [](int n, int dim, double r_k, double m2_k, double r_laplacian_f) {
            return mm::amise_bandwidth(n, dim, r_k, m2_k, r_laplacian_f);
        },
        py::arg("n"), py::arg("dim"), py::arg("r_k"), py::arg("m2_k"),
        py::arg("r_laplacian_f"));

    m.def(
        "normal_scale_gradient_bandwidth",
        [](const InputArray& data_arr) {
            return mm::normal_scale_gradient_bandwidth(dataset_from_array(data_arr));
        },
        py::arg("data"));

    m.def(
        "choose_k",
        [](double factor, int n) {
            if (factor == 0.5) return mm::choose_k(mm::KnnRule::Half, n);
            if (factor == 1.0) return mm::choose_k(mm::KnnRule::One, n);
            if (factor == 5.0) return mm::choose_k(mm::KnnRule::Five, n);
            throw mm::ParameterError("factor must be 0.5, 1 or 5");
        },
        py::arg("factor"), py::arg("n"));

    m.def(
        "read_mvd",
        [](const std::string& path) {
            const mm::MvdData mvd = mm::read_mvd(path);
            return py::make_tuple(dataset_to_array(mvd.data),
                                  mvd.has_labels
                                      ? py::object(py::array_t<int>(py::cast(mvd.labels)))
                                      : py::object(py::none()));
        },
        py::arg("path"));

    m.def(
        "write_mvd",
        [](const std::string& path, const InputArray& data_arr,
           std::optional<std::vector<int>> labels) {
            const mm::Dataset data = dataset_from_array(data_arr);
            mm::write_mvd(path, data, labels ? &*labels : nullptr);
        },
        py::arg("path"), py::arg("data"), py::arg("labels") = py::none());

#ifdef MODALMATRIX_VERSION
    m.attr("__version__") = MODALMATRIX_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
