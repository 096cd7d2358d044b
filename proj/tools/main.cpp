// modalmatrix command line: synthetic data generation, modal clustering,
// partition scoring and the Monte Carlo benchmark harness.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "modalmatrix/bench.hpp"
#include "modalmatrix/datagen.hpp"
#include "modalmatrix/evaluation.hpp"
#include "modalmatrix/meanshift.hpp"
#include "modalmatrix/mvd.hpp"

namespace mm = modalmatrix;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitDegenerate = 4;

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("MODALMATRIX_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return 1;
}

struct EstimatorFlags {
    std::string estimator; // fixed | balloon | samplepoint
    std::string h = "auto";
    std::string k = "auto5";
};

struct ResolvedEstimator {
    mm::EstimatorConfig config;
    std::optional<double> h;
    std::optional<int> k;
};

ResolvedEstimator resolve_estimator(const EstimatorFlags& flags,
                                    const mm::Dataset& data) {
    ResolvedEstimator out;

    auto parse_h = [&]() {
        if (flags.h == "auto")
            return mm::normal_scale_gradient_bandwidth(data);
        char* end = nullptr;
        const double h = std::strtod(flags.h.c_str(), &end);
        if (end == flags.h.c_str() || *end != '\0' || !(h > 0.0))
            throw mm::ParameterError("--h expects `auto` or a positive number");
        return h;
    };
    auto parse_k = [&]() {
        if (flags.k == "auto0.5") return mm::choose_k(mm::KnnRule::Half, data.size());
        if (flags.k == "auto1") return mm::choose_k(mm::KnnRule::One, data.size());
        if (flags.k == "auto5") return mm::choose_k(mm::KnnRule::Five, data.size());
        char* end = nullptr;
        const long k = std::strtol(flags.k.c_str(), &end, 10);
        if (end == flags.k.c_str() || *end != '\0' || k < 2)
            throw mm::ParameterError("--k expects auto0.5, auto1, auto5 or an integer >= 2");
        return static_cast<int>(k);
    };

    if (flags.estimator == "fixed") {
        out.h = parse_h();
        out.config.bandwidth = mm::FixedBandwidth{*out.h};
        out.config.kernel = mm::KernelFamily::GaussianMatrixNormal;
    } else if (flags.estimator == "balloon") {
        out.k = parse_k();
        out.config.bandwidth = mm::BalloonBandwidth{*out.k};
        out.config.kernel = mm::KernelFamily::UniformBall;
    } else if (flags.estimator == "samplepoint") {
        out.h = parse_h();
        out.k = parse_k();
        out.config.bandwidth = mm::SamplePointBandwidth{*out.k, *out.h};
        out.config.kernel = mm::KernelFamily::GaussianMatrixNormal;
    } else {
        throw mm::ParameterError("--estimator must be fixed, balloon or samplepoint");
    }
    return out;
}

std::vector<double> parse_weights(const std::string& csv) {
    std::vector<double> out;
    std::istringstream in(csv);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw mm::ParameterError("--weights expects a comma-separated list of numbers");
        }
    }
    return out;
}

struct GenerateArgs {
    std::string preset = "two-balanced";
    int n = 200;
    int p = 5;
    int t = 5;
    double rho = 1.0;
    double sigma = 1.0;
    std::uint64_t seed = 1;
    std::string weights;
    std::string output;
};

int cmd_generate(const GenerateArgs& args) {
    mm::PresetSpec preset = mm::resolve_preset(args.preset, args.p, args.t);
    mm::GenConfig cfg;
    cfg.prototypes = std::move(preset.prototypes);
    cfg.weights = args.weights.empty() ? preset.weights : parse_weights(args.weights);
    cfg.rho = args.rho;
    cfg.sigma = args.sigma;
    cfg.n = args.n;
    cfg.seed = args.seed;

    const mm::GeneratedSample sample = mm::generate(cfg);
    mm::write_mvd(args.output, sample.data, &sample.labels);

    std::map<int, int> counts;
    for (int lab : sample.labels) ++counts[lab];
    std::cout << "output=" << args.output << '\n'
              << "n=" << sample.data.size() << '\n'
              << "p=" << sample.data.rows() << '\n'
              << "t=" << sample.data.cols() << '\n';
    for (const auto& [lab, count] : counts) {
        std::cout << "count_" << cfg.prototypes[static_cast<std::size_t>(lab)].name
                  << '=' << count << '\n';
    }
    std::cout << "rho=" << args.rho << '\n'
              << "sigma=" << args.sigma << '\n'
              << "seed=" << args.seed << '\n'
              << "rng=" << mm::kRngAlgorithmId << '\n';
    return 0;
}

struct ClusterArgs {
    std::string input;
    EstimatorFlags est;
    bool do_standardize = false;
    double tol = 1e-7;
    int max_iter = 500;
    double merge_factor = 0.5;
    int threads = 0;
    std::string output = "cluster";
};

int cmd_cluster(const ClusterArgs& args) {
    const mm::MvdData mvd = mm::read_mvd(args.input);
    const int threads = resolve_threads(args.threads);

    std::optional<mm::Standardized> std_data;
    const mm::Dataset* data = &mvd.data;
    if (args.do_standardize) {
        std_data = mm::standardize(mvd.data);
        data = &std_data->data;
    }

    const ResolvedEstimator est = resolve_estimator(args.est, *data);
    mm::MeanShiftConfig ms;
    ms.tol = args.tol;
    ms.max_iter = args.max_iter;
    ms.merge_radius_factor = args.merge_factor;

    const auto start = std::chrono::steady_clock::now();
    const mm::ClusterResult result = mm::cluster(*data, est.config, ms, threads);
    const std::chrono::duration<double> elapsed =
        std::chrono::steady_clock::now() - start;

    // modes reported in the input coordinate system
    std::vector<mm::Matrix> modes = result.modes;
    if (args.do_standardize)
        for (mm::Matrix& mode : modes)
            mode = mm::destandardize(mode, std_data->center, std_data->scale);

    mm::write_labels(args.output + ".labels", result.labels);
    mm::write_mvd(args.output + ".modes.mvd", mm::Dataset(std::move(modes)));

    std::vector<int> sizes(result.modes.size(), 0);
    for (int lab : result.labels) ++sizes[static_cast<std::size_t>(lab)];
    int n_converged = 0;
    int max_iter_used = 0;
    for (std::size_t i = 0; i < result.converged.size(); ++i) {
        if (result.converged[i]) ++n_converged;
        max_iter_used = std::max(max_iter_used, result.iterations[i]);
    }

    std::ostringstream report;
    report << "status=ok\n"
           << "input=" << args.input << '\n'
           << "estimator=" << args.est.estimator << '\n'
           << "n=" << data->size() << '\n'
           << "p=" << data->rows() << '\n'
           << "t=" << data->cols() << '\n';
    char buf[40];
    if (est.h) {
        std::snprintf(buf, sizeof(buf), "%.17g", *est.h);
        report << "h=" << buf << '\n';
    }
    if (est.k) report << "k=" << *est.k << '\n';
    report << "standardize=" << (args.do_standardize ? 1 : 0) << '\n'
           << "tol=" << args.tol << '\n'
           << "max_iter=" << args.max_iter << '\n'
           << "merge_factor=" << args.merge_factor << '\n'
           << "threads=" << threads << '\n'
           << "m=" << result.modes.size() << '\n';
    report << "cluster_sizes=";
    for (std::size_t i = 0; i < sizes.size(); ++i)
        report << (i > 0 ? "," : "") << sizes[i];
    report << '\n'
           << "converged=" << n_converged << '\n'
           << "max_iterations_used=" << max_iter_used << '\n';
    std::snprintf(buf, sizeof(buf), "%.3f", elapsed.count());
    report << "wall_seconds=" << buf << '\n';

    std::ofstream report_file(args.output + ".report.txt");
    if (!report_file) throw mm::IoError("cannot write " + args.output + ".report.txt");
    report_file << report.str();
    std::cout << report.str();
    return 0;
}

int cmd_evaluate(const std::string& path_a, const std::string& path_b) {
    const std::vector<int> a = mm::read_labels(path_a);
    const std::vector<int> b = mm::read_labels(path_b);
    if (a.size() != b.size())
        throw mm::DimensionError("label files differ in length");

    const double fm = mm::fowlkes_mallows(a, b);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", fm);
    std::cout << "FM=" << buf << '\n';

    const mm::ConfusionTable table = mm::confusion_table(a, b);
    std::cout << "confusion rows=a cols=b\n";
    for (std::size_t i = 0; i < table.counts.size(); ++i) {
        for (std::size_t j = 0; j < table.counts[i].size(); ++j)
            std::cout << (j > 0 ? " " : "") << table.counts[i][j];
        std::cout << '\n';
    }
    return 0;
}

struct DensityArgs {
    std::string input;
    std::string query;
    EstimatorFlags est;
    bool do_standardize = false;
    std::string output;
};

int cmd_density(const DensityArgs& args) {
    const mm::MvdData mvd = mm::read_mvd(args.input);
    const mm::MvdData queries = mm::read_mvd(args.query);
    if (queries.data.rows() != mvd.data.rows() ||
        queries.data.cols() != mvd.data.cols())
        throw mm::DimensionError("query shape does not match data shape");

    std::optional<mm::Standardized> std_data;
    const mm::Dataset* data = &mvd.data;
    if (args.do_standardize) {
        std_data = mm::standardize(mvd.data);
        data = &std_data->data;
    }

    const ResolvedEstimator est = resolve_estimator(args.est, *data);
    const mm::FittedEstimator fitted = mm::fit(est.config, *data);

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.output.empty()) {
        file.open(args.output);
        if (!file) throw mm::IoError("cannot write " + args.output);
        out = &file;
    }

    char buf[40];
    for (int i = 0; i < queries.data.size(); ++i) {
        mm::Matrix q = queries.data[i];
        if (args.do_standardize) {
            for (int j = 0; j < q.size(); ++j)
                q.data()[j] = (q.data()[j] - std_data->center.data()[j]) /
                              std_data->scale.data()[j];
        }
        std::snprintf(buf, sizeof(buf), "%.17g", fitted.log_density_at(q));
        *out << buf << '\n';
    }
    return 0;
}

struct BenchArgs {
    std::string spec;
    std::string output = "bench.csv";
    int threads = 0;
};

int cmd_bench(const BenchArgs& args) {
    const mm::BenchSpecFile spec = mm::read_bench_spec(args.spec);
    const std::vector<mm::BenchRow> rows =
        mm::run_bench(spec, resolve_threads(args.threads));

    std::ofstream csv(args.output);
    if (!csv) throw mm::IoError("cannot write " + args.output);
    mm::write_bench_csv(csv, rows);
    if (!csv) throw mm::IoError("failed while writing " + args.output);

    mm::write_bench_summary(std::cout, mm::summarize_bench(rows));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modal clustering of matrix-variate data"};
    app.require_subcommand(1);
    // --h is a bandwidth flag, so help stays long-form only
    app.set_help_flag("--help", "Print help and exit");

    GenerateArgs gen;
    CLI::App* generate = app.add_subcommand(
        "generate", "Generate a synthetic matrix-variate dataset (MVD file)");
    generate->set_help_flag("--help", "Print help and exit");
    generate->add_option("--preset", gen.preset,
                         "single | two-balanced | two-imbalanced");
    generate->add_option("--n", gen.n, "Sample size");
    generate->add_option("--p", gen.p, "Rows per observation");
    generate->add_option("--t", gen.t, "Columns per observation");
    generate->add_option("--rho", gen.rho, "Coefficient contamination rate in [0,1]");
    generate->add_option("--sigma", gen.sigma, "Contamination noise sd");
    generate->add_option("--seed", gen.seed, "RNG seed");
    generate->add_option("--weights", gen.weights,
                         "Override preset mixing weights, comma separated");
    generate->add_option("-o,--output", gen.output, "Output MVD path")->required();

    ClusterArgs clu;
    CLI::App* cluster = app.add_subcommand(
        "cluster", "Mean-shift clustering of an MVD dataset");
    cluster->set_help_flag("--help", "Print help and exit");
    cluster->add_option("input", clu.input, "Input MVD file")->required();
    cluster->add_option("--estimator", clu.est.estimator,
                        "fixed | balloon | samplepoint")->required();
    cluster->add_option("--h", clu.est.h, "Bandwidth: auto or a positive number");
    cluster->add_option("--k", clu.est.k, "Neighbors: auto0.5, auto1, auto5 or an integer");
    cluster->add_flag("--standardize", clu.do_standardize,
                      "Standardize entries before clustering");
    cluster->add_option("--tol", clu.tol, "Ascent convergence tolerance");
    cluster->add_option("--max-iter", clu.max_iter, "Ascent iteration cap");
    cluster->add_option("--merge-factor", clu.merge_factor,
                        "Merge radius as a multiple of the bandwidth scale");
    cluster->add_option("--threads", clu.threads,
                        "Worker threads (0: use MODALMATRIX_THREADS or 1)");
    cluster->add_option("-o,--output", clu.output,
                        "Output prefix (.labels, .modes.mvd, .report.txt)");

    std::string eval_a, eval_b;
    CLI::App* evaluate = app.add_subcommand(
        "evaluate", "Fowlkes-Mallows index and confusion table of two labelings");
    evaluate->set_help_flag("--help", "Print help and exit");
    evaluate->add_option("labels_a", eval_a, "Labels file or MVD with labels")->required();
    evaluate->add_option("labels_b", eval_b, "Labels file or MVD with labels")->required();

    DensityArgs den;
    CLI::App* density = app.add_subcommand(
        "density", "Log-density of query matrices under a fitted estimator");
    density->set_help_flag("--help", "Print help and exit");
    density->add_option("input", den.input, "Data MVD file")->required();
    density->add_option("query", den.query, "Query MVD file")->required();
    density->add_option("--estimator", den.est.estimator,
                        "fixed | balloon | samplepoint")->required();
    density->add_option("--h", den.est.h, "Bandwidth: auto or a positive number");
    density->add_option("--k", den.est.k, "Neighbors: auto0.5, auto1, auto5 or an integer");
    density->add_flag("--standardize", den.do_standardize,
                      "Standardize data (queries mapped into the same coordinates)");
    density->add_option("-o,--output", den.output, "Output path (default stdout)");

    BenchArgs ben;
    CLI::App* bench = app.add_subcommand(
        "bench", "Monte Carlo benchmark grid driven by a spec file");
    bench->set_help_flag("--help", "Print help and exit");
    bench->add_option("spec", ben.spec, "Bench spec file")->required();
    bench->add_option("-o,--output", ben.output, "Output CSV path");
    bench->add_option("--threads", ben.threads,
                      "Worker threads (0: use MODALMATRIX_THREADS or 1)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (generate->parsed()) return cmd_generate(gen);
        if (cluster->parsed()) return cmd_cluster(clu);
        if (evaluate->parsed()) return cmd_evaluate(eval_a, eval_b);
        if (density->parsed()) return cmd_density(den);
        if (bench->parsed()) return cmd_bench(ben);
    } catch (const mm::DegenerateBandwidthError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const mm::NumericError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const mm::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIo;
    } catch (const std::exception& e) {
        // parameter, dimension, format and metric problems are usage errors
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
