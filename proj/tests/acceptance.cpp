// Acceptance suite: one line per criterion, nonzero exit if any gating
// criterion fails. Usage: acceptance <path-to-cli-binary>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "modalmatrix/datagen.hpp"
#include "modalmatrix/evaluation.hpp"
#include "modalmatrix/meanshift.hpp"
#include "modalmatrix/mvd.hpp"
#include "support.hpp"

using namespace modalmatrix;
namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_tmp;

struct Criterion {
    int id;
    std::string name;
    double budget_seconds;
    std::function<bool(std::ostream&)> body;
    bool gating = true;
};

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Matrix scalar(double v) { return Matrix(1, 1, {v}); }

int run_cli(const std::string& args, const fs::path& stdout_file = {}) {
    std::string cmd = g_cli + " " + args;
    if (!stdout_file.empty()) cmd += " > " + stdout_file.string();
    cmd += " 2> /dev/null";
    return WEXITSTATUS(std::system(cmd.c_str()));
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::string strip_times(const std::string& text) {
    std::istringstream in(text);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line)) {
        if (line.rfind("wall_seconds=", 0) == 0) continue;
        if (line.rfind("threads=", 0) == 0) continue;
        if (std::count(line.begin(), line.end(), ',') == 6)
            line = line.substr(0, line.rfind(','));
        out << line << '\n';
    }
    return out.str();
}

GenConfig preset_gen(const std::string& preset, int n, std::uint64_t seed) {
    PresetSpec spec = resolve_preset(preset, 5, 5);
    GenConfig cfg;
    cfg.prototypes = std::move(spec.prototypes);
    cfg.weights = spec.weights;
    cfg.rho = 1.0;
    cfg.sigma = 1.0;
    cfg.n = n;
    cfg.seed = seed;
    return cfg;
}

// ---------------------------------------------------------------- criteria

bool c1_amise(std::ostream& log) {
    const double r_k = kernel_constants({KernelFamily::GaussianMatrixNormal, 1}).r_k;
    const double r_f2 = 3.0 / (8.0 * std::sqrt(std::numbers::pi));
    bool ok = true;
    for (int n : {25, 100, 400, 1000}) {
        const double h = amise_bandwidth(n, 1, r_k, 1.0, r_f2);
        const double closed = std::pow(4.0 / (3.0 * n), 0.2);
        if (std::fabs(h - closed) > 1e-12) {
            log << "closed form mismatch at N=" << n << ": " << h << " vs " << closed;
            ok = false;
        }
    }
    // independent oracle: dense grid search of the AMISE objective
    const int n = 100;
    const double h_formula = amise_bandwidth(n, 1, r_k, 1.0, r_f2);
    double best_h = 0.0, best = 1e300;
    const int grid = 40000;
    for (int i = 0; i <= grid; ++i) {
        const double h = 0.01 * std::pow(1000.0, static_cast<double>(i) / grid);
        const double value = r_k / (n * h) + 0.25 * std::pow(h, 4) * r_f2;
        if (value < best) {
            best = value;
            best_h = h;
        }
    }
    const double resolution = best_h * (std::pow(1000.0, 1.0 / grid) - 1.0);
    if (std::fabs(h_formula - best_h) > 2.0 * resolution) {
        log << "grid minimizer " << best_h << " vs formula " << h_formula;
        ok = false;
    }
    return ok;
}

bool c2_unit_mass(std::ostream& log) {
    SplitMix64 rng(201);
    bool ok = true;

    const Dataset data1 = testsupport::random_dataset(15, 1, 1, rng);
    const FittedEstimator fixed1 = fit({FixedBandwidth{0.7}}, data1);
    const FittedEstimator sp1 = fit({SamplePointBandwidth{4, 0.8}}, data1);
    for (const auto* est : {&fixed1, &sp1}) {
        const double mass = testsupport::simpson(
            [&](double x) { return est->density_at(scalar(x)); }, -14.0, 14.0, 4000);
        if (std::fabs(mass - 1.0) > 1e-3) {
            log << "d=1 mass " << mass << "; ";
            ok = false;
        }
    }

    const Dataset data2 = testsupport::random_dataset(12, 1, 2, rng);
    const FittedEstimator fixed2 = fit({FixedBandwidth{0.8}}, data2);
    const FittedEstimator sp2 = fit({SamplePointBandwidth{3, 0.7}}, data2);
    for (const auto* est : {&fixed2, &sp2}) {
        const double mass = testsupport::simpson2d(
            [&](double x, double y) { return est->density_at(Matrix(1, 2, {x, y})); },
            -10.0, 10.0, 280);
        if (std::fabs(mass - 1.0) > 1e-3) {
            log << "d=2 mass " << mass << "; ";
            ok = false;
        }
    }
    return ok;
}

bool c3_gradient(std::ostream& log) {
    SplitMix64 rng(202);
    const Dataset data = testsupport::random_dataset(40, 5, 5, rng);
    const double h = normal_scale_gradient_bandwidth(data);
    const FittedEstimator fixed = fit({FixedBandwidth{h}}, data);
    const FittedEstimator sp = fit({SamplePointBandwidth{6, h}}, data);

    double worst = 1.0;
    for (const FittedEstimator* est : {&fixed, &sp}) {
        for (int rep = 0; rep < 50; ++rep) {
            Matrix y = data[rep % data.size()];
            for (int e = 0; e < y.size(); ++e) y.data()[e] += 0.1 * rng.next_normal();

            const Matrix displacement = ms_step(*est, y) - y;
            Matrix grad(5, 5);
            for (int e = 0; e < y.size(); ++e) {
                grad.data()[e] = testsupport::finite_difference(
                    [&](double v) {
                        Matrix probe = y;
                        probe.data()[e] = v;
                        return est->log_density_at(probe);
                    },
                    y.data()[e], 1e-5 * (1.0 + std::fabs(y.data()[e])));
            }
            worst = std::min(worst, testsupport::cosine_similarity(displacement, grad));
        }
    }
    log << "min cosine " << worst;
    return worst > 1.0 - 1e-6;
}

bool c4_ascent_monotone(std::ostream& log) {
    double worst_drop = 0.0;
    for (int rep = 0; rep < 20; ++rep) {
        SplitMix64 rng(300 + static_cast<std::uint64_t>(rep));
        const Dataset data = testsupport::two_blob_dataset(50, 3, 3, 3.0, 0.9, rng);
        const double h = normal_scale_gradient_bandwidth(data);
        const FittedEstimator fixed = fit({FixedBandwidth{h}}, data);
        const FittedEstimator sp = fit({SamplePointBandwidth{7, h}}, data);
        for (const FittedEstimator* est : {&fixed, &sp}) {
            for (int i = 0; i < data.size(); ++i) {
                Matrix y = data[i];
                double prev = est->log_density_at(y);
                for (int s = 0; s < 80; ++s) {
                    const Matrix next = ms_step(*est, y);
                    if (frobenius_distance(next, y) < 1e-9 * (1.0 + frobenius_norm(y)))
                        break;
                    y = next;
                    const double cur = est->log_density_at(y);
                    worst_drop = std::max(worst_drop, prev - cur);
                    prev = cur;
                }
            }
        }
    }
    log << "max density drop " << worst_drop;
    return worst_drop <= 1e-10;
}

bool c5_corollary(std::ostream& log) {
    SplitMix64 rng(203);
    int mismatches = 0;
    for (int rep = 0; rep < 50; ++rep) {
        const Dataset data = testsupport::random_dataset(30, 2, 3, rng);
        const FittedEstimator est =
            fit({BalloonBandwidth{5}, KernelFamily::UniformBall}, data);
        for (int q = 0; q < 20; ++q) {
            const Matrix y = testsupport::random_matrix(2, 3, rng);
            const Matrix a = ms_step(est, y);
            const Matrix b = ms_step_knn_uniform(data, 5, y);
            for (int e = 0; e < a.size(); ++e)
                if (a.data()[e] != b.data()[e]) ++mismatches;
        }
    }
    log << "1000 cases, " << mismatches << " mismatching entries";
    return mismatches == 0;
}

bool c6_dct(std::ostream& log) {
    SplitMix64 rng(204);
    bool ok = true;

    double worst_rt = 0.0;
    for (int rep = 0; rep < 50; ++rep) {
        const Matrix m = testsupport::random_matrix(5, 20, rng);
        const Matrix back = dct2_inverse(dct2_forward(m));
        worst_rt = std::max(worst_rt, frobenius_distance(m, back));
    }
    if (worst_rt >= 1e-10) {
        log << "round trip error " << worst_rt << "; ";
        ok = false;
    }

    for (int n : {5, 20}) {
        const Matrix b = dct_basis(n);
        const Matrix gram = matmul_tn(b, b);
        double worst = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                worst = std::max(worst, std::fabs(gram(i, j) - (i == j ? 1.0 : 0.0)));
        if (worst > 1e-12) {
            log << "basis gram deviation " << worst << "; ";
            ok = false;
        }
    }

    GenConfig cfg = preset_gen("single", 200, 424242);
    const GeneratedSample sample = generate(cfg);
    const Matrix& proto = cfg.prototypes[0].values;
    std::vector<double> residuals;
    residuals.reserve(5000);
    for (int i = 0; i < sample.data.size(); ++i)
        for (int e = 0; e < 25; ++e)
            residuals.push_back(sample.data[i].data()[e] - proto.data()[e]);
    const double d = testsupport::ks_statistic_normal(std::move(residuals));
    const double scaled = testsupport::ks_scaled(d, 5000);
    log << "KS scaled statistic " << scaled << " (crit 1.6276)";
    if (scaled >= 1.6276) ok = false;
    return ok;
}

bool c7_balanced(std::ostream& log) {
    const int k = choose_k(KnnRule::Five, 200); // round(5 sqrt(200)) = 71
    std::vector<double> fms;
    for (int rep = 0; rep < 20; ++rep) {
        const GeneratedSample sample =
            generate(preset_gen("two-balanced", 200, derive_seed(7001, rep)));
        const ClusterResult result =
            cluster(sample.data, {BalloonBandwidth{k}, KernelFamily::UniformBall},
                    MeanShiftConfig{}, 2);
        fms.push_back(fowlkes_mallows(result.labels, sample.labels));
    }
    const double med = median(fms);
    log << "k=" << k << " median FM " << med;
    return med >= 0.95;
}

bool c8_single_group(std::ostream& log) {
    const int k = choose_k(KnnRule::Five, 200);
    int single_cluster_runs = 0;
    std::vector<double> kmeans_fms;
    for (int rep = 0; rep < 20; ++rep) {
        const GeneratedSample sample =
            generate(preset_gen("single", 200, derive_seed(8001, rep)));
        const ClusterResult result =
            cluster(sample.data, {BalloonBandwidth{k}, KernelFamily::UniformBall},
                    MeanShiftConfig{}, 2);
        if (result.modes.size() == 1) ++single_cluster_runs;

        const KSelection sel =
            select_k_silhouette(sample.data, 2, 9, derive_seed(8002, rep));
        kmeans_fms.push_back(fowlkes_mallows(sel.labels, sample.labels));
    }
    const double med = median(kmeans_fms);
    log << "single-cluster runs " << single_cluster_runs
        << "/20, kmeans median FM " << med;
    return single_cluster_runs >= 16 && med < 0.8;
}

bool c9_imbalanced(std::ostream& log) {
    const int k = choose_k(KnnRule::Five, 200);
    std::vector<double> fms;
    for (int rep = 0; rep < 20; ++rep) {
        const GeneratedSample sample =
            generate(preset_gen("two-imbalanced", 200, derive_seed(9001, rep)));
        const ClusterResult result =
            cluster(sample.data, {BalloonBandwidth{k}, KernelFamily::UniformBall},
                    MeanShiftConfig{}, 2);
        fms.push_back(fowlkes_mallows(result.labels, sample.labels));
    }
    const double med = median(fms);
    log << "k=" << k << " median FM " << med;
    return med >= 0.9;
}

bool c10_metrics(std::ostream& log) {
    const std::vector<int> a{1, 1, 2, 2};
    const std::vector<int> b{1, 1, 1, 2};
    const double fm = fowlkes_mallows(a, b);
    if (std::fabs(fm - 1.0 / std::sqrt(6.0)) > 1e-12) {
        log << "hand example FM " << fm;
        return false;
    }

    SplitMix64 rng(205);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 20 + rng.next_index(30);
        std::vector<int> pa(static_cast<std::size_t>(n)), pb(static_cast<std::size_t>(n));
        for (int& lab : pa) lab = rng.next_index(5);
        for (int& lab : pb) lab = rng.next_index(4);
        std::vector<int> pa_relabeled(pa.size()), pb_relabeled(pb.size());
        for (std::size_t i = 0; i < pa.size(); ++i) {
            pa_relabeled[i] = 913 - 11 * pa[i];
            pb_relabeled[i] = 7 * pb[i] + 3;
        }
        if (fowlkes_mallows(pa, pb) != fowlkes_mallows(pa_relabeled, pb_relabeled)) {
            log << "relabel variance at rep " << rep;
            return false;
        }
    }
    log << "hand value and 1000 relabeled pairs exact";
    return true;
}

bool c11_determinism(std::ostream& log) {
    const fs::path dir = g_tmp;
    bool ok = true;

    const fs::path gen1 = dir / "det_gen1.mvd";
    const fs::path gen2 = dir / "det_gen2.mvd";
    if (run_cli("generate --preset two-balanced --n 200 --rho 1 --sigma 1 --seed 42 -o " +
                gen1.string(), dir / "det_gen1.log") != 0)
        return false;
    if (run_cli("generate --preset two-balanced --n 200 --rho 1 --sigma 1 --seed 42 -o " +
                gen2.string(), dir / "det_gen2.log") != 0)
        return false;
    auto drop_output_line = [](const std::string& text) {
        std::istringstream in(text);
        std::ostringstream out;
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("output=", 0) != 0) out << line << '\n';
        return out.str();
    };
    if (drop_output_line(slurp(dir / "det_gen1.log")) !=
        drop_output_line(slurp(dir / "det_gen2.log"))) {
        log << "generate summaries differ; ";
        ok = false;
    }
    if (slurp(gen1) != slurp(gen2)) {
        log << "generate not byte-identical; ";
        ok = false;
    }

    const fs::path c1 = dir / "det_c1";
    const fs::path c2 = dir / "det_c2";
    const fs::path c8 = dir / "det_c8";
    if (run_cli("cluster " + gen1.string() + " --estimator balloon --k auto5 --threads 1 -o " + c1.string(), dir / "det_r1.txt") != 0)
        return false;
    if (run_cli("cluster " + gen1.string() + " --estimator balloon --k auto5 --threads 1 -o " + c2.string(), dir / "det_r2.txt") != 0)
        return false;
    if (run_cli("cluster " + gen1.string() + " --estimator balloon --k auto5 --threads 8 -o " + c8.string(), dir / "det_r8.txt") != 0)
        return false;
    if (slurp(c1.string() + ".labels") != slurp(c2.string() + ".labels") ||
        slurp(c1.string() + ".labels") != slurp(c8.string() + ".labels")) {
        log << "cluster labels differ; ";
        ok = false;
    }
    if (slurp(c1.string() + ".modes.mvd") != slurp(c8.string() + ".modes.mvd")) {
        log << "cluster modes differ; ";
        ok = false;
    }
    if (strip_times(slurp(c1.string() + ".report.txt")) !=
        strip_times(slurp(c8.string() + ".report.txt"))) {
        log << "cluster reports differ beyond wall time; ";
        ok = false;
    }

    const fs::path spec = dir / "det_bench.spec";
    {
        std::ofstream out(spec);
        out << "[setting det]\npreset = two-balanced\nn = 60\np = 3\nt = 3\n"
               "replicates = 2\nseed = 99\nmethods = balloon5, fixed\n";
    }
    const fs::path csv1 = dir / "det_b1.csv";
    const fs::path csv8 = dir / "det_b8.csv";
    if (run_cli("bench " + spec.string() + " --threads 1 -o " + csv1.string(),
                dir / "det_s1.txt") != 0)
        return false;
    if (run_cli("bench " + spec.string() + " --threads 8 -o " + csv8.string(),
                dir / "det_s8.txt") != 0)
        return false;
    if (strip_times(slurp(csv1)) != strip_times(slurp(csv8))) {
        log << "bench CSV differs beyond seconds; ";
        ok = false;
    }
    if (slurp(dir / "det_s1.txt") != slurp(dir / "det_s8.txt")) {
        log << "bench summary differs; ";
        ok = false;
    }
    return ok;
}

bool c12_real_data(std::ostream& log) {
    // Optional: requires the external activity-tracking dataset prepared as
    // an MVD file (N=450, P=15, T=50). Point MODALMATRIX_ACTIVITY_MVD at it.
    const char* path = std::getenv("MODALMATRIX_ACTIVITY_MVD");
    if (path == nullptr) {
        log << "SKIP (set MODALMATRIX_ACTIVITY_MVD to run)";
        return true;
    }
    const MvdData mvd = read_mvd(path);
    if (!mvd.has_labels) {
        log << "file has no ground-truth labels";
        return false;
    }
    const Standardized st = standardize(mvd.data);
    const int k = choose_k(KnnRule::Five, st.data.size());
    const ClusterResult result =
        cluster(st.data, {BalloonBandwidth{k}, KernelFamily::UniformBall},
                MeanShiftConfig{}, 2);
    const double fm = fowlkes_mallows(result.labels, mvd.labels);
    log << "clusters " << result.modes.size() << ", FM " << fm;
    return result.modes.size() == 3 && fm >= 0.9;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <path-to-cli-binary>\n";
        return 2;
    }
    g_cli = argv[1];
    g_tmp = fs::temp_directory_path() / "modalmatrix_acceptance";
    fs::create_directories(g_tmp);

    const std::vector<Criterion> criteria = {
        {1, "amise closed form + grid-search oracle", 1.0, c1_amise},
        {2, "unit mass of fixed and sample-point estimators", 10.0, c2_unit_mass},
        {3, "mean-shift direction matches the fd gradient", 10.0, c3_gradient},
        {4, "density nondecreasing along every ascent", 30.0, c4_ascent_monotone},
        {5, "balloon uniform step equals the k-nn mean", 5.0, c5_corollary},
        {6, "dct orthonormality, round trip, ks normality", 10.0, c6_dct},
        {7, "two balanced clusters: median FM >= 0.95", 300.0, c7_balanced},
        {8, "single cluster found; kmeans splits it", 300.0, c8_single_group},
        {9, "imbalanced clusters: median FM >= 0.9", 300.0, c9_imbalanced},
        {10, "fowlkes-mallows exactness and relabeling", 5.0, c10_metrics},
        {11, "cli determinism across runs and threads", 120.0, c11_determinism},
        {12, "activity-tracking pipeline (optional)", 600.0, c12_real_data, false},
    };

    int failures = 0;
    for (const Criterion& c : criteria) {
        std::ostringstream detail;
        const auto start = std::chrono::steady_clock::now();
        bool ok = false;
        try {
            ok = c.body(detail);
        } catch (const std::exception& e) {
            detail << "exception: " << e.what();
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        const bool in_budget = seconds < c.budget_seconds;
        const bool pass = ok && in_budget;

        const bool skipped = detail.str().rfind("SKIP", 0) == 0;
        std::ostringstream line;
        line << "[" << (c.id < 10 ? " " : "") << c.id << "] "
             << (skipped ? "SKIP" : pass ? "PASS" : (c.gating ? "FAIL" : "WARN"))
             << "  " << c.name;
        if (!detail.str().empty()) line << " -- " << detail.str();
        if (!in_budget) line << " -- over budget";
        line << " (" << std::fixed << seconds << "s)";
        std::cout << line.str() << std::endl;

        if (!pass && c.gating) ++failures;
    }

    if (failures == 0) {
        std::cout << "RESULT: all gating criteria passed" << std::endl;
        return 0;
    }
    std::cout << "RESULT: " << failures << " gating criteria failed" << std::endl;
    return 1;
}
