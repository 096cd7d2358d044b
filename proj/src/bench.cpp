#include "modalmatrix/bench.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "modalmatrix/datagen.hpp"
#include "modalmatrix/evaluation.hpp"
#include "modalmatrix/meanshift.hpp"
#include "modalmatrix/parallel.hpp"

namespace modalmatrix {

namespace {

const std::vector<std::string> kMethodNames = {
    "fixed",          "balloon0.5",     "balloon1",       "balloon5",
    "samplepoint0.5", "samplepoint1",   "samplepoint5",   "kmeans-silhouette"};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void validate_setting(const BenchSetting& s) {
    if (s.replicates < 1) throw FormatError("setting " + s.name + ": replicates must be >= 1");
    if (s.n < 2) throw FormatError("setting " + s.name + ": n must be >= 2");
    if (s.p < 1 || s.t < 1) throw FormatError("setting " + s.name + ": bad shape");
    if (s.methods.empty()) throw FormatError("setting " + s.name + ": no methods listed");
    for (const std::string& m : s.methods)
        if (std::find(kMethodNames.begin(), kMethodNames.end(), m) == kMethodNames.end())
            throw FormatError("setting " + s.name + ": unknown method " + m);
    resolve_preset(s.preset, s.p, s.t); // throws on unknown preset
}

KnnRule rule_of(const std::string& method) {
    if (method.ends_with("0.5")) return KnnRule::Half;
    if (method.ends_with("5")) return KnnRule::Five;
    return KnnRule::One;
}

struct CellOutcome {
    double fm = std::numeric_limits<double>::quiet_NaN();
    int n_clusters = 0;
    std::string status = "ok";
};

CellOutcome run_method(const std::string& method, const Dataset& data,
                       const std::vector<int>& truth, std::uint64_t cell_seed) {
    CellOutcome out;
    try {
        if (method == "kmeans-silhouette") {
            const int kmax = std::min(9, data.size() - 1);
            const KSelection sel = select_k_silhouette(data, 2, kmax, cell_seed);
            out.fm = fowlkes_mallows(sel.labels, truth);
            out.n_clusters = sel.k;
            return out;
        }
        EstimatorConfig config;
        if (method == "fixed") {
            config.bandwidth = FixedBandwidth{normal_scale_gradient_bandwidth(data)};
            config.kernel = KernelFamily::GaussianMatrixNormal;
        } else if (method.rfind("balloon", 0) == 0) {
            config.bandwidth = BalloonBandwidth{choose_k(rule_of(method), data.size())};
            config.kernel = KernelFamily::UniformBall;
        } else {
            config.bandwidth =
                SamplePointBandwidth{choose_k(rule_of(method), data.size()),
                                     normal_scale_gradient_bandwidth(data)};
            config.kernel = KernelFamily::GaussianMatrixNormal;
        }
        const ClusterResult result = cluster(data, config, MeanShiftConfig{});
        out.fm = fowlkes_mallows(result.labels, truth);
        out.n_clusters = static_cast<int>(result.modes.size());
    } catch (const DegenerateBandwidthError&) {
        out.status = "degenerate-bandwidth";
    } catch (const MetricError&) {
        out.status = "undefined-metric";
    } catch (const std::exception&) {
        out.status = "error";
    }
    return out;
}

}  // namespace

BenchSpecFile parse_bench_spec(std::istream& in) {
    BenchSpecFile spec;
    BenchSetting* current = nullptr;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw FormatError("bench spec line " + std::to_string(lineno) + ": unterminated section");
            std::string inner = trim(s.substr(1, s.size() - 2));
            if (inner.rfind("setting", 0) != 0)
                throw FormatError("bench spec line " + std::to_string(lineno) + ": expected [setting <name>]");
            std::string name = trim(inner.substr(7));
            if (name.empty()) name = "setting" + std::to_string(spec.settings.size() + 1);
            spec.settings.push_back(BenchSetting{});
            current = &spec.settings.back();
            current->name = name;
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw FormatError("bench spec line " + std::to_string(lineno) + ": expected key = value");
        if (current == nullptr)
            throw FormatError("bench spec line " + std::to_string(lineno) + ": key outside a [setting] section");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        try {
            if (key == "preset") current->preset = value;
            else if (key == "n") current->n = std::stoi(value);
            else if (key == "p") current->p = std::stoi(value);
            else if (key == "t") current->t = std::stoi(value);
            else if (key == "rho") current->rho = std::stod(value);
            else if (key == "sigma") current->sigma = std::stod(value);
            else if (key == "replicates") current->replicates = std::stoi(value);
            else if (key == "seed") current->seed = std::stoull(value);
            else if (key == "methods") current->methods = split_list(value);
            else if (key == "weights") {
                current->weights.clear();
                for (const std::string& w : split_list(value))
                    current->weights.push_back(std::stod(w));
            } else {
                throw FormatError("bench spec line " + std::to_string(lineno) + ": unknown key " + key);
            }
        } catch (const std::invalid_argument&) {
            throw FormatError("bench spec line " + std::to_string(lineno) + ": bad value for " + key);
        } catch (const std::out_of_range&) {
            throw FormatError("bench spec line " + std::to_string(lineno) + ": bad value for " + key);
        }
    }
    if (spec.settings.empty()) throw FormatError("bench spec defines no settings");
    for (const BenchSetting& s : spec.settings) validate_setting(s);
    return spec;
}

BenchSpecFile read_bench_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    return parse_bench_spec(in);
}

std::vector<BenchRow> run_bench(const BenchSpecFile& spec, int threads) {
    struct Task {
        int setting = 0;
        int replicate = 0;
    };
    std::vector<Task> tasks;
    std::vector<std::size_t> offsets; // row slot of (setting, method 0, replicate)
    std::size_t total_rows = 0;
    for (std::size_t si = 0; si < spec.settings.size(); ++si) {
        offsets.push_back(total_rows);
        const BenchSetting& s = spec.settings[si];
        total_rows += s.methods.size() * static_cast<std::size_t>(s.replicates);
        for (int r = 0; r < s.replicates; ++r)
            tasks.push_back(Task{static_cast<int>(si), r});
    }

    std::vector<BenchRow> rows(total_rows);
    parallel_for(static_cast<int>(tasks.size()), threads, [&](int ti) {
        const Task task = tasks[static_cast<std::size_t>(ti)];
        const BenchSetting& s = spec.settings[static_cast<std::size_t>(task.setting)];
        const std::uint64_t cell_seed =
            derive_seed(s.seed, static_cast<std::uint64_t>(task.replicate));

        PresetSpec preset = resolve_preset(s.preset, s.p, s.t);
        GenConfig gen;
        gen.prototypes = std::move(preset.prototypes);
        gen.weights = s.weights.empty() ? preset.weights : s.weights;
        gen.rho = s.rho;
        gen.sigma = s.sigma;
        gen.n = s.n;
        gen.seed = cell_seed;
        const GeneratedSample sample = generate(gen);

        for (std::size_t mi = 0; mi < s.methods.size(); ++mi) {
            const auto start = std::chrono::steady_clock::now();
            const CellOutcome outcome =
                run_method(s.methods[mi], sample.data, sample.labels, cell_seed);
            const std::chrono::duration<double> elapsed =
                std::chrono::steady_clock::now() - start;

            BenchRow row;
            row.setting = s.name;
            row.method = s.methods[mi];
            row.replicate = task.replicate;
            row.fm = outcome.fm;
            row.n_clusters = outcome.n_clusters;
            row.status = outcome.status;
            row.seconds = elapsed.count();
            const std::size_t slot =
                offsets[static_cast<std::size_t>(task.setting)] +
                mi * static_cast<std::size_t>(s.replicates) +
                static_cast<std::size_t>(task.replicate);
            rows[slot] = std::move(row);
        }
    });
    return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "setting,method,replicate,fm,n_clusters,status,seconds\n";
    char buf[64];
    for (const BenchRow& row : rows) {
        if (std::isnan(row.fm)) {
            std::snprintf(buf, sizeof(buf), "nan");
        } else {
            std::snprintf(buf, sizeof(buf), "%.6f", row.fm);
        }
        out << row.setting << ',' << row.method << ',' << row.replicate << ','
            << buf << ',' << row.n_clusters << ',' << row.status << ',';
        std::snprintf(buf, sizeof(buf), "%.3f", row.seconds);
        out << buf << '\n';
    }
}

namespace {

// type-7 quantile (linear interpolation) on a sorted vector
double quantile_sorted(const std::vector<double>& v, double q) {
    if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
    const double h = q * (static_cast<double>(v.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

std::vector<BenchSummaryRow> summarize_bench(const std::vector<BenchRow>& rows) {
    std::vector<BenchSummaryRow> out;
    std::vector<std::pair<std::string, std::string>> seen;
    for (const BenchRow& row : rows) {
        const std::pair<std::string, std::string> key{row.setting, row.method};
        if (std::find(seen.begin(), seen.end(), key) != seen.end()) continue;
        seen.push_back(key);

        std::vector<double> fms;
        for (const BenchRow& r : rows)
            if (r.setting == row.setting && r.method == row.method &&
                r.status == "ok" && !std::isnan(r.fm))
                fms.push_back(r.fm);
        std::sort(fms.begin(), fms.end());

        BenchSummaryRow s;
        s.setting = row.setting;
        s.method = row.method;
        s.n_ok = static_cast<int>(fms.size());
        s.fm_q25 = quantile_sorted(fms, 0.25);
        s.fm_median = quantile_sorted(fms, 0.50);
        s.fm_q75 = quantile_sorted(fms, 0.75);
        out.push_back(std::move(s));
    }
    return out;
}

void write_bench_summary(std::ostream& out,
                         const std::vector<BenchSummaryRow>& rows) {
    out << "setting,method,n_ok,fm_q25,fm_median,fm_q75\n";
    char buf[128];
    for (const BenchSummaryRow& row : rows) {
        std::snprintf(buf, sizeof(buf), "%s,%s,%d,%.6f,%.6f,%.6f",
                      row.setting.c_str(), row.method.c_str(), row.n_ok,
                      row.fm_q25, row.fm_median, row.fm_q75);
        out << buf << '\n';
    }
}

}  // namespace modalmatrix
