#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace modalmatrix {

// One cell of the Monte Carlo grid. Method names:
//   fixed, balloon0.5, balloon1, balloon5,
//   samplepoint0.5, samplepoint1, samplepoint5, kmeans-silhouette
struct BenchSetting {
    std::string name;
    std::string preset = "two-balanced";
    std::vector<double> weights; // optional override of the preset weights
    int n = 200;
    int p = 5;
    int t = 5;
    double rho = 1.0;
    double sigma = 1.0;
    int replicates = 20;
    std::uint64_t seed = 1;
    std::vector<std::string> methods;
};

struct BenchSpecFile {
    std::vector<BenchSetting> settings;
};

// Sectioned key=value text:
//   [setting <name>]
//   preset = two-balanced
//   n = 200
//   ...
//   methods = balloon5, kmeans-silhouette
BenchSpecFile parse_bench_spec(std::istream& in);
BenchSpecFile read_bench_spec(const std::string& path);

struct BenchRow {
    std::string setting;
    std::string method;
    int replicate = 0;
    double fm = 0.0; // NaN when the cell failed
    int n_clusters = 0;
    std::string status = "ok";
    double seconds = 0.0;
};

// Runs every (setting, method, replicate) cell; replicate seeds derive from
// the setting seed through the generator's split function, so each cell is
// independently reproducible. Failures land in the status column and the
// run continues.
std::vector<BenchRow> run_bench(const BenchSpecFile& spec, int threads = 1);

// Header: setting,method,replicate,fm,n_clusters,status,seconds
void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

struct BenchSummaryRow {
    std::string setting;
    std::string method;
    int n_ok = 0;
    double fm_q25 = 0.0;
    double fm_median = 0.0;
    double fm_q75 = 0.0;
};

std::vector<BenchSummaryRow> summarize_bench(const std::vector<BenchRow>& rows);
void write_bench_summary(std::ostream& out,
                         const std::vector<BenchSummaryRow>& rows);

}  // namespace modalmatrix
