#include "modalmatrix/datagen.hpp"

#include <cmath>
#include <numbers>

#include "modalmatrix/linalg.hpp"

namespace modalmatrix {

Matrix dct_basis(int n) {
    if (n < 1) throw ParameterError("basis order must be positive");
    Matrix b(n, n);
    const double c0 = std::sqrt(1.0 / n);
    const double c = std::sqrt(2.0 / n);
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            b(k, i) = (k == 0 ? c0 : c) *
                      std::cos(std::numbers::pi * (2 * i + 1) * k / (2.0 * n));
    return b;
}

Matrix dct2_forward(const Matrix& m) {
    const Matrix l = dct_basis(m.rows());
    const Matrix r = dct_basis(m.cols());
    return matmul_nt(matmul(l, m), r);
}

Matrix dct2_inverse(const Matrix& omega) {
    const Matrix l = dct_basis(omega.rows());
    const Matrix r = dct_basis(omega.cols());
    return matmul(matmul_tn(l, omega), r);
}

Matrix perturb_coefficients(const Matrix& omega, double rho, double sigma,
                            SplitMix64& rng) {
    if (rho < 0.0 || rho > 1.0) throw ParameterError("rho must lie in [0, 1]");
    if (!(sigma > 0.0)) throw ParameterError("sigma must be positive");

    const int d = omega.size();
    // fixed stream layout: all Bernoulli draws first, then all normals
    std::vector<bool> hit(static_cast<std::size_t>(d));
    for (int i = 0; i < d; ++i) hit[static_cast<std::size_t>(i)] = rng.next_uniform() < rho;
    Matrix out = omega;
    for (int i = 0; i < d; ++i) {
        const double eps = sigma * rng.next_normal();
        if (hit[static_cast<std::size_t>(i)]) out.data()[i] += eps;
    }
    return out;
}

GeneratedSample generate(const GenConfig& cfg) {
    if (cfg.n < 1) throw ParameterError("sample size must be positive");
    if (cfg.prototypes.empty()) throw ParameterError("at least one prototype required");
    if (cfg.prototypes.size() != cfg.weights.size())
        throw ParameterError("one weight per prototype required");
    if (cfg.rho < 0.0 || cfg.rho > 1.0) throw ParameterError("rho must lie in [0, 1]");
    if (!(cfg.sigma > 0.0)) throw ParameterError("sigma must be positive");

    double weight_sum = 0.0;
    for (double w : cfg.weights) {
        if (!(w > 0.0)) throw ParameterError("mixing weights must be positive");
        weight_sum += w;
    }
    if (std::fabs(weight_sum - 1.0) > 1e-12)
        throw ParameterError("mixing weights must sum to 1");

    const Matrix& first = cfg.prototypes.front().values;
    const int p = first.rows();
    const int t = first.cols();
    for (const Prototype& proto : cfg.prototypes)
        if (!proto.values.same_shape(first))
            throw DimensionError("prototypes must share one shape");

    const Matrix l = dct_basis(p);
    const Matrix r = dct_basis(t);
    std::vector<Matrix> proto_coeffs;
    proto_coeffs.reserve(cfg.prototypes.size());
    for (const Prototype& proto : cfg.prototypes)
        proto_coeffs.push_back(matmul_nt(matmul(l, proto.values), r));

    std::vector<Matrix> obs;
    obs.reserve(static_cast<std::size_t>(cfg.n));
    std::vector<int> labels(static_cast<std::size_t>(cfg.n));
    for (int i = 0; i < cfg.n; ++i) {
        SplitMix64 rng = SplitMix64::substream(cfg.seed, static_cast<std::uint64_t>(i));
        // draw order per observation: label, Bernoulli mask, normals
        const double u = rng.next_uniform();
        int label = static_cast<int>(cfg.weights.size()) - 1;
        double cum = 0.0;
        for (std::size_t j = 0; j < cfg.weights.size(); ++j) {
            cum += cfg.weights[j];
            if (u < cum) {
                label = static_cast<int>(j);
                break;
            }
        }
        labels[static_cast<std::size_t>(i)] = label;
        const Matrix coeffs = perturb_coefficients(
            proto_coeffs[static_cast<std::size_t>(label)], cfg.rho, cfg.sigma, rng);
        obs.push_back(matmul(matmul_tn(l, coeffs), r));
    }
    return GeneratedSample{Dataset(std::move(obs)), std::move(labels)};
}

namespace {

struct Coefficient {
    int row; // 1-indexed
    int col;
    double scale; // multiplied by sqrt(P*T)
};

// Sparse low-frequency coefficient patterns. Indices clamp into the
// available range so any (P, T) works; clamped coefficients accumulate.
// B and C are antagonists on the leading coefficient, which keeps
// ||B - C||_F >= 4 sqrt(P*T) down to the 1x1 case.
Matrix build_preset(const std::vector<Coefficient>& coeffs, int p, int t) {
    Matrix omega(p, t);
    const double s = std::sqrt(static_cast<double>(p) * t);
    for (const Coefficient& c : coeffs) {
        const int row = std::min(c.row, p) - 1;
        const int col = std::min(c.col, t) - 1;
        omega(row, col) += c.scale * s;
    }
    return dct2_inverse(omega);
}

}  // namespace

Prototype preset_prototype(char name, int p, int t) {
    if (p < 1 || t < 1) throw ParameterError("prototype shape must be positive");
    switch (name) {
        case 'A':
        case 'a':
            return Prototype{build_preset({{1, 2, 2.0}, {2, 1, -1.5}, {2, 2, 1.0}}, p, t), "A"};
        case 'B':
        case 'b':
            return Prototype{build_preset({{1, 1, 3.0}, {1, 2, -2.0}, {3, 1, 1.0}}, p, t), "B"};
        case 'C':
        case 'c':
            return Prototype{build_preset({{1, 1, -3.0}, {2, 2, 2.0}, {1, 3, -1.0}}, p, t), "C"};
        default:
            throw ParameterError("unknown prototype name (expected A, B or C)");
    }
}

PresetSpec resolve_preset(const std::string& name, int p, int t) {
    if (name == "single")
        return PresetSpec{{preset_prototype('A', p, t)}, {1.0}};
    if (name == "two-balanced")
        return PresetSpec{{preset_prototype('B', p, t), preset_prototype('C', p, t)},
                          {0.5, 0.5}};
    if (name == "two-imbalanced")
        return PresetSpec{{preset_prototype('B', p, t), preset_prototype('C', p, t)},
                          {0.1, 0.9}};
    throw ParameterError("unknown preset: " + name +
                         " (expected single, two-balanced or two-imbalanced)");
}

}  // namespace modalmatrix
