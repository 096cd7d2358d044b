#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "modalmatrix/dataset.hpp"
#include "modalmatrix/rng.hpp"

namespace modalmatrix {

struct Prototype {
    Matrix values;
    std::string name;
};

struct GenConfig {
    std::vector<Prototype> prototypes; // common shape, at least one
    std::vector<double> weights;       // positive, sum to 1 (+-1e-12)
    double rho = 1.0;                  // per-coefficient contamination rate
    double sigma = 1.0;                // contamination noise sd
    int n = 0;
    std::uint64_t seed = 0;
};

// Orthonormal type-II DCT basis of order n: row k is the k-th cosine basis
// vector, B B' = I.
Matrix dct_basis(int n);

// Omega = L M R' with L = dct_basis(P), R = dct_basis(T). Energy preserving.
Matrix dct2_forward(const Matrix& m);

// M = L' Omega R; exact inverse of dct2_forward.
Matrix dct2_inverse(const Matrix& omega);

// Entrywise Omega + eps.u with u ~ Bernoulli(rho), eps ~ N(0, sigma^2).
// Draw order is fixed: all Bernoulli draws row-major, then all normal draws
// row-major (normals are consumed even where u = 0).
Matrix perturb_coefficients(const Matrix& omega, double rho, double sigma,
                            SplitMix64& rng);

struct GeneratedSample {
    Dataset data;
    std::vector<int> labels; // prototype index per observation
};

// Mixture sampler: per observation, an independent substream derived from
// (seed, index) drives label choice, then the coefficient perturbation.
// Bit-identical output for identical config, regardless of threading.
GeneratedSample generate(const GenConfig& cfg);

// Built-in prototypes 'A', 'B', 'C': sparse low-frequency DCT coefficient
// patterns scaled by sqrt(P*T), so ||B - C||_F >= 4 sqrt(P*T) at any shape.
Prototype preset_prototype(char name, int p, int t);

struct PresetSpec {
    std::vector<Prototype> prototypes;
    std::vector<double> weights;
};

// Named simulation presets: "single" (A), "two-balanced" (B, C at 1/2 each),
// "two-imbalanced" (B, C at 0.1/0.9).
PresetSpec resolve_preset(const std::string& name, int p, int t);

}  // namespace modalmatrix
