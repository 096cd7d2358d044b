#pragma once

#include <string>
#include <vector>

#include "modalmatrix/dataset.hpp"

namespace modalmatrix {

// MVD text format, version 1:
//   line 1:        mvd 1 <N> <P> <T>
//   lines 2..N+1:  P*T decimal floats, row-major, space separated
//   optional last: # labels: <N integers>
// Floats are written with 17 significant digits so a write/read round trip
// is lossless.

struct MvdData {
    Dataset data;
    std::vector<int> labels; // empty when the file carries no labels
    bool has_labels = false;
};

MvdData read_mvd(const std::string& path);

void write_mvd(const std::string& path, const Dataset& data,
               const std::vector<int>* labels = nullptr);

// One integer per line.
void write_labels(const std::string& path, std::span<const int> labels);

// Accepts either a plain one-label-per-line file or an MVD file with a
// labels line.
std::vector<int> read_labels(const std::string& path);

}  // namespace modalmatrix
