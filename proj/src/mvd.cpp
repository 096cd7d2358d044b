#include "modalmatrix/mvd.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace modalmatrix {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

}  // namespace

MvdData read_mvd(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line)) throw FormatError(path + ": empty file");
    std::istringstream header(line);
    std::string magic;
    int version = 0, n = 0, p = 0, t = 0;
    if (!(header >> magic >> version >> n >> p >> t) || magic != "mvd")
        throw FormatError(path + ": bad header (expected `mvd 1 N P T`)");
    if (version != 1) throw FormatError(path + ": unsupported mvd version");
    if (n < 1 || p < 1 || t < 1) throw FormatError(path + ": bad dimensions in header");
    std::string extra;
    if (header >> extra) throw FormatError(path + ": trailing tokens in header");

    std::vector<Matrix> obs;
    obs.reserve(static_cast<std::size_t>(n));
    for (int row = 0; row < n; ++row) {
        if (!std::getline(in, line))
            throw FormatError(path + ": truncated (expected " + std::to_string(n) + " rows)");
        std::istringstream values(line);
        std::vector<double> entries(static_cast<std::size_t>(p) * t);
        for (double& e : entries) {
            if (!(values >> e))
                throw FormatError(path + ": row " + std::to_string(row + 1) +
                                  " has too few values");
            if (!std::isfinite(e))
                throw FormatError(path + ": non-finite value at row " +
                                  std::to_string(row + 1));
        }
        if (values >> extra)
            throw FormatError(path + ": row " + std::to_string(row + 1) +
                              " has too many values");
        obs.emplace_back(p, t, std::move(entries));
    }

    MvdData out{Dataset(std::move(obs)), {}, false};
    while (std::getline(in, line)) {
        const std::string rest = trim(line);
        if (rest.empty()) continue;
        if (rest.rfind("# labels:", 0) != 0)
            throw FormatError(path + ": unexpected trailing content");
        std::istringstream labels(rest.substr(9));
        out.labels.reserve(static_cast<std::size_t>(n));
        int lab = 0;
        while (labels >> lab) out.labels.push_back(lab);
        if (static_cast<int>(out.labels.size()) != n)
            throw FormatError(path + ": labels line must carry N integers");
        out.has_labels = true;
    }
    return out;
}

void write_mvd(const std::string& path, const Dataset& data,
               const std::vector<int>* labels) {
    if (labels != nullptr && static_cast<int>(labels->size()) != data.size())
        throw DimensionError("one label per observation required");

    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << "mvd 1 " << data.size() << ' ' << data.rows() << ' ' << data.cols() << '\n';
    char buf[40];
    for (int i = 0; i < data.size(); ++i) {
        const Matrix& m = data[i];
        for (int j = 0; j < m.size(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", m.data()[j]);
            if (j > 0) out << ' ';
            out << buf;
        }
        out << '\n';
    }
    if (labels != nullptr) {
        out << "# labels:";
        for (int lab : *labels) out << ' ' << lab;
        out << '\n';
    }
    if (!out) throw IoError("failed while writing " + path);
}

void write_labels(const std::string& path, std::span<const int> labels) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (int lab : labels) out << lab << '\n';
    if (!out) throw IoError("failed while writing " + path);
}

std::vector<int> read_labels(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string first;
    if (!std::getline(in, first)) throw FormatError(path + ": empty file");

    if (trim(first).rfind("mvd", 0) == 0) {
        in.close();
        MvdData mvd = read_mvd(path);
        if (!mvd.has_labels)
            throw FormatError(path + ": mvd file carries no labels line");
        return mvd.labels;
    }

    std::vector<int> labels;
    std::string line = first;
    do {
        const std::string rest = trim(line);
        if (rest.empty()) continue;
        int lab = 0;
        auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), lab);
        if (ec != std::errc() || ptr != rest.data() + rest.size())
            throw FormatError(path + ": expected one integer per line");
        labels.push_back(lab);
    } while (std::getline(in, line));
    if (labels.empty()) throw FormatError(path + ": no labels found");
    return labels;
}

}  // namespace modalmatrix
