#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace qpft_cli {

struct AxisSpec {
    double origin = 0;
    double step = 1;
    std::size_t count = 1;
};

enum class Encoding { f64le, csv };

// One JSON header line, a newline, then the payload: 2·Π count doubles
// (re, im interleaved, little-endian) or CSV rows "i1..iN,x1..xN,re,im".
struct Signal {
    std::vector<AxisSpec> axes;
    std::string domain = "space";
    std::vector<std::array<double, 5>> params;  // optional
    std::vector<double> data;

    std::size_t points() const;
};

class FileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Signal read_signal(const std::string& path);
void write_signal(const std::string& path, const Signal& s, Encoding enc);
// Writes to a sibling temporary and renames it over `path`.
void write_atomic(const std::string& path, const std::string& bytes);

}  // namespace qpft_cli
