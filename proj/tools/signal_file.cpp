#include "signal_file.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <unistd.h>

namespace qpft_cli {

namespace {

using nlohmann::json;

std::uint64_t to_le(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
    return v;
}

std::string header_line(const Signal& s, Encoding enc) {
    json axes = json::array();
    for (const auto& a : s.axes) axes.push_back({{"origin", a.origin}, {"step", a.step}, {"count", a.count}});
    json h = {{"format", "qpft-signal"},
              {"version", 1},
              {"dims", s.axes.size()},
              {"axes", axes},
              {"domain", s.domain},
              {"encoding", enc == Encoding::f64le ? "f64le" : "csv"}};
    if (!s.params.empty()) h["params"] = s.params;
    return h.dump() + "\n";
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// strtod keeps subnormals that std::stod rejects with out_of_range.
double parse_double(const std::string& cell) {
    char* end = nullptr;
    const double v = std::strtod(cell.c_str(), &end);
    if (cell.empty() || end != cell.c_str() + cell.size()) throw std::invalid_argument(cell);
    return v;
}

}  // namespace

std::size_t Signal::points() const {
    std::size_t n = 1;
    for (const auto& a : axes) n *= a.count;
    return n;
}

void write_atomic(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp." + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw FileError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw FileError("write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw FileError("cannot rename into " + path);
    }
}

void write_signal(const std::string& path, const Signal& s, Encoding enc) {
    if (s.data.size() != 2 * s.points()) throw FileError("payload length does not match the grid");
    std::string out = header_line(s, enc);
    if (enc == Encoding::f64le) {
        out.reserve(out.size() + 8 * s.data.size());
        for (double v : s.data) {
            const std::uint64_t u = to_le(std::bit_cast<std::uint64_t>(v));
            char b[8];
            std::memcpy(b, &u, 8);
            out.append(b, 8);
        }
    } else {
        const std::size_t n = s.axes.size();
        for (std::size_t k = 0; k < n; ++k) out += "i" + std::to_string(k + 1) + ",";
        for (std::size_t k = 0; k < n; ++k) out += "x" + std::to_string(k + 1) + ",";
        out += "re,im\n";
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < s.points(); ++i) {
            std::size_t r = i;
            for (std::size_t k = n; k-- > 0;) {
                idx[k] = r % s.axes[k].count;
                r /= s.axes[k].count;
            }
            for (std::size_t k = 0; k < n; ++k) out += std::to_string(idx[k]) + ",";
            for (std::size_t k = 0; k < n; ++k)
                out += fmt(s.axes[k].origin + static_cast<double>(idx[k]) * s.axes[k].step) + ",";
            out += fmt(s.data[2 * i]) + "," + fmt(s.data[2 * i + 1]) + "\n";
        }
    }
    write_atomic(path, out);
}

Signal read_signal(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw FileError(path + ": missing header line");
    json h;
    try {
        h = json::parse(line);
    } catch (const json::exception& e) {
        throw FileError(path + ": header is not JSON (" + e.what() + ")");
    }
    Signal s;
    Encoding enc;
    try {
        if (h.at("format") != "qpft-signal") throw FileError(path + ": not a qpft-signal file");
        for (const auto& a : h.at("axes"))
            s.axes.push_back({a.at("origin").get<double>(), a.at("step").get<double>(), a.at("count").get<std::size_t>()});
        if (h.at("dims").get<std::size_t>() != s.axes.size()) throw FileError(path + ": dims disagrees with axes");
        s.domain = h.at("domain").get<std::string>();
        if (s.domain != "space" && s.domain != "frequency") throw FileError(path + ": unknown domain " + s.domain);
        const auto e = h.at("encoding").get<std::string>();
        if (e == "f64le")
            enc = Encoding::f64le;
        else if (e == "csv")
            enc = Encoding::csv;
        else
            throw FileError(path + ": unknown encoding " + e);
        if (h.contains("params")) s.params = h["params"].get<std::vector<std::array<double, 5>>>();
    } catch (const json::exception& e) {
        throw FileError(path + ": malformed header (" + e.what() + ")");
    }
    if (s.axes.empty()) throw FileError(path + ": no axes");
    const std::size_t n = s.points();
    s.data.resize(2 * n);
    if (enc == Encoding::f64le) {
        std::vector<char> raw(8 * 2 * n);
        in.read(raw.data(), static_cast<std::streamsize>(raw.size()));
        if (static_cast<std::size_t>(in.gcount()) != raw.size()) throw FileError(path + ": payload too short");
        if (in.peek() != std::char_traits<char>::eof()) throw FileError(path + ": trailing bytes after payload");
        for (std::size_t i = 0; i < 2 * n; ++i) {
            std::uint64_t u;
            std::memcpy(&u, raw.data() + 8 * i, 8);
            s.data[i] = std::bit_cast<double>(to_le(u));
        }
    } else {
        std::getline(in, line);  // column names
        const std::size_t dims = s.axes.size();
        std::vector<bool> seen(n, false);
        std::size_t rows = 0;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            std::stringstream ss(line);
            std::string cell;
            std::vector<std::string> cells;
            while (std::getline(ss, cell, ',')) cells.push_back(cell);
            if (cells.size() != 2 * dims + 2) throw FileError(path + ": bad CSV row " + std::to_string(rows + 1));
            std::size_t flat = 0;
            try {
                for (std::size_t k = 0; k < dims; ++k) {
                    const std::size_t j = std::stoull(cells[k]);
                    if (j >= s.axes[k].count) throw FileError(path + ": index out of range");
                    flat = flat * s.axes[k].count + j;
                }
                s.data[2 * flat] = parse_double(cells[2 * dims]);
                s.data[2 * flat + 1] = parse_double(cells[2 * dims + 1]);
            } catch (const std::logic_error&) {
                throw FileError(path + ": unparsable CSV row " + std::to_string(rows + 1));
            }
            if (seen[flat]) throw FileError(path + ": duplicate CSV row");
            seen[flat] = true;
            ++rows;
        }
        if (rows != n) throw FileError(path + ": expected " + std::to_string(n) + " CSV rows, got " + std::to_string(rows));
    }
    for (double v : s.data)
        if (!std::isfinite(v)) throw FileError(path + ": non-finite sample");
    return s;
}

}  // namespace qpft_cli
