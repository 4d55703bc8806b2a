#pragma once

// Deterministic report emission. Doubles are printed with %.17g so a value
// round-trips exactly and two runs of the same binary produce byte-identical
// files; nothing environment-dependent (timestamps, paths, locales) is ever
// written.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>

#include <json.hpp>

#include "wanderlab/errors.hpp"

namespace wanderlab {

using ordered_json = nlohmann::ordered_json;

inline std::string g17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, std::initializer_list<const char*> header)
        : out_(path, std::ios::binary) {
        if (!out_) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
        bool first = true;
        for (const char* h : header) {
            if (!first) out_ << ',';
            out_ << h;
            first = false;
        }
        out_ << '\n';
    }

    void row(std::initializer_list<std::string> cells) {
        bool first = true;
        for (const std::string& c : cells) {
            if (!first) out_ << ',';
            out_ << c;
            first = false;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

inline std::string cell(double v) { return g17(v); }
inline std::string cell(int v) { return std::to_string(v); }
inline std::string cell(const std::string& v) { return v; }

inline void write_json(const std::filesystem::path& path, const ordered_json& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out << j.dump(2) << '\n';
}

} // namespace wanderlab
