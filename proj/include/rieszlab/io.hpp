#pragma once

// Serialization: 17-significant-digit numbers, CSV with a header and LF endings,
// the Spectrum JSON schema, and atomic file replacement.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "galerkin.hpp"

namespace rieszlab::io {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kGenerator = "rieszlab";

struct FormatError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Csv {
public:
    explicit Csv(std::vector<std::string> header) : width_(header.size()) { row_strings(header); }

    template <class... T>
    Csv& row(const T&... cells) {
        std::vector<std::string> v{cell(cells)...};
        if (v.size() != width_) throw std::logic_error("csv row width does not match the header");
        row_strings(v);
        return *this;
    }
    const std::string& str() const { return text_; }

private:
    static std::string cell(double v) { return num(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(long v) { return std::to_string(v); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(const char* s) { return s; }

    void row_strings(const std::vector<std::string>& v) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) text_ += ',';
            text_ += v[i];
        }
        text_ += '\n';
    }
    std::size_t width_;
    std::string text_;
};

// Write to a sibling temporary and rename over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to " + tmp.string() + " failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot replace " + path.string() + ": " + ec.message());
    }
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read " + path.string());
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

inline std::string spectrum_to_json(const galerkin::Spectrum& s) {
    using nlohmann::json;
    std::string o = "{\n";
    o += "  \"domain_spec\": " + json(s.domain_spec).dump() + ",\n";
    o += "  \"m\": " + num(s.m) + ",\n";
    o += "  \"basis\": {\"kind\": " + json(galerkin::to_string(s.basis.kind)).dump() + ", \"counts\": [";
    for (std::size_t i = 0; i < s.basis.counts.size(); ++i) o += (i ? ", " : "") + std::to_string(s.basis.counts[i]);
    o += "], \"torus\": " + num(s.basis.torus) + "},\n";
    o += "  \"eigenvalues\": [";
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i) o += (i ? ", " : "") + num(s.eigenvalues[i]);
    o += "],\n";
    o += "  \"generated_by\": " + json(kGenerator).dump() + ",\n";
    o += "  \"version\": " + json(kVersion).dump() + "\n}\n";
    return o;
}

inline galerkin::Spectrum spectrum_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed spectrum JSON: ") + e.what());
    }
    galerkin::Spectrum s;
    try {
        s.domain_spec = j.at("domain_spec").get<std::string>();
        s.m = j.at("m").get<double>();
        const auto& b = j.at("basis");
        const auto kind = b.at("kind").get<std::string>();
        if (kind == "sine")
            s.basis.kind = galerkin::BasisKind::tensor_sine;
        else if (kind == "tent")
            s.basis.kind = galerkin::BasisKind::tent_grid;
        else
            throw FormatError("unknown basis kind '" + kind + "'");
        s.basis.counts = b.at("counts").get<std::vector<int>>();
        s.basis.torus = b.at("torus").get<double>();
        s.eigenvalues = j.at("eigenvalues").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw FormatError(std::string("spectrum JSON is missing a field: ") + e.what());
    }
    if (s.eigenvalues.empty()) throw FormatError("spectrum JSON has no eigenvalues");
    for (std::size_t i = 0; i < s.eigenvalues.size(); ++i)
        if (!(s.eigenvalues[i] > 0.0) || (i && s.eigenvalues[i] < s.eigenvalues[i - 1]))
            throw FormatError("spectrum eigenvalues must be positive and ascending");
    return s;
}

}  // namespace rieszlab::io
