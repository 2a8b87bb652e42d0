#pragma once

// CSV point clouds, region JSON and OFF export.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "core.hpp"
#include "polytope.hpp"

namespace tukey3d {

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return false;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc{} && ptr == s.data() + s.size() && std::isfinite(out);
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    return out;
}

inline std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace detail

/// "x,y,z" -> point.
inline Vec3 parse_point(std::string_view text) {
    const auto fields = detail::split(text, ',');
    Vec3 p;
    if (fields.size() != 3) throw Error(ErrorCode::ParseError, "expected 3 comma-separated numbers, got '" + std::string(text) + "'");
    for (std::size_t d = 0; d < 3; ++d)
        if (!detail::parse_double(fields[d], p[d]))
            throw Error(ErrorCode::ParseError, "not a number: '" + std::string(fields[d]) + "'");
    return p;
}

/// One point per line, three comma-separated fields. A first line that does
/// not parse as numbers is taken as a header; blank lines are skipped.
inline PointCloud read_csv(std::istream& in, const std::string& name = "<input>") {
    std::vector<Vec3> pts;
    std::string line;
    std::size_t lineno = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string_view s = detail::trim(line);
        if (s.empty()) continue;
        const auto fields = detail::split(s, ',');
        Vec3 p;
        bool ok = fields.size() == 3;
        for (std::size_t d = 0; ok && d < 3; ++d) ok = detail::parse_double(fields[d], p[d]);
        if (!ok) {
            if (first) {
                first = false;
                continue;
            }
            throw Error(ErrorCode::ParseError, name + ":" + std::to_string(lineno) +
                                                   ": expected 3 comma-separated numbers, got '" + std::string(s) + "'");
        }
        first = false;
        pts.push_back(p);
    }
    return PointCloud(std::move(pts));
}

inline PointCloud read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    return read_csv(in, path);
}

inline void write_csv(const PointCloud& cloud, std::ostream& out) {
    out << "x,y,z\n";
    for (const auto& p : cloud) out << detail::fmt(p.x) << ',' << detail::fmt(p.y) << ',' << detail::fmt(p.z) << '\n';
}

/// {"tau", "status", "halfspaces": [{"normal", "offset"}], "vertices", "facets"}.
/// Facets list vertex indices counter-clockwise from outside.
inline nlohmann::json region_to_json(const DepthRegion& r) {
    nlohmann::json j;
    j["tau"] = r.tau.tau;
    j["status"] = to_string(r.status);
    j["joggled"] = r.joggled;
    auto& hs = j["halfspaces"] = nlohmann::json::array();
    for (const auto& h : r.defining.halfspaces)
        hs.push_back({{"normal", {h.normal[0], h.normal[1], h.normal[2]}}, {"offset", h.offset}});
    auto& vs = j["vertices"] = nlohmann::json::array();
    for (const auto& v : r.vertices) vs.push_back({v.x, v.y, v.z});
    auto& fs = j["facets"] = nlohmann::json::array();
    for (const auto& f : r.facets) fs.push_back(f.vertices);
    auto& fh = j["facet_halfspaces"] = nlohmann::json::array();
    for (const auto& f : r.facets) fh.push_back(f.halfspace);
    return j;
}

/// Object File Format; facets keep their outward counter-clockwise order.
inline void write_off(const DepthRegion& r, std::ostream& out) {
    out << "OFF\n" << r.vertices.size() << ' ' << r.facets.size() << " 0\n";
    for (const auto& v : r.vertices) out << detail::fmt(v.x) << ' ' << detail::fmt(v.y) << ' ' << detail::fmt(v.z) << '\n';
    for (const auto& f : r.facets) {
        out << f.vertices.size();
        for (std::size_t v : f.vertices) out << ' ' << v;
        out << '\n';
    }
}

}  // namespace tukey3d
