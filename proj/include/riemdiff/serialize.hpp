#pragma once

#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include <json.hpp>

#include "riemdiff/constructions.hpp"
#include "riemdiff/definiteness.hpp"
#include "riemdiff/distance.hpp"

namespace riemdiff {

using Json = nlohmann::json;

inline std::string format_real(double x) {
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------------------
// Space descriptions

struct LoadedSpace {
    enum class Kind { finite, loopspace, wedge_loopspace };
    Kind kind = Kind::finite;
    MetricSpace ms;                            // the space itself (finite kinds)
    std::shared_ptr<MetricSpace> loop_target;  // N for the mapping-space kinds
    std::string description;
};

namespace detail {

inline double parse_bound(const Json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "+inf") return kInf;
        if (s == "-inf") return -kInf;
        throw ConstructionError("space description: bad interval bound '" + s + "'");
    }
    return j.get<double>();
}

}  // namespace detail

inline LoadedSpace load_space(const Json& j);

inline MetricSpace load_finite_space(const Json& j) {
    LoadedSpace s = load_space(j);
    if (s.kind != LoadedSpace::Kind::finite)
        throw ConstructionError("space description: expected a finite-dimensional space here");
    return s.ms;
}

inline LoadedSpace load_space(const Json& j) {
    if (!j.is_object() || !j.contains("primitive"))
        throw ConstructionError("space description: missing \"primitive\"");
    const std::string prim = j.at("primitive").get<std::string>();
    LoadedSpace out;
    out.description = prim;

    if (prim == "euclidean") {
        const std::size_t dim = j.value("dim", 1);
        if (j.contains("tensor")) {
            const auto& tj = j.at("tensor");
            Mat a(dim, dim);
            for (std::size_t i = 0; i < dim; ++i)
                for (std::size_t k = 0; k < dim; ++k) a(i, k) = tj.at(i).at(k).get<double>();
            out.ms = euclidean(dim, a);
        } else {
            out.ms = euclidean(dim);
        }
        return out;
    }
    if (prim == "glue") {
        const auto& iv = j.at("interval");
        const double a = detail::parse_bound(iv.at(0));
        const double b = detail::parse_bound(iv.at(1));
        std::size_t right_dim = 1;
        if (j.contains("right")) right_dim = j.at("right").value("dim", 1);
        if (j.contains("left") && j.at("left").value("dim", 1) != 1)
            throw ConstructionError("glue: the left factor must be 1-dimensional");
        out.ms = glued_lines(a, b, right_dim).glued;
        return out;
    }
    if (prim == "product" || prim == "warped") {
        MetricSpace X = j.contains("x") ? load_finite_space(j.at("x")) : euclidean(1);
        MetricSpace Y = j.contains("y") ? load_finite_space(j.at("y")) : euclidean(1);
        if (prim == "product") {
            out.ms = product(X, Y);
            return out;
        }
        const std::string fname = j.value("f", "const1");
        WarpSpec w;
        if (fname == "const1") {
            w = WarpSpec::constant(1.0, X.space().family.size());
        } else if (fname == "exp2x") {
            for (std::size_t p = 0; p < X.space().family.size(); ++p)
                w.f_per_plot.push_back([](const Vec& r) { return std::exp(2.0 * r[0]); });
        } else {
            throw ConstructionError("warped: unknown warp function '" + fname + "'");
        }
        out.ms = warped_product(X, Y, w);
        out.description = "warped:" + fname;
        return out;
    }
    if (prim == "sum") {
        std::vector<MetricSpace> parts;
        for (const auto& pj : j.at("parts")) parts.push_back(load_finite_space(pj));
        out.ms = sum(parts);
        return out;
    }
    if (prim == "loopspace" || prim == "wedge_loopspace") {
        out.kind = prim == "loopspace" ? LoadedSpace::Kind::loopspace
                                       : LoadedSpace::Kind::wedge_loopspace;
        out.loop_target = std::make_shared<MetricSpace>(
            j.contains("target") ? load_finite_space(j.at("target")) : euclidean(2));
        return out;
    }
    throw ConstructionError("space description: unknown primitive '" + prim + "'");
}

inline LoadedSpace load_space_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open space file '" + path + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        // byte offset -> line/column
        std::size_t byte = e.byte > 0 ? e.byte - 1 : 0;
        if (byte > text.size()) byte = text.size();
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i < byte; ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw UsageError("malformed JSON in '" + path + "' at line " + std::to_string(line) +
                         ", column " + std::to_string(col));
    }
    return load_space(j);
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const DefinitenessReport& r) {
    Json j;
    j["verdict"] = to_string(r.verdict);
    j["witnesses"] = Json::array();
    for (const auto& w : r.witnesses) {
        Json wj;
        wj["plot"] = w.plot;
        wj["r"] = w.r;
        wj["v"] = w.v;
        wj["min_eigenvalue"] = w.min_eigenvalue;
        j["witnesses"].push_back(wj);
    }
    j["grid"] = r.grid;
    j["tol"] = r.tol;
    if (std::isfinite(r.min_eigenvalue)) j["min_eigenvalue"] = r.min_eigenvalue;
    if (!r.failure.empty()) j["failure"] = r.failure;
    return j;
}

inline Json to_json(const PiecewisePath& path, int samples_per_segment = 0) {
    Json j;
    j["segments"] = Json::array();
    for (const auto& seg : path.segments) {
        Json sj;
        sj["plot"] = seg.plot;
        Json pts = Json::array();
        if (!seg.control.empty()) {
            for (const auto& c : seg.control) pts.push_back(c);
        } else {
            const int n = samples_per_segment > 1 ? samples_per_segment : 17;
            for (int s = 0; s < n; ++s) pts.push_back(seg.at(static_cast<double>(s) / (n - 1)));
        }
        sj["control"] = pts;
        j["segments"].push_back(sj);
    }
    return j;
}

// one {op, inputs, value, tolerance} record
inline Json op_record(const std::string& op, Json inputs, double value, double tolerance) {
    Json j;
    j["op"] = op;
    j["inputs"] = std::move(inputs);
    j["value"] = value;
    j["tolerance"] = tolerance;
    return j;
}

// CSV with '.' decimal separator and 17 significant digits
inline std::string distance_trace_csv(const std::vector<double>& trace,
                                      const std::string& path_id) {
    std::string csv = "level,bound,path_id\n";
    for (std::size_t i = 0; i < trace.size(); ++i) {
        csv += std::to_string(i + 1);
        csv += ',';
        csv += format_real(trace[i]);
        csv += ',';
        csv += path_id;
        csv += '\n';
    }
    return csv;
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw UsageError("cannot write file '" + path + "'");
    out << text;
}

}  // namespace riemdiff
