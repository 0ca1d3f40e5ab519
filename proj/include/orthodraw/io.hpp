#pragma once

// Request parsing (JSON / CSV), the check dispatcher behind the CLI, SVG
// line drawings and seeded sample images.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "orthodraw/construct.hpp"
#include "orthodraw/eutaxy.hpp"
#include "orthodraw/numeric.hpp"
#include "orthodraw/shapes.hpp"
#include "orthodraw/simplexform.hpp"

namespace orthodraw::io {

using nlohmann::json;

enum class Format { Json, Csv };

inline Format parse_format(std::string_view name) {
    if (name == "json") return Format::Json;
    if (name == "csv") return Format::Csv;
    throw Error(ErrorCode::Parse, "unknown format '" + std::string(name) + "'");
}

/// kind is an image-equation name or "simplex"; for "simplex" exactly one of
/// `vertices` / `shape` supplies the reference simplex.
struct CheckRequest {
    std::string kind;
    PlanarImage points;
    Tolerance tolerance = image_tolerance();
    bool want_lift = false;
    std::optional<RealMatrix> vertices;
    std::optional<std::string> shape;
};

/// Options that CSV cannot carry in-band (and that override JSON when set).
struct RequestOptions {
    std::optional<std::string> kind;
    std::optional<Tolerance> tolerance;
    bool want_lift = false;
    std::optional<std::string> shape;
};

inline std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline json complex_json(Complex z) { return json::array({z.real(), z.imag()}); }

inline json points_json(const PlanarImage& img) {
    json out = json::array();
    for (const auto& z : img) {
        out.push_back(complex_json(z));
    }
    return out;
}

inline json matrix_json(const RealMatrix& m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        out.push_back(row);
    }
    return out;
}

inline json frame_json(const OrthoFrame& f) {
    json t = json::array();
    for (Eigen::Index i = 0; i < f.translation.size(); ++i) {
        t.push_back(f.translation(i));
    }
    return json{{"rotation", matrix_json(f.rotation)}, {"scale", f.scale}, {"translation", t}};
}

/// "re,im" header then one point per row, 17 significant digits.
inline std::string points_csv(const PlanarImage& img) {
    std::string out = "re,im\n";
    for (const auto& z : img) {
        out += format_number(z.real()) + "," + format_number(z.imag()) + "\n";
    }
    return out;
}

namespace detail {

inline std::size_t line_of(std::string_view text, std::size_t byte) {
    byte = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

inline double number_at(const json& j, const std::string& field) {
    if (!j.is_number()) {
        throw Error(ErrorCode::Schema, field + ": expected a number");
    }
    const double x = j.get<double>();
    if (!std::isfinite(x)) {
        throw Error(ErrorCode::Schema, field + ": non-finite number");
    }
    return x;
}

inline Complex complex_at(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) {
        throw Error(ErrorCode::Schema, field + ": expected [re, im]");
    }
    return {number_at(j[0], field + "[0]"), number_at(j[1], field + "[1]")};
}

inline PlanarImage points_at(const json& j, const std::string& field) {
    if (!j.is_array()) {
        throw Error(ErrorCode::Schema, field + ": expected an array of [re, im] pairs");
    }
    PlanarImage out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(complex_at(j[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

inline RealMatrix matrix_at(const json& j, const std::string& field) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) {
        throw Error(ErrorCode::Schema, field + ": expected an array of rows");
    }
    const std::size_t cols = j[0].size();
    RealMatrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < j.size(); ++r) {
        if (!j[r].is_array() || j[r].size() != cols) {
            throw Error(ErrorCode::Schema, field + "[" + std::to_string(r) + "]: ragged row");
        }
        for (std::size_t c = 0; c < cols; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                number_at(j[r][c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return m;
}

inline json parse_json_text(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Parse, "line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
    }
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline double parse_csv_number(std::string_view cell, std::size_t line) {
    const std::string str(trim(cell));
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(str, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (str.empty() || used != str.size() || !std::isfinite(x)) {
        throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": '" + str + "' is not a number");
    }
    return x;
}

inline PlanarImage parse_csv_points(std::string_view text) {
    PlanarImage out;
    bool header = false;
    std::size_t line = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = std::min(text.find('\n', start), text.size());
        const std::string_view row = trim(text.substr(start, end - start));
        ++line;
        start = end + 1;
        if (row.empty()) {
            if (end == text.size()) break;
            continue;
        }
        if (!header) {
            if (row != "re,im") {
                throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": expected header 're,im'");
            }
            header = true;
            continue;
        }
        const std::size_t comma = row.find(',');
        if (comma == std::string_view::npos || row.find(',', comma + 1) != std::string_view::npos) {
            throw Error(ErrorCode::Parse, "line " + std::to_string(line) + ": expected two fields");
        }
        out.emplace_back(parse_csv_number(row.substr(0, comma), line), parse_csv_number(row.substr(comma + 1), line));
        if (end == text.size()) break;
    }
    if (!header) {
        throw Error(ErrorCode::Parse, "line 1: missing header 're,im'");
    }
    return out;
}

}  // namespace detail

inline Tolerance tolerance_from_json(const json& j) {
    if (!j.is_object()) {
        throw Error(ErrorCode::Schema, "tolerance: expected an object");
    }
    Tolerance tol = image_tolerance();
    if (j.contains("absolute")) tol.absolute = detail::number_at(j["absolute"], "tolerance.absolute");
    if (j.contains("relative")) tol.relative = detail::number_at(j["relative"], "tolerance.relative");
    try {
        tol.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::Schema, std::string("tolerance: ") + e.what());
    }
    return tol;
}

/// Checks that the kind is known and the point count fits it.
inline void validate_request(const CheckRequest& req) {
    if (req.kind == "simplex") {
        if (req.vertices.has_value() == req.shape.has_value()) {
            throw Error(ErrorCode::Schema, "kind 'simplex' needs exactly one of 'vertices' or 'shape'");
        }
        Eigen::Index n = 0;
        if (req.vertices) {
            if (req.vertices->cols() != req.vertices->rows() + 1) {
                throw Error(ErrorCode::Schema, "vertices: expected n rows of n+1 entries");
            }
            n = req.vertices->rows();
        } else {
            try {
                const PolytopeSpec spec = catalog(*req.shape);
                if (spec.vertex_count() != spec.dim + 1) {
                    throw Error(ErrorCode::Schema, "shape: '" + *req.shape + "' is not a simplex");
                }
                n = spec.dim;
            } catch (const Error& e) {
                if (e.code() == ErrorCode::Lookup) throw Error(ErrorCode::Schema, e.what());
                throw;
            }
        }
        if (static_cast<Eigen::Index>(req.points.size()) != n + 1) {
            throw Error(ErrorCode::Schema, "points: simplex needs " + std::to_string(n + 1) + " points, got " +
                                               std::to_string(req.points.size()));
        }
        return;
    }
    const auto kind = parse_image_kind(req.kind);
    if (!kind) {
        throw Error(ErrorCode::Schema, "unknown kind '" + req.kind + "'");
    }
    try {
        check_point_count(*kind, req.points.size());
    } catch (const Error& e) {
        throw Error(ErrorCode::Schema, std::string("points: ") + e.what());
    }
}

inline CheckRequest parse_input(std::string_view text, Format format, const RequestOptions& opts = {}) {
    CheckRequest req;
    if (format == Format::Json) {
        const json doc = detail::parse_json_text(text);
        if (!doc.is_object()) {
            throw Error(ErrorCode::Schema, "request must be a JSON object");
        }
        if (doc.contains("kind")) {
            if (!doc["kind"].is_string()) throw Error(ErrorCode::Schema, "kind: expected a string");
            req.kind = doc["kind"].get<std::string>();
        }
        if (!doc.contains("points")) throw Error(ErrorCode::Schema, "points: missing");
        req.points = detail::points_at(doc["points"], "points");
        if (doc.contains("tolerance")) req.tolerance = tolerance_from_json(doc["tolerance"]);
        if (doc.contains("want_lift")) {
            if (!doc["want_lift"].is_boolean()) throw Error(ErrorCode::Schema, "want_lift: expected a boolean");
            req.want_lift = doc["want_lift"].get<bool>();
        }
        if (doc.contains("vertices")) req.vertices = detail::matrix_at(doc["vertices"], "vertices");
        if (doc.contains("shape")) {
            if (!doc["shape"].is_string()) throw Error(ErrorCode::Schema, "shape: expected a string");
            req.shape = doc["shape"].get<std::string>();
        }
    } else {
        req.points = detail::parse_csv_points(text);
    }
    if (opts.kind) req.kind = *opts.kind;
    if (opts.tolerance) req.tolerance = *opts.tolerance;
    if (opts.want_lift) req.want_lift = true;
    if (opts.shape) req.shape = *opts.shape;
    if (req.kind.empty()) {
        throw Error(ErrorCode::Schema, "kind: missing");
    }
    validate_request(req);
    return req;
}

struct CheckOutcome {
    Verdict verdict;
    std::vector<Complex> linear_residuals;
    std::optional<OrthoFrame> frame;
    std::string lift_note;
};

inline SimplexVertices request_simplex(const CheckRequest& req) {
    if (req.vertices) return SimplexVertices(*req.vertices);
    return SimplexVertices(catalog(*req.shape).vertices);
}

/// Library half of the `check` subcommand.
inline CheckOutcome evaluate_check(const CheckRequest& req) {
    validate_request(req);
    CheckOutcome out;
    std::optional<SimplexVertices> lift_simplex;

    if (req.kind == "simplex") {
        const SimplexVertices verts = request_simplex(req);
        out.verdict = similar_image_complex(req.points, shape_form(verts), req.tolerance);
        lift_simplex = verts;
    } else {
        const ImageEquationKind kind = *parse_image_kind(req.kind);
        out.verdict = image_verdict(kind, req.points, req.tolerance);
        out.linear_residuals = image_residual(kind, req.points).linear;
        const auto n = static_cast<int>(req.points.size()) - 1;
        if (kind == ImageEquationKind::RegularTetrahedron || kind == ImageEquationKind::RegularSimplex ||
            kind == ImageEquationKind::EquilateralTriangle) {
            lift_simplex = SimplexVertices(catalog("simplex(" + std::to_string(n) + ")").vertices);
        }
    }

    if (!req.want_lift || !out.verdict.pass) {
        return out;
    }
    try {
        if (req.kind == "cube_neighbors") {
            out.frame = lift_cube(req.points, req.tolerance);
        } else if (lift_simplex && lift_simplex->dim() >= 2) {
            const Tolerance lift_tol{1e-9, std::max(1e-9, req.tolerance.relative)};
            out.frame = lift_image(to_real_rows(req.points), *lift_simplex, lift_tol, LiftMode::Similar);
        } else {
            out.lift_note = "lifting is not available for kind '" + req.kind + "'";
        }
    } catch (const Error& e) {
        out.lift_note = e.what();
    }
    return out;
}

/// Prints the JSON report to `out`; returns the process exit status
/// (0 pass, 1 fail).
inline int run_check(const CheckRequest& req, std::ostream& out) {
    const CheckOutcome r = evaluate_check(req);
    json report{{"kind", req.kind},
                {"residual", complex_json(r.verdict.complex_residual.value_or(Complex{r.verdict.residual, 0.0}))},
                {"residual_abs", r.verdict.residual},
                {"normalized_residual", r.verdict.normalized_residual()},
                {"threshold", r.verdict.threshold},
                {"tolerance", {{"absolute", req.tolerance.absolute}, {"relative", req.tolerance.relative}}},
                {"verdict", r.verdict.pass ? "pass" : "fail"},
                {"degenerate", r.verdict.degenerate}};
    if (!r.linear_residuals.empty()) report["linear_residuals"] = points_json(r.linear_residuals);
    if (req.want_lift) {
        report["frame"] = r.frame ? frame_json(*r.frame) : json(nullptr);
        if (!r.lift_note.empty()) report["lift_note"] = r.lift_note;
    }
    out << report.dump(2) << "\n";
    return r.verdict.pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Drawings

struct LabeledPoint {
    std::string label;
    Complex at;
};

struct DrawingEdge {
    int from = 0;
    int to = 0;
    bool hidden = false;
};

struct DrawingDocument {
    std::vector<LabeledPoint> points;
    std::vector<DrawingEdge> edges;

    void validate() const {
        const int count = static_cast<int>(points.size());
        for (const auto& e : edges) {
            if (e.from < 0 || e.to < 0 || e.from >= count || e.to >= count) {
                throw Error(ErrorCode::Schema, "edge index out of range");
            }
        }
        for (const auto& p : points) {
            if (!std::isfinite(p.at.real()) || !std::isfinite(p.at.imag())) {
                throw Error(ErrorCode::Schema, "non-finite point");
            }
        }
    }
};

namespace detail {

inline std::string svg_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

inline std::string svg_num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", x);
    std::string s = buf;
    if (s == "-0.000") s = "0.000";
    return s;
}

}  // namespace detail

/// Standalone SVG 1.1: the drawing is fitted to a 400-unit canvas with a 5%
/// margin, the imaginary axis pointing up. Hidden edges are dashed "4 3".
inline std::string render_svg(const DrawingDocument& doc) {
    doc.validate();
    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    if (doc.points.empty()) {
        svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 1 1\" width=\"1\" "
               "height=\"1\"/>\n";
        return svg.str();
    }
    double min_x = std::numeric_limits<double>::infinity(), max_x = -min_x;
    double min_y = min_x, max_y = -min_x;
    for (const auto& p : doc.points) {
        min_x = std::min(min_x, p.at.real());
        max_x = std::max(max_x, p.at.real());
        min_y = std::min(min_y, p.at.imag());
        max_y = std::max(max_y, p.at.imag());
    }
    const double extent = std::max(max_x - min_x, max_y - min_y);
    const double canvas = 400.0;
    const double s = extent > 0.0 ? canvas / extent : 1.0;
    const double margin = 0.05 * canvas;
    const double width = (max_x - min_x) * s + 2.0 * margin;
    const double height = (max_y - min_y) * s + 2.0 * margin;
    auto px = [&](Complex z) { return (z.real() - min_x) * s + margin; };
    auto py = [&](Complex z) { return (max_y - z.imag()) * s + margin; };

    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 " << detail::svg_num(width) << " "
        << detail::svg_num(height) << "\" width=\"" << detail::svg_num(width) << "\" height=\""
        << detail::svg_num(height) << "\">\n";
    svg << "  <g stroke=\"black\" stroke-width=\"1.5\" stroke-linecap=\"round\" fill=\"none\">\n";
    for (const auto& e : doc.edges) {
        const Complex a = doc.points[static_cast<std::size_t>(e.from)].at;
        const Complex b = doc.points[static_cast<std::size_t>(e.to)].at;
        svg << "    <line x1=\"" << detail::svg_num(px(a)) << "\" y1=\"" << detail::svg_num(py(a)) << "\" x2=\""
            << detail::svg_num(px(b)) << "\" y2=\"" << detail::svg_num(py(b)) << "\"";
        if (e.hidden) svg << " stroke-dasharray=\"4 3\"";
        svg << "/>\n";
    }
    svg << "  </g>\n";
    svg << "  <g fill=\"black\" font-family=\"serif\" font-size=\"12\">\n";
    for (const auto& p : doc.points) {
        svg << "    <circle cx=\"" << detail::svg_num(px(p.at)) << "\" cy=\"" << detail::svg_num(py(p.at))
            << "\" r=\"2.5\"/>\n";
        if (!p.label.empty()) {
            svg << "    <text x=\"" << detail::svg_num(px(p.at) + 5.0) << "\" y=\"" << detail::svg_num(py(p.at) - 5.0)
                << "\">" << detail::svg_escape(p.label) << "</text>\n";
        }
    }
    svg << "  </g>\n</svg>\n";
    return svg.str();
}

/// The complete cube on the edge images alpha, beta, gamma at the origin:
/// vertex k sits at the sum of the edges whose bit is set in k. The viewer is
/// on the +z side of the lifted pose; the three edges at the vertex farthest
/// from the viewer are hidden.
inline DrawingDocument cube_drawing(const PlanarImage& edges_at_origin, const Tolerance& tol = image_tolerance()) {
    const OrthoFrame frame = lift_cube(edges_at_origin, tol);
    DrawingDocument doc;
    int back = 0;
    double back_depth = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 8; ++k) {
        Complex z{0.0, 0.0};
        RealVector corner = RealVector::Zero(3);
        for (int bit = 0; bit < 3; ++bit) {
            if ((k >> bit) & 1) {
                z += edges_at_origin[static_cast<std::size_t>(bit)];
                corner(bit) = 1.0;
            }
        }
        const double depth = (frame.rotation * corner)(2);
        if (depth < back_depth - 1e-12) {
            back_depth = depth;
            back = k;
        }
        static constexpr const char* kLabels[8] = {"0", "\u03b1", "\u03b2", "", "\u03b3", "", "", ""};
        doc.points.push_back({kLabels[k], z});
    }
    for (int k = 0; k < 8; ++k) {
        for (int bit = 0; bit < 3; ++bit) {
            if (!((k >> bit) & 1)) {
                const int other = k | (1 << bit);
                doc.edges.push_back({k, other, k == back || other == back});
            }
        }
    }
    return doc;
}

/// Points: [re, im] or {"label": s, "at": [re, im]}. Edges: [i, j] or
/// {"from": i, "to": j, "hidden": b}.
inline DrawingDocument drawing_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("points")) {
        throw Error(ErrorCode::Schema, "drawing needs a 'points' array");
    }
    DrawingDocument out;
    const json& pts = doc["points"];
    if (!pts.is_array()) throw Error(ErrorCode::Schema, "points: expected an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const std::string field = "points[" + std::to_string(i) + "]";
        if (pts[i].is_object()) {
            LabeledPoint p;
            if (pts[i].contains("label")) {
                if (!pts[i]["label"].is_string()) throw Error(ErrorCode::Schema, field + ".label: expected a string");
                p.label = pts[i]["label"].get<std::string>();
            }
            if (!pts[i].contains("at")) throw Error(ErrorCode::Schema, field + ".at: missing");
            p.at = detail::complex_at(pts[i]["at"], field + ".at");
            out.points.push_back(p);
        } else {
            out.points.push_back({"", detail::complex_at(pts[i], field)});
        }
    }
    if (doc.contains("edges")) {
        const json& edges = doc["edges"];
        if (!edges.is_array()) throw Error(ErrorCode::Schema, "edges: expected an array");
        for (std::size_t i = 0; i < edges.size(); ++i) {
            const std::string field = "edges[" + std::to_string(i) + "]";
            const json& e = edges[i];
            auto index = [&](const json& j, const std::string& f) {
                if (!j.is_number_integer()) throw Error(ErrorCode::Schema, f + ": expected an integer");
                return j.get<int>();
            };
            if (e.is_array() && e.size() == 2) {
                out.edges.push_back({index(e[0], field + "[0]"), index(e[1], field + "[1]"), false});
            } else if (e.is_object() && e.contains("from") && e.contains("to")) {
                DrawingEdge edge{index(e["from"], field + ".from"), index(e["to"], field + ".to"), false};
                if (e.contains("hidden")) {
                    if (!e["hidden"].is_boolean()) throw Error(ErrorCode::Schema, field + ".hidden: expected a boolean");
                    edge.hidden = e["hidden"].get<bool>();
                }
                out.edges.push_back(edge);
            } else {
                throw Error(ErrorCode::Schema, field + ": expected [i, j] or {from, to}");
            }
        }
    }
    out.validate();
    return out;
}

/// Wireframe of a catalog solid under a frame; every edge solid.
inline DrawingDocument polytope_drawing(const PolytopeSpec& spec, const PlanarImage& img) {
    DrawingDocument doc;
    for (std::size_t i = 0; i < img.size(); ++i) {
        doc.points.push_back({std::to_string(i), img[i]});
    }
    for (const auto& [a, b] : spec.edges) {
        doc.edges.push_back({a, b, false});
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Sampling

struct Sample {
    PolytopeSpec spec;
    OrthoFrame frame;
    PlanarImage points;
};

/// Catalog solid under random_rotation(dim, seed), scaled, with the image
/// shifted by `translate`.
inline Sample sample_image(std::string_view shape, std::uint64_t seed, double scale = 1.0,
                           Complex translate = {0.0, 0.0}) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw Error(ErrorCode::InvalidInput, "scale must be positive");
    }
    Sample s;
    s.spec = catalog(shape);
    if (s.spec.dim < 2) {
        throw Error(ErrorCode::Dimension, "cannot sample a planar image of a 1-dimensional polytope");
    }
    s.frame.rotation = random_rotation(s.spec.dim, seed);
    s.frame.scale = scale;
    s.frame.translation = RealVector::Zero(s.spec.dim);
    s.frame.translation(0) = translate.real() / scale;
    s.frame.translation(1) = translate.imag() / scale;
    s.points = project_image(s.spec, s.frame);
    return s;
}

}  // namespace orthodraw::io
