#pragma once

// Reference polytopes and the complex image equations that characterise
// their orthographic images.

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "orthodraw/numeric.hpp"
#include "orthodraw/simplexform.hpp"

namespace orthodraw {

struct PolytopeSpec {
    std::string name;
    int dim = 0;
    RealMatrix vertices;  // dim x N, centroid at the origin
    std::vector<std::pair<int, int>> edges;

    int vertex_count() const { return static_cast<int>(vertices.cols()); }
};

namespace detail {

inline const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

inline RealMatrix from_columns(const std::vector<std::array<double, 3>>& cols) {
    RealMatrix m(3, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        for (int i = 0; i < 3; ++i) {
            m(i, static_cast<Eigen::Index>(j)) = cols[j][static_cast<std::size_t>(i)];
        }
    }
    return m;
}

/// The three cyclic permutations of each point.
inline std::vector<std::array<double, 3>> cyclic(const std::vector<std::array<double, 3>>& base) {
    std::vector<std::array<double, 3>> out;
    for (int shift = 0; shift < 3; ++shift) {
        for (const auto& p : base) {
            out.push_back({p[static_cast<std::size_t>(shift % 3)], p[static_cast<std::size_t>((shift + 1) % 3)],
                           p[static_cast<std::size_t>((shift + 2) % 3)]});
        }
    }
    return out;
}

/// (0, +-u, +-v) in sign order (+,+), (+,-), (-,+), (-,-).
inline std::vector<std::array<double, 3>> signed_pairs(double u, double v) {
    return {{0.0, u, v}, {0.0, u, -v}, {0.0, -u, v}, {0.0, -u, -v}};
}

/// Vertex k has coordinate i equal to +h if bit i of k is set, else -h.
inline RealMatrix binary_cube(double h) {
    RealMatrix m(3, 8);
    for (int k = 0; k < 8; ++k) {
        for (int i = 0; i < 3; ++i) {
            m(i, k) = (k >> i) & 1 ? h : -h;
        }
    }
    return m;
}

/// n x (n+1) Helmert rows: orthonormal and orthogonal to e, so A^t A = I - e e^t/(n+1).
inline RealMatrix regular_simplex(int n) {
    RealMatrix a = RealMatrix::Zero(n, n + 1);
    for (int k = 1; k <= n; ++k) {
        const double norm = std::sqrt(static_cast<double>(k) * (k + 1));
        for (int j = 0; j < k; ++j) {
            a(k - 1, j) = 1.0 / norm;
        }
        a(k - 1, k) = -static_cast<double>(k) / norm;
    }
    return a;
}

/// Pairs of vertices at the minimum pairwise distance.
inline std::vector<std::pair<int, int>> shortest_edges(const RealMatrix& v) {
    const int count = static_cast<int>(v.cols());
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < count; ++i) {
        for (int j = i + 1; j < count; ++j) {
            best = std::min(best, (v.col(i) - v.col(j)).norm());
        }
    }
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < count; ++i) {
        for (int j = i + 1; j < count; ++j) {
            if ((v.col(i) - v.col(j)).norm() <= best * (1.0 + 1e-9)) {
                edges.emplace_back(i, j);
            }
        }
    }
    return edges;
}

inline std::optional<int> parse_simplex_dim(std::string_view name) {
    std::string_view rest;
    if (name.rfind("simplex(", 0) == 0 && name.size() > 9 && name.back() == ')') {
        rest = name.substr(8, name.size() - 9);
    } else if (name.rfind("simplex", 0) == 0 && name.size() > 7) {
        rest = name.substr(7);
    } else {
        return std::nullopt;
    }
    int n = 0;
    for (char c : rest) {
        if (c < '0' || c > '9' || n > 1000) {
            return std::nullopt;
        }
        n = n * 10 + (c - '0');
    }
    if (n < 1) {
        return std::nullopt;
    }
    return n;
}

}  // namespace detail

inline std::vector<std::string> catalog_names() {
    return {"simplex(n)", "cube",         "tetrahedron_in_cube", "octahedron",
            "icosahedron", "dodecahedron", "cuboctahedron",       "square"};
}

/// Centered classical coordinates. "square" is the planar square
/// (alpha, beta, gamma, delta) in cyclic order; "tetrahedron" is an alias of
/// "tetrahedron_in_cube".
inline PolytopeSpec catalog(std::string_view name) {
    using detail::kGolden;
    PolytopeSpec spec;
    spec.name = std::string(name);
    spec.dim = 3;
    if (name == "cube") {
        spec.vertices = detail::binary_cube(0.5);
    } else if (name == "tetrahedron_in_cube" || name == "tetrahedron") {
        const RealMatrix cube = detail::binary_cube(0.5);
        spec.vertices.resize(3, 4);
        spec.vertices << cube.col(0), cube.col(3), cube.col(5), cube.col(6);
    } else if (name == "octahedron") {
        spec.vertices = detail::from_columns({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}});
    } else if (name == "icosahedron") {
        spec.vertices = detail::from_columns(detail::cyclic(detail::signed_pairs(1.0, kGolden))) /
                        std::sqrt(1.0 + kGolden * kGolden);
    } else if (name == "dodecahedron") {
        const RealMatrix cube = detail::binary_cube(1.0);
        const RealMatrix rest = detail::from_columns(detail::cyclic(detail::signed_pairs(1.0 / kGolden, kGolden)));
        spec.vertices.resize(3, 20);
        spec.vertices << cube, rest;
    } else if (name == "cuboctahedron") {
        spec.vertices = detail::from_columns(detail::cyclic({{1, 1, 0}, {1, -1, 0}, {-1, 1, 0}, {-1, -1, 0}}));
    } else if (name == "square") {
        spec.dim = 2;
        spec.vertices.resize(2, 4);
        spec.vertices << -0.5, 0.5, 0.5, -0.5,  //
            -0.5, -0.5, 0.5, 0.5;
    } else if (const auto n = detail::parse_simplex_dim(name)) {
        spec.name = "simplex(" + std::to_string(*n) + ")";
        spec.dim = *n;
        spec.vertices = detail::regular_simplex(*n);
    } else {
        throw Error(ErrorCode::Lookup, "unknown polytope '" + std::string(name) + "'");
    }
    spec.edges = detail::shortest_edges(spec.vertices);
    return spec;
}

enum class ImageEquationKind {
    CubeNeighbors,
    RegularTetrahedron,
    RegularSimplex,
    Platonic,
    DodecahedronNeighbors,
    Square,
    EquilateralTriangle,
};

constexpr std::array<std::pair<ImageEquationKind, std::string_view>, 7> kImageEquationNames{{
    {ImageEquationKind::CubeNeighbors, "cube_neighbors"},
    {ImageEquationKind::RegularTetrahedron, "regular_tetrahedron"},
    {ImageEquationKind::RegularSimplex, "regular_simplex"},
    {ImageEquationKind::Platonic, "platonic"},
    {ImageEquationKind::DodecahedronNeighbors, "dodecahedron_neighbors"},
    {ImageEquationKind::Square, "square"},
    {ImageEquationKind::EquilateralTriangle, "equilateral_triangle"},
}};

constexpr std::string_view to_string(ImageEquationKind kind) {
    for (const auto& [k, name] : kImageEquationNames) {
        if (k == kind) {
            return name;
        }
    }
    return "unknown";
}

inline std::optional<ImageEquationKind> parse_image_kind(std::string_view name) {
    for (const auto& [k, n] : kImageEquationNames) {
        if (n == name) {
            return k;
        }
    }
    return std::nullopt;
}

/// Required number of points, or nullopt when any count >= `min_points` works.
inline std::optional<std::size_t> expected_points(ImageEquationKind kind) {
    switch (kind) {
    case ImageEquationKind::CubeNeighbors:
    case ImageEquationKind::DodecahedronNeighbors:
    case ImageEquationKind::EquilateralTriangle: return 3;
    case ImageEquationKind::RegularTetrahedron:
    case ImageEquationKind::Square: return 4;
    case ImageEquationKind::RegularSimplex:
    case ImageEquationKind::Platonic: return std::nullopt;
    }
    return std::nullopt;
}

inline std::size_t min_points(ImageEquationKind kind) {
    if (auto n = expected_points(kind)) {
        return *n;
    }
    return kind == ImageEquationKind::RegularSimplex ? 2 : 1;
}

inline void check_point_count(ImageEquationKind kind, std::size_t count) {
    const auto expected = expected_points(kind);
    if ((expected && count != *expected) || count < min_points(kind)) {
        throw Error(ErrorCode::Dimension, std::string(to_string(kind)) + " expects " +
                                              (expected ? std::to_string(*expected)
                                                        : "at least " + std::to_string(min_points(kind))) +
                                              " points, got " + std::to_string(count));
    }
}

struct ImageResidual {
    Complex quadratic{0.0, 0.0};  // left minus right of the kind's equation
    std::vector<Complex> linear;  // affine relations (square only)
};

inline ImageResidual image_residual(ImageEquationKind kind, const PlanarImage& img) {
    check_point_count(kind, img.size());
    require_finite(img, "image");
    Complex sum{0.0, 0.0};
    Complex squares{0.0, 0.0};
    for (const auto& z : img) {
        sum += z;
        squares += z * z;
    }
    const double count = static_cast<double>(img.size());
    ImageResidual out;
    switch (kind) {
    case ImageEquationKind::CubeNeighbors: out.quadratic = squares; break;
    case ImageEquationKind::DodecahedronNeighbors:
        out.quadratic = sum * sum + (std::sqrt(5.0) - 1.0) * squares;
        break;
    case ImageEquationKind::Square:
        out.linear.push_back(img[0] - img[1] + img[2] - img[3]);
        [[fallthrough]];
    case ImageEquationKind::RegularTetrahedron:
    case ImageEquationKind::RegularSimplex:
    case ImageEquationKind::Platonic:
    case ImageEquationKind::EquilateralTriangle: out.quadratic = sum * sum - count * squares; break;
    }
    return out;
}

/// Passes iff |quadratic| <= tol.bound((sum |z_j|)^2) and every linear
/// relation satisfies |r| <= tol.bound(sum |z_j|).
inline Verdict image_verdict(ImageEquationKind kind, const PlanarImage& img,
                             const Tolerance& tol = image_tolerance()) {
    tol.validate();
    const ImageResidual r = image_residual(kind, img);
    double total = 0.0;
    for (const auto& z : img) {
        total += std::abs(z);
    }
    Verdict v;
    v.tolerance = tol;
    v.complex_residual = r.quadratic;
    v.residual = std::abs(r.quadratic);
    v.normalizer = total * total;
    v.threshold = tol.bound(v.normalizer);
    v.pass = v.residual <= v.threshold;
    if (!v.pass) {
        v.reason = "quadratic equation fails";
    }
    for (const auto& lin : r.linear) {
        if (std::abs(lin) > tol.bound(total)) {
            v.pass = false;
            v.reason = "linear relation fails";
        }
    }
    v.degenerate = total == 0.0;
    return v;
}

/// Orthonormal basis of the covectors c with sum c_j = 0 and V c = 0; each
/// annihilates every affine image of the vertex set. Gram-Schmidt over the
/// projected standard basis in index order.
inline std::vector<RealVector> affine_relations(const PolytopeSpec& spec) {
    const Eigen::Index count = spec.vertices.cols();
    RealMatrix constraints(spec.vertices.rows() + 1, count);
    constraints << spec.vertices, RealMatrix::Ones(1, count);
    const RealMatrix null_projector =
        RealMatrix::Identity(count, count) - pseudoinverse(constraints) * constraints;

    std::vector<RealVector> basis;
    for (Eigen::Index k = 0; k < count; ++k) {
        RealVector w = null_projector.col(k);
        for (int pass = 0; pass < 2; ++pass) {
            for (const auto& b : basis) {
                w -= b.dot(w) * b;
            }
        }
        const double norm = w.norm();
        if (norm > 1e-8) {
            basis.push_back(w / norm);
        }
    }
    return basis;
}

/// Applies the frame to the vertices and keeps the first two coordinates.
inline PlanarImage project_image(const PolytopeSpec& spec, const OrthoFrame& frame) {
    if (frame.dim() != spec.dim || frame.translation.size() != spec.dim) {
        throw Error(ErrorCode::Dimension, "frame dimension does not match " + spec.name);
    }
    if (spec.dim < 2) {
        throw Error(ErrorCode::Dimension, "cannot project a 1-dimensional polytope to the plane");
    }
    return from_real_rows(frame.project(spec.vertices, 2));
}

/// Edge images alpha, beta, gamma at vertex 0 of the catalog cube
/// (neighbours 1, 2 and 4).
inline PlanarImage cube_neighbor_edges(const PlanarImage& cube_image) {
    if (cube_image.size() != 8) {
        throw Error(ErrorCode::Dimension, "cube image needs 8 points");
    }
    return {cube_image[1] - cube_image[0], cube_image[2] - cube_image[0], cube_image[4] - cube_image[0]};
}

}  // namespace orthodraw
