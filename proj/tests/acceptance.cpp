// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <sys/wait.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "support.hpp"

#ifndef ORTHODRAW_CLI
#error "ORTHODRAW_CLI must name the command-line binary"
#endif

namespace {

using namespace orthodraw;
using namespace orthodraw::testing;
using K = ImageEquationKind;
constexpr double kDeg = std::numbers::pi / 180.0;

struct Outcome {
    bool pass = true;
    std::string detail;
    double worst = 0.0;  // largest observed error, reported for context
    std::string note;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) {
            pass = false;
            detail = what;
        }
    }
    void bound(double value, double limit, const std::string& what) {
        worst = std::max(worst, value);
        if (!(value <= limit)) {
            std::ostringstream ss;
            ss << what << ": " << value << " > " << limit;
            require(false, ss.str());
        }
    }
};

double cube_defect(const PlanarImage& z) { return std::abs(z[0] * z[0] + z[1] * z[1] + z[2] * z[2]); }

double max_modulus(const PlanarImage& z) {
    double s = 0.0;
    for (const auto& x : z) {
        s = std::max(s, std::abs(x));
    }
    return s;
}

int cli_exit_code(const std::string& stdin_text) {
    namespace fs = std::filesystem;
    const fs::path in = fs::temp_directory_path() / ("orthodraw_acceptance_" + std::to_string(::getpid()) + ".json");
    std::ofstream(in) << stdin_text;
    const std::string cmd = std::string("'") + ORTHODRAW_CLI + "' check < '" + in.string() + "' > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    fs::remove(in);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome ac1(double& library_ms) {
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    const PlanarImage z = integer_cube();
    const Complex r = complex_residual(z);
    const Verdict v = image_verdict(K::CubeNeighbors, z);
    library_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    o.bound(std::abs(r), 1e-12, "integer cube residual");
    o.require(v.pass, "integer cube verdict");
    o.require(library_ms < 1.0, "in-process check took " + std::to_string(library_ms) + " ms");
    char note[64];
    std::snprintf(note, sizeof note, " check=%.4fms", library_ms);
    o.note = note;
    const int code = cli_exit_code(R"({"kind":"cube_neighbors","points":[[2,-26],[-23,2],[14,7]]})");
    o.require(code == 0, "CLI check exit code " + std::to_string(code));
    return o;
}

Outcome ac2() {
    Outcome o;
    const PlanarImage z{0.0, 1.0, kI};
    const Complex s = z[0] + z[1] + z[2];
    o.bound(std::abs(s * s - Complex(0.0, 2.0)), 1e-15, "(a+b+c)^2 - 2i");
    o.bound(std::abs(complex_residual(z)), 1e-15, "a^2+b^2+c^2");
    return o;
}

Outcome ac3() {
    Outcome o;
    const double r5 = std::sqrt(5.0);
    const Complex alpha{(r5 - 1.0) / 4.0, (r5 + 1.0) / 4.0};
    const PlanarImage z{alpha, -1.0, std::conj(alpha)};
    const Complex s = z[0] + z[1] + z[2];
    const Complex q = z[0] * z[0] + z[1] * z[1] + z[2] * z[2];
    o.bound(std::abs(s * s - (7.0 - 3.0 * r5) / 2.0), 1e-12, "(a+b+c)^2");
    o.bound(std::abs(q - (2.0 - r5) / 2.0), 1e-12, "a^2+b^2+c^2");
    o.bound(std::abs(image_residual(K::DodecahedronNeighbors, z).quadratic), 1e-12, "combined residual");
    return o;
}

Outcome ac4() {
    Outcome o;
    Rng rng(1001);
    for (int n = 3; n <= 8; ++n) {
        for (int trial = 0; trial < 500; ++trial) {
            const double mu = rng.uniform(0.1, 10.0);
            const RealMatrix v = mu * random_rotation(n, rng.seed()).topRows(2);
            const PlanarImage z = planar(v);
            double norms = 0.0;
            for (const auto& x : z) {
                norms += std::norm(x);
            }
            o.bound(std::abs(complex_residual(z)) / norms, 1e-9, "relative complex residual");
            o.require(eutaxy_check(VectorSystem(v)).eutactic(), "eutaxy_check on rotation rows, n=" + std::to_string(n));
        }
    }
    for (int trial = 0; trial < 500; ++trial) {
        const int n = 3 + trial % 6;
        const PlanarImage z = planar(rng.uniform(0.1, 10.0) * random_rotation(n, rng.seed()));
        const PlanarImage bad = perturbed(z, 1e-2, rng);
        o.require(!eutaxy_check(VectorSystem::from_image(bad)).eutactic(), "perturbed system accepted");
    }
    return o;
}

Outcome ac5() {
    Outcome o;
    Rng rng(1002);
    for (int trial = 0; trial < 200; ++trial) {
        const int n = 2 + trial % 4;
        const int m = rng.integer(1, n);
        const RealMatrix a = random_simplex(n, rng);
        OrthoFrame f = random_frame(n, rng);
        f.scale = 1.0;
        const RealMatrix b = f.project(a, m);
        const ShapeForm form = shape_form(SimplexVertices(a));
        o.require(congruent_image_test(b, form, Tolerance{0.0, 1e-9}).pass, "congruent_image_test");
        const OrthoFrame g = lift_image(b, SimplexVertices(a));
        o.bound((g.project(centered(a), m) - b).norm(), 1e-8, "lift reprojection");

        const RealMatrix c = centered(a);
        const RealMatrix q = form.matrix();
        const RealMatrix gram = c.transpose() * c;
        o.bound(max_abs(q * RealVector::Ones(n + 1)), 1e-9, "Qe");
        o.bound(max_abs(q * gram - centering_projector(n + 1)), 1e-9, "QA^tA - S");
        o.bound(max_abs(q - pseudoinverse(gram)), 1e-9, "Q - pinv(gram)");
    }
    return o;
}

Outcome ac6() {
    Outcome o;
    Rng rng(1003);
    for (const char* name : {"tetrahedron_in_cube", "cube", "octahedron", "icosahedron", "dodecahedron",
                             "cuboctahedron"}) {
        const PolytopeSpec spec = catalog(name);
        for (int trial = 0; trial < 200; ++trial) {
            const PlanarImage z = project_image(spec, random_frame(3, rng));
            const double t = total_modulus(z);
            o.bound(std::abs(image_residual(K::Platonic, z).quadratic) / (t * t), 1e-9, name);
        }
    }
    return o;
}

Outcome ac7() {
    Outcome o;
    Rng rng(1004);
    for (int n = 2; n <= 6; ++n) {
        const PolytopeSpec spec = catalog("simplex(" + std::to_string(n) + ")");
        for (int trial = 0; trial < 200; ++trial) {
            const PlanarImage z = project_image(spec, random_frame(n, rng));
            Complex s{0.0, 0.0}, q{0.0, 0.0};
            for (const auto& x : z) {
                s += x;
                q += x * x;
            }
            const double t = total_modulus(z);
            o.bound(std::abs(s * s - static_cast<double>(n + 1) * q) / (t * t), 1e-9,
                    "simplex(" + std::to_string(n) + ")");
            o.require(image_verdict(K::RegularSimplex, z).pass, "regular simplex verdict");
        }
    }
    int rejected = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const PlanarImage z{rng.complex_normal(), rng.complex_normal(), rng.complex_normal()};
        const double a = std::abs(z[0] - z[1]), b = std::abs(z[1] - z[2]), c = std::abs(z[2] - z[0]);
        o.require(std::max({a, b, c}) - std::min({a, b, c}) > 1e-6 * std::max({a, b, c}), "generator gave equilateral");
        rejected += image_verdict(K::EquilateralTriangle, z).pass ? 0 : 1;
    }
    o.require(rejected == 100, std::to_string(100 - rejected) + " non-equilateral triples accepted");
    return o;
}

Outcome ac8() {
    Outcome o;
    const PlanarImage f = integer_cube();
    const auto [g1, g2] = complete_cube_vertex(f[0], f[1]);
    o.bound(std::min(std::abs(g1 - f[2]) + std::abs(g2 + f[2]), std::abs(g1 + f[2]) + std::abs(g2 - f[2])), 1e-12,
            "complete_cube_vertex");

    Rng rng(1005);
    for (int trial = 0; trial < 1000; ++trial) {
        const Complex z = rng.complex_log_uniform(1e-3, 1e3);
        if (z.imag() == 0.0) {
            continue;
        }
        const Complex w = principal_sqrt(z);
        o.bound(std::abs(geometric_sqrt(z) - w) / std::max(1.0, std::abs(w)), 1e-10, "geometric_sqrt");
    }
    for (int trial = 0; trial < 1000; ++trial) {
        const PlanarImage z = cube_neighbor_edges(project_image(catalog("cube"), random_frame(3, rng)));
        const auto [a, b] = ab_from_cube_image(z);
        const PlanarImage back = cube_image_from_ab(a, b);
        for (std::size_t k = 0; k < 3; ++k) {
            o.bound(std::abs(back[k] - z[k]) / max_modulus(z), 1e-11, "ab roundtrip");
        }
    }
    AxisTriple iso;
    iso.angles = {90 * kDeg, 210 * kDeg, 330 * kDeg};
    const AxisTriple t = foreshorten_from_axes(iso);
    o.require(t.lengths.has_value(), "isometric axes have lengths");
    if (t.lengths) {
        const auto& l = *t.lengths;
        o.bound(std::max({std::abs(l[0] - l[1]), std::abs(l[1] - l[2]), std::abs(l[2] - l[0])}), 1e-12,
                "isometric lengths");
    }
    return o;
}

Outcome ac9() {
    Outcome o;
    Rng rng(1006);
    for (int trial = 0; trial < 1000; ++trial) {
        const Complex alpha{rng.uniform(-2.0, 0.9), rng.uniform(0.1, 2.0)};
        const SchmidDiagram d = schmid_points(alpha);
        const Complex s = d.alpha * d.alpha + d.beta * d.beta;
        o.bound(std::abs(s.imag()), 1e-12, "Im(alpha^2+beta^2)");
        const Complex sum = alpha + std::conj(alpha);
        const Complex closed = 4.0 * (alpha - 1.0) * std::conj(alpha - 1.0) * (sum - 1.0) / ((sum - 2.0) * (sum - 2.0));
        o.bound(std::abs(s - closed) / std::max(1.0, std::abs(closed)), 1e-12, "closed form");
    }

    auto worst_difference = [](const PlanarImage& z) {
        const WeisbachResiduals w = weisbach_residuals(z);
        double worst = 0.0;
        for (double d : w.differences) {
            worst = std::max(worst, std::abs(d));
        }
        return worst;
    };
    o.bound(worst_difference(integer_cube()), 1e-12, "Weisbach on integer cube");
    o.bound(worst_difference(isometric_cube()), 1e-12, "Weisbach on isometric cube");
    for (int trial = 0; trial < 200; ++trial) {
        const PlanarImage z = cube_neighbor_edges(project_image(catalog("cube"), random_frame(3, rng)));
        try {
            o.bound(worst_difference(z), 1e-8, "Weisbach on random cube image");
        } catch (const Error& e) {
            o.require(e.code() == ErrorCode::UndefinedRatio, "unexpected Weisbach error");
        }
    }
    const PlanarImage non_example{std::polar(1.0, 90 * kDeg), std::polar(1.0, 210 * kDeg),
                                  std::polar(0.5, 330 * kDeg)};
    o.require(cube_defect(non_example) > 0.1, "non-example is not a cube image");
    o.require(worst_difference(non_example) > 0.05, "Weisbach on non-example");
    return o;
}

Outcome ac10() {
    Outcome o;
    Rng rng(1007);
    for (int trial = 0; trial < 100; ++trial) {
        const RealMatrix pts = centered(rng.gaussian(3, rng.integer(4, 12)));
        const PlanarImage z = planar(random_rotation(3, rng.seed()) * pts);
        const auto [f1, f2] = image_foci(z);
        const auto [e1, e2] = eigen_foci(z);
        o.bound(std::max(std::abs(f1 - e1), std::abs(f2 - e2)), 1e-9, "foci vs scatter eigenstructure");
    }
    // exactly representable images: the integer cube and the solids under the
    // rotation group of the cube at power-of-two scales
    const auto [c1, c2] = image_foci(integer_cube());
    o.bound(std::max(std::abs(c1), std::abs(c2)), 1e-9, "integer cube");
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const char* name : {"tetrahedron_in_cube", "cube", "octahedron", "icosahedron", "dodecahedron",
                             "cuboctahedron"}) {
        const PolytopeSpec spec = catalog(name);
        for (const auto& p : perms) {
            for (int signs = 0; signs < 8; ++signs) {
                OrthoFrame f;
                f.rotation = RealMatrix::Zero(3, 3);
                for (int k = 0; k < 3; ++k) {
                    f.rotation(k, p[k]) = (signs >> k & 1) ? -1.0 : 1.0;
                }
                if (f.rotation.determinant() < 0.0) {
                    continue;
                }
                f.translation = RealVector::Zero(3);
                for (double scale : {0.5, 1.0, 2.0}) {
                    f.scale = scale;
                    const auto [f1, f2] = image_foci(project_image(spec, f));
                    o.bound(std::max(std::abs(f1), std::abs(f2)), 1e-9, name);
                }
            }
        }
    }
    // random orientations: reported only, rounding of the image puts the
    // foci near sqrt(eps) times the image size
    double random_worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        OrthoFrame f = random_frame(3, rng, 1.0, 1.0);
        f.translation = RealVector::Zero(3);
        const auto [f1, f2] = image_foci(project_image(catalog("dodecahedron"), f));
        random_worst = std::max(random_worst, std::abs(f1));
    }
    char note[96];
    std::snprintf(note, sizeof note, " random-orientation solid foci=%.2g", random_worst);
    o.note = note;
    return o;
}

void report(const char* id, double limit_ms, const std::function<Outcome()>& body, int& failures) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (limit_ms > 0.0 && ms > limit_ms) {
        o.require(false, "runtime " + std::to_string(ms) + " ms over " + std::to_string(limit_ms) + " ms");
    }
    std::printf("%s %s worst=%.3g time=%.1fms%s%s%s\n", o.pass ? "PASS" : "FAIL", id, o.worst, ms,
                o.note.c_str(), o.pass ? "" : " : ", o.detail.c_str());
    failures += o.pass ? 0 : 1;
}

}  // namespace

int main() {
    int failures = 0;
    double ac1_library_ms = 0.0;
    report("AC1", 0.0, [&] { return ac1(ac1_library_ms); }, failures);
    report("AC2", 0.0, ac2, failures);
    report("AC3", 0.0, ac3, failures);
    report("AC4", 5000.0, ac4, failures);
    report("AC5", 5000.0, ac5, failures);
    report("AC6", 3000.0, ac6, failures);
    report("AC7", 0.0, ac7, failures);
    report("AC8", 0.0, ac8, failures);
    report("AC9", 0.0, ac9, failures);
    report("AC10", 0.0, ac10, failures);
    std::printf("%s: %d of 10 criteria failed\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
    return failures == 0 ? 0 : 1;
}
