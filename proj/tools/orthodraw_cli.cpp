// orthodraw: command-line front end for the orthographic image library.
//
// Exit status: 0 pass / success, 1 fail (the input is not an image of the
// requested kind), 2 usage, parse or schema error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <numbers>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "orthodraw/io.hpp"

namespace {

using namespace orthodraw;
using io::json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kError = 2;

struct Options {
    std::string input = "-";
    std::string format = "json";
    std::string kind;
    std::string shape;
    std::string output;
    std::string angles;
    std::string translate = "0,0";
    double tol = 0.0;
    double scale = 1.0;
    std::uint64_t seed = 0;
    bool lift = false;
};

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::Parse, "cannot open '" + path + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_output(const Options& opt, const std::string& text) {
    if (opt.output.empty() || opt.output == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(opt.output, std::ios::binary);
    if (!out) {
        throw Error(ErrorCode::Parse, "cannot write '" + opt.output + "'");
    }
    out << text;
}

PlanarImage read_points(const Options& opt) {
    const std::string text = read_input(opt.input);
    if (io::parse_format(opt.format) == io::Format::Csv) {
        return io::detail::parse_csv_points(text);
    }
    const json doc = io::detail::parse_json_text(text);
    if (!doc.is_object() || !doc.contains("points")) {
        throw Error(ErrorCode::Schema, "expected an object with 'points'");
    }
    return io::detail::points_at(doc["points"], "points");
}

/// "re,im" (also used for the comma-separated angle list).
std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        out.push_back(io::detail::parse_csv_number(cell, 1));
    }
    if (out.size() != expected) {
        throw Error(ErrorCode::Parse, std::string(what) + ": expected " + std::to_string(expected) + " numbers");
    }
    return out;
}

int cmd_check(const Options& opt) {
    io::RequestOptions ro;
    if (!opt.kind.empty()) ro.kind = opt.kind;
    if (!opt.shape.empty()) ro.shape = opt.shape;
    if (opt.tol > 0.0) ro.tolerance = Tolerance{0.0, opt.tol};
    ro.want_lift = opt.lift;
    const io::CheckRequest req = io::parse_input(read_input(opt.input), io::parse_format(opt.format), ro);
    std::ostringstream out;
    const int status = io::run_check(req, out);
    write_output(opt, out.str());
    return status;
}

int cmd_complete_cube(const Options& opt) {
    const PlanarImage pts = read_points(opt);
    if (pts.size() != 2) {
        throw Error(ErrorCode::Schema, "complete-cube expects two points (alpha, beta)");
    }
    const auto [g1, g2] = complete_cube_vertex(pts[0], pts[1]);
    const json out{{"alpha", io::complex_json(pts[0])},
                   {"beta", io::complex_json(pts[1])},
                   {"gamma", json::array({io::complex_json(g1), io::complex_json(g2)})}};
    write_output(opt, out.dump(2) + "\n");
    return kPass;
}

int cmd_lift(const Options& opt) {
    const PlanarImage pts = read_points(opt);
    const Tolerance tol = opt.tol > 0.0 ? Tolerance{0.0, opt.tol} : image_tolerance();
    OrthoFrame frame;
    if (opt.shape.empty() || opt.shape == "cube") {
        frame = lift_cube(pts, tol);
    } else {
        const PolytopeSpec spec = catalog(opt.shape);
        if (spec.vertex_count() != spec.dim + 1) {
            throw Error(ErrorCode::Schema, "lift --shape needs a simplex, got '" + opt.shape + "'");
        }
        if (static_cast<int>(pts.size()) != spec.vertex_count()) {
            throw Error(ErrorCode::Schema, "expected " + std::to_string(spec.vertex_count()) + " points");
        }
        const Tolerance lift_tol{1e-9, std::max(1e-9, tol.relative)};
        frame = lift_image(to_real_rows(pts), SimplexVertices(spec.vertices), lift_tol, LiftMode::Similar);
    }
    write_output(opt, json{{"frame", io::frame_json(frame)}}.dump(2) + "\n");
    return kPass;
}

int cmd_foci(const Options& opt) {
    const auto [f1, f2] = image_foci(read_points(opt));
    write_output(opt, json{{"foci", json::array({io::complex_json(f1), io::complex_json(f2)})}}.dump(2) + "\n");
    return kPass;
}

int cmd_foreshorten(const Options& opt) {
    const std::vector<double> deg = parse_list(opt.angles, 3, "--angles");
    AxisTriple axes;
    for (std::size_t k = 0; k < 3; ++k) {
        axes.angles[k] = deg[k] * std::numbers::pi / 180.0;
    }
    const AxisTriple solved = foreshorten_from_axes(axes);
    const auto& l = *solved.lengths;
    write_output(opt, json{{"angles_deg", deg}, {"lengths", {l[0], l[1], l[2]}}}.dump(2) + "\n");
    return kPass;
}

int cmd_catalog(const Options& opt) {
    if (opt.shape.empty()) {
        write_output(opt, json{{"shapes", catalog_names()}}.dump(2) + "\n");
        return kPass;
    }
    const PolytopeSpec spec = catalog(opt.shape);
    json edges = json::array();
    for (const auto& [a, b] : spec.edges) {
        edges.push_back({a, b});
    }
    const json out{{"name", spec.name},
                   {"dim", spec.dim},
                   {"vertex_count", spec.vertex_count()},
                   {"vertices", io::matrix_json(spec.vertices)},
                   {"edges", edges}};
    write_output(opt, out.dump(2) + "\n");
    return kPass;
}

int cmd_sample(const Options& opt) {
    if (opt.shape.empty()) {
        throw Error(ErrorCode::Schema, "sample needs --shape");
    }
    const std::vector<double> t = parse_list(opt.translate, 2, "--translate");
    const io::Sample s = io::sample_image(opt.shape, opt.seed, opt.scale, Complex{t[0], t[1]});
    if (io::parse_format(opt.format) == io::Format::Csv) {
        write_output(opt, io::points_csv(s.points));
    } else {
        const json out{{"shape", s.spec.name},
                       {"seed", opt.seed},
                       {"points", io::points_json(s.points)},
                       {"frame", io::frame_json(s.frame)}};
        write_output(opt, out.dump(2) + "\n");
    }
    return kPass;
}

int cmd_render(const Options& opt) {
    io::DrawingDocument doc;
    if (!opt.shape.empty()) {
        const io::Sample s = io::sample_image(opt.shape, opt.seed, opt.scale);
        doc = io::polytope_drawing(s.spec, s.points);
    } else {
        const std::string text = read_input(opt.input);
        const json in = io::detail::parse_json_text(text);
        if (in.is_object() && in.value("kind", "") == "cube_neighbors") {
            const PlanarImage edges = io::detail::points_at(in["points"], "points");
            check_point_count(ImageEquationKind::CubeNeighbors, edges.size());
            doc = io::cube_drawing(edges);
        } else {
            doc = io::drawing_from_json(in);
        }
    }
    write_output(opt, io::render_svg(doc));
    return kPass;
}

int exit_code_for(const Error& e) {
    switch (e.code()) {
    case ErrorCode::NotEutactic:
    case ErrorCode::NotAnImage:
    case ErrorCode::NotACubeImage:
    case ErrorCode::InvalidAxes: return kFail;
    default: return kError;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthographic images of polytopes as complex numbers"};
    app.require_subcommand(1);
    Options opt;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("input", opt.input, "Input file ('-' for stdin)");
        sub->add_option("--format", opt.format, "Input format")->check(CLI::IsMember({"json", "csv"}));
    };
    auto add_output = [&](CLI::App* sub) { sub->add_option("-o,--output", opt.output, "Output file"); };

    auto* check = app.add_subcommand("check", "Test whether points are an orthographic image");
    add_input(check);
    add_output(check);
    check->add_option("--kind", opt.kind, "Image equation kind (required for CSV)");
    check->add_option("--shape", opt.shape, "Catalog simplex for kind 'simplex'");
    check->add_option("--tol", opt.tol, "Relative tolerance")->check(CLI::PositiveNumber);
    check->add_flag("--lift", opt.lift, "Report a recovered pose on success");

    auto* complete = app.add_subcommand("complete-cube", "Third edge image from two (both roots)");
    add_input(complete);
    add_output(complete);

    auto* lift = app.add_subcommand("lift", "Recover a pose from cube edge images or a simplex image");
    add_input(lift);
    add_output(lift);
    lift->add_option("--shape", opt.shape, "Catalog simplex to lift (default: cube edges)");
    lift->add_option("--tol", opt.tol, "Relative tolerance")->check(CLI::PositiveNumber);

    auto* foci = app.add_subcommand("foci", "Foci of the image ellipse");
    add_input(foci);
    add_output(foci);

    auto* foreshorten = app.add_subcommand("foreshorten", "Foreshortening ratios from three axis directions");
    foreshorten->add_option("--angles", opt.angles, "Axis directions in degrees, e.g. 90,210,330")->required();
    add_output(foreshorten);

    auto* cat = app.add_subcommand("catalog", "List shapes or print one");
    cat->add_option("--shape", opt.shape, "Shape name");
    add_output(cat);

    auto* sample = app.add_subcommand("sample", "Random orthographic image of a catalog shape");
    sample->add_option("--shape", opt.shape, "Shape name")->required();
    sample->add_option("--seed", opt.seed, "Rotation seed");
    sample->add_option("--scale", opt.scale, "Uniform scale")->check(CLI::PositiveNumber);
    sample->add_option("--translate", opt.translate, "Image translation re,im");
    sample->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    add_output(sample);

    auto* render = app.add_subcommand("render", "SVG line drawing");
    render->add_option("input", opt.input, "Drawing document or cube edge request ('-' for stdin)");
    render->add_option("--shape", opt.shape, "Render a sampled catalog shape instead");
    render->add_option("--seed", opt.seed, "Rotation seed for --shape");
    render->add_option("--scale", opt.scale, "Uniform scale for --shape")->check(CLI::PositiveNumber);
    add_output(render);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kError;
    }

    try {
        if (check->parsed()) return cmd_check(opt);
        if (complete->parsed()) return cmd_complete_cube(opt);
        if (lift->parsed()) return cmd_lift(opt);
        if (foci->parsed()) return cmd_foci(opt);
        if (foreshorten->parsed()) return cmd_foreshorten(opt);
        if (cat->parsed()) return cmd_catalog(opt);
        if (sample->parsed()) return cmd_sample(opt);
        if (render->parsed()) return cmd_render(opt);
    } catch (const Error& e) {
        std::cerr << "orthodraw: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "orthodraw: " << e.what() << "\n";
        return kError;
    }
    return kError;
}
