// Command-line front end: convexity checks, sandwich verifications (scalar,
// weighted, discrete, matrix) and the built-in regression corpus, with
// deterministic JSON/CSV reports.
//
// Exit status: 0 when every requested verification passed, 1 when a
// verification was falsified or violated (the report carries the witness),
// 2 on usage or evaluation errors.

#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>

#include <CLI11.hpp>

#include "hhbounds/hhbounds.hpp"

namespace {

using namespace hhbounds;

struct Options {
    std::string fn;
    std::string weight;
    std::string box = "0,1";
    std::string matrix_a;
    std::string matrix_b;
    int rows = 0;
    int quad_nodes = 16;
    long trials = 10000;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    std::string direction = "convex";
    std::string format = "json";
    std::string out = "-";
    bool joint = false;
    bool parallel = false;
};

Direction parse_direction(const std::string& d) {
    return d == "concave" ? Direction::concave : Direction::convex;
}

bool write_output(const std::string& text, const std::string& out) {
    if (out == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        std::fputc('\n', stdout);
        return true;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::fprintf(stderr, "error: cannot open output file '%s'\n", out.c_str());
        return false;
    }
    f << text << '\n';
    return f.good();
}

// Report envelope shared by every command; body writes "results" plus any
// extra top-level members.
template <typename InputsFn, typename BodyFn>
std::string make_report(std::string_view command, InputsFn&& inputs, BodyFn&& body,
                        int exit_status) {
    JsonWriter w;
    w.begin_object();
    w.key("schema");
    w.value(1);
    w.key("command");
    w.value(command);
    w.key("inputs");
    w.begin_object();
    inputs(w);
    w.end_object();
    body(w);
    w.key("exit_status");
    w.value(exit_status);
    w.end_object();
    return w.str();
}

std::string csv_bounds_row(std::string_view name, const BoundsReport& r) {
    std::string out = "name,lower,mean,upper,quad_error,verified\n";
    out += std::string(name) + ',' + format_double(r.lower) + ',' + format_double(r.mean) + ',' +
           format_double(r.upper) + ',' + format_double(r.quad_error) + ',' +
           (r.verified ? "true" : "false") + '\n';
    return out;
}

Box box_for(const Expr& f, const std::string& spec) {
    Box box = parse_box_spec(spec);
    if (f.max_var_index() > box.dim())
        throw DimensionError("function references x" + std::to_string(f.max_var_index()) +
                             " but the box has dimension " + std::to_string(box.dim()));
    return box;
}

int cmd_sandwich(const Options& o) {
    Expr f = Expr::parse(o.fn);
    Box box = box_for(f, o.box);
    Direction dir = parse_direction(o.direction);
    BoundsReport r =
        hh_sandwich(f, box, QuadratureRule::gauss_legendre(o.quad_nodes), o.tolerance, dir);
    int status = r.verified ? 0 : 1;
    std::string text;
    if (o.format == "csv") {
        text = csv_bounds_row("sandwich", r);
        text.pop_back();
    } else {
        text = make_report(
            "sandwich",
            [&](JsonWriter& w) {
                w.key("fn");
                w.value(o.fn);
                w.key("box");
                w.value(o.box);
                w.key("quad_nodes");
                w.value(o.quad_nodes);
                w.key("tolerance");
                w.value(o.tolerance);
                w.key("direction");
                w.value(to_string(dir));
            },
            [&](JsonWriter& w) {
                w.key("results");
                w.begin_array();
                w.begin_object();
                w.key("check");
                w.value("sandwich");
                write_bounds_report_fields(w, r);
                w.end_object();
                w.end_array();
            },
            status);
    }
    return write_output(text, o.out) ? status : 2;
}

int cmd_check_convexity(const Options& o) {
    Expr f = Expr::parse(o.fn);
    Box box = box_for(f, o.box);
    ConvexityVerdict v = o.joint ? is_convex_fn(f, box, o.trials, o.tolerance, o.seed)
                                 : is_nfold_convex_fn(f, box, o.trials, o.tolerance, o.seed);
    int status = v.falsified() ? 1 : 0;
    std::string_view check = o.joint ? "joint_convexity" : "nfold_convexity";
    std::string text;
    if (o.format == "csv") {
        text = "name,status,trials_run,tolerance\n";
        text += std::string(check) + ',' + (v.falsified() ? "falsified" : "not_falsified") + ',' +
                std::to_string(v.trials_run) + ',' + format_double(v.tolerance);
    } else {
        text = make_report(
            "check-convexity",
            [&](JsonWriter& w) {
                w.key("fn");
                w.value(o.fn);
                w.key("box");
                w.value(o.box);
                w.key("trials");
                w.value(o.trials);
                w.key("tolerance");
                w.value(o.tolerance);
                w.key("seed");
                w.value(static_cast<unsigned long long>(o.seed));
                w.key("joint");
                w.value(o.joint);
            },
            [&](JsonWriter& w) {
                w.key("results");
                w.begin_array();
                w.begin_object();
                w.key("check");
                w.value(check);
                write_verdict_fields(w, v);
                w.end_object();
                w.end_array();
            },
            status);
    }
    return write_output(text, o.out) ? status : 2;
}

int cmd_fejer(const Options& o) {
    Expr f = Expr::parse(o.fn);
    Expr p = Expr::parse(o.weight);
    Box box = box_for(f, o.box);
    if (p.max_var_index() > box.dim())
        throw DimensionError("weight references x" + std::to_string(p.max_var_index()) +
                             " but the box has dimension " + std::to_string(box.dim()));
    Direction dir = parse_direction(o.direction);
    ConvexityVerdict sym = check_symmetry(p, box, o.trials, o.tolerance, o.seed);
    std::optional<BoundsReport> report;
    if (!sym.falsified())
        report = fejer_sandwich(f, p, box, QuadratureRule::gauss_legendre(o.quad_nodes),
                                o.tolerance, dir, o.trials, o.seed);
    int status = sym.falsified() ? 1 : (report->verified ? 0 : 1);
    std::string text;
    if (o.format == "csv") {
        if (report) {
            text = csv_bounds_row("fejer", *report);
            text.pop_back();
        } else {
            text = "name,lower,mean,upper,quad_error,verified\nfejer,,,,,false";
        }
    } else {
        text = make_report(
            "fejer",
            [&](JsonWriter& w) {
                w.key("fn");
                w.value(o.fn);
                w.key("weight");
                w.value(o.weight);
                w.key("box");
                w.value(o.box);
                w.key("quad_nodes");
                w.value(o.quad_nodes);
                w.key("trials");
                w.value(o.trials);
                w.key("tolerance");
                w.value(o.tolerance);
                w.key("seed");
                w.value(static_cast<unsigned long long>(o.seed));
                w.key("direction");
                w.value(to_string(dir));
            },
            [&](JsonWriter& w) {
                w.key("results");
                w.begin_array();
                w.begin_object();
                w.key("check");
                w.value("weight_symmetry");
                if (sym.falsified()) {
                    w.key("message");
                    w.value("weight falsified: " + sym.witness->detail);
                }
                write_verdict_fields(w, sym);
                w.end_object();
                if (report) {
                    w.begin_object();
                    w.key("check");
                    w.value("fejer_sandwich");
                    write_bounds_report_fields(w, *report);
                    w.end_object();
                }
                w.end_array();
            },
            status);
    }
    return write_output(text, o.out) ? status : 2;
}

int cmd_jensen(const Options& o) {
    Expr f = Expr::parse(o.fn);
    Box box = box_for(f, o.box);
    JensenBound endpoint;
    double min_gap = jensen_min_gap(f, box, o.trials, o.seed, &endpoint);
    int status = (min_gap >= -o.tolerance) ? 0 : 1;
    std::string text;
    if (o.format == "csv") {
        text = "name,lhs,rhs,gap,min_gap,instances,verified\n";
        text += "jensen," + format_double(endpoint.lhs) + ',' + format_double(endpoint.rhs) + ',' +
                format_double(endpoint.gap) + ',' + format_double(min_gap) + ',' +
                std::to_string(o.trials + 1) + ',' + (status == 0 ? "true" : "false");
    } else {
        text = make_report(
            "jensen",
            [&](JsonWriter& w) {
                w.key("fn");
                w.value(o.fn);
                w.key("box");
                w.value(o.box);
                w.key("trials");
                w.value(o.trials);
                w.key("tolerance");
                w.value(o.tolerance);
                w.key("seed");
                w.value(static_cast<unsigned long long>(o.seed));
            },
            [&](JsonWriter& w) {
                w.key("results");
                w.begin_array();
                w.begin_object();
                w.key("check");
                w.value("jensen");
                w.key("status");
                w.value(status == 0 ? "not_falsified" : "falsified");
                w.key("instances");
                w.value(o.trials + 1);
                w.key("min_gap");
                w.value(min_gap);
                w.key("endpoint_lhs");
                w.value(endpoint.lhs);
                w.key("endpoint_rhs");
                w.value(endpoint.rhs);
                w.key("endpoint_gap");
                w.value(endpoint.gap);
                w.end_object();
                w.end_array();
            },
            status);
    }
    return write_output(text, o.out) ? status : 2;
}

int cmd_matrix_sandwich(const Options& o) {
    if (o.rows < 1) throw InvariantError("matrix-sandwich requires --rows >= 1");
    Expr f = Expr::parse(o.fn);
    SquareMatrix a = parse_matrix_entries(o.rows, o.matrix_a);
    SquareMatrix b = parse_matrix_entries(o.rows, o.matrix_b);
    MatrixInterval iv(a, b);
    if (f.max_var_index() > o.rows * o.rows)
        throw DimensionError("matrix function references x" + std::to_string(f.max_var_index()) +
                             " but the flattened dimension is " + std::to_string(o.rows * o.rows));
    Direction dir = parse_direction(o.direction);
    auto mf = [&f](const SquareMatrix& m) { return f(flatten(m)); };
    BoundsReport r = matrix_hh_sandwich(mf, iv, QuadratureRule::gauss_legendre(o.quad_nodes),
                                        o.tolerance, dir);
    int status = r.verified ? 0 : 1;
    std::string text;
    if (o.format == "csv") {
        text = csv_bounds_row("matrix-sandwich", r);
        text.pop_back();
    } else {
        text = make_report(
            "matrix-sandwich",
            [&](JsonWriter& w) {
                w.key("fn");
                w.value(o.fn);
                w.key("rows");
                w.value(o.rows);
                w.key("matrix_a");
                w.value(o.matrix_a);
                w.key("matrix_b");
                w.value(o.matrix_b);
                w.key("quad_nodes");
                w.value(o.quad_nodes);
                w.key("tolerance");
                w.value(o.tolerance);
                w.key("direction");
                w.value(to_string(dir));
            },
            [&](JsonWriter& w) {
                w.key("results");
                w.begin_array();
                w.begin_object();
                w.key("check");
                w.value("matrix_sandwich");
                write_bounds_report_fields(w, r);
                w.end_object();
                w.end_array();
            },
            status);
    }
    return write_output(text, o.out) ? status : 2;
}

int cmd_corpus(const Options& o) {
    CorpusOptions copt;
    copt.seed = o.seed;
    copt.tolerance = o.tolerance;
    copt.quad_nodes = o.quad_nodes;
    copt.parallel = o.parallel;
    CorpusReport rep = run_corpus(builtin_corpus(), copt);
    int status = rep.failed == 0 ? 0 : 1;
    std::string text;
    if (o.format == "csv") {
        text = corpus_report_csv(rep);
        text.pop_back();
    } else {
        text = make_report(
            "corpus",
            [&](JsonWriter& w) {
                w.key("quad_nodes");
                w.value(o.quad_nodes);
                w.key("tolerance");
                w.value(o.tolerance);
                w.key("seed");
                w.value(static_cast<unsigned long long>(o.seed));
                w.key("parallel");
                w.value(o.parallel);
            },
            [&](JsonWriter& w) { write_corpus_results(w, rep); }, status);
    }
    return write_output(text, o.out) ? status : 2;
}

void add_common(CLI::App* cmd, Options& o, bool with_fn_box) {
    if (with_fn_box) {
        cmd->add_option("--fn", o.fn, "function source over x1..xn")->required();
        cmd->add_option("--box", o.box, "box spec 'lo,hi;lo,hi;...'");
    }
    cmd->add_option("--quad-nodes", o.quad_nodes, "Gauss-Legendre nodes per axis")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--trials", o.trials, "sampling trials / instances")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--tolerance", o.tolerance, "verification tolerance")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
    cmd->add_option("--out", o.out, "output path, or - for stdout");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bounds verification for coordinatewise convex functions on boxes"};
    app.require_subcommand(1);

    Options o;

    CLI::App* sandwich = app.add_subcommand("sandwich", "midpoint/mean/corner-average chain");
    add_common(sandwich, o, true);
    sandwich->add_option("--direction", o.direction, "convex or concave chain")
        ->check(CLI::IsMember({"convex", "concave"}));

    CLI::App* conv = app.add_subcommand("check-convexity", "coordinatewise convexity falsifier");
    add_common(conv, o, true);
    conv->add_flag("--joint", o.joint, "check joint convexity instead");

    CLI::App* fejer = app.add_subcommand("fejer", "weighted chain with a symmetric weight");
    add_common(fejer, o, true);
    fejer->add_option("--weight", o.weight, "weight source over x1..xn")->required();
    fejer->add_option("--direction", o.direction, "convex or concave chain")
        ->check(CLI::IsMember({"convex", "concave"}));

    CLI::App* jensen = app.add_subcommand("jensen", "discrete weighted-mean bound");
    add_common(jensen, o, true);

    CLI::App* matrix = app.add_subcommand("matrix-sandwich", "chain on a matrix interval");
    matrix->add_option("--fn", o.fn, "function source over x1..x{n^2}, row-major")->required();
    matrix->add_option("--rows", o.rows, "matrix order n")->required()->check(CLI::PositiveNumber);
    matrix->add_option("--matrix-a", o.matrix_a, "lower matrix, row-major comma-separated")
        ->required();
    matrix->add_option("--matrix-b", o.matrix_b, "upper matrix, row-major comma-separated")
        ->required();
    add_common(matrix, o, false);
    matrix->add_option("--direction", o.direction, "convex or concave chain")
        ->check(CLI::IsMember({"convex", "concave"}));

    CLI::App* corpus = app.add_subcommand("corpus", "run the built-in regression corpus");
    add_common(corpus, o, false);
    corpus->add_flag("--parallel", o.parallel, "run entries concurrently (same report)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sandwich->parsed()) return cmd_sandwich(o);
        if (conv->parsed()) return cmd_check_convexity(o);
        if (fejer->parsed()) return cmd_fejer(o);
        if (jensen->parsed()) return cmd_jensen(o);
        if (matrix->parsed()) return cmd_matrix_sandwich(o);
        if (corpus->parsed()) return cmd_corpus(o);
    } catch (const hhbounds::ParseError& e) {
        std::fprintf(stderr, "error: %s at bytes [%zu, %zu)\n", e.what(), e.span().start,
                     e.span().end);
        return 2;
    } catch (const hhbounds::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
