#pragma once

#include <algorithm>
#include <cstdint>
#include <future>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hhbounds/box.hpp"
#include "hhbounds/convexity.hpp"
#include "hhbounds/errors.hpp"
#include "hhbounds/expr.hpp"
#include "hhbounds/hh.hpp"
#include "hhbounds/matrix.hpp"
#include "hhbounds/quadrature.hpp"
#include "hhbounds/textio.hpp"

namespace hhbounds {

enum class CorpusKind {
    sandwich,
    fejer,
    jensen,
    matrix_sandwich,
    separation,
    defining_inequality,
    lemma_majorization,
};

inline std::string_view to_string(CorpusKind k) {
    switch (k) {
        case CorpusKind::sandwich: return "sandwich";
        case CorpusKind::fejer: return "fejer";
        case CorpusKind::jensen: return "jensen";
        case CorpusKind::matrix_sandwich: return "matrix_sandwich";
        case CorpusKind::separation: return "separation";
        case CorpusKind::defining_inequality: return "defining_inequality";
        case CorpusKind::lemma_majorization: return "lemma_majorization";
    }
    return "?";
}

// One self-checking regression case. The provenance note says which
// mathematical fact the entry exercises.
struct CorpusEntry {
    std::string name;
    CorpusKind kind = CorpusKind::sandwich;
    std::string fn;
    std::string weight;  // fejer only
    std::string box;     // axis spec "lo,hi;..."
    int rows = 0;        // matrix_sandwich only
    std::string matrix_a;
    std::string matrix_b;
    Direction direction = Direction::convex;
    bool expect_verified = true;         // sandwich-like kinds
    bool expect_nfold_falsified = false; // separation
    bool expect_joint_falsified = false; // separation
    std::string provenance;
};

struct EntryResult {
    std::string name;
    CorpusKind kind = CorpusKind::sandwich;
    bool pass = false;
    std::string message;
    std::string provenance;
    std::optional<BoundsReport> report;
    std::optional<JensenBound> endpoint;
    std::optional<ConvexityVerdict> nfold;
    std::optional<ConvexityVerdict> joint;
    std::optional<double> min_gap;
    long samples = 0;
};

struct CorpusReport {
    std::vector<EntryResult> entries;
    int passed = 0;
    int failed = 0;
};

struct CorpusOptions {
    std::uint64_t seed = 0;
    double tolerance = 1e-9;
    int quad_nodes = 16;
    bool parallel = false;
};

// Endpoint instance: the two interval endpoints per coordinate with equal
// weights, so lhs/rhs coincide with the midpoint value and corner average.
inline JensenInstance jensen_endpoint_instance(const Box& box) {
    const int n = box.dim();
    std::vector<std::vector<double>> pts(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> wts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        pts[static_cast<std::size_t>(i)] = {box.lower()[i], box.upper()[i]};
        wts[static_cast<std::size_t>(i)] = {0.5, 0.5};
    }
    return JensenInstance(std::move(pts), std::move(wts));
}

// Random instance with 1..max_points points per coordinate, points inside
// the box axis, weights normalized to sum 1.
inline JensenInstance jensen_random_instance(Sampler& s, const Box& box, int max_points = 4) {
    const int n = box.dim();
    std::vector<std::vector<double>> rp(static_cast<std::size_t>(n));
    std::vector<std::vector<double>> rw(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto m = static_cast<std::size_t>(1 + s.below(static_cast<std::uint64_t>(max_points)));
        std::vector<double> p(m), w(m);
        double sum = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            p[j] = s.uniform(box.lower()[i], box.upper()[i]);
            w[j] = s.unit();
            sum += w[j];
        }
        if (sum <= 0.0) {
            for (std::size_t j = 0; j < m; ++j) w[j] = 1.0 / static_cast<double>(m);
        } else {
            for (std::size_t j = 0; j < m; ++j) w[j] /= sum;
        }
        rp[static_cast<std::size_t>(i)] = std::move(p);
        rw[static_cast<std::size_t>(i)] = std::move(w);
    }
    return JensenInstance(std::move(rp), std::move(rw));
}

// Smallest gap over the endpoint instance plus `instances` random ones.
template <ScalarField F>
double jensen_min_gap(const F& f, const Box& box, long instances, std::uint64_t seed,
                      JensenBound* endpoint_out = nullptr) {
    JensenBound endpoint = jensen_bound(f, jensen_endpoint_instance(box));
    if (endpoint_out) *endpoint_out = endpoint;
    double min_gap = endpoint.gap;
    Sampler s(seed);
    for (long k = 0; k < instances; ++k)
        min_gap = std::min(min_gap, jensen_bound(f, jensen_random_instance(s, box)).gap);
    return min_gap;
}

namespace detail {

inline constexpr long corpus_separation_nfold_trials = 20000;
inline constexpr long corpus_separation_joint_trials = 2000;
inline constexpr long corpus_gap_samples = 1000;
inline constexpr long corpus_jensen_instances = 200;
inline constexpr long corpus_symmetry_trials = 1000;

inline Box entry_box(const CorpusEntry& e, const Expr& f) {
    Box box = parse_box_spec(e.box);
    if (f.max_var_index() > box.dim())
        throw DimensionError("function references x" + std::to_string(f.max_var_index()) +
                             " but the box has dimension " + std::to_string(box.dim()));
    return box;
}

inline std::string margin_message(const BoundsReport& r) {
    return "left_margin=" + format_double(r.left_margin) +
           ", right_margin=" + format_double(r.right_margin) +
           ", quad_error=" + format_double(r.quad_error);
}

inline void run_sandwich_entry(const CorpusEntry& e, const CorpusOptions& opt, EntryResult& out) {
    Expr f = Expr::parse(e.fn);
    Box box = entry_box(e, f);
    BoundsReport r =
        hh_sandwich(f, box, QuadratureRule::gauss_legendre(opt.quad_nodes), opt.tolerance,
                    e.direction);
    out.report = r;
    out.pass = (r.verified == e.expect_verified);
    if (!out.pass)
        out.message = r.verified ? "sandwich unexpectedly verified"
                                 : "sandwich not verified: " + margin_message(r);
}

inline void run_fejer_entry(const CorpusEntry& e, const CorpusOptions& opt, EntryResult& out) {
    Expr f = Expr::parse(e.fn);
    Expr p = Expr::parse(e.weight);
    Box box = entry_box(e, f);
    if (p.max_var_index() > box.dim())
        throw DimensionError("weight references a variable beyond the box dimension");
    BoundsReport r = fejer_sandwich(f, p, box, QuadratureRule::gauss_legendre(opt.quad_nodes),
                                    opt.tolerance, e.direction, corpus_symmetry_trials, opt.seed);
    out.report = r;
    out.pass = (r.verified == e.expect_verified);
    if (!out.pass)
        out.message = r.verified ? "sandwich unexpectedly verified"
                                 : "sandwich not verified: " + margin_message(r);
}

inline void run_jensen_entry(const CorpusEntry& e, const CorpusOptions& opt, EntryResult& out) {
    Expr f = Expr::parse(e.fn);
    Box box = entry_box(e, f);
    JensenBound endpoint;
    double min_gap = jensen_min_gap(f, box, corpus_jensen_instances, opt.seed, &endpoint);
    out.endpoint = endpoint;
    out.min_gap = min_gap;
    out.samples = 1 + corpus_jensen_instances;
    out.pass = (min_gap >= -opt.tolerance);
    if (!out.pass) out.message = "jensen gap below tolerance: " + format_double(min_gap);
}

inline void run_matrix_entry(const CorpusEntry& e, const CorpusOptions& opt, EntryResult& out) {
    Expr f = Expr::parse(e.fn);
    SquareMatrix a = parse_matrix_entries(e.rows, e.matrix_a);
    SquareMatrix b = parse_matrix_entries(e.rows, e.matrix_b);
    MatrixInterval iv(a, b);
    if (f.max_var_index() > e.rows * e.rows)
        throw DimensionError("matrix function references a variable beyond n^2");
    auto mf = [&f](const SquareMatrix& m) { return f(flatten(m)); };
    BoundsReport r = matrix_hh_sandwich(mf, iv, QuadratureRule::gauss_legendre(opt.quad_nodes),
                                        opt.tolerance, e.direction);
    out.report = r;
    out.pass = (r.verified == e.expect_verified);
    if (!out.pass)
        out.message = r.verified ? "sandwich unexpectedly verified"
                                 : "sandwich not verified: " + margin_message(r);
}

inline void run_separation_entry(const CorpusEntry& e, const CorpusOptions& opt,
                                 EntryResult& out) {
    Expr f = Expr::parse(e.fn);
    Box box = entry_box(e, f);
    ConvexityVerdict nfold =
        is_nfold_convex_fn(f, box, corpus_separation_nfold_trials, opt.tolerance, opt.seed);
    ConvexityVerdict joint =
        is_convex_fn(f, box, corpus_separation_joint_trials, opt.tolerance, opt.seed);
    out.nfold = nfold;
    out.joint = joint;
    out.pass = (nfold.falsified() == e.expect_nfold_falsified) &&
               (joint.falsified() == e.expect_joint_falsified);
    if (!out.pass)
        out.message = std::string("coordinatewise ") +
                      (nfold.falsified() ? "falsified" : "not falsified") + ", joint " +
                      (joint.falsified() ? "falsified" : "not falsified");
}

inline void run_defining_entry(const CorpusEntry& e, const CorpusOptions& opt, EntryResult& out) {
    Expr f = Expr::parse(e.fn);
    Box box = entry_box(e, f);
    Sampler s(opt.seed);
    double min_gap = 0.0;
    bool first = true;
    for (long k = 0; k < corpus_gap_samples; ++k) {
        Vector x = sample_point(s, box);
        Vector y = sample_point(s, box);
        WeightParam t = sample_weight(s, box.dim());
        double g = defining_inequality_gap(f, x, y, t);
        if (first || g < min_gap) min_gap = g;
        first = false;
    }
    out.min_gap = min_gap;
    out.samples = corpus_gap_samples;
    out.pass = (min_gap >= -opt.tolerance);
    if (!out.pass) out.message = "inequality gap below tolerance: " + format_double(min_gap);
}

inline void run_lemma_entry(const CorpusEntry& e, const CorpusOptions& opt, EntryResult& out) {
    Expr f = Expr::parse(e.fn);
    Box box = entry_box(e, f);
    Sampler s(opt.seed);
    const int n = box.dim();
    double min_gap = 0.0;
    bool first = true;
    for (long k = 0; k < corpus_gap_samples; ++k) {
        const int axis = static_cast<int>(k % n);
        Vector z = sample_point(s, box);
        double y1 = s.uniform(box.lower()[axis], box.upper()[axis]);
        double y2 = s.uniform(box.lower()[axis], box.upper()[axis]);
        if (y2 < y1) std::swap(y1, y2);
        double x1 = s.uniform(y1, (y1 + y2) / 2.0);
        double x2 = std::min(std::max(y1 + y2 - x1, x1), y2);
        double g = lemma_corner_majorization_gap(f, z, axis + 1, x1, x2, y1, y2);
        if (first || g < min_gap) min_gap = g;
        first = false;
    }
    out.min_gap = min_gap;
    out.samples = corpus_gap_samples;
    out.pass = (min_gap >= -opt.tolerance);
    if (!out.pass) out.message = "majorization gap below tolerance: " + format_double(min_gap);
}

inline EntryResult run_corpus_entry(const CorpusEntry& e, const CorpusOptions& opt) {
    EntryResult out;
    out.name = e.name;
    out.kind = e.kind;
    out.provenance = e.provenance;
    try {
        switch (e.kind) {
            case CorpusKind::sandwich: run_sandwich_entry(e, opt, out); break;
            case CorpusKind::fejer: run_fejer_entry(e, opt, out); break;
            case CorpusKind::jensen: run_jensen_entry(e, opt, out); break;
            case CorpusKind::matrix_sandwich: run_matrix_entry(e, opt, out); break;
            case CorpusKind::separation: run_separation_entry(e, opt, out); break;
            case CorpusKind::defining_inequality: run_defining_entry(e, opt, out); break;
            case CorpusKind::lemma_majorization: run_lemma_entry(e, opt, out); break;
        }
    } catch (const Error& err) {
        out.pass = false;
        out.message = err.what();
    }
    return out;
}

}  // namespace detail

// Runs every entry; individual failures are recorded, never thrown. With
// parallel set, entries run concurrently but the report is identical to the
// sequential one.
inline CorpusReport run_corpus(std::span<const CorpusEntry> entries, const CorpusOptions& opt) {
    CorpusReport rep;
    rep.entries.reserve(entries.size());
    if (opt.parallel) {
        std::vector<std::future<EntryResult>> futures;
        futures.reserve(entries.size());
        for (const CorpusEntry& e : entries)
            futures.push_back(std::async(std::launch::async,
                                         [&e, &opt] { return detail::run_corpus_entry(e, opt); }));
        for (auto& f : futures) rep.entries.push_back(f.get());
    } else {
        for (const CorpusEntry& e : entries) rep.entries.push_back(detail::run_corpus_entry(e, opt));
    }
    for (const EntryResult& r : rep.entries) (r.pass ? rep.passed : rep.failed) += 1;
    return rep;
}

// The built-in regression corpus. Names are unique; every entry is expected
// to pass under the default options.
inline const std::vector<CorpusEntry>& builtin_corpus() {
    static const std::vector<CorpusEntry> entries = [] {
        std::vector<CorpusEntry> v;
        CorpusEntry e;

        e = {};
        e.name = "classical-1d-parabola";
        e.kind = CorpusKind::sandwich;
        e.fn = "x1^2";
        e.box = "0,1";
        e.provenance =
            "one-dimensional chain: midpoint value <= mean value <= endpoint average for a convex "
            "function";
        v.push_back(e);

        e = {};
        e.name = "rectangle-2d-sum-of-squares";
        e.kind = CorpusKind::sandwich;
        e.fn = "x1^2 + x2^2";
        e.box = "0,1;0,1";
        e.provenance =
            "two-dimensional rectangle chain: midpoint <= mean <= four-corner average for a "
            "coordinatewise convex function";
        v.push_back(e);

        e = {};
        e.name = "sharpness-multilinear-1d";
        e.kind = CorpusKind::sandwich;
        e.fn = "x1";
        e.box = "0,1";
        e.provenance = "equality case: for multilinear functions all three terms coincide";
        v.push_back(e);

        e = {};
        e.name = "sharpness-multilinear-2d";
        e.kind = CorpusKind::sandwich;
        e.fn = "x1*x2";
        e.box = "0,1;0,1";
        e.provenance = "equality case: product of coordinates makes the chain collapse";
        v.push_back(e);

        e = {};
        e.name = "sharpness-multilinear-3d";
        e.kind = CorpusKind::sandwich;
        e.fn = "x1*x2*x3";
        e.box = "0,1;0,1;0,1";
        e.provenance = "equality case in dimension three";
        v.push_back(e);

        e = {};
        e.name = "exp-cross-term";
        e.kind = CorpusKind::sandwich;
        e.fn = "exp(x1 + x2)";
        e.box = "0,1;0,1";
        e.provenance = "smooth jointly convex function, strictly positive margins";
        v.push_back(e);

        e = {};
        e.name = "concave-reversal";
        e.kind = CorpusKind::sandwich;
        e.fn = "-(x1^2 + x2^2)";
        e.box = "0,1;0,1";
        e.direction = Direction::concave;
        e.provenance = "negated convex function: the chain holds with both inequalities reversed";
        v.push_back(e);

        e = {};
        e.name = "separator-product";
        e.kind = CorpusKind::separation;
        e.fn = "x1*x2";
        e.box = "0,1;0,1";
        e.expect_nfold_falsified = false;
        e.expect_joint_falsified = true;
        e.provenance =
            "affine in each coordinate but not jointly convex: coordinatewise convexity is the "
            "strictly weaker notion";
        v.push_back(e);

        e = {};
        e.name = "fejer-parabolic-weight";
        e.kind = CorpusKind::fejer;
        e.fn = "x1^2";
        e.weight = "x1*(1 - x1)";
        e.box = "0,1";
        e.provenance =
            "weighted mean with a positive weight symmetric about the interval midpoint stays "
            "inside the chain";
        v.push_back(e);

        e = {};
        e.name = "jensen-endpoint-pairs";
        e.kind = CorpusKind::jensen;
        e.fn = "x1^2 + x2^2";
        e.box = "0,1;0,1";
        e.provenance =
            "discrete bound: f at the per-coordinate weighted means never exceeds the weighted "
            "tuple sum";
        v.push_back(e);

        e = {};
        e.name = "matrix-2x2-sum-of-squares";
        e.kind = CorpusKind::matrix_sandwich;
        e.fn = "x1^2 + x2^2 + x3^2 + x4^2";
        e.rows = 2;
        e.matrix_a = "0,0,0,0";
        e.matrix_b = "1,1,1,1";
        e.provenance =
            "entrywise interval of 2x2 matrices treated as a box in R^4, row-major flattening";
        v.push_back(e);

        e = {};
        e.name = "defining-inequality-mixed";
        e.kind = CorpusKind::defining_inequality;
        e.fn = "x1^2 * x2 - x1";
        e.box = "0,1;0,1";
        e.provenance =
            "random interpolation instances of the coordinatewise convexity inequality stay "
            "nonnegative";
        v.push_back(e);

        e = {};
        e.name = "corner-majorization";
        e.kind = CorpusKind::lemma_majorization;
        e.fn = "exp(x1) + x2^2";
        e.box = "0,1;0,1";
        e.provenance =
            "contracting a pair toward its mean along one axis never increases the sum of values";
        v.push_back(e);

        std::set<std::string> names;
        for (const CorpusEntry& entry : v)
            if (!names.insert(entry.name).second)
                throw InvariantError("duplicate corpus entry name: " + entry.name);
        return v;
    }();
    return entries;
}

// ---- deterministic rendering ----

inline void write_corpus_entry(JsonWriter& w, const EntryResult& r) {
    w.begin_object();
    w.key("name");
    w.value(r.name);
    w.key("kind");
    w.value(to_string(r.kind));
    w.key("provenance");
    w.value(r.provenance);
    w.key("pass");
    w.value(r.pass);
    w.key("message");
    w.value(r.message);
    if (r.report) {
        w.key("report");
        w.begin_object();
        write_bounds_report_fields(w, *r.report);
        w.end_object();
    }
    if (r.endpoint) {
        w.key("endpoint");
        w.begin_object();
        w.key("lhs");
        w.value(r.endpoint->lhs);
        w.key("rhs");
        w.value(r.endpoint->rhs);
        w.key("gap");
        w.value(r.endpoint->gap);
        w.end_object();
    }
    if (r.nfold) {
        w.key("nfold");
        w.begin_object();
        write_verdict_fields(w, *r.nfold);
        w.end_object();
    }
    if (r.joint) {
        w.key("joint");
        w.begin_object();
        write_verdict_fields(w, *r.joint);
        w.end_object();
    }
    if (r.min_gap) {
        w.key("min_gap");
        w.value(*r.min_gap);
        w.key("samples");
        w.value(static_cast<long long>(r.samples));
    }
    w.end_object();
}

// Writes "results" and "summary" members into an open JSON object.
inline void write_corpus_results(JsonWriter& w, const CorpusReport& rep) {
    w.key("results");
    w.begin_array();
    for (const EntryResult& r : rep.entries) write_corpus_entry(w, r);
    w.end_array();
    w.key("summary");
    w.begin_object();
    w.key("total");
    w.value(static_cast<long long>(rep.entries.size()));
    w.key("passed");
    w.value(static_cast<long long>(rep.passed));
    w.key("failed");
    w.value(static_cast<long long>(rep.failed));
    w.end_object();
}

inline std::string corpus_report_json(const CorpusReport& rep) {
    JsonWriter w;
    w.begin_object();
    write_corpus_results(w, rep);
    w.end_object();
    return w.str();
}

inline std::string corpus_report_csv(const CorpusReport& rep) {
    std::string out = "name,lower,mean,upper,quad_error,verified\n";
    for (const EntryResult& r : rep.entries) {
        out += r.name;
        out += ',';
        if (r.report) {
            out += format_double(r.report->lower) + ',' + format_double(r.report->mean) + ',' +
                   format_double(r.report->upper) + ',' + format_double(r.report->quad_error);
        } else if (r.endpoint) {
            out += format_double(r.endpoint->lhs) + ",," + format_double(r.endpoint->rhs) + ',';
        } else {
            out += ",,,";
        }
        out += ',';
        out += r.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

}  // namespace hhbounds
