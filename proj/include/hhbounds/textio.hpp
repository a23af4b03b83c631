#pragma once

#include <cstdio>
#include <cstdlib>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hhbounds/box.hpp"
#include "hhbounds/errors.hpp"
#include "hhbounds/hh.hpp"
#include "hhbounds/matrix.hpp"
#include "hhbounds/verdict.hpp"

namespace hhbounds {

// 17 significant digits: reparsing reproduces the double bit for bit.
inline std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline void json_escape_into(std::string& out, std::string_view s) {
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
}

// Minimal JSON emitter with caller-controlled field order. All doubles go
// through format_double, so identical inputs render identical bytes.
class JsonWriter {
public:
    void begin_object() {
        separator();
        out_ += '{';
        counts_.push_back(0);
    }
    void end_object() {
        counts_.pop_back();
        out_ += '}';
    }
    void begin_array() {
        separator();
        out_ += '[';
        counts_.push_back(0);
    }
    void end_array() {
        counts_.pop_back();
        out_ += ']';
    }
    void key(std::string_view k) {
        separator();
        out_ += '"';
        json_escape_into(out_, k);
        out_ += "\": ";
        after_key_ = true;
    }
    void value(double v) {
        separator();
        out_ += format_double(v);
    }
    void value(bool b) {
        separator();
        out_ += b ? "true" : "false";
    }
    void value(int v) { value(static_cast<long long>(v)); }
    void value(long v) { value(static_cast<long long>(v)); }
    void value(long long v) {
        separator();
        out_ += std::to_string(v);
    }
    void value(unsigned long long v) {
        separator();
        out_ += std::to_string(v);
    }
    void value(std::string_view s) {
        separator();
        out_ += '"';
        json_escape_into(out_, s);
        out_ += '"';
    }
    void value(const char* s) { value(std::string_view(s)); }
    void value_array(std::span<const double> xs) {
        begin_array();
        for (double x : xs) value(x);
        end_array();
    }

    const std::string& str() const { return out_; }

private:
    void separator() {
        if (after_key_) {
            after_key_ = false;
            return;
        }
        if (!counts_.empty()) {
            if (counts_.back() > 0) out_ += ", ";
            ++counts_.back();
        }
    }

    std::string out_;
    std::vector<int> counts_;
    bool after_key_ = false;
};

// ---- shared report fragments ----
// These write members into an object the caller has already opened, so a
// "check" tag or entry metadata can sit alongside the mirrored fields.

inline void write_bounds_report_fields(JsonWriter& w, const BoundsReport& r) {
    w.key("lower");
    w.value(r.lower);
    w.key("mean");
    w.value(r.mean);
    w.key("upper");
    w.value(r.upper);
    w.key("quad_error");
    w.value(r.quad_error);
    w.key("left_margin");
    w.value(r.left_margin);
    w.key("right_margin");
    w.value(r.right_margin);
    w.key("verified");
    w.value(r.verified);
    w.key("direction");
    w.value(to_string(r.direction));
}

inline void write_verdict_fields(JsonWriter& w, const ConvexityVerdict& v) {
    w.key("status");
    w.value(v.falsified() ? "falsified" : "not_falsified");
    w.key("trials_run");
    w.value(static_cast<long long>(v.trials_run));
    w.key("tolerance");
    w.value(v.tolerance);
    if (v.witness) {
        w.key("witness");
        w.begin_object();
        w.key("points");
        w.begin_array();
        for (const Vector& p : v.witness->points) w.value_array(p.coords());
        w.end_array();
        w.key("params");
        w.value_array(v.witness->params);
        w.key("lhs");
        w.value(v.witness->lhs);
        w.key("rhs");
        w.value(v.witness->rhs);
        w.key("detail");
        w.value(v.witness->detail);
        w.end_object();
    }
}

// ---- input-format parsing ----

inline double parse_double_strict(std::string_view text, const char* what) {
    std::string t(text);
    // trim
    std::size_t b = t.find_first_not_of(" \t");
    std::size_t e = t.find_last_not_of(" \t");
    if (b == std::string::npos) throw InvariantError(std::string(what) + ": empty number");
    t = t.substr(b, e - b + 1);
    char* endp = nullptr;
    double v = std::strtod(t.c_str(), &endp);
    if (endp != t.c_str() + t.size() || !std::isfinite(v))
        throw InvariantError(std::string(what) + ": bad number '" + t + "'");
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            parts.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return parts;
}

// Axis list "lo,hi;lo,hi;...", one "lo,hi" pair per axis.
inline Box parse_box_spec(std::string_view spec) {
    std::vector<double> lo, hi;
    for (std::string_view axis : split(spec, ';')) {
        auto pair = split(axis, ',');
        if (pair.size() != 2)
            throw InvariantError("box spec: each axis must be 'lo,hi' (got '" +
                                 std::string(axis) + "')");
        lo.push_back(parse_double_strict(pair[0], "box spec"));
        hi.push_back(parse_double_strict(pair[1], "box spec"));
    }
    if (lo.empty()) throw InvariantError("box spec: no axes");
    return Box(Vector(std::move(lo)), Vector(std::move(hi)));
}

// Row-major comma-separated entry list, rows^2 entries.
inline SquareMatrix parse_matrix_entries(int rows, std::string_view entries) {
    if (rows < 1) throw InvariantError("matrix rows must be >= 1");
    std::vector<double> e;
    for (std::string_view item : split(entries, ','))
        e.push_back(parse_double_strict(item, "matrix entries"));
    if (e.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(rows))
        throw InvariantError("matrix entries: expected " + std::to_string(rows * rows) +
                             " values, got " + std::to_string(e.size()));
    return SquareMatrix(rows, std::move(e));
}

}  // namespace hhbounds
