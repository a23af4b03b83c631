#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hhbounds/box.hpp"

namespace hhbounds {

enum class VerdictStatus { not_falsified, falsified };

// A concrete violation found by a statistical falsifier: the sample points
// involved, the interpolation parameters in play, and the two sides of the
// failed inequality.
struct Witness {
    std::vector<Vector> points;
    std::vector<double> params;
    double lhs = 0.0;
    double rhs = 0.0;
    std::string detail;
};

// Outcome of a randomized check. not_falsified is evidence, not a proof:
// these checkers only ever disprove a property, by exhibiting a witness
// whose violation exceeds the tolerance.
struct ConvexityVerdict {
    VerdictStatus status = VerdictStatus::not_falsified;
    std::optional<Witness> witness;
    long trials_run = 0;
    double tolerance = 0.0;

    bool falsified() const { return status == VerdictStatus::falsified; }
};

}  // namespace hhbounds
