#pragma once

// Umbrella header.

#include "hhbounds/box.hpp"
#include "hhbounds/convexity.hpp"
#include "hhbounds/corpus.hpp"
#include "hhbounds/errors.hpp"
#include "hhbounds/expr.hpp"
#include "hhbounds/hh.hpp"
#include "hhbounds/matrix.hpp"
#include "hhbounds/pairwise.hpp"
#include "hhbounds/quadrature.hpp"
#include "hhbounds/sampling.hpp"
#include "hhbounds/textio.hpp"
#include "hhbounds/verdict.hpp"
