// SPDX-FileCopyrightText: 2026 the nhsp authors
// SPDX-License-Identifier: MIT
//
// Shared helpers for the test suites: deterministic random fields and
// small numerical oracles (quadrature, direct convolution).

#ifndef NHSP_TESTS_HELPERS_HPP
#define NHSP_TESTS_HELPERS_HPP

#include <cmath>
#include <cstdint>
#include <vector>

#include "nhsp/fields.hpp"
#include "nhsp/grid.hpp"
#include "nhsp/multipliers.hpp"
#include "nhsp/rng.hpp"

namespace nhsp_tests {

using nhsp::complex;
using nhsp::Grid;
using nhsp::SpectralField;
using nhsp::VectorField;

using nhsp::random_divfree_field;
using nhsp::random_real_field;

// Composite Simpson on a uniform 1D grid (odd point count preferred; an
// even count falls back to a trapezoid on the final interval).
inline double simpson(const std::vector<double>& y, double h) {
    const std::size_t n = y.size();
    if (n < 2) return 0.0;
    double s = 0;
    std::size_t i = 0;
    while (i + 2 < n) {
        s += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
        i += 2;
    }
    if (i + 1 < n) s += 0.5 * h * (y[i] + y[i + 1]);
    return s;
}

} // namespace nhsp_tests

#endif // NHSP_TESTS_HELPERS_HPP
