#pragma once

#include <functional>
#include <string>
#include <vector>

namespace bessel {

/**
 * Bounded Borel test function with declared sup norm and the list of its
 * jump locations (forced quadrature subdivision points).
 */
struct TestFunction {
    std::string name;
    std::function<double(double)> f;
    double sup_norm = 1.0;
    std::vector<double> jumps;
};

/**
 * Named registry used by the command line and the verification suites:
 *   "one"            F(y) = 1
 *   "exp_neg_y2"     F(y) = exp(-y^2)
 *   "cauchy"         F(y) = 1/(1+y^2)
 *   "indicator_0_a"  F(y) = 1 on [0, a], 0 otherwise (parameter a > 0)
 * Throws std::invalid_argument for an unknown name or a bad parameter.
 */
TestFunction make_test_function(const std::string& name, double a = 1.0);

/** Names accepted by make_test_function, for help text and validation. */
const std::vector<std::string>& test_function_names();

} // namespace bessel
