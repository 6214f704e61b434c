#include "bessel/test_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace bessel {

TestFunction make_test_function(const std::string& name, double a) {
    TestFunction tf;
    tf.name = name;
    if (name == "one") {
        tf.f = [](double) { return 1.0; };
        tf.sup_norm = 1.0;
    } else if (name == "exp_neg_y2") {
        tf.f = [](double y) { return std::exp(-y * y); };
        tf.sup_norm = 1.0;
    } else if (name == "cauchy") {
        tf.f = [](double y) { return 1.0 / (1.0 + y * y); };
        tf.sup_norm = 1.0;
    } else if (name == "indicator_0_a") {
        if (!(a > 0.0))
            throw std::invalid_argument("indicator_0_a: parameter a must be > 0");
        tf.f = [a](double y) { return y <= a ? 1.0 : 0.0; };
        tf.sup_norm = 1.0;
        tf.jumps = {a};
    } else {
        throw std::invalid_argument("unknown test function: " + name);
    }
    return tf;
}

const std::vector<std::string>& test_function_names() {
    static const std::vector<std::string> names = {"one", "exp_neg_y2", "cauchy", "indicator_0_a"};
    return names;
}

} // namespace bessel
