#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace sceptic {

// A requested target cannot be reached (e.g. predictive power above its
// supremum, or success impossible regardless of z_r). Carries the supremum
// of the quantity that fell short when one is meaningful.
struct infeasibility_error : std::runtime_error {
    double supremum;
    explicit infeasibility_error(const std::string& msg,
                                 double sup = std::numeric_limits<double>::quiet_NaN())
        : std::runtime_error(msg), supremum(sup) {}
};

}  // namespace sceptic
