#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace corrsim {

// Paired observations (x_i, y_i), stored as two parallel arrays.
struct BivariateSample {
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const noexcept { return x.size(); }

    void reserve(std::size_t n) {
        x.reserve(n);
        y.reserve(n);
    }

    void push_back(double xi, double yi) {
        x.push_back(xi);
        y.push_back(yi);
    }

    // Requires n >= 2, equal lengths and finite values.
    void validate() const;
};

BivariateSample make_sample(const std::vector<std::pair<double, double>>& pairs);

} // namespace corrsim
