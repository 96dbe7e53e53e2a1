#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jsr/matrix_core.hpp"

namespace jsr::detail {

/// Running argmax of Lambda(w)^(1/|w|) with the tolerance tie rule.
struct LowerTracker {
    double tol = 1e-9;
    double value = 0.0;
    Word witness;
    bool has_value = false;

    bool offer(double v, const std::vector<int>& w);
};

inline Vector random_unit_vector(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    Vector x(d);
    for (std::size_t i = 0; i < d; ++i)
        x(i) = Complex(normal(rng), normal(rng));
    return x / x.norm();
}

inline Matrix random_gaussian(std::size_t d, std::mt19937_64& rng)
{
    std::normal_distribution<double> normal;
    Matrix m(d, d);
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t i = 0; i < d; ++i)
            m(i, j) = Complex(normal(rng), normal(rng));
    return m;
}

} // namespace jsr::detail
