#pragma once

#include <cstddef>
#include <cstdint>

namespace jsr {

/// Numerical knobs shared by every floating-point module.
struct Tolerances {
    /// Relative tolerance for all floating comparisons.
    double rel = 1e-9;
    /// Relative threshold used by rank decisions in algebra closures.
    double rank = 1e-8;
    /// Adversarial backoff applied to reported endpoints: lower bounds are
    /// shrunk and upper bounds inflated by this factor.
    double backoff = 1e-9;
    /// Largest condition number accepted for an ellipsoidal norm.
    double max_condition = 1e12;
};

struct Limits {
    std::size_t max_dim = 32;
    /// Maximum number of words a single product enumeration may visit.
    std::uint64_t enumeration_cap = 2'000'000;
};

} // namespace jsr
