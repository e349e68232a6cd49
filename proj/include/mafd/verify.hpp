#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mafd {

/// One checked identity or property, with the measured value against its
/// pinned threshold.
struct VerifyItem {
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string comparator;  // "<=" or ">="
    std::string detail;
};

/// Deliberate fault hooks for testing that the suite can fail.
enum class FaultInjection { None, FlipIntPartSign };

/// Runs every discrete identity and property check:
/// integration by parts, energy identity, Leibniz rule, matrix product rule,
/// divergence-free cofactor rows, 2D cofactor/symmetrization commutation,
/// cofactor Frobenius identity, scheme homogeneity, eigenvalue continuity,
/// cofactor spectrum bounds, discrete Poincare, and consistency slopes.
std::vector<VerifyItem> run_identity_suite(std::uint64_t seed,
                                           FaultInjection fault = FaultInjection::None);

bool all_passed(const std::vector<VerifyItem>& items);

}  // namespace mafd
