#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace isofield::cli {

enum class Budget { fast, full };

struct CriterionResult {
    int id = 0;
    std::string name;
    bool passed = false;
    double measured = 0.0;
    double tolerance = 0.0;
    double seconds = 0.0;
    std::string detail;
};

struct VerifyReport {
    Budget budget = Budget::fast;
    std::vector<CriterionResult> results;

    bool passed() const;
    nlohmann::json to_json() const;
};

struct GauntCheck {
    double max_error = 0.0;
    long long triples = 0;
};

// Closed-form real Gaunt integrals against Gauss-Legendre quadrature for all l_i <= ell_max.
GauntCheck gaunt_consistency(int ell_max);

// Runs every criterion; `only` restricts to the listed ids when non-empty.
VerifyReport verify_all(Budget budget, const std::vector<int>& only = {});

}  // namespace isofield::cli
