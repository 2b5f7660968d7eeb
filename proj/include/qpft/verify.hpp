#pragma once

#include <string>
#include <vector>

namespace qpft {

struct Check {
    std::string suite;
    std::string name;
    double value = 0;
    double threshold = 0;
    bool at_least = false;  // pass means value ≥ threshold instead of value < threshold
    bool pass = false;
};

// Runs the invariant suite `suite` (all, transform, convolution, inversion, boas, applications).
std::vector<Check> run_verify(const std::string& suite);

}  // namespace qpft
