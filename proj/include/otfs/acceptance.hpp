#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace otfs {
namespace acceptance {

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

// Runs the acceptance criteria (all when ids is empty) and prints one
// pass/fail line per criterion to log.
std::vector<CriterionResult> run(const std::vector<int>& ids, std::ostream& log);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace acceptance
}  // namespace otfs
