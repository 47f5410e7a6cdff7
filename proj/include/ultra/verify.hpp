#pragma once

#include <map>
#include <string>
#include <vector>

namespace ultra {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool checks_pass = false;
    double seconds = 0.0;
    double budget = 0.0;  // wall-clock allowance in seconds
    std::vector<std::string> details;
    std::map<std::string, double> stats;
    bool pass() const { return checks_pass && seconds < budget; }
};

std::vector<int> criterion_ids();
CriterionResult run_criterion(int id);

}  // namespace ultra
