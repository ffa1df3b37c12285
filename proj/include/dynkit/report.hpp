#ifndef DYNKIT_REPORT_HPP
#define DYNKIT_REPORT_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace dynkit {

/// Result of one sampled law verification. pass iff max_residual stayed
/// within the tolerance used and no sample failed to evaluate.
struct CheckReport {
    std::string name;
    int samples_used = 0;
    double max_residual = 0.0;
    double tolerance = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::pair<std::string, double>> failures; // sample description, residual
    std::vector<std::string> errors;                      // per-sample evaluation errors
    bool pass = false;

    void record(const std::string& sample, double residual) {
        ++samples_used;
        if (residual > max_residual) max_residual = residual;
        if (residual > tolerance) failures.emplace_back(sample, residual);
    }

    void record_error(const std::string& what) {
        ++samples_used;
        errors.push_back(what);
    }

    CheckReport& finalize() {
        pass = failures.empty() && errors.empty() && max_residual <= tolerance;
        return *this;
    }
};

} // namespace dynkit

#endif
