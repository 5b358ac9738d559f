#pragma once

#include "wdgopt/verify.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace wdg {

struct BenchRun {
    std::string method;   // wDG-c, NAG-c, wDG-sc, wDG2-sc, NAG-sc
    std::string h_label;  // e.g. "0.7/sqrt(L)"
    double h = 0.0;
    std::string csv;      // file name inside the output directory
    double final_f_gap = 0.0;
    // certificate only when the step satisfies the theorem's hypothesis
    std::optional<Theorem> theorem;
    bool in_hypothesis = false;
    bool certified = false;
    std::string note;
};

struct BenchSummary {
    std::string which;
    std::vector<BenchRun> runs;
    bool passed = true;  // every in-hypothesis certificate holds
};

// "convex": wDG-c / NAG-c on quartic_2d from (2,4); "sc": wDG-sc / wDG2-sc / NAG-sc on quadratic_2d from (2,3)
BenchSummary bench_appendix_f(const std::string& which, const std::filesystem::path& out_dir, int iterations = 0);

}  // namespace wdg
