#pragma once

#include <string>
#include <vector>

#include "halfline/montecarlo.hpp"
#include "halfline/wiener_hopf.hpp"

namespace halfline {

// CSV payloads carry exactly the columns named in the interface contract,
// plain text, 12 significant digits. Writers throw Error(Config) with the
// offending path on I/O failure.
void emit_survival_csv(const std::string& path, const SurvivalCurve& curve);
void emit_ratio_csv(const std::string& path, const RatioCurve& curve);

std::string format_sig12(double v);

// One row of the verify verdict table.
struct CriterionRow {
    std::string id;
    std::string description;
    double target = 0.0;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

void emit_verdict_csv(const std::string& path, const std::vector<CriterionRow>& rows);

// Writes the structured summary document (JSON, stable key order, no
// timestamps, so rerunning a config reproduces the bytes).
void write_text_file(const std::string& path, const std::string& contents);

}  // namespace halfline
