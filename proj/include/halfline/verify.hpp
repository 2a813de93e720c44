#pragma once

#include <functional>
#include <vector>

#include "halfline/report.hpp"

namespace halfline {

// Acceptance suite: every criterion pinned to its stated tolerance, one or
// more verdict rows per criterion. Criteria ids run 1..12; an empty selection
// runs all of them. Rows stream through `sink` as they finish.
struct VerifyOutcome {
    std::vector<CriterionRow> rows;
    bool all_pass = true;
};

using RowSink = std::function<void(const CriterionRow&)>;

VerifyOutcome run_verify(const std::vector<int>& criteria = {}, const RowSink& sink = {});

}  // namespace halfline
