#include "halfline/report.hpp"

#include <cstdio>
#include <fstream>

#include "halfline/errors.hpp"

namespace halfline {

std::string format_sig12(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void write_text_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open '" + path + "' for writing");
    out << contents;
    if (!out) throw ConfigError("write failed for '" + path + "'");
}

void emit_survival_csv(const std::string& path, const SurvivalCurve& curve) {
    for (std::size_t i = 1; i < curve.p_hat.size(); ++i)
        if (curve.p_hat[i] > curve.p_hat[i - 1])
            throw Error(ErrorClass::Numeric,
                        "survival curve is not non-increasing; refusing to emit");
    std::string text = "n,survivors,p_hat,ci99\n";
    for (std::size_t i = 0; i < curve.n_values.size(); ++i) {
        text += std::to_string(curve.n_values[i]) + "," +
                std::to_string(curve.survivors[i]) + "," + format_sig12(curve.p_hat[i]) +
                "," + format_sig12(curve.ci_half_width[i]) + "\n";
    }
    write_text_file(path, text);
}

void emit_ratio_csv(const std::string& path, const RatioCurve& curve) {
    std::string text = "lambda,one_minus_lambda,log_ratio,i0,i1,i4\n";
    for (std::size_t i = 0; i < curve.lambdas.size(); ++i) {
        text += format_sig12(curve.lambdas[i]) + "," +
                format_sig12(1.0 - curve.lambdas[i]) + "," +
                format_sig12(curve.log_ratio[i]) + "," + format_sig12(curve.i0_vals[i]) +
                "," + format_sig12(curve.i1_vals[i]) + "," +
                format_sig12(curve.i4_vals[i]) + "\n";
    }
    write_text_file(path, text);
}

void emit_verdict_csv(const std::string& path, const std::vector<CriterionRow>& rows) {
    std::string text = "criterion,description,target,measured,tolerance,pass\n";
    for (const auto& r : rows) {
        text += r.id + ",\"" + r.description + "\"," + format_sig12(r.target) + "," +
                format_sig12(r.measured) + "," + format_sig12(r.tolerance) + "," +
                (r.pass ? "pass" : "FAIL") + "\n";
    }
    write_text_file(path, text);
}

}  // namespace halfline
