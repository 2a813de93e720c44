#pragma once

#include <stdexcept>
#include <string>

namespace halfline {

// Exit-code buckets used by the CLI: 1 = input/assumption violation,
// 2 = numeric non-convergence, 3 = config/usage error.
enum class ErrorClass { Validation = 1, Numeric = 2, Config = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, const std::string& what) : std::runtime_error(what), cls_(cls) {}
    ErrorClass error_class() const { return cls_; }

private:
    ErrorClass cls_;
};

struct MalformedDistribution : Error {
    explicit MalformedDistribution(const std::string& w) : Error(ErrorClass::Validation, w) {}
};
struct NotNormalized : Error {
    explicit NotNormalized(const std::string& w) : Error(ErrorClass::Validation, w) {}
};
struct DivergentMoment : Error {
    explicit DivergentMoment(const std::string& w) : Error(ErrorClass::Validation, w) {}
};
struct OutOfRange : Error {
    explicit OutOfRange(const std::string& w) : Error(ErrorClass::Validation, w) {}
};
struct QuadratureNonConvergent : Error {
    explicit QuadratureNonConvergent(const std::string& w) : Error(ErrorClass::Numeric, w) {}
};
struct SeriesNotConverged : Error {
    explicit SeriesNotConverged(const std::string& w) : Error(ErrorClass::Numeric, w) {}
};
struct TruncationNotConverged : Error {
    explicit TruncationNotConverged(const std::string& w) : Error(ErrorClass::Numeric, w) {}
};
struct DegenerateK : Error {
    explicit DegenerateK(const std::string& w) : Error(ErrorClass::Numeric, w) {}
};
struct NotPositiveDefinite : Error {
    explicit NotPositiveDefinite(const std::string& w) : Error(ErrorClass::Numeric, w) {}
};
struct KernelNotConverged : Error {
    explicit KernelNotConverged(const std::string& w) : Error(ErrorClass::Numeric, w) {}
};
struct FitDegenerate : Error {
    explicit FitDegenerate(const std::string& w) : Error(ErrorClass::Numeric, w) {}
};
struct InsufficientData : Error {
    explicit InsufficientData(const std::string& w) : Error(ErrorClass::Validation, w) {}
};
struct HorizonTooShort : Error {
    explicit HorizonTooShort(const std::string& w) : Error(ErrorClass::Validation, w) {}
};
struct SupportUnbounded : Error {
    explicit SupportUnbounded(const std::string& w) : Error(ErrorClass::Validation, w) {}
};
struct ConfigError : Error {
    explicit ConfigError(const std::string& w) : Error(ErrorClass::Config, w) {}
};

}  // namespace halfline
