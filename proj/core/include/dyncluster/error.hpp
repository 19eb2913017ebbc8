#pragma once

#include <stdexcept>
#include <string>

namespace dyncluster {

enum class ErrorCode {
    UnknownId,
    DuplicateId,
    DimensionMismatch,
    UnsupportedMetric,
    OverlappingClusters,
    NonNumericData,
    WrongClusterCount,
    SingleCluster,
    DegenerateSeparation,
    UnknownCluster,
    InsufficientData,
    ArityMismatch,
    UniverseMismatch,
    SchemaViolation,
    InvalidDistributionParam,
    Exhausted,
    InconsistentPartitions,
    InvalidArgument,
    IoError,
};

const char* error_code_name(ErrorCode code);

// Single exception type for all domain errors; tests match on code().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
    throw Error(code, what);
}

}  // namespace dyncluster
