#include "dyncluster/error.hpp"

namespace dyncluster {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::UnknownId: return "UnknownId";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::UnsupportedMetric: return "UnsupportedMetric";
        case ErrorCode::OverlappingClusters: return "OverlappingClusters";
        case ErrorCode::NonNumericData: return "NonNumericData";
        case ErrorCode::WrongClusterCount: return "WrongClusterCount";
        case ErrorCode::SingleCluster: return "SingleCluster";
        case ErrorCode::DegenerateSeparation: return "DegenerateSeparation";
        case ErrorCode::UnknownCluster: return "UnknownCluster";
        case ErrorCode::InsufficientData: return "InsufficientData";
        case ErrorCode::ArityMismatch: return "ArityMismatch";
        case ErrorCode::UniverseMismatch: return "UniverseMismatch";
        case ErrorCode::SchemaViolation: return "SchemaViolation";
        case ErrorCode::InvalidDistributionParam: return "InvalidDistributionParam";
        case ErrorCode::Exhausted: return "Exhausted";
        case ErrorCode::InconsistentPartitions: return "InconsistentPartitions";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::IoError: return "IoError";
    }
    return "UnknownError";
}

}  // namespace dyncluster
