#pragma once

#include <stdexcept>
#include <string>

namespace replan {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// gridmap
struct EmptyMapError : Error { using Error::Error; };
struct OutOfBoundsError : Error { using Error::Error; };
struct DimensionMismatchError : Error { using Error::Error; };
struct NoFreeSpaceError : Error { using Error::Error; };
struct InsufficientObstaclesError : Error { using Error::Error; };
struct GridParseError : Error { using Error::Error; };

// smoother
struct DegenerateSegmentError : Error { using Error::Error; };

// bench
struct DensityUnreachableError : Error { using Error::Error; };
struct NoReferencePathError : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace replan
