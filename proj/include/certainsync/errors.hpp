#pragma once

#include <stdexcept>
#include <string>

namespace certainsync {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ChunkLimitExceeded : Error { using Error::Error; };
struct DiffSizeUnsupported : Error { using Error::Error; };
struct ElementOutOfUniverse : Error { using Error::Error; };
struct TooLargeToMaterialize : Error { using Error::Error; };
struct TooLargeForOracle : Error { using Error::Error; };
struct SketchShapeMismatch : Error { using Error::Error; };
struct ExhaustedBeforeDecode : Error { using Error::Error; };
struct MalformedFrame : Error { using Error::Error; };
struct SessionNotEstablished : Error { using Error::Error; };
struct ChunkGap : Error { using Error::Error; };
struct SpecMismatch : Error { using Error::Error; };
struct SizesExceedUniverse : Error { using Error::Error; };
struct MalformedDataset : Error { using Error::Error; };
struct RoundLimitExceeded : Error { using Error::Error; };
struct ConfigError : Error { using Error::Error; };

} // namespace certainsync
