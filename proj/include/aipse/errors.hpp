#pragma once

#include <stdexcept>
#include <string>

namespace aipse {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// url: no host could be extracted from the input string.
struct MalformedUrl : Error {
    using Error::Error;
};

// gbdt
struct DegenerateData : Error {
    using Error::Error;
};
struct InvalidConfig : Error {
    using Error::Error;
};
struct FeatureLengthMismatch : Error {
    using Error::Error;
};
struct CorruptModel : Error {
    using Error::Error;
};

// risk
struct InconsistentFlags : Error {
    using Error::Error;
};

// refine / agent
struct ToolFailure : Error {
    using Error::Error;
};
struct ParseFailure : Error {
    using Error::Error;
};
struct BadAction : Error {
    using Error::Error;
};
struct BadFormat : Error {
    using Error::Error;
};
struct BackendUnavailable : Error {
    using Error::Error;
};

// metrics
struct MixedStrategies : Error {
    using Error::Error;
};

// corpus
struct ArityError : Error {
    using Error::Error;
};

}  // namespace aipse
