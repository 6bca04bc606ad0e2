#pragma once

#include <stdexcept>
#include <string>

namespace nigar {

// Base class for all library errors so callers can catch one type.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct InvalidParamsError : Error {
    using Error::Error;
};

struct TooShortError : Error {
    using Error::Error;
};

struct ConstantSeriesError : Error {
    using Error::Error;
};

struct ZeroVarianceError : Error {
    using Error::Error;
};

// M-step delta estimate is undefined when mean(s)*mean(w) <= 1.
struct DegenerateWeightsError : Error {
    using Error::Error;
};

struct NonFiniteLikelihoodError : Error {
    using Error::Error;
};

struct MissingFileError : Error {
    using Error::Error;
};

struct MissingColumnError : Error {
    using Error::Error;
};

struct EmptyAfterCleaningError : Error {
    using Error::Error;
};

}  // namespace nigar
