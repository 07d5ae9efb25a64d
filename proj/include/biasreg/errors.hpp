#pragma once

#include <stdexcept>
#include <string>

namespace biasreg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define BIASREG_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                     \
    public:                                                         \
        explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
    }

BIASREG_DEFINE_ERROR(SingularGram);
BIASREG_DEFINE_ERROR(NonFinite);
BIASREG_DEFINE_ERROR(DimensionMismatch);
BIASREG_DEFINE_ERROR(DidNotConverge);
BIASREG_DEFINE_ERROR(InvalidConfig);
BIASREG_DEFINE_ERROR(QuadratureFailure);
BIASREG_DEFINE_ERROR(DomainError);
BIASREG_DEFINE_ERROR(DivisionByZero);
BIASREG_DEFINE_ERROR(DegenerateFit);
BIASREG_DEFINE_ERROR(InsufficientData);
BIASREG_DEFINE_ERROR(ConfigError);
BIASREG_DEFINE_ERROR(ParseError);
BIASREG_DEFINE_ERROR(MissingTarget);

#undef BIASREG_DEFINE_ERROR

}  // namespace biasreg
