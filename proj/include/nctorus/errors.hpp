#pragma once

#include <stdexcept>
#include <string>

namespace nctorus {

// Every error carries a stable machine-readable code; the CLI surfaces it
// verbatim so batch callers can dispatch on it.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

#define NCTORUS_DEFINE_ERROR(NAME, CODE)                                      \
    class NAME : public Error {                                               \
    public:                                                                   \
        explicit NAME(const std::string& message) : Error(CODE, message) {}   \
    }

NCTORUS_DEFINE_ERROR(ModeMismatch, "MODE_MISMATCH");
NCTORUS_DEFINE_ERROR(DivisionByZero, "DIVISION_BY_ZERO");
NCTORUS_DEFINE_ERROR(UnsupportedInSymbolicMode, "UNSUPPORTED_IN_SYMBOLIC_MODE");
NCTORUS_DEFINE_ERROR(ReducibleFieldSpec, "REDUCIBLE_FIELD_SPEC");
NCTORUS_DEFINE_ERROR(BadFieldSpec, "BAD_FIELD_SPEC");
NCTORUS_DEFINE_ERROR(OddDimension, "ODD_DIMENSION");
NCTORUS_DEFINE_ERROR(BadIndexTuple, "BAD_INDEX_TUPLE");
NCTORUS_DEFINE_ERROR(NotUnimodular, "NOT_UNIMODULAR");
NCTORUS_DEFINE_ERROR(NotSkewIntegral, "NOT_SKEW_INTEGRAL");
NCTORUS_DEFINE_ERROR(BadP, "BAD_P");
NCTORUS_DEFINE_ERROR(DimensionMismatch, "DIMENSION_MISMATCH");
NCTORUS_DEFINE_ERROR(InvariantViolation, "INVARIANT_VIOLATION");
NCTORUS_DEFINE_ERROR(ActionUndefined, "ACTION_UNDEFINED");
NCTORUS_DEFINE_ERROR(NotBlockDiagonal, "NOT_BLOCK_DIAGONAL");
NCTORUS_DEFINE_ERROR(ZeroScale, "ZERO_SCALE");
NCTORUS_DEFINE_ERROR(LabelMismatch, "LABEL_MISMATCH");
NCTORUS_DEFINE_ERROR(MixedKinds, "MIXED_KINDS");
NCTORUS_DEFINE_ERROR(SingularBlock, "SINGULAR_BLOCK");
NCTORUS_DEFINE_ERROR(UnsupportedW1, "UNSUPPORTED_W1");
NCTORUS_DEFINE_ERROR(OutOfGrid, "OUT_OF_GRID");
NCTORUS_DEFINE_ERROR(ParseError, "PARSE_ERROR");
NCTORUS_DEFINE_ERROR(SchemaError, "SCHEMA_ERROR");

#undef NCTORUS_DEFINE_ERROR

} // namespace nctorus
