#pragma once

#include <stdexcept>
#include <string>

namespace psskit {

class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}
    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

#define PSSKIT_ERROR(Name)                                                   \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(#Name, what) {}       \
    }

// exprcore
PSSKIT_ERROR(MissingAssignment);
PSSKIT_ERROR(DomainError);
PSSKIT_ERROR(NotInvertible);
PSSKIT_ERROR(RegistryError);
// jetcalc
PSSKIT_ERROR(UnreducibleJet);
PSSKIT_ERROR(JetOrderExceeded);
PSSKIT_ERROR(MalformedSpec);
// forms
PSSKIT_ERROR(InvalidTriad);
PSSKIT_ERROR(NotACoframe);
PSSKIT_ERROR(NonDivisible);
// zcr
PSSKIT_ERROR(NotUnimodular);
// classify
PSSKIT_ERROR(NotAffinelyRelated);
PSSKIT_ERROR(PhiNotRecoverable);
PSSKIT_ERROR(MissingSlot);
PSSKIT_ERROR(AssumptionViolated);
PSSKIT_ERROR(ConstraintViolated);
PSSKIT_ERROR(UnsupportedAnsatz);
// parsecli
PSSKIT_ERROR(UnknownIdentifier);
PSSKIT_ERROR(ManifestError);

#undef PSSKIT_ERROR

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, const std::string& expected)
        : Error("SyntaxError", "at offset " + std::to_string(offset) + ", expected " + expected),
          offset_(offset), expected_(expected) {}
    std::size_t offset() const noexcept { return offset_; }
    const std::string& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::string expected_;
};

}  // namespace psskit
