#pragma once

#include <stdexcept>
#include <string>

namespace cqm {

// Base of every failure raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CQM_DEFINE_ERROR(Name)                                   \
    class Name : public Error {                                  \
    public:                                                      \
        explicit Name(const std::string& what) : Error(what) {}  \
    }

CQM_DEFINE_ERROR(StrongCouplingError);
CQM_DEFINE_ERROR(SingularTimeError);
CQM_DEFINE_ERROR(NotApplicableError);
CQM_DEFINE_ERROR(PoleError);
CQM_DEFINE_ERROR(DomainError);
CQM_DEFINE_ERROR(OverflowError);
CQM_DEFINE_ERROR(NonConvergence);
CQM_DEFINE_ERROR(ConvergenceError);
CQM_DEFINE_ERROR(CausticError);
CQM_DEFINE_ERROR(ZeroTimeError);
CQM_DEFINE_ERROR(ClassMismatchError);
CQM_DEFINE_ERROR(ContourError);
CQM_DEFINE_ERROR(SolveError);
CQM_DEFINE_ERROR(DegenerateWronskianError);
CQM_DEFINE_ERROR(ConfigError);

#undef CQM_DEFINE_ERROR

}  // namespace cqm
