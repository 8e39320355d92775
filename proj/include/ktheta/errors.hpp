#pragma once

#include <stdexcept>
#include <string>

namespace ktheta {

// Exit-code categories used by the CLI: 2 = contract violation on the
// input side, 3 = numerical failure, 4 = malformed input.
enum class ErrorCategory { domain = 2, numerical = 3, parse = 4 };

class Error : public std::runtime_error {
public:
    Error(std::string kind, ErrorCategory category, const std::string& message)
        : std::runtime_error(message), kind_(std::move(kind)), category_(category) {}

    const std::string& kind() const noexcept { return kind_; }
    ErrorCategory category() const noexcept { return category_; }

private:
    std::string kind_;
    ErrorCategory category_;
};

#define KTHETA_DEFINE_ERROR(NAME, CATEGORY)                               \
    class NAME : public Error {                                          \
    public:                                                               \
        explicit NAME(const std::string& message)                         \
            : Error(#NAME, ErrorCategory::CATEGORY, message) {}           \
    }

KTHETA_DEFINE_ERROR(DomainError, domain);
KTHETA_DEFINE_ERROR(PoleError, domain);
KTHETA_DEFINE_ERROR(OrderError, domain);
KTHETA_DEFINE_ERROR(MismatchError, domain);
KTHETA_DEFINE_ERROR(SpanMismatchError, domain);

KTHETA_DEFINE_ERROR(ConditioningError, numerical);
KTHETA_DEFINE_ERROR(RootFindingError, numerical);
KTHETA_DEFINE_ERROR(EigensolverError, numerical);
KTHETA_DEFINE_ERROR(AtomCollisionError, numerical);
KTHETA_DEFINE_ERROR(StructureError, numerical);
KTHETA_DEFINE_ERROR(RankMismatchError, numerical);
KTHETA_DEFINE_ERROR(FitError, numerical);
KTHETA_DEFINE_ERROR(NotTTOError, numerical);

KTHETA_DEFINE_ERROR(ParseError, parse);

#undef KTHETA_DEFINE_ERROR

}  // namespace ktheta
