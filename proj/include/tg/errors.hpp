#pragma once

#include <stdexcept>
#include <string>

namespace tg {

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

// Carries a short free-form diagnostic string (iteration counts, last terms).
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& what, std::string diagnostics = {})
        : std::runtime_error(what), diag_(std::move(diagnostics)) {}
    const std::string& diagnostics() const noexcept { return diag_; }

private:
    std::string diag_;
};

struct CapabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace tg
