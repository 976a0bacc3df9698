#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace tausim {

/// A run left the numerically meaningful regime (non-finite values,
/// constraint blow-up, non-monotone refinement). `when()` reports the step
/// index or time at which the failure was detected.
class numerical_error : public std::runtime_error {
public:
    numerical_error(const std::string& what, double when)
        : std::runtime_error(what + " (at " + std::to_string(when) + ")"), when_(when) {}

    double when() const noexcept { return when_; }

private:
    double when_;
};

/// Configuration rejected before any computation. Collects one message per
/// violated field so a bad config is reported in full, not one field at a
/// time.
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(std::vector<std::string> fields)
        : std::invalid_argument(join(fields)), fields_(std::move(fields)) {}

    const std::vector<std::string>& fields() const noexcept { return fields_; }

private:
    static std::string join(const std::vector<std::string>& fields) {
        std::string msg = "invalid configuration:";
        for (const auto& f : fields) {
            msg += "\n  - " + f;
        }
        return msg;
    }

    std::vector<std::string> fields_;
};

}  // namespace tausim
