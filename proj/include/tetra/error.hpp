#ifndef TETRA_ERROR_HPP
#define TETRA_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace tetra
{

// Failure categories shared by the library and the CLI. Grid cells record
// the category instead of propagating the exception.
enum class errc {
    contract,       // precondition on a formal series violated
    invalid_order,  // truncation order below what the operation needs
    domain,         // argument outside the method's domain
    overflow,       // orbit or recursion left the representable range
    precision_loss, // result swamped by rounding
    nonconvergence, // recursion cap or iteration cap hit
    cut,            // argument on a branch cut and no side given
    branch,         // log crossed a cut during a recursion
    singularity,    // pole of the evaluated function
    calibration,    // root finder failed
    io
};

inline std::string_view to_string(errc e) noexcept
{
    switch (e) {
        case errc::contract: return "contract";
        case errc::invalid_order: return "invalid_order";
        case errc::domain: return "domain";
        case errc::overflow: return "overflow";
        case errc::precision_loss: return "precision_loss";
        case errc::nonconvergence: return "nonconv";
        case errc::cut: return "cut";
        case errc::branch: return "branch";
        case errc::singularity: return "singularity";
        case errc::calibration: return "calibration";
        case errc::io: return "io";
    }
    return "unknown";
}

class error : public std::runtime_error
{
public:
    error(errc code, const std::string &what) : std::runtime_error(what), code_(code) {}

    [[nodiscard]] errc code() const noexcept { return code_; }

private:
    errc code_;
};

// Thrown when an orbit overflows; carries the step at which it escaped.
class overflow_error : public error
{
public:
    overflow_error(long step, const std::string &what) : error(errc::overflow, what), step_(step) {}

    [[nodiscard]] long step() const noexcept { return step_; }

private:
    long step_;
};

// Recursion cap exceeded; carries the last distance to the fixed point.
class nonconvergence_error : public error
{
public:
    nonconvergence_error(double last_distance, const std::string &what)
        : error(errc::nonconvergence, what), last_distance_(last_distance)
    {
    }

    [[nodiscard]] double last_distance() const noexcept { return last_distance_; }

private:
    double last_distance_;
};

} // namespace tetra

#endif
