#pragma once

#include <stdexcept>
#include <string>

namespace daefc {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A documented operation precondition does not hold (singular matrix,
// non-regular system, inconsistent dimensions, ...).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A signal left its performance funnel. level: 0..r_i-2 for the cascade
// levels of channel `channel`, kLevelI / kLevelII for the stacked signals.
struct FunnelViolation : std::runtime_error {
    static constexpr int kLevelI = -1;
    static constexpr int kLevelII = -2;

    int channel;
    int level;
    double time;

    FunnelViolation(int channel_, int level_, double time_);
};

struct NewtonFailure : std::runtime_error {
    double time;
    double residual;

    NewtonFailure(double time_, double residual_);
};

struct StepUnderflow : std::runtime_error {
    double time;

    explicit StepUnderflow(double time_);
};

} // namespace daefc
