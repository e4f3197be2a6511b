#include "daefc/errors.hpp"

#include <sstream>

namespace daefc {

namespace {

std::string funnel_message(int channel, int level, double time) {
    std::ostringstream out;
    out << "funnel violation at t=" << time;
    if (level == FunnelViolation::kLevelI)
        out << " (stacked level I)";
    else if (level == FunnelViolation::kLevelII)
        out << " (stacked level II)";
    else
        out << " (channel " << channel + 1 << ", level " << level << ")";
    return out.str();
}

} // namespace

FunnelViolation::FunnelViolation(int channel_, int level_, double time_)
    : std::runtime_error(funnel_message(channel_, level_, time_)),
      channel(channel_), level(level_), time(time_) {}

NewtonFailure::NewtonFailure(double time_, double residual_)
    : std::runtime_error("Newton iteration failed to converge at t=" + std::to_string(time_) +
                         " (residual " + std::to_string(residual_) + ")"),
      time(time_), residual(residual_) {}

StepUnderflow::StepUnderflow(double time_)
    : std::runtime_error("step size underflow at t=" + std::to_string(time_)), time(time_) {}

} // namespace daefc
