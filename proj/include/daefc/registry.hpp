#pragma once

#include "daefc/linear_dae.hpp"
#include "daefc/simulate.hpp"

#include <string>
#include <vector>

namespace daefc {

struct LinearExample {
    std::string name;
    std::string description;
    LinearDae system;
};

struct NonlinearExample {
    std::string name;
    std::string description;
    NonlinearFunctionalDae plant;
    ControllerConfig controller;
    // Post-hoc reconstruction of the hidden x3 component from output
    // derivatives, set for the normal-form demo only.
    std::function<Eigen::VectorXd(const TrajectorySample&)> x3_from_sample;
};

std::vector<std::string> linear_example_names();
std::vector<std::string> nonlinear_example_names();
bool is_linear_example(const std::string& name);
bool is_nonlinear_example(const std::string& name);

LinearExample linear_example(const std::string& name);
NonlinearExample nonlinear_example(const std::string& name);

} // namespace daefc
