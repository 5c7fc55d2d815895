#pragma once

#include <vector>

namespace crmadapt::sim {

struct SineComponent {
    double amplitude = 1.0;
    double frequency = 1.0;  // rad/s
    double phase = 0.0;      // rad
};

// Deterministic closed-form reference signals, evaluated at grid times.
struct SignalSpec {
    enum class Type { step, sine, multisine, square };

    Type type = Type::step;
    double amplitude = 1.0;
    double offset = 0.0;
    // step: switch-on time; square: start of the first (positive) half period
    double delay = 0.0;
    double frequency = 1.0;  // sine, rad/s
    double phase = 0.0;      // sine, rad
    double period = 20.0;    // square, s
    std::vector<SineComponent> components;  // multisine
};

double evaluate(const SignalSpec& spec, double t);

}  // namespace crmadapt::sim
