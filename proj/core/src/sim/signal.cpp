#include "crmadapt/sim/signal.hpp"

#include <cmath>

namespace crmadapt::sim {

double evaluate(const SignalSpec& spec, double t) {
    switch (spec.type) {
        case SignalSpec::Type::step:
            return spec.offset + (t >= spec.delay ? spec.amplitude : 0.0);
        case SignalSpec::Type::sine:
            return spec.offset + spec.amplitude * std::sin(spec.frequency * t + spec.phase);
        case SignalSpec::Type::multisine: {
            double v = spec.offset;
            for (const auto& c : spec.components) {
                v += c.amplitude * std::sin(c.frequency * t + c.phase);
            }
            return v;
        }
        case SignalSpec::Type::square: {
            const double phase = std::fmod(t - spec.delay, spec.period);
            const double p = phase < 0.0 ? phase + spec.period : phase;
            return spec.offset + (p < 0.5 * spec.period ? spec.amplitude : -spec.amplitude);
        }
    }
    return 0.0;
}

}  // namespace crmadapt::sim
