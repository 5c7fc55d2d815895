#include "crmadapt/sim/simulate.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include "crmadapt/errors.hpp"

namespace crmadapt::sim {

namespace {

std::string snapshot(const Vector& x) {
    std::ostringstream os;
    os.precision(17);
    os << "[";
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        os << (i ? ", " : "") << x(i);
    }
    os << "]";
    return os.str();
}

void check_finite(const Vector& dx, const Vector& x, double t) {
    if (!dx.allFinite()) {
        throw DivergenceError("derivative", t,
                              "non-finite derivative at t=" + std::to_string(t) +
                                  ", state=" + snapshot(x));
    }
}

}  // namespace

Vector rk4_step(const DerivativeFn& f, const Vector& x, double t, double h) {
    const Vector k1 = f(t, x);
    check_finite(k1, x, t);
    const Vector k2 = f(t + 0.5 * h, x + 0.5 * h * k1);
    check_finite(k2, x, t);
    const Vector k3 = f(t + 0.5 * h, x + 0.5 * h * k2);
    check_finite(k3, x, t);
    const Vector k4 = f(t + h, x + h * k3);
    check_finite(k4, x, t);
    return x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Vector SimTrace::state_block(std::size_t k, const Block& b) const {
    const auto n = static_cast<std::size_t>(layout.total);
    if (states.size() < (k + 1) * n) {
        throw std::out_of_range("state_block: states were not recorded");
    }
    return Eigen::Map<const Vector>(states.data() + k * n + static_cast<std::size_t>(b.offset), b.size);
}

SimTrace simulate(const ClosedLoop& loop, const SimOptions& options) {
    const Scenario& sc = loop.scenario();
    const std::size_t steps = loop.steps();
    const double h = sc.h;

    SimTrace tr;
    tr.family = sc.family;
    tr.h = h;
    tr.layout = loop.layout();
    tr.theta_star = loop.theta_star();
    const std::size_t count = steps + 1;
    for (auto* v : {&tr.t, &tr.r, &tr.y, &tr.ym, &tr.ey, &tr.u, &tr.theta_norm, &tr.thetadot_norm,
                    &tr.omega_bar_norm}) {
        v->reserve(count);
    }
    if (tr.augmented()) {
        for (auto* v : {&tr.ea, &tr.echi, &tr.reconstruction_error}) {
            v->reserve(count);
        }
    }
    if (tr.has_kchi()) {
        tr.kchi.reserve(count);
    }
    const auto nx = static_cast<std::size_t>(loop.layout().total);
    if (options.record_states) {
        tr.states.reserve(count * nx);
    }

    Vector x = loop.initial_state();
    Vector k1(x.size()), k2(x.size()), k3(x.size()), k4(x.size()), tmp(x.size());
    const auto blocks = loop.layout().blocks();

    for (std::size_t k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) * h;
        LoopSignals s;
        loop.derivative(t, x, k1, &s);
        check_finite(k1, x, t);

        tr.t.push_back(t);
        tr.r.push_back(s.r);
        tr.y.push_back(s.y);
        tr.ym.push_back(s.ym);
        tr.ey.push_back(s.ey);
        tr.u.push_back(s.u);
        tr.theta_norm.push_back(s.theta_norm);
        tr.thetadot_norm.push_back(s.thetadot_norm);
        tr.omega_bar_norm.push_back(s.omega_bar_norm);
        if (tr.augmented()) {
            tr.ea.push_back(s.ea);
            tr.echi.push_back(s.echi);
            tr.reconstruction_error.push_back(s.reconstruction_error);
        }
        if (tr.has_kchi()) {
            tr.kchi.push_back(s.kchi);
        }
        if (options.record_states) {
            tr.states.insert(tr.states.end(), x.data(), x.data() + nx);
        }
        if (k == steps) {
            break;
        }

        tmp = x + (0.5 * h) * k1;
        loop.derivative(t + 0.5 * h, t, tmp, k2);
        check_finite(k2, x, t);
        tmp = x + (0.5 * h) * k2;
        loop.derivative(t + 0.5 * h, t, tmp, k3);
        check_finite(k3, x, t);
        tmp = x + h * k3;
        loop.derivative(t + h, t, tmp, k4);
        check_finite(k4, x, t);
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        for (const Block* b : blocks) {
            if (b->size == 0) {
                continue;
            }
            const double norm = x.segment(b->offset, b->size).norm();
            if (!(norm <= kDivergenceThreshold)) {
                throw DivergenceError(b->name, t + h,
                                      "divergence: " + b->name + " norm exceeded 1e9 at t=" +
                                          std::to_string(t + h));
            }
        }
    }

    const Eigen::Index q = loop.layout().integrals.offset;
    tr.int_ey2 = x(q);
    tr.int_ea2 = x(q + 1);
    tr.int_thetadot2 = x(q + 2);
    return tr;
}

SimTrace simulate(const Scenario& sc, const SimOptions& options) {
    return simulate(build_closed_loop(sc), options);
}

void write_csv(const SimTrace& trace, std::ostream& os) {
    os << "t,r,y,ym,ey,u,theta_norm";
    if (trace.augmented()) {
        os << ",ea,echi";
        if (trace.has_kchi()) {
            os << ",kchi";
        }
    }
    os << '\n';
    char buf[32];
    const auto put = [&](double v, bool first = false) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        if (!first) {
            os << ',';
        }
        os << buf;
    };
    for (std::size_t k = 0; k < trace.size(); ++k) {
        put(trace.t[k], true);
        put(trace.r[k]);
        put(trace.y[k]);
        put(trace.ym[k]);
        put(trace.ey[k]);
        put(trace.u[k]);
        put(trace.theta_norm[k]);
        if (trace.augmented()) {
            put(trace.ea[k]);
            put(trace.echi[k]);
            if (trace.has_kchi()) {
                put(trace.kchi[k]);
            }
        }
        os << '\n';
    }
}

}  // namespace crmadapt::sim
