#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>
#include <thread>

#include "crmadapt/errors.hpp"
#include "crmadapt/lintf/spr.hpp"
#include "crmadapt/sim/norms.hpp"
#include "crmadapt/sim/simulate.hpp"
#include "scenario_io.hpp"
#include "svg.hpp"

namespace crmadapt::cli {

namespace fs = std::filesystem;
using lintf::Polynomial;
using lintf::RationalTransfer;

namespace {

template <class F>
int guarded(F&& f, std::ostream& err) {
    try {
        return f();
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfig;
    } catch (const PreconditionError& e) {
        err << "precondition failed: " << e.what() << '\n';
        return kPrecondition;
    } catch (const DivergenceError& e) {
        err << e.what() << " (signal " << e.signal() << ")\n";
        return kDivergence;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kFailure;
    }
}

std::string g17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty() || !out.empty()) {
        out.push_back(cur);
    }
    return out;
}

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream f(p, std::ios::binary);
    if (!f) {
        throw std::runtime_error("cannot write " + p.string());
    }
    f << content;
}

void write_run(const fs::path& dir, const sim::Scenario& resolved, const sim::SimTrace& trace,
               bool with_plot) {
    fs::create_directories(dir);
    std::ostringstream csv;
    sim::write_csv(trace, csv);
    write_file(dir / "trace.csv", csv.str());
    write_file(dir / "scenario.json", scenario_to_json(resolved).dump(2) + "\n");
    if (with_plot) {
        std::ostringstream svg;
        write_svg(trace, svg);
        write_file(dir / "plot.svg", svg.str());
    }
}

void print_bound_table(const std::vector<bounds::BoundReport>& reports, std::ostream& out) {
    out << std::left << std::setw(14) << "bound" << std::setw(16) << "analytic" << std::setw(16)
        << "empirical"
        << "satisfied\n";
    for (const auto& r : reports) {
        out << std::setw(14) << r.bound_name;
        if (r.available) {
            out << std::setw(16) << g6(r.analytic_value) << std::setw(16) << g6(r.empirical_value)
                << (r.satisfied ? "yes" : "NO");
        } else {
            out << "unavailable: " << r.note;
        }
        out << '\n';
    }
}

}  // namespace

std::vector<std::complex<double>> parse_poles(const std::string& text, const std::string& flag) {
    static const std::regex re(
        R"(^([+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?(?:([+-](?:\d+\.?\d*|\.\d+)?(?:[eE][+-]?\d+)?)[ij])?$)");
    std::vector<std::complex<double>> out;
    const auto parts = split(text);
    if (parts.empty()) {
        throw ConfigError(flag, "no poles given");
    }
    for (const auto& p : parts) {
        std::smatch m;
        if (p.empty() || !std::regex_match(p, m, re) || (!m[1].matched && !m[2].matched)) {
            throw ConfigError(flag, "cannot parse pole '" + p + "'");
        }
        const double re_part = m[1].matched ? std::stod(m[1].str()) : 0.0;
        double im = 0.0;
        if (m[2].matched) {
            const std::string s = m[2].str();
            im = (s == "+" ? 1.0 : s == "-" ? -1.0 : std::stod(s));
        }
        out.emplace_back(re_part, im);
    }
    return out;
}

std::vector<double> parse_values(const std::string& text, const std::string& flag) {
    std::vector<double> out;
    for (const auto& p : split(text)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(p, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (p.empty() || used != p.size() || !std::isfinite(v)) {
            throw ConfigError(flag, "cannot parse value '" + p + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ConfigError(flag, "empty value list");
    }
    return out;
}

std::string poly_string(const Polynomial& p) {
    if (p.is_zero()) {
        return "0";
    }
    std::string s;
    const int d = p.degree();
    for (int k = d; k >= 0; --k) {
        const double c = p.coefficient(k);
        if (c == 0.0) {
            continue;
        }
        const double a = std::abs(c);
        if (s.empty()) {
            s += c < 0 ? "-" : "";
        } else {
            s += c < 0 ? " - " : " + ";
        }
        if (k == 0 || a != 1.0) {
            s += g6(a);
            if (k > 0) {
                s += " ";
            }
        }
        if (k >= 1) {
            s += "s";
        }
        if (k >= 2) {
            s += "^" + std::to_string(k);
        }
    }
    return s;
}

std::string transfer_string(const RationalTransfer& w) {
    return g6(w.gain()) + " (" + poly_string(w.numerator()) + ") / (" + poly_string(w.denominator()) + ")";
}

unsigned thread_cap() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("CRMADAPT_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) {
            return static_cast<unsigned>(std::min<long>(v, 1024));
        }
    }
    return hw;
}

bounds::BoundReport primary_bound(const sim::ClosedLoop& loop, const sim::SimTrace& trace) {
    const auto reports = bounds::evaluate_bounds(loop, trace);
    for (const auto& r : reports) {
        if (r.bound_name == "ey_crm1" || r.bound_name == "ea") {
            return r;
        }
    }
    return bounds::unavailable("none", "no closed-form bound for this family");
}

sim::Scenario apply_param(sim::Scenario sc, const std::string& param, double value) {
    const Eigen::Index m = sc.reference.denominator().degree();
    if (param == "gamma") {
        sc.gamma = value;
    } else if (param == "f1") {
        if (!controllers::is_augmented(sc.family)) {
            throw ConfigError("param", "f1 applies to augmented-error families only");
        }
        if (sc.filter_f.empty()) {
            sc.filter_f.assign(
                static_cast<std::size_t>(std::max(0, sc.plant.relative_degree() - 1)), 1.0);
        }
        if (sc.filter_f.empty()) {
            throw ConfigError("param", "relative degree one loop has no filter pole");
        }
        sc.filter_f[0] = value;
    } else if (param == "l" || (param.size() > 1 && param[0] == 'l' &&
                                param.find_first_not_of("0123456789", 1) == std::string::npos)) {
        Eigen::Index idx = 0;
        if (param == "l") {
            if (m != 1) {
                throw ConfigError("param", "'l' needs a first-order reference model; use l1..l" +
                                               std::to_string(m));
            }
        } else {
            idx = std::stol(param.substr(1)) - 1;
            if (idx < 0 || idx >= m) {
                throw ConfigError("param", "ell index out of range 1.." + std::to_string(m));
            }
        }
        if (sc.ell.size() == 0) {
            sc.ell = Vector::Zero(m);
        }
        if (sc.ell.size() != m) {
            throw ConfigError("ell", "expected " + std::to_string(m) + " entries");
        }
        sc.ell(idx) = -value;
    } else {
        throw ConfigError("param", "unknown sweep parameter '" + param + "'");
    }
    return sc;
}

std::vector<SweepRow> run_sweep(const sim::Scenario& base, const std::string& param,
                                const std::vector<double>& values, unsigned threads,
                                const std::optional<std::string>& out_dir) {
    if (values.empty()) {
        throw ConfigError("values", "empty value list");
    }
    std::vector<sim::Scenario> scenarios;
    for (double v : values) {
        scenarios.push_back(apply_param(base, param, v));
    }
    std::vector<SweepRow> rows(values.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < rows.size(); i = next++) {
            SweepRow& row = rows[i];
            row.value = values[i];
            std::ostringstream err;
            row.exit_code = guarded(
                [&] {
                    const sim::ClosedLoop loop = sim::build_closed_loop(scenarios[i]);
                    const sim::SimTrace trace = sim::simulate(loop);
                    row.ey_l2 = std::sqrt(trace.int_ey2);
                    row.bound = primary_bound(loop, trace);
                    if (out_dir) {
                        write_run(fs::path(*out_dir) / ("run_" + std::to_string(i)), loop.scenario(),
                                  trace, false);
                    }
                    return static_cast<int>(kOk);
                },
                err);
            row.error = err.str();
            while (!row.error.empty() && row.error.back() == '\n') {
                row.error.pop_back();
            }
        }
    };
    const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(rows.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    return rows;
}

CompareResult run_compare(const sim::Scenario& sc) {
    if (sc.family == sim::Family::orm_n1) {
        throw ConfigError("family", "compare needs a closed-loop reference model family");
    }
    sim::Scenario orm = sc;
    orm.ell = Vector::Zero(sc.reference.denominator().degree());

    CompareResult out;
    const auto run = [](const sim::Scenario& s, double& l2, bounds::BoundReport& b) {
        const sim::ClosedLoop loop = sim::build_closed_loop(s);
        const sim::SimTrace trace = sim::simulate(loop);
        l2 = std::sqrt(trace.int_ey2);
        b = primary_bound(loop, trace);
    };
    run(sc, out.crm_ey_l2, out.crm_bound);
    run(orm, out.orm_ey_l2, out.orm_bound);
    out.ratio = out.crm_ey_l2 == out.orm_ey_l2 ? 1.0 : out.crm_ey_l2 / out.orm_ey_l2;
    return out;
}

int cmd_simulate(const std::string& config, const std::string& out_dir, std::ostream& out,
                 std::ostream& err) {
    return guarded(
        [&] {
            const sim::Scenario sc = load_scenario(config);
            const sim::ClosedLoop loop = sim::build_closed_loop(sc);
            const sim::SimTrace trace = sim::simulate(loop);
            write_run(fs::path(out_dir), loop.scenario(), trace, true);
            out << "steps " << trace.size() - 1 << ", |e_y|_2 = " << g6(std::sqrt(trace.int_ey2))
                << ", final |e_y| = " << g6(std::abs(trace.ey.back())) << '\n';
            out << "wrote " << (fs::path(out_dir) / "trace.csv").string() << ", scenario.json, plot.svg\n";
            return static_cast<int>(kOk);
        },
        err);
}

int cmd_design_gain(const std::string& config, const std::string& targets, std::ostream& out,
                    std::ostream& err) {
    return guarded(
        [&] {
            const sim::Scenario sc = load_scenario(config);
            const auto poles = parse_poles(targets, "targets");
            Vector ell;
            try {
                ell = realize::design_gain(sc.reference, poles);
            } catch (const std::invalid_argument& e) {
                throw ConfigError("targets", e.what());
            }
            out << "ell = [";
            for (Eigen::Index i = 0; i < ell.size(); ++i) {
                out << (i ? ", " : "") << g17(ell(i));
            }
            out << "]\n";
            const auto we = realize::crm_error_tf(sc.reference, ell).we.prime();
            out << "W'_e = " << transfer_string(we) << '\n';
            auto cert = lintf::is_spr(we);
            std::string what = "W'_e";
            if (controllers::is_augmented(sc.family) && !sc.filter_f.empty()) {
                const controllers::FilterChain F(sc.filter_f);
                const RationalTransfer wf(1.0, we.numerator() * F.denominator(), we.denominator());
                out << "W_f = " << transfer_string(wf) << '\n';
                cert = lintf::is_spr(wf);
                what = "W_f";
            } else if (sc.family == sim::Family::crm_n2) {
                const RationalTransfer wa(1.0, we.numerator() * Polynomial{1.0, sc.filter_a},
                                          we.denominator());
                out << "W'_e A = " << transfer_string(wa) << '\n';
                cert = lintf::is_spr(wa);
                what = "W'_e A";
            }
            out << "SPR(" << what << ") = " << (cert.verdict ? "true" : "false") << " (" << cert.reason
                << ", margin " << g6(cert.min_real_part_margin) << ")\n";
            return static_cast<int>(kOk);
        },
        err);
}

int cmd_check_spr(const std::string& config, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            const sim::Scenario sc = load_scenario(config);
            const RationalTransfer wm = sc.family == sim::Family::crm_high_known ? sc.reference.prime()
                                                                                  : sc.reference;
            const Vector ell = sc.ell.size() ? sc.ell : Vector::Zero(wm.denominator().degree());
            RationalTransfer w = realize::crm_error_tf(wm, ell).we.prime();
            std::string name = "W'_e";
            if (sc.family == sim::Family::crm_n2) {
                w = RationalTransfer(1.0, w.numerator() * Polynomial{1.0, sc.filter_a}, w.denominator());
                name = "W'_e A";
            } else if (controllers::is_augmented(sc.family)) {
                std::vector<double> f = sc.filter_f;
                if (f.empty()) {
                    f.assign(static_cast<std::size_t>(std::max(0, sc.plant.relative_degree() - 1)), 1.0);
                }
                const controllers::FilterChain F(f);
                w = RationalTransfer(1.0, w.numerator() * F.denominator(), w.denominator());
                name = "W'_f";
            }
            const auto cert = lintf::is_spr(w);
            json j{{"transfer", name},
                   {"tf", transfer_to_json(w)},
                   {"verdict", cert.verdict},
                   {"min_real_part_margin", cert.min_real_part_margin},
                   {"argmin_omega", cert.argmin_omega},
                   {"hurwitz_margin", cert.hurwitz_margin},
                   {"grid_size", cert.grid_size},
                   {"limit_check", cert.limit_check},
                   {"reason", cert.reason}};
            out << j.dump(2) << '\n';
            return static_cast<int>(cert.verdict ? kOk : kPrecondition);
        },
        err);
}

int cmd_bound(const std::string& config, const std::optional<std::string>& out_dir, std::ostream& out,
              std::ostream& err) {
    return guarded(
        [&] {
            const sim::Scenario sc = load_scenario(config);
            const sim::ClosedLoop loop = sim::build_closed_loop(sc);
            const sim::SimTrace trace = sim::simulate(loop);
            const auto reports = bounds::evaluate_bounds(loop, trace);
            print_bound_table(reports, out);
            if (out_dir) {
                fs::create_directories(*out_dir);
                json arr = json::array();
                for (const auto& r : reports) {
                    arr.push_back(bound_to_json(r));
                }
                write_file(fs::path(*out_dir) / "bounds.json", arr.dump(2) + "\n");
            }
            return static_cast<int>(kOk);
        },
        err);
}

int cmd_sweep(const std::string& config, const std::string& param, const std::string& values,
              const std::optional<std::string>& out_dir, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            const sim::Scenario sc = load_scenario(config);
            const auto vals = parse_values(values, "values");
            const auto rows = run_sweep(sc, param, vals, thread_cap(), out_dir);
            out << "param,value,ey_l2,bound_name,empirical,analytic,satisfied\n";
            int code = kOk;
            for (const auto& r : rows) {
                out << param << ',' << g17(r.value) << ',';
                if (r.exit_code != kOk) {
                    out << ",,,,error: " << r.error << '\n';
                    if (code == kOk) {
                        code = r.exit_code;
                    }
                    continue;
                }
                out << g17(r.ey_l2) << ',' << r.bound.bound_name << ',';
                if (r.bound.available) {
                    out << g17(r.bound.empirical_value) << ',' << g17(r.bound.analytic_value) << ','
                        << (r.bound.satisfied ? "true" : "false");
                } else {
                    out << ",,unavailable";
                }
                out << '\n';
            }
            return code;
        },
        err);
}

int cmd_compare(const std::string& config, std::ostream& out, std::ostream& err) {
    return guarded(
        [&] {
            const sim::Scenario sc = load_scenario(config);
            const CompareResult r = run_compare(sc);
            json j{{"crm", {{"ey_l2", r.crm_ey_l2}, {"bound", bound_to_json(r.crm_bound)}}},
                   {"orm", {{"ey_l2", r.orm_ey_l2}, {"bound", bound_to_json(r.orm_bound)}}},
                   {"ratio", r.ratio}};
            out << j.dump(2) << '\n';
            return static_cast<int>(kOk);
        },
        err);
}

}  // namespace crmadapt::cli
