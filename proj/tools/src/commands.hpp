#pragma once

#include <complex>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "crmadapt/bounds/bounds.hpp"
#include "crmadapt/sim/scenario.hpp"

namespace crmadapt::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kConfig = 2, kPrecondition = 3, kDivergence = 4 };

// "-2,-4" or "-1+2j,-1-2j"; throws ConfigError(flag, ...) on malformed input.
std::vector<std::complex<double>> parse_poles(const std::string& text, const std::string& flag);
std::vector<double> parse_values(const std::string& text, const std::string& flag);

std::string poly_string(const lintf::Polynomial& p);
std::string transfer_string(const lintf::RationalTransfer& w);

// Threads used by sweeps: CRMADAPT_THREADS when set, else hardware concurrency.
unsigned thread_cap();

// The headline bound of a family: ey_crm1 for n* = 1 loops, ea for the
// known-k_p augmented loop, unavailable otherwise.
bounds::BoundReport primary_bound(const sim::ClosedLoop& loop, const sim::SimTrace& trace);

// Sweep parameters: "l" (single-entry ell = -value), "l1".."lm" (entry i of
// ell = -value), "gamma", "f1" (first augmented filter pole).
sim::Scenario apply_param(sim::Scenario sc, const std::string& param, double value);

struct SweepRow {
    double value = 0.0;
    double ey_l2 = 0.0;
    bounds::BoundReport bound;
    int exit_code = kOk;
    std::string error;
};
std::vector<SweepRow> run_sweep(const sim::Scenario& base, const std::string& param,
                                const std::vector<double>& values, unsigned threads,
                                const std::optional<std::string>& out_dir = std::nullopt);

struct CompareResult {
    double crm_ey_l2 = 0.0;
    double orm_ey_l2 = 0.0;
    bounds::BoundReport crm_bound;
    bounds::BoundReport orm_bound;
    double ratio = 1.0;  // crm_ey_l2 / orm_ey_l2
};
CompareResult run_compare(const sim::Scenario& sc);

int cmd_simulate(const std::string& config, const std::string& out_dir, std::ostream& out,
                 std::ostream& err);
int cmd_design_gain(const std::string& config, const std::string& targets, std::ostream& out,
                    std::ostream& err);
int cmd_check_spr(const std::string& config, std::ostream& out, std::ostream& err);
int cmd_bound(const std::string& config, const std::optional<std::string>& out_dir, std::ostream& out,
              std::ostream& err);
int cmd_sweep(const std::string& config, const std::string& param, const std::string& values,
              const std::optional<std::string>& out_dir, std::ostream& out, std::ostream& err);
int cmd_compare(const std::string& config, std::ostream& out, std::ostream& err);

}  // namespace crmadapt::cli
