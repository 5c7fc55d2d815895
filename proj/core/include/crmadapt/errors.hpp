#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace crmadapt {

// Malformed or inconsistent scenario input. `path` names the offending field
// (e.g. "plant.den" or "ell[1]").
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& what)
        : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

// A structural assumption of the chosen controller family does not hold
// (minimum phase, relative degree, SPR certificate, ...). `certificate` names it.
class PreconditionError : public std::runtime_error {
public:
    PreconditionError(std::string certificate, const std::string& what)
        : std::runtime_error(certificate + ": " + what), certificate_(std::move(certificate)) {}

    const std::string& certificate() const noexcept { return certificate_; }

private:
    std::string certificate_;
};

// Some integrated signal left the admissible range during a run.
class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string signal, double time, const std::string& what)
        : std::runtime_error(what), signal_(std::move(signal)), time_(time) {}

    const std::string& signal() const noexcept { return signal_; }
    double time() const noexcept { return time_; }

private:
    std::string signal_;
    double time_;
};

}  // namespace crmadapt
