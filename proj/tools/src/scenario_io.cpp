#include "scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "crmadapt/errors.hpp"

namespace crmadapt::cli {

namespace {

using lintf::Polynomial;
using lintf::RationalTransfer;

std::string at(const std::string& path, const std::string& key) {
    return path.empty() ? key : path + "." + key;
}

std::string at(const std::string& path, std::size_t i) {
    return path + "[" + std::to_string(i) + "]";
}

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    const std::set<std::string> allowed(keys.begin(), keys.end());
    for (const auto& [k, _] : j.items()) {
        if (!allowed.contains(k)) {
            throw ConfigError(at(path, k), "unknown key");
        }
    }
}

double number(const json& j, const std::string& path) {
    if (!j.is_number()) {
        throw ConfigError(path, "expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ConfigError(path, "expected a finite number");
    }
    return v;
}

std::vector<double> numbers(const json& j, const std::string& path) {
    if (!j.is_array()) {
        throw ConfigError(path, "expected an array of numbers");
    }
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) {
        v.push_back(number(j[i], at(path, i)));
    }
    return v;
}

Vector vector_of(const json& j, const std::string& path) {
    const auto v = numbers(j, path);
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Matrix matrix_of(const json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError(path, "expected a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    Matrix M(rows, rows);
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto row = numbers(j[i], at(path, i));
        if (static_cast<Eigen::Index>(row.size()) != rows) {
            throw ConfigError(at(path, i), "matrix must be square");
        }
        for (std::size_t k = 0; k < row.size(); ++k) {
            M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = row[k];
        }
    }
    return M;
}

const json& required(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) {
        throw ConfigError(at(path, key), "missing required key");
    }
    return j.at(key);
}

RationalTransfer transfer_of(const json& j, const std::string& path) {
    only_keys(j, path, {"k", "num", "den"});
    const double k = j.contains("k") ? number(j["k"], at(path, "k")) : 1.0;
    const Polynomial num(numbers(required(j, path, "num"), at(path, "num")));
    const Polynomial den(numbers(required(j, path, "den"), at(path, "den")));
    if (num.is_zero() || k == 0.0) {
        throw ConfigError(path, "degenerate transfer function");
    }
    if (den.is_zero()) {
        throw ConfigError(at(path, "den"), "zero denominator");
    }
    if (num.degree() >= den.degree()) {
        throw ConfigError(path, "transfer function must be strictly proper");
    }
    if (num.is_monic() && den.is_monic()) {
        // keeps resolved scenarios bit-exact on reload
        return {k, num, den};
    }
    return lintf::make_transfer(k * num, den);
}

RationalTransfer reference_of(const json& j, const std::string& path) {
    if (j.is_object() && j.contains("state_space")) {
        only_keys(j, path, {"state_space"});
        const std::string p = at(path, "state_space");
        const json& ss = j["state_space"];
        only_keys(ss, p, {"A", "b", "c"});
        const StateSpaceModel model{matrix_of(required(ss, p, "A"), at(p, "A")),
                                    vector_of(required(ss, p, "b"), at(p, "b")),
                                    vector_of(required(ss, p, "c"), at(p, "c"))};
        if (model.b.size() != model.order() || model.c.size() != model.order()) {
            throw ConfigError(p, "b and c must match the dimension of A");
        }
        const auto data = characteristic_data(model);
        const Polynomial num(data.numerator);
        if (num.is_zero()) {
            throw ConfigError(p, "realization has a zero transfer function");
        }
        return lintf::make_transfer(num, Polynomial(data.denominator));
    }
    return transfer_of(j, path);
}

sim::SignalSpec signal_of(const json& j, const std::string& path) {
    sim::SignalSpec s;
    if (!j.is_object()) {
        throw ConfigError(path, "expected an object");
    }
    const json& type = required(j, path, "type");
    if (!type.is_string()) {
        throw ConfigError(at(path, "type"), "expected a string");
    }
    const std::string t = type.get<std::string>();
    const auto num_or = [&](const char* key, double fallback) {
        return j.contains(key) ? number(j[key], at(path, key)) : fallback;
    };
    if (t == "step") {
        only_keys(j, path, {"type", "amplitude", "offset", "delay"});
        s.type = sim::SignalSpec::Type::step;
    } else if (t == "sine") {
        only_keys(j, path, {"type", "amplitude", "offset", "frequency", "phase"});
        s.type = sim::SignalSpec::Type::sine;
    } else if (t == "square") {
        only_keys(j, path, {"type", "amplitude", "offset", "delay", "period"});
        s.type = sim::SignalSpec::Type::square;
    } else if (t == "multisine") {
        only_keys(j, path, {"type", "offset", "components"});
        s.type = sim::SignalSpec::Type::multisine;
        const std::string cp = at(path, "components");
        const json& comps = required(j, path, "components");
        if (!comps.is_array() || comps.empty()) {
            throw ConfigError(cp, "expected a non-empty array");
        }
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string p = at(cp, i);
            only_keys(comps[i], p, {"amplitude", "frequency", "phase"});
            sim::SineComponent c;
            c.amplitude = comps[i].contains("amplitude") ? number(comps[i]["amplitude"], at(p, "amplitude")) : 1.0;
            c.frequency = number(required(comps[i], p, "frequency"), at(p, "frequency"));
            c.phase = comps[i].contains("phase") ? number(comps[i]["phase"], at(p, "phase")) : 0.0;
            s.components.push_back(c);
        }
    } else {
        throw ConfigError(at(path, "type"), "unknown signal type '" + t + "'");
    }
    s.amplitude = num_or("amplitude", s.amplitude);
    s.offset = num_or("offset", s.offset);
    s.delay = num_or("delay", s.delay);
    s.frequency = num_or("frequency", s.frequency);
    s.phase = num_or("phase", s.phase);
    s.period = num_or("period", s.period);
    if (s.type == sim::SignalSpec::Type::square && !(s.period > 0.0)) {
        throw ConfigError(at(path, "period"), "must be positive");
    }
    return s;
}

}  // namespace

sim::Scenario scenario_from_json(const json& j) {
    only_keys(j, "", {"plant", "reference", "ell", "family", "gamma", "filter", "signal", "T", "h",
                      "theta0", "seed", "lambda0", "kchi0", "plant_x0", "reference_x0"});
    sim::Scenario sc;
    sc.plant = transfer_of(required(j, "", "plant"), "plant");
    sc.reference = reference_of(required(j, "", "reference"), "reference");
    if (j.contains("ell")) {
        sc.ell = vector_of(j["ell"], "ell");
    }
    const json& fam = required(j, "", "family");
    if (!fam.is_string()) {
        throw ConfigError("family", "expected a string");
    }
    const auto f = controllers::parse_family(fam.get<std::string>());
    if (!f) {
        throw ConfigError("family", "unknown controller family '" + fam.get<std::string>() + "'");
    }
    sc.family = *f;
    if (j.contains("gamma")) {
        sc.gamma = number(j["gamma"], "gamma");
    }
    if (j.contains("filter")) {
        const json& flt = j["filter"];
        only_keys(flt, "filter", {"a", "f"});
        if (flt.contains("a")) {
            sc.filter_a = number(flt["a"], "filter.a");
        }
        if (flt.contains("f")) {
            sc.filter_f = numbers(flt["f"], "filter.f");
        }
    }
    if (j.contains("signal")) {
        sc.signal = signal_of(j["signal"], "signal");
    }
    if (j.contains("T")) {
        sc.T = number(j["T"], "T");
    }
    if (j.contains("h")) {
        sc.h = number(j["h"], "h");
    }
    if (j.contains("theta0")) {
        const json& t = j["theta0"];
        if (t.is_string()) {
            const std::string kind = t.get<std::string>();
            if (kind == "zeros") {
                sc.theta0.kind = sim::ThetaInit::Kind::zeros;
            } else if (kind == "random") {
                sc.theta0.kind = sim::ThetaInit::Kind::random;
            } else if (kind == "matched") {
                sc.theta0.kind = sim::ThetaInit::Kind::matched;
            } else {
                throw ConfigError("theta0", "expected zeros, random, matched or an array");
            }
        } else {
            sc.theta0.kind = sim::ThetaInit::Kind::values;
            sc.theta0.values = vector_of(t, "theta0");
        }
    }
    if (j.contains("seed")) {
        const json& s = j["seed"];
        if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<long long>() >= 0)) {
            throw ConfigError("seed", "expected a non-negative integer");
        }
        sc.seed = s.get<std::uint64_t>();
    }
    if (j.contains("lambda0")) {
        sc.lambda0 = Polynomial(numbers(j["lambda0"], "lambda0"));
    }
    if (j.contains("kchi0")) {
        sc.kchi0 = number(j["kchi0"], "kchi0");
    }
    if (j.contains("plant_x0")) {
        sc.plant_x0 = vector_of(j["plant_x0"], "plant_x0");
    }
    if (j.contains("reference_x0")) {
        sc.reference_x0 = vector_of(j["reference_x0"], "reference_x0");
    }
    return sc;
}

sim::Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("config", "cannot open '" + path + "'");
    }
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config", std::string("malformed JSON: ") + e.what());
    }
    return scenario_from_json(j);
}

namespace {

json array_of(const Vector& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        a.push_back(v(i));
    }
    return a;
}

}  // namespace

json transfer_to_json(const RationalTransfer& w) {
    return {{"k", w.gain()}, {"num", w.numerator().coefficients()}, {"den", w.denominator().coefficients()}};
}

json scenario_to_json(const sim::Scenario& sc) {
    json j;
    j["plant"] = transfer_to_json(sc.plant);
    j["reference"] = transfer_to_json(sc.reference);
    j["ell"] = array_of(sc.ell);
    j["family"] = std::string(controllers::family_name(sc.family));
    j["gamma"] = sc.gamma;
    json filter = json::object();
    if (sc.family == sim::Family::crm_n2) {
        filter["a"] = sc.filter_a;
    }
    if (controllers::is_augmented(sc.family)) {
        filter["f"] = sc.filter_f;
    }
    j["filter"] = filter;

    json s;
    switch (sc.signal.type) {
        case sim::SignalSpec::Type::step:
            s = {{"type", "step"}, {"amplitude", sc.signal.amplitude}, {"offset", sc.signal.offset},
                 {"delay", sc.signal.delay}};
            break;
        case sim::SignalSpec::Type::sine:
            s = {{"type", "sine"}, {"amplitude", sc.signal.amplitude}, {"offset", sc.signal.offset},
                 {"frequency", sc.signal.frequency}, {"phase", sc.signal.phase}};
            break;
        case sim::SignalSpec::Type::square:
            s = {{"type", "square"}, {"amplitude", sc.signal.amplitude}, {"offset", sc.signal.offset},
                 {"delay", sc.signal.delay}, {"period", sc.signal.period}};
            break;
        case sim::SignalSpec::Type::multisine: {
            json comps = json::array();
            for (const auto& c : sc.signal.components) {
                comps.push_back({{"amplitude", c.amplitude}, {"frequency", c.frequency}, {"phase", c.phase}});
            }
            s = {{"type", "multisine"}, {"offset", sc.signal.offset}, {"components", comps}};
            break;
        }
    }
    j["signal"] = s;
    j["T"] = sc.T;
    j["h"] = sc.h;
    j["theta0"] = array_of(sc.theta0.values);
    j["seed"] = sc.seed;
    if (sc.lambda0) {
        j["lambda0"] = sc.lambda0->coefficients();
    }
    if (sc.family == sim::Family::crm_high_unknown) {
        j["kchi0"] = sc.kchi0;
    }
    j["plant_x0"] = array_of(sc.plant_x0);
    j["reference_x0"] = array_of(sc.reference_x0);
    return j;
}

json bound_to_json(const bounds::BoundReport& r) {
    json inputs = json::object();
    for (const auto& [k, v] : r.inputs) {
        inputs[k] = v;
    }
    json j{{"bound", r.bound_name}, {"available", r.available}};
    if (r.available) {
        j["analytic"] = r.analytic_value;
        j["empirical"] = r.empirical_value;
        j["satisfied"] = r.satisfied;
        j["inputs"] = inputs;
    }
    if (!r.note.empty()) {
        j["note"] = r.note;
    }
    return j;
}

}  // namespace crmadapt::cli
