#include "chiral/model.hpp"

#include "chiral/errors.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

namespace chiral {

namespace {

constexpr double kTwoPi = 2.0 * kPi;

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

void ChainConfig::validate() const {
    if (n_atoms < 1) {
        throw DomainError("n_atoms must be >= 1, got " + std::to_string(n_atoms));
    }
    if (!(xi >= 0.0 && xi <= kTwoPi)) {
        throw DomainError("xi must lie in [0, 2pi], got " + std::to_string(xi));
    }
    if (!(directionality >= -1.0 && directionality <= 1.0)) {
        throw DomainError("directionality must lie in [-1, 1], got " +
                          std::to_string(directionality));
    }
    if (!(rabi >= 0.0) || !std::isfinite(rabi)) {
        throw DomainError("rabi must be finite and >= 0, got " + std::to_string(rabi));
    }
    if (!std::isfinite(theta_s)) {
        throw DomainError("theta_s must be finite");
    }
    const bool finite_detuning = std::visit(
        overloaded{[](const UniformDetuning& d) { return std::isfinite(d.delta0); },
                   [](const LinearDetuning& d) { return std::isfinite(d.slope); },
                   [](const HarmonicDetuning& d) { return std::isfinite(d.curvature); }},
        detuning);
    if (!finite_detuning) {
        throw DomainError("detuning parameter must be finite");
    }
}

GammaRates gamma_rates(double directionality) {
    if (!(directionality >= -1.0 && directionality <= 1.0)) {
        throw DomainError("directionality must lie in [-1, 1], got " +
                          std::to_string(directionality));
    }
    const double right = 0.5 * (1.0 + directionality);
    // left = 1 - right keeps the sum exactly 1 in floating point
    return {1.0 - right, right};
}

double detuning_at(const DetuningProfile& profile, int mu, int n) {
    if (n < 1 || mu < 1 || mu > n) {
        throw DomainError("site index " + std::to_string(mu) + " outside 1.." +
                          std::to_string(n));
    }
    return std::visit(
        overloaded{
            [](const UniformDetuning& d) { return d.delta0; },
            [&](const LinearDetuning& d) {
                return d.slope / static_cast<double>(n) * static_cast<double>(mu - 1);
            },
            [&](const HarmonicDetuning& d) {
                const double offset = static_cast<double>(mu) - 0.5 * static_cast<double>(n + 1);
                return d.curvature * offset * offset;
            }},
        profile);
}

RVector detuning_vector(const ChainConfig& config) {
    const int n = config.n_atoms;
    RVector out(n);
    for (int mu = 1; mu <= n; ++mu) {
        out(mu - 1) = detuning_at(config.detuning, mu, n);
    }
    return out;
}

CouplingMatrix build_coupling_matrix(const ChainConfig& config) {
    config.validate();
    const int n = config.n_atoms;
    const auto [gamma_l, gamma_r] = gamma_rates(config.directionality);
    const RVector delta = detuning_vector(config);

    // Phase factors depend only on |μ-ν|.
    CVector phase(n);
    for (int d = 0; d < n; ++d) {
        phase(d) = std::polar(1.0, config.xi * static_cast<double>(d));
    }

    CMatrix m(n, n);
    for (int col = 0; col < n; ++col) {
        for (int row = 0; row < n; ++row) {
            if (row < col) {
                m(row, col) = -gamma_l * phase(col - row);
            } else if (row > col) {
                m(row, col) = -gamma_r * phase(row - col);
            } else {
                m(row, col) = cplx(-0.5, delta(row));
            }
        }
    }
    return CouplingMatrix(std::move(m));
}

CVector drive_vector(const ChainConfig& config) {
    config.validate();
    const int n = config.n_atoms;
    const double phase_step = std::cos(config.theta_s) * config.xi;
    CVector v(n);
    for (int mu = 0; mu < n; ++mu) {
        v(mu) = std::polar(1.0, phase_step * static_cast<double>(mu));
    }
    return v;
}

std::string detuning_type_name(const DetuningProfile& profile) {
    return std::visit(overloaded{[](const UniformDetuning&) { return std::string("uniform"); },
                                 [](const LinearDetuning&) { return std::string("linear"); },
                                 [](const HarmonicDetuning&) { return std::string("harmonic"); }},
                      profile);
}

nlohmann::json to_json(const DetuningProfile& profile) {
    nlohmann::json params = std::visit(
        overloaded{[](const UniformDetuning& d) { return nlohmann::json{{"delta0", d.delta0}}; },
                   [](const LinearDetuning& d) { return nlohmann::json{{"slope", d.slope}}; },
                   [](const HarmonicDetuning& d) {
                       return nlohmann::json{{"curvature", d.curvature}};
                   }},
        profile);
    return {{"type", detuning_type_name(profile)}, {"params", params}};
}

nlohmann::json to_json(const ChainConfig& config) {
    return {{"n_atoms", config.n_atoms},
            {"xi", config.xi},
            {"directionality", config.directionality},
            {"rabi", config.rabi},
            {"theta_s", config.theta_s},
            {"detuning", to_json(config.detuning)}};
}

namespace {

double number_at(const nlohmann::json& doc, const std::string& key) {
    const auto& value = doc.at(key);
    if (!value.is_number()) {
        throw DomainError("config key '" + key + "' must be a number");
    }
    return value.get<double>();
}

} // namespace

DetuningProfile detuning_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || !doc.contains("type") || !doc["type"].is_string()) {
        throw DomainError("config key 'detuning' must be an object with a string 'type'");
    }
    const auto type = doc["type"].get<std::string>();
    const nlohmann::json params = doc.value("params", nlohmann::json::object());
    if (!params.is_object()) {
        throw DomainError("config key 'detuning.params' must be an object");
    }
    auto param = [&](const char* name) -> double {
        for (const auto& [key, value] : params.items()) {
            if (key != name) {
                throw DomainError("unknown config key 'detuning.params." + key + "'");
            }
        }
        if (!params.contains(name)) {
            return 0.0;
        }
        if (!params[name].is_number()) {
            throw DomainError(std::string("config key 'detuning.params.") + name +
                              "' must be a number");
        }
        return params[name].get<double>();
    };
    if (type == "uniform") {
        return UniformDetuning{param("delta0")};
    }
    if (type == "linear") {
        return LinearDetuning{param("slope")};
    }
    if (type == "harmonic") {
        return HarmonicDetuning{param("curvature")};
    }
    throw DomainError("config key 'detuning.type' has unknown value '" + type + "'");
}

ChainConfig config_from_json(const nlohmann::json& doc, const ChainConfig& base) {
    if (!doc.is_object()) {
        throw DomainError("config document must be a JSON object");
    }
    ChainConfig out = base;
    for (const auto& [key, value] : doc.items()) {
        if (key == "n_atoms") {
            if (!value.is_number_integer()) {
                throw DomainError("config key 'n_atoms' must be an integer");
            }
            out.n_atoms = value.get<int>();
        } else if (key == "xi") {
            out.xi = number_at(doc, key);
        } else if (key == "directionality") {
            out.directionality = number_at(doc, key);
        } else if (key == "rabi") {
            out.rabi = number_at(doc, key);
        } else if (key == "theta_s") {
            out.theta_s = number_at(doc, key);
        } else if (key == "detuning") {
            out.detuning = detuning_from_json(value);
        } else {
            throw DomainError("unknown config key '" + key + "'");
        }
    }
    out.validate();
    return out;
}

namespace {

double parse_number(std::string_view t, std::string_view whole) {
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
        throw DomainError("cannot parse angle '" + std::string(whole) + "'");
    }
    return v;
}

} // namespace

double parse_angle(std::string_view text) {
    std::string t;
    for (char c : text) {
        if (c != ' ') t.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    const auto pos = t.find("pi");
    if (pos == std::string::npos) {
        return parse_number(t, text);
    }
    std::string_view coef(t.data(), pos);
    std::string_view rest(t.data() + pos + 2, t.size() - pos - 2);
    if (!coef.empty() && coef.back() == '*') coef.remove_suffix(1);
    double value = kPi;
    if (coef == "-") {
        value = -kPi;
    } else if (!coef.empty() && coef != "+") {
        value *= parse_number(coef.front() == '+' ? coef.substr(1) : coef, text);
    }
    if (!rest.empty()) {
        if (rest.front() != '/') {
            throw DomainError("cannot parse angle '" + std::string(text) + "'");
        }
        const double den = parse_number(rest.substr(1), text);
        if (den == 0.0) {
            throw DomainError("angle '" + std::string(text) + "' divides by zero");
        }
        value /= den;
    }
    return value;
}

} // namespace chiral
