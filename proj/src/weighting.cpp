#include "ladderfolio/weighting.hpp"

#include <cmath>

#include "ladderfolio/errors.hpp"

namespace ladderfolio {

namespace {

inline double raw_value(Transform t, double cap)
{
    switch (t) {
    case Transform::InvSquare: return 1.0 / (cap * cap);
    case Transform::Inv: return 1.0 / cap;
    case Transform::InvSqrt: return 1.0 / std::sqrt(cap);
    case Transform::Log: return std::log(cap);
    case Transform::Sqrt: return std::sqrt(cap);
    case Transform::Identity: return cap;
    case Transform::Square: return cap * cap;
    case Transform::Equal: return 1.0;
    }
    return 1.0;
}

void check_cap(Transform t, double cap, const std::string& where)
{
    if (!(cap > 0.0) || !std::isfinite(cap)) {
        throw DomainError("market cap must be positive and finite (" + where + ")");
    }
    if (t == Transform::Log && !(cap > 1.0)) {
        throw DomainError("log weighting needs market cap > 1 (" + where + ")");
    }
}

}  // namespace

std::string_view to_string(Transform t)
{
    switch (t) {
    case Transform::InvSquare: return "inv-square";
    case Transform::Inv: return "inv";
    case Transform::InvSqrt: return "inv-sqrt";
    case Transform::Log: return "log";
    case Transform::Sqrt: return "sqrt";
    case Transform::Identity: return "identity";
    case Transform::Square: return "square";
    case Transform::Equal: return "equal";
    }
    return "?";
}

std::optional<Transform> parse_transform(std::string_view text)
{
    for (Transform t : kAllTransforms) {
        if (to_string(t) == text) {
            return t;
        }
    }
    return std::nullopt;
}

double transform_value(Transform t, double cap)
{
    check_cap(t, cap, "cap " + std::to_string(cap));
    return raw_value(t, cap);
}

void normalized_weights_unchecked(Transform t, std::span<const double> caps, std::span<double> out)
{
    double total = 0.0;
    for (std::size_t i = 0; i < caps.size(); ++i) {
        out[i] = raw_value(t, caps[i]);
        total += out[i];
    }
    const double inv = 1.0 / total;
    for (double& w : out) {
        w *= inv;
    }
}

std::vector<double> normalized_weights(Transform t, std::span<const double> caps)
{
    if (caps.empty()) {
        throw DomainError("cannot weight an empty set of securities");
    }
    for (std::size_t i = 0; i < caps.size(); ++i) {
        check_cap(t, caps[i], "position " + std::to_string(i));
    }
    std::vector<double> out(caps.size());
    normalized_weights_unchecked(t, caps, out);
    return out;
}

TargetWeights target_weights(Transform t, const std::map<std::string, double, std::less<>>& caps)
{
    if (caps.empty()) {
        throw DomainError("cannot weight an empty set of securities");
    }
    std::vector<double> values;
    values.reserve(caps.size());
    for (const auto& [id, cap] : caps) {
        check_cap(t, cap, "security '" + id + "'");
        values.push_back(cap);
    }
    std::vector<double> w(values.size());
    normalized_weights_unchecked(t, values, w);
    TargetWeights out;
    std::size_t i = 0;
    for (const auto& [id, cap] : caps) {
        out.emplace(id, w[i++]);
    }
    return out;
}

namespace detail {

std::vector<double> power_weights(double exponent, std::span<const double> caps)
{
    std::vector<double> out(caps.size());
    double total = 0.0;
    for (std::size_t i = 0; i < caps.size(); ++i) {
        out[i] = std::pow(caps[i], exponent);
        total += out[i];
    }
    for (double& w : out) {
        w /= total;
    }
    return out;
}

}  // namespace detail

}  // namespace ladderfolio
