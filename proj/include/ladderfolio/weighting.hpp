#pragma once

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ladderfolio {

/// Rungs of Tukey's transformational ladder applied to market cap, plus the
/// equal-weight portfolio which sits outside the ladder.
enum class Transform { InvSquare, Inv, InvSqrt, Log, Sqrt, Identity, Square, Equal };

/// Ladder order, most small-cap tilted first.
inline constexpr std::array<Transform, 7> kLadder{Transform::InvSquare, Transform::Inv,
                                                  Transform::InvSqrt,   Transform::Log,
                                                  Transform::Sqrt,      Transform::Identity,
                                                  Transform::Square};

inline constexpr std::array<Transform, 8> kAllTransforms{
    Transform::InvSquare, Transform::Inv,    Transform::InvSqrt, Transform::Log,
    Transform::Sqrt,      Transform::Identity, Transform::Square, Transform::Equal};

/// `inv-square`, `inv`, `inv-sqrt`, `log`, `sqrt`, `identity`, `square`, `equal`.
std::string_view to_string(Transform t);
std::optional<Transform> parse_transform(std::string_view text);

/// f(cap) for the rung. Throws DomainError for cap <= 0, and for Log when
/// cap <= 1 (ln would make the weight nonpositive).
double transform_value(Transform t, double cap);

/// Normalized weights f(cap_i) / sum_j f(cap_j), in input order. Throws
/// DomainError naming the offending position, or on an empty input.
std::vector<double> normalized_weights(Transform t, std::span<const double> caps);

/// Writes normalized weights into `out` (same length as caps) without
/// validating inputs. The hot-loop form used by the engines.
void normalized_weights_unchecked(Transform t, std::span<const double> caps, std::span<double> out);

using TargetWeights = std::map<std::string, double, std::less<>>;

/// Weights keyed by security id. Errors name the offending security.
TargetWeights target_weights(Transform t, const std::map<std::string, double, std::less<>>& caps);

namespace detail {
/// cap^p normalized; for p = 0 this is equal weighting. Used to check the
/// ladder's monotone concentration over a continuous exponent.
std::vector<double> power_weights(double exponent, std::span<const double> caps);
}  // namespace detail

}  // namespace ladderfolio
