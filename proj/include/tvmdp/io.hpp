#pragma once

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <stdexcept>
#include <string>

#include "tvmdp/discount.hpp"
#include "tvmdp/gamma_algebra.hpp"
#include "tvmdp/mdp.hpp"
#include "tvmdp/verifier.hpp"

namespace tvmdp::io {

using json = nlohmann::json;

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed instance file: the MDP plus optional embedded discount function
/// and flagged action.
struct Instance {
    Mdp mdp;
    std::optional<DiscountFunction> discount;
    std::optional<std::string> flagged_action;
};

/// Parses instance JSON. Numbers are read from their source text, so decimal
/// literals ("0.1") become exact rationals; "p/q" strings work anywhere a
/// number does. Throws ParseError with position/field diagnostics.
Instance parse_instance_text(const std::string& text);
Instance load_instance(const std::string& path);

DiscountFunction parse_discount_json(const json& j);
DiscountFunction parse_discount_text(const std::string& text);

DynamicPolicy parse_dynamic_policy_text(const std::string& text, const Mdp& mdp);
DynamicPolicy parse_dynamic_policy_json(const json& j, const Mdp& mdp);
StaticPolicy parse_static_policy_json(const json& j, const Mdp& mdp);

json instance_to_json(const Mdp& mdp, const std::optional<DiscountFunction>& discount = std::nullopt,
                      const std::optional<std::string>& flagged_action = std::nullopt);
json discount_to_json(const DiscountFunction& g);
json static_policy_to_json(const StaticPolicy& policy, const Mdp& mdp);
json dynamic_policy_to_json(const DynamicPolicy& dp, const Mdp& mdp);
json equilibrium_report_to_json(const EquilibriumReport& report, const Mdp& mdp);
json gamma_set_to_json(const GammaSet& gs, const Mdp& mdp);

/// Decimal with 12 significant digits.
std::string format_sig12(double x);

/// Deterministic dump: sorted keys, 2-space indent, trailing newline.
std::string dump(const json& j);

/// Rewrites JSON text so every number token is string-quoted; string
/// contents are untouched. Exposed for tests.
std::string quote_numbers(const std::string& text);

/// Exact scalar from a parsed (quoted) JSON value.
Rational scalar_to_rational(const json& v, const std::string& field);
BigInt scalar_to_bigint(const json& v, const std::string& field);

}  // namespace tvmdp::io
