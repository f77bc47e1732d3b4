#include "tvmdp/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace tvmdp::io {

std::string quote_numbers(const std::string& text) {
    std::string out;
    out.reserve(text.size() + 16);
    bool in_string = false;
    bool escaped = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_string) {
            out += c;
            if (escaped)
                escaped = false;
            else if (c == '\\')
                escaped = true;
            else if (c == '"')
                in_string = false;
            continue;
        }
        if (c == '"') {
            in_string = true;
            out += c;
            continue;
        }
        if (c == '-' || (c >= '0' && c <= '9')) {
            std::size_t j = i;
            auto numeric = [](char ch) {
                return (ch >= '0' && ch <= '9') || ch == '-' || ch == '+' || ch == '.' || ch == 'e' || ch == 'E';
            };
            while (j < text.size() && numeric(text[j])) ++j;
            out += '"';
            out.append(text, i, j - i);
            out += '"';
            i = j - 1;
            continue;
        }
        out += c;
    }
    return out;
}

namespace {

json parse_checked(const std::string& text) {
    // Parse the original first so syntax diagnostics carry real positions,
    // then re-parse with numbers quoted to keep their exact source text.
    try {
        json probe = json::parse(text);
        static_cast<void>(probe);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what());
    }
    try {
        return json::parse(quote_numbers(text));
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON (number handling): ") + e.what());
    }
}

const json& expect_member(const json& j, const char* key, const std::string& context) {
    auto it = j.find(key);
    if (it == j.end()) throw ParseError(context + ": missing field '" + key + "'");
    return *it;
}

std::string expect_string(const json& j, const std::string& field) {
    if (!j.is_string()) throw ParseError(field + ": expected a string");
    return j.get<std::string>();
}

}  // namespace

Rational scalar_to_rational(const json& v, const std::string& field) {
    try {
        if (v.is_string()) return rational_from_string(v.get<std::string>());
        if (v.is_number_integer()) return Rational(static_cast<long>(v.get<std::int64_t>()));
        if (v.is_number_float()) return rational_from_double(v.get<double>());
    } catch (const std::invalid_argument& e) {
        throw ParseError(field + ": " + e.what());
    }
    throw ParseError(field + ": expected a number or numeric string");
}

BigInt scalar_to_bigint(const json& v, const std::string& field) {
    Rational r = scalar_to_rational(v, field);
    if (r.get_den() != 1) throw ParseError(field + ": expected an integer");
    return r.get_num();
}

DiscountFunction parse_discount_json(const json& j) {
    if (!j.is_object()) throw ParseError("discount: expected an object");
    const std::string type = expect_string(expect_member(j, "type", "discount"), "discount.type");
    try {
        if (type == "constant") return DiscountFunction::constant(scalar_to_rational(expect_member(j, "gamma", "discount"), "discount.gamma"));
        if (type == "down_step")
            return DiscountFunction::down_step(scalar_to_rational(expect_member(j, "gamma", "discount"), "discount.gamma"),
                                               scalar_to_bigint(expect_member(j, "T", "discount"), "discount.T"));
        if (type == "two_phase")
            return DiscountFunction::two_phase(scalar_to_rational(expect_member(j, "gamma1", "discount"), "discount.gamma1"),
                                               scalar_to_rational(expect_member(j, "gamma2", "discount"), "discount.gamma2"),
                                               scalar_to_bigint(expect_member(j, "T", "discount"), "discount.T"));
        if (type == "geometric_approach")
            return DiscountFunction::geometric_approach(
                scalar_to_rational(expect_member(j, "limit", "discount"), "discount.limit"),
                scalar_to_rational(expect_member(j, "amplitude", "discount"), "discount.amplitude"),
                scalar_to_rational(expect_member(j, "ratio", "discount"), "discount.ratio"));
        if (type == "table") {
            const json& values = expect_member(j, "values", "discount");
            if (!values.is_array()) throw ParseError("discount.values: expected an array");
            std::vector<Rational> head;
            for (std::size_t i = 0; i < values.size(); ++i)
                head.push_back(scalar_to_rational(values[i], "discount.values[" + std::to_string(i) + "]"));
            return DiscountFunction::table(std::move(head), scalar_to_rational(expect_member(j, "tail", "discount"), "discount.tail"));
        }
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("discount: ") + e.what());
    }
    throw ParseError("discount.type: unknown type '" + type +
                     "' (expected constant, down_step, two_phase, geometric_approach, or table)");
}

DiscountFunction parse_discount_text(const std::string& text) { return parse_discount_json(parse_checked(text)); }

Instance parse_instance_text(const std::string& text) {
    const json j = parse_checked(text);
    if (!j.is_object()) throw ParseError("instance: expected a JSON object");

    const json& jstates = expect_member(j, "states", "instance");
    if (!jstates.is_array() || jstates.empty()) throw ParseError("instance.states: expected a nonempty array");
    std::vector<std::string> states;
    for (const auto& s : jstates) states.push_back(expect_string(s, "instance.states[]"));

    const std::string start = expect_string(expect_member(j, "start", "instance"), "instance.start");
    int start_index = -1;
    for (std::size_t i = 0; i < states.size(); ++i)
        if (states[i] == start) start_index = static_cast<int>(i);
    if (start_index < 0) throw ParseError("instance.start: unknown state '" + start + "'");

    const json& jactions = expect_member(j, "actions", "instance");
    if (!jactions.is_object()) throw ParseError("instance.actions: expected an object keyed by state");
    std::vector<std::vector<ActionSpec>> actions(states.size());
    for (std::size_t si = 0; si < states.size(); ++si) {
        const std::string& sname = states[si];
        auto it = jactions.find(sname);
        if (it == jactions.end()) throw ParseError("instance.actions: missing state '" + sname + "'");
        if (!it->is_array() || it->empty())
            throw ParseError("instance.actions['" + sname + "']: expected a nonempty array");
        for (const auto& ja : *it) {
            const std::string context = "instance.actions['" + sname + "']";
            if (!ja.is_object()) throw ParseError(context + ": expected action objects");
            ActionSpec act;
            act.name = expect_string(expect_member(ja, "name", context), context + ".name");
            act.reward = scalar_to_rational(expect_member(ja, "reward", context), context + ".reward");
            const json& to = expect_member(ja, "to", context);
            if (!to.is_object()) throw ParseError(context + ".to: expected an object keyed by state");
            act.next.assign(states.size(), Rational(0));
            for (auto tit = to.begin(); tit != to.end(); ++tit) {
                int target = -1;
                for (std::size_t k = 0; k < states.size(); ++k)
                    if (states[k] == tit.key()) target = static_cast<int>(k);
                if (target < 0) throw ParseError(context + ".to: unknown state '" + tit.key() + "'");
                act.next[static_cast<std::size_t>(target)] =
                    scalar_to_rational(tit.value(), context + ".to['" + tit.key() + "']");
            }
            actions[si].push_back(std::move(act));
        }
    }

    std::optional<DiscountFunction> discount;
    if (auto it = j.find("discount"); it != j.end()) discount = parse_discount_json(*it);
    std::optional<std::string> flagged;
    if (auto it = j.find("flagged_action"); it != j.end()) flagged = expect_string(*it, "instance.flagged_action");

    try {
        return Instance{Mdp(std::move(states), std::move(actions), start_index), std::move(discount), std::move(flagged)};
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
}

Instance load_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance_text(buf.str());
}

StaticPolicy parse_static_policy_json(const json& j, const Mdp& mdp) {
    if (!j.is_object()) throw ParseError("policy: expected an object mapping state to action");
    StaticPolicy pi{std::vector<int>(static_cast<std::size_t>(mdp.num_states()), -1)};
    for (auto it = j.begin(); it != j.end(); ++it) {
        int s = mdp.state_index(it.key());
        if (s < 0) throw ParseError("policy: unknown state '" + it.key() + "'");
        const std::string aname = expect_string(it.value(), "policy['" + it.key() + "']");
        int a = mdp.action_index(s, aname);
        if (a < 0) throw ParseError("policy: unknown action '" + aname + "' in state '" + it.key() + "'");
        pi.choice[static_cast<std::size_t>(s)] = a;
    }
    for (int s = 0; s < mdp.num_states(); ++s)
        if (pi(s) < 0) throw ParseError("policy: missing state '" + mdp.state_name(s) + "'");
    return pi;
}

DynamicPolicy parse_dynamic_policy_json(const json& j, const Mdp& mdp) {
    if (!j.is_object()) throw ParseError("dynamic policy: expected an object");
    DynamicPolicy dp;
    dp.tail = parse_static_policy_json(expect_member(j, "tail", "dynamic policy"), mdp);
    if (auto it = j.find("prefix"); it != j.end()) {
        if (!it->is_array()) throw ParseError("dynamic policy.prefix: expected an array");
        for (const auto& entry : *it) dp.prefix.push_back(parse_static_policy_json(entry, mdp));
    }
    if (auto it = j.find("switch_time"); it != j.end()) {
        BigInt declared = scalar_to_bigint(*it, "dynamic policy.switch_time");
        if (declared != BigInt(static_cast<unsigned long>(dp.prefix.size())))
            throw ParseError("dynamic policy.switch_time: declared " + declared.get_str() + " but the prefix has " +
                             std::to_string(dp.prefix.size()) + " entries");
    }
    return dp;
}

DynamicPolicy parse_dynamic_policy_text(const std::string& text, const Mdp& mdp) {
    return parse_dynamic_policy_json(parse_checked(text), mdp);
}

json discount_to_json(const DiscountFunction& g) {
    json j;
    j["type"] = g.family_name();
    std::visit(
        [&](const auto& d) {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, ConstantDiscount>) {
                j["gamma"] = rational_to_string(d.gamma);
            } else if constexpr (std::is_same_v<T, DownStepDiscount>) {
                j["gamma"] = rational_to_string(d.gamma);
                j["T"] = d.step.get_str();
            } else if constexpr (std::is_same_v<T, TwoPhaseDiscount>) {
                j["gamma1"] = rational_to_string(d.first);
                j["gamma2"] = rational_to_string(d.second);
                j["T"] = d.step.get_str();
            } else if constexpr (std::is_same_v<T, GeometricApproachDiscount>) {
                j["limit"] = rational_to_string(d.limit);
                j["amplitude"] = rational_to_string(d.amplitude);
                j["ratio"] = rational_to_string(d.ratio);
            } else {
                json values = json::array();
                for (const auto& v : d.values) values.push_back(rational_to_string(v));
                j["values"] = std::move(values);
                j["tail"] = rational_to_string(d.tail);
            }
        },
        g.data());
    return j;
}

json instance_to_json(const Mdp& mdp, const std::optional<DiscountFunction>& discount,
                      const std::optional<std::string>& flagged_action) {
    json j;
    j["states"] = mdp.state_names();
    j["start"] = mdp.state_name(mdp.start_state());
    json actions = json::object();
    for (int s = 0; s < mdp.num_states(); ++s) {
        json list = json::array();
        for (const auto& act : mdp.actions(s)) {
            json ja;
            ja["name"] = act.name;
            ja["reward"] = rational_to_string(act.reward);
            json to = json::object();
            for (int t = 0; t < mdp.num_states(); ++t)
                if (act.next[static_cast<std::size_t>(t)] != 0)
                    to[mdp.state_name(t)] = rational_to_string(act.next[static_cast<std::size_t>(t)]);
            ja["to"] = std::move(to);
            list.push_back(std::move(ja));
        }
        actions[mdp.state_name(s)] = std::move(list);
    }
    j["actions"] = std::move(actions);
    if (discount) j["discount"] = discount_to_json(*discount);
    if (flagged_action) j["flagged_action"] = *flagged_action;
    return j;
}

json static_policy_to_json(const StaticPolicy& policy, const Mdp& mdp) {
    json j = json::object();
    for (int s = 0; s < mdp.num_states(); ++s) j[mdp.state_name(s)] = mdp.action(s, policy(s)).name;
    return j;
}

json dynamic_policy_to_json(const DynamicPolicy& dp, const Mdp& mdp) {
    json j;
    j["switch_time"] = dp.prefix.size();
    json prefix = json::array();
    for (const auto& p : dp.prefix) prefix.push_back(static_policy_to_json(p, mdp));
    j["prefix"] = std::move(prefix);
    j["tail"] = static_policy_to_json(dp.tail, mdp);
    return j;
}

json equilibrium_report_to_json(const EquilibriumReport& report, const Mdp& mdp) {
    json j;
    j["kind"] = report.exact_kind ? "exact" : "epsilon";
    j["eps"] = format_sig12(report.eps);
    j["passed"] = report.passed;
    j["max_slack"] = format_sig12(report.max_slack);
    if (report.max_slack_exact) j["max_slack_exact"] = rational_to_string(*report.max_slack_exact);
    j["horizon_checked"] = report.horizon_checked;
    j["tail_extra"] = report.tail_extra;
    if (report.limit_slack) j["limit_slack"] = format_sig12(*report.limit_slack);
    j["tail_exactness_certified"] = report.tail_exactness_certified;
    j["tail_certification"] = report.tail_certification;
    json slacks = json::array();
    for (const auto& e : report.slacks) {
        json entry;
        entry["player"] = e.player;
        entry["state"] = mdp.state_name(e.state);
        entry["slack"] = format_sig12(e.slack);
        if (e.slack_exact) entry["slack_exact"] = rational_to_string(*e.slack_exact);
        slacks.push_back(std::move(entry));
    }
    j["slacks"] = std::move(slacks);
    return j;
}

json gamma_set_to_json(const GammaSet& gs, const Mdp& mdp) {
    json points = json::array();
    for (const auto& p : gs.points) {
        json e;
        e["lo"] = rational_to_string(p.interval.lo);
        e["hi"] = rational_to_string(p.interval.hi);
        e["exact"] = p.interval.exact;
        e["lo_approx"] = format_sig12(to_double(p.interval.lo));
        e["hi_approx"] = format_sig12(to_double(p.interval.hi));
        e["witnesses"] = json::array({static_policy_to_json(p.witness_first, mdp),
                                      static_policy_to_json(p.witness_second, mdp)});
        points.push_back(std::move(e));
    }
    json j;
    j["degenerate_points"] = std::move(points);
    j["count"] = gs.points.size();
    return j;
}

std::string format_sig12(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace tvmdp::io
