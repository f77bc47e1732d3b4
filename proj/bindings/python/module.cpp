#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "tvmdp/instances.hpp"
#include "tvmdp/io.hpp"
#include "tvmdp/reduction.hpp"
#include "tvmdp/spe.hpp"
#include "tvmdp/verifier.hpp"

namespace py = pybind11;
using json = nlohmann::json;

namespace {

py::object json_to_py(const json& j) {
    switch (j.type()) {
        case json::value_t::null:
            return py::none();
        case json::value_t::boolean:
            return py::bool_(j.get<bool>());
        case json::value_t::number_integer:
            return py::int_(j.get<std::int64_t>());
        case json::value_t::number_unsigned:
            return py::int_(j.get<std::uint64_t>());
        case json::value_t::number_float:
            return py::float_(j.get<double>());
        case json::value_t::string:
            return py::str(j.get<std::string>());
        case json::value_t::array: {
            py::list out;
            for (const auto& v : j) out.append(json_to_py(v));
            return out;
        }
        case json::value_t::object: {
            py::dict out;
            for (auto it = j.begin(); it != j.end(); ++it) out[py::str(it.key())] = json_to_py(it.value());
            return out;
        }
        default:
            return py::none();
    }
}

std::string to_json_text(const py::object& obj) {
    if (py::isinstance<py::str>(obj)) return obj.cast<std::string>();
    py::module_ pyjson = py::module_::import("json");
    return pyjson.attr("dumps")(obj).cast<std::string>();
}

// Instance handle shared with Python: the MDP plus optional embedded
// discount and flagged action.
struct PyInstance {
    tvmdp::io::Instance inner;
};

tvmdp::DiscountFunction resolve_discount(const PyInstance& inst, const py::object& discount) {
    if (!discount.is_none()) return tvmdp::io::parse_discount_text(to_json_text(discount));
    if (inst.inner.discount) return *inst.inner.discount;
    throw std::invalid_argument("no discount function: embed one in the instance or pass discount=...");
}

tvmdp::Rational parse_scalar(const py::object& obj, const char* what) {
    if (py::isinstance<py::str>(obj)) return tvmdp::rational_from_string(obj.cast<std::string>());
    if (py::isinstance<py::int_>(obj)) return tvmdp::Rational(obj.cast<long>());
    if (py::isinstance<py::float_>(obj)) return tvmdp::rational_from_double(obj.cast<double>());
    throw std::invalid_argument(std::string(what) + ": pass an int, float, or numeric string like \"3/4\"");
}

py::object verification_result(const tvmdp::Mdp& mdp, const tvmdp::DiscountFunction& g,
                               const tvmdp::DynamicPolicy& dp, const tvmdp::Rational& eps, bool exact,
                               std::uint64_t tail_extra, const tvmdp::GammaSet* gamma_set = nullptr) {
    tvmdp::VerifyOptions vo;
    vo.exact_arithmetic = exact;
    vo.tail_extra = tail_extra;
    vo.gamma_set = gamma_set;
    auto report = tvmdp::verify_equilibrium(mdp, g, dp, eps, vo);
    json out;
    out["dynamic_policy"] = tvmdp::io::dynamic_policy_to_json(dp, mdp);
    out["verification"] = tvmdp::io::equilibrium_report_to_json(report, mdp);
    return json_to_py(out);
}

}  // namespace

PYBIND11_MODULE(_tvmdp, m) {
    m.doc() = "Exact and approximate subgame perfect equilibria for MDPs with time-varying geometric discounting";

    py::register_exception<tvmdp::io::ParseError>(m, "ParseError", PyExc_ValueError);
    py::register_exception<tvmdp::DegenerateLimit>(m, "DegenerateLimitError", PyExc_ValueError);
    py::register_exception<tvmdp::HorizonCapExceeded>(m, "HorizonCapError", PyExc_RuntimeError);
    py::register_exception<tvmdp::EnumerationCapExceeded>(m, "EnumerationCapError", PyExc_RuntimeError);

    py::class_<PyInstance>(m, "Instance")
        .def_static(
            "from_json",
            [](const py::object& obj) { return PyInstance{tvmdp::io::parse_instance_text(to_json_text(obj))}; },
            py::arg("text"), "Parse an instance from JSON text or a dict.")
        .def_static(
            "load", [](const std::string& path) { return PyInstance{tvmdp::io::load_instance(path)}; },
            py::arg("path"))
        .def_property_readonly("num_states", [](const PyInstance& i) { return i.inner.mdp.num_states(); })
        .def_property_readonly("state_names", [](const PyInstance& i) { return i.inner.mdp.state_names(); })
        .def_property_readonly("start_state",
                               [](const PyInstance& i) { return i.inner.mdp.state_name(i.inner.mdp.start_state()); })
        .def_property_readonly("reward_bound",
                               [](const PyInstance& i) { return tvmdp::to_double(i.inner.mdp.reward_bound()); })
        .def("to_json", [](const PyInstance& i) {
            return json_to_py(tvmdp::io::instance_to_json(i.inner.mdp, i.inner.discount, i.inner.flagged_action));
        });

    m.def(
        "builtin_instance",
        [](const std::string& name) {
            tvmdp::Mdp mdp = [&] {
                if (name == "two_option_delay") return tvmdp::two_option_delay_mdp();
                if (name == "cycle_vs_steady") return tvmdp::cycle_vs_steady_mdp();
                if (name == "crossing") return tvmdp::crossing_mdp();
                if (name == "crossing_squared") return tvmdp::crossing_mdp_squared();
                if (name == "double_crossing") return tvmdp::double_crossing_mdp();
                throw std::invalid_argument("unknown builtin instance '" + name + "'");
            }();
            return PyInstance{tvmdp::io::Instance{std::move(mdp), std::nullopt, std::nullopt}};
        },
        py::arg("name"),
        "One of: two_option_delay, cycle_vs_steady, crossing, crossing_squared, double_crossing.");

    m.def(
        "solve",
        [](const PyInstance& inst, const py::object& gamma, bool exact) {
            tvmdp::Rational g = parse_scalar(gamma, "gamma");
            json out;
            out["gamma"] = tvmdp::rational_to_string(g);
            if (exact) {
                auto sol = tvmdp::optimal_policy<tvmdp::Rational>(inst.inner.mdp, g);
                out["policy"] = tvmdp::io::static_policy_to_json(sol.policy, inst.inner.mdp);
                json values = json::object();
                for (int s = 0; s < inst.inner.mdp.num_states(); ++s)
                    values[inst.inner.mdp.state_name(s)] = tvmdp::rational_to_string(sol.values[std::size_t(s)]);
                out["values_exact"] = std::move(values);
                out["start_value"] = tvmdp::to_double(sol.values[std::size_t(inst.inner.mdp.start_state())]);
            } else {
                auto sol = tvmdp::optimal_policy<double>(inst.inner.mdp, tvmdp::to_double(g));
                out["policy"] = tvmdp::io::static_policy_to_json(sol.policy, inst.inner.mdp);
                json values = json::object();
                for (int s = 0; s < inst.inner.mdp.num_states(); ++s)
                    values[inst.inner.mdp.state_name(s)] = sol.values[std::size_t(s)];
                out["values"] = std::move(values);
                out["start_value"] = sol.values[std::size_t(inst.inner.mdp.start_state())];
            }
            return json_to_py(out);
        },
        py::arg("instance"), py::arg("gamma"), py::arg("exact") = false,
        "Optimal policy and values under a constant discount factor.");

    m.def(
        "gamma_set",
        [](const PyInstance& inst, const py::object& refine) {
            auto gs = tvmdp::compute_gamma_set(inst.inner.mdp);
            if (!refine.is_none()) gs.refine(parse_scalar(refine, "refine"));
            return json_to_py(tvmdp::io::gamma_set_to_json(gs, inst.inner.mdp));
        },
        py::arg("instance"), py::arg("refine") = py::none(),
        "Degenerate discount factors with exact isolating intervals.");

    m.def(
        "exact_spe",
        [](const PyInstance& inst, const py::object& discount) {
            auto g = resolve_discount(inst, discount);
            auto gs = tvmdp::compute_gamma_set(inst.inner.mdp);
            auto dp = tvmdp::compute_exact_spe(inst.inner.mdp, g, gs);
            return verification_result(inst.inner.mdp, g, dp, tvmdp::Rational(0), /*exact=*/true, 5, &gs);
        },
        py::arg("instance"), py::arg("discount") = py::none(),
        "Exact equilibrium (verified); raises DegenerateLimitError when impossible.");

    m.def(
        "eps_spe",
        [](const PyInstance& inst, const py::object& eps, const py::object& discount, const py::object& c,
           bool unknown_gap, const py::object& separation, bool exact) {
            auto g = resolve_discount(inst, discount);
            tvmdp::Rational eps_r = parse_scalar(eps, "eps");
            tvmdp::SpeOptions options;
            options.exact_arithmetic = exact;
            tvmdp::DynamicPolicy dp;
            if (unknown_gap) {
                std::optional<tvmdp::SeparationHint> hint;
                if (!separation.is_none())
                    hint = tvmdp::SeparationHint::from_value(parse_scalar(separation, "separation"));
                dp = tvmdp::compute_eps_spe_unknown_gap(inst.inner.mdp, g, eps_r, hint, options);
            } else {
                tvmdp::Rational c_r = c.is_none() ? tvmdp::Rational(1, 10) : parse_scalar(c, "c");
                dp = tvmdp::compute_eps_spe(inst.inner.mdp, g, eps_r, c_r, options);
            }
            return verification_result(inst.inner.mdp, g, dp, eps_r, exact, 5);
        },
        py::arg("instance"), py::arg("eps"), py::arg("discount") = py::none(), py::arg("c") = py::none(),
        py::arg("unknown_gap") = false, py::arg("separation") = py::none(), py::arg("exact") = false,
        "eps-equilibrium (verified at eps).");

    m.def(
        "verify",
        [](const PyInstance& inst, const py::object& dynamic_policy, const py::object& eps,
           const py::object& discount, bool exact, std::uint64_t tail_extra) {
            auto g = resolve_discount(inst, discount);
            auto dp = tvmdp::io::parse_dynamic_policy_text(to_json_text(dynamic_policy), inst.inner.mdp);
            tvmdp::VerifyOptions vo;
            vo.exact_arithmetic = exact;
            vo.tail_extra = tail_extra;
            auto report = tvmdp::verify_equilibrium(inst.inner.mdp, g, dp, parse_scalar(eps, "eps"), vo);
            return json_to_py(tvmdp::io::equilibrium_report_to_json(report, inst.inner.mdp));
        },
        py::arg("instance"), py::arg("dynamic_policy"), py::arg("eps") = 0, py::arg("discount") = py::none(),
        py::arg("exact") = false, py::arg("tail_extra") = 5,
        "One-shot-deviation check of a dynamic policy given as {'prefix': [...], 'tail': {...}}.");

    m.def(
        "valit",
        [](const PyInstance& inst, const std::string& action, const py::object& horizon, const py::object& gamma) {
            int a = inst.inner.mdp.action_index(inst.inner.mdp.start_state(), action);
            if (a < 0) throw std::invalid_argument("action '" + action + "' is not available in the start state");
            tvmdp::Rational g = parse_scalar(gamma, "gamma");
            tvmdp::BigInt t(to_json_text(py::str(horizon)), 10);
            return tvmdp::solve_valit<tvmdp::Rational>(inst.inner.mdp, a, t, g);
        },
        py::arg("instance"), py::arg("action"), py::arg("horizon"), py::arg("gamma"),
        "Is the action greedy-optimal at time 0 of the finite-horizon recursion (exact arithmetic)?");

    m.def(
        "reduce_to_spe_start",
        [](const PyInstance& inst, const py::object& gamma, const py::object& horizon, const std::string& action,
           const py::object& answer_method) {
            int a = inst.inner.mdp.action_index(inst.inner.mdp.start_state(), action);
            if (a < 0) throw std::invalid_argument("action '" + action + "' is not available in the start state");
            tvmdp::BigInt t(to_json_text(py::str(horizon)), 10);
            auto gadget = tvmdp::build_gadget(inst.inner.mdp, parse_scalar(gamma, "gamma"), t, a);
            const std::string flagged =
                gadget.mdp.action(gadget.mdp.start_state(), gadget.flagged_action).name;
            json out;
            out["instance"] = tvmdp::io::instance_to_json(gadget.mdp, gadget.discount, flagged);
            if (!answer_method.is_none()) {
                std::string method = answer_method.cast<std::string>();
                out["answer"] = tvmdp::answer_spe_start(gadget, method == "brute"
                                                                    ? tvmdp::SpeStartMethod::brute
                                                                    : tvmdp::SpeStartMethod::constructed);
                out["method"] = method;
            }
            return json_to_py(out);
        },
        py::arg("instance"), py::arg("gamma"), py::arg("horizon"), py::arg("action"),
        py::arg("answer_method") = py::none(),
        "Build the start-action gadget; optionally answer it ('brute' or 'constructed').");

    m.def("preference_reversal", [] {
        auto r = tvmdp::preference_reversal_demo();
        py::dict out;
        out["myopic_gamma"] = r.myopic_gamma;
        out["farsighted_gamma"] = r.farsighted_gamma;
        out["early_value_myopic"] = r.early_value_myopic;
        out["late_value_myopic"] = r.late_value_myopic;
        out["early_value_farsighted"] = r.early_value_farsighted;
        out["late_value_farsighted"] = r.late_value_farsighted;
        out["myopic_prefers_early"] = r.myopic_prefers_early;
        out["farsighted_prefers_late"] = r.farsighted_prefers_late;
        out["early_value_at_step_one"] = r.early_value_at_step_one;
        out["late_value_at_step_one"] = r.late_value_at_step_one;
        out["plan_abandoned_at_step_one"] = r.plan_abandoned_at_step_one;
        out["reversal"] = r.reversal;
        return out;
    });

    m.def(
        "continuity_bound",
        [](const PyInstance& inst, const py::object& policy, double gamma, double gamma_tilde) {
            auto pi = tvmdp::io::parse_static_policy_json(json::parse(to_json_text(policy)), inst.inner.mdp);
            auto c = tvmdp::continuity_bound_check(inst.inner.mdp, pi, gamma, gamma_tilde);
            py::dict out;
            out["lhs"] = c.lhs;
            out["rhs"] = c.rhs;
            out["holds"] = c.holds;
            return out;
        },
        py::arg("instance"), py::arg("policy"), py::arg("gamma"), py::arg("gamma_tilde"),
        "Value-function continuity bound between two discount factors.");
}
