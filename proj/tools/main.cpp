#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "tvmdp/instances.hpp"
#include "tvmdp/io.hpp"
#include "tvmdp/reduction.hpp"
#include "tvmdp/spe.hpp"
#include "tvmdp/verifier.hpp"

namespace {

using tvmdp::BigInt;
using tvmdp::DiscountFunction;
using tvmdp::DynamicPolicy;
using tvmdp::Mdp;
using tvmdp::Rational;
using tvmdp::StaticPolicy;
using json = nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNo = 1;
constexpr int kExitInputError = 2;

struct CommonArgs {
    std::string instance_path;
    std::string format = "json";
    std::string out_path;
    std::string discount_inline;
    std::string discount_file;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_discount = true) {
    cmd->add_option("instance", args.instance_path, "instance JSON file")->required();
    cmd->add_option("--format", args.format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    cmd->add_option("--out", args.out_path, "also write the main artifact to this file");
    if (with_discount) {
        cmd->add_option("--discount", args.discount_inline, "discount function as inline JSON");
        cmd->add_option("--discount-file", args.discount_file, "discount function JSON file");
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw tvmdp::io::ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

DiscountFunction resolve_discount(const CommonArgs& args, const tvmdp::io::Instance& instance) {
    if (!args.discount_inline.empty()) return tvmdp::io::parse_discount_text(args.discount_inline);
    if (!args.discount_file.empty()) return tvmdp::io::parse_discount_text(read_file(args.discount_file));
    if (instance.discount) return *instance.discount;
    throw tvmdp::io::ParseError(
        "no discount function: embed a \"discount\" object in the instance or pass --discount/--discount-file");
}

Rational resolve_gamma(const std::optional<std::string>& flag, const tvmdp::io::Instance& instance,
                       const char* command) {
    if (flag) return tvmdp::rational_from_string(*flag);
    if (instance.discount)
        if (const auto* c = std::get_if<tvmdp::ConstantDiscount>(&instance.discount->data())) return c->gamma;
    throw tvmdp::io::ParseError(std::string(command) + ": needs --gamma or an embedded constant discount");
}

int resolve_action(const Mdp& mdp, const std::optional<std::string>& flag,
                   const tvmdp::io::Instance& instance, const char* command) {
    std::optional<std::string> name = flag ? flag : instance.flagged_action;
    if (!name)
        throw tvmdp::io::ParseError(std::string(command) +
                                    ": needs --action or a \"flagged_action\" field in the instance");
    int a = mdp.action_index(mdp.start_state(), *name);
    if (a < 0)
        throw tvmdp::io::ParseError(std::string(command) + ": action '" + *name +
                                    "' is not available in the start state");
    return a;
}

void emit(const CommonArgs& args, const json& payload, const std::string& text_summary) {
    if (args.format == "text")
        std::cout << text_summary;
    else
        std::cout << tvmdp::io::dump(payload);
}

json values_json(const Mdp& mdp, const std::vector<double>& values) {
    json j = json::object();
    for (int s = 0; s < mdp.num_states(); ++s) j[mdp.state_name(s)] = tvmdp::io::format_sig12(values[std::size_t(s)]);
    return j;
}

json values_json(const Mdp& mdp, const std::vector<Rational>& values) {
    json j = json::object();
    for (int s = 0; s < mdp.num_states(); ++s) {
        json entry;
        entry["exact"] = tvmdp::rational_to_string(values[std::size_t(s)]);
        entry["value"] = tvmdp::io::format_sig12(tvmdp::to_double(values[std::size_t(s)]));
        j[mdp.state_name(s)] = std::move(entry);
    }
    return j;
}

int run_solve(const CommonArgs& args, const std::optional<std::string>& gamma_flag, bool exact) {
    auto instance = tvmdp::io::load_instance(args.instance_path);
    Rational gamma = resolve_gamma(gamma_flag, instance, "solve");
    json payload;
    payload["gamma"] = tvmdp::rational_to_string(gamma);
    StaticPolicy policy;
    double start_value = 0;
    if (exact) {
        auto solution = tvmdp::optimal_policy<Rational>(instance.mdp, gamma);
        policy = solution.policy;
        start_value = tvmdp::to_double(solution.values[std::size_t(instance.mdp.start_state())]);
        payload["values"] = values_json(instance.mdp, solution.values);
    } else {
        auto solution = tvmdp::optimal_policy<double>(instance.mdp, tvmdp::to_double(gamma));
        policy = solution.policy;
        start_value = solution.values[std::size_t(instance.mdp.start_state())];
        payload["values"] = values_json(instance.mdp, solution.values);
    }
    payload["policy"] = tvmdp::io::static_policy_to_json(policy, instance.mdp);
    payload["start_state"] = instance.mdp.state_name(instance.mdp.start_state());
    payload["start_value"] = tvmdp::io::format_sig12(start_value);
    if (!args.out_path.empty())
        write_file(args.out_path, tvmdp::io::dump(tvmdp::io::static_policy_to_json(policy, instance.mdp)));
    std::ostringstream text;
    text << "optimal policy at gamma=" << tvmdp::rational_to_string(gamma) << "\n";
    for (int s = 0; s < instance.mdp.num_states(); ++s)
        text << "  " << instance.mdp.state_name(s) << " -> " << instance.mdp.action(s, policy(s)).name << "\n";
    text << "start value: " << tvmdp::io::format_sig12(start_value) << "\n";
    emit(args, payload, text.str());
    return kExitOk;
}

int emit_equilibrium(const CommonArgs& args, const Mdp& mdp, const DiscountFunction& g, const DynamicPolicy& dp,
                     const Rational& eps, bool exact, const tvmdp::GammaSet* gamma_set = nullptr) {
    tvmdp::VerifyOptions vo;
    vo.exact_arithmetic = exact;
    vo.gamma_set = gamma_set;
    auto report = tvmdp::verify_equilibrium(mdp, g, dp, eps, vo);
    json payload;
    payload["dynamic_policy"] = tvmdp::io::dynamic_policy_to_json(dp, mdp);
    payload["verification"] = tvmdp::io::equilibrium_report_to_json(report, mdp);
    if (!args.out_path.empty())
        write_file(args.out_path, tvmdp::io::dump(tvmdp::io::dynamic_policy_to_json(dp, mdp)));
    std::ostringstream text;
    text << "switch time: " << dp.prefix.size() << "\n"
         << "verification: " << (report.passed ? "pass" : "FAIL")
         << " (max slack " << tvmdp::io::format_sig12(report.max_slack) << ")\n";
    emit(args, payload, text.str());
    return report.passed ? kExitOk : kExitNo;
}

int run_spe(const CommonArgs& args) {
    auto instance = tvmdp::io::load_instance(args.instance_path);
    DiscountFunction g = resolve_discount(args, instance);
    tvmdp::GammaSet gs = tvmdp::compute_gamma_set(instance.mdp);
    DynamicPolicy dp = tvmdp::compute_exact_spe(instance.mdp, g, gs);
    return emit_equilibrium(args, instance.mdp, g, dp, Rational(0), /*exact=*/true, &gs);
}

int run_eps_spe(const CommonArgs& args, const std::string& eps_text, const std::optional<std::string>& c_text,
                bool unknown_gap, const std::optional<std::string>& separation,
                const std::optional<std::string>& separation_log2, bool exact) {
    auto instance = tvmdp::io::load_instance(args.instance_path);
    DiscountFunction g = resolve_discount(args, instance);
    Rational eps = tvmdp::rational_from_string(eps_text);
    tvmdp::SpeOptions options;
    options.exact_arithmetic = exact;
    DynamicPolicy dp = [&] {
        if (unknown_gap) {
            std::optional<tvmdp::SeparationHint> hint;
            if (separation)
                hint = tvmdp::SeparationHint::from_value(tvmdp::rational_from_string(*separation));
            else if (separation_log2)
                hint = tvmdp::SeparationHint::from_log2(tvmdp::rational_from_string(*separation_log2));
            return tvmdp::compute_eps_spe_unknown_gap(instance.mdp, g, eps, hint, options);
        }
        Rational c = c_text ? tvmdp::rational_from_string(*c_text) : Rational(1, 10);
        return tvmdp::compute_eps_spe(instance.mdp, g, eps, c, options);
    }();
    return emit_equilibrium(args, instance.mdp, g, dp, eps, exact);
}

int run_gamma_set(const CommonArgs& args, const std::string& refine_text) {
    auto instance = tvmdp::io::load_instance(args.instance_path);
    tvmdp::GammaSet gs = tvmdp::compute_gamma_set(instance.mdp);
    gs.refine(tvmdp::rational_from_string(refine_text));
    json payload = tvmdp::io::gamma_set_to_json(gs, instance.mdp);
    if (!args.out_path.empty()) write_file(args.out_path, tvmdp::io::dump(payload));
    std::ostringstream text;
    text << gs.points.size() << " degenerate point(s)\n";
    for (const auto& p : gs.points)
        text << "  [" << tvmdp::rational_to_string(p.interval.lo) << ", "
             << tvmdp::rational_to_string(p.interval.hi) << "]" << (p.interval.exact ? " (exact)" : "") << "\n";
    emit(args, payload, text.str());
    return kExitOk;
}

int run_verify(const CommonArgs& args, const std::string& policy_path, const std::string& eps_text,
               std::uint64_t tail_extra, bool exact) {
    auto instance = tvmdp::io::load_instance(args.instance_path);
    DiscountFunction g = resolve_discount(args, instance);
    DynamicPolicy dp = tvmdp::io::parse_dynamic_policy_text(read_file(policy_path), instance.mdp);
    tvmdp::VerifyOptions vo;
    vo.tail_extra = tail_extra;
    vo.exact_arithmetic = exact;
    auto report = tvmdp::verify_equilibrium(instance.mdp, g, dp, tvmdp::rational_from_string(eps_text), vo);
    json payload = tvmdp::io::equilibrium_report_to_json(report, instance.mdp);
    if (!args.out_path.empty()) write_file(args.out_path, tvmdp::io::dump(payload));
    std::ostringstream text;
    text << (report.passed ? "pass" : "FAIL") << ": max slack " << tvmdp::io::format_sig12(report.max_slack);
    if (const auto* worst = report.worst(); worst && report.max_slack > 0)
        text << " at (player " << worst->player << ", state " << instance.mdp.state_name(worst->state) << ")";
    text << "\n";
    emit(args, payload, text.str());
    return report.passed ? kExitOk : kExitNo;
}

int run_reduce(const CommonArgs& args, const std::optional<std::string>& gamma_flag,
               const std::optional<std::string>& action_flag, const std::string& horizon_text,
               const std::optional<std::string>& answer_method) {
    auto instance = tvmdp::io::load_instance(args.instance_path);
    Rational gamma = resolve_gamma(gamma_flag, instance, "reduce");
    int action = resolve_action(instance.mdp, action_flag, instance, "reduce");
    BigInt horizon(horizon_text, 10);
    auto gadget = tvmdp::build_gadget(instance.mdp, gamma, horizon, action);
    const std::string flagged_name = gadget.mdp.action(gadget.mdp.start_state(), gadget.flagged_action).name;
    json gadget_json = tvmdp::io::instance_to_json(gadget.mdp, gadget.discount, flagged_name);
    json payload = gadget_json;
    int code = kExitOk;
    std::ostringstream text;
    text << "gadget with " << gadget.mdp.num_states() << " states, down-step discount\n";
    if (answer_method) {
        auto method = *answer_method == "brute" ? tvmdp::SpeStartMethod::brute : tvmdp::SpeStartMethod::constructed;
        bool yes = tvmdp::answer_spe_start(gadget, method);
        json wrapper;
        wrapper["instance"] = std::move(gadget_json);
        wrapper["answer"] = yes;
        wrapper["method"] = *answer_method;
        payload = std::move(wrapper);
        text << "answer (" << *answer_method << "): " << (yes ? "yes" : "no") << "\n";
        code = yes ? kExitOk : kExitNo;
    }
    if (!args.out_path.empty())
        write_file(args.out_path,
                   tvmdp::io::dump(tvmdp::io::instance_to_json(gadget.mdp, gadget.discount, flagged_name)));
    emit(args, payload, text.str());
    return code;
}

int run_valit(const CommonArgs& args, const std::optional<std::string>& gamma_flag,
              const std::optional<std::string>& action_flag, const std::string& horizon_text, bool exact) {
    auto instance = tvmdp::io::load_instance(args.instance_path);
    Rational gamma = resolve_gamma(gamma_flag, instance, "valit");
    int action = resolve_action(instance.mdp, action_flag, instance, "valit");
    BigInt horizon(horizon_text, 10);
    bool yes = exact ? tvmdp::solve_valit<Rational>(instance.mdp, action, horizon, gamma)
                     : tvmdp::solve_valit<double>(instance.mdp, action, horizon, tvmdp::to_double(gamma));
    json payload;
    payload["answer"] = yes;
    payload["action"] = instance.mdp.action(instance.mdp.start_state(), action).name;
    payload["horizon"] = horizon.get_str();
    payload["gamma"] = tvmdp::rational_to_string(gamma);
    emit(args, payload, std::string(yes ? "yes" : "no") + "\n");
    return yes ? kExitOk : kExitNo;
}

int run_demo_reversal(const std::string& format) {
    auto r = tvmdp::preference_reversal_demo();
    json payload;
    payload["myopic_gamma"] = tvmdp::io::format_sig12(r.myopic_gamma);
    payload["farsighted_gamma"] = tvmdp::io::format_sig12(r.farsighted_gamma);
    payload["early_value_myopic"] = tvmdp::io::format_sig12(r.early_value_myopic);
    payload["late_value_myopic"] = tvmdp::io::format_sig12(r.late_value_myopic);
    payload["early_value_farsighted"] = tvmdp::io::format_sig12(r.early_value_farsighted);
    payload["late_value_farsighted"] = tvmdp::io::format_sig12(r.late_value_farsighted);
    payload["myopic_prefers_early"] = r.myopic_prefers_early;
    payload["farsighted_prefers_late"] = r.farsighted_prefers_late;
    payload["early_value_at_step_one"] = tvmdp::io::format_sig12(r.early_value_at_step_one);
    payload["late_value_at_step_one"] = tvmdp::io::format_sig12(r.late_value_at_step_one);
    payload["plan_abandoned_at_step_one"] = r.plan_abandoned_at_step_one;
    payload["reversal"] = r.reversal;
    if (format == "text") {
        std::cout << "constant 0.75: early " << tvmdp::io::format_sig12(r.early_value_myopic) << " vs late "
                  << tvmdp::io::format_sig12(r.late_value_myopic) << " -> prefers early\n"
                  << "constant 0.95: early " << tvmdp::io::format_sig12(r.early_value_farsighted) << " vs late "
                  << tvmdp::io::format_sig12(r.late_value_farsighted) << " -> prefers late\n"
                  << "0.95 then 0.75: the late plan is dropped at step 1 ("
                  << tvmdp::io::format_sig12(r.early_value_at_step_one) << " vs "
                  << tvmdp::io::format_sig12(r.late_value_at_step_one) << ")\n";
    } else {
        std::cout << tvmdp::io::dump(payload);
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Solver for MDPs with time-varying geometric discounting"};
    app.require_subcommand(1);

    CommonArgs solve_args;
    std::optional<std::string> solve_gamma;
    bool solve_exact = false;
    auto* solve_cmd = app.add_subcommand("solve", "optimal policy under a constant discount factor");
    add_common(solve_cmd, solve_args, /*with_discount=*/false);
    solve_cmd->add_option("--gamma", solve_gamma, "constant discount factor");
    solve_cmd->add_flag("--exact", solve_exact, "exact rational arithmetic");

    CommonArgs spe_args;
    auto* spe_cmd = app.add_subcommand("spe", "exact equilibrium via the degenerate-point set");
    add_common(spe_cmd, spe_args);

    CommonArgs eps_args;
    std::string eps_value;
    std::optional<std::string> eps_c, eps_sep, eps_sep_log2;
    bool eps_unknown_gap = false, eps_exact = false;
    auto* eps_cmd = app.add_subcommand("eps-spe", "eps-equilibrium construction");
    add_common(eps_cmd, eps_args);
    eps_cmd->add_option("--eps", eps_value, "slack tolerance eps > 0")->required();
    eps_cmd->add_option("--c", eps_c, "known gap: limit of g stays below 1 - c (default 1/10)");
    eps_cmd->add_flag("--unknown-gap", eps_unknown_gap, "no assumption on the gap to 1");
    eps_cmd->add_option("--separation", eps_sep, "separation scale D for --unknown-gap");
    eps_cmd->add_option("--separation-log2", eps_sep_log2, "log2 of D for --unknown-gap");
    eps_cmd->add_flag("--exact", eps_exact, "exact rational arithmetic");

    CommonArgs gamma_args;
    std::string gamma_refine = "1/16777216";
    auto* gamma_cmd = app.add_subcommand("gamma-set", "degenerate discount factors with isolating intervals");
    add_common(gamma_cmd, gamma_args, /*with_discount=*/false);
    gamma_cmd->add_option("--refine", gamma_refine, "refine isolating intervals below this width");

    CommonArgs verify_args;
    std::string verify_policy, verify_eps = "0";
    std::uint64_t verify_tail_extra = 5;
    bool verify_exact = false;
    auto* verify_cmd = app.add_subcommand("verify", "one-shot-deviation check of a dynamic policy");
    add_common(verify_cmd, verify_args);
    verify_cmd->add_option("policy", verify_policy, "dynamic policy JSON file")->required();
    verify_cmd->add_option("--eps", verify_eps, "slack tolerance (default 0: exact check)");
    verify_cmd->add_option("--tail-extra", verify_tail_extra, "tail players sampled beyond the switch time");
    verify_cmd->add_flag("--exact", verify_exact, "exact rational arithmetic");

    CommonArgs reduce_args;
    std::optional<std::string> reduce_gamma, reduce_action, reduce_answer;
    std::string reduce_horizon;
    auto* reduce_cmd = app.add_subcommand("reduce", "finite-horizon instance -> start-action gadget");
    add_common(reduce_cmd, reduce_args, /*with_discount=*/false);
    reduce_cmd->add_option("--horizon", reduce_horizon, "finite horizon T >= 1 (binary-encoded integer)")->required();
    reduce_cmd->add_option("--gamma", reduce_gamma, "constant discount factor in (0,1)");
    reduce_cmd->add_option("--action", reduce_action, "flagged start action name");
    reduce_cmd->add_option("--answer", reduce_answer, "also answer the gadget: brute or constructed")
        ->check(CLI::IsMember({"brute", "constructed"}));

    CommonArgs valit_args;
    std::optional<std::string> valit_gamma, valit_action;
    std::string valit_horizon;
    bool valit_exact = false;
    auto* valit_cmd = app.add_subcommand("valit", "finite-horizon greedy-optimality answer");
    add_common(valit_cmd, valit_args, /*with_discount=*/false);
    valit_cmd->add_option("--horizon", valit_horizon, "finite horizon T >= 1")->required();
    valit_cmd->add_option("--gamma", valit_gamma, "constant discount factor");
    valit_cmd->add_option("--action", valit_action, "flagged start action name");
    valit_cmd->add_flag("--exact", valit_exact, "exact rational arithmetic");

    auto* demo_cmd = app.add_subcommand("demo", "built-in demonstrations");
    std::string demo_format = "json";
    auto* reversal_cmd = demo_cmd->add_subcommand("reversal", "preference reversal under a changing discount");
    reversal_cmd->add_option("--format", demo_format, "output format: json or text")
        ->check(CLI::IsMember({"json", "text"}));
    demo_cmd->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    if ((eps_sep || eps_sep_log2) && !eps_unknown_gap) {
        std::cerr << "input error: --separation/--separation-log2 only apply with --unknown-gap\n";
        return kExitInputError;
    }

    try {
        if (solve_cmd->parsed()) return run_solve(solve_args, solve_gamma, solve_exact);
        if (spe_cmd->parsed()) return run_spe(spe_args);
        if (eps_cmd->parsed())
            return run_eps_spe(eps_args, eps_value, eps_c, eps_unknown_gap, eps_sep, eps_sep_log2, eps_exact);
        if (gamma_cmd->parsed()) return run_gamma_set(gamma_args, gamma_refine);
        if (verify_cmd->parsed())
            return run_verify(verify_args, verify_policy, verify_eps, verify_tail_extra, verify_exact);
        if (reduce_cmd->parsed())
            return run_reduce(reduce_args, reduce_gamma, reduce_action, reduce_horizon, reduce_answer);
        if (valit_cmd->parsed()) return run_valit(valit_args, valit_gamma, valit_action, valit_horizon, valit_exact);
        if (demo_cmd->parsed()) return run_demo_reversal(demo_format);
    } catch (const tvmdp::io::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const tvmdp::HorizonCapExceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitInputError;
    } catch (const tvmdp::EnumerationCapExceeded& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitInputError;
    } catch (const tvmdp::DegenerateLimit& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
