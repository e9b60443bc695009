// potentia_cli.hpp
// Command-line surface. run_cli() is kept separate from main() so the test
// suites can drive every subcommand in-process.
//
// Exit codes: 0 success, 1 domain error, 2 usage or parse error.

#pragma once

#include "potentia/clifford.hpp"
#include "potentia/collapse.hpp"
#include "potentia/derivation.hpp"
#include "potentia/dynamics.hpp"
#include "potentia/expression.hpp"
#include "potentia/potentiality.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace potentia::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

inline constexpr double kRepTolerance = 1e-12;

namespace detail {

inline Json complex_json(const Complex& z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

// Parses "a,b,c" style lists of doubles.
inline std::vector<double> parse_list(const std::string& text, std::size_t expected, const std::string& what) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw CLI::ValidationError(what, "'" + item + "' is not a number");
        }
        if (used != item.size()) throw CLI::ValidationError(what, "'" + item + "' is not a number");
        values.push_back(v);
    }
    if (values.size() != expected) {
        throw CLI::ValidationError(what, "expected " + std::to_string(expected) + " comma-separated values");
    }
    return values;
}

// Renders an element of a generated algebra over the real basis
// {1, e1, e2, e3, i, i*e1, i*e2, i*e3}.
inline std::string render_generated(const GeneratedElement& x) {
    std::string out;
    for (std::size_t k = 0; k < 8; ++k) {
        const double c = k < 4 ? x[k].real() : x[k - 4].imag();
        if (c == 0.0) continue;
        const bool negative = std::signbit(c);
        if (out.empty()) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        const double mag = std::abs(c);
        const std::string label(kGeneratedLabels[k]);
        if (k == 0) {
            out += format_number(mag);
        } else if (mag == 1.0) {
            out += label;
        } else {
            out += format_number(mag) + "*" + label;
        }
    }
    return out.empty() ? "0" : out;
}

inline std::string generator_name(int k) { return k == 0 ? "1" : "e" + std::to_string(k); }

inline Json table_json(const GeneratedTable& table) {
    Json t = Json::object();
    for (int i = 1; i <= 3; ++i) {
        for (int j = 1; j <= 3; ++j) {
            GeneratedElement lhs{};
            lhs[static_cast<std::size_t>(i)] = 1.0;
            GeneratedElement rhs{};
            rhs[static_cast<std::size_t>(j)] = 1.0;
            t[generator_name(i) + "*" + generator_name(j)] = render_generated(generated_mul(table, lhs, rhs));
        }
    }
    return t;
}

inline Signature signature_from(const std::string& text, const std::string& what) {
    const auto k = parse_list(text, 3, what);
    return make_signature(k[0], k[1], k[2]);
}

inline Complex complex_from(const std::string& text, const std::string& what) {
    const auto v = parse_list(text, 2, what);
    return {v[0], v[1]};
}

inline std::string csv_number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Each subcommand writes its JSON document and reports an exit code.
struct Outcome {
    Json document;
    int code = kExitOk;
};

inline Outcome run_derive(const std::string& k_text, int branch) {
    const Signature sig = signature_from(k_text, "--k");
    const Matrix3 system = build_system(sig);
    const auto sols = solve_structure_constants(sig);
    Json solutions = Json::array();
    for (const auto& s : sols) {
        solutions.push_back(Json{{"omega3", complex_json(s.omega3)},
                                 {"lambda1", complex_json(s.lambda1)},
                                 {"gamma2", complex_json(s.gamma2)},
                                 {"residual", s.residual()}});
    }
    const GeneratedTable table = generate_table(sols[static_cast<std::size_t>(branch)]);
    Json doc;
    doc["signature"] = {sig.k1, sig.k2, sig.k3};
    doc["system"] = system;
    doc["determinant"] = determinant(system);
    doc["solutions"] = solutions;
    doc["branch"] = branch;
    doc["table"] = table_json(table);
    doc["alternation_verified"] = verify_alternation(table);
    return {doc, kExitOk};
}

inline std::string table_text(const GeneratedProductTable& full) {
    std::size_t width = 4;
    for (const auto& row : full)
        for (const auto& cell : row) width = std::max(width, render_generated(cell).size());
    for (auto label : kGeneratedLabels) width = std::max(width, label.size());
    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(width)) << "*";
    for (auto label : kGeneratedLabels) os << "  " << std::setw(static_cast<int>(width)) << label;
    os << '\n';
    for (std::size_t a = 0; a < 8; ++a) {
        os << std::setw(static_cast<int>(width)) << kGeneratedLabels[a];
        for (std::size_t b = 0; b < 8; ++b) os << "  " << std::setw(static_cast<int>(width)) << render_generated(full[a][b]);
        os << '\n';
    }
    return os.str();
}

inline Json run_table(const std::string& sig_text, int branch) {
    const Signature sig = signature_from(sig_text, "--signature");
    const GeneratedTable table = generate_table(solve_structure_constants(sig)[static_cast<std::size_t>(branch)]);
    const auto full = full_product_table(table);
    Json rows = Json::array();
    for (const auto& row : full) {
        Json r = Json::array();
        for (const auto& cell : row) r.push_back(render_generated(cell));
        rows.push_back(r);
    }
    Json doc;
    doc["signature"] = {sig.k1, sig.k2, sig.k3};
    doc["branch"] = branch;
    doc["labels"] = kGeneratedLabels;
    doc["rows"] = rows;
    doc["associative"] = verify_alternation(table);
    return doc;
}

inline Outcome run_eval(const std::string& expr) {
    const Multivector x = parse_multivector(expr);
    Json doc;
    doc["canonical"] = print_canonical(x);
    doc["basis"] = kBladeNames;
    doc["coefficients"] = x.coeffs();
    return {doc, kExitOk};
}

inline Outcome run_collapse(const std::string& c1_text, const std::string& c2_text, int outcome, int axis,
                            bool renormalize) {
    const Complex c1 = complex_from(c1_text, "--c1");
    const Complex c2 = complex_from(c2_text, "--c2");
    const auto [rho, element] = density_from_amplitudes(c1, c2);
    CollapsedElement collapsed = measure_collapse(element, outcome, axis);
    const double weight = collapsed.scalar();
    if (renormalize) collapsed = renormalized(collapsed);
    const auto [a, b] = transverse_axes(axis);
    Json doc;
    doc["outcome"] = outcome;
    doc["axis"] = axis;
    doc["density"] = {{"a", rho.a}, {"b", rho.b}, {"c", rho.c}, {"d", rho.d}};
    doc["weight"] = weight;
    doc["renormalized"] = renormalize;
    doc["scalar"] = collapsed.scalar();
    doc["basis"] = {"1", generator_name(a), generator_name(b), "i"};
    doc["coefficients"] = collapsed.coeffs();
    doc["trace"] = collapsed.trace();
    return {doc, kExitOk};
}

inline Outcome run_feasibility(const std::optional<double>& p1, const std::optional<double>& p2,
                               const std::optional<double>& p3, const std::optional<std::string>& means_text) {
    MeanVector m;
    if (means_text) {
        if (p1 || p2 || p3) throw CLI::ValidationError("--means", "cannot be combined with --p1/--p2/--p3");
        const auto v = parse_list(*means_text, 3, "--means");
        m = make_mean_vector(v[0], v[1], v[2]);
    } else {
        if (!p1 || !p2 || !p3) throw CLI::ValidationError("feasibility", "give --p1, --p2 and --p3, or --means");
        m = means(PotentialityAssignment::from_plus(*p1, *p2, *p3));
    }
    const bool feasible = is_feasible(m);
    Json doc;
    doc["means"] = {m.m1, m.m2, m.m3};
    doc["norm_sq"] = m.norm_sq();
    doc["feasible"] = feasible;
    return {doc, feasible ? kExitOk : kExitDomain};
}

struct SimulateOptions {
    double psi0 = 0.0;
    double phi0 = 0.0;
    std::size_t steps = 1;
    std::size_t trials = 1;
    std::uint64_t seed = 0;
    double p_act = 0.1;
    double q = 0.5;
    std::optional<std::size_t> fixed_step;
    bool halt_on_actualize = false;
    std::string csv_path;
    unsigned threads = 1;
};

inline void write_csv(std::ostream& os, const EnsembleResult& res) {
    os << "trial,step,psi_a,phi_p,actualized,value\n";
    for (const auto& tr : res.trials) {
        for (const auto& row : tr.trajectory) {
            os << row.trial << ',' << row.step << ',' << csv_number(row.psi_a) << ',' << csv_number(row.phi_p) << ','
               << (row.actualized ? 1 : 0) << ',' << csv_number(row.value) << '\n';
        }
    }
}

inline Outcome run_simulate(const SimulateOptions& opt) {
    EnsembleConfig cfg;
    cfg.initial = make_state(opt.psi0, opt.phi0);
    cfg.horizon = opt.steps;
    cfg.trials = opt.trials;
    cfg.seed = opt.seed;
    cfg.p_act = opt.p_act;
    cfg.q = opt.q;
    if (opt.fixed_step) {
        cfg.law = ActualizationLaw::Fixed;
        cfg.fixed_step = *opt.fixed_step;
    }
    cfg.halt_on_actualize = opt.halt_on_actualize;
    cfg.record_trajectories = !opt.csv_path.empty();
    cfg.threads = opt.threads;
    const EnsembleResult res = run_ensemble(cfg);

    if (!opt.csv_path.empty()) {
        std::ofstream csv(opt.csv_path, std::ios::binary);
        if (!csv) throw CLI::ValidationError("--csv", "cannot open '" + opt.csv_path + "' for writing");
        write_csv(csv, res);
    }

    Json trials = Json::array();
    for (const auto& tr : res.trials) {
        Json t;
        t["trial"] = tr.trial;
        t["actualization_step"] = tr.event.step;
        t["sign"] = tr.event.sign;
        t["final_value"] = tr.final_value ? Json(*tr.final_value) : Json(nullptr);
        t["divergence_step"] = tr.divergence_step ? Json(*tr.divergence_step) : Json(nullptr);
        trials.push_back(t);
    }
    Json doc;
    doc["config"] = {{"psi0", opt.psi0},
                     {"phi0", opt.phi0},
                     {"steps", opt.steps},
                     {"trials", opt.trials},
                     {"seed", opt.seed},
                     {"law", opt.fixed_step ? "fixed" : "geometric"},
                     {"p_act", opt.p_act},
                     {"fixed_step", opt.fixed_step ? Json(*opt.fixed_step) : Json(nullptr)},
                     {"q", opt.q},
                     {"halt_on_actualize", opt.halt_on_actualize}};
    doc["stability_warning"] = res.stability_warning;
    doc["converged"] = res.converged;
    doc["diverged"] = res.diverged;
    doc["mean"] = res.mean;
    doc["variance"] = res.variance;
    doc["trials"] = trials;
    return {doc, kExitOk};
}

inline Outcome run_repcheck(std::size_t trials, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    auto random_mv = [&] {
        Multivector::Coeffs c{};
        for (double& v : c) v = coeff(rng);
        return Multivector(c);
    };
    double worst = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Multivector x = random_mv();
        const Multivector y = random_mv();
        worst = std::max(worst, max_abs_diff(rep(mul(x, y)), rep(x) * rep(y)));
    }
    const bool passed = worst <= kRepTolerance;
    Json doc;
    doc["trials"] = trials;
    doc["seed"] = seed;
    doc["max_error"] = worst;
    doc["tolerance"] = kRepTolerance;
    doc["passed"] = passed;
    return {doc, passed ? kExitOk : kExitDomain};
}

} // namespace detail

/// Runs the command line given as args (args[0] is the program name).
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Anticommuting-generator algebra toolkit"};
    app.require_subcommand(1);

    std::function<detail::Outcome()> action;
    bool text_output = false;
    std::string text_payload;

    auto* derive = app.add_subcommand("derive", "Solve structure constants for a signature");
    std::string derive_k;
    int derive_branch = 0;
    derive->add_option("--k", derive_k, "Signature K1,K2,K3")->required();
    derive->add_option("--branch", derive_branch, "Solution branch for the table")->check(CLI::Range(0, 1));
    derive->callback([&] { action = [&] { return detail::run_derive(derive_k, derive_branch); }; });

    auto* table = app.add_subcommand("table", "Full 8x8 product table of the generated algebra");
    std::string table_sig = "1,1,1";
    int table_branch = 0;
    std::string table_format = "text";
    table->add_option("--signature", table_sig, "Signature K1,K2,K3");
    table->add_option("--branch", table_branch, "Solution branch")->check(CLI::Range(0, 1));
    table->add_option("--format", table_format, "text or json")->check(CLI::IsMember({"text", "json"}));
    table->callback([&] {
        action = [&] {
            Json doc = detail::run_table(table_sig, table_branch);
            if (table_format == "text") {
                const Signature sig = detail::signature_from(table_sig, "--signature");
                const auto full =
                    full_product_table(generate_table(solve_structure_constants(sig)[static_cast<std::size_t>(table_branch)]));
                text_output = true;
                text_payload = detail::table_text(full);
            }
            return detail::Outcome{doc, kExitOk};
        };
    });

    auto* evalc = app.add_subcommand("eval", "Evaluate an algebra expression");
    std::string expr;
    evalc->add_option("expression", expr, "Expression such as (1+e3)/2")->required();
    evalc->callback([&] { action = [&] { return detail::run_eval(expr); }; });

    auto* collapse = app.add_subcommand("collapse", "Collapse a pure state onto a measurement outcome");
    std::string c1_text, c2_text;
    int outcome = 1;
    int axis = 3;
    bool renorm = false;
    collapse->add_option("--c1", c1_text, "Amplitude RE,IM")->required();
    collapse->add_option("--c2", c2_text, "Amplitude RE,IM")->required();
    collapse->add_option("--outcome", outcome, "+1 or -1")->required()->check(CLI::IsMember({1, -1}));
    collapse->add_option("--axis", axis, "Measured generator")->check(CLI::Range(1, 3));
    collapse->add_flag("--renormalize", renorm, "Rescale the collapsed state to unit scalar part");
    collapse->callback([&] { action = [&] { return detail::run_collapse(c1_text, c2_text, outcome, axis, renorm); }; });

    auto* feas = app.add_subcommand("feasibility", "Check the unit-ball bound on mean values");
    std::optional<double> p1, p2, p3;
    std::optional<std::string> means_text;
    feas->add_option("--p1", p1, "P(e1 = +1)")->check(CLI::Range(0.0, 1.0));
    feas->add_option("--p2", p2, "P(e2 = +1)")->check(CLI::Range(0.0, 1.0));
    feas->add_option("--p3", p3, "P(e3 = +1)")->check(CLI::Range(0.0, 1.0));
    feas->add_option("--means", means_text, "Mean values M1,M2,M3");
    feas->callback([&] { action = [&] { return detail::run_feasibility(p1, p2, p3, means_text); }; });

    auto* sim = app.add_subcommand("simulate", "Monte Carlo ensemble of actualized evolutions");
    detail::SimulateOptions sopt;
    std::size_t fixed_step = 0;
    sim->add_option("--psi0", sopt.psi0, "Initial actual component")->required();
    sim->add_option("--phi0", sopt.phi0, "Initial potential coefficient")->required();
    sim->add_option("--steps", sopt.steps, "Horizon N")->required()->check(CLI::PositiveNumber);
    sim->add_option("--trials", sopt.trials, "Number of trials")->required()->check(CLI::PositiveNumber);
    sim->add_option("--seed", sopt.seed, "Master seed")->required();
    sim->add_option("--p-act", sopt.p_act, "Per-step actualization probability");
    sim->add_option("--q", sopt.q, "Probability of the +1 sign")->check(CLI::Range(0.0, 1.0));
    auto* fixed_opt = sim->add_option("--fixed-step", fixed_step, "Actualize at this step");
    sim->add_flag("--halt-on-actualize", sopt.halt_on_actualize, "Stop each trial at actualization");
    sim->add_option("--csv", sopt.csv_path, "Write trajectories to this CSV file");
    sim->add_option("--threads", sopt.threads, "Worker threads")->check(CLI::PositiveNumber);
    sim->callback([&] {
        if (fixed_opt->count() > 0) sopt.fixed_step = fixed_step;
        action = [&] { return detail::run_simulate(sopt); };
    });

    auto* rep = app.add_subcommand("repcheck", "Check the Pauli representation is multiplicative");
    std::size_t rep_trials = 1000;
    std::uint64_t rep_seed = 0;
    rep->add_option("--trials", rep_trials, "Random pairs")->required();
    rep->add_option("--seed", rep_seed, "Seed")->required();
    rep->callback([&] { action = [&] { return detail::run_repcheck(rep_trials, rep_seed); }; });

    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        const detail::Outcome result = action();
        if (text_output) {
            out << text_payload;
        } else {
            out << result.document.dump(2) << '\n';
        }
        return result.code;
    } catch (const ParseError& e) {
        err << "error: " << to_string(e.kind()) << " " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << to_string(e.kind()) << ": " << e.what() << '\n';
        return e.is_usage_error() ? kExitUsage : kExitDomain;
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::out_of_range& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
}

} // namespace potentia::cli
