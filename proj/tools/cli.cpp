#include "cli.hpp"

#include <algorithm>
#include <chrono>
#include <complex>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qtrace/elliptic.hpp"
#include "qtrace/elliptic_numeric.hpp"
#include "qtrace/graded.hpp"
#include "qtrace/modular.hpp"
#include "qtrace/pseudotrace.hpp"
#include "qtrace/series_json.hpp"

namespace qtrace::cli {

namespace {

constexpr const char* tool_version = "0.1.0";

nlohmann::json read_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw InputError("cannot read " + path);
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
}

std::string utc_timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream out;
    out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return out.str();
}

std::string group_name(const GroupElement& g)
{
    if (g == GroupElement::identity()) {
        return "I";
    }
    if (g == GroupElement::S()) {
        return "S";
    }
    if (g == GroupElement::T()) {
        return "T";
    }
    if (g == GroupElement::S().inverse()) {
        return "S^-1";
    }
    if (g == GroupElement::T().inverse()) {
        return "T^-1";
    }
    return g.to_string();
}

using Task = std::function<CheckReport()>;

/// Runs independent checks on at most thread_limit() workers; results sorted by id.
std::vector<CheckReport> run_checks(const std::vector<Task>& tasks)
{
    std::vector<CheckReport> out(tasks.size());
    const std::size_t width = std::max<std::size_t>(1, thread_limit());
    for (std::size_t start = 0; start < tasks.size(); start += width) {
        std::vector<std::future<CheckReport>> batch;
        const std::size_t end = std::min(tasks.size(), start + width);
        for (std::size_t i = start; i < end; ++i) {
            batch.push_back(std::async(width == 1 ? std::launch::deferred : std::launch::async, tasks[i]));
        }
        for (std::size_t i = start; i < end; ++i) {
            out[i] = batch[i - start].get();
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const CheckReport& a, const CheckReport& b) { return a.id < b.id; });
    return out;
}

CheckReport simple_check(std::string id, bool pass, std::string note = {})
{
    CheckReport r;
    r.id = std::move(id);
    r.pass = pass;
    if (!note.empty()) {
        r.notes.push_back(std::move(note));
    }
    return r;
}

Outcome finish(const Request& req, const std::string& mode, const std::vector<CheckReport>& checks,
               nlohmann::json result)
{
    Outcome out;
    nlohmann::json check_list = nlohmann::json::array();
    nlohmann::json summary = nlohmann::json::array();
    bool pass = true;
    for (const auto& c : checks) {
        check_list.push_back(c.to_json());
        summary.push_back({{"id", c.id}, {"pass", c.pass}, {"max_deviation", c.max_deviation}});
        pass = pass && c.pass;
    }
    out.report = {{"manifest",
                   {{"tool", "qtrace"},
                    {"version", tool_version},
                    {"command", req.command},
                    {"params", req.params},
                    {"inputs", req.inputs},
                    {"mode", mode},
                    {"timestamp", req.timestamp},
                    {"summary", summary}}},
                  {"checks", check_list},
                  {"pass", pass},
                  {"result", std::move(result)}};
    out.exit_code = pass ? exit_pass : exit_check_failed;
    return out;
}

const nlohmann::json& input(const Request& req, const char* name)
{
    if (!req.inputs.contains(name)) {
        throw InputError(std::string("missing input --") + name);
    }
    return req.inputs.at(name);
}

// ---- expand ---------------------------------------------------------------

Outcome expand_eisenstein(const Request& req)
{
    const int k = req.params.at("k").get<int>();
    const int order = req.params.at("order").get<int>();
    if (k < 0 || order < 0) {
        throw InputError("--k and --order must be non-negative");
    }
    const Eisenstein g = eisenstein(k, order);
    nlohmann::json coefficients = nlohmann::json::array();
    std::ostringstream csv;
    csv << "n,coefficient\n";
    for (int n = 0; n <= order; ++n) {
        const Scalar c = g.expansion.coefficient(mono(n));
        coefficients.push_back({{"n", n}, {"coef", scalar_to_json(c)}});
        csv << n << ",\"" << c.to_string() << "\"\n";
    }
    Outcome out = finish(req, "exact", {},
                         {{"k", k}, {"weight", g.weight}, {"coefficients", coefficients},
                          {"series", series_to_json(g.expansion)}});
    if (req.params.value("format", "json") == "csv") {
        out.csv = csv.str();
    }
    return out;
}

Outcome expand_wp(const Request& req)
{
    const int m = req.params.at("m").get<int>();
    const int zorder = req.params.at("zorder").get<int>();
    const int qorder = req.params.at("qorder").get<int>();
    if (m < 1 || zorder < 0 || qorder < 0) {
        throw InputError("--m must be >= 1 and orders non-negative");
    }
    const WpSeries wp = wp_series(m, zorder, qorder);
    return finish(req, "exact", {}, {{"m", m}, {"weight", wp.weight}, {"series", series_to_json(wp.expansion)}});
}

Outcome expand_kernel(const Request& req)
{
    const int m = req.params.at("m").get<int>();
    const int xrange = req.params.at("xrange").get<int>();
    const int qorder = req.params.at("qorder").get<int>();
    if (m < 0 || xrange < 0 || qorder < 0) {
        throw InputError("--m, --xrange and --qorder must be non-negative");
    }
    return finish(req, "exact", {}, {{"m", m}, {"series", series_to_json(kernel_P(m, xrange, qorder).expansion)}});
}

// ---- verify elliptic ------------------------------------------------------

std::vector<int> m_values(const Request& req, std::vector<int> defaults)
{
    if (req.params.contains("m") && !req.params.at("m").is_null()) {
        return {req.params.at("m").get<int>()};
    }
    return defaults;
}

Outcome verify_elliptic(const Request& req)
{
    const std::string suite = req.params.at("suite").get<std::string>();
    const int zorder = req.params.at("zorder").get<int>();
    const int qorder = req.params.at("qorder").get<int>();
    const double tol = req.params.at("tol").get<double>();
    std::vector<Task> tasks;
    std::string mode = "exact";
    if (suite == "recursion") {
        for (int m : m_values(req, {1, 2, 3, 4, 5, 6})) {
            if (m < 1) {
                throw InputError("--m must be >= 1");
            }
            tasks.push_back([=] { return wp_recursion_check(m, zorder, qorder); });
        }
    } else if (suite == "relation") {
        for (int m : m_values(req, {1, 2, 3})) {
            if (m < 1) {
                throw InputError("--m must be >= 1");
            }
            tasks.push_back([=] { return wp_P_relation_check(m, zorder, qorder); });
        }
    } else if (suite == "modular") {
        mode = "float";
        const std::vector<Sample> samples =
            req.inputs.contains("samples") ? samples_from_json(req.inputs.at("samples")) : default_sample_grid();
        const auto ms = m_values(req, {1, 2, 3});
        for (int m : ms) {
            if (m < 1) {
                throw InputError("--m must be >= 1");
            }
            if (m == 1) {
                tasks.push_back([=] { return quasi_periodicity_check(samples, tol, qorder); });
                continue;
            }
            for (const auto& [name, g] : {std::pair{"S", GroupElement::S()}, std::pair{"T", GroupElement::T()}}) {
                const std::string id = "wp" + std::to_string(m) + "_covariance_" + name;
                tasks.push_back([=] {
                    CheckReport r = modular_covariance_check(m, g, samples, tol, qorder);
                    r.id = id;
                    return r;
                });
            }
        }
        if (std::find(ms.begin(), ms.end(), 2) != ms.end()) {
            const double oracle_tol = req.params.at("oracle_tol").get<double>();
            tasks.push_back([=] { return lattice_oracle_check(samples, oracle_tol, qorder); });
        }
    } else {
        throw InputError("unknown elliptic suite " + suite);
    }
    return finish(req, mode, run_checks(tasks), nullptr);
}

// ---- verify modular-action -----------------------------------------------

Outcome verify_modular_action(const Request& req)
{
    const std::string suite = req.params.at("suite").get<std::string>();
    const double tol = req.params.at("tol").get<double>();
    const NumericOptions opts{req.params.at("step").get<double>(), req.params.at("richardson").get<bool>(),
                              req.params.at("qorder").get<int>()};
    const ModularSystem system = ModularSystem::from_json(input(req, "system"));
    const std::vector<ModularSample> samples = req.inputs.contains("samples")
                                                   ? modular_samples_from_json(req.inputs.at("samples"), system.n)
                                                   : default_modular_samples(system.n);
    const VectorSeq phi = system_solution(system, opts.q_order);
    const std::vector<GroupElement> gens{GroupElement::S(), GroupElement::T(), GroupElement::S().inverse(),
                                         GroupElement::T().inverse()};
    std::vector<Task> tasks;
    if (suite == "group") {
        for (const auto& g1 : gens) {
            for (const auto& g2 : gens) {
                tasks.push_back([=, &phi, &samples] {
                    CheckReport r = group_law_check(phi, g1, g2, system.alpha, samples, tol);
                    r.id = "group_law_" + group_name(g1) + "_" + group_name(g2);
                    return r;
                });
            }
        }
    } else if (suite == "covariance") {
        for (const auto& g : {GroupElement::S(), GroupElement::T()}) {
            for (int j = 1; j <= system.n; ++j) {
                tasks.push_back([=, &phi, &samples] {
                    CheckReport r = covariance_check(phi, g, system.alpha, j, samples, tol, opts);
                    r.id = "covariance_" + group_name(g) + "_j" + std::to_string(j);
                    return r;
                });
            }
        }
    } else if (suite == "invariance") {
        for (const auto& g : {GroupElement::S(), GroupElement::T()}) {
            tasks.push_back([=, &phi, &samples] {
                CheckReport r = solution_invariance_check(system, phi, g, samples, tol, opts);
                r.id = "solution_invariance_" + group_name(g);
                return r;
            });
        }
    } else {
        throw InputError("unknown modular-action suite " + suite);
    }
    return finish(req, "float", run_checks(tasks), nullptr);
}

// ---- pseudotrace / qtrace -------------------------------------------------

template <typename T>
Matrix<T> operator_from_json(const nlohmann::json& j)
{
    return Matrix<T>::from_json(j.is_object() ? j.at("matrix") : j);
}

template <typename T>
nlohmann::json basis_to_json(const ProjBasis<T>& b)
{
    nlohmann::json m = nlohmann::json::array();
    nlohmann::json alpha = nlohmann::json::array();
    for (std::size_t i = 0; i < b.m.size(); ++i) {
        m.push_back(vec_to_json(b.m[i]));
        alpha.push_back(b.alpha[i].to_json());
    }
    return {{"m", m}, {"alpha", alpha}};
}

template <typename T>
Outcome pseudotrace_command(const Request& req, const std::string& mode)
{
    const FDAlgebra<T> p = FDAlgebra<T>::from_json(input(req, "algebra"));
    const RightModule<T> mod = RightModule<T>::from_json(p, input(req, "module"));
    const SymFn<T> phi = SymFn<T>::from_json(input(req, "phi"));
    const Matrix<T> op = operator_from_json<T>(input(req, "op"));
    if (phi.phi.size() != p.dim()) {
        throw InputError("phi has " + std::to_string(phi.phi.size()) + " entries, algebra dimension is " +
                         std::to_string(p.dim()));
    }
    mod.require_equivariant(op, "operator");
    std::vector<CheckReport> checks;
    checks.push_back(simple_check("phi_symmetric", check_symmetric(p, phi)));
    const auto basis = find_projective_basis(p, mod);
    if (!basis) {
        checks.push_back(simple_check("module_projective", false, "no projective basis exists"));
        return finish(req, mode, checks, nullptr);
    }
    checks.push_back(simple_check("module_projective", true));
    const T value = pseudotrace(p, mod, phi, *basis, op);
    checks.push_back(basis_independence_check(p, mod, phi, op, req.params.at("trials").get<int>(),
                                              req.params.at("seed").get<std::uint64_t>()));
    std::sort(checks.begin(), checks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return finish(req, mode, checks, {{"value", Field<T>::to_json(value)}, {"basis", basis_to_json(*basis)}});
}

template <typename T>
Outcome qtrace_command(const Request& req, const std::string& mode)
{
    const FDAlgebra<T> p =
        req.inputs.contains("algebra") ? FDAlgebra<T>::from_json(req.inputs.at("algebra")) : FDAlgebra<T>::scalars();
    const GradedSpace<T> w = GradedSpace<T>::from_json(p, input(req, "space"));
    const SymFn<T> phi = SymFn<T>::from_json(input(req, "phi"));
    if (phi.phi.size() != p.dim()) {
        throw InputError("phi has " + std::to_string(phi.phi.size()) + " entries, algebra dimension is " +
                         std::to_string(p.dim()));
    }
    const Matrix<T> op =
        req.inputs.contains("op") ? operator_from_json<T>(req.inputs.at("op")) : Matrix<T>::identity(w.dim());
    w.module().require_equivariant(op, "operator");
    std::vector<CheckReport> checks;
    checks.push_back(simple_check("phi_symmetric", check_symmetric(p, phi)));
    checks.push_back(simple_check("x_pow_L0_derivative_law", x_pow_L0_derivative_law(w)));
    nlohmann::json result = nullptr;
    try {
        const MultiSeries series = formal_q_pseudotrace(w, phi, op);
        checks.push_back(simple_check("eigenspaces_projective", true));
        nlohmann::json weights = nlohmann::json::array();
        for (const auto& e : w.eigenspaces()) {
            weights.push_back({{"weight", to_string(e.weight)}, {"dim", e.basis.cols()}});
        }
        result = {{"series", series_to_json(series)}, {"eigenspaces", weights},
                  {"nilpotency_index", w.nilpotency_index()}};
    } catch (const NotProjective& e) {
        checks.push_back(simple_check("eigenspaces_projective", false, e.what()));
    }
    std::sort(checks.begin(), checks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return finish(req, mode, checks, result);
}

// ---- argument parsing -----------------------------------------------------

struct Parsed {
    Request request;
    std::string out_path;
    bool replay = false;
};

}  // namespace

unsigned thread_limit()
{
    if (const char* env = std::getenv("QTRACE_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) {
                return static_cast<unsigned>(v);
            }
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

Outcome execute(const Request& req)
{
    const auto& c = req.command;
    const bool is_float = req.params.value("float", false);
    if (c == std::vector<std::string>{"expand", "eisenstein"}) {
        return expand_eisenstein(req);
    }
    if (c == std::vector<std::string>{"expand", "wp"}) {
        return expand_wp(req);
    }
    if (c == std::vector<std::string>{"expand", "kernel"}) {
        return expand_kernel(req);
    }
    if (c == std::vector<std::string>{"verify", "elliptic"}) {
        return verify_elliptic(req);
    }
    if (c == std::vector<std::string>{"verify", "modular-action"}) {
        return verify_modular_action(req);
    }
    if (c == std::vector<std::string>{"pseudotrace"}) {
        return is_float ? pseudotrace_command<std::complex<double>>(req, "float")
                        : pseudotrace_command<Rational>(req, "exact");
    }
    if (c == std::vector<std::string>{"qtrace"}) {
        return is_float ? qtrace_command<std::complex<double>>(req, "float") : qtrace_command<Rational>(req, "exact");
    }
    std::string joined;
    for (const auto& part : c) {
        joined += (joined.empty() ? "" : " ") + part;
    }
    throw InputError("unknown command: " + joined);
}

Request request_from_manifest(const nlohmann::json& j)
{
    const nlohmann::json& m = j.contains("manifest") ? j.at("manifest") : j;
    try {
        Request r;
        r.command = m.at("command").get<std::vector<std::string>>();
        r.params = m.at("params");
        r.inputs = m.value("inputs", nlohmann::json::object());
        r.timestamp = m.at("timestamp").get<std::string>();
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("not a qtrace manifest: ") + e.what());
    }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact q-series, pseudotraces and modular-action checks", "qtrace"};
    app.require_subcommand(1);
    std::string out_path;
    app.add_option("-o,--out", out_path, "Write the report to FILE instead of stdout");

    // expand
    auto* expand = app.add_subcommand("expand", "Print exact q-expansions");
    expand->require_subcommand(1);
    int k = 0;
    int order = 0;
    bool as_csv = false;
    auto* eis = expand->add_subcommand("eisenstein", "G~_{2k+2} up to q^N");
    eis->add_option("--k", k, "Series index (weight 2k+2)")->required();
    eis->add_option("--order", order, "Highest q-power N")->required();
    auto* json_flag = eis->add_flag("--json", "JSON output (default)");
    eis->add_flag("--csv", as_csv, "Coefficient table as CSV")->excludes(json_flag);

    int m = 1;
    int zorder = 0;
    int qorder = 0;
    int xrange = 0;
    auto* wp = expand->add_subcommand("wp", "Laurent expansion of wp~_m in (z, q)");
    wp->add_option("--m", m, "Index m >= 1")->required();
    wp->add_option("--zorder", zorder, "Highest z-power")->required();
    wp->add_option("--qorder", qorder, "Highest q-power")->required();
    auto* kernel = expand->add_subcommand("kernel", "P_{m+1}(x; q)");
    kernel->add_option("--m", m, "Index m >= 0")->required();
    kernel->add_option("--xrange", xrange, "Largest positive x-power")->required();
    kernel->add_option("--qorder", qorder, "Highest q-power")->required();

    // verify
    auto* verify = app.add_subcommand("verify", "Run verification suites");
    verify->require_subcommand(1);
    std::string suite;
    std::optional<int> m_opt;
    std::optional<int> zorder_opt;
    std::optional<int> qorder_opt;
    std::optional<double> tol_opt;
    std::optional<double> step_opt;
    bool richardson = false;
    std::string samples_path;
    std::string system_path;
    auto* ell = verify->add_subcommand("elliptic", "Exact and numeric checks of the Weierstrass family");
    ell->add_option("--suite", suite, "recursion | relation | modular")
        ->required()
        ->check(CLI::IsMember({"recursion", "relation", "modular"}));
    ell->add_option("--m", m_opt, "Single index to check");
    ell->add_option("--zorder", zorder_opt, "z-order (exact suites)");
    ell->add_option("--qorder", qorder_opt, "q-order");
    ell->add_option("--tol", tol_opt, "Absolute tolerance (modular suite)");
    ell->add_option("--samples", samples_path, "JSON array of {\"z\": [re, im], \"tau\": [re, im]}");
    auto* mod = verify->add_subcommand("modular-action", "Numeric checks of the SL2(Z) action and D_j");
    mod->add_option("--suite", suite, "group | covariance | invariance")
        ->required()
        ->check(CLI::IsMember({"group", "covariance", "invariance"}));
    mod->add_option("--system", system_path, "System JSON")->required();
    mod->add_option("--samples", samples_path, "Sample JSON");
    mod->add_option("--tol", tol_opt, "Absolute tolerance");
    mod->add_option("--step", step_opt, "Finite-difference step");
    mod->add_flag("--richardson", richardson, "Richardson-extrapolated differences");
    mod->add_option("--qorder", qorder_opt, "q-order of numeric evaluation");

    // pseudotrace / qtrace
    std::string algebra_path;
    std::string module_path;
    std::string phi_path;
    std::string op_path;
    std::string space_path;
    bool use_float = false;
    int trials = 5;
    std::uint64_t seed = 1;
    auto* pt = app.add_subcommand("pseudotrace", "Pseudotrace of a P-equivariant operator");
    pt->add_option("--algebra", algebra_path, "Algebra JSON")->required();
    pt->add_option("--module", module_path, "Right module JSON")->required();
    pt->add_option("--phi", phi_path, "Symmetric linear function JSON")->required();
    pt->add_option("--op", op_path, "Operator matrix JSON")->required();
    pt->add_flag("--float", use_float, "Complex floating-point arithmetic");
    pt->add_option("--trials", trials, "Randomized projective bases to compare");
    pt->add_option("--seed", seed, "Seed for the randomized bases");
    auto* qt = app.add_subcommand("qtrace", "Formal q-pseudotrace of a graded space");
    qt->add_option("--space", space_path, "Graded space JSON")->required();
    qt->add_option("--phi", phi_path, "Symmetric linear function JSON")->required();
    qt->add_option("--op", op_path, "Operator matrix JSON (default identity)");
    qt->add_option("--algebra", algebra_path, "Algebra JSON (default C)");
    qt->add_flag("--float", use_float, "Complex floating-point arithmetic");

    // replay
    std::string manifest_path;
    auto* replay = app.add_subcommand("replay", "Repeat a run from its report or manifest");
    replay->add_option("--manifest", manifest_path, "Report or manifest JSON")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_pass;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_pass;
    } catch (const CLI::ParseError& e) {
        err << "qtrace: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        Request req;
        req.timestamp = utc_timestamp();
        auto load = [&](const char* name, const std::string& path) {
            if (!path.empty()) {
                req.inputs[name] = read_json_file(path);
            }
        };
        if (replay->parsed()) {
            req = request_from_manifest(read_json_file(manifest_path));
        } else if (eis->parsed()) {
            req.command = {"expand", "eisenstein"};
            req.params = {{"k", k}, {"order", order}, {"format", as_csv ? "csv" : "json"}};
        } else if (wp->parsed()) {
            req.command = {"expand", "wp"};
            req.params = {{"m", m}, {"zorder", zorder}, {"qorder", qorder}};
        } else if (kernel->parsed()) {
            req.command = {"expand", "kernel"};
            req.params = {{"m", m}, {"xrange", xrange}, {"qorder", qorder}};
        } else if (ell->parsed()) {
            req.command = {"verify", "elliptic"};
            const bool modular = suite == "modular";
            const int default_z = suite == "recursion" ? 8 : 4;
            const int default_q = modular ? 40 : (suite == "recursion" ? 8 : 4);
            req.params = {{"suite", suite},
                          {"m", m_opt ? nlohmann::json(*m_opt) : nlohmann::json(nullptr)},
                          {"zorder", zorder_opt.value_or(default_z)},
                          {"qorder", qorder_opt.value_or(default_q)},
                          {"tol", tol_opt.value_or(modular ? 1e-8 : 0.0)},
                          {"oracle_tol", 1e-6}};
            load("samples", samples_path);
        } else if (mod->parsed()) {
            req.command = {"verify", "modular-action"};
            const bool nested = suite == "invariance";
            const double default_tol = suite == "group" ? 1e-6 : (suite == "covariance" ? 1e-5 : 1e-6);
            req.params = {{"suite", suite},
                          {"tol", tol_opt.value_or(default_tol)},
                          {"step", step_opt.value_or(nested ? 1e-3 : 1e-5)},
                          {"richardson", richardson || (nested && !step_opt)},
                          {"qorder", qorder_opt.value_or(40)}};
            load("system", system_path);
            load("samples", samples_path);
        } else if (pt->parsed()) {
            req.command = {"pseudotrace"};
            req.params = {{"float", use_float}, {"trials", trials}, {"seed", seed}};
            load("algebra", algebra_path);
            load("module", module_path);
            load("phi", phi_path);
            load("op", op_path);
        } else if (qt->parsed()) {
            req.command = {"qtrace"};
            req.params = {{"float", use_float}};
            load("space", space_path);
            load("phi", phi_path);
            load("op", op_path);
            load("algebra", algebra_path);
        }

        const Outcome outcome = execute(req);
        const std::string text = outcome.csv.empty() ? outcome.report.dump(2) + "\n" : outcome.csv;
        if (out_path.empty()) {
            out << text;
        } else {
            std::ofstream file(out_path);
            if (!file) {
                throw InputError("cannot write " + out_path);
            }
            file << text;
        }
        if (outcome.exit_code != exit_pass) {
            err << "qtrace: one or more checks failed\n";
        }
        return outcome.exit_code;
    } catch (const InputError& e) {
        err << "qtrace: " << e.what() << "\n";
    } catch (const nlohmann::json::exception& e) {
        err << "qtrace: malformed input: " << e.what() << "\n";
    } catch (const std::exception& e) {
        err << "qtrace: " << e.what() << "\n";
    }
    return exit_usage;
}

}  // namespace qtrace::cli
