#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>

#include "qtrace/elliptic_numeric.hpp"
#include "qtrace/modular.hpp"
#include "support.hpp"

using namespace qtrace;
using qtrace::test::Gen;

namespace {

const Complex two_pi_i{0.0, 2.0 * std::numbers::pi};

nlohmann::json load(const std::string& rel)
{
    std::ifstream in(std::string(QTRACE_DATA_DIR) + "/" + rel);
    REQUIRE_MESSAGE(in.good(), "missing data file ", rel);
    return nlohmann::json::parse(in);
}

Evaluator from_expr(const FExpr& e)
{
    return [e](std::span<const Complex> z, Complex tau) { return e.eval(z, tau); };
}

Evaluator constant(Complex c)
{
    return [c](std::span<const Complex>, Complex) { return c; };
}

/// Largest |a_mu - b_mu| over the union of both closures and the samples.
double max_gap(const VectorSeq& a, const VectorSeq& b, const std::vector<ModularSample>& samples)
{
    std::set<MultiIndex> idx;
    for (const auto& mu : a.closure()) {
        idx.insert(mu);
    }
    for (const auto& mu : b.closure()) {
        idx.insert(mu);
    }
    double worst = 0.0;
    for (const auto& s : samples) {
        for (const auto& mu : idx) {
            worst = std::max(worst, std::abs(a.eval(mu, s.z, s.tau) - b.eval(mu, s.z, s.tau)));
        }
    }
    return worst;
}

MultiSeries q_monomial(const Rational& h, int trunc, const std::vector<std::string>& vars = {"q"}, int z_pow = 0)
{
    MultiSeries f(vars);
    std::vector<Rational> exps(vars.size(), Rational(0));
    exps[f.var_index("q")] = h;
    if (vars.size() > 1) {
        exps[f.var_index("z")] = z_pow;
    }
    f.add_term(Monomial(exps, std::vector<int>(vars.size(), 0)), Scalar(1));
    f.truncate(f.var_index("q"), trunc);
    return f;
}

/// Smooth test family on one variable built from Eisenstein series, wp~_2 and tau.
VectorSeq sample_family(Gen& g)
{
    VectorSeq phi(1, 2);
    const std::vector<FExpr> atoms = {FExpr::G(4), FExpr::G(6), FExpr::wp(2, 1), FExpr::tau(),
                                      FExpr::mul({FExpr::G(4), FExpr::wp(2, 1)})};
    const int top = g.integer(0, 2);
    for (int k = 0; k <= top; ++k) {
        std::vector<FExpr> terms;
        for (const auto& a : atoms) {
            if (g.coin()) {
                terms.push_back(FExpr::mul({FExpr::constant(g.nonzero_rational()), a}));
            }
        }
        terms.push_back(FExpr::constant(g.nonzero_rational()));
        phi.set({k}, from_expr(FExpr::add(terms)));
    }
    return phi;
}

std::vector<ModularSample> few_samples(int n)
{
    auto s = default_modular_samples(n);
    s.resize(4);
    return s;
}

}  // namespace

TEST_SUITE("modular group")
{
    TEST_CASE("relations and parsing")
    {
        const GroupElement S = GroupElement::S();
        const GroupElement T = GroupElement::T();
        const GroupElement minus_one(-1, 0, 0, -1);
        CHECK(S * S == minus_one);
        CHECK((S * T) * (S * T) * (S * T) == minus_one);
        CHECK(T * T.inverse() == GroupElement::identity());
        CHECK(GroupElement::parse("S^-1") == S.inverse());
        CHECK(GroupElement::parse("Tinv") == T.inverse());
        CHECK(GroupElement::parse("2,1,1,1") == GroupElement(2, 1, 1, 1));
        CHECK_THROWS_AS(GroupElement(1, 1, 1, 1), std::invalid_argument);
        CHECK_THROWS(GroupElement::parse("U"));
    }

    TEST_CASE("action and the upper half-plane")
    {
        const Complex tau(0.3, 1.2);
        CHECK(std::abs(GroupElement::S().act(tau) + 1.0 / tau) < 1e-15);
        CHECK(std::abs(GroupElement::T().act(tau) - (tau + 1.0)) < 1e-15);
        CHECK_THROWS_AS(GroupElement::S().act({0.1, -1.0}), DomainError);
        CHECK_THROWS_AS(require_upper_half_plane({0.5, 0.0}), DomainError);
    }

    TEST_CASE("property: branch cocycle measures the failure of log additivity")
    {
        Gen g(31);
        const std::vector<GroupElement> gens = {GroupElement::S(), GroupElement::T(), GroupElement::S().inverse(),
                                                GroupElement::T().inverse(), GroupElement(2, 1, 1, 1),
                                                GroupElement(1, 0, -3, 1)};
        int nonzero = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const auto& g1 = gens[static_cast<std::size_t>(g.integer(0, 5))];
            const auto& g2 = gens[static_cast<std::size_t>(g.integer(0, 5))];
            const Complex tau(g.real(-2, 2), g.real(0.2, 2));
            const int w = branch_cocycle(g1, g2, tau);
            const Complex lhs = g1.log_automorphy(g2.act(tau)) + g2.log_automorphy(tau);
            const Complex rhs = (g1 * g2).log_automorphy(tau) + two_pi_i * static_cast<double>(w);
            REQUIRE(std::abs(lhs - rhs) < 1e-12);
            nonzero += w != 0;
        }
        CHECK(nonzero > 0);
    }
}

TEST_SUITE("vector sequences")
{
    TEST_CASE("index validation")
    {
        CHECK_THROWS_AS(VectorSeq(0), std::invalid_argument);
        VectorSeq phi(2, 3);
        CHECK_THROWS_AS(phi.set({1}, constant(1.0)), std::invalid_argument);
        CHECK_THROWS_AS(phi.set({0, 4}, constant(1.0)), std::invalid_argument);
        CHECK_THROWS_AS(phi.set({-1, 0}, constant(1.0)), std::invalid_argument);
        phi.set({1, 2}, constant(1.0));
        CHECK(phi.closure().size() == 6);
        const std::vector<Complex> z = {0.1, 0.2};
        CHECK(phi.eval({0, 0}, z, {0, 1}) == Complex{});
    }

    TEST_CASE("shift lowers the j-th index and drops the bottom layer")
    {
        VectorSeq phi(2);
        phi.set({0, 0}, constant(1.0));
        phi.set({1, 0}, constant(2.0));
        phi.set({1, 1}, constant(3.0));
        const std::vector<Complex> z = {0.1, 0.2};
        const Complex tau(0, 1);
        const VectorSeq d1 = shift(phi, 1);
        CHECK(d1.components().size() == 2);
        CHECK(d1.eval({0, 0}, z, tau) == Complex(2.0));
        CHECK(d1.eval({0, 1}, z, tau) == Complex(3.0));
        const VectorSeq d2 = shift(phi, 2);
        CHECK(d2.components().size() == 1);
        CHECK(d2.eval({1, 0}, z, tau) == Complex(3.0));
        CHECK_THROWS_AS(shift(phi, 0), std::invalid_argument);
        CHECK_THROWS_AS(shift(phi, 3), std::invalid_argument);
    }

    TEST_CASE("components from json")
    {
        const VectorSeq phi = VectorSeq::from_json(
            {{"support_bound", 2}, {"components", {{{"index", {1}}, {"expr", {{"G", 4}}}}}}}, 1);
        CHECK(phi.support_bound() == 2);
        const std::vector<Complex> z = {0.2};
        const Complex tau(0.1, 1.1);
        CHECK(test::rel_diff(phi.eval({1}, z, tau), test::eisenstein_direct(1, tau)) < 1e-10);
        CHECK_THROWS(VectorSeq::from_json(nlohmann::json::array({{{"index", {0}}, {"expr", {{"wp", 2}, {"r", 2}}}}}),
                                          1));
    }

    TEST_CASE("samples json")
    {
        const auto samples = modular_samples_from_json(load("samples/grid9_n2.json"), 2);
        CHECK(samples.size() == 9);
        CHECK(samples[0].z.size() == 2);
        const auto again = modular_samples_from_json(modular_samples_to_json(samples), 2);
        for (std::size_t i = 0; i < samples.size(); ++i) {
            CHECK(again[i].tau == samples[i].tau);
            CHECK(again[i].z == samples[i].z);
        }
        CHECK_THROWS(modular_samples_from_json(nlohmann::json::object(), 1));
        CHECK(default_modular_samples(3).front().z.size() == 3);
    }
}

TEST_SUITE("O and D")
{
    TEST_CASE("constants with alpha = 0 are annihilated")
    {
        VectorSeq phi(1);
        phi.set({0}, constant(2.5));
        const VectorSeq out = apply_O(phi, 1, 0);
        for (const auto& s : default_modular_samples(1)) {
            CHECK(std::abs(out.eval({0}, s.z, s.tau)) < 1e-9);
        }
        VectorSeq series(1);
        series.set({0}, MultiSeries::constant({"q"}, Scalar(3)).truncate(0, 5));
        CHECK(apply_O(series, 1, 0).series({0})->is_zero());
    }

    TEST_CASE("series mode on q^h, written out by hand")
    {
        const Rational h(3, 2);
        const Rational alpha(2, 3);
        VectorSeq phi(1);
        phi.set({0}, q_monomial(h, 7));
        const VectorSeq out = apply_O(phi, 1, alpha);
        REQUIRE(out.series({0}));

        // (2 pi i)^2 h q^h + alpha (pi^2/3 - 8 pi^2 sum sigma_1(n) q^n) q^h
        MultiSeries expected({"q"});
        expected.add_term(mono(h), Scalar::two_pi_i_pow(2) * Scalar(h));
        expected.add_term(mono(h), Scalar::pi_power(2, {alpha / 3, 0}));
        for (long n = 1; h + n < 7; ++n) {
            expected.add_term(mono(h + n), Scalar::pi_power(2, {-8 * alpha * Rational(test::divisor_power_sum(n, 1)), 0}));
        }
        expected.truncate(0, 7);
        const auto [a, b] = common_truncation(*out.series({0}), expected);
        CHECK(a == b);
        CHECK(*out.series({0})->trunc(0) == 7);
    }

    TEST_CASE("series mode agrees with central differences")
    {
        const std::vector<std::string> vars = {"z", "q"};
        VectorSeq series(1);
        series.set({0}, q_monomial(1, 12, vars, 2));
        series.set({1}, q_monomial(2, 12, vars, 0));
        VectorSeq closed(1);
        closed.set({0}, Evaluator([](std::span<const Complex> z, Complex tau) { return z[0] * z[0] * nome(tau); }));
        closed.set({1}, Evaluator([](std::span<const Complex>, Complex tau) { return nome(tau) * nome(tau); }));
        const Rational alpha(5, 2);
        for (bool with_shifts : {false, true}) {
            const VectorSeq a = with_shifts ? apply_D(series, 1, alpha) : apply_O(series, 1, alpha);
            const VectorSeq b = with_shifts ? apply_D(closed, 1, alpha) : apply_O(closed, 1, alpha);
            CHECK(a.series_mode());
            CHECK_FALSE(b.series_mode());
            for (const auto& s : default_modular_samples(1)) {
                for (const MultiIndex& mu : {MultiIndex{0}, MultiIndex{1}}) {
                    const Complex x = a.eval(mu, s.z, s.tau);
                    const Complex y = b.eval(mu, s.z, s.tau);
                    CHECK_MESSAGE(std::abs(x - y) <= 1e-6 * std::max(1.0, std::abs(y)), "tau = ", s.tau.imag());
                }
            }
        }
    }

    TEST_CASE("series mode needs a finite q truncation")
    {
        MultiSeries f({"q"});
        f.add_term(mono(1), Scalar(1));
        VectorSeq phi(1);
        phi.set({0}, f);
        CHECK_THROWS_AS(apply_O(phi, 1, 1), SeriesError);
    }

    TEST_CASE("D equals O when nothing sits above the index")
    {
        VectorSeq phi(1);
        phi.set({0}, from_expr(FExpr::mul({FExpr::G(4), FExpr::wp(2, 1)})));
        const VectorSeq o = apply_O(phi, 1, 2);
        const VectorSeq d = apply_D(phi, 1, 2);
        CHECK(max_gap(o, d, default_modular_samples(1)) == 0.0);
    }

    TEST_CASE("alpha enters D only through alpha G~_2")
    {
        VectorSeq phi(2);
        phi.set({0, 0}, from_expr(FExpr::wp(2, 1, 2)));
        phi.set({1, 0}, from_expr(FExpr::G(4)));
        phi.set({0, 1}, from_expr(FExpr::tau()));
        const Rational alpha(7, 3);
        const VectorSeq d0 = apply_D(phi, 2, 0);
        const VectorSeq da = apply_D(phi, 2, alpha);
        for (const auto& s : few_samples(2)) {
            for (const auto& mu : phi.closure()) {
                const Complex diff = da.eval(mu, s.z, s.tau) - d0.eval(mu, s.z, s.tau);
                const Complex expected = to_double(alpha) * g2_value(s.tau) * phi.eval(mu, s.z, s.tau);
                CHECK(std::abs(diff - expected) <= 1e-9 * std::max(1.0, std::abs(expected)));
            }
        }
    }

    TEST_CASE("D products and the operator tree")
    {
        const ModularOperator p = ModularOperator::D_product(1, 0, 2);
        CHECK(p.weight_gain() == 4);
        CHECK(p.to_string() == "D_1(2) o D_1(0)");
        CHECK(ModularOperator::O(2, Rational(1, 2)).to_string() == "O_2(1/2)");
        CHECK(ModularOperator::compose({}).to_string() == "id");
        CHECK(ModularOperator::D_product(1, 3, 4).weight_gain() == 8);

        VectorSeq phi(1);
        phi.set({0}, q_monomial(Rational(1, 3), 6));
        phi.set({1}, q_monomial(Rational(4, 3), 6));
        const VectorSeq by_hand = apply_D(apply_D(phi, 1, 0), 1, 2);
        const VectorSeq tree = p.apply(phi);
        const VectorSeq product = apply_D_product(phi, 1, 0, 2);
        for (const MultiIndex& mu : {MultiIndex{0}, MultiIndex{1}}) {
            REQUIRE(by_hand.series(mu));
            CHECK(*tree.series(mu) == *by_hand.series(mu));
            CHECK(*product.series(mu) == *by_hand.series(mu));
        }
    }

    TEST_CASE("property: O and D are linear in series mode")
    {
        Gen g(41);
        for (int trial = 0; trial < 30; ++trial) {
            VectorSeq a(1);
            VectorSeq b(1);
            VectorSeq sum(1);
            const Scalar c(g.nonzero_rational());
            for (int k = 0; k <= 1; ++k) {
                const MultiSeries f = q_monomial(Rational(g.integer(0, 6), 2), 5, {"z", "q"}, g.integer(0, 3));
                const MultiSeries h = q_monomial(Rational(g.integer(0, 6), 2), 5, {"z", "q"}, g.integer(0, 3));
                a.set({k}, f);
                b.set({k}, h);
                sum.set({k}, f * c + h);
            }
            const Rational alpha = g.rational();
            const VectorSeq lhs = apply_D(sum, 1, alpha);
            const VectorSeq da = apply_D(a, 1, alpha);
            const VectorSeq db = apply_D(b, 1, alpha);
            for (const MultiIndex& mu : {MultiIndex{0}, MultiIndex{1}}) {
                REQUIRE(*lhs.series(mu) == *da.series(mu) * c + *db.series(mu));
            }
        }
    }
}

TEST_SUITE("slash action")
{
    TEST_CASE("identity is a no-op")
    {
        Gen g(51);
        const VectorSeq phi = sample_family(g);
        CHECK(max_gap(apply_action(phi, GroupElement::identity(), Rational(3, 2)), phi, default_modular_samples(1)) ==
              0.0);
    }

    TEST_CASE("T substitutes tau + 1")
    {
        VectorSeq phi(1);
        phi.set({0}, from_expr(FExpr::tau()));
        phi.set({1}, from_expr(FExpr::mul({FExpr::tau(), FExpr::tau()})));
        const VectorSeq out = apply_action(phi, GroupElement::T(), 5);
        for (const auto& s : default_modular_samples(1)) {
            CHECK(std::abs(out.eval({0}, s.z, s.tau) - (s.tau + 1.0)) < 1e-14);
            CHECK(std::abs(out.eval({1}, s.z, s.tau) - (s.tau + 1.0) * (s.tau + 1.0)) < 1e-13);
        }
    }

    TEST_CASE("S on a single constant one level up, by hand")
    {
        // (e^{-L d} Phi)_0 = phi_0 - L phi_1 with L = log tau, then j^{-a}
        VectorSeq phi(1);
        phi.set({1}, constant(1.0));
        for (const auto& s : default_modular_samples(1)) {
            const Complex L = std::log(s.tau);
            const VectorSeq a0 = apply_action(phi, GroupElement::S(), 0);
            CHECK(std::abs(a0.eval({0}, s.z, s.tau) + L) < 1e-14);
            CHECK(std::abs(a0.eval({1}, s.z, s.tau) - 1.0) < 1e-14);
            const VectorSeq a1 = apply_action(phi, GroupElement::S(), 1);
            CHECK(std::abs(a1.eval({0}, s.z, s.tau) + L / s.tau) < 1e-14);
        }
    }

    TEST_CASE("wp~_2 is fixed by S at weight 2")
    {
        VectorSeq phi(1);
        phi.set({0}, from_expr(FExpr::wp(2, 1)));
        const VectorSeq out = apply_action(phi, GroupElement::S(), 2);
        for (const auto& s : default_modular_samples(1)) {
            const Complex v = phi.eval({0}, s.z, s.tau);
            CHECK(std::abs(out.eval({0}, s.z, s.tau) - v) <= 1e-8 * std::max(1.0, std::abs(v)));
        }
    }

    TEST_CASE("lower half-plane is a domain error")
    {
        VectorSeq phi(1);
        phi.set({0}, from_expr(FExpr::G(4)));
        const VectorSeq out = apply_action(phi, GroupElement::S(), 4);
        const std::vector<Complex> z = {0.1};
        CHECK_THROWS_AS(out.eval({0}, z, {0.2, -0.5}), DomainError);
    }

    TEST_CASE("shift exponential composes additively")
    {
        Gen g(52);
        const VectorSeq phi = sample_family(g);
        const Complex c1(0.3, -0.2);
        const Complex c2(-0.1, 0.7);
        const double gap = max_gap(shift_exponential(shift_exponential(phi, c1), c2), shift_exponential(phi, c1 + c2),
                                   default_modular_samples(1));
        CHECK(gap < 1e-10);
    }
}

TEST_SUITE("checks")
{
    TEST_CASE("property: group law over generator pairs")
    {
        Gen g(61);
        const std::vector<GroupElement> gens = {GroupElement::identity(), GroupElement::S(), GroupElement::T(),
                                                GroupElement::S().inverse(), GroupElement::T().inverse()};
        for (int trial = 0; trial < 20; ++trial) {
            const VectorSeq phi = sample_family(g);
            const auto& g1 = gens[static_cast<std::size_t>(g.integer(0, 4))];
            const auto& g2 = gens[static_cast<std::size_t>(g.integer(0, 4))];
            const CheckReport r = group_law_check(phi, g1, g2, g.rational(), few_samples(1));
            REQUIRE_MESSAGE(r.pass, r.id, " deviation ", r.max_deviation);
        }
    }

    TEST_CASE("group law with identity is exact")
    {
        Gen g(62);
        const VectorSeq phi = sample_family(g);
        const auto r = group_law_check(phi, GroupElement::identity(), GroupElement::identity(), 1,
                                       default_modular_samples(1));
        CHECK(r.max_deviation == 0.0);
        CHECK(r.id.rfind("group_law_", 0) == 0);
    }

    TEST_CASE("covariance")
    {
        Gen g(63);
        const VectorSeq phi = sample_family(g);
        const Rational a(3, 2);
        const auto id = covariance_check(phi, GroupElement::identity(), a, 1, default_modular_samples(1));
        CHECK(id.max_deviation < 1e-12);
        for (const auto& el : {GroupElement::S(), GroupElement::T()}) {
            const auto r = covariance_check(phi, el, a, 1, default_modular_samples(1));
            CHECK_MESSAGE(r.pass, r.id, " deviation ", r.max_deviation);
        }
    }

    TEST_CASE("covariance for wp~_2(z_1 - z_2) on two variables")
    {
        const ModularSystem sys = ModularSystem::from_json(load("systems/wp2_pair.json"));
        const VectorSeq phi = system_solution(sys);
        const auto samples = modular_samples_from_json(load("samples/grid9_n2.json"), 2);
        for (int j = 1; j <= 2; ++j) {
            const auto r = covariance_check(phi, GroupElement::S(), sys.alpha, j, samples, 1e-5);
            CHECK_MESSAGE(r.pass, r.id, " deviation ", r.max_deviation);
        }
    }

    TEST_CASE("flow solution solves the first-order system")
    {
        for (int n = 1; n <= 2; ++n) {
            ModularSystem sys;
            sys.n = n;
            sys.alpha = Rational(3, 4);
            const VectorSeq phi = flow_solution(n, sys.alpha);
            CHECK(system_residual(sys, phi, few_samples(n), {1e-3, true, 40}) < 1e-7);
        }
    }

    TEST_CASE("solution invariance on the shipped first-order system")
    {
        const ModularSystem sys = ModularSystem::from_json(load("systems/first_order.json"));
        const VectorSeq phi = system_solution(sys);
        const auto samples = modular_samples_from_json(load("samples/grid9.json"), 1);
        for (const auto& el : {GroupElement::S(), GroupElement::T()}) {
            const auto r = solution_invariance_check(sys, phi, el, samples);
            CHECK_MESSAGE(r.pass, r.id, " residual ", r.max_deviation);
            CHECK(r.details.at("rejected") == false);
        }
        const auto id = solution_invariance_check(sys, phi, GroupElement::identity(), samples);
        CHECK(id.details.at("residual") == id.details.at("residual_transformed"));
    }

    TEST_CASE("second-order system with a weight-4 coefficient")
    {
        const ModularSystem sys = ModularSystem::from_json(load("systems/second_order_g4.json"));
        const auto samples = few_samples(1);
        const auto pre = system_precheck(sys, samples);
        CHECK(pre.pass);
        for (const auto& row : pre.details.at("weight_ledger")) {
            CHECK(std::stoi(row.at("total").get<std::string>()) == row.at("expected").get<int>());
        }
        const auto r = solution_invariance_check(sys, system_solution(sys), GroupElement::S(), samples);
        CHECK_MESSAGE(r.pass, "residual ", r.max_deviation);
    }

    TEST_CASE("a coefficient with the wrong weight tag is rejected before any residual")
    {
        const ModularSystem sys = ModularSystem::from_json(load("systems/bad_weight.json"));
        const auto r =
            solution_invariance_check(sys, system_solution(sys), GroupElement::S(), default_modular_samples(1));
        CHECK_FALSE(r.pass);
        CHECK(r.details.at("rejected") == true);
        CHECK_FALSE(r.details.contains("residual"));
    }

    TEST_CASE("a weight tag that hides a non-modular coefficient is rejected")
    {
        ModularSystem sys;
        sys.order = 1;
        sys.alpha = 1;
        sys.coeffs.push_back({1, 1, FExpr::tau(), Rational(2)});
        const auto pre = system_precheck(sys, default_modular_samples(1));
        CHECK_FALSE(pre.pass);
        CHECK(pre.max_deviation > 1e-3);
    }

    TEST_CASE("system json round trip")
    {
        const ModularSystem sys = ModularSystem::from_json(load("systems/second_order_g4.json"));
        const ModularSystem again = ModularSystem::from_json(sys.to_json());
        CHECK(again.n == sys.n);
        CHECK(again.order == sys.order);
        CHECK(again.alpha == sys.alpha);
        REQUIRE(again.coeffs.size() == 1);
        CHECK(again.coeffs[0].weight == 4);
        CHECK(again.to_json() == sys.to_json());
        CHECK_THROWS(system_solution(ModularSystem::from_json({{"n", 1}, {"order", 2}, {"alpha", "0"}})));
    }
}
