#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtrace/modular_group.hpp"
#include "qtrace/report.hpp"
#include "qtrace/rexpr.hpp"
#include "qtrace/series.hpp"

namespace qtrace {

using MultiIndex = std::vector<int>;
/// Closed-form component phi(z_1..z_n; tau).
using Evaluator = std::function<Complex(std::span<const Complex> z, Complex tau)>;
/// Either an evaluator or a series in q (and z for n = 1).
using Component = std::variant<Evaluator, MultiSeries>;

struct NumericOptions {
    /// Central-difference step for d/dtau and d/dz_i.
    double step = 1e-5;
    /// Combine steps h and h/2 to cancel the O(h^2) error.
    bool richardson = false;
    int q_order = 40;
};

/// Finitely supported family Phi = (phi_mu), mu in N^n. Absent indices are zero.
class VectorSeq {
public:
    explicit VectorSeq(int n, int support_bound = 4);

    int n() const { return n_; }
    int support_bound() const { return bound_; }

    /// Throws std::invalid_argument on a malformed index or one beyond the support bound.
    void set(const MultiIndex& mu, Component c);
    const std::map<MultiIndex, Component>& components() const { return comps_; }

    /// True when every component is a series.
    bool series_mode() const;

    /// Value of phi_mu; 0 outside the support.
    Complex eval(const MultiIndex& mu, std::span<const Complex> z, Complex tau) const;
    /// phi_mu as an evaluator (0 outside the support).
    Evaluator evaluator(const MultiIndex& mu) const;
    const MultiSeries* series(const MultiIndex& mu) const;

    /// Every index below some support element, in increasing order.
    std::vector<MultiIndex> closure() const;

    /// {"support_bound": b, "components": [{"index": [...], "expr": <R-expression>}, ...]}
    /// or just the components array.
    static VectorSeq from_json(const nlohmann::json& j, int n, int q_order = 40);

private:
    void check_index(const MultiIndex& mu) const;

    int n_;
    int bound_;
    std::map<MultiIndex, Component> comps_;
};

/// Component-wise d_j (1-based j): (d_j Phi)_mu = phi_{mu + e_j}.
VectorSeq shift(const VectorSeq& phi, int j);

/// O_j(alpha) = (2 pi i)^2 q d/dq + G~_2 (alpha + sum_i z_i d/dz_i) - sum_{i != j} wp~_1(z_i - z_j) d/dz_i.
/// Series mode (n = 1, every component a series) is exact; otherwise central differences.
VectorSeq apply_O(const VectorSeq& phi, int j, const Rational& alpha, const NumericOptions& opts = {});
/// D_j(alpha) = O_j(alpha) + G~_2 sum_i d_i.
VectorSeq apply_D(const VectorSeq& phi, int j, const Rational& alpha, const NumericOptions& opts = {});
/// D_j(alpha + 2(k-1)) o ... o D_j(alpha + 2) o D_j(alpha).
VectorSeq apply_D_product(const VectorSeq& phi, int j, const Rational& alpha, int k, const NumericOptions& opts = {});

/// (Phi|_{g,a}) = j^{-a} e^{-L sum_i d_i} Phi(z / j; g tau), j = gamma tau + delta, L = principal log j.
VectorSeq apply_action(const VectorSeq& phi, const GroupElement& g, const Rational& a);
/// e^{c sum_i d_i} Phi.
VectorSeq shift_exponential(const VectorSeq& phi, Complex c);

/// Composition tree over O_j(alpha) and D_j(alpha) with weight bookkeeping.
class ModularOperator {
public:
    enum class Kind { O, D, compose };

    static ModularOperator O(int j, const Rational& alpha);
    static ModularOperator D(int j, const Rational& alpha);
    /// factors[0] o factors[1] o ...; the last factor acts first.
    static ModularOperator compose(std::vector<ModularOperator> factors);
    static ModularOperator D_product(int j, const Rational& alpha, int k);

    Kind kind() const { return kind_; }
    int weight_gain() const;
    VectorSeq apply(const VectorSeq& phi, const NumericOptions& opts = {}) const;
    std::string to_string() const;

private:
    Kind kind_ = Kind::compose;
    int j_ = 1;
    Rational alpha_;
    std::vector<ModularOperator> factors_;
};

struct ModularSample {
    std::vector<Complex> z;
    Complex tau;
};

/// JSON array of {"z": [re, im] | [[re, im], ...], "tau": [re, im]}.
std::vector<ModularSample> modular_samples_from_json(const nlohmann::json& j, int n);
nlohmann::json modular_samples_to_json(const std::vector<ModularSample>& samples);
/// The elliptic nine-point grid extended to n variables.
std::vector<ModularSample> default_modular_samples(int n);

/// (Phi|g1)|g2 against Phi|_{g1 g2}, corrected by e^{-2 pi i w (a + sum d_i)}
/// where w is the branch cocycle of the principal logarithm.
CheckReport group_law_check(const VectorSeq& phi, const GroupElement& g1, const GroupElement& g2, const Rational& a,
                            const std::vector<ModularSample>& samples, double tol = 1e-6);

/// D_j(a)(Phi|_{g,a}) against (D_j(a) Phi)|_{g,a+2}.
CheckReport covariance_check(const VectorSeq& phi, const GroupElement& g, const Rational& a, int j,
                             const std::vector<ModularSample>& samples, double tol = 1e-5,
                             const NumericOptions& opts = {});

struct SystemCoefficient {
    int p = 1;
    int j = 1;
    FExpr expr;
    Rational weight;
};

/// prod_{l=1}^{m} D_j(alpha + 2(m-l)) phi + sum_p b_{p,j} prod_{l=1}^{m-p} D_j(alpha + 2(m-p-l)) phi = 0
/// for j = 1..n, with b_{p,j} = 0 when absent.
struct ModularSystem {
    int n = 1;
    int order = 1;
    Rational alpha;
    std::vector<SystemCoefficient> coeffs;
    std::optional<nlohmann::json> phi;

    /// {"n", "order", "alpha", "coeffs": [{"p", "j", "expr", "weight"}], optional "phi"}.
    static ModularSystem from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
};

/// phi_{e_1} = eta^{2 alpha}, phi_0 = 2 eta^{2 alpha} log eta: a solution of D_j(alpha) Phi = 0.
VectorSeq flow_solution(int n, const Rational& alpha, int q_order = 40);

/// The solution declared in the system, or flow_solution for a first-order
/// system without coefficients.
VectorSeq system_solution(const ModularSystem& system, int q_order = 40);

/// Largest |residual| over j = 1..n, the closure of the support and the samples.
double system_residual(const ModularSystem& system, const VectorSeq& phi, const std::vector<ModularSample>& samples,
                       const NumericOptions& opts);

/// Coefficient weight tags must equal 2p and each b must satisfy
/// b(z / j, g tau) = j^{weight} b(z, tau) at the samples for g in {S, T}.
CheckReport system_precheck(const ModularSystem& system, const std::vector<ModularSample>& samples);

/// Passes iff the precheck passes and residual(Phi|_{g,alpha}) <= max(10 residual(Phi), tol).
CheckReport solution_invariance_check(const ModularSystem& system, const VectorSeq& phi, const GroupElement& g,
                                      const std::vector<ModularSample>& samples, double tol = 1e-6,
                                      const NumericOptions& opts = {1e-3, true, 40});

}  // namespace qtrace
