#pragma once

#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qtrace/scalar.hpp"

namespace qtrace {

class UnsupportedGenerator : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Immutable expression over the coefficient ring
/// R = C[G~_4, G~_6, wp~_2(z_r - z_s), wp~_3(z_r - z_s)] and the extra atoms that
/// theta_j and the first-order flow solutions produce.
///
/// JSON forms:
///   "p/q" | number | {"const": "p/q" | [re, im]}
///   {"G": k}                      G~_k, k even >= 2
///   {"wp": m, "r": i, "s": j}     wp~_m(z_i - z_j); without "s": wp~_m(z_i)
///   {"zdiff": [r, s]}             z_r - z_s
///   {"tau": true}
///   {"eta": p}                    eta(tau)^p
///   {"log_eta": true}             pi i tau / 12 + sum_n log(1 - q^n)
///   {"dq": e}                     (2 pi i)^2 q d/dq e at fixed z
///   {"add": [...]}, {"mul": [...]}, {"pow": [e, n]}, {"exp": e}
/// Variable indices are 1-based.
class FExpr {
public:
    enum class Kind { constant, eisenstein, wp, zdiff, tau, eta, log_eta, dq, add, mul, pow, exp };

    FExpr();  // constant 0

    static FExpr constant(GaussRational c);
    static FExpr constant(const Rational& c) { return constant(GaussRational{c, 0}); }
    static FExpr G(int k);
    static FExpr wp(int m, int r, int s = 0);
    static FExpr zdiff(int r, int s);
    static FExpr tau();
    static FExpr eta(const Rational& power);
    static FExpr log_eta();
    static FExpr dq(FExpr e);
    /// Zero constants are dropped; an empty sum is 0 and a single term is returned as is.
    static FExpr add(std::vector<FExpr> terms);
    /// A zero constant factor makes the product 0; an empty product is 1.
    static FExpr mul(std::vector<FExpr> factors);
    static FExpr pow(FExpr base, int exponent);
    static FExpr exp(FExpr e);

    static FExpr from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;

    Kind kind() const;
    /// k for G, m for wp, exponent for pow.
    int index() const;
    int r() const;
    int s() const;
    const GaussRational& value() const;
    const Rational& eta_power() const;
    const std::vector<FExpr>& args() const;

    bool is_zero() const;

    /// Modular weight: G_k -> k, wp_m -> m, z_r - z_s -> -1, eta^p -> p/2,
    /// dq raises by 2. nullopt for tau, log_eta, inhomogeneous sums and
    /// exponentials of non-weight-0 arguments.
    std::optional<Rational> weight() const;

    /// Largest variable index referenced (0 when z-independent).
    int max_variable() const;

    Complex eval(std::span<const Complex> z, Complex tau, int q_order = 40) const;

    std::string to_string() const;

private:
    struct Node;
    explicit FExpr(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

/// The derivation theta_j on R for n variables. G~_k goes to
/// dq(G~_k) + k G~_2 G~_k; wp~_m(z_r - z_s) goes to
///   dq(wp_m) + m G_2 wp_m - m G_2 (z_r - z_s) wp_{m+1} + m wp_{m+1} (A_r - A_s)
/// with A_i = wp~_1(z_i - z_j) for i != j and A_j = 0.
/// Throws UnsupportedGenerator on atoms outside R.
FExpr theta(const FExpr& f, int j, int n);

}  // namespace qtrace
