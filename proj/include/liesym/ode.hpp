#pragma once

#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "liesym/expr.hpp"

namespace liesym {

/// Flat polynomial-like form of an Expr over slots (0 = independent
/// variable, 1.. = state), with parameters folded into coefficients.
class CompiledExpr {
public:
    struct Factor {
        std::size_t slot;
        bool integer;
        std::int64_t ipower;
        double power;
    };
    struct Term {
        double coef;
        std::vector<Factor> factors;
    };

    double operator()(double x, const double* state) const;

    std::vector<Term> terms;
};

/// y^(d) = f(x, y, y', ..., y^(d-1)) written as a first-order system.
struct OdeSystem {
    std::string variable;                 // independent variable name
    std::vector<std::string> state_names;  // e.g. H, Hp
    std::size_t dimension = 0;
    CompiledExpr numerator;                // highest derivative = -numerator / denominator
    CompiledExpr denominator;
    Expr solved;                           // symbolic rhs when the divisor is a monomial, else empty
    std::map<std::string, double> parameters;

    void rhs(double x, const double* y, double* dy) const;
};

/// Compiles eq = 0 for a one-argument dependent. `parameters` must bind every
/// other symbol; an integral value for n turns symbolic exponents into integers.
OdeSystem compile_rhs(const Expr& eq, const Symbol* dependent, const std::map<std::string, double>& parameters);

enum class Method { AdaptiveRK45, FixedRK4 };
std::string method_name(Method m);
Method parse_method(const std::string& s);

struct IntegratorConfig {
    Method method = Method::AdaptiveRK45;
    double abs_tol = 1e-9;
    double rel_tol = 1e-9;
    double initial_step = 1e-3;
    double max_step = std::numeric_limits<double>::infinity();
    double fixed_step = 1e-4;
    double start = 0.0;
    double end = 10.0;
    std::vector<double> grid;  // dense-output points inside the span
};

struct Trajectory {
    std::vector<std::string> names;  // independent variable then state
    std::vector<double> x;
    std::vector<std::vector<double>> y;
    std::vector<std::pair<double, std::vector<double>>> dense;
    IntegratorConfig config;
    std::map<std::string, double> parameters;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
    bool step_underflow = false;

    std::size_t size() const { return x.size(); }
};

using RhsFunction = std::function<void(double, const double*, double*)>;

Trajectory integrate(const RhsFunction& f, std::size_t dim, const std::vector<double>& ic, const IntegratorConfig& cfg);
Trajectory integrate(const OdeSystem& sys, const std::vector<double>& ic, const IntegratorConfig& cfg);

void write_csv(const Trajectory& traj, const std::string& path);
Trajectory read_csv(const std::string& path);

struct CurveStyle {
    std::string color;
    std::string label;
};

/// 800x600 SVG; one polyline per trajectory (first state component against x).
void write_svg(const std::vector<Trajectory>& trajs, const std::vector<CurveStyle>& styles, const std::string& path,
               const std::string& caption = {});

}  // namespace liesym
