#include "liesym/ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "liesym/error.hpp"
#include "liesym/jet.hpp"

namespace liesym {

namespace {

double ipow(double b, std::int64_t k) {
    bool neg = k < 0;
    std::uint64_t m = static_cast<std::uint64_t>(neg ? -k : k);
    double r = 1.0;
    while (m > 0) {
        if (m & 1u) r *= b;
        b *= b;
        m >>= 1u;
    }
    return neg ? 1.0 / r : r;
}

}  // namespace

double CompiledExpr::operator()(double x, const double* state) const {
    double sum = 0.0;
    for (const Term& t : terms) {
        double p = t.coef;
        for (const Factor& f : t.factors) {
            double b = f.slot == 0 ? x : state[f.slot - 1];
            p *= f.integer ? ipow(b, f.ipower) : std::pow(b, f.power);
        }
        sum += p;
    }
    return sum;
}

void OdeSystem::rhs(double x, const double* y, double* dy) const {
    for (std::size_t i = 0; i + 1 < dimension; ++i) dy[i] = y[i + 1];
    dy[dimension - 1] = -numerator(x, y) / denominator(x, y);
}

namespace {

CompiledExpr compile(const Expr& e, const std::map<Atom, std::size_t, AtomLess>& slots,
                     const std::map<Atom, double, AtomLess>& values) {
    CompiledExpr out;
    for (const Term& t : e.terms()) {
        CompiledExpr::Term ct{t.coef.to_double(), {}};
        Monomial params;
        for (const auto& [a, k] : t.mono) {
            if (auto it = slots.find(a); it != slots.end()) {
                if (k.is_symbolic())
                    throw Error(ErrorKind::UnboundParameter, "symbolic exponent on " + to_string(a) + " (bind n to an integer)");
                bool integer = k.constant.is_integer();
                ct.factors.push_back({it->second, integer, k.constant.num, k.constant.to_double()});
            } else {
                for (Atom inner : atoms_of(Expr::monomial({{a, Exponent(1)}})))
                    if (slots.count(inner))
                        throw Error(ErrorKind::Domain, "elementary function of the state is not supported: " + to_string(a));
                params.emplace_back(a, k);
            }
        }
        if (!params.empty()) ct.coef *= evaluate(Expr::monomial(params), values);
        out.terms.push_back(std::move(ct));
    }
    return out;
}

}  // namespace

OdeSystem compile_rhs(const Expr& eq_in, const Symbol* dependent, const std::map<std::string, double>& parameters) {
    if (dependent->args.size() != 1) throw Error(ErrorKind::Domain, "ODE dependent must have exactly one argument");
    const Symbol* var = dependent->args[0];
    Expr eq = eq_in;
    const Symbol* n = exponent_parameter();
    if (auto it = parameters.find(n->name); it != parameters.end()) {
        double v = it->second;
        if (std::abs(v - std::round(v)) < 1e-12 && std::round(v) != 0.0)
            eq = substitute(eq, symbol_atom(n), Expr(Rational(static_cast<long>(std::round(v)))));
    }
    int order = jet_order(eq, dependent);
    if (order < 1) throw Error(ErrorKind::NonlinearHighest, "equation has no derivative of " + dependent->name);
    Atom top = jet_atom(dependent, {order});
    for (const Term& t : eq.terms())
        for (const auto& [a, k] : t.mono)
            if (a == top && !k.is_one())
                throw Error(ErrorKind::NonlinearHighest, to_string(top) + " appears with power " + to_string(k.to_expr()));
    Expr c = coefficient(eq, top, Exponent(1));
    Expr rest = coefficient(eq, top, Exponent(0));
    if (c.is_zero()) throw Error(ErrorKind::NonlinearHighest, "highest derivative missing");

    OdeSystem sys;
    sys.variable = var->name;
    sys.dimension = static_cast<std::size_t>(order);
    sys.parameters = parameters;
    std::map<Atom, std::size_t, AtomLess> slots;
    slots.emplace(symbol_atom(var), 0);
    for (int j = 0; j < order; ++j) {
        slots.emplace(jet_atom(dependent, {j}), static_cast<std::size_t>(j + 1));
        sys.state_names.push_back(j == 0 ? dependent->name : dependent->name + std::string(static_cast<std::size_t>(j), 'p'));
    }
    std::map<Atom, double, AtomLess> values;
    for (const auto& [name, v] : parameters)
        if (const Symbol* s = find_symbol(name)) values.emplace(symbol_atom(s), v);
    for (const Expr* part : {&c, &rest})
        for (Atom a : atoms_of(*part)) {
            if (slots.count(a) || a->kind == AtomKind::Number || a->kind == AtomKind::Exp || a->kind == AtomKind::Tanh) continue;
            if (!values.count(a)) throw Error(ErrorKind::UnboundParameter, "no value for " + to_string(a));
        }
    sys.numerator = compile(rest, slots, values);
    sys.denominator = compile(c, slots, values);
    if (c.is_monomial()) sys.solved = -rest / c;
    return sys;
}

std::string method_name(Method m) { return m == Method::AdaptiveRK45 ? "adaptive-rk45" : "fixed-rk4"; }

Method parse_method(const std::string& s) {
    if (s == "adaptive-rk45") return Method::AdaptiveRK45;
    if (s == "fixed-rk4") return Method::FixedRK4;
    throw Error(ErrorKind::Syntax, "unknown method '" + s + "' (expected adaptive-rk45 or fixed-rk4)");
}

// ---------------------------------------------------------------------------
// Integrators

namespace {

// Dormand-Prince 5(4) tableau with Hairer's dense-output coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

using Vec = std::vector<double>;

void push_sample(Trajectory& tr, double x, const Vec& y) {
    tr.x.push_back(x);
    tr.y.push_back(y);
}

void integrate_dp45(const RhsFunction& f, std::size_t dim, const Vec& ic, const IntegratorConfig& cfg, Trajectory& tr) {
    const double span = cfg.end - cfg.start;
    const double dir = span >= 0 ? 1.0 : -1.0;
    const double min_step = 1e-14 * std::abs(span);
    double x = cfg.start;
    Vec y = ic, k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim), k7(dim), tmp(dim), y1(dim);
    double h = std::min(std::abs(cfg.initial_step), std::abs(span)) * dir;
    std::vector<double> grid = cfg.grid;
    std::sort(grid.begin(), grid.end(), [dir](double a, double b) { return dir * a < dir * b; });
    std::size_t gi = 0;
    while (gi < grid.size() && dir * (grid[gi] - x) < 0) ++gi;
    f(x, y.data(), k1.data());
    while (dir * (cfg.end - x) > 0) {
        if (std::abs(h) > cfg.max_step) h = cfg.max_step * dir;
        if (dir * (x + h - cfg.end) > 0) h = cfg.end - x;
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * a21 * k1[i];
        f(x + c2 * h, tmp.data(), k2.data());
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f(x + c3 * h, tmp.data(), k3.data());
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f(x + c4 * h, tmp.data(), k4.data());
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f(x + c5 * h, tmp.data(), k5.data());
        for (std::size_t i = 0; i < dim; ++i)
            tmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
        f(x + h, tmp.data(), k6.data());
        for (std::size_t i = 0; i < dim; ++i)
            y1[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        f(x + h, y1.data(), k7.data());

        double err = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(y1[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(err / static_cast<double>(dim));
        if (!std::isfinite(err)) err = 1e10;

        if (err <= 1.0) {
            ++tr.accepted;
            while (gi < grid.size() && dir * (grid[gi] - (x + h)) <= 0) {
                double th = (grid[gi] - x) / h, th1 = 1.0 - th;
                Vec yd(dim);
                for (std::size_t i = 0; i < dim; ++i) {
                    double r1 = y[i], r2 = y1[i] - y[i], r3 = h * k1[i] - r2, r4 = r2 - h * k7[i] - r3;
                    double r5 = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
                    yd[i] = r1 + th * (r2 + th1 * (r3 + th * (r4 + th1 * r5)));
                }
                tr.dense.emplace_back(grid[gi], std::move(yd));
                ++gi;
            }
            x = (dir * (cfg.end - (x + h)) <= std::abs(h) * 1e-15) ? cfg.end : x + h;
            y = y1;
            k1 = k7;
            push_sample(tr, x, y);
        } else {
            ++tr.rejected;
        }
        double fac = err == 0.0 ? 5.0 : 0.9 * std::pow(err, -0.2);
        fac = std::clamp(fac, 0.2, 5.0);
        if (err > 1.0) fac = std::min(fac, 1.0);
        h *= fac;
        if (std::abs(h) < min_step && dir * (cfg.end - x) > 0) {
            tr.step_underflow = true;
            return;
        }
    }
}

void integrate_rk4(const RhsFunction& f, std::size_t dim, const Vec& ic, const IntegratorConfig& cfg, Trajectory& tr) {
    const double span = cfg.end - cfg.start;
    double steps_exact = std::abs(span) / cfg.fixed_step;
    auto steps = static_cast<std::size_t>(std::llround(steps_exact));
    if (std::abs(steps_exact - static_cast<double>(steps)) > 1e-9 * steps_exact) steps = static_cast<std::size_t>(std::ceil(steps_exact));
    if (steps == 0) steps = 1;
    const double h = span / static_cast<double>(steps);
    Vec y = ic, k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
    for (std::size_t s = 0; s < steps; ++s) {
        double x = cfg.start + static_cast<double>(s) * h;
        f(x, y.data(), k1.data());
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
        f(x + 0.5 * h, tmp.data(), k2.data());
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
        f(x + 0.5 * h, tmp.data(), k3.data());
        for (std::size_t i = 0; i < dim; ++i) tmp[i] = y[i] + h * k3[i];
        f(x + h, tmp.data(), k4.data());
        for (std::size_t i = 0; i < dim; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        ++tr.accepted;
        push_sample(tr, s + 1 == steps ? cfg.end : cfg.start + static_cast<double>(s + 1) * h, y);
        bool finite = std::all_of(y.begin(), y.end(), [](double v) { return std::isfinite(v); });
        if (!finite) {
            tr.step_underflow = true;
            return;
        }
    }
}

}  // namespace

Trajectory integrate(const RhsFunction& f, std::size_t dim, const std::vector<double>& ic, const IntegratorConfig& cfg) {
    if (ic.size() != dim) throw Error(ErrorKind::Domain, "initial condition has " + std::to_string(ic.size()) + " entries, expected " + std::to_string(dim));
    if (cfg.start == cfg.end) throw Error(ErrorKind::Domain, "degenerate integration span");
    if (cfg.abs_tol <= 0 || cfg.rel_tol <= 0) throw Error(ErrorKind::Domain, "tolerances must be positive");
    Trajectory tr;
    tr.config = cfg;
    push_sample(tr, cfg.start, ic);
    if (cfg.method == Method::AdaptiveRK45)
        integrate_dp45(f, dim, ic, cfg, tr);
    else
        integrate_rk4(f, dim, ic, cfg, tr);
    return tr;
}

Trajectory integrate(const OdeSystem& sys, const std::vector<double>& ic, const IntegratorConfig& cfg) {
    Trajectory tr = integrate([&sys](double x, const double* y, double* dy) { sys.rhs(x, y, dy); }, sys.dimension, ic, cfg);
    tr.names.push_back(sys.variable);
    for (const auto& s : sys.state_names) tr.names.push_back(s);
    tr.parameters = sys.parameters;
    return tr;
}

// ---------------------------------------------------------------------------
// CSV / SVG

namespace {

std::string num17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Domain, "cannot write " + path);
    return out;
}

}  // namespace

void write_csv(const Trajectory& traj, const std::string& path) {
    std::ofstream out = open_out(path);
    std::vector<std::string> names = traj.names;
    if (names.empty()) {
        names.push_back("x");
        std::size_t dim = traj.y.empty() ? 0 : traj.y.front().size();
        for (std::size_t i = 0; i < dim; ++i) names.push_back("y" + std::to_string(i));
    }
    for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
    out << "\n";
    for (std::size_t s = 0; s < traj.x.size(); ++s) {
        out << num17(traj.x[s]);
        for (double v : traj.y[s]) out << "," << num17(v);
        out << "\n";
    }
}

Trajectory read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::Domain, "cannot read " + path);
    Trajectory tr;
    std::string line;
    if (!std::getline(in, line)) return tr;
    std::stringstream hs(line);
    for (std::string cell; std::getline(hs, cell, ',');) tr.names.push_back(cell);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::vector<double> row;
        for (std::string cell; std::getline(ls, cell, ',');) row.push_back(std::stod(cell));
        if (row.size() != tr.names.size()) throw Error(ErrorKind::Syntax, "ragged CSV row in " + path);
        tr.x.push_back(row[0]);
        tr.y.emplace_back(row.begin() + 1, row.end());
    }
    return tr;
}

void write_svg(const std::vector<Trajectory>& trajs, const std::vector<CurveStyle>& styles, const std::string& path,
               const std::string& caption) {
    constexpr double W = 800, H = 600, left = 80, right = 40, top = 40, bottom = 70;
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto& t : trajs)
        for (std::size_t i = 0; i < t.x.size(); ++i) {
            double xv = t.x[i], yv = t.y[i].empty() ? 0.0 : t.y[i][0];
            if (!std::isfinite(yv)) continue;
            if (first) {
                xmin = xmax = xv;
                ymin = ymax = yv;
                first = false;
            }
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, yv);
            ymax = std::max(ymax, yv);
        }
    if (xmax == xmin) xmax = xmin + 1;
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    auto px = [&](double v) { return left + (v - xmin) / (xmax - xmin) * (W - left - right); };
    auto py = [&](double v) { return H - bottom - (v - ymin) / (ymax - ymin) * (H - top - bottom); };
    auto fmt = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return std::string(buf);
    };

    std::ofstream out = open_out(path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" viewBox=\"0 0 800 600\">\n";
    out << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n";
    out << "<g stroke=\"black\" stroke-width=\"1\">\n";
    out << "<line x1=\"" << left << "\" y1=\"" << H - bottom << "\" x2=\"" << W - right << "\" y2=\"" << H - bottom << "\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << H - bottom << "\"/>\n";
    out << "</g>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<text x=\"" << left << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">" << fmt(xmin) << "</text>\n";
    out << "<text x=\"" << W - right << "\" y=\"" << H - bottom + 18 << "\" text-anchor=\"middle\">" << fmt(xmax) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << H - bottom << "\" text-anchor=\"end\">" << fmt(ymin) << "</text>\n";
    out << "<text x=\"" << left - 6 << "\" y=\"" << top + 4 << "\" text-anchor=\"end\">" << fmt(ymax) << "</text>\n";
    if (!trajs.empty() && trajs.front().names.size() >= 2) {
        out << "<text x=\"" << (left + W - right) / 2 << "\" y=\"" << H - bottom + 36 << "\" text-anchor=\"middle\">"
            << trajs.front().names[0] << "</text>\n";
        out << "<text x=\"20\" y=\"" << (top + H - bottom) / 2 << "\" text-anchor=\"middle\">" << trajs.front().names[1]
            << "</text>\n";
    }
    if (!caption.empty())
        out << "<text x=\"" << W / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << caption << "</text>\n";
    out << "</g>\n";
    for (std::size_t k = 0; k < trajs.size(); ++k) {
        const auto& t = trajs[k];
        std::string color = k < styles.size() ? styles[k].color : "black";
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < t.x.size(); ++i) {
            if (t.y[i].empty() || !std::isfinite(t.y[i][0])) continue;
            out << (i ? " " : "") << fmt(px(t.x[i])) << "," << fmt(py(t.y[i][0]));
        }
        out << "\"/>\n";
        if (k < styles.size() && !styles[k].label.empty())
            out << "<text x=\"" << W - right - 10 << "\" y=\"" << top + 16 * static_cast<double>(k + 1)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color << "\">"
                << styles[k].label << "</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace liesym
