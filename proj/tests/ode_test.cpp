#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "liesym/error.hpp"
#include "liesym/ode.hpp"
#include "liesym/suite.hpp"
#include "support.hpp"

using namespace liesym;
using testing::ex;

namespace {

namespace fs = std::filesystem;

struct Profile {
    const Symbol* z = declare("z", SymbolKind::Reduced);
    const Symbol* F = declare_dependent("F", {z});
};

const Profile& prof() {
    static const Profile p;
    return p;
}

Expr px(const std::string& text) {
    prof();
    return ex(text);
}

std::string temp_path(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "liesym_ode_test";
    fs::create_directories(dir);
    return (dir / name).string();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Scaling-profile right-hand side written out by hand.
void profile_rhs(double n, bool regrouped, double z, const double* y, double* dy) {
    double H = y[0], Hp = y[1];
    double g = regrouped ? (std::pow(H, n) - z / 2) * H : std::pow(H, n) - z / 2 * H;
    dy[0] = Hp;
    dy[1] = H / (2 * n) - g * Hp;
}

// Reference values from an independent DOP853 run at rtol = atol = 1e-13.
struct Reference {
    double n;
    bool regrouped;
    double at1[2];
    double at10[2];
};
constexpr Reference kReference[] = {
    {2, false, {0.7260153303072753, -0.12931863044813274}, {5.498589497112463, 0.4982570586763034}},
    {3, false, {0.6803586355220427, -0.22097992647658252}, {-0.5271915244735423, -0.037095175865658934}},
    {5, false, {0.6290098027415768, -0.3280941641957991}, {-0.8498166671661033, -0.022968517136969634}},
    {2, true, {0.7143649856045428, -0.15391917826032492}, {2.711148128694071, 0.10694490573037618}},
    {3, true, {0.6684154884469415, -0.2473993042219143}, {-0.6684086784030898, -0.032482226993162756}},
    {5, true, {0.6190126002574113, -0.348886539429448}, {-0.8440744666791279, -0.018860420344557906}},
};

IntegratorConfig adaptive(double start, double end) {
    IntegratorConfig c;
    c.start = start;
    c.end = end;
    return c;
}

}  // namespace

TEST_CASE("compile_rhs isolates the highest derivative") {
    OdeSystem flat = compile_rhs(px("D(F;z,z)"), prof().F, {});
    CHECK(flat.dimension == 2);
    double y[2] = {3.0, 2.0}, dy[2];
    flat.rhs(0.5, y, dy);
    CHECK(dy[0] == 2.0);
    CHECK(dy[1] == 0.0);

    Expr eq = px("D(F;z,z) - 1/(2*n)*F + (F^n - z/2*F)*D(F;z) + b");
    OdeSystem sys = compile_rhs(eq, prof().F, {{"n", 2}, {"b", 0.25}});
    double s[2] = {1.3, -0.4}, got[2], want[2];
    sys.rhs(0.7, s, got);
    profile_rhs(2, false, 0.7, s, want);
    CHECK(got[0] == doctest::Approx(want[0]));
    CHECK(got[1] == doctest::Approx(want[1] - 0.25).epsilon(1e-14));

    // Riccati form: one-dimensional system
    OdeSystem ric = compile_rhs(px("D(F;z) + 1/2*F^2 + a*z + b"), prof().F, {{"a", 1}, {"b", 0}});
    CHECK(ric.dimension == 1);

    CHECK_THROWS_AS(compile_rhs(eq, prof().F, {{"n", 2}}), Error);
    CHECK_THROWS_AS(compile_rhs(px("D(F;z,z)^2 + F"), prof().F, {}), Error);
    try {
        compile_rhs(eq, prof().F, {{"n", 2}});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnboundParameter);
    }
}

TEST_CASE("integrators on closed-form problems") {
    OdeSystem flat = compile_rhs(px("D(F;z,z)"), prof().F, {});
    Trajectory line = integrate(flat, {1.0, 2.0}, adaptive(0, 3));
    for (std::size_t i = 0; i < line.size(); ++i) CHECK(line.y[i][0] == doctest::Approx(1 + 2 * line.x[i]).epsilon(1e-12));

    RhsFunction growth = [](double, const double* y, double* dy) { dy[0] = y[0]; };
    Trajectory e1 = integrate(growth, 1, {1.0}, adaptive(0, 1));
    CHECK(std::abs(e1.y.back()[0] - std::exp(1.0)) < 1e-9);
    CHECK(e1.x.back() == 1.0);

    IntegratorConfig fixed = adaptive(0, 1);
    fixed.method = Method::FixedRK4;
    fixed.fixed_step = 1e-3;
    CHECK(std::abs(integrate(growth, 1, {1.0}, fixed).y.back()[0] - std::exp(1.0)) < 1e-12);

    double ratio = rk4_convergence_ratio(0.1);
    CHECK(ratio >= 12);
    CHECK(ratio <= 20);
    CHECK(parse_method("fixed-rk4") == Method::FixedRK4);
    CHECK(method_name(Method::AdaptiveRK45) == "adaptive-rk45");
    CHECK_THROWS_AS(parse_method("euler"), Error);
    CHECK_THROWS_AS(integrate(growth, 1, {1.0}, adaptive(1, 1)), Error);
}

TEST_CASE("dense output hits requested grid points") {
    RhsFunction growth = [](double, const double* y, double* dy) { dy[0] = y[0]; };
    IntegratorConfig c = adaptive(0, 2);
    c.grid = {0.25, 1.0, 1.5};
    Trajectory tr = integrate(growth, 1, {1.0}, c);
    REQUIRE(tr.dense.size() == 3);
    for (const auto& [x, y] : tr.dense) CHECK(y[0] == doctest::Approx(std::exp(x)).epsilon(1e-8));
}

TEST_CASE("scaling profiles against reference values") {
    for (const auto& ref : kReference) {
        Expr eq = ref.regrouped ? px("D(F;z,z) - 1/(2*n)*F + (F^n - z/2)*F*D(F;z)")
                                : px("D(F;z,z) - 1/(2*n)*F + (F^n - z/2*F)*D(F;z)");
        OdeSystem sys = compile_rhs(eq, prof().F, {{"n", ref.n}});
        IntegratorConfig c = adaptive(0, 10);
        c.grid = {1.0};
        Trajectory a = integrate(sys, {1.0, -0.5}, c);
        REQUIRE(a.dense.size() == 1);
        CHECK(std::abs(a.dense[0].second[0] - ref.at1[0]) < 1e-8);
        CHECK(std::abs(a.dense[0].second[1] - ref.at1[1]) < 1e-8);
        CHECK(std::abs(a.y.back()[0] - ref.at10[0]) < 1e-7);
        CHECK(std::abs(a.y.back()[1] - ref.at10[1]) < 1e-7);

        IntegratorConfig f = c;
        f.method = Method::FixedRK4;
        Trajectory b = integrate(sys, {1.0, -0.5}, f);
        CHECK(std::abs(b.y.back()[0] - a.y.back()[0]) < 1e-6);
        CHECK(std::abs(b.y.back()[1] - a.y.back()[1]) < 1e-6);
    }
}

TEST_CASE("time reversal of the scaling profile") {
    for (double n : {2.0, 3.0, 5.0}) {
        RhsFunction f = [n](double z, const double* y, double* dy) { profile_rhs(n, false, z, y, dy); };
        Trajectory fwd = integrate(f, 2, {1.0, -0.5}, adaptive(0, 5));
        Trajectory back = integrate(f, 2, fwd.y.back(), adaptive(5, 0));
        CHECK(back.x.back() == 0.0);
        CHECK(std::abs(back.y.back()[0] - 1.0) < 1e-7);
        CHECK(std::abs(back.y.back()[1] + 0.5) < 1e-7);
    }
}

TEST_CASE("property: trajectories are monotone and start at the initial condition") {
    testing::ExprGen gen(41);
    for (int i = 0; i < testing::kInstances; ++i) {
        double c = gen.uniform(-30, 30) / 10.0, d = gen.uniform(-10, 10) / 10.0, y0 = gen.uniform(-20, 20) / 10.0;
        bool blowup = i % 5 == 0;
        RhsFunction f = [=](double x, const double* y, double* dy) {
            dy[0] = blowup ? y[0] * y[0] : c * y[0] + d * x;
        };
        double start = gen.uniform(-5, 5) / 2.0;
        double end = start + (gen.uniform(0, 1) ? 1.0 : -1.0) * gen.uniform(1, 6) / 2.0;
        IntegratorConfig cfg = adaptive(start, end);
        if (i % 3 == 0) {
            cfg.method = Method::FixedRK4;
            cfg.fixed_step = 1e-2;
        }
        Trajectory tr = integrate(f, 1, {blowup ? 1.0 : y0}, cfg);
        REQUIRE(tr.size() >= 1);
        CHECK(tr.x.front() == start);
        CHECK(tr.y.front()[0] == (blowup ? 1.0 : y0));
        double dir = end > start ? 1.0 : -1.0;
        for (std::size_t k = 1; k < tr.size(); ++k) CHECK(dir * (tr.x[k] - tr.x[k - 1]) > 0);
        if (!tr.step_underflow && std::isfinite(tr.y.back()[0])) CHECK(tr.x.back() == end);
    }
}

TEST_CASE("blow-up is reported as step underflow with a partial trajectory") {
    RhsFunction f = [](double, const double* y, double* dy) { dy[0] = y[0] * y[0]; };
    Trajectory tr = integrate(f, 1, {1.0}, adaptive(0, 2));
    CHECK(tr.step_underflow);
    CHECK(tr.x.back() < 1.0);
    CHECK(tr.x.back() > 0.99);
}

TEST_CASE("CSV files") {
    Trajectory two;
    two.names = {"zeta", "H", "Hp"};
    two.x = {0.0, 0.1};
    two.y = {{1.0, -0.5}, {0.1 + 0.2, 1.0 / 3.0}};
    std::string p = temp_path("two.csv");
    write_csv(two, p);
    std::string text = slurp(p);
    CHECK(std::count(text.begin(), text.end(), '\n') == 3);
    CHECK(text.rfind("zeta,H,Hp\n", 0) == 0);
    CHECK(text.find("0.30000000000000004") != std::string::npos);
    Trajectory back = read_csv(p);
    CHECK(back.names == two.names);
    CHECK(back.x == two.x);
    CHECK(back.y == two.y);

    Trajectory empty;
    empty.names = {"zeta", "H", "Hp"};
    std::string q = temp_path("empty.csv");
    write_csv(empty, q);
    CHECK(slurp(q) == "zeta,H,Hp\n");
    CHECK(read_csv(q).size() == 0);
}

TEST_CASE("profile CSV survives a read-back before plotting") {
    const Model& m = builtin_model();
    ProfileSet set = run_profiles(m);
    REQUIRE(set.runs.size() == 3);
    std::string p = temp_path("profile.csv");
    write_csv(set.runs[0].adaptive, p);
    Trajectory back = read_csv(p);
    CHECK(back.x == set.runs[0].adaptive.x);
    CHECK(back.y == set.runs[0].adaptive.y);
    std::string a = temp_path("direct.svg"), b = temp_path("readback.svg");
    write_svg({set.runs[0].adaptive}, {{"red", "n = 2"}}, a);
    write_svg({back}, {{"red", "n = 2"}}, b);
    CHECK(slurp(a) == slurp(b));
}

TEST_CASE("SVG charts") {
    Trajectory flat;
    flat.names = {"zeta", "H"};
    flat.x = {0, 1, 2};
    flat.y = {{1}, {1}, {1}};
    Trajectory rising = flat;
    rising.y = {{0}, {2}, {4}};
    std::string p = temp_path("chart.svg");
    write_svg({flat, rising, flat}, {{"red", "a"}, {"blue", "b"}, {"gold", "c"}}, p, "caption text");
    std::string svg = slurp(p);
    CHECK(svg.find("viewBox=\"0 0 800 600\"") != std::string::npos);
    CHECK(svg.find("stroke=\"red\"") != std::string::npos);
    CHECK(svg.find("stroke=\"blue\"") != std::string::npos);
    CHECK(svg.find("stroke=\"gold\"") != std::string::npos);
    CHECK(svg.find(">4</text>") != std::string::npos);
    CHECK(svg.find("caption text") != std::string::npos);

    std::string q = temp_path("flat.svg");
    write_svg({flat}, {{"black", ""}}, q);
    CHECK(slurp(q).find("<polyline") != std::string::npos);

    std::string r = temp_path("axes.svg");
    write_svg({}, {}, r);
    std::string axes = slurp(r);
    CHECK(axes.find("<polyline") == std::string::npos);
    CHECK(axes.find("<line") != std::string::npos);
}
