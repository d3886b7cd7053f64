#include <fstream>
#include <regex>
#include <set>

#include "doctest.h"
#include "liesym/cases.hpp"
#include "liesym/error.hpp"
#include "liesym/reduction.hpp"
#include "liesym/suite.hpp"
#include "support.hpp"

using namespace liesym;

namespace {

using J = nlohmann::ordered_json;

const Report& suite() {
    static const Report r = run_paper_suite();
    return r;
}

const CaseResult& find_case(const std::string& label) {
    for (const auto& c : suite().cases)
        if (c.label == label) return c;
    FAIL("no case " << label);
    throw std::logic_error(label);
}

Expr parse(const std::string& text) {
    builtin_model();
    return build_expr(*parse_expression(text));
}

/// Reduced equations worked out by hand, one per built-in reduction.
struct HandReduction {
    std::string pde, ansatz, reduced;
};

const std::vector<HandReduction> kHand{
    {"cc", "diagonal-wave", "D(U;w,w,w) + D(U;t,w) + D(U;w)^2 + (U - 1 - alpha)*D(U;w,w)"},
    {"gcc", "gcc-diagonal-wave", "beta*D(U;w,w,w) + D(U;t,w) - n*U^(n - 1)*D(U;w)^2 + (1 + alpha - U^n)*D(U;w,w)"},
    {"wave-printed", "wave-stationary", "D(Yw;w)^2 + Yw*D(Yw;w,w) + D(Yw;w,w,w)"},
    {"wave-printed", "wave-similarity", "D(Yb;sigma)^2 - D(Yb;sigma) + (Yb - sigma/2)*D(Yb;sigma,sigma) + D(Yb;sigma,sigma,sigma)"},
    {"wave-printed", "wave-projective-reduction", "D(Yl;lam)^2 + Yl*D(Yl;lam,lam) + D(Yl;lam,lam,lam)"},
    {"gcc-wave-unit", "gcc-travel", "D(Y;sigma,sigma,sigma) - n*Y^(n - 1)*D(Y;sigma)^2 + (alpha - Y^n)*D(Y;sigma,sigma)"},
    {"gcc-wave-unit", "gcc-scaling-reduction",
     "D(H;zeta,zeta,zeta) - (H^n + zeta/2)*D(H;zeta,zeta) - n*H^(n - 1)*D(H;zeta)^2 - (1/2 + 1/(2*n))*D(H;zeta)"},
};

/// Names of every built-in block that a suite case must touch.
std::vector<std::string> builtin_names() {
    const Model& m = builtin_model();
    std::vector<std::string> out;
    for (const auto& [k, v] : m.equations) out.push_back(k);
    for (const auto& [k, v] : m.fields) out.push_back(k);
    for (const auto& [k, v] : m.ansatze) out.push_back(k);
    for (const auto& [k, v] : m.solutions) out.push_back(k);
    for (const auto& [k, v] : m.runs) out.push_back(k);
    return out;
}

/// Structural check of a report against the shipped schema: required keys, no
/// extra keys, enums and consts. Returns the first violation or "".
std::string schema_violation(const J& value, const J& schema, const std::string& path) {
    if (schema.contains("const") && value != schema["const"]) return path + ": const";
    if (schema.contains("enum")) {
        bool hit = false;
        for (const auto& e : schema["enum"]) hit = hit || e == value;
        if (!hit) return path + ": not in enum";
    }
    std::string type = schema.value("type", "");
    if (type == "object") {
        if (!value.is_object()) return path + ": not an object";
        for (const auto& k : schema.value("required", J::array()))
            if (!value.contains(k.get<std::string>())) return path + ": missing " + k.get<std::string>();
        const J& props = schema.value("properties", J::object());
        for (const auto& [k, v] : value.items()) {
            if (props.contains(k)) {
                std::string inner = schema_violation(v, props[k], path + "." + k);
                if (!inner.empty()) return inner;
            } else if (schema.value("additionalProperties", true) == false) {
                return path + ": unexpected key " + k;
            }
        }
    } else if (type == "array") {
        if (!value.is_array()) return path + ": not an array";
        for (std::size_t i = 0; i < value.size(); ++i) {
            std::string inner = schema_violation(value[i], schema["items"], path + "[" + std::to_string(i) + "]");
            if (!inner.empty()) return inner;
        }
    } else if (type == "string" && !value.is_string()) {
        return path + ": not a string";
    } else if (type == "integer" && !value.is_number_integer()) {
        return path + ": not an integer";
    }
    return {};
}

}  // namespace

TEST_CASE("built-in reductions agree with hand-derived equations") {
    const Model& m = builtin_model();
    for (const auto& h : kHand) {
        CAPTURE(h.ansatz);
        Expr got = pullback(m.pde(h.pde), m.ansatz(h.ansatz)).lhs;
        Comparison c = compare_reduced(got, parse(h.reduced));
        CHECK((c.verdict == Verdict::Exact || c.verdict == Verdict::ConstantMultiple));
    }
}

TEST_CASE("printed reduced forms leave the pinned residuals") {
    // derived minus the printed form, after scaling the printed form onto the derived one
    CHECK(find_case("reduce:wave-printed/wave-stationary").residual == "2*Yw*D(Yw;w,w)");
    CHECK(find_case("reduce:gcc-wave-unit/gcc-travel").residual == "-2*D(Y;sigma,sigma) + 2*D(Y;sigma,sigma,sigma)");
    CHECK(find_case("reduce:gcc/gcc-diagonal-wave").residual == "2*D(U;t,w) + 2*D(U;w,w) + 2*D(U;w,w,w)");
    CHECK(find_case("reduce:wave-printed/wave-similarity").residual ==
          "2*Yb - D(Yb;sigma) + 2*D(Yb;sigma,sigma) - D(Yb;sigma,sigma,sigma) - 3/2*sigma*D(Yb;sigma,sigma) + "
          "3*Yb*D(Yb;sigma,sigma) + D(Yb;sigma)^2");
    const CaseResult& diag = find_case("reduce:cc/diagonal-wave");
    CHECK(diag.verdict == CaseVerdict::Pass);
    CHECK(diag.details["comparison"] == "equal-under-stated-substitution");
    CHECK(find_case("reduce:gcc-wave-unit/gcc-scaling-reduction-printed").verdict == CaseVerdict::Unsupported);

    // the stationary residual read independently: derived - printed = 2 Yw Yw''
    Expr derived = parse("D(Yw;w,w,w) + D(Yw;w)^2 + Yw*D(Yw;w,w)");
    Expr printed = builtin_model().equation("stationary-printed").lhs;
    CHECK(to_string(derived - printed) == find_case("reduce:wave-printed/wave-stationary").residual);
}

TEST_CASE("first integral pairs") {
    for (const char* label : {"first-integral:stationary-integral->stationary-derived",
                              "first-integral:stationary-integral-second->stationary-integral",
                              "first-integral:similarity-integral-derived->similarity-derived",
                              "first-integral:similarity-integral-second->similarity-integral-derived",
                              "first-integral:projective-integral->projective-derived",
                              "first-integral:gcc-travel-integral-derived->gcc-travel-derived",
                              "first-integral:gcc-travel-integral-matched->gcc-travel-printed",
                              "first-integral:scaling-integral-derived->scaling-derived"}) {
        CAPTURE(label);
        CHECK(find_case(label).verdict == CaseVerdict::Pass);
        CHECK(find_case(label).residual == "0");
    }
    CHECK(find_case("first-integral:stationary-integral->stationary-printed").residual == "2*Y0*Yw + 2*Yw^2*D(Yw;w)");
    CHECK(find_case("first-integral:similarity-integral-second->similarity-integral").residual ==
          "-1/2*sigma*Y1 + sigma*Yb + Y1*Yb - 2*Yb^2 + sigma*Y0*Yb - 3/2*sigma*Yb^2 - 1/2*sigma^2*Y0 + 1/2*sigma^2*Yb + Yb^3");
    const CaseResult& matched = find_case("first-integral:gcc-travel-integral-matched->gcc-travel-printed");
    CHECK(matched.details["assumptions"] == J::array({"A = -4 - alpha"}));
    CHECK(matched.details["scale"] == "1 + n");
    CHECK(matched.details["differentiations"] == 2);
    for (const char* label : {"first-integral:scaling-integral->scaling-derived",
                              "first-integral:scaling-integral-regrouped->scaling-derived",
                              "first-integral:gcc-travel-integral->gcc-travel-derived"})
        CHECK(find_case(label).verdict == CaseVerdict::MismatchRecorded);
}

TEST_CASE("closed-form kink amplitude") {
    const CaseResult& kink = find_case("solution:stationary-kink@stationary-integral-homogeneous");
    CHECK(kink.verdict == CaseVerdict::Pass);
    CHECK(kink.details["solved"]["amp"] == "c^(-1)");
    CHECK(find_case("solution:wave-linear@wave-printed").details["function_values"] == J::array({"phi = phi0 + t*phi1"}));
}

TEST_CASE("closure and relation cases") {
    CHECK(find_case("closure:time-shift,cc-scaling,x-shift,y-shift,y-boost-linear").details["closed"] == true);
    const CaseResult& open = find_case("closure:time-shift,cc-scaling,x-shift,y-shift,x-shift-exp,y-boost-exp");
    CHECK(open.details["closed"] == false);
    CHECK_FALSE(open.details["witnesses"].empty());
    CHECK(open.verdict == CaseVerdict::Pass);
    CHECK(find_case("relation:[y-boost-psi,y-boost-chi]").verdict == CaseVerdict::Pass);
    const CaseResult& flipped = find_case("cc-finite-table:[cc-scaling,time-shift]");
    CHECK(flipped.verdict == CaseVerdict::MismatchRecorded);
    REQUIRE(flipped.ledger.size() == 1);
    CHECK(flipped.ledger[0].note == "opposite sign");
    for (const auto& c : suite().cases)
        if (c.label.rfind("gcc-table:", 0) == 0) CHECK(c.verdict == CaseVerdict::Pass);
}

TEST_CASE("determining system of the cc equation") {
    const CaseResult& d = find_case("determining:cc");
    CHECK(d.verdict == CaseVerdict::Pass);
    bool found = false;
    for (const auto& e : d.details["equations"]) found = found || e == "D(xi_t;u)";
    CHECK(found);
}

TEST_CASE("suite verdicts") {
    const Report& r = suite();
    CHECK(r.count(CaseVerdict::Fail) == 0);
    CHECK(r.exit_code() == 0);
    std::set<std::string> labels;
    for (const auto& c : r.cases) {
        CAPTURE(c.label);
        CHECK(labels.insert(c.label).second);
        CHECK(c.kind != "error");
        if (c.verdict == CaseVerdict::MismatchRecorded) CHECK_FALSE(c.ledger.empty());
        if (c.verdict == CaseVerdict::Pass && c.label.rfind("non-symmetry:", 0) != 0) CHECK(c.residual == "0");
    }
    CHECK(find_case("non-symmetry:du-field@cc").residual == "-D(u;x,x)");
}

TEST_CASE("every built-in block is exercised by the suite") {
    std::string text = suite().to_json().dump();
    for (const auto& name : builtin_names()) {
        CAPTURE(name);
        std::regex token("(^|[^A-Za-z0-9-])" + name + "($|[^A-Za-z0-9-]|->)");
        CHECK(std::regex_search(text, token));
    }
}

TEST_CASE("reports are deterministic") {
    std::string parallel = run_paper_suite(true).to_json().dump(2);
    std::string serial = run_paper_suite(false).to_json().dump(2);
    CHECK(parallel == suite().to_json().dump(2));
    CHECK(serial == parallel);
    CHECK(run_paper_suite(true).to_text() == suite().to_text());
}

TEST_CASE("report conforms to the shipped schema") {
    std::ifstream f(LIESYM_SCHEMA_PATH);
    REQUIRE(f);
    J schema = J::parse(f);
    J report = suite().to_json();
    CHECK(schema_violation(report, schema, "$") == "");
    J summary = report["summary"];
    CHECK(summary["total"] == summary["pass"].get<int>() + summary["fail"].get<int>() +
                                  summary["mismatch-recorded"].get<int>() + summary["unsupported"].get<int>());

    J broken = report;
    broken["cases"][0]["verdict"] = "maybe";
    CHECK(schema_violation(broken, schema, "$") != "");
    broken = report;
    broken["extra"] = 1;
    CHECK(schema_violation(broken, schema, "$") != "");
}

TEST_CASE("text report layout") {
    std::string text = suite().to_text();
    CHECK(text.rfind("pass              cc-finite-table:[cc-scaling,cc-scaling]\n", 0) == 0);
    CHECK(text.find("\nledger\n") != std::string::npos);
    std::ostringstream tail;
    const Report& r = suite();
    tail << r.cases.size() << " cases: " << r.count(CaseVerdict::Pass) << " pass, 0 fail, "
         << r.count(CaseVerdict::MismatchRecorded) << " mismatch-recorded, " << r.count(CaseVerdict::Unsupported)
         << " unsupported\n";
    CHECK(text.size() >= tail.str().size());
    CHECK(text.substr(text.size() - tail.str().size()) == tail.str());
}

TEST_CASE("case builders reject unknown names") {
    const Model& m = builtin_model();
    CHECK_THROWS_AS(symmetry_case(m, "nope", "cc"), Error);
    CHECK_THROWS_AS(reduce_case(m, "cc", "nope"), Error);
    CHECK_THROWS_AS(run_profiles(m, "sideways"), Error);
}
