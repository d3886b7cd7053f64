#include "liesym/report.hpp"

#include <algorithm>
#include <sstream>

namespace liesym {

std::string verdict_text(CaseVerdict v) {
    switch (v) {
        case CaseVerdict::Pass: return "pass";
        case CaseVerdict::Fail: return "fail";
        case CaseVerdict::MismatchRecorded: return "mismatch-recorded";
        case CaseVerdict::Unsupported: return "unsupported";
    }
    return "?";
}

void Report::sort() {
    std::stable_sort(cases.begin(), cases.end(), [](const CaseResult& a, const CaseResult& b) { return a.label < b.label; });
}

std::size_t Report::count(CaseVerdict v) const {
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [v](const CaseResult& c) { return c.verdict == v; }));
}

int Report::exit_code() const { return count(CaseVerdict::Fail) > 0 ? 1 : 0; }

nlohmann::ordered_json Report::to_json() const {
    using J = nlohmann::ordered_json;
    J out;
    out["tool"] = "liesym";
    out["command"] = command;
    J cs = J::array();
    J ledger = J::array();
    for (const auto& c : cases) {
        cs.push_back({{"label", c.label}, {"kind", c.kind}, {"verdict", verdict_text(c.verdict)}, {"residual", c.residual}, {"details", c.details}});
        for (const auto& l : c.ledger)
            ledger.push_back({{"label", l.label}, {"printed", l.printed}, {"derived", l.derived}, {"residual", l.residual}, {"note", l.note}});
    }
    out["cases"] = cs;
    out["ledger"] = ledger;
    out["summary"] = {{"total", cases.size()},
                      {"pass", count(CaseVerdict::Pass)},
                      {"fail", count(CaseVerdict::Fail)},
                      {"mismatch-recorded", count(CaseVerdict::MismatchRecorded)},
                      {"unsupported", count(CaseVerdict::Unsupported)}};
    return out;
}

std::string Report::to_text() const {
    std::ostringstream os;
    std::size_t width = 0;
    for (const auto& c : cases) width = std::max(width, c.label.size());
    for (const auto& c : cases) {
        os << verdict_text(c.verdict);
        os << std::string(18 - verdict_text(c.verdict).size(), ' ') << c.label;
        if (c.residual != "0") os << std::string(width + 2 - c.label.size(), ' ') << "residual " << c.residual;
        os << "\n";
    }
    bool any = false;
    for (const auto& c : cases)
        for (const auto& l : c.ledger) {
            if (!any) os << "\nledger\n";
            any = true;
            os << "  " << l.label << "\n";
            os << "    printed:  " << l.printed << "\n";
            os << "    derived:  " << l.derived << "\n";
            os << "    residual: " << l.residual << "\n";
            if (!l.note.empty()) os << "    note:     " << l.note << "\n";
        }
    os << "\n" << cases.size() << " cases: " << count(CaseVerdict::Pass) << " pass, " << count(CaseVerdict::Fail) << " fail, "
       << count(CaseVerdict::MismatchRecorded) << " mismatch-recorded, " << count(CaseVerdict::Unsupported) << " unsupported\n";
    return os.str();
}

}  // namespace liesym
