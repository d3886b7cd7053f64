#pragma once

#include <string>
#include <vector>

#include "json.hpp"

namespace liesym {

enum class CaseVerdict { Pass, Fail, MismatchRecorded, Unsupported };
std::string verdict_text(CaseVerdict v);

/// A printed form that disagrees with (or was only reproduced under a
/// substitution by) the computed one.
struct LedgerEntry {
    std::string label;
    std::string printed;
    std::string derived;
    std::string residual;
    std::string note;
};

struct CaseResult {
    std::string label;
    std::string kind;
    CaseVerdict verdict = CaseVerdict::Pass;
    std::string residual = "0";
    nlohmann::ordered_json details = nlohmann::ordered_json::object();
    std::vector<LedgerEntry> ledger;
};

struct Report {
    std::string command;
    std::vector<CaseResult> cases;

    /// Cases sorted by label; ledger gathered from the cases in that order.
    void sort();
    std::size_t count(CaseVerdict v) const;
    /// 0 when no case failed, 1 otherwise.
    int exit_code() const;
    nlohmann::ordered_json to_json() const;
    std::string to_text() const;
};

}  // namespace liesym
