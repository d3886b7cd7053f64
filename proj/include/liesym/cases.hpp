#pragma once

#include <string>
#include <vector>

#include "liesym/model.hpp"
#include "liesym/report.hpp"

namespace liesym {

/// Residual of a field on an equation; pass iff zero.
CaseResult symmetry_case(const Model& m, const std::string& field, const std::string& pde);

/// All pairwise commutators of the listed fields, decomposed on the list when possible.
CaseResult commutator_case(const Model& m, const std::vector<std::string>& fields);

/// Pass iff every commutator is a constant combination of the fields.
CaseResult closure_case(const Model& m, const std::vector<std::string>& fields);

/// Emits the determining system. With `generic_field`, also substitutes that
/// field into every equation and looks for xi_t_u = 0; pass iff both hold.
CaseResult determining_case(const Model& m, const std::string& pde, const std::string& generic_field = {});

/// Pullback of an equation; with `printed`, compared against that equation
/// under its stated assumptions and recorded in the ledger.
CaseResult reduce_case(const Model& m, const std::string& pde, const std::string& ansatz, const std::string& printed = {});

/// First-integral residual of `candidate` against `eq`.
CaseResult first_integral_case(const Model& m, const std::string& eq, const std::string& candidate);

/// Substitutes a closed-form solution; applies its function values and solves
/// for its listed unknowns. Pass iff the final residual is zero.
CaseResult solution_case(const Model& m, const std::string& eq, const std::string& solution);

}  // namespace liesym
