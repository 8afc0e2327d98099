#ifndef LOOPBV_JSON_IO_HPP
#define LOOPBV_JSON_IO_HPP

#include "loopbv/cpn.hpp"
#include "loopbv/gysin.hpp"
#include "loopbv/report.hpp"

#include <nlohmann/json.hpp>

namespace loopbv {

using json = nlohmann::json;

// Elements serialize as {"monomial": "coefficient"} with decimal-string
// coefficients; monomials as sorted "name^exp·…" strings.
json element_to_json(const Presentation &p, const Element &x);
Element element_from_json(const Presentation &p, const json &j);

json presentation_to_json(const Presentation &p);
Presentation presentation_from_json(const json &j);

json report_to_json(const AuditReport &r);

// operator envelope: {"algebra", "closed_form", "table":[{"monomial","value"}]};
// the table is materialized over the window even for closed-form rules
json bv_operator_to_json(const BVOperator &op, const DegreeWindow &w);
BVOperator bv_operator_from_json(std::shared_ptr<const Presentation> p, const json &j);

// action tables plus the Hopf coproduct/suspension data, under "actions"
json instance_actions_to_json(const StringBVInstance &inst);

// {"base":"CP^m", "summands":[k,...], "tangent": m, "perp": m}
json bundle_to_json(const BundleSpec &b);
BundleSpec bundle_from_json(const json &j);

// {"<degree>": {"free": r, "torsion": ["m", ...]}}
json graded_group_to_json(const GradedGroup &g);
GradedGroup graded_group_from_json(const json &j);

} // namespace loopbv

#endif
