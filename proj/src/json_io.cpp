#include "loopbv/json_io.hpp"

#include <sstream>

namespace loopbv {

void AuditReport::merge(const AuditReport &other) {
    checked += other.checked;
    truncated += other.truncated;
    for (const auto &c : other.checks_run)
        checks_run.push_back(c);
    for (const auto &f : other.failures)
        failures.push_back(f);
    if (window.empty())
        window = other.window;
}

std::string AuditReport::text() const {
    std::ostringstream os;
    os << "window [" << window << "], " << checked << " checks";
    if (truncated > 0)
        os << ", " << truncated << " outside the table window";
    os << (ok() ? ", all passed" : ", FAILURES:") << "\n";
    for (const auto &f : failures) {
        os << "  " << f.check << "(";
        for (size_t i = 0; i < f.inputs.size(); ++i)
            os << (i ? ", " : "") << f.inputs[i];
        os << ") residual = " << f.residual;
        if (!f.note.empty())
            os << "  [" << f.note << "]";
        os << "\n";
    }
    return os.str();
}

json element_to_json(const Presentation &p, const Element &x) {
    json j = json::object();
    for (const auto &[m, c] : x.terms)
        j[p.monomial_str(m)] = rat_str(c);
    return j;
}

Element element_from_json(const Presentation &p, const json &j) {
    Element x;
    if (!j.is_object())
        throw usage_error("element JSON must be an object of monomial -> coefficient");
    for (auto it = j.begin(); it != j.end(); ++it) {
        Monomial m = p.parse_monomial(it.key());
        Rat c = parse_rat(it.value().get<std::string>());
        if (c != 0)
            x.terms[m] = c;
    }
    return p.normal_form(x);
}

json presentation_to_json(const Presentation &p) {
    json j;
    j["name"] = p.name();
    j["coefficients"] = p.ring().str();
    j["generators"] = json::array();
    for (const auto &g : p.generators())
        j["generators"].push_back({{"name", g.name}, {"degree", g.degree}});
    j["order"] = json::array();
    for (int gi : p.precedence())
        j["order"].push_back(p.generators()[gi].name);
    j["rewrites"] = json::array();
    for (const auto &r : p.rewrites())
        j["rewrites"].push_back(
            {{"lhs", p.monomial_str(r.lhs)}, {"rhs", element_to_json(p, r.rhs)}});
    j["torsion"] = json::array();
    for (const auto &t : p.torsion())
        j["torsion"].push_back(
            {{"modulus", int_str(t.modulus)}, {"monomial", p.monomial_str(t.monomial)}});
    return j;
}

Presentation presentation_from_json(const json &j) {
    std::vector<Generator> gens;
    for (const auto &g : j.at("generators"))
        gens.push_back({g.at("name").get<std::string>(), g.at("degree").get<long>()});
    std::vector<std::string> order;
    if (j.contains("order"))
        for (const auto &o : j.at("order"))
            order.push_back(o.get<std::string>());
    CoeffRing ring = j.contains("coefficients")
                         ? CoeffRing::parse(j.at("coefficients").get<std::string>())
                         : CoeffRing::integers();
    Presentation p(j.value("name", std::string("presentation")), gens, ring, order);
    if (j.contains("rewrites"))
        for (const auto &r : j.at("rewrites")) {
            Monomial lhs = p.parse_monomial(r.at("lhs").get<std::string>());
            p.add_rewrite(lhs, element_from_json(p, r.at("rhs")));
        }
    if (j.contains("torsion"))
        for (const auto &t : j.at("torsion"))
            p.add_torsion(parse_int(t.at("modulus").get<std::string>()),
                          p.parse_monomial(t.at("monomial").get<std::string>()));
    p.validate();
    return p;
}

json report_to_json(const AuditReport &r) {
    json j;
    j["window"] = r.window;
    j["checks_run"] = r.checks_run;
    j["checked"] = r.checked;
    j["truncated"] = r.truncated;
    j["passed"] = r.ok();
    j["failures"] = json::array();
    for (const auto &f : r.failures)
        j["failures"].push_back({{"check", f.check},
                                 {"inputs", f.inputs},
                                 {"residual", f.residual},
                                 {"note", f.note}});
    return j;
}

} // namespace loopbv

namespace loopbv {

json bv_operator_to_json(const BVOperator &op, const DegreeWindow &w) {
    const Presentation &p = *op.algebra;
    json j;
    j["algebra"] = p.name();
    j["closed_form"] = op.closed_name.empty() ? json(nullptr) : json(op.closed_name);
    j["table"] = json::array();
    for (const auto &b : p.window_basis(w))
        j["table"].push_back({{"monomial", p.monomial_str(b.mon)},
                              {"value", element_to_json(p, op.value_on(b.mon))}});
    return j;
}

BVOperator bv_operator_from_json(std::shared_ptr<const Presentation> p, const json &j) {
    BVOperator op;
    op.algebra = p;
    if (j.contains("closed_form") && !j.at("closed_form").is_null())
        op.closed_name = j.at("closed_form").get<std::string>();
    for (const auto &row : j.at("table"))
        op.table[p->parse_monomial(row.at("monomial").get<std::string>())] =
            element_from_json(*p, row.at("value"));
    if (!op.table.count(p->unit()))
        op.table[p->unit()] = p->zero();
    return op;
}

json instance_actions_to_json(const StringBVInstance &inst) {
    const Presentation &p = inst.p();
    json actions;
    actions["omega"] = json::array();
    for (const auto &[name, val] : inst.actions.omega_values)
        actions["omega"].push_back({{"generator", name}, {"value", element_to_json(p, val)}});
    actions["g"] = json::array();
    for (const auto &[key, val] : inst.actions.g_values)
        actions["g"].push_back({{"generator", key.first},
                                {"module_generator", key.second},
                                {"value", element_to_json(p, val)}});
    actions["coproduct"] = json::array();
    actions["suspension"] = json::object();
    if (inst.hopf.omega.algebra) {
        const Presentation &hp = *inst.hopf.omega.algebra;
        for (const auto &[gi, pairs] : inst.hopf.omega.coproduct) {
            json entry;
            entry["generator"] = hp.generators()[gi].name;
            entry["pairs"] = json::array();
            for (const auto &[l, r] : pairs)
                entry["pairs"].push_back(
                    {element_to_json(hp, l), element_to_json(hp, r)});
            actions["coproduct"].push_back(entry);
        }
        for (const auto &[gi, target] : inst.hopf.omega.suspension)
            actions["suspension"][hp.generators()[gi].name] = target;
    }
    return json{{"actions", actions}};
}

json bundle_to_json(const BundleSpec &b) {
    json j;
    j["base"] = "CP^" + std::to_string(b.base);
    j["summands"] = json::array();
    for (const auto &k : b.summands)
        j["summands"].push_back(int_str(k));
    if (!b.tangents.empty())
        j["tangent"] = b.tangents.front();
    if (!b.perps.empty())
        j["perp"] = b.perps.front();
    return j;
}

BundleSpec bundle_from_json(const json &j) {
    std::string base = j.at("base").get<std::string>();
    if (base.rfind("CP^", 0) != 0)
        throw usage_error("bundle base must look like CP^m");
    BundleSpec b = BundleSpec::over(std::stoi(base.substr(3)));
    if (j.contains("summands"))
        for (const auto &k : j.at("summands"))
            b.with_summand(k.is_string() ? parse_int(k.get<std::string>())
                                         : Int(k.get<long>()));
    if (j.contains("tangent") && !j.at("tangent").is_null())
        b.with_tangent(j.at("tangent").get<int>());
    if (j.contains("perp") && !j.at("perp").is_null())
        b.with_perp(j.at("perp").get<int>());
    return b;
}

json graded_group_to_json(const GradedGroup &g) {
    json j = json::object();
    for (const auto &[deg, part] : g.groups) {
        json entry;
        entry["free"] = part.first;
        entry["torsion"] = json::array();
        for (const auto &m : part.second)
            entry["torsion"].push_back(int_str(m));
        j[std::to_string(deg)] = entry;
    }
    return j;
}

GradedGroup graded_group_from_json(const json &j) {
    GradedGroup g;
    for (auto it = j.begin(); it != j.end(); ++it) {
        long deg = std::stol(it.key());
        long free_rank = it.value().at("free").get<long>();
        for (long i = 0; i < free_rank; ++i)
            g.add_free(deg);
        for (const auto &m : it.value().at("torsion"))
            g.add_torsion(deg, parse_int(m.get<std::string>()));
    }
    return g;
}

} // namespace loopbv
