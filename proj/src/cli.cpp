#include "loopbv/cli.hpp"

#include "loopbv/gysin.hpp"
#include "loopbv/hochschild.hpp"
#include "loopbv/json_io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace loopbv {

namespace {

DegreeWindow default_window(int qmax_flag) {
    DegreeWindow w;
    w.default_cap = 6;
    if (const char *env = std::getenv("LOOPBV_WINDOW")) {
        try {
            w.default_cap = std::stoi(env);
        } catch (...) {
            throw usage_error("LOOPBV_WINDOW must be an integer exponent cap");
        }
        if (w.default_cap < 1)
            throw usage_error("LOOPBV_WINDOW must be positive");
    }
    if (qmax_flag != 0) {
        if (qmax_flag < 1)
            throw usage_error("--qmax must be positive");
        w.default_cap = qmax_flag;
    }
    return w;
}

int effective_jobs(int jobs) {
    if (jobs > 0)
        return jobs;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : (int)std::min(hw, 8u);
}

std::ostream &sink(std::ofstream &file, const std::string &path, std::ostream &fallback) {
    if (path.empty())
        return fallback;
    file.open(path);
    if (!file)
        throw usage_error("cannot open output file '" + path + "'");
    return file;
}

std::string csv_quote(const std::string &s) {
    std::string r = "\"";
    for (char c : s)
        r += (c == '"') ? std::string("\"\"") : std::string(1, c);
    return r + "\"";
}

void render_rows(std::ostream &os, const std::string &format,
                 const std::vector<std::string> &header,
                 const std::vector<std::vector<std::string>> &rows) {
    if (format == "json") {
        json j = json::array();
        for (const auto &row : rows) {
            json obj = json::object();
            for (size_t i = 0; i < header.size(); ++i)
                obj[header[i]] = row[i];
            j.push_back(obj);
        }
        os << j.dump(2) << "\n";
    } else if (format == "csv") {
        for (size_t i = 0; i < header.size(); ++i)
            os << (i ? "," : "") << csv_quote(header[i]);
        os << "\n";
        for (const auto &row : rows) {
            for (size_t i = 0; i < row.size(); ++i)
                os << (i ? "," : "") << csv_quote(row[i]);
            os << "\n";
        }
    } else {
        // display width: count UTF-8 code points, not bytes
        auto dwidth = [](const std::string &s) {
            size_t w = 0;
            for (unsigned char c : s)
                if ((c & 0xc0) != 0x80)
                    ++w;
            return w;
        };
        std::vector<size_t> width(header.size());
        for (size_t i = 0; i < header.size(); ++i)
            width[i] = dwidth(header[i]);
        for (const auto &row : rows)
            for (size_t i = 0; i < row.size(); ++i)
                width[i] = std::max(width[i], dwidth(row[i]));
        auto line = [&](const std::vector<std::string> &row) {
            for (size_t i = 0; i < row.size(); ++i) {
                os << row[i];
                if (i + 1 < row.size())
                    os << std::string(width[i] + 2 - dwidth(row[i]), ' ');
            }
            os << "\n";
        };
        line(header);
        for (const auto &row : rows)
            line(row);
    }
}

BVOperator inject_fault(const StringBVInstance &inst, const std::string &fault) {
    const Presentation &p = inst.p();
    BVOperator bad = inst.delta;
    auto base = inst.delta.closed;
    if (!base)
        throw usage_error("--inject-fault needs a closed-form instance (cpn:<n>)");
    if (fault == "delta-w") {
        // shift the degree-0 value of Δ(w); caught by the BV-identity sweep
        Monomial wmon = p.unit();
        wmon.e[inst.wi] = 1;
        bad.closed = [&p, base, wmon](const Monomial &m) {
            Element v = base(m);
            if (m == wmon)
                v = p.normal_form(v + p.from_int(1));
            return v;
        };
    } else if (fault == "delta-cv") {
        // send the even monomial c·v to w·v; caught by the Δ² sweep
        Monomial cv = p.unit(), wv = p.unit();
        cv.e[inst.ci] = 1;
        cv.e[inst.vi] = 1;
        wv.e[inst.wi] = 1;
        wv.e[inst.vi] = 1;
        bad.closed = [&p, base, cv, wv](const Monomial &m) {
            if (m == cv)
                return p.from_monomial(wv);
            return base(m);
        };
    } else {
        throw usage_error("unknown fault '" + fault + "' (expected delta-w or delta-cv)");
    }
    bad.closed_name = "";
    return bad;
}

int cmd_table(const std::string &instance_name, const DegreeWindow &w,
              const std::string &format, std::ostream &os) {
    StringBVInstance inst = resolve_instance(instance_name, w);
    const Presentation &p = inst.p();
    std::vector<std::vector<std::string>> rows;
    for (const auto &b : p.window_basis(w)) {
        Element d = apply_delta(inst.delta, p.from_monomial(b.mon));
        rows.push_back({p.monomial_str(b.mon), std::to_string(p.degree(b.mon)),
                        p.element_str(d),
                        b.annihilator == 0 ? "0" : int_str(b.annihilator)});
    }
    render_rows(os, format, {"monomial", "degree", "delta", "annihilator"}, rows);
    return 0;
}

int cmd_bracket(const std::string &instance_name, const DegreeWindow &w,
                const std::string &format, std::ostream &os) {
    StringBVInstance inst = resolve_instance(instance_name, w);
    const Presentation &p = inst.p();
    std::vector<std::vector<std::string>> rows;
    for (const auto &ga : p.generators())
        for (const auto &gb : p.generators()) {
            Element val = bracket(inst.delta, p.gen_element(ga.name), p.gen_element(gb.name));
            rows.push_back({ga.name, gb.name, p.element_str(val),
                            std::to_string(ga.degree + gb.degree + 1)});
        }
    render_rows(os, format, {"a", "b", "bracket", "degree"}, rows);
    return 0;
}

int cmd_verify(const std::string &instance_name, const DegreeWindow &w, int jobs,
               const std::vector<std::string> &checks, const std::string &fault,
               const std::string &triples, const std::string &format, std::ostream &os) {
    StringBVInstance inst = resolve_instance(instance_name, w);
    BVOperator op = fault.empty() ? inst.delta : inject_fault(inst, fault);
    auto want = [&](const std::string &name) {
        return checks.empty() || std::find(checks.begin(), checks.end(), name) != checks.end();
    };

    AuditReport total;
    total.window = w.str();
    if (!triples.empty()) {
        // a single-triple Eq-residual query, e.g. --triples c,w,v
        std::stringstream ss(triples);
        std::string tok;
        std::vector<Element> xyz;
        while (std::getline(ss, tok, ','))
            xyz.push_back(inst.p().parse_element(tok));
        if (xyz.size() != 3)
            throw usage_error("--triples needs three comma-separated elements");
        Element r = check_bv_identity(op, xyz[0], xyz[1], xyz[2]);
        total.checks_run.push_back("bv-identity");
        total.checked = 1;
        if (!r.is_zero())
            total.failures.push_back(
                {"bv-identity", {triples}, inst.p().element_str(r), ""});
    } else {
        if (want("contract"))
            total.merge(check_operator_contract(op, w));
        if (want("delta-squared"))
            total.merge(check_delta_squared(op, w, jobs));
        if (want("bv-identity"))
            total.merge(check_bv_identity_window(op, w, jobs));
        if (want("bracket"))
            total.merge(check_bracket_axioms(op, w, jobs));
        if (want("action-laws") && inst.hopf.omega.algebra && fault.empty())
            total.merge(check_action_laws(inst, w, jobs));
        if (want("action-laws") && inst.hopf.omega.algebra && !fault.empty()) {
            StringBVInstance faulty = inst;
            faulty.delta = op;
            total.merge(check_action_laws(faulty, w, jobs));
        }
        if (want("confluence")) {
            ConfluenceReport conf = check_local_confluence(inst.p(), w);
            total.checks_run.push_back("confluence");
            total.checked += conf.monomials_checked;
            for (const auto &f : conf.failures)
                total.failures.push_back({"confluence",
                                          {inst.p().monomial_str(f.peak), f.rules},
                                          inst.p().element_str(
                                              inst.p().normal_form(f.left - f.right)),
                                          ""});
        }
        if (want("pipeline") && inst.name.rfind("cpn:", 0) == 0 &&
            inst.p().ring().kind == RingKind::Z && fault.empty()) {
            PipelineResult pr = run_pipeline(inst.n, w);
            total.merge(pr.seed_comparison);
            total.merge(pr.operator_comparison);
        }
    }

    if (format == "json")
        os << report_to_json(total).dump(2) << "\n";
    else
        os << total.text();
    return total.ok() ? 0 : 1;
}

int cmd_pipeline(int n, const DegreeWindow &w, const std::string &format, std::ostream &os) {
    PipelineResult r = run_pipeline(n, w);
    if (format == "json") {
        json j;
        j["n"] = n;
        j["mu"] = json::array();
        for (const auto &m : r.mu)
            j["mu"].push_back(int_str(m));
        j["lambda"] = json::array();
        for (const auto &l : r.lambda)
            j["lambda"].push_back(int_str(l));
        j["constants"] = {int_str(r.constant_n_plus_1), int_str(r.constant_binom)};
        j["seed_comparison"] = report_to_json(r.seed_comparison);
        j["operator_comparison"] = report_to_json(r.operator_comparison);
        os << j.dump(2) << "\n";
    } else {
        os << "n = " << n << "\n";
        os << "mu =";
        for (const auto &m : r.mu)
            os << " " << int_str(m);
        os << "  (mu_i = n - i)\n";
        os << "lambda =";
        for (const auto &l : r.lambda)
            os << " " << int_str(l);
        os << "  (lambda_j = -(j+1))\n";
        os << "constants = (" << int_str(r.constant_n_plus_1) << ", "
           << int_str(r.constant_binom) << ")\n";
        os << "seed comparison: " << r.seed_comparison.text();
        os << "derived vs closed form: " << r.operator_comparison.text();
    }
    return r.ok() ? 0 : 1;
}

int cmd_hochschild(int n, const DegreeWindow &w, std::ostream &os) {
    IsoDecision d = decide_bv_iso(n, w);
    json j;
    j["n"] = n;
    j["candidates_checked"] = d.candidates_checked;
    if (d.iso) {
        j["iso"] = {{"eps1", d.iso->eps1},
                    {"eps2", d.iso->eps2},
                    {"eps3", d.iso->eps3},
                    {"alpha", int_str(d.iso->alpha)}};
        j["obstruction"] = nullptr;
    } else {
        j["iso"] = nullptr;
        j["obstruction"] = d.obstruction;
    }
    os << j.dump(2) << "\n";
    return 0;
}

int cmd_chern(const BundleSpec &spec, int pair, bool have_pair, std::ostream &os) {
    CohClass c = total_chern(spec, spec.base);
    if (have_pair)
        os << int_str(pair_top(c, pair)) << "\n";
    else
        os << c.str() << "\n";
    return 0;
}

int cmd_confluence(const std::vector<std::string> &names, bool fixture,
                   const DegreeWindow &w, const std::string &format, std::ostream &os) {
    AuditReport total;
    total.window = w.str();
    total.checks_run.push_back("confluence");
    auto run_on = [&](const std::string &label, const Presentation &p) {
        ConfluenceReport r = check_local_confluence(p, w);
        total.checked += r.monomials_checked;
        for (const auto &f : r.failures)
            total.failures.push_back({"confluence",
                                      {label, p.monomial_str(f.peak), f.rules},
                                      p.element_str(p.normal_form(f.left - f.right)),
                                      ""});
    };
    std::vector<std::string> targets = names;
    if (targets.empty())
        targets = {"cpn:1:Z", "cpn:2:Z", "cpn:3:Z", "cpn:4:Z", "cpn:5:Z",
                   "cpn-rational:1", "cpn-rational:2", "cpn-rational:3", "cpn-rational:4",
                   "s2", "hochschild:1", "hochschild:2", "hochschild:3", "hochschild:4"};
    for (const auto &name : targets) {
        StringBVInstance inst = resolve_instance(name, w);
        run_on(name, inst.p());
    }
    if (fixture) {
        Presentation adv("adversarial", {{"x", 0}, {"y", 0}}, CoeffRing::integers());
        adv.add_rewrite("x·y", adv.from_monomial(adv.parse_monomial("x")));
        adv.add_rewrite("x·y", adv.from_monomial(adv.parse_monomial("y")));
        DegreeWindow wa{2, {}};
        run_on("fixture:adversarial", adv);
    }
    if (format == "json")
        os << report_to_json(total).dump(2) << "\n";
    else
        os << total.text();
    return total.ok() ? 0 : 1;
}

} // namespace

StringBVInstance resolve_instance(const std::string &name, const DegreeWindow &w) {
    if (name == "s2")
        return build_s2(w);
    auto split = [](const std::string &s) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ':'))
            parts.push_back(tok);
        return parts;
    };
    std::vector<std::string> parts = split(name);
    auto parse_n = [&](const std::string &s) {
        try {
            return std::stoi(s);
        } catch (...) {
            throw usage_error("bad instance index in '" + name + "'");
        }
    };
    if (parts.size() >= 2 && parts[0] == "cpn") {
        int n = parse_n(parts[1]);
        CoeffRing ring = CoeffRing::integers();
        if (parts.size() == 3)
            ring = CoeffRing::parse(parts[2]);
        else if (parts.size() == 4 && parts[2] == "Zm") // "cpn:2:Zm:5"
            ring = CoeffRing::mod(parse_int(parts[3]));
        else if (parts.size() > 3)
            throw usage_error("bad instance name '" + name + "'");
        return build_theorem_a(n, ring);
    }
    if (parts.size() == 2 && parts[0] == "cpn-rational")
        return build_cpn_rational(parse_n(parts[1]), w);
    if (parts.size() == 2 && parts[0] == "hochschild")
        return build_hochschild(parse_n(parts[1]));
    throw usage_error("unknown instance '" + name +
                      "' (expected cpn:<n>[:coeff], cpn-rational:<n>, s2, hochschild:<n>)");
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"loopbv: exact BV algebras for the string topology of CP^n"};
    app.require_subcommand(1);

    int n = 1, qmax = 0, jobs = 0, pair = -1;
    std::string coeff = "Z", format = "text", instance, out_path, fault, checks_flag, triples;
    std::vector<Int> summands;
    int tangent = -1, perp = -1, base = -1;
    std::vector<std::string> conf_names;
    bool fixture = false;

    auto add_common = [&](CLI::App *cmd, bool with_instance) {
        cmd->add_option("--qmax", qmax, "v-exponent cap of the degree window");
        cmd->add_option("--format", format, "text, json, or csv")
            ->check(CLI::IsMember({"text", "json", "csv"}));
        cmd->add_option("--out", out_path, "write output to a file");
        cmd->add_option("--jobs", jobs, "worker threads (0 = auto)");
        if (with_instance) {
            cmd->add_option("--n", n, "projective space dimension");
            cmd->add_option("--coeff", coeff, "coefficients: Z, Q, or Zm:<m>");
            cmd->add_option("--instance", instance,
                            "named instance (cpn:<n>:<coeff>, cpn-rational:<n>, s2, "
                            "hochschild:<n>); overrides --n/--coeff");
        }
    };

    CLI::App *table = app.add_subcommand("table", "print the Δ table of an instance");
    add_common(table, true);
    CLI::App *brk = app.add_subcommand("bracket", "print the generator bracket table");
    add_common(brk, true);
    CLI::App *verify = app.add_subcommand("verify", "run the audit suite on an instance");
    add_common(verify, true);
    verify->add_option("--checks", checks_flag,
                       "comma list: contract,delta-squared,bv-identity,bracket,action-laws,"
                       "confluence,pipeline");
    verify->add_option("--inject-fault", fault, "delta-w or delta-cv");
    verify->add_option("--triples", triples, "single Eq-residual query, e.g. c,w,v");
    CLI::App *pipe = app.add_subcommand("pipeline",
                                        "derive Δ through Theorems D, C, B and compare");
    add_common(pipe, true);
    CLI::App *hoch = app.add_subcommand("hochschild", "decide the BV isomorphism question");
    add_common(hoch, true);
    CLI::App *chern = app.add_subcommand("chern", "characteristic class queries");
    chern->add_option("--tangent", tangent, "tangent bundle marker TCP^m");
    chern->add_option("--perp", perp, "complement marker for γ_m");
    chern->add_option("--summands", summands, "line bundle twists");
    chern->add_option("--base", base, "base CP^m (defaults to the tangent marker)");
    chern->add_option("--pair", pair, "print <c_k, [CP^k]> for this k");
    chern->add_option("--format", format, "text or json");
    chern->add_option("--out", out_path, "write output to a file");
    CLI::App *conf = app.add_subcommand("confluence", "critical-pair audit of presentations");
    add_common(conf, false);
    conf->add_option("--instances", conf_names, "instance names (default: all built-ins)");
    conf->add_flag("--fixture", fixture, "include the adversarial fixture");

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp &e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError &e) {
        err << e.what() << "\n";
        return 2;
    }

    try {
        DegreeWindow w = default_window(qmax);
        int effective = effective_jobs(jobs);
        std::ofstream file;
        std::ostream &os = sink(file, out_path, out);
        std::string inst_name =
            !instance.empty()
                ? instance
                : "cpn:" + std::to_string(n) + ":" + CoeffRing::parse(coeff).str();

        if (table->parsed())
            return cmd_table(inst_name, w, format, os);
        if (brk->parsed())
            return cmd_bracket(inst_name, w, format, os);
        if (verify->parsed()) {
            static const std::vector<std::string> known = {
                "contract", "delta-squared", "bv-identity", "bracket",
                "action-laws", "confluence", "pipeline"};
            std::vector<std::string> checks;
            std::stringstream ss(checks_flag);
            std::string tok;
            while (std::getline(ss, tok, ','))
                if (!tok.empty()) {
                    if (std::find(known.begin(), known.end(), tok) == known.end())
                        throw usage_error("unknown check '" + tok + "'");
                    checks.push_back(tok);
                }
            return cmd_verify(inst_name, w, effective, checks, fault, triples, format, os);
        }
        if (pipe->parsed())
            return cmd_pipeline(n, w, format, os);
        if (hoch->parsed())
            return cmd_hochschild(n, w, os);
        if (chern->parsed()) {
            int b = base >= 0 ? base : (tangent >= 0 ? tangent : -1);
            if (b < 0)
                throw usage_error("chern needs --base (or a --tangent marker)");
            BundleSpec spec = BundleSpec::over(b);
            for (const auto &k : summands)
                spec.with_summand(k);
            if (tangent >= 0)
                spec.with_tangent(tangent);
            if (perp >= 0)
                spec.with_perp(perp);
            return cmd_chern(spec, pair, pair >= 0, os);
        }
        if (conf->parsed())
            return cmd_confluence(conf_names, fixture, w, format, os);
        throw usage_error("no subcommand");
    } catch (const usage_error &e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace loopbv
