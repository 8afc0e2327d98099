#include "loopbv/bv.hpp"

#include <atomic>
#include <mutex>
#include <set>
#include <thread>

namespace loopbv {

void parallel_sweep(long count, int jobs, const std::function<void(long)> &work) {
    if (jobs < 1)
        jobs = 1;
    if (jobs == 1 || count < 64) {
        for (long i = 0; i < count; ++i)
            work(i);
        return;
    }
    std::atomic<long> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t)
        pool.emplace_back([&] {
            try {
                for (long i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                    work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!first_error)
                    first_error = std::current_exception();
                next.store(count); // drain remaining work
            }
        });
    for (auto &th : pool)
        th.join();
    if (first_error)
        std::rethrow_exception(first_error);
}

Element BVOperator::value_on(const Monomial &m) const {
    const Presentation &p = *algebra;
    if (closed)
        return p.normal_form(closed(m));
    auto it = table.find(m);
    if (it == table.end())
        throw window_error("Δ undefined on " + p.monomial_str(m) + " (beyond table window)");
    return it->second;
}

Element apply_delta(const BVOperator &op, const Element &x) {
    const Presentation &p = *op.algebra;
    Element r;
    for (const auto &[m, c] : p.normal_form(x).terms)
        r = r + c * op.value_on(m);
    return p.normal_form(r);
}

namespace {
long require_degree(const Presentation &p, const Element &x, const char *what) {
    auto d = p.homogeneous_degree(x);
    if (!d)
        throw usage_error(std::string(what) + " must be homogeneous (caller must split): " +
                          p.element_str(x));
    return *d;
}
} // namespace

Element bracket(const BVOperator &op, const Element &a, const Element &b) {
    const Presentation &p = *op.algebra;
    if (a.is_zero() || b.is_zero())
        return p.zero();
    long da = require_degree(p, a, "bracket operand");
    (void)require_degree(p, b, "bracket operand");
    int sa = sign_pow(da);
    Element r = Rat(sa) * apply_delta(op, p.multiply(a, b)) -
                Rat(sa) * p.multiply(apply_delta(op, a), b) -
                p.multiply(a, apply_delta(op, b));
    return p.normal_form(r);
}

Element bv_identity_rhs(const BVOperator &op, const Element &x, const Element &y,
                        const Element &z) {
    const Presentation &p = *op.algebra;
    if (x.is_zero() || y.is_zero() || z.is_zero())
        return p.zero();
    long dx = require_degree(p, x, "BV identity term");
    long dy = require_degree(p, y, "BV identity term");

    Element xy = p.multiply(x, y), yz = p.multiply(y, z), xz = p.multiply(x, z);
    Element r = p.multiply(apply_delta(op, xy), z);
    r = r + Rat(sign_pow(dx)) * p.multiply(x, apply_delta(op, yz));
    r = r + Rat(sign_pow((dx - 1) * dy)) * p.multiply(y, apply_delta(op, xz));
    r = r - p.multiply(p.multiply(apply_delta(op, x), y), z);
    r = r - Rat(sign_pow(dx)) * p.multiply(x, p.multiply(apply_delta(op, y), z));
    r = r - Rat(sign_pow(dx + dy)) * p.multiply(p.multiply(x, y), apply_delta(op, z));
    return p.normal_form(r);
}

Element check_bv_identity(const BVOperator &op, const Element &x, const Element &y,
                          const Element &z) {
    const Presentation &p = *op.algebra;
    Element lhs = apply_delta(op, p.multiply(p.multiply(x, y), z));
    return p.normal_form(lhs - bv_identity_rhs(op, x, y, z));
}

/******** Window audits ********/

AuditReport check_delta_squared(const BVOperator &op, const DegreeWindow &w, int jobs) {
    const Presentation &p = *op.algebra;
    AuditReport rep;
    rep.window = w.str();
    rep.checks_run.push_back("delta-squared");
    auto basis = p.window_basis(w);
    std::vector<std::unique_ptr<Certificate>> found(basis.size());
    std::atomic<long> truncated{0};
    parallel_sweep((long)basis.size(), jobs, [&](long i) {
        try {
            Element r = apply_delta(op, apply_delta(op, p.from_monomial(basis[i].mon)));
            if (!r.is_zero())
                found[i] = std::make_unique<Certificate>(Certificate{
                    "delta-squared", {p.monomial_str(basis[i].mon)}, p.element_str(r), ""});
        } catch (const window_error &) {
            ++truncated;
        }
    });
    rep.checked = (long)basis.size();
    rep.truncated = truncated.load();
    for (auto &f : found)
        if (f)
            rep.failures.push_back(*f);
    return rep;
}

AuditReport check_operator_contract(const BVOperator &op, const DegreeWindow &w) {
    const Presentation &p = *op.algebra;
    AuditReport rep;
    rep.window = w.str();
    rep.checks_run.push_back("operator-contract");
    Element at_unit = op.value_on(p.unit());
    ++rep.checked;
    if (!at_unit.is_zero())
        rep.failures.push_back({"delta-of-unit", {"1"}, p.element_str(at_unit), "Δ(1) ≠ 0"});
    for (const auto &b : p.window_basis(w)) {
        Element v = op.value_on(b.mon);
        ++rep.checked;
        if (!v.is_zero()) {
            auto d = p.homogeneous_degree(v);
            if (!d || *d != p.degree(b.mon) + 1)
                rep.failures.push_back({"degree-shift",
                                        {p.monomial_str(b.mon)},
                                        p.element_str(v),
                                        "value does not raise degree by 1"});
        }
        if (b.annihilator > 0) {
            Element killed = p.scale(b.annihilator, v);
            if (!killed.is_zero())
                rep.failures.push_back({"torsion-welldefined",
                                        {p.monomial_str(b.mon)},
                                        p.element_str(killed),
                                        int_str(b.annihilator) + "·Δ(x) ≠ 0"});
        }
    }
    return rep;
}

AuditReport check_bv_identity_window(const BVOperator &op, const DegreeWindow &w, int jobs) {
    const Presentation &p = *op.algebra;
    AuditReport rep;
    rep.window = w.str();
    rep.checks_run.push_back("bv-identity");
    auto basis = p.window_basis(w);
    long n = (long)basis.size();
    long total = n * n * n;
    std::mutex mu;
    std::atomic<long> truncated{0};
    parallel_sweep(total, jobs, [&](long idx) {
        long i = idx / (n * n), j = (idx / n) % n, k = idx % n;
        Element x = p.from_monomial(basis[i].mon);
        Element y = p.from_monomial(basis[j].mon);
        Element z = p.from_monomial(basis[k].mon);
        try {
            Element r = check_bv_identity(op, x, y, z);
            if (!r.is_zero()) {
                std::lock_guard<std::mutex> lock(mu);
                rep.failures.push_back({"bv-identity",
                                        {p.monomial_str(basis[i].mon),
                                         p.monomial_str(basis[j].mon),
                                         p.monomial_str(basis[k].mon)},
                                        p.element_str(r),
                                        ""});
            }
        } catch (const window_error &) {
            ++truncated;
        }
    });
    rep.checked = total;
    rep.truncated = truncated.load();
    std::sort(rep.failures.begin(), rep.failures.end(),
              [](const Certificate &a, const Certificate &b) { return a.inputs < b.inputs; });
    return rep;
}

AuditReport check_bracket_axioms(const BVOperator &op, const DegreeWindow &w, int jobs) {
    const Presentation &p = *op.algebra;
    AuditReport rep;
    rep.window = w.str();
    rep.checks_run = {"bracket-antisymmetry", "bracket-leibniz", "bracket-jacobi"};
    auto basis = p.window_basis(w);
    long n = (long)basis.size();
    std::mutex mu;
    std::atomic<long> truncated{0};

    parallel_sweep(n * n, jobs, [&](long idx) {
        long i = idx / n, j = idx % n;
        Element a = p.from_monomial(basis[i].mon), b = p.from_monomial(basis[j].mon);
        long da = p.degree(basis[i].mon), db = p.degree(basis[j].mon);
        try {
            // {a,b} + (-1)^{(|a|+1)(|b|+1)} {b,a} = 0
            Element r = p.normal_form(bracket(op, a, b) +
                                      Rat(sign_pow((da + 1) * (db + 1))) * bracket(op, b, a));
            if (!r.is_zero()) {
                std::lock_guard<std::mutex> lock(mu);
                rep.failures.push_back(
                    {"bracket-antisymmetry",
                     {p.monomial_str(basis[i].mon), p.monomial_str(basis[j].mon)},
                     p.element_str(r),
                     ""});
            }
        } catch (const window_error &) {
            ++truncated;
        }
    });
    rep.checked += n * n;

    parallel_sweep(n * n * n, jobs, [&](long idx) {
        long i = idx / (n * n), j = (idx / n) % n, k = idx % n;
        Element a = p.from_monomial(basis[i].mon), b = p.from_monomial(basis[j].mon),
                c = p.from_monomial(basis[k].mon);
        long da = p.degree(basis[i].mon), db = p.degree(basis[j].mon);
        try {
            // {a, b·c} = {a,b}·c + (-1)^{(|a|+1)|b|} b·{a,c}
            Element leib = p.normal_form(bracket(op, a, p.multiply(b, c)) -
                                         p.multiply(bracket(op, a, b), c) -
                                         Rat(sign_pow((da + 1) * db)) *
                                             p.multiply(b, bracket(op, a, c)));
            // {a,{b,c}} = {{a,b},c} + (-1)^{(|a|+1)(|b|+1)} {b,{a,c}}
            Element jac = p.normal_form(bracket(op, a, bracket(op, b, c)) -
                                        bracket(op, bracket(op, a, b), c) -
                                        Rat(sign_pow((da + 1) * (db + 1))) *
                                            bracket(op, b, bracket(op, a, c)));
            if (!leib.is_zero() || !jac.is_zero()) {
                std::lock_guard<std::mutex> lock(mu);
                std::vector<std::string> in = {p.monomial_str(basis[i].mon),
                                               p.monomial_str(basis[j].mon),
                                               p.monomial_str(basis[k].mon)};
                if (!leib.is_zero())
                    rep.failures.push_back({"bracket-leibniz", in, p.element_str(leib), ""});
                if (!jac.is_zero())
                    rep.failures.push_back({"bracket-jacobi", in, p.element_str(jac), ""});
            }
        } catch (const window_error &) {
            ++truncated;
        }
    });
    rep.checked += 2 * n * n * n;
    rep.truncated = truncated.load();
    std::sort(rep.failures.begin(), rep.failures.end(), [](const Certificate &a,
                                                           const Certificate &b) {
        return std::tie(a.check, a.inputs) < std::tie(b.check, b.inputs);
    });
    return rep;
}

AuditReport compare_operators(const BVOperator &a, const BVOperator &b, const DegreeWindow &w,
                              const std::string &label) {
    const Presentation &p = *a.algebra;
    AuditReport rep;
    rep.window = w.str();
    rep.checks_run.push_back(label);
    for (const auto &e : p.window_basis(w)) {
        Element va = a.value_on(e.mon), vb = b.value_on(e.mon);
        ++rep.checked;
        if (va != vb)
            rep.failures.push_back({label,
                                    {p.monomial_str(e.mon)},
                                    p.element_str(p.normal_form(va - vb)),
                                    "left = " + p.element_str(va) +
                                        ", right = " + p.element_str(vb)});
    }
    return rep;
}

/******** Extension from word-length <= 2 seed data ********/

BVOperator extend_delta_by_bv(const std::map<Monomial, Element> &seed,
                              std::shared_ptr<const Presentation> pres, const DegreeWindow &w) {
    const Presentation &p = *pres;
    std::map<Monomial, Element> memo;
    for (const auto &[m, v] : seed)
        memo[m] = p.normal_form(v);
    std::set<Monomial> in_progress;

    std::function<Element(const Monomial &)> delta_mono;
    auto delta_elem = [&](const Element &x) {
        Element r;
        for (const auto &[m, c] : x.terms)
            r = r + c * delta_mono(m);
        return p.normal_form(r);
    };
    auto rhs_for = [&](const Element &x, const Element &y, const Element &z) {
        if (x.is_zero() || y.is_zero() || z.is_zero())
            return p.zero();
        long dx = *p.homogeneous_degree(x), dy = *p.homogeneous_degree(y);
        Element xy = p.multiply(x, y), yz = p.multiply(y, z), xz = p.multiply(x, z);
        Element r = p.multiply(delta_elem(xy), z);
        r = r + Rat(sign_pow(dx)) * p.multiply(x, delta_elem(yz));
        r = r + Rat(sign_pow((dx - 1) * dy)) * p.multiply(y, delta_elem(xz));
        r = r - p.multiply(p.multiply(delta_elem(x), y), z);
        r = r - Rat(sign_pow(dx)) * p.multiply(x, p.multiply(delta_elem(y), z));
        r = r - Rat(sign_pow(dx + dy)) * p.multiply(p.multiply(x, y), delta_elem(z));
        return p.normal_form(r);
    };
    delta_mono = [&](const Monomial &m) -> Element {
        auto it = memo.find(m);
        if (it != memo.end())
            return it->second;
        int len = m.total_exponent();
        if (len == 0)
            return p.zero();
        if (len <= 2)
            throw usage_error("seed does not assign Δ(" + p.monomial_str(m) + ")");
        if (!in_progress.insert(m).second)
            throw usage_error("extension cycle at " + p.monomial_str(m));
        // split off the first and the last letter of the normal-ordered word
        int first = -1, last = -1;
        for (int gi : p.precedence()) {
            if (m.e[gi] == 0)
                continue;
            if (first < 0)
                first = gi;
            last = gi;
        }
        Monomial mid = m;
        mid.e[first] -= 1;
        mid.e[last] -= 1;
        Element val = rhs_for(p.from_monomial(p.gen_monomial(first)), p.from_monomial(mid),
                              p.from_monomial(p.gen_monomial(last)));
        in_progress.erase(m);
        memo[m] = val;
        return val;
    };

    auto basis = p.window_basis(w);
    std::sort(basis.begin(), basis.end(), [](const BasisEntry &a, const BasisEntry &b) {
        return a.mon.total_exponent() < b.mon.total_exponent();
    });
    for (const auto &b : basis)
        (void)delta_mono(b.mon);

    // Factorization independence: every two-letter split of every window
    // word must agree with the value already assigned to the word's class.
    // Words that collapse under the relations are included; they pin the
    // seed against the boundary of the presentation.
    for (const Monomial &m : p.window_words(w)) {
        if (m.total_exponent() < 3)
            continue;
        Element reference = delta_elem(p.from_monomial(m));
        for (int gi = 0; gi < (int)p.generators().size(); ++gi) {
            if (m.e[gi] == 0)
                continue;
            for (int gj = 0; gj < (int)p.generators().size(); ++gj) {
                if (m.e[gj] == 0 || (gi == gj && m.e[gi] < 2))
                    continue;
                Monomial mid = m;
                mid.e[gi] -= 1;
                mid.e[gj] -= 1;
                auto s1 = p.mono_mul(mid, p.gen_monomial(gj));
                auto s2 = p.mono_mul(p.gen_monomial(gi), s1->second);
                int sigma = s1->first * s2->first; // gi·mid·gj = sigma·m
                Element cand = p.scale(sigma, rhs_for(p.from_monomial(p.gen_monomial(gi)),
                                                      p.from_monomial(mid),
                                                      p.from_monomial(p.gen_monomial(gj))));
                if (cand != reference)
                    throw seed_conflict_error(
                        "Δ extension is factorization-dependent at " + p.monomial_str(m) +
                            ": " + p.element_str(reference) + " vs " + p.element_str(cand),
                        m, reference, cand);
            }
        }
    }

    BVOperator op;
    op.algebra = pres;
    for (const auto &b : basis)
        op.table[b.mon] = memo[b.mon];
    op.table[p.unit()] = memo.count(p.unit()) ? memo[p.unit()] : p.zero();
    return op;
}

} // namespace loopbv
