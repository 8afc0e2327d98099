#include "loopbv/algebra.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

namespace loopbv {

/******** Monomial / Element basics ********/

int Monomial::total_exponent() const {
    int t = 0;
    for (int x : e)
        t += x;
    return t;
}

Element operator+(const Element &a, const Element &b) {
    Element r = a;
    for (const auto &[m, c] : b.terms) {
        Rat s = r.terms[m] + c;
        if (s == 0)
            r.terms.erase(m);
        else
            r.terms[m] = s;
    }
    return r;
}

Element operator-(const Element &a) {
    Element r;
    for (const auto &[m, c] : a.terms)
        r.terms[m] = -c;
    return r;
}

Element operator-(const Element &a, const Element &b) { return a + (-b); }

Element operator*(const Rat &c, const Element &a) {
    Element r;
    if (c == 0)
        return r;
    for (const auto &[m, k] : a.terms)
        r.terms[m] = c * k;
    return r;
}

/******** DegreeWindow ********/

int DegreeWindow::cap_for(const std::string &name) const {
    auto it = caps.find(name);
    return it == caps.end() ? default_cap : it->second;
}

std::string DegreeWindow::str() const {
    std::ostringstream os;
    os << "cap=" << default_cap;
    for (const auto &[g, c] : caps)
        os << "," << g << "<=" << c;
    return os.str();
}

/******** Presentation construction ********/

Presentation::Presentation(std::string name, std::vector<Generator> gens, CoeffRing ring,
                           std::vector<std::string> precedence)
    : name_(std::move(name)), gens_(std::move(gens)), ring_(ring) {
    std::set<std::string> seen;
    for (const auto &g : gens_) {
        if (g.name.empty())
            throw usage_error("generator with empty name");
        if (!seen.insert(g.name).second)
            throw usage_error("duplicate generator name '" + g.name + "'");
    }
    if (precedence.empty()) {
        // default: exterior generators first, declaration order otherwise
        std::vector<int> odds, evens;
        for (int i = 0; i < (int)gens_.size(); ++i)
            (gens_[i].odd() ? odds : evens).push_back(i);
        precedence_ = odds;
        precedence_.insert(precedence_.end(), evens.begin(), evens.end());
    } else {
        if (precedence.size() != gens_.size())
            throw usage_error("precedence list must mention every generator exactly once");
        std::set<std::string> used;
        for (const auto &nm : precedence) {
            int gi = gen_index(nm);
            if (gi < 0 || !used.insert(nm).second)
                throw usage_error("bad precedence entry '" + nm + "'");
            precedence_.push_back(gi);
        }
    }
}

int Presentation::gen_index(const std::string &name) const {
    for (int i = 0; i < (int)gens_.size(); ++i)
        if (gens_[i].name == name)
            return i;
    return -1;
}

long Presentation::degree(const Monomial &m) const {
    long d = 0;
    for (int i = 0; i < (int)gens_.size(); ++i)
        d += (long)m.e[i] * gens_[i].degree;
    return d;
}

std::optional<long> Presentation::homogeneous_degree(const Element &x) const {
    if (x.is_zero())
        return std::nullopt;
    long d = degree(x.terms.begin()->first);
    for (const auto &[m, c] : x.terms)
        if (degree(m) != d)
            return std::nullopt;
    return d;
}

Monomial Presentation::unit() const { return Monomial{std::vector<int>(gens_.size(), 0)}; }

Monomial Presentation::gen_monomial(int gi) const {
    Monomial m = unit();
    m.e.at(gi) = 1;
    return m;
}

void Presentation::add_rewrite(const Monomial &lhs, Element rhs) {
    if ((int)lhs.e.size() != (int)gens_.size())
        throw usage_error("rewrite lhs over wrong presentation");
    if (lhs.is_unit())
        throw usage_error("rewrite lhs may not be the unit monomial");
    long dl = degree(lhs);
    for (const auto &[m, c] : rhs.terms) {
        if (degree(m) != dl)
            throw usage_error("rewrite rule not degree-homogeneous: " + monomial_str(lhs));
        if (!monomial_less(m, lhs))
            throw usage_error("rewrite rhs monomial not smaller than lhs: " + monomial_str(lhs) +
                              " -> " + monomial_str(m));
    }
    rewrites_.push_back({lhs, std::move(rhs)});
}

void Presentation::add_torsion(const Int &modulus, const Monomial &mon) {
    if (modulus < 1)
        throw usage_error("torsion modulus must be positive");
    if ((int)mon.e.size() != (int)gens_.size())
        throw usage_error("torsion monomial over wrong presentation");
    torsion_.push_back({modulus, mon});
}

void Presentation::add_rewrite(const std::string &lhs, const Element &rhs) {
    add_rewrite(parse_monomial(lhs), rhs);
}

void Presentation::add_torsion(const Int &modulus, const std::string &mon) {
    add_torsion(modulus, parse_monomial(mon));
}

void Presentation::validate() const {
    for (const auto &g : gens_)
        (void)g; // parity == degree mod 2 holds by construction (parity is derived)
    for (const auto &r : rewrites_) {
        for (int i = 0; i < (int)gens_.size(); ++i)
            if (gens_[i].odd() && r.lhs.e[i] > 1)
                throw usage_error("rewrite lhs squares odd generator " + gens_[i].name);
    }
}

std::optional<int> Presentation::intrinsic_cap(int gi) const {
    std::optional<int> cap;
    if (gens_[gi].odd())
        cap = 1;
    for (const auto &r : rewrites_) {
        // a pure-power rule g^k -> rhs bounds exponents of g by k-1
        bool pure = r.lhs.e[gi] > 0;
        for (int j = 0; pure && j < (int)gens_.size(); ++j)
            if (j != gi && r.lhs.e[j] != 0)
                pure = false;
        if (pure) {
            int c = r.lhs.e[gi] - 1;
            if (!cap || c < *cap)
                cap = c;
        }
    }
    return cap;
}

Presentation Presentation::renamed(const std::string &new_name,
                                   const std::vector<std::string> &new_gen_names) const {
    if (new_gen_names.size() != gens_.size())
        throw usage_error("renamed: wrong number of generator names");
    std::vector<Generator> gens = gens_;
    for (size_t i = 0; i < gens.size(); ++i)
        gens[i].name = new_gen_names[i];
    std::vector<std::string> prec;
    for (int gi : precedence_)
        prec.push_back(gens[gi].name);
    Presentation p(new_name, gens, ring_, prec);
    for (const auto &r : rewrites_)
        p.add_rewrite(r.lhs, r.rhs);
    for (const auto &t : torsion_)
        p.add_torsion(t.modulus, t.monomial);
    return p;
}

/******** Monomial arithmetic ********/

std::optional<std::pair<int, Monomial>> Presentation::mono_mul(const Monomial &a,
                                                               const Monomial &b) const {
    Monomial r = a;
    for (int i = 0; i < (int)gens_.size(); ++i) {
        r.e[i] += b.e[i];
        if (gens_[i].odd() && r.e[i] > 1)
            return std::nullopt; // odd generator squared
    }
    // Koszul sign: each odd letter of b moves left past the odd letters of a
    // that sit later in the normal ordering.
    int transpositions = 0;
    for (int ra = 0; ra < (int)precedence_.size(); ++ra) {
        int ga = precedence_[ra];
        if (!gens_[ga].odd() || a.e[ga] == 0)
            continue;
        for (int rb = 0; rb < ra; ++rb) {
            int gb = precedence_[rb];
            if (gens_[gb].odd() && b.e[gb] > 0)
                ++transpositions;
        }
    }
    return std::make_pair(transpositions % 2 == 0 ? 1 : -1, r);
}

bool Presentation::divides(const Monomial &a, const Monomial &b) {
    for (size_t i = 0; i < a.e.size(); ++i)
        if (a.e[i] > b.e[i])
            return false;
    return true;
}

Monomial Presentation::quotient(const Monomial &b, const Monomial &a) {
    Monomial r = b;
    for (size_t i = 0; i < a.e.size(); ++i)
        r.e[i] -= a.e[i];
    return r;
}

bool Presentation::monomial_less(const Monomial &a, const Monomial &b) const {
    long da = degree(a), db = degree(b);
    if (da != db)
        return da < db;
    for (int gi : precedence_) {
        if (a.e[gi] != b.e[gi])
            return a.e[gi] < b.e[gi];
    }
    return false;
}

/******** Normal form ********/

Element Presentation::from_monomial(const Monomial &m, const Rat &c) const {
    Element r;
    if (c != 0)
        r.terms[m] = c;
    return normal_form(r);
}

Element Presentation::from_int(const Rat &c) const { return from_monomial(unit(), c); }

Element Presentation::gen_element(const std::string &name) const {
    int gi = gen_index(name);
    if (gi < 0)
        throw usage_error("unknown generator '" + name + "'");
    return from_monomial(gen_monomial(gi));
}

Int Presentation::annihilator(const Monomial &m) const {
    Int g = 0;
    for (const auto &t : torsion_)
        if (divides(t.monomial, m))
            g = gcd(g, t.modulus);
    if (ring_.kind == RingKind::Zmod)
        g = (g == 0) ? ring_.modulus : gcd(g, ring_.modulus);
    if (ring_.kind == RingKind::Q && g != 0)
        g = 1; // any torsion kills the monomial over Q
    return g;
}

void Presentation::normalize_coeffs(Element &x) const {
    for (auto it = x.terms.begin(); it != x.terms.end();) {
        Rat &c = it->second;
        if (ring_.kind != RingKind::Q && c.get_den() != 1)
            throw usage_error("non-integer coefficient over " + ring_.str());
        Int g = annihilator(it->first);
        if (g == 1) {
            it = x.terms.erase(it);
            continue;
        }
        if (g > 1)
            c = Rat(mod_residue(c.get_num(), g));
        if (c == 0)
            it = x.terms.erase(it);
        else
            ++it;
    }
}

Element Presentation::normal_form(const Element &x) const {
    Element cur = x;
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = cur.terms.begin(); it != cur.terms.end(); ++it) {
            const Monomial &m = it->first;
            for (const auto &rule : rewrites_) {
                if (!divides(rule.lhs, m))
                    continue;
                Monomial q = quotient(m, rule.lhs);
                auto sq = mono_mul(q, rule.lhs);
                Rat c = it->second * sq->first; // q * lhs = sign * m, never vanishes
                cur.terms.erase(it);
                for (const auto &[rm, rc] : rule.rhs.terms) {
                    auto sm = mono_mul(q, rm);
                    if (!sm)
                        continue;
                    Rat add = c * rc * sm->first;
                    Rat s = cur.terms[sm->second] + add;
                    if (s == 0)
                        cur.terms.erase(sm->second);
                    else
                        cur.terms[sm->second] = s;
                }
                changed = true;
                break;
            }
            if (changed)
                break;
        }
    }
    normalize_coeffs(cur);
    return cur;
}

Element Presentation::multiply(const Element &a, const Element &b) const {
    if (!a.terms.empty() && a.terms.begin()->first.e.size() != gens_.size())
        throw usage_error("left factor over a different presentation");
    if (!b.terms.empty() && b.terms.begin()->first.e.size() != gens_.size())
        throw usage_error("right factor over a different presentation");
    Element raw;
    for (const auto &[ma, ca] : a.terms)
        for (const auto &[mb, cb] : b.terms) {
            auto sm = mono_mul(ma, mb);
            if (!sm)
                continue;
            Rat add = ca * cb * sm->first;
            Rat s = raw.terms[sm->second] + add;
            if (s == 0)
                raw.terms.erase(sm->second);
            else
                raw.terms[sm->second] = s;
        }
    return normal_form(raw);
}

Element Presentation::power(const Element &a, int k) const {
    if (k < 0)
        throw usage_error("negative power");
    Element r = from_int(1);
    for (int i = 0; i < k; ++i)
        r = multiply(r, a);
    return r;
}

Element Presentation::scale(const Rat &c, const Element &a) const { return normal_form(c * a); }

bool Presentation::is_normal_form_monomial(const Monomial &m) const {
    for (const auto &rule : rewrites_)
        if (divides(rule.lhs, m))
            return false;
    return true;
}

/******** Graded piece enumeration ********/

std::vector<int> Presentation::effective_caps(const DegreeWindow &w) const {
    std::vector<int> caps(gens_.size());
    for (int i = 0; i < (int)gens_.size(); ++i) {
        auto ic = intrinsic_cap(i);
        caps[i] = ic ? *ic : w.cap_for(gens_[i].name);
    }
    return caps;
}

void Presentation::enumerate(const DegreeWindow &w, const std::vector<int> &caps,
                             std::vector<BasisEntry> &out) const {
    Monomial m = unit();
    // iterate over all exponent tuples below the caps
    auto rec = [&](auto &&self, int i) -> void {
        if (i == (int)gens_.size()) {
            if (!is_normal_form_monomial(m))
                return;
            Int ann = annihilator(m);
            if (ann == 1)
                return; // the monomial is zero
            out.push_back({m, ann});
            return;
        }
        for (int e = 0; e <= caps[i]; ++e) {
            m.e[i] = e;
            self(self, i + 1);
        }
        m.e[i] = 0;
    };
    rec(rec, 0);
    std::sort(out.begin(), out.end(), [&](const BasisEntry &a, const BasisEntry &b) {
        long da = degree(a.mon), db = degree(b.mon);
        if (da != db)
            return da < db;
        return monomial_less(a.mon, b.mon);
    });
    (void)w;
}

std::vector<BasisEntry> Presentation::window_basis(const DegreeWindow &w) const {
    std::vector<BasisEntry> out;
    enumerate(w, effective_caps(w), out);
    return out;
}

std::vector<Monomial> Presentation::window_words(const DegreeWindow &w) const {
    std::vector<int> caps = effective_caps(w);
    std::vector<Monomial> out;
    Monomial m = unit();
    auto rec = [&](auto &&self, int i) -> void {
        if (i == (int)gens_.size()) {
            out.push_back(m);
            return;
        }
        for (int e = 0; e <= caps[i]; ++e) {
            m.e[i] = e;
            self(self, i + 1);
        }
        m.e[i] = 0;
    };
    rec(rec, 0);
    return out;
}

GradedPiece Presentation::basis_in_degree(long d, const DegreeWindow &w) const {
    GradedPiece piece;
    std::vector<BasisEntry> all;
    std::vector<int> caps = effective_caps(w);
    enumerate(w, caps, all);
    for (auto &e : all)
        if (degree(e.mon) == d)
            piece.entries.push_back(e);

    // Completeness certificate.  If all generators of one degree sign are
    // intrinsically capped, the window caps on the opposite sign can be
    // compared against the resulting exponent bounds; otherwise we can only
    // report the enumeration as window-truncated.
    bool neg_capped = true, pos_capped = true, zero_capped = true;
    long neg_reach = 0, pos_reach = 0;
    for (int i = 0; i < (int)gens_.size(); ++i) {
        auto ic = intrinsic_cap(i);
        long dg = gens_[i].degree;
        if (dg < 0) {
            if (ic)
                neg_reach += (long)*ic * (-dg);
            else
                neg_capped = false;
        } else if (dg > 0) {
            if (ic)
                pos_reach += (long)*ic * dg;
            else
                pos_capped = false;
        } else if (!ic) {
            zero_capped = false;
        }
    }
    bool certified = false;
    if (zero_capped && neg_capped) {
        certified = true;
        for (int i = 0; i < (int)gens_.size(); ++i) {
            long dg = gens_[i].degree;
            if (dg <= 0 || intrinsic_cap(i))
                continue;
            long need = d + neg_reach; // e*dg <= d + neg_reach for any NF monomial of degree d
            long bound = need < 0 ? -1 : need / dg;
            if (caps[i] < bound)
                certified = false;
        }
    } else if (zero_capped && pos_capped) {
        certified = true;
        for (int i = 0; i < (int)gens_.size(); ++i) {
            long dg = gens_[i].degree;
            if (dg >= 0 || intrinsic_cap(i))
                continue;
            long need = pos_reach - d;
            long bound = need < 0 ? -1 : need / (-dg);
            if (caps[i] < bound)
                certified = false;
        }
    }
    piece.window_truncated = !certified;
    return piece;
}

/******** Parsing / rendering ********/

std::string Presentation::monomial_str(const Monomial &m) const {
    if ((int)m.e.size() != (int)gens_.size())
        throw usage_error("monomial over a different presentation");
    std::string s;
    for (int gi : precedence_) {
        if (m.e[gi] == 0)
            continue;
        if (!s.empty())
            s += "·";
        s += gens_[gi].name;
        if (m.e[gi] > 1)
            s += "^" + std::to_string(m.e[gi]);
    }
    return s.empty() ? "1" : s;
}

std::string Presentation::element_str(const Element &x) const {
    if (x.is_zero())
        return "0";
    // render by descending monomial order so leading terms come first
    std::vector<std::pair<Monomial, Rat>> terms(x.terms.begin(), x.terms.end());
    std::sort(terms.begin(), terms.end(),
              [&](const auto &a, const auto &b) { return monomial_less(b.first, a.first); });
    std::string s;
    for (const auto &[m, c] : terms) {
        Rat cc = c;
        bool neg = cc < 0;
        if (neg)
            cc = -cc;
        if (s.empty())
            s += neg ? "-" : "";
        else
            s += neg ? " - " : " + ";
        std::string ms = monomial_str(m);
        if (cc != 1)
            s += rat_str(cc) + (ms == "1" ? "" : "·");
        if (cc == 1 || ms != "1")
            s += ms;
    }
    return s;
}

namespace {
std::vector<std::string> split_factors(const std::string &s) {
    // separators: interpunct (UTF-8 c2 b7), '*', or '.'
    std::vector<std::string> parts;
    std::string cur;
    for (size_t i = 0; i < s.size(); ++i) {
        unsigned char c = s[i];
        if (c == 0xc2 && i + 1 < s.size() && (unsigned char)s[i + 1] == 0xb7) {
            parts.push_back(cur);
            cur.clear();
            ++i;
        } else if (c == '*' || c == '.') {
            parts.push_back(cur);
            cur.clear();
        } else if (!isspace(c)) {
            cur += (char)c;
        }
    }
    parts.push_back(cur);
    return parts;
}
} // namespace

Monomial Presentation::parse_monomial(const std::string &s) const {
    Monomial m = unit();
    if (s == "1" || s.empty())
        return m;
    for (const std::string &f : split_factors(s)) {
        if (f.empty())
            throw usage_error("empty factor in monomial '" + s + "'");
        std::string name = f;
        int exp = 1;
        auto caret = f.find('^');
        if (caret != std::string::npos) {
            name = f.substr(0, caret);
            std::string digits = f.substr(caret + 1);
            size_t pos = 0;
            try {
                exp = std::stoi(digits, &pos);
            } catch (...) {
                throw usage_error("bad exponent in '" + f + "'");
            }
            if (pos != digits.size())
                throw usage_error("bad exponent in '" + f + "'");
        }
        int gi = gen_index(name);
        if (gi < 0)
            throw usage_error("unknown generator '" + name + "' in monomial '" + s + "'");
        if (exp < 0)
            throw usage_error("negative exponent in '" + f + "'");
        m.e[gi] += exp;
        if (gens_[gi].odd() && m.e[gi] > 1)
            throw usage_error("odd generator '" + name + "' squared in '" + s + "'");
    }
    return m;
}

Element Presentation::parse_element(const std::string &s) const {
    // linear combinations like "3·c^2·v - w" or "-2 + v"
    Element r;
    std::string t;
    std::vector<std::pair<char, std::string>> chunks;
    char sign = '+';
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if ((c == '+' || c == '-') && !t.empty() && t.back() != '^') {
            chunks.push_back({sign, t});
            sign = c;
            t.clear();
        } else if (c == '+' || c == '-') {
            if (t.empty() && c == '-')
                sign = (sign == '-') ? '+' : '-';
        } else if (!isspace((unsigned char)c)) {
            t += c;
        }
    }
    if (!t.empty())
        chunks.push_back({sign, t});
    if (chunks.empty())
        return r;
    if (chunks.size() == 1 && chunks[0].second == "0")
        return r;
    for (auto &[sg, chunk] : chunks) {
        // optional leading coefficient factor
        auto factors = split_factors(chunk);
        Rat coef = 1;
        size_t start = 0;
        if (!factors.empty() && !factors[0].empty() &&
            (isdigit((unsigned char)factors[0][0]) || factors[0][0] == '/')) {
            coef = parse_rat(factors[0]);
            start = 1;
        }
        std::string mon;
        for (size_t i = start; i < factors.size(); ++i) {
            if (!mon.empty())
                mon += "·";
            mon += factors[i];
        }
        Monomial m = parse_monomial(mon);
        if (sg == '-')
            coef = -coef;
        Rat sum = r.terms[m] + coef;
        if (sum == 0)
            r.terms.erase(m);
        else
            r.terms[m] = sum;
    }
    return normal_form(r);
}

/******** Local confluence ********/

ConfluenceReport check_local_confluence(const Presentation &p, const DegreeWindow &w) {
    ConfluenceReport report;
    report.window = w.str();

    // enumerate window monomials without the NF restriction: peaks are
    // exactly the reducible ones
    std::vector<int> caps(p.generators().size());
    for (int i = 0; i < (int)p.generators().size(); ++i) {
        auto ic = p.intrinsic_cap(i);
        int window_cap = w.cap_for(p.generators()[i].name);
        // allow reducible monomials one step above the intrinsic cap so
        // pure-power peaks like c^{n+1} are themselves inspected
        caps[i] = ic ? std::max(*ic + 1, 1) : window_cap;
        if (p.generators()[i].odd())
            caps[i] = 1;
    }

    Monomial m{std::vector<int>(p.generators().size(), 0)};
    auto rec = [&](auto &&self, int i) -> void {
        if (i == (int)p.generators().size()) {
            // one-step reductions by every applicable rewrite rule
            std::vector<std::pair<std::string, Element>> reducts;
            for (size_t ri = 0; ri < p.rewrites().size(); ++ri) {
                const auto &rule = p.rewrites()[ri];
                if (!Presentation::divides(rule.lhs, m))
                    continue;
                Monomial q = Presentation::quotient(m, rule.lhs);
                auto sq = p.mono_mul(q, rule.lhs);
                Element one_step;
                for (const auto &[rm, rc] : rule.rhs.terms) {
                    auto sm = p.mono_mul(q, rm);
                    if (sm)
                        one_step = one_step + Rat(sq->first) * rc * Rat(sm->first) *
                                                  p.from_monomial(sm->second, 1);
                }
                reducts.push_back({"rule#" + std::to_string(ri), p.normal_form(one_step)});
            }
            // torsion overlap: m * (modulus) must also die along every rewrite path
            for (size_t ti = 0; ti < p.torsion().size(); ++ti) {
                const auto &t = p.torsion()[ti];
                if (!Presentation::divides(t.monomial, m))
                    continue;
                for (auto &[label, val] : reducts) {
                    Element scaled = p.normal_form(Rat(t.modulus) * val);
                    if (!scaled.is_zero())
                        report.failures.push_back(
                            {m, scaled, p.zero(), label + " vs torsion#" + std::to_string(ti)});
                }
            }
            if (reducts.size() >= 2)
                ++report.monomials_checked;
            for (size_t i1 = 0; i1 < reducts.size(); ++i1)
                for (size_t i2 = i1 + 1; i2 < reducts.size(); ++i2)
                    if (reducts[i1].second != reducts[i2].second)
                        report.failures.push_back({m, reducts[i1].second, reducts[i2].second,
                                                   reducts[i1].first + " vs " +
                                                       reducts[i2].first});
            return;
        }
        for (int e = 0; e <= caps[i]; ++e) {
            m.e[i] = e;
            self(self, i + 1);
        }
        m.e[i] = 0;
    };
    rec(rec, 0);
    return report;
}

} // namespace loopbv
