#include "loopbv/rings.hpp"

namespace loopbv {

CoeffRing CoeffRing::mod(const Int &m) {
    if (m < 1)
        throw usage_error("Z/m requires m >= 1, got " + m.get_str());
    return {RingKind::Zmod, m};
}

std::string CoeffRing::str() const {
    switch (kind) {
    case RingKind::Z:
        return "Z";
    case RingKind::Q:
        return "Q";
    case RingKind::Zmod:
        return "Z/" + modulus.get_str();
    }
    return "?";
}

CoeffRing CoeffRing::parse(const std::string &s) {
    if (s == "Z")
        return integers();
    if (s == "Q")
        return rationals();
    if (s.rfind("Z/", 0) == 0)
        return mod(parse_int(s.substr(2)));
    if (s.rfind("Zm:", 0) == 0)
        return mod(parse_int(s.substr(3)));
    throw usage_error("unknown coefficient ring '" + s + "' (expected Z, Q, or Zm:<m>)");
}

Int binomial(long n, long k) {
    if (k < 0 || k > n)
        return 0;
    Int r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
    return r;
}

Int gcd(const Int &a, const Int &b) {
    Int r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

Int mod_residue(const Int &a, const Int &m) {
    Int r;
    mpz_mod(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()); // always in [0, m)
    return r;
}

std::string int_str(const Int &v) { return v.get_str(); }

std::string rat_str(const Rat &v) {
    if (v.get_den() == 1)
        return v.get_num().get_str();
    return v.get_num().get_str() + "/" + v.get_den().get_str();
}

Int parse_int(const std::string &s) {
    if (s.empty())
        throw usage_error("empty integer literal");
    try {
        return Int(s);
    } catch (const std::invalid_argument &) {
        throw usage_error("bad integer literal '" + s + "'");
    }
}

Rat parse_rat(const std::string &s) {
    if (s.empty())
        throw usage_error("empty number literal");
    try {
        Rat r(s);
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument &) {
        throw usage_error("bad number literal '" + s + "'");
    }
}

} // namespace loopbv
