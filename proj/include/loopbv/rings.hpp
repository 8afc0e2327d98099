#ifndef LOOPBV_RINGS_HPP
#define LOOPBV_RINGS_HPP

#include <gmpxx.h>

#include <stdexcept>
#include <string>

namespace loopbv {

using Int = mpz_class;
using Rat = mpq_class;

// Bad input / misuse of an operation contract. CLI maps this to exit code 2.
struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A result could not be certified within the configured degree window.
struct window_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class RingKind { Z, Q, Zmod };

// Coefficient ring of a presentation: exact integers, rationals, or Z/m.
// Q and Z/m instances are produced by functorial coefficient change.
struct CoeffRing {
    RingKind kind = RingKind::Z;
    Int modulus = 0; // only for Zmod, >= 1

    static CoeffRing integers() { return {RingKind::Z, 0}; }
    static CoeffRing rationals() { return {RingKind::Q, 0}; }
    static CoeffRing mod(const Int &m);

    bool operator==(const CoeffRing &o) const { return kind == o.kind && modulus == o.modulus; }
    bool operator!=(const CoeffRing &o) const { return !(*this == o); }

    std::string str() const;
    // accepts "Z", "Q", "Z/<m>", "Zm:<m>"
    static CoeffRing parse(const std::string &s);
};

Int binomial(long n, long k);
Int gcd(const Int &a, const Int &b);

// (-1)^d for a (possibly negative) degree d
inline int sign_pow(long d) { return (d % 2 == 0) ? 1 : -1; }

// canonical residue in [0, m)
Int mod_residue(const Int &a, const Int &m);

std::string int_str(const Int &v);
std::string rat_str(const Rat &v);
Int parse_int(const std::string &s);
Rat parse_rat(const std::string &s);

} // namespace loopbv

#endif
