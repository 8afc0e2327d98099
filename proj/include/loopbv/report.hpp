#ifndef LOOPBV_REPORT_HPP
#define LOOPBV_REPORT_HPP

#include <string>
#include <vector>

namespace loopbv {

// Counterexample certificate: which check failed, on which inputs, and the
// residual element that should have been zero.
struct Certificate {
    std::string check;
    std::vector<std::string> inputs;
    std::string residual;
    std::string note;
};

struct AuditReport {
    std::string window;
    std::vector<std::string> checks_run;
    long checked = 0;
    long truncated = 0; // work items outside a table-mode operator's domain
    std::vector<Certificate> failures;

    bool ok() const { return failures.empty(); }
    void merge(const AuditReport &other);
    std::string text() const;
};

} // namespace loopbv

#endif
