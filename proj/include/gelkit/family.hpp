#ifndef GELKIT_FAMILY_HPP
#define GELKIT_FAMILY_HPP

#include <string>

#include "gelkit/types.hpp"

namespace gelkit {

enum class FamilyKind { EL, ET, CU, ECR, ETEL };

// Estimator family. The empirical Cressie-Read members are indexed by gamma;
// EL, ET and CU are the gamma = -1, 0, 1 members with dedicated code paths.
// ECR(-1) and ECR(0) are defined by continuity and dispatch to EL and ET;
// ECR(1) runs the generic Newton path and must agree with CU's closed form
// to solver tolerance. ETEL uses ET weights inside a log-likelihood outer
// criterion.
struct FamilySpec {
    FamilyKind kind = FamilyKind::ET;
    double gamma = 0.0; // meaningful for kind == ECR only

    static FamilySpec el() { return {FamilyKind::EL, -1.0}; }
    static FamilySpec et() { return {FamilyKind::ET, 0.0}; }
    static FamilySpec cu() { return {FamilyKind::CU, 1.0}; }
    static FamilySpec etel() { return {FamilyKind::ETEL, 0.0}; }
    static FamilySpec ecr(double gamma) { return {FamilyKind::ECR, gamma}; }

    /// Family whose dual is solved in the inner problem (ETEL -> ET, and the
    /// two degenerate ECR limits resolve to their closed-form members).
    FamilySpec inner() const;

    std::string name() const;
    static FamilySpec parse(const std::string& text);

    bool operator==(const FamilySpec& other) const;
};

// Carrier function rho(xi), the tilting function tau(xi) = values as listed
// for each family (sign conventions cancel in the weight normalization), and
// tau'(xi). All take the resolved (inner) family.
double rho(const FamilySpec& family, double xi);
double tilt(const FamilySpec& family, double xi);
double tilt_deriv(const FamilySpec& family, double xi);

/// True when xi is inside the domain where rho is defined and finite.
bool in_domain(const FamilySpec& family, double xi);

} // namespace gelkit

#endif
