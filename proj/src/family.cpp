#include "gelkit/family.hpp"

#include <cmath>
#include <cstdio>

namespace gelkit {

namespace {

bool near(double a, double b) { return std::abs(a - b) < 1e-12; }

} // namespace

FamilySpec FamilySpec::inner() const {
    switch (kind) {
    case FamilyKind::ETEL:
        return et();
    case FamilyKind::ECR:
        if (near(gamma, -1.0)) return el();
        if (near(gamma, 0.0)) return et();
        return *this;
    default:
        return *this;
    }
}

std::string FamilySpec::name() const {
    switch (kind) {
    case FamilyKind::EL: return "el";
    case FamilyKind::ET: return "et";
    case FamilyKind::CU: return "cu";
    case FamilyKind::ETEL: return "etel";
    case FamilyKind::ECR: {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "ecr:%g", gamma);
        return buf;
    }
    }
    return "?";
}

FamilySpec FamilySpec::parse(const std::string& text) {
    if (text == "el") return el();
    if (text == "et") return et();
    if (text == "cu") return cu();
    if (text == "etel") return etel();
    const auto colon = text.find(':');
    if (colon != std::string::npos && text.substr(0, colon) == "ecr") {
        try {
            return ecr(std::stod(text.substr(colon + 1)));
        } catch (const std::exception&) {
            // fall through to the error below
        }
    }
    throw BadDesign("unknown family '" + text + "' (expected el, et, cu, etel or ecr:<gamma>)");
}

bool FamilySpec::operator==(const FamilySpec& other) const {
    if (kind != other.kind) return false;
    if (kind == FamilyKind::ECR) return gamma == other.gamma;
    return true;
}

double rho(const FamilySpec& family, double xi) {
    switch (family.kind) {
    case FamilyKind::EL:
        return std::log(1.0 - xi);
    case FamilyKind::ET:
    case FamilyKind::ETEL:
        return -std::exp(xi);
    case FamilyKind::CU:
        return -0.5 * (1.0 + xi) * (1.0 + xi);
    case FamilyKind::ECR: {
        const double g = family.gamma;
        return -std::pow(1.0 + g * xi, (g + 1.0) / g) / (g + 1.0);
    }
    }
    return 0.0;
}

double tilt(const FamilySpec& family, double xi) {
    switch (family.kind) {
    case FamilyKind::EL:
        return 1.0 / (1.0 - xi);
    case FamilyKind::ET:
    case FamilyKind::ETEL:
        return -std::exp(xi);
    case FamilyKind::CU:
        return -(1.0 + xi);
    case FamilyKind::ECR:
        return -std::pow(1.0 + family.gamma * xi, 1.0 / family.gamma);
    }
    return 0.0;
}

double tilt_deriv(const FamilySpec& family, double xi) {
    switch (family.kind) {
    case FamilyKind::EL:
        return 1.0 / ((1.0 - xi) * (1.0 - xi));
    case FamilyKind::ET:
    case FamilyKind::ETEL:
        return -std::exp(xi);
    case FamilyKind::CU:
        return -1.0;
    case FamilyKind::ECR: {
        const double g = family.gamma;
        return -std::pow(1.0 + g * xi, 1.0 / g - 1.0);
    }
    }
    return 0.0;
}

bool in_domain(const FamilySpec& family, double xi) {
    switch (family.kind) {
    case FamilyKind::EL:
        return 1.0 - xi > 0.0;
    case FamilyKind::ECR:
        if (family.gamma < 0.0) return 1.0 + family.gamma * xi > 0.0;
        return true;
    default:
        return true;
    }
}

} // namespace gelkit
