#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "acmt/torsion.hpp"

namespace acmt {

/// Components that can be nonzero in dimension 2n+1.
std::set<int> admissible_components(int n);

/// Named classes of the classification, with subset matching semantics:
/// a structure matches a class when its active set is contained in the
/// class's defining set.
struct NamedClass {
    std::string name;
    std::set<int> defining;
};
const std::vector<NamedClass>& named_classes();

struct TypeReport {
    std::set<int> active;
    std::map<int, double> norms;
    double threshold = 0.0; // absolute threshold applied to component norms
    std::vector<std::string> named_matches;
    bool dimension_admissible = true;
    std::string forbidden_by; // rule id, empty when allowed
};

/// Active set by relative threshold tol_rel * max(|xi|, tiny), named-class
/// matches, admissibility and the forbidden-catalog verdict.
TypeReport detect_type(const IntrinsicTorsion& xi, const AcmStructure& s, double tol_rel = 1e-8);

/// Type detection through the independent d eta / dF / Nijenhuis route.
struct CrossRouteReport {
    std::set<int> active;
    std::map<int, double> signals;
    double scale = 0.0;
    bool indeterminate = false; // the (10,11) extraction failed to fit the detectors
    std::string note;
};
CrossRouteReport cross_check_type(const AcmStructure& s, const PointEvaluation& pe,
                                  double tol_rel = 1e-8);

/// Catalog of strict types ruled out by the non-existence theorem.
struct ForbiddenCatalog {
    int n = 0;
    std::vector<std::set<int>> forbidden;  // deduplicated, sorted
    std::vector<std::string> provenance;   // rule id per entry (R1/R2/R3)
    std::map<std::string, int> rule_counts;
    bool rules_disjoint = false;
    int derived_count = 0;
    int paper_claim = 132;
    long paper_expression_value = 0; // 2^12 - (2^6 + 2^4*2^2 + 2^2)
    int dimension_inadmissible_count = 0; // entries impossible anyway at this n
};

/// Materialises the three rule families over strict types:
///   R1: {5,6} <= S <= {1,2,3,5,6,8,9,11}
///   R2: 6 in S <= {1,2,3,6,8,9,11} and S not<= {2,6,9}
///   R3: {5,7} <= S <= {2,5,7,9}
ForbiddenCatalog enumerate_forbidden(int n);

/// Rule id forbidding this strict type, or empty when allowed.
std::string forbidden_verdict(const ForbiddenCatalog& cat, const std::set<int>& strict_type);

enum class TheoremVerdict { NotApplicable, Consistent, Violation };
struct TheoremCheck {
    TheoremVerdict verdict = TheoremVerdict::NotApplicable;
    double product = 0.0; // d*eta * d*F(zeta)
};

/// For active sets inside {1,2,3,5,6,8,9,11,12} the theorem forces
/// d*eta * d*F(zeta) = 0 at the point.
TheoremCheck check_point_against_theorem(const TypeReport& report, const DerivedQuantities& dq,
                                         double tol = 1e-10);

} // namespace acmt
