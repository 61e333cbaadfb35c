#pragma once

#include "acmt/classify.hpp"

namespace acmt {

struct IdentityResult {
    std::string id;
    enum class Verdict { Pass, Fail, NotApplicable } verdict = Verdict::NotApplicable;
    double residual = 0.0;
    double tolerance = 0.0;
    double scale = 0.0;
    std::string note; // gating reason for N/A, extra detail otherwise

    bool applicable() const { return verdict != Verdict::NotApplicable; }
    bool passed() const { return verdict == Verdict::Pass; }
};

struct IdentityOptions {
    bool optional_tier = false; // heavier exploratory identities, off by default
    bool richardson = true;     // high-accuracy finite differences
    double tol_factor = 100.0;  // tolerance = tol_factor * step^2 * scale
};

/// Evaluates the registered differential identities at one point. Gating by
/// active type happens inside; gated-out identities come back NotApplicable
/// with the reason, never silently dropped. Stencil failures also map to
/// NotApplicable with the error text.
std::vector<IdentityResult> run_identity_suite(const FrameModel& m, const AcmStructure& s,
                                               const ChartPoint& p,
                                               const IdentityOptions& opt = {});

} // namespace acmt
