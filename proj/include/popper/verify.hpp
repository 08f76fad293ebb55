#pragma once

#include <iosfwd>

namespace popper {

/// Runs the cross-module invariant suite: normalization and Fourier
/// consistency of the state, the closed-form identities and orderings, the
/// oracle/limit agreements, and the scenario-level directions. One line per
/// check goes to `diag`; returns the number of failed checks.
int run_verification(std::ostream& diag);

} // namespace popper
