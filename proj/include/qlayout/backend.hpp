#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include "qlayout/encode.hpp"
#include "qlayout/exhaustive.hpp"

namespace qlayout {

enum class SatStatus { sat, unsat, timeout };

std::string to_string(SatStatus status);

struct SolveOutcome {
    SatStatus status = SatStatus::timeout;
    std::optional<Assignment> model;  ///< present iff status == sat
    double wall_time = 0.0;           ///< seconds
};

/// Launch failures, unparsable output, or a solver-reported error.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class BackendKind { external, internal };

struct Backend {
    BackendKind kind = BackendKind::external;
    std::string command;          ///< shell command reading SMT-LIB2 on stdin
    double timeout_seconds = 0;   ///< per check; 0 disables the limit
    SearchLimits limits;          ///< internal backend only

    static Backend external(std::string command = {}, double timeout_seconds = 0);
    static Backend internal(SearchLimits limits = {});
    /// "internal", "z3", or any other text taken as an external command line.
    static Backend from_spec(const std::string& spec, double timeout_seconds = 0);
};

/// $QLAYOUT_SMT_SOLVER when set and non-empty, otherwise "z3 -in".
std::string default_solver_command();

struct ProcessResult {
    int exit_status = 0;
    bool timed_out = false;
    std::string output;
};

/// Runs `command` through /bin/sh, feeding `input` on stdin and collecting
/// stdout. The whole process group is killed when the timeout expires.
ProcessResult run_process(const std::string& command, const std::string& input, double timeout_seconds);

/// Parses a (get-model) response: one (define-fun name () Sort value) per
/// variable. Unknown names are ignored; a missing variable throws SolverError.
Assignment parse_model(const std::string& text, const VarTable& vars);

/// Decides satisfiability of `cs`. Sat models are checked against every
/// clause before being returned.
SolveOutcome check(const ConstraintSystem& cs, const Backend& backend);

}  // namespace qlayout
