#include "sgred/types.hpp"

namespace sgred {

const char* errc_name(errc c) {
    switch (c) {
        case errc::division_by_singular_jet: return "DivisionBySingularJet";
        case errc::domain_error: return "DomainError";
        case errc::degenerate_jet: return "DegenerateJet";
        case errc::invalid_sigma: return "InvalidSigma";
        case errc::root_finding_failure: return "RootFindingFailure";
        case errc::singular_point: return "SingularPoint";
        case errc::singular_locus: return "SingularLocus";
        case errc::singular_value: return "SingularValue";
        case errc::coefficient_pole: return "CoefficientPole";
        case errc::guard_violation: return "GuardViolation";
        case errc::branch_ambiguity: return "BranchAmbiguity";
        case errc::constraint_unsatisfiable: return "ConstraintUnsatisfiable";
        case errc::degenerate_time_functions: return "DegenerateTimeFunctions";
        case errc::missing_antiderivative: return "MissingAntiderivative";
        case errc::zero_wronskian: return "ZeroWronskian";
        case errc::pole_at_sample: return "PoleAtSample";
        case errc::chain_rule_singularity: return "ChainRuleSingularity";
        case errc::step_size_underflow: return "StepSizeUnderflow";
        case errc::tolerance_not_met: return "ToleranceNotMet";
        case errc::out_of_range: return "OutOfRange";
        case errc::config_error: return "ConfigError";
    }
    return "UnknownError";
}

}  // namespace sgred
