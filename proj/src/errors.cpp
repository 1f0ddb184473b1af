#include "magchain/errors.hpp"

namespace magchain {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidParameter: return "invalid-parameter";
        case ErrorKind::SingularEvaluation: return "singular-evaluation";
        case ErrorKind::ConstraintFailure: return "constraint-failure";
        case ErrorKind::NonConvergence: return "non-convergence";
        case ErrorKind::BoundaryLayerDomain: return "boundary-layer-domain";
        case ErrorKind::DivergentFunctional: return "divergent-functional";
        case ErrorKind::NumericalFailure: return "numerical-failure";
        case ErrorKind::Io: return "io-error";
    }
    return "unknown";
}

}  // namespace magchain
