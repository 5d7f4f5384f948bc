#pragma once

#include <map>
#include <string>

namespace seqguard {

struct PredicateEvaluation {
    bool value = false;
    double confidence = 1.0; // in [0, 1]
};

// Evaluator output for one step. Keys must be a subset of the candidate
// set; candidates omitted by a delta-style evaluator are treated as
// unchanged by the tracker.
using EvaluationResult = std::map<std::string, PredicateEvaluation>;

} // namespace seqguard
