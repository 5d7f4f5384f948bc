#pragma once

// Umbrella header for the runtime safety-guard engine.

#include "seqguard/adapters.hpp"
#include "seqguard/audit.hpp"
#include "seqguard/book.hpp"
#include "seqguard/compiler.hpp"
#include "seqguard/config.hpp"
#include "seqguard/embedding.hpp"
#include "seqguard/engine.hpp"
#include "seqguard/errors.hpp"
#include "seqguard/evaluation.hpp"
#include "seqguard/formula.hpp"
#include "seqguard/http_adapters.hpp"
#include "seqguard/index.hpp"
#include "seqguard/interaction.hpp"
#include "seqguard/metrics.hpp"
#include "seqguard/policy.hpp"
#include "seqguard/referee.hpp"
#include "seqguard/threat.hpp"
#include "seqguard/trace.hpp"
#include "seqguard/tracker.hpp"
#include "seqguard/verifier.hpp"
