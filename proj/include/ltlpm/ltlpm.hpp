#pragma once

#include "ltlpm/admissibility.hpp"
#include "ltlpm/decision.hpp"
#include "ltlpm/error.hpp"
#include "ltlpm/formula.hpp"
#include "ltlpm/knowledge.hpp"
#include "ltlpm/model.hpp"
#include "ltlpm/normal_form.hpp"
#include "ltlpm/parser.hpp"
#include "ltlpm/semantics.hpp"
