#pragma once

#include "specstruct/errors.hpp"
#include "specstruct/poset.hpp"
#include "specstruct/evaluator.hpp"
#include "specstruct/refinement.hpp"
#include "specstruct/contracts.hpp"
#include "specstruct/game.hpp"
#include "specstruct/text_format.hpp"
#include "specstruct/commands.hpp"
