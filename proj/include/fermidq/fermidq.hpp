#pragma once

#include "fermidq/error.hpp"
#include "fermidq/grassmann.hpp"
#include "fermidq/star.hpp"
#include "fermidq/algebra_operator.hpp"
#include "fermidq/tolerances.hpp"
#include "fermidq/spectral.hpp"
#include "fermidq/brackets.hpp"
#include "fermidq/states.hpp"
#include "fermidq/fock.hpp"
#include "fermidq/expression.hpp"
#include "fermidq/sampling.hpp"
#include "fermidq/scenario.hpp"
#include "fermidq/verify.hpp"
