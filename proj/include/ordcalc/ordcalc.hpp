#pragma once

#include "ordcalc/abelian.hpp"
#include "ordcalc/calculus.hpp"
#include "ordcalc/decide.hpp"
#include "ordcalc/freegroup.hpp"
#include "ordcalc/membership.hpp"
#include "ordcalc/refutation.hpp"
#include "ordcalc/rightorder.hpp"
#include "ordcalc/sampling.hpp"
#include "ordcalc/serialize.hpp"
#include "ordcalc/term.hpp"
