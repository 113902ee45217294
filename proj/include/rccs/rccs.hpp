#pragma once

#include "rccs/admissibility.hpp"
#include "rccs/constructor.hpp"
#include "rccs/error.hpp"
#include "rccs/extender.hpp"
#include "rccs/forks.hpp"
#include "rccs/oracle.hpp"
#include "rccs/prob_space.hpp"
#include "rccs/rational.hpp"
