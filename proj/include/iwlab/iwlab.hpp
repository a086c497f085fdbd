#pragma once

#include "iwlab/errors.hpp"
#include "iwlab/formulas.hpp"
#include "iwlab/group_ring.hpp"
#include "iwlab/lambda.hpp"
#include "iwlab/matrix.hpp"
#include "iwlab/module.hpp"
#include "iwlab/padic.hpp"
#include "iwlab/pgroup.hpp"
#include "iwlab/stabilization.hpp"
#include "iwlab/tate.hpp"
#include "iwlab/tower.hpp"
