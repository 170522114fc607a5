#pragma once

#include "qsmag/commands.hpp"
#include "qsmag/critical.hpp"
#include "qsmag/error.hpp"
#include "qsmag/model.hpp"
#include "qsmag/oracle.hpp"
#include "qsmag/output.hpp"
#include "qsmag/parallel.hpp"
#include "qsmag/polynomial.hpp"
#include "qsmag/precision.hpp"
#include "qsmag/qs_frobenius.hpp"
#include "qsmag/ritz.hpp"
