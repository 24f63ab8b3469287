#pragma once

#include "edp/automaton.hpp"
#include "edp/cnf.hpp"
#include "edp/decoder.hpp"
#include "edp/dimacs.hpp"
#include "edp/encoder.hpp"
#include "edp/external.hpp"
#include "edp/oracle.hpp"
#include "edp/outcome.hpp"
#include "edp/rup.hpp"
#include "edp/sequence.hpp"
#include "edp/solver.hpp"
#include "edp/varmap.hpp"
