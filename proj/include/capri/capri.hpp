#pragma once

// Umbrella header.

#include "capri/capprofit.hpp"
#include "capri/core.hpp"
#include "capri/decomp.hpp"
#include "capri/errors.hpp"
#include "capri/gen.hpp"
#include "capri/highway.hpp"
#include "capri/itemset.hpp"
#include "capri/json_io.hpp"
#include "capri/lpkit.hpp"
#include "capri/numeric.hpp"
#include "capri/oracle.hpp"
#include "capri/report.hpp"
#include "capri/simplex.hpp"
#include "capri/suite.hpp"
#include "capri/swm.hpp"
#include "capri/treeprice.hpp"
