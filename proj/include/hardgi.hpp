#pragma once

#include "hardgi/bench.hpp"
#include "hardgi/canon.hpp"
#include "hardgi/cfi.hpp"
#include "hardgi/digest.hpp"
#include "hardgi/formula.hpp"
#include "hardgi/gf2.hpp"
#include "hardgi/graph.hpp"
#include "hardgi/graph_io.hpp"
#include "hardgi/pipeline.hpp"
#include "hardgi/rng.hpp"
#include "hardgi/sampler.hpp"
#include "hardgi/version.hpp"
#include "hardgi/xorsat.hpp"
