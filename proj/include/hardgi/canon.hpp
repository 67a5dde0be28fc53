#pragma once

#include "hardgi/canon/brute.hpp"
#include "hardgi/canon/consistency.hpp"
#include "hardgi/canon/ir.hpp"
#include "hardgi/canon/partition.hpp"
#include "hardgi/canon/refine.hpp"
#include "hardgi/canon/wl.hpp"
