#pragma once

#include "toricchow/intlin.hpp"
#include "toricchow/fgab.hpp"
#include "toricchow/fancomb.hpp"
#include "toricchow/stacky.hpp"
#include "toricchow/polynomial.hpp"
#include "toricchow/lattice_quotient.hpp"
#include "toricchow/chowring.hpp"
#include "toricchow/orbifold.hpp"
#include "toricchow/io.hpp"
