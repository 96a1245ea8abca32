#pragma once

#include "multi_index.hpp"
#include "hermite.hpp"
#include "expansion.hpp"
#include "quadrature.hpp"
#include "symbols.hpp"
#include "pseudomult.hpp"
#include "byparts.hpp"
#include "estimates.hpp"
#include "io.hpp"
#include "cli.hpp"
