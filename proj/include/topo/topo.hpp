#pragma once

#include "topo/acoustics.hpp"
#include "topo/binlinalg.hpp"
#include "topo/complex.hpp"
#include "topo/dynamics.hpp"
#include "topo/embedding.hpp"
#include "topo/error.hpp"
#include "topo/homology.hpp"
#include "topo/io.hpp"
#include "topo/persistence.hpp"
#include "topo/sheaf_filter.hpp"
