#ifndef RRLPI_RRLPI_HPP
#define RRLPI_RRLPI_HPP

#include "rrlpi/core.hpp"
#include "rrlpi/graph.hpp"
#include "rrlpi/eigensolver.hpp"
#include "rrlpi/estimators.hpp"
#include "rrlpi/penalty.hpp"
#include "rrlpi/partition.hpp"
#include "rrlpi/enumeration.hpp"
#include "rrlpi/metrics.hpp"
#include "rrlpi/rng.hpp"
#include "rrlpi/synth.hpp"
#include "rrlpi/theory.hpp"
#include "rrlpi/io.hpp"
#include "rrlpi/image.hpp"

#endif
