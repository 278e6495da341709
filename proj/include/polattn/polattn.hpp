// Convenience header pulling in the whole public API.
#pragma once

#include "polattn/core.hpp"
#include "polattn/csv.hpp"
#include "polattn/election.hpp"
#include "polattn/errors.hpp"
#include "polattn/experiments.hpp"
#include "polattn/extensions.hpp"
#include "polattn/matrix.hpp"
#include "polattn/news.hpp"
#include "polattn/ri_solver.hpp"
#include "polattn/scenario.hpp"
#include "polattn/scenario_io.hpp"
#include "polattn/technology.hpp"
