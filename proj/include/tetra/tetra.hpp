#ifndef TETRA_TETRA_HPP
#define TETRA_TETRA_HPP

#include <tetra/complex.hpp>
#include <tetra/ecalle_eval.hpp>
#include <tetra/error.hpp>
#include <tetra/format.hpp>
#include <tetra/iteration_api.hpp>
#include <tetra/limit_methods.hpp>
#include <tetra/mp_real.hpp>
#include <tetra/polynomial.hpp>
#include <tetra/power_series.hpp>
#include <tetra/rational.hpp>
#include <tetra/series_engine.hpp>

#endif
