#pragma once

#include "geophase/core_model.hpp"
#include "geophase/echo_protocol.hpp"
#include "geophase/errors.hpp"
#include "geophase/exact_solver.hpp"
#include "geophase/harness.hpp"
#include "geophase/ode_oracle.hpp"
#include "geophase/perturbation.hpp"
