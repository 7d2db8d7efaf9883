#pragma once

#include "tspectra/dispatch.hpp"
#include "tspectra/eigensolver.hpp"
#include "tspectra/errors.hpp"
#include "tspectra/expansion.hpp"
#include "tspectra/linalg.hpp"
#include "tspectra/matrix.hpp"
#include "tspectra/mpfloat.hpp"
#include "tspectra/ordering.hpp"
#include "tspectra/parallel.hpp"
#include "tspectra/precision.hpp"
#include "tspectra/reconstruction.hpp"
#include "tspectra/scalar.hpp"
#include "tspectra/symbol.hpp"
#include "tspectra/toeplitz.hpp"
