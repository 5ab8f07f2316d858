#pragma once

#include "detbounds/errors.hpp"
#include "detbounds/rational.hpp"
#include "detbounds/polynomial.hpp"
#include "detbounds/matrix.hpp"
#include "detbounds/roots.hpp"
#include "detbounds/spectral.hpp"
#include "detbounds/sign_pattern.hpp"
#include "detbounds/bounds.hpp"
#include "detbounds/constructors.hpp"
#include "detbounds/envelope.hpp"
#include "detbounds/search.hpp"
#include "detbounds/verify.hpp"
