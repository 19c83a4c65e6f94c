#pragma once

#include "riemdiff/constructions.hpp"
#include "riemdiff/definiteness.hpp"
#include "riemdiff/distance.hpp"
#include "riemdiff/domain.hpp"
#include "riemdiff/errors.hpp"
#include "riemdiff/linalg.hpp"
#include "riemdiff/mapping.hpp"
#include "riemdiff/metric.hpp"
#include "riemdiff/path.hpp"
#include "riemdiff/plots.hpp"
#include "riemdiff/quadrature.hpp"
#include "riemdiff/serialize.hpp"
#include "riemdiff/space.hpp"
