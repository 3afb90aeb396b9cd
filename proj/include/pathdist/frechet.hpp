#pragma once

#include "pathdist/geometry.hpp"

namespace pathdist {

/// Absolute tolerance used for all bisection searches unless overridden (meters).
inline constexpr double kDefaultTolerance = 1e-3;

/// True iff the Fréchet distance between f and g is at most eps.
///
/// Propagates reachable intervals through the free-space diagram of f x g
/// (one cell per segment pair). Consecutive duplicate points are collapsed
/// first; a single-point curve is handled as a constant curve.
bool frechet_decision(const PolyLine& f, const PolyLine& g, double eps);

/// Fréchet distance to within tol, by bisection on frechet_decision between
/// the endpoint lower bound and the largest vertex-to-vertex distance.
double frechet_distance(const PolyLine& f, const PolyLine& g, double tol = kDefaultTolerance);

/// Discrete Fréchet distance over the vertex sequences (coupling DP).
/// Upper-bounds the continuous distance.
double discrete_frechet(const PolyLine& f, const PolyLine& g);

}  // namespace pathdist
