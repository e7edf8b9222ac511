#pragma once

#include <string>

#include "space.hpp"

namespace ucov::gallery {

FiniteSpace polygon(std::size_t n, double radius);

/// Regular hexagon of side 1 (circumradius 1) whose side a-b is absent.
/// `extra_per_side` adds equally spaced samples on the five retained sides.
FiniteSpace hexagon_ex72(std::size_t extra_per_side = 0);

/// hexagon_ex72 plus its center c and a vertical regular hexagon over the
/// segment a-c (that segment's interior unsampled), erected in the plane
/// spanned by a-c and the z-axis.
FiniteSpace hexagon_ex73(std::size_t extra_per_side = 0);

/// Stage-`stages` dyadic solenoid curve inside a torus of major radius
/// `major` and tube radius `minor`, sampled `samples_per_winding` times per
/// longitudinal turn.
FiniteSpace solenoid(unsigned stages, std::size_t samples_per_winding, double major, double minor);

/// Wedge of circles of radii 1, 1/2, ..., 1/circles.
FiniteSpace hawaiian(std::size_t circles, std::size_t samples);

/// Parses "name" or "name:p1,p2,...", e.g. "solenoid:2,64,4,1".
FiniteSpace by_spec(const std::string& spec);

}  // namespace ucov::gallery
