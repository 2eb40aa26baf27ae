#pragma once

#include <cstdint>

#include "prhpg/model.hpp"

namespace prhpg {

// Built-in benchmark families. All generators are deterministic: the same
// parameters (including the seed) reproduce the same model bit for bit.

// Scalar system A(p) = a0 + a1*p, B(p) = b on [0, 1], hat basis on the two
// endpoints. The defaults put part of the domain open-loop unstable.
struct ScalarHatParams {
  double a0 = 0.2;
  double a1 = 1.3;
  double b = 1.0;
};
PolytopicModel make_scalar_hat(const ScalarHatParams& params = {});

// Mass-spring-damper chain discretized by forward Euler, with stiffness and
// damping scheduled over a box. The default damping range dips below zero,
// so part of the domain is open-loop unstable. One cart gives n = 2, two
// coupled carts give n = 4; the input pushes the first cart.
struct MsdParams {
  int parameter_dims = 2;  // 1: stiffness only; 2: stiffness and damping
  int knots_per_dim = 3;
  int carts = 1;
  double mass = 1.0;
  double dt = 0.1;
  double stiffness_lo = 1.0;
  double stiffness_hi = 4.0;
  double damping_lo = -0.3;
  double damping_hi = 0.5;
  double fixed_damping = 0.2;       // when parameter_dims == 1
  double coupling_stiffness = 2.0;  // when carts == 2
  double coupling_damping = 0.3;
};
PolytopicModel make_msd_qlpv(const MsdParams& params = {});

// Seeded random vertices around a stabilizable nominal system on [0, 1]^d
// with a two-knot hat basis per dimension. The perturbation magnitude is
// halved until the open-loop blend is stable on a scan grid, so the zero
// gain is jointly stabilizing by construction.
struct RandomPolytopicParams {
  int n = 3;
  int m = 2;
  int d = 1;
  double nominal_radius = 0.9;
  double perturbation = 0.05;
  std::uint64_t seed = 1;
};
PolytopicModel make_random_polytopic(const RandomPolytopicParams& params = {});

}  // namespace prhpg
