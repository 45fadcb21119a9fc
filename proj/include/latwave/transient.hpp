#pragma once

// Direct time integration of the forced lattice on a clamped square of node
// indices |m|, |n| <= half_size. Leapfrog (velocity-Verlet) scheme: u lives
// on integer steps, v on half steps. The drive is complex, P * exp(i w t) at
// one node, so demodulated snapshots carry amplitude and phase directly.
//
// Two sweeps are provided for the hot kernel: a plain reference that goes
// through bond_forces()/acceleration() node by node, and an expanded-stencil
// OpenMP version. They produce identical states and are compared in tests
// and in the benchmark target.

#include <string>
#include <vector>

#include "latwave/lattice.hpp"

namespace latwave {

struct SimConfig {
  int half_size = 0;
  double dt = 0.02;
  double t_end = 0.0;
  double drive_omega = 0.0;
  Displacement2 drive_P;
  NodeIndex drive_node{0, 0};
  std::vector<double> snapshot_times;
};

/// Leapfrog stability bound 2/omega_max = 2/sqrt(6).
double stability_dt_limit();

/// Longitudinal long-wave speed sqrt(9/8) (shear is sqrt(3/8)); used for
/// wavefront containment estimates.
double longitudinal_speed();

/// Throws ValidationError on hard errors (dt out of the stability bound,
/// drive node not interior, bad times). Returns a human-readable warning if
/// the wavefront is not strictly contained until t_end, empty otherwise.
std::string validate(const SimConfig& cfg);

class SimState {
public:
  SimState(const SimConfig& cfg);

  /// Load synchronized initial data (u, v at the same instant) and stagger
  /// the velocity back half a step for leapfrog.
  void set_initial(const std::vector<Displacement2>& u0, const std::vector<Displacement2>& v0,
                   const SimConfig& cfg, bool parallel = true);

  int half_size() const { return half_; }
  int side() const { return 2 * half_ + 1; }
  double time() const { return t_; }
  long step_count() const { return steps_; }

  std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(n + half_) * side() + (m + half_);
  }
  const std::vector<Displacement2>& displacement() const { return u_; }
  /// Velocity synchronized to time() (reconstructed from the staggered one).
  std::vector<Displacement2> synchronized_velocity(const SimConfig& cfg,
                                                   bool parallel = true) const;

  void step(const SimConfig& cfg, bool parallel = true);
  void step_reference(const SimConfig& cfg); // serial, via lattice-core ops

  /// Demodulated complex amplitude u * exp(-i drive_omega * t).
  Displacement2 amplitude_at(int m, int n, const SimConfig& cfg) const;

private:
  template <bool Parallel>
  void sweep(const SimConfig& cfg);
  void check_stability() const;

  int half_ = 0;
  double t_ = 0.0;
  long steps_ = 0;
  std::vector<Displacement2> u_, v_, scratch_;
};

/// Demodulated amplitudes of the whole grid at one instant.
struct AmplitudeSnapshot {
  double t = 0.0;
  int half_size = 0;
  std::vector<Displacement2> amplitude;

  int side() const { return 2 * half_size + 1; }
  std::size_t index(int m, int n) const {
    return static_cast<std::size_t>(n + half_size) * side() + (m + half_size);
  }
  const Displacement2& at(int m, int n) const { return amplitude[index(m, n)]; }
};

struct SimResult {
  std::vector<AmplitudeSnapshot> snapshots;
  std::vector<double> trace_times;            // drive-node amplitude samples
  std::vector<Displacement2> trace_amplitude;
};

/// Integrate from rest to t_end, snapshotting at the requested times
/// (nearest step). The drive-node amplitude is traced every `trace_stride`
/// steps. Throws NumericalError if any |u| exceeds 1e12.
SimResult run(const SimConfig& cfg, bool parallel = true, int trace_stride = 5);

/// |U| interpolated on a circle about the source, uniform in angle.
struct RayProfile {
  double radius = 0.0;
  std::vector<double> angle;     // n_angles values in (-pi, pi]
  std::vector<double> magnitude;
};
RayProfile ray_profile(const AmplitudeSnapshot& snap, double radius, int n_angles);

/// Kinetic plus bond energy with velocities synchronized to state.time().
double total_energy(const SimState& state, const SimConfig& cfg, bool parallel = true);

} // namespace latwave
