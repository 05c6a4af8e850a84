#pragma once

#include <string>
#include <vector>

#include "pathsum/rwa.hpp"

namespace pathsum::presets {

// Drive settings for the figure reproductions (omega = 1 units).
DriveSpec fig1a();  // static bias and tunneling, no drive
DriveSpec fig1b();  // transverse cosine drive, Delta(t) = 0.5 cos(w t)
DriveSpec fig1c();  // static tunneling with a strong first-harmonic bias drive
DriveSpec fig1d();  // two longitudinal and two transverse harmonics, eps0 = 10
DriveSpec fig2a();  // eps0 = 1, Delta_1 = 3
DriveSpec fig2d();  // eps0 = 1, A1 = 13, A3 = 18, Delta = 1.5
DriveSpec fig2g();  // eps0 = 1, A1 = 13, Delta_0..3 = 1.5
DriveSpec fig3a();  // sweep template: A1, A2 over [-40, 40], eps0 = 1, Delta = 1
DriveSpec fig4a();  // sweep template: A1, A2, eps0 = 1.05, Delta = 0.25
DriveSpec weak_resonant();  // Delta_{+-1} = 0.1, eps0 = -1: |J_1| = 0.05 on resonance

std::vector<std::string> names();
DriveSpec by_name(const std::string& name);

SweepSpec fig3a_sweep(int res1 = 81, int res2 = 81);
SweepSpec fig4a_sweep(int res1 = 81, int res2 = 81);

}  // namespace pathsum::presets
